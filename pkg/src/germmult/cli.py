"""Command-line front end: ``germmult <command> [options]``.

Every command prints either a text table or a JSON document holding the same
values; with a fixed seed and schedule the output is byte-identical.
Exit codes: 0 success or CONSISTENT / HYPOTHESIS_FAILED_AS_EXPECTED, 1 engine
error or CONFLICT, 2 usage error, 3 VIOLATION.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .blowup import kx_at_direction, odd_part, strict_transform_sample
from .cone import ConeDirection, link_membership, tangent_cone_hypersurface, tangent_cone_puiseux
from .corpus import named_germs
from .errors import EmptyIntersection, GermMultError, InvariantViolation, ParseError, SchemaError
from .germ import GermSpec, germ_load
from .invariance import CONSISTENT, HYPOTHESIS_FAILED, VIOLATION, paper_examples, verify_instance
from .mult import StabilitySchedule, cross_check
from .sphere import normalize

EXIT_OK, EXIT_ENGINE, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2, 3
COMMANDS = ("mult", "cone", "kx", "oddpart", "verify", "examples", "export")

GRAMMAR = """\
command grammar:
  germmult mult     --germ G [--frames N]
  germmult cone     --germ G
  germmult kx       --germ G --direction p1,p2[,p3]
  germmult oddpart  --germ G
  germmult verify   (--instance ID | --all)
  germmult examples [--list | --show ID]
  germmult export   --germ G [--per-radius N] --out FILE.csv
  common options: [--seed S] [--schedule k=v,...] [--out FILE] [--format text|json]

  G is a germ-spec JSON file or corpus:NAME (e.g. corpus:cusp).
  --schedule keys: s0, rho, K, theta, R, eta; values are rationals (1/8).
  The default seed comes from GERMMULT_SEED, else 0.

expression grammar (polynomials in germ files):
  expr   = term { ("+" | "-") term } ;
  term   = unary { ("*" | "/") unary } ;
  unary  = ("-" | "+") unary | power ;
  power  = atom [ ("^" | "**") unary ] ;
  atom   = integer | name | "(" expr ")" ;
  rationals are written p/q; powers are nonnegative integer constants.
"""


@dataclass(frozen=True)
class RunConfig:
    command: str
    germ: str | None
    instance: str | None
    frames: int
    seed: int
    schedule: StabilitySchedule
    out: Path | None
    format: str


class UsageError(Exception):
    pass


def _default_seed() -> int:
    text = os.environ.get("GERMMULT_SEED", "0")
    try:
        seed = int(text)
    except ValueError:
        raise UsageError(f"GERMMULT_SEED must be an integer, got {text!r}")
    return seed % 2**64


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="64-bit seed (default: GERMMULT_SEED or 0)")
    common.add_argument("--schedule", default=None, help="overrides such as K=14,theta=1/8")
    common.add_argument("--out", type=Path, default=None, help="write the output here instead of stdout")
    common.add_argument("--format", choices=("text", "json"), default="text")

    parser = argparse.ArgumentParser(
        prog="germmult",
        description="Multiplicity of hypersurface and plane-curve germs, and checks of its invariance.",
        epilog=GRAMMAR,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", metavar="command")
    p = sub.add_parser("mult", parents=[common], help="cross-check every multiplicity engine")
    p.add_argument("--germ", required=True)
    p.add_argument("--frames", type=int, default=3)
    p = sub.add_parser("cone", parents=[common], help="tangent cone and its components")
    p.add_argument("--germ", required=True)
    p = sub.add_parser("kx", parents=[common], help="k_X at a direction of the link")
    p.add_argument("--germ", required=True)
    p.add_argument("--direction", required=True, help="comma separated rationals")
    p = sub.add_parser("oddpart", parents=[common], help="the odd part of the link")
    p.add_argument("--germ", required=True)
    p = sub.add_parser("verify", parents=[common], help="verdict for a registry instance")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--instance")
    g.add_argument("--all", action="store_true")
    p = sub.add_parser("examples", parents=[common], help="list or show registry instances")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--list", action="store_true")
    g.add_argument("--show")
    p = sub.add_parser("export", parents=[common], help="CSV samples of the blown-up germ")
    p.add_argument("--germ", required=True)
    p.add_argument("--per-radius", type=int, default=8)
    return parser


def load_germ(ref: str) -> GermSpec:
    """A germ-spec file, or ``corpus:NAME`` for a named corpus germ."""
    if ref.startswith("corpus:"):
        name = ref.split(":", 1)[1]
        for g in named_germs():
            if g.name == name:
                return g
        raise UsageError(f"no corpus germ named {name!r}")
    path = Path(ref)
    if not path.exists():
        raise UsageError(f"germ file not found: {ref}")
    return germ_load(path)


def _parse_direction(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(p.strip()) for p in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad direction {text!r}: expected comma separated rationals")


# -- commands -------------------------------------------------------------------------


def cmd_mult(cfg: RunConfig, args) -> tuple[dict, int]:
    g = load_germ(cfg.germ)
    report = cross_check(g, cfg.frames, cfg.schedule, seed=cfg.seed)
    doc = report.to_dict()
    return doc, EXIT_OK if report.verdict == "OK" else EXIT_ENGINE


def cmd_cone(cfg: RunConfig, args) -> tuple[dict, int]:
    g = load_germ(cfg.germ)
    doc: dict = {"germ": g.name}
    if g.kind == "puiseux":
        doc["curve_directions"] = [list(d.vector) for d in tangent_cone_puiseux(g.curve)]
        if g.implicit is None:
            return doc, EXIT_OK
    doc["cone"] = tangent_cone_hypersurface(g.defining_poly()).to_dict(g.vars)
    return doc, EXIT_OK


def _cone_direction(g: GermSpec, p: tuple[Fraction, ...]) -> ConeDirection:
    f = g.defining_poly()
    if len(p) != f.nvars or not any(p):
        raise UsageError(f"direction must be a nonzero vector with {f.nvars} entries")
    tc = tangent_cone_hypersurface(f)
    exact = [i for i, c in enumerate(tc.components) if c.factor(p) == 0]
    u = normalize([float(x) for x in p])
    idx = exact[0] if len(exact) == 1 else link_membership(tc, u)
    if idx is None:
        raise UsageError(f"direction {list(map(str, p))} is not on the tangent cone")
    return ConeDirection(u, idx, exact=p)


def cmd_kx(cfg: RunConfig, args) -> tuple[dict, int]:
    g = load_germ(cfg.germ)
    d = _cone_direction(g, _parse_direction(args.direction))
    cert = kx_at_direction(g, d, cfg.schedule, seed=cfg.seed)
    return {"germ": g.name, **cert.to_dict()}, EXIT_OK


def cmd_oddpart(cfg: RunConfig, args) -> tuple[dict, int]:
    g = load_germ(cfg.germ)
    part = odd_part(g, cfg.schedule, seed=cfg.seed)
    return {"germ": g.name, **part.to_dict()}, EXIT_OK


def _verdict_code(conclusion: str) -> int:
    if conclusion == VIOLATION:
        return EXIT_VIOLATION
    return EXIT_OK if conclusion in (CONSISTENT, HYPOTHESIS_FAILED) else EXIT_ENGINE


def cmd_verify(cfg: RunConfig, args) -> tuple[dict, int]:
    registry = paper_examples()
    ids = sorted(registry) if args.all else [cfg.instance]
    for i in ids:
        if i not in registry:
            raise UsageError(f"unknown instance {i!r}; see `germmult examples --list`")
    verdicts = [verify_instance(registry[i], cfg.schedule, seed=cfg.seed) for i in ids]
    code = max(_verdict_code(v.conclusion) for v in verdicts)
    if len(verdicts) == 1:
        return verdicts[0].to_dict(), code
    return {"verdicts": [v.to_dict() for v in verdicts]}, code


def cmd_examples(cfg: RunConfig, args) -> tuple[dict, int]:
    registry = paper_examples()
    if args.show:
        if args.show not in registry:
            raise UsageError(f"unknown instance {args.show!r}")
        return registry[args.show].to_dict(), EXIT_OK
    return {
        "instances": [
            {"id": i, "claimed_theorem": inst.claimed_theorem, "expected": inst.expected.verdict}
            for i, inst in sorted(registry.items())
        ]
    }, EXIT_OK


def cmd_export(cfg: RunConfig, args) -> tuple[str, int]:
    g = load_germ(cfg.germ)
    try:
        cloud = strict_transform_sample(g, cfg.schedule.radii(), args.per_radius, seed=cfg.seed)
    except EmptyIntersection as exc:
        n = g.ambient_dim
        header = ",".join([f"u{i + 1}" for i in range(n)] + ["r", "tag"])
        return f"# EmptyIntersection: {exc}\n{header}\n", EXIT_OK
    return cloud.to_csv(), EXIT_OK


HANDLERS = {
    "mult": cmd_mult,
    "cone": cmd_cone,
    "kx": cmd_kx,
    "oddpart": cmd_oddpart,
    "verify": cmd_verify,
    "examples": cmd_examples,
    "export": cmd_export,
}


# -- rendering --------------------------------------------------------------------------


def _scalar(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    return str(v)


def render_text(doc, indent: int = 0) -> str:
    """Two-column rendering of a JSON-like document, nested blocks indented."""
    pad = "  " * indent
    lines = []
    if isinstance(doc, dict):
        width = max((len(str(k)) for k in doc), default=0)
        for k, v in doc.items():
            if isinstance(v, dict) or (isinstance(v, list) and v and isinstance(v[0], dict)):
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{str(k).ljust(width)}  {_scalar(v)}")
    elif isinstance(doc, list):
        for i, item in enumerate(doc):
            lines.append(f"{pad}- [{i}]")
            lines.append(render_text(item, indent + 1))
    else:
        lines.append(pad + _scalar(doc))
    return "\n".join(line for line in lines if line)


def render(doc, fmt: str) -> str:
    if isinstance(doc, str):
        return doc
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    return render_text(doc) + "\n"


# -- entry points ---------------------------------------------------------------------------


def _config(args) -> RunConfig:
    try:
        sched = StabilitySchedule.from_overrides(args.schedule)
    except ValueError as exc:
        raise UsageError(f"bad --schedule: {exc}")
    seed = _default_seed() if args.seed is None else args.seed % 2**64
    if getattr(args, "frames", 3) < 1:
        raise UsageError("--frames must be positive")
    return RunConfig(
        args.command,
        getattr(args, "germ", None),
        getattr(args, "instance", None),
        getattr(args, "frames", 3),
        seed,
        sched,
        args.out,
        args.format,
    )


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        sys.stderr.write(GRAMMAR)
        return EXIT_USAGE
    try:
        cfg = _config(args)
        doc, code = HANDLERS[cfg.command](cfg, args)
    except (UsageError, SchemaError, ParseError, InvariantViolation) as exc:
        sys.stderr.write(f"germmult: error: {exc}\n\n{GRAMMAR}")
        return EXIT_USAGE
    except GermMultError as exc:
        sys.stderr.write(f"germmult: {type(exc).__name__}: {exc}\n")
        return EXIT_ENGINE
    text = render(doc, cfg.format)
    if cfg.out is not None:
        cfg.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


def main() -> None:
    sys.exit(run())
