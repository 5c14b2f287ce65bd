"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 model/validation error, 3 runtime
(I/O) error. Wherever a level is expected, both 0-based indices and level
labels are accepted; pure integers are read as indices.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import __version__
from .aggregate import aggregate_axes, walk
from .document import load_model
from .errors import ModelError
from .model import RiskModel, RiskPosition, matrix_slice, violations
from .render import DEFAULT_THETA0, RenderSpec, render_matrix, render_polar
from .rules import lint_monotone, lint_rules


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # exit 1 on usage problems, not argparse's 2
        raise _UsageError(message)


def _level_ref(text: str) -> int | str:
    try:
        return int(text)
    except ValueError:
        return text


def _parse_set(pairs: Sequence[str] | None) -> dict[str, int | str]:
    sigma: dict[str, int | str] = {}
    for pair in pairs or []:
        axis, sep, level = pair.partition("=")
        if not sep or not axis:
            raise _UsageError(f"--set expects axis=level, got {pair!r}")
        sigma[axis] = _level_ref(level)
    return sigma


def _effective_sigma(
    model: RiskModel, pairs: Sequence[str] | None
) -> dict[str, int | str]:
    sigma: dict[str, int | str] = dict(model.default_slice or ())
    sigma.update(_parse_set(pairs))
    return sigma


def _parse_risk(model: RiskModel, text: str | None) -> RiskPosition:
    if text is None:
        if model.risk is None:
            raise _UsageError("model has no risk position; pass --risk L,I")
        return model.risk
    parts = text.split(",")
    if len(parts) != 2:
        raise _UsageError(f"--risk expects likelihood,impact, got {text!r}")
    return RiskPosition(
        likelihood=model.space.likelihood.level_of(_level_ref(parts[0])),
        impact=model.space.impact.level_of(_level_ref(parts[1])),
    )


def _parse_state(model: RiskModel, text: str) -> tuple[int, ...]:
    refs = [_level_ref(p) for p in text.split(",")]
    return model.space.resolve_state(refs)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ndpolar", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="load and validate a model document")
    p.add_argument("model")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--lint", action="store_true",
                   help="also report rule diagnostics (warnings)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("slice", help="print one 2D slice as CSV or JSON")
    p.add_argument("model")
    p.add_argument("--set", action="append", metavar="AXIS=LEVEL")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_slice)

    p = sub.add_parser("aggregate", help="per-level aggregated grades of a slice")
    p.add_argument("model")
    p.add_argument("--set", action="append", metavar="AXIS=LEVEL")
    p.add_argument("--risk", metavar="L,I")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_aggregate)

    p = sub.add_parser("walk", help="vary one context axis stepwise")
    p.add_argument("model")
    p.add_argument("--vary", required=True, metavar="AXIS")
    p.add_argument("--set", action="append", metavar="AXIS=LEVEL")
    p.add_argument("--risk", metavar="L,I")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser("violations", help="threshold violations of one state")
    p.add_argument("model")
    p.add_argument("--state", required=True, metavar="L1,L2,...")
    p.set_defaults(func=cmd_violations)

    p = sub.add_parser("render", help="render a slice as SVG")
    p.add_argument("model")
    p.add_argument("--view", choices=["matrix", "polar"], default="polar")
    p.add_argument("--set", action="append", metavar="AXIS=LEVEL")
    p.add_argument("--risk", metavar="L,I")
    p.add_argument("-o", "--output", default="-", help="output path, - for stdout")
    p.add_argument("--size", metavar="WxH", help="pixel size, e.g. 640x640")
    p.add_argument("--theta0", type=float, default=DEFAULT_THETA0,
                   help="polar rotation constant in radians")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("serve", help="serve the HTTP API (and optional UI)")
    p.add_argument("model")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--ui-dir", default=None,
                   help="directory with static UI assets to serve at /")
    p.set_defaults(func=cmd_serve)

    return parser


def cmd_validate(args) -> int:
    model = load_model(args.model)
    diags = []
    if args.lint:
        diags = lint_rules(model.assignment.raw, model.space)
        diags += lint_monotone(model)
    if args.format == "json":
        print(json.dumps({
            "valid": True,
            "name": model.name,
            "axes": model.space.d,
            "states": model.space.size(),
            "diagnostics": [
                {"severity": d.severity, "code": d.code, "message": d.message}
                for d in diags
            ],
        }))
    else:
        print(f"OK: {model.name!r} ({model.space.d} axes, "
              f"{model.space.size()} states)")
        for d in diags:
            print(f"{d.severity}: {d.message}", file=sys.stderr)
    return 0


def cmd_slice(args) -> int:
    model = load_model(args.model)
    grid_slice = matrix_slice(model, _effective_sigma(model, args.set))
    if args.format == "json":
        print(json.dumps(_slice_payload(model, grid_slice)))
    else:
        for row in grid_slice.rows_impact_desc():
            print(",".join(row))
    return 0


def _slice_payload(model: RiskModel, grid_slice) -> dict:
    return {
        "sigma": dict(grid_slice.sigma),
        "likelihood": {
            "id": grid_slice.likelihood_axis.id,
            "labels": list(grid_slice.likelihood_axis.labels),
        },
        "impact": {
            "id": grid_slice.impact_axis.id,
            "labels": list(grid_slice.impact_axis.labels),
        },
        "grid": [list(col) for col in grid_slice.grid],
    }


def cmd_aggregate(args) -> int:
    model = load_model(args.model)
    sigma = _effective_sigma(model, args.set)
    risk = _parse_risk(model, args.risk)
    lik, imp = aggregate_axes(model, sigma, risk)
    risk_grade = matrix_slice(model, sigma).cell(
        model.space.likelihood.level_of(risk.likelihood),
        model.space.impact.level_of(risk.impact),
    )
    if args.format == "json":
        print(json.dumps({
            "likelihood": list(lik.per_level),
            "impact": list(imp.per_level),
            "risk_grade": risk_grade,
        }))
    else:
        print(f"likelihood: {','.join(lik.per_level)}")
        print(f"impact: {','.join(imp.per_level)}")
        print(f"risk: {risk_grade}")
    return 0


def cmd_walk(args) -> int:
    model = load_model(args.model)
    fixed = _effective_sigma(model, args.set)
    fixed.pop(args.vary, None)
    risk = _parse_risk(model, args.risk)
    result = walk(model, args.vary, fixed, risk)
    if args.format == "json":
        print(json.dumps({
            "axis": result.axis_id,
            "steps": [
                {
                    "level": s.level,
                    "label": s.label,
                    "risk_grade": s.risk_grade,
                    "violations": s.violation_count,
                    "digest": s.grid_digest,
                }
                for s in result.steps
            ],
        }))
    else:
        print("level\tlabel\trisk\tV")
        for s in result.steps:
            print(f"{s.level}\t{s.label}\t{s.risk_grade}\t{s.violation_count}")
    return 0


def cmd_violations(args) -> int:
    model = load_model(args.model)
    bits, total = violations(model, _parse_state(model, args.state))
    print(f"v=[{','.join(map(str, bits))}] V={total}")
    return 0


def cmd_render(args) -> int:
    model = load_model(args.model)
    sigma = _effective_sigma(model, args.set)
    risk = _parse_risk(model, args.risk)
    if args.size:
        w, sep, h = args.size.partition("x")
        if not sep or not w.isdigit() or not h.isdigit():
            raise _UsageError(f"--size expects WxH, got {args.size!r}")
        width, height = int(w), int(h)
    else:
        width, height = (760, 560) if args.view == "matrix" else (640, 640)
    spec = RenderSpec(view=args.view, width=width, height=height,
                      theta0=args.theta0)
    if args.view == "matrix":
        svg = render_matrix(model, sigma, risk, spec)
    else:
        svg = render_polar(model, sigma, risk, spec)
    if args.output == "-":
        sys.stdout.write(svg)
    else:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(svg)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import ApiSession, create_app

    model = load_model(args.model)
    session = ApiSession(model)
    app = create_app(session, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ModelError as exc:
        print(json.dumps(exc.to_dict()), file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
