"""Command-line interface: every library operation as a subcommand.

Data goes to --out (or standard output), diagnostics to standard error.
JSON output is canonical: sorted keys, 17-significant-digit reals, so
byte-identical round trips are testable. Exit codes: 0 success, 1 bad
arguments or failed preconditions, 2 I/O problems.

The simulate and table1 subcommands render a PNG figure next to their CSV
when --out is given (disable with --no-figure); constellation plots only
on request via --plot. Plotting imports matplotlib lazily so everything
else runs without it.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import __version__
from .bound import max_ssd_family, verify_claims
from .codes import (
    LinearDispersionCode,
    alamouti,
    ciod,
    classify,
    code_from_json,
    code_to_json,
    cuw_ssd,
    mcuw_ssd,
    tnu_transform,
    ygt_extend,
)
from .clifford import ca_generators, hurwitz_radon_family
from .gain import (
    SignalSet,
    diversity_product,
    rect_qam,
    square_derived_qam,
    table1_constellation,
    table1_pipeline,
)
from .linalg import matrix_to_json
from .sim import ChannelConfig, power_scale, run_montecarlo

__all__ = ["canonical_json", "main"]


def canonical_json(obj) -> str:
    """Serialize with sorted keys and %.17g floats, newline-terminated."""
    markers: dict[str, str] = {}

    def walk(x):
        if isinstance(x, float):
            if not math.isfinite(x):
                raise ValueError(f"non-finite value {x} is not serializable")
            if x == 0.0:
                x = 0.0  # fold -0.0, whose sign a reparse cannot preserve
            key = f"\x00float{len(markers)}\x00"
            markers[key] = f"{x:.17g}"
            return key
        if isinstance(x, dict):
            return {k: walk(v) for k, v in x.items()}
        if isinstance(x, (list, tuple)):
            return [walk(v) for v in x]
        return x

    text = json.dumps(walk(obj), sort_keys=True, indent=1)
    for key, rendered in markers.items():
        text = text.replace(json.dumps(key), rendered)
    return text + "\n"


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
        print(f"wrote {out_path}", file=sys.stderr)
    else:
        sys.stdout.write(text)


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _load_constellation(path: str) -> SignalSet:
    obj = _load_json(path)
    if isinstance(obj, dict):
        pts = [complex(re, im) for re, im in obj["points"]]
        return SignalSet(
            pts,
            obj.get("normalization", "raw"),
            obj.get("label", path),
        )
    return SignalSet([complex(re, im) for re, im in obj], "raw", path)


def _points_json(signal_set: SignalSet) -> str:
    return canonical_json(
        [[float(p.real), float(p.imag)] for p in signal_set.points]
    )


def _parse_snr(text: str) -> tuple[float, ...]:
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"SNR range must be start:step:stop, got {text!r}")
        start, step, stop = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("SNR step must be positive")
        out = []
        v = start
        while v <= stop + 1e-9:
            out.append(round(v, 9))
            v += step
        return tuple(out)
    return (float(text),)


_FAMILIES = ("alamouti", "cuw", "mcuw", "ciod", "ygt")


def _construct(family: str, a: int) -> LinearDispersionCode:
    if family == "alamouti":
        return alamouti()
    if family == "cuw":
        return cuw_ssd(a)
    if family == "mcuw":
        return mcuw_ssd(a)
    if family == "ciod":
        return ciod(a)
    if family == "ygt":
        return ygt_extend(alamouti())
    raise ValueError(f"unknown family {family!r}")


def _meta(**extra) -> dict:
    return {"version": __version__, **extra}


def _cmd_construct(args) -> int:
    code = _construct(args.family, args.a)
    if args.tnu is not None:
        code = tnu_transform(code, args.tnu[0], args.tnu[1])
    _emit(canonical_json(code_to_json(code)), args.out)
    print(
        f"constructed {code.label}: n={code.n} K={code.K} "
        f"(version {__version__})",
        file=sys.stderr,
    )
    return 0


def _cmd_classify(args) -> int:
    code = code_from_json(_load_json(args.code))
    verdict = classify(code, args.tol)
    payload = {
        "class_name": verdict.class_name,
        "unitary_weights": verdict.unitary_weights,
        "symbol_separable": verdict.symbol_separable,
        "same_symbol_orthogonal": verdict.same_symbol_orthogonal,
        "violations": [
            {"condition": v.condition, "i": v.i, "j": v.j, "residual": v.residual}
            for v in verdict.violations
        ],
        "meta": _meta(code=code.label, tol=args.tol),
    }
    _emit(canonical_json(payload), args.out)
    return 0


def _cmd_divprod(args) -> int:
    code = code_from_json(_load_json(args.code))
    constellation = _load_constellation(args.constellation)
    dp = diversity_product(code, constellation, exact=not args.brute_force)
    payload = {
        "dp": dp,
        "method": "brute-force" if args.brute_force else "closed-form",
        "meta": _meta(
            code=code.label,
            constellation=constellation.label,
            points=len(constellation),
        ),
    }
    _emit(canonical_json(payload), args.out)
    return 0


def _cmd_constellation(args) -> int:
    if args.kind == "rect":
        if args.q not in (4, 8, 32):
            raise ValueError("rect presets support --q 4, 8, or 32")
        dims = {4: (1, 1), 8: (2, 1), 32: (4, 2)}[args.q]
        sset = rect_qam(*dims, d=args.d)
    elif args.kind == "square-derived":
        sset = square_derived_qam(args.q)
    elif args.kind == "rotated":
        sset = table1_constellation(args.base, args.q)
    else:
        raise ValueError(f"unknown kind {args.kind!r}")
    if args.normalize != "raw":
        sset = sset.scaled(args.normalize)
    _emit(_points_json(sset), args.out)
    print(
        f"{sset.label}: {len(sset)} points, normalization={sset.normalization}",
        file=sys.stderr,
    )
    if args.plot:
        if not args.out:
            raise ValueError("--plot requires --out to name the figure path")
        fig_path = args.out.rsplit(".", 1)[0] + ".png"
        _render_constellation_figure(sset, fig_path)
        print(f"wrote {fig_path}", file=sys.stderr)
    return 0


_TABLE1_ROWS = (
    ("square-derived", 4),
    ("square-derived", 8),
    ("square-derived", 32),
    ("rectangular", 8),
    ("rectangular", 32),
)


def _cmd_table1(args) -> int:
    lines = [
        f"# version: {__version__}",
        "# energy-convention: sum-energy-1 (calibrated)",
        "# rotation: power-fraction epsilon form",
        f"# code: cuw-ssd a={args.a}",
        "constellation,size,dp",
    ]
    rows = []
    for kind, q in _TABLE1_ROWS:
        dp = table1_pipeline(kind, q, args.a)
        rows.append((kind, q, dp))
        lines.append(f"{kind},{q},{dp:.6f}")
    _emit("\n".join(lines) + "\n", args.out)
    if args.out and not args.no_figure:
        fig_path = args.out.rsplit(".", 1)[0] + ".png"
        _render_table1_figure(rows, fig_path)
        print(f"wrote {fig_path}", file=sys.stderr)
    return 0


def _cmd_simulate(args) -> int:
    code = code_from_json(_load_json(args.code))
    constellation = _load_constellation(args.constellation)
    if args.trials < 1:
        raise ValueError("--trials must be at least 1")
    cfg = ChannelConfig(
        n_tx=code.n,
        n_rx=args.rx,
        snr_db_points=_parse_snr(args.snr),
        trials_per_point=args.trials,
        seed=args.seed,
        power_scale=power_scale(code, constellation),
    )
    result = run_montecarlo(code, constellation, cfg)
    _emit(result.to_csv(), args.out)
    if args.out and not args.no_figure:
        fig_path = args.out.rsplit(".", 1)[0] + ".png"
        _render_sim_figure(result, fig_path)
        print(f"wrote {fig_path}", file=sys.stderr)
    return 0


def _cmd_bound_search(args) -> int:
    k_max, witness = max_ssd_family(args.a)
    report = verify_claims(args.a)
    payload = {
        "a": args.a,
        "k_max": k_max,
        "witness": code_to_json(witness),
        "witness_class": classify(witness).class_name,
        "universe": report.universe,
        "max_anticommuting_family": report.max_anticommuting_family,
        "claims": [c._asdict() for c in report.checks],
        "meta": _meta(),
    }
    _emit(canonical_json(payload), args.report)
    return 0


def _cmd_clifford(args) -> int:
    family = hurwitz_radon_family(args.a)
    payload = {
        "a": args.a,
        "generators": [matrix_to_json(g) for g in ca_generators(args.a)],
        "family": [matrix_to_json(g) for g in family.generators],
        "companion_hermitian": matrix_to_json(family.companion_hermitian),
        "meta": _meta(),
    }
    _emit(canonical_json(payload), args.out)
    return 0


def _render_constellation_figure(sset: SignalSet, path: str) -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.scatter(sset.points.real, sset.points.imag, s=28)
    ax.axhline(0, lw=0.5, color="gray")
    ax.axvline(0, lw=0.5, color="gray")
    ax.set_xlabel("in-phase")
    ax.set_ylabel("quadrature")
    ax.set_title(sset.label)
    ax.set_aspect("equal")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _render_table1_figure(rows, path: str) -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    labels = [f"{kind[:6]}-{q}" for kind, q, _ in rows]
    ax.bar(labels, [dp for _, _, dp in rows])
    ax.set_ylabel("diversity product")
    ax.set_title("diversity product by constellation")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _render_sim_figure(result, path: str) -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 4))
    snr = [r.snr_db for r in result.per_snr]
    ser = [max(r.ser, 1e-12) for r in result.per_snr]
    hw = [r.wilson_halfwidth_95 for r in result.per_snr]
    ax.errorbar(snr, ser, yerr=hw, marker="o", capsize=3)
    ax.set_yscale("log")
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("symbol error rate")
    ax.set_title(result.code_label)
    ax.grid(True, which="both", lw=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # exit 1, not argparse's default 2
        print(f"error: {message}", file=sys.stderr)
        self.print_usage(sys.stderr)
        raise SystemExit(1)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ssdstbc", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a code and emit its JSON")
    p.add_argument("--family", choices=_FAMILIES, required=True)
    p.add_argument("--a", type=int, default=2, help="tensor factors (size 2^a)")
    p.add_argument(
        "--tnu", type=float, nargs=2, metavar=("ALPHA", "BETA"),
        help="apply the in-phase/quadrature mixing transform",
    )
    p.add_argument("--out")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("classify", help="taxonomy verdict for a code JSON")
    p.add_argument("--code", required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("divprod", help="diversity product of code + constellation")
    p.add_argument("--code", required=True)
    p.add_argument("--constellation", required=True)
    p.add_argument("--brute-force", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_divprod)

    p = sub.add_parser("constellation", help="emit a point-list JSON")
    p.add_argument("--kind", choices=("rect", "square-derived", "rotated"), required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=float, default=2.0, help="rect grid spacing")
    p.add_argument(
        "--base", choices=("square-derived", "rectangular"),
        default="square-derived", help="base shape for --kind rotated",
    )
    p.add_argument(
        "--normalize", choices=("raw", "sum-energy-1", "avg-energy-1"),
        default="raw",
    )
    p.add_argument("--plot", action="store_true", help="also render a PNG")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_constellation)

    p = sub.add_parser("table1", help="diversity-product comparison table CSV")
    p.add_argument("--a", type=int, default=2)
    p.add_argument("--no-figure", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_table1)

    p = sub.add_parser("simulate", help="Monte-Carlo SER/BER sweep CSV")
    p.add_argument("--code", required=True)
    p.add_argument("--constellation", required=True)
    p.add_argument("--snr", required=True, help="start:step:stop in dB")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rx", type=int, default=1)
    p.add_argument("--no-figure", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("bound-search", help="exhaustive in-group rate-bound check")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--report", help="output JSON path")
    p.set_defaults(func=_cmd_bound_search)

    p = sub.add_parser("clifford", help="emit the generator family JSON")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_clifford)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        code = exc.code
        return int(code) if isinstance(code, int) else 0
    except json.JSONDecodeError as exc:  # before ValueError, its superclass
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
