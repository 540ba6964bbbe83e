"""Command-line entry point: ``semichaos <command> [flags]``.

Commands: specfun, evolve, spectrum, witness, verdict, verify.  Every flag
may also be given in a ``--config`` file of ``key=value`` lines (keys are
flag names without dashes, ``-`` or ``_`` both accepted); flags on the
command line win.  Floats are written with 17 significant digits.

Exit codes: 0 success, 2 bad parameters, 3 evaluation-envelope breach,
4 verification failure.
"""

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import chaos, heat, specfun, verify
from .dunkl import MultiplicitySetup
from .errors import EnvelopeError, ParameterError, SemichaosError
from .spaces import NORM_KINDS, WeightedSpaceSpec, gamma_of

EXIT_PARAM = 2
EXIT_ENVELOPE = 3
EXIT_VERIFY = 4


def fmt(v) -> str:
    if isinstance(v, complex) or isinstance(v, np.complexfloating):
        if v.imag == 0:
            return format(float(v.real), ".17g")
        return f"{format(float(v.real), '.17g')}{format(float(v.imag), '+.17g')}j"
    return format(float(v), ".17g")


def _float_list(text: str) -> list[float]:
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _grid(text: str) -> list[float]:
    """'a:b:n' for n evenly spaced points, or a comma-separated list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"grid must look like start:stop:count, got {text!r}")
        try:
            a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad grid {text!r}") from exc
        if n < 1:
            raise argparse.ArgumentTypeError("grid count must be >= 1")
        return list(np.linspace(a, b, n))
    return _float_list(text)


def _p_value(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity"):
        return math.inf
    try:
        num, _, den = text.partition("/")
        return float(num) / float(den) if den else float(num)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad exponent p {text!r}") from exc


# ----------------------------------------------------------------- parser

def _space_flags(p: argparse.ArgumentParser, default_p: float = 4.0):
    p.add_argument("--n", type=int, default=None, help="dimension (default: len(kappa) or 2)")
    p.add_argument("--kappa", type=_float_list, default=None, help="multiplicities, comma-separated")
    p.add_argument("--p", type=_p_value, default=default_p, help="exponent p (fractions like 4/3 allowed)")
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--c", type=float, default=0.0, help="spectral shift")
    p.add_argument("--norm-kind", choices=NORM_KINDS, default="weighted_lp")


def _out_flags(p: argparse.ArgumentParser, formats=("csv", "json"), default="csv"):
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--format", choices=formats, default=default)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="semichaos", description="Heat semigroups, spectra and chaos witnesses "
                                 "on weighted L^p spaces of Dunkl type.")
    ap.add_argument("--config", default=None, help="key=value file mirroring flag names")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("specfun", help="evaluate Bessel-family functions")
    sp.add_argument("--fn", required=True, choices=("J", "I", "K", "tildeI", "tildeK", "phi", "poisson"))
    sp.add_argument("--nu", type=float, required=True)
    sp.add_argument("--x", type=_grid, default=None, help="argument(s): value, list or start:stop:count")
    sp.add_argument("--lambda-re", type=float, default=1.0, help="lambda for phi/poisson (x is then r)")
    sp.add_argument("--lambda-im", type=float, default=0.0)
    sp.add_argument("--from-file", default=None, help="CSV with an x column")
    _out_flags(sp)

    ev = sub.add_parser("evolve", help="norms of T_t^c f over a t grid")
    _space_flags(ev)
    ev.add_argument("--f", choices=verify.TEST_FUNCTIONS, default="gaussian")
    ev.add_argument("--lambda-re", type=float, default=0.0)
    ev.add_argument("--lambda-im", type=float, default=0.0)
    ev.add_argument("--t-grid", type=_grid, default=list(np.linspace(0.5, 8.0, 16)))
    ev.add_argument("--from-file", default=None, help="CSV with a t column")
    ev.add_argument("--n-radial", type=int, default=64)
    ev.add_argument("--angular", type=int, default=32)
    ev.add_argument("--plot", default=None, help="write a log-norm figure to this path (needs matplotlib)")
    _out_flags(ev)

    sc = sub.add_parser("spectrum", help="boundary of the spectral region and its imaginary-axis intersection")
    sc.add_argument("--p", type=_p_value, default=4.0)
    sc.add_argument("--rho", type=float, default=1.0)
    sc.add_argument("--c", type=float, default=None)
    sc.add_argument("--v-max", type=float, default=2.0)
    sc.add_argument("--samples", type=int, default=41)
    sc.add_argument("--json-out", default=None, help="where to write the intersection JSON (default: after the CSV)")
    sc.add_argument("--plot", default=None, help="write a region figure to this path (needs matplotlib)")
    _out_flags(sc)

    wi = sub.add_parser("witness", help="construct and certify a chaos witness")
    wi.add_argument("kind", choices=("b0", "binf", "periodic"))
    _space_flags(wi)
    wi.add_argument("--eps", type=float, default=1e-3)
    wi.add_argument("--b", type=float, default=None, help="imaginary part of lambda (binf, periodic)")
    wi.add_argument("--out", default=None)

    vd = sub.add_parser("verdict", help="theorem-backed chaos verdict")
    _space_flags(vd)
    vd.add_argument("--from-file", default=None, help="JSON with space, p, c, rho, kappa fields")
    vd.add_argument("--out", default=None)

    vf = sub.add_parser("verify", help="run the identity and property suite")
    vf.add_argument("--profile", default="quick")
    vf.add_argument("--only", type=lambda s: [t for t in s.split(",") if t], default=None)
    vf.add_argument("--mass-scale", type=float, default=1.0, help="perturb the heat-kernel constant (probe)")
    vf.add_argument("--plot", default=None, help="write a residual/tolerance figure to this path")
    vf.add_argument("--out", default=None)
    return ap


def _apply_config(parser: argparse.ArgumentParser, ns: argparse.Namespace, argv: list[str]):
    if not ns.config:
        return
    try:
        with open(ns.config, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ParameterError(f"cannot read config file: {exc}") from exc
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction)).choices[ns.command]
    by_dest = {a.dest: a for a in sub._actions if a.option_strings}
    given = {tok.split("=", 1)[0] for tok in argv if tok.startswith("--")}
    for num, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParameterError(f"config line {num}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        dest = key.lstrip("-").replace("-", "_")
        action = by_dest.get(dest)
        if action is None:
            raise ParameterError(f"config line {num}: unknown key {key!r} for {ns.command}")
        if any(o in given for o in action.option_strings):
            continue
        try:
            conv = action.type(value) if action.type else value
        except (argparse.ArgumentTypeError, ValueError) as exc:
            raise ParameterError(f"config line {num}: bad value for {key}: {exc}") from exc
        if action.choices is not None and conv not in action.choices:
            raise ParameterError(f"config line {num}: {key} must be one of {', '.join(map(str, action.choices))}")
        setattr(ns, dest, conv)


# ---------------------------------------------------------------- helpers

def _space(ns) -> WeightedSpaceSpec:
    kappa = ns.kappa
    n = ns.n if ns.n is not None else (len(kappa) if kappa else 2)
    if kappa is None:
        kappa = [0.0] * n
    elif len(kappa) == 1 and n > 1:
        kappa = kappa * n
    return WeightedSpaceSpec(MultiplicitySetup(n, tuple(kappa)), ns.p, ns.rho, ns.norm_kind)


def _emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _read_column(path: str, name: str) -> list[float]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParameterError(f"cannot read {path}: {exc}") from exc
    # tolerate trailing non-CSV blocks (e.g. the spectrum JSON after a blank line)
    block = text.split("\n\n", 1)[0]
    rows = list(csv.DictReader(io.StringIO(block)))
    if not rows or name not in rows[0]:
        raise ParameterError(f"{path} has no {name!r} column")
    try:
        return [float(r[name]) for r in rows]
    except ValueError as exc:
        raise ParameterError(f"{path}: non-numeric {name!r} entry") from exc


def _lazy_pyplot():
    try:
        import matplotlib
    except ImportError as exc:
        raise ParameterError("--plot needs matplotlib (install the 'plot' extra)") from exc
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


# --------------------------------------------------------------- commands

def _eval_specfun(ns, x: float):
    lam = complex(ns.lambda_re, ns.lambda_im)
    fn = ns.fn
    if fn == "J":
        return specfun.bessel_j(ns.nu, x)
    if fn == "I":
        return specfun.bessel_i(ns.nu, x)
    if fn == "K":
        return specfun.bessel_k(ns.nu, x)
    if fn == "tildeI":
        return specfun.tilde_i(ns.nu, x)
    if fn == "tildeK":
        return specfun.tilde_k(ns.nu, x)
    if fn == "phi":
        return specfun.spherical_fn(lam, x, ns.nu)
    return specfun.poisson_sphfn(lam, x, ns.nu)


def cmd_specfun(ns) -> int:
    xs = _read_column(ns.from_file, "x") if ns.from_file else ns.x
    if not xs:
        raise ParameterError("give --x or --from-file")
    results = [(x, _eval_specfun(ns, float(x))) for x in xs]
    if ns.format == "json":
        doc = [{"x": float(x), "value": fmt(r.value), "abs_error_est": float(r.abs_error_est)} for x, r in results]
        _emit(json.dumps(doc if len(doc) > 1 else doc[0], indent=2), ns.out)
    elif len(results) == 1 and ns.from_file is None:
        _emit(fmt(results[0][1].value), ns.out)
    else:
        lines = ["x,value,abs_error_est"] + [f"{fmt(x)},{fmt(r.value)},{fmt(r.abs_error_est)}" for x, r in results]
        _emit("\n".join(lines) + "\n", ns.out)
    return 0


def cmd_evolve(ns) -> int:
    space = _space(ns)
    ts = _read_column(ns.from_file, "t") if ns.from_file else ns.t_grid
    from .spaces import default_grid

    grid = default_grid(space, ns.n_radial, ns.angular)
    exp = verify.decay_experiment(space, ns.c, ns.f, ts, complex(ns.lambda_re, ns.lambda_im), grid)
    if ns.format == "json":
        doc = {"space": space.norm_kind, "p": space.p, "rho": space.rho, "c": ns.c, "kappa": list(space.setup.kappa),
               "f": ns.f, "t": [float(t) for t in exp.t_grid], "norm": [float(v) for v in exp.norms],
               "slope": exp.slope}
        _emit(json.dumps(doc, indent=2), ns.out)
    else:
        _emit(exp.to_csv(), ns.out)
    if ns.plot:
        plt = _lazy_pyplot()
        fig, ax = plt.subplots(figsize=(5, 3.5))
        ax.plot(exp.t_grid, np.log(exp.norms), "o-")
        ax.set_xlabel("t")
        ax.set_ylabel("log norm")
        ax.set_title(f"{ns.f}, p={space.p:g}, c={ns.c:g}, slope {exp.slope:.4g}")
        fig.tight_layout()
        fig.savefig(ns.plot)
        plt.close(fig)
    return 0


def cmd_spectrum(ns) -> int:
    p, rho = ns.p, ns.rho
    if not (1.0 <= p < math.inf):
        raise ParameterError("spectrum needs 1 <= p < inf")
    if ns.samples < 1:
        raise ParameterError("--samples must be >= 1")
    degenerate = gamma_of(p) == 0.0
    if degenerate:
        vs = np.array([0.0])
        us = np.array([rho * rho])
    else:
        vs = np.linspace(-ns.v_max, ns.v_max, ns.samples)
        if ns.samples % 2 == 1:
            vs[ns.samples // 2] = 0.0
        us = chaos.boundary_u(p, rho, vs)
    info = {"degenerate": degenerate, "c_p": chaos.critical_shift(p, rho)}
    if ns.c is not None:
        info.update(chaos.ir_axis_intersection(p, rho, ns.c))
    if ns.format == "json":
        doc = {"boundary": [{"v": float(v), "u_boundary": float(u)} for v, u in zip(vs, us)], **info}
        _emit(json.dumps(doc, indent=2), ns.out)
    else:
        text = "v,u_boundary\n" + "".join(f"{fmt(v)},{fmt(u)}\n" for v, u in zip(vs, us))
        if ns.json_out:
            _emit(json.dumps(info, indent=2), ns.json_out)
        else:
            text += "\n" + json.dumps(info) + "\n"
        _emit(text, ns.out)
    if ns.plot:
        plt = _lazy_pyplot()
        fig, ax = plt.subplots(figsize=(5, 3.5))
        if degenerate:
            ax.plot([rho * rho, rho * rho + 2.0 * ns.v_max], [0.0, 0.0], "-")
        else:
            ax.plot(us, vs, "-")
        ax.axvline(ns.c if ns.c is not None else 0.0, color="grey", linestyle=":")
        ax.set_xlabel("Re z")
        ax.set_ylabel("Im z")
        ax.set_title(f"spectral region boundary, p={p:g}")
        fig.tight_layout()
        fig.savefig(ns.plot)
        plt.close(fig)
    return 0


def cmd_witness(ns) -> int:
    space = _space(ns)
    if ns.kind == "periodic":
        w = chaos.make_periodic_witness(space, ns.c, ns.b)
    elif ns.kind == "binf":
        w = chaos.make_binf_witness(space, ns.c, ns.eps, ns.b)
    else:
        w = chaos.make_b0_witness(space, ns.c)
    _emit(json.dumps(w.as_dict(), indent=2), ns.out)
    return 0


def cmd_verdict(ns) -> int:
    if ns.from_file:
        try:
            with open(ns.from_file, encoding="utf-8") as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ParameterError(f"cannot read verdict input: {exc}") from exc
        try:
            kind, p, c, rho = doc.get("space", "weighted_lp"), float(doc["p"]), float(doc["c"]), float(doc["rho"])
            kappa = doc.get("kappa")
        except (KeyError, TypeError, ValueError) as exc:
            raise ParameterError(f"verdict input lacks a field: {exc}") from exc
    else:
        kind, p, c, rho, kappa = ns.norm_kind, ns.p, ns.c, ns.rho, ns.kappa
    v = chaos.chaos_verdict(kind, p, c, rho, kappa)
    out = {"space": kind, "p": p, "c": c, "rho": rho, "kappa": list(kappa) if kappa else [], **v.as_dict()}
    _emit(json.dumps(out), ns.out)
    return 0


def cmd_verify(ns) -> int:
    results = verify.run_suite(ns.profile, ns.mass_scale, ns.only)
    _emit(verify.report_json(ns.profile, results), ns.out)
    if ns.plot:
        plt = _lazy_pyplot()
        ids = [r.check_id for r in results]
        ratio = []
        for r in results:
            if r.tolerance and math.isfinite(r.measured) and r.measured > 0:
                ratio.append(math.log10(r.measured / r.tolerance))
            else:
                ratio.append(-16.0 if r.passed else 1.0)
        fig, ax = plt.subplots(figsize=(6, 0.25 * len(ids) + 1.5))
        ax.barh(ids, ratio, color=["tab:green" if r.passed else "tab:red" for r in results])
        ax.axvline(0.0, color="black", linewidth=0.8)
        ax.set_xlabel("log10(measured / tolerance)")
        fig.tight_layout()
        fig.savefig(ns.plot)
        plt.close(fig)
    return 0 if all(r.passed for r in results) else EXIT_VERIFY


COMMANDS = {"specfun": cmd_specfun, "evolve": cmd_evolve, "spectrum": cmd_spectrum,
            "witness": cmd_witness, "verdict": cmd_verdict, "verify": cmd_verify}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        _apply_config(parser, ns, argv)
        return COMMANDS[ns.command](ns)
    except EnvelopeError as exc:
        print(f"semichaos: evaluation envelope exceeded: {exc}", file=sys.stderr)
        return EXIT_ENVELOPE
    except (ParameterError, IndexError) as exc:
        print(f"semichaos: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except SemichaosError as exc:
        print(f"semichaos: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
