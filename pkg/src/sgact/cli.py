"""``sgact`` command line front end.

Exit codes: 0 success, 1 invalid input (the message names the field),
2 numerical non-convergence.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .core import Potential, RandomWalk, SpecError, load_spec, parse_walk
from .periodic import fekete_check, periodic_entropy, periodic_series
from .pressure import (
    distinguished_vector_m,
    entropy_map_maximize,
    equal_degree_test,
    matching_equation,
    matching_walk,
    pressure_report,
)
from .randomwalk import SimConfig, simulate_empirical
from .transfer import (
    ConvergenceError,
    build_ulam,
    periodic_mass_measure,
    power_iterate,
    preimage_measure,
    stationary_density,
)
from .zeta import radius_vs_entropy, skew_identity_check, zeta_eval, zeta_series


class UsageError(SpecError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"arguments: {message}")


def _frac(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _g(x) -> str:
    return format(float(x), ".17g")


def _write_csv(path: Path, header, rows) -> None:
    lines = [",".join(header)]
    lines += [",".join(r) for r in rows]
    path.write_text("\n".join(lines) + "\n")


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _walk(args, spec) -> RandomWalk:
    w = parse_walk(args.walk, spec.p)
    w.check(spec)
    return w


def _phi(name: str) -> Potential:
    if name == "zero":
        return Potential.zero()
    if name == "mlogd":
        return Potential.minus_log_derivative()
    raise SpecError(f"phi: expected zero or mlogd (got {name!r})")


def _measure_rows(m):
    return [(_g(l), _g(v)) for l, v in zip(m.bin_left, m.masses)]


# --------------------------------------------------------------------------
# subcommands; each returns (summary lines, {path: writer})

def cmd_info(args, spec):
    er_h = math.log(sum(spec.degrees) / spec.p)
    m = distinguished_vector_m(spec)
    eq, _ = equal_degree_test(spec)
    lines = [
        f"p={spec.p}",
        f"degrees {spec.degrees}",
        f"h_top(S)=log({_frac(Fraction(sum(spec.degrees), spec.p))})={er_h:.6f}",
        f"h_top(F_G)=log({sum(spec.degrees)})={math.log(sum(spec.degrees)):.6f}",
        "m=(" + ",".join(f"{x:.6g}" for x in m.weights) + ")",
        f"equal degrees: {eq}",
    ]
    out = {
        "p": spec.p,
        "degrees": spec.degrees,
        "h_top_S": er_h,
        "h_top_skew": math.log(sum(spec.degrees)),
        "m": list(m.weights),
        "equal_degrees": eq,
    }
    return lines, {"json": out}


def cmd_periodic(args, spec):
    s = periodic_series(spec, args.nmax, method=args.method, cap=args.cap)
    slopes = s.slopes()
    rows = [(str(n), str(c.numerator), str(c.denominator), str(per), _g(sl))
            for n, (c, per, sl) in enumerate(zip(s.counts, s.skew_counts, slopes), start=1)]
    lines = [f"N_{n} = {_frac(c)}" for n, c in enumerate(s.counts, start=1)]
    if s.n_max >= 4:
        er = periodic_entropy(s)
        lines.append(f"periodic entropy {er.periodic_entropy:.12g}")
    if s.n_max >= 5:
        ok, rep = fekete_check(s)
        lines.append(f"fekete ok={ok} exact={rep.exact_equality}")
    return lines, {"csv": (["n", "N_n_num", "N_n_den", "Per_n", "slope"], rows)}


def cmd_zeta(args, spec):
    s = periodic_series(spec, args.nmax)
    zs = zeta_series(s)
    out = {
        "coefficients": [_frac(c) for c in zs.coeffs],
        "radius_estimate": zs.radius_estimate,
        "rational_form": None,
        "skew_identity": skew_identity_check(s),
        "evaluations": [],
    }
    lines = [f"radius estimate {zs.radius_estimate:.6g}"]
    if zs.rational_form is not None:
        rf = zs.rational_form
        out["rational_form"] = {
            "string": str(rf),
            "numerator": [_frac(c) for c in rf.numerator],
            "denominator": [_frac(c) for c in rf.denominator],
            "pole": _frac(rf.poles[0]),
        }
        lines.append(f"rational form {rf}")
        lines.append(f"radius {float(rf.poles[0]):.6g}")
    if s.n_max >= 4:
        rr = radius_vs_entropy(zs, periodic_entropy(s))
        out["radius_vs_entropy"] = {"difference": rr.difference, "ok": rr.ok}
    for text in args.eval or []:
        try:
            z = complex(text.replace(" ", "").replace("i", "j"))
        except ValueError:
            raise SpecError(f"eval: cannot parse {text!r} as a complex number") from None
        mode = args.mode
        v = zeta_eval(zs, z, mode)
        out["evaluations"].append({"z": [z.real, z.imag], "value": [v.real, v.imag], "mode": mode})
        lines.append(f"zeta({text}) = {v.real:.12g}{v.imag:+.12g}i")
    return lines, {"json": out}


def cmd_transfer(args, spec):
    walk = _walk(args, spec)
    op = build_ulam(spec, walk, _phi(args.phi), args.grid)
    r = power_iterate(op, tol=args.tol, max_iter=args.max_iter)
    out = {
        "eigenvalue": r.eigenvalue,
        "pressure": r.pressure,
        "residual": r.residual,
        "iterations": r.iterations,
        "grid": args.grid,
        "walk": list(walk.weights),
        "phi": args.phi,
        "eigenfunction": r.eigenfunction.tolist(),
        "conformal": r.conformal.tolist(),
    }
    lines = [f"lambda = {r.eigenvalue:.12g}", f"log lambda = {r.pressure:.12g}",
             f"residual {r.residual:.3g} after {r.iterations} iterations"]
    return lines, {"json": out}


def cmd_stationary(args, spec):
    walk = _walk(args, spec)
    h = stationary_density(spec, walk, args.grid, tol=args.tol, max_iter=args.max_iter)
    rows = [(_g(l), _g(v)) for l, v in zip(h.bin_left, h.values)]
    lines = [f"iterations {h.info['iterations']}", f"fixed-point residual {h.info['residual']:.3g}"]
    return lines, {"csv": (["bin_left", "density"], rows)}


def cmd_equidistribute(args, spec):
    walk = _walk(args, spec)
    if args.mode == "preimage":
        m = preimage_measure(spec, walk, _phi(args.phi), args.x, args.n, args.bins)
    elif args.mode == "periodic":
        m = periodic_mass_measure(spec, args.n, args.bins)
    else:
        raise SpecError(f"mode: expected preimage or periodic (got {args.mode!r})")
    l1 = float(np.abs(m.masses - 1.0 / m.bins).sum())
    lines = [f"{args.mode} measure, n={args.n}, bins={args.bins}", f"L1 distance to uniform {l1:.6g}"]
    return lines, {"csv": (["bin_left", "mass"], _measure_rows(m))}


def cmd_pressure(args, spec):
    out, lines = {}, []
    if args.maximize:
        res = entropy_map_maximize(spec, args.grid)
        out["maximum"] = {"walk": list(res.walk.weights), "value": res.value,
                          "face": list(res.face), "grid_value": res.grid_value,
                          "grid_argmax": res.grid_argmax.tolist(), "grid_points": res.grid_points}
        lines.append(f"max entropy {res.value:.12g} on face {list(res.face)}")
    if args.matching_walk:
        mw = matching_walk(spec)
        c, t = matching_equation(spec)
        out["matching_walk"] = None if mw is None else list(mw.weights)
        out["matching_equation"] = {"coefficients": c.tolist(), "target": t}
        lines.append("matching walk " + ("none" if mw is None else
                                         "(" + ",".join(f"{x:.12g}" for x in mw.weights) + ")"))
    if not (args.maximize or args.matching_walk) or args.walk is not None:
        walk = _walk(args, spec)
        r = pressure_report(spec, walk)
        out["report"] = {"walk": list(walk.weights), "relative_entropy": r.relative_entropy,
                         "annealed": r.annealed, "quenched": r.quenched, "fibered": r.fibered,
                         "skew_measure_entropy": r.skew_measure_entropy, "shannon": r.shannon}
        lines += [f"annealed {r.annealed:.12g}", f"quenched {r.quenched:.12g}",
                  f"skew entropy {r.skew_measure_entropy:.12g}"]
    return lines, {"json": out}


def cmd_simulate(args, spec):
    walk = _walk(args, spec)
    cfg = SimConfig(spec, walk, n_samples=args.samples, n_orbits=args.orbits, bins=args.bins,
                    seed=args.seed, n_burnin=args.burnin)
    m = simulate_empirical(cfg)
    l1 = float(np.abs(m.masses - 1.0 / m.bins).sum())
    lines = [f"{args.samples} samples over {args.orbits} orbits", f"L1 distance to uniform {l1:.6g}"]
    return lines, {"csv": (["bin_left", "mass"], _measure_rows(m))}


COMMANDS = {
    "info": cmd_info,
    "periodic": cmd_periodic,
    "zeta": cmd_zeta,
    "transfer": cmd_transfer,
    "stationary": cmd_stationary,
    "equidistribute": cmd_equidistribute,
    "pressure": cmd_pressure,
    "simulate": cmd_simulate,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sgact", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"sgact {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(name, help):
        s = sub.add_parser(name, help=help)
        s.add_argument("--spec", required=True, help="semigroup spec (JSON)")
        s.add_argument("--out", help="output file")
        s.add_argument("--threads", type=int, default=None)
        return s

    common("info", "degrees, entropies and the vector m")
    s = common("periodic", "averaged periodic counts N_n")
    s.add_argument("--nmax", type=int, default=12)
    s.add_argument("--method", default="auto", choices=["auto", "classes", "enumerate"])
    s.add_argument("--cap", type=int, default=2 ** 14)
    s = common("zeta", "zeta function coefficients and values")
    s.add_argument("--nmax", type=int, default=12)
    s.add_argument("--eval", action="append", help="complex point, repeatable")
    s.add_argument("--mode", default="auto", choices=["auto", "rational", "series"])
    for name, help in [("transfer", "leading eigenvalue of the averaged operator"),
                       ("stationary", "stationary density")]:
        s = common(name, help)
        s.add_argument("--walk", default=None)
        s.add_argument("--grid", type=int, default=4096)
        s.add_argument("--tol", type=float, default=1e-10)
        s.add_argument("--max-iter", type=int, default=10000)
        if name == "transfer":
            s.add_argument("--phi", default="zero", choices=["zero", "mlogd"])
    s = common("equidistribute", "preimage and periodic-mass measures")
    s.add_argument("--mode", default="preimage", choices=["preimage", "periodic"])
    s.add_argument("--walk", default=None)
    s.add_argument("--phi", default="zero", choices=["zero", "mlogd"])
    s.add_argument("--x", type=float, default=0.37)
    s.add_argument("--n", type=int, default=10)
    s.add_argument("--bins", type=int, default=64)
    s = common("pressure", "entropy and pressure of a random walk")
    s.add_argument("--walk", default=None)
    s.add_argument("--maximize", action="store_true")
    s.add_argument("--grid", type=int, default=1000)
    s.add_argument("--matching-walk", action="store_true")
    s = common("simulate", "Monte-Carlo histogram of random orbits")
    s.add_argument("--walk", default=None)
    s.add_argument("--samples", type=int, default=10 ** 6)
    s.add_argument("--orbits", type=int, default=64)
    s.add_argument("--bins", type=int, default=256)
    s.add_argument("--seed", type=int, default=42)
    s.add_argument("--burnin", type=int, default=1000)
    return p


def _resolved_argv(args) -> list:
    argv = [args.command]
    for k, v in sorted(vars(args).items()):
        if k in ("command", "out") or v is None or v is False:
            continue
        flag = "--" + k.replace("_", "-")
        if v is True:
            argv.append(flag)
        elif isinstance(v, list):
            for item in v:
                argv += [flag, str(item)]
        else:
            argv += [flag, str(v)]
    return argv


def run(argv=None) -> int:
    t0 = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        if args.threads is None and os.environ.get("SGACT_THREADS"):
            try:
                args.threads = int(os.environ["SGACT_THREADS"])
            except ValueError:
                raise SpecError("SGACT_THREADS: expected an integer") from None
        if args.threads is not None and args.threads < 1:
            raise SpecError(f"threads: must be >= 1 (got {args.threads})")
        try:
            spec = load_spec(args.spec)
        except OSError as e:
            raise SpecError(f"spec: cannot read {args.spec}: {e.strerror}") from None
        lines, outputs = COMMANDS[args.command](args, spec)
    except ConvergenceError as e:
        print(f"sgact: {e}", file=sys.stderr)
        if e.residual is not None:
            print(f"sgact: residual {e.residual:.3g} after {e.iterations} iterations", file=sys.stderr)
        return 2
    except SpecError as e:
        print(f"sgact: error: {e}", file=sys.stderr)
        return 1

    for line in lines:
        print(line)
    written = []
    if args.out:
        path = Path(args.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        for kind, payload in outputs.items():
            if kind == "csv":
                _write_csv(path, *payload)
            else:
                _write_json(path, payload)
        written.append(str(path))
        manifest = {
            "subcommand": args.command,
            "argv": _resolved_argv(args),
            "config": {k: v for k, v in vars(args).items() if k != "out"},
            "seed": getattr(args, "seed", None),
            "version": __version__,
            "wall_clock_seconds": time.perf_counter() - t0,
            "outputs": written,
        }
        _write_json(Path(str(path) + ".manifest.json"), manifest)
    return 0


def rerun_from_manifest(path, out=None) -> int:
    """Repeat a run from its manifest, optionally redirecting the output."""
    m = json.loads(Path(path).read_text())
    argv = list(m["argv"])
    argv += ["--out", out if out is not None else m["outputs"][0]]
    return run(argv)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
