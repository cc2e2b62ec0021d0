"""Command-line interface: ``polyenergy <command> [options]``.

Options may also come from a TOML file (``--config``) with sections
``[potential]``, ``[optimizer]`` and ``[sweep]``; flags win over the file.
Exit status is 0 on success, 1 when a check fails (e.g. a Toeplitz form
is not PSD) and 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .basis import (
    ChebyshevSeries,
    GegenbauerSeries,
    MonomialPolynomial,
    PFramePotential,
    cheb_to_monomial,
    expand_gegenbauer,
    gegenbauer_to_monomial,
    pframe_coeffs,
    to_chebyshev,
)
from .experiments import alpha_sweep, build_alpha_potential, compare_minimizers, p_sweep
from .measures import (
    CircleMeasure,
    SphereConfig,
    circle_energy_fn,
    measure_from_dict,
    sphere_energy,
)
from .moments import is_psd, moment_energy, moments_of, toeplitz
from .optimize import OptimizerConfig, minimize_circle, minimize_sphere
from .structured import best_ngon, conjecture_check, two_point_optimum

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

SEED_ENV = "POLYENERGY_SEED"

OPT_FIELDS = {
    "restarts": int,
    "max_iters": int,
    "grad_tol": float,
    "initial_step": float,
    "shrink": float,
    "sufficient_decrease": float,
    "merge_tol": float,
    "weight_floor": float,
    "workers": int,
}


class UsageError(Exception):
    pass


def parse_number(tok) -> float:
    if isinstance(tok, (int, float)):
        return float(tok)
    tok = str(tok).strip()
    try:
        return float(Fraction(tok)) if "/" in tok else float(tok)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a number: {tok!r}") from exc


def parse_list(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [parse_number(t) for t in text]
    return [parse_number(t) for t in str(text).split(",") if t.strip()]


def _ints(text) -> list[int]:
    vals = parse_list(text)
    if any(v != int(v) for v in vals):
        raise UsageError(f"expected integers, got {text!r}")
    return [int(v) for v in vals]


# -- configuration -----------------------------------------------------------

def _add_common(p):
    p.add_argument("--config", type=Path, help="TOML file with [potential], [optimizer], [sweep]")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", type=Path, default=None, help="write output here instead of stdout")


def _add_potential(p):
    g = p.add_argument_group("potential (exactly one)")
    g.add_argument("--cheb", help="Chebyshev coefficients c0,c1,... (reals or p/q)")
    g.add_argument("--mono", help="monomial coefficients b0,b1,...")
    g.add_argument("--gegen", help="normalized Gegenbauer coefficients (needs --dim)")
    g.add_argument("--pframe", help="p-frame exponent p for |t|^p")
    g.add_argument("--alpha-family", metavar="K,ALPHA",
                   help="t^(2K) + ALPHA * C_(2K)(t)^2")


def _add_optimizer(p):
    g = p.add_argument_group("optimizer")
    for name, typ in OPT_FIELDS.items():
        g.add_argument("--" + name.replace("_", "-"), dest="opt_" + name, type=typ, default=None)


def _load_config(path):
    if path is None:
        return {}
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc


def _resolve_potential(args, file_cfg) -> dict | None:
    flags = {k: getattr(args, k, None) for k in ("cheb", "mono", "gegen", "pframe", "alpha_family")}
    given = {k: v for k, v in flags.items() if v is not None}
    if len(given) > 1:
        raise UsageError("give exactly one potential source")
    dim = getattr(args, "dim", None)
    if given:
        (kind, val), = given.items()
        if kind == "cheb":
            return {"basis": "chebyshev", "coeffs": parse_list(val)}
        if kind == "mono":
            return {"basis": "monomial", "coeffs": parse_list(val)}
        if kind == "gegen":
            return {"basis": "gegenbauer", "dim": dim or 1, "coeffs": parse_list(val)}
        if kind == "pframe":
            return {"basis": "pframe", "p": parse_number(val)}
        k, a = parse_list(val)
        return {"basis": "alpha", "k": int(k), "alpha": a, "dim": dim or 1}
    pot = file_cfg.get("potential")
    if not pot:
        return None
    pot = dict(pot)
    if "coeffs" in pot:
        pot["coeffs"] = parse_list(pot["coeffs"])
    for key in ("alpha", "p"):
        if key in pot:
            pot[key] = parse_number(pot[key])
    if pot.get("basis") in ("gegenbauer", "alpha"):
        pot["dim"] = int(dim or pot.get("dim", 1))
    return pot


def build_potential(spec: dict):
    basis = spec.get("basis")
    if basis == "chebyshev":
        return ChebyshevSeries(spec["coeffs"])
    if basis == "monomial":
        return MonomialPolynomial(spec["coeffs"])
    if basis == "gegenbauer":
        return GegenbauerSeries(spec["dim"], spec["coeffs"])
    if basis == "pframe":
        return PFramePotential(spec["p"])
    if basis == "alpha":
        return build_alpha_potential(int(spec["k"]), float(spec["alpha"]), int(spec.get("dim", 1)))
    raise UsageError(f"unknown potential basis {basis!r}")


def _resolve_seed(args, file_cfg) -> int:
    if args.seed is not None:
        return args.seed
    for sec in (file_cfg.get("optimizer", {}), file_cfg):
        if "seed" in sec:
            return int(sec["seed"])
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"{SEED_ENV} must be an integer") from exc
    return 0


def _resolve_optimizer(args, file_cfg, seed) -> OptimizerConfig:
    opts = {k: v for k, v in file_cfg.get("optimizer", {}).items() if k in OPT_FIELDS}
    for name in OPT_FIELDS:
        v = getattr(args, "opt_" + name, None)
        if v is not None:
            opts[name] = v
    try:
        return OptimizerConfig(seed=seed, **{k: OPT_FIELDS[k](v) for k, v in opts.items()})
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def _sweep_value(args, file_cfg, name, default=None):
    v = getattr(args, name, None)
    if v is not None:
        return v
    return file_cfg.get("sweep", {}).get(name, default)


# -- measures ----------------------------------------------------------------

def parse_measure(spec: str):
    if spec == "point":
        return CircleMeasure.point_mass()
    if spec == "antipodal":
        return CircleMeasure.uniform(2)
    if spec.startswith("uniform:"):
        try:
            return CircleMeasure.uniform(int(spec.split(":", 1)[1]))
        except ValueError as exc:
            raise UsageError(f"bad measure {spec!r}") from exc
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"measure {spec!r} is neither a known form nor a file")
    data = json.loads(path.read_text())
    # accept the output of minimize-* directly: unwrap nested "result" keys
    while "minimizer" not in data and isinstance(data.get("result"), dict):
        data = data["result"]
    data = data.get("minimizer", data)
    try:
        return measure_from_dict(data)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad measure file {spec}: {exc}") from exc


# -- commands ----------------------------------------------------------------

def _need(pot):
    if pot is None:
        raise UsageError("this command needs a potential (--cheb, --mono, --gegen, --pframe, --alpha-family)")
    return pot


def _polynomial(f):
    if isinstance(f, PFramePotential):
        raise UsageError("this command needs a polynomial potential")
    return f


def cmd_expand(args, ctx):
    f = build_potential(_need(ctx["potential"]))
    dim = args.dim or getattr(f, "dim", 1)
    out = {}
    if isinstance(f, PFramePotential):
        n_max = args.n_max if args.n_max is not None else 10
        out["gegenbauer"] = pframe_coeffs(f.p, dim, n_max).to_dict()
        return out, 0
    cheb = to_chebyshev(f)
    out["chebyshev"] = cheb.to_dict()
    if isinstance(f, MonomialPolynomial):
        mono = f
    elif isinstance(f, GegenbauerSeries):
        mono = gegenbauer_to_monomial(f)
    else:
        mono = cheb_to_monomial(cheb)
    out["monomial"] = mono.to_dict()
    n_max = args.n_max if args.n_max is not None else mono.degree
    out["gegenbauer"] = expand_gegenbauer(mono, dim, n_max).to_dict()
    return out, 0


def cmd_energy(args, ctx):
    f = build_potential(_need(ctx["potential"]))
    m = parse_measure(args.measure)
    if isinstance(m, SphereConfig):
        F = f.to_monomial() if isinstance(f, GegenbauerSeries) else f
        return {"energy": sphere_energy(F, m), "measure": m.to_dict()}, 0
    out = {"energy": circle_energy_fn(f, m), "measure": m.to_dict()}
    if not isinstance(f, PFramePotential):
        c = to_chebyshev(f)
        out["moment_energy"] = moment_energy(c, moments_of(m, c.degree))
    return out, 0


def cmd_moments(args, ctx):
    if (args.measure is None) == (args.nu is None):
        raise UsageError("give exactly one of --measure or --nu")
    if args.measure is not None:
        m = parse_measure(args.measure)
        if not isinstance(m, CircleMeasure):
            raise UsageError("moments need a circle measure")
        mv = moments_of(m, args.order)
        values = mv.values
        out = {"moments": mv.to_dict()}
    else:
        re = np.array(parse_list(args.nu))
        im = np.array(parse_list(args.nu_im)) if args.nu_im else np.zeros_like(re)
        if re.shape != im.shape or re.size == 0 or re[0] != 1.0 or im[0] != 0.0:
            raise UsageError("--nu must start with 1 and match --nu-im in length")
        values = re + 1j * im
        out = {"moments": {"re": re.tolist(), "im": im.tolist()}}
    status = 0
    if args.check_psd:
        res = is_psd(toeplitz(values), args.tol)
        out["psd"] = {"psd": res.psd, "min_eigenvalue": res.min_eigenvalue, "tol": args.tol}
        if res.witness is not None:
            out["psd"]["witness"] = {"re": res.witness.real.tolist(), "im": res.witness.imag.tolist()}
        status = 0 if res.psd else 1
    return out, status


def _verify_circle(f, mu, energy):
    if isinstance(f, PFramePotential):
        psd = is_psd(toeplitz(moments_of(mu, 10)), 1e-9)
        return {"psd": psd.psd, "min_eigenvalue": psd.min_eigenvalue}, psd.psd
    c = to_chebyshev(f)
    nu = moments_of(mu, max(c.degree, 1))
    me = moment_energy(c, nu)
    psd = is_psd(toeplitz(nu), 1e-9)
    ok = psd.psd and abs(me - energy) <= 1e-9
    return {"moment_energy": me, "psd": psd.psd, "min_eigenvalue": psd.min_eigenvalue}, ok


def cmd_minimize_circle(args, ctx):
    f = build_potential(_need(ctx["potential"]))
    if isinstance(f, GegenbauerSeries) and f.dim != 1:
        raise UsageError("circle minimization needs a d=1 potential")
    res = minimize_circle(f, args.n_atoms, ctx["optimizer"])
    ver, ok = _verify_circle(f, res.minimizer, res.energy)
    return {"result": res.to_dict(), "verification": ver}, 0 if ok else 1


def cmd_minimize_sphere(args, ctx):
    f = build_potential(_need(ctx["potential"]))
    d = args.dim or getattr(f, "dim", 2)
    if isinstance(f, GegenbauerSeries):
        if f.dim != d:
            raise UsageError("Gegenbauer dimension does not match --dim")
        f = f.to_monomial()
    res = minimize_sphere(f, args.n_points, d, ctx["optimizer"], weights_free=args.weights_free)
    return {"result": res.to_dict()}, 0


def cmd_subsum(args, ctx):
    f = to_chebyshev(_polynomial(build_potential(_need(ctx["potential"]))))
    return best_ngon(f, args.n_max, args.tie_tol, not args.all_n).to_dict(), 0


def cmd_two_point(args, ctx):
    f = to_chebyshev(_polynomial(build_potential(_need(ctx["potential"]))))
    return two_point_optimum(f).to_dict(), 0


def cmd_conjecture(args, ctx):
    f = to_chebyshev(_polynomial(build_potential(_need(ctx["potential"]))))
    rep = conjecture_check(f, ctx["optimizer"], n_max=args.n_max, even_only=not args.all_n,
                           tie_tol=args.tie_tol, threshold=args.threshold,
                           n_atoms=tuple(_ints(args.n_atoms)) if args.n_atoms else None)
    return rep.to_dict(), 0


def _sweep_csv(records) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["parameter", "energy", "support_size", "grad_norm"])
    for r in records:
        wr.writerow([repr(r.parameter), repr(r.energy), r.support_size, repr(r.grad_norm)])
    return buf.getvalue()


def _sweep_common(args, ctx):
    k = int(_sweep_value(args, ctx["file"], "k", 1))
    d = int(_sweep_value(args, ctx["file"], "dim", 1))
    n_atoms = _sweep_value(args, ctx["file"], "n_atoms")
    return k, d, int(n_atoms) if n_atoms is not None else None


def cmd_sweep_alpha(args, ctx):
    k, d, n_atoms = _sweep_common(args, ctx)
    alphas = parse_list(_sweep_value(args, ctx["file"], "alphas", "1,0.1,0.01,0"))
    recs = alpha_sweep(k, alphas, d, ctx["optimizer"], n_atoms=n_atoms)
    ok = all(r.psd_ok is not False for r in recs)
    return {"records": [r.to_dict() for r in recs], "csv": _sweep_csv(recs)}, 0 if ok else 1


def cmd_sweep_p(args, ctx):
    k, d, n_atoms = _sweep_common(args, ctx)
    ps = parse_list(_sweep_value(args, ctx["file"], "ps", "1.9,1.99,2"))
    n_max = _sweep_value(args, ctx["file"], "n_max")
    recs = p_sweep(k, ps, d, ctx["optimizer"], n_atoms=n_atoms,
                   n_max=int(n_max) if n_max is not None else None)
    ok = all(r.psd_ok is not False for r in recs)
    return {"records": [r.to_dict() for r in recs], "csv": _sweep_csv(recs)}, 0 if ok else 1


def _load_minimizer(spec: str, index: int | None):
    path = Path(spec)
    if path.exists():
        data = json.loads(path.read_text())
        if "records" in data.get("result", {}):
            recs = data["result"]["records"]
            return measure_from_dict(recs[-1 if index is None else index]["minimizer"])
    return parse_measure(spec)


def cmd_compare(args, ctx):
    a = _load_minimizer(args.a, args.index_a)
    b = _load_minimizer(args.b, args.index_b)
    try:
        dist = compare_minimizers(a, b)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return {"distance": dist, "a": a.to_dict(), "b": b.to_dict()}, 0


COMMANDS = {
    "expand": cmd_expand,
    "energy": cmd_energy,
    "moments": cmd_moments,
    "minimize-circle": cmd_minimize_circle,
    "minimize-sphere": cmd_minimize_sphere,
    "subsum": cmd_subsum,
    "two-point": cmd_two_point,
    "conjecture": cmd_conjecture,
    "sweep-alpha": cmd_sweep_alpha,
    "sweep-p": cmd_sweep_p,
    "compare": cmd_compare,
}


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyenergy", description="Energy minimization of polynomial potentials on circles and spheres.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("expand", help="convert a potential between bases")
    _add_common(p); _add_potential(p)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--n-max", type=int, default=None)

    p = sub.add_parser("energy", help="energy of a potential against a measure")
    _add_common(p); _add_potential(p)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--measure", required=True, help="uniform:N, point, antipodal or a JSON file")

    p = sub.add_parser("moments", help="trigonometric moments and Toeplitz PSD check")
    _add_common(p)
    p.add_argument("--measure", default=None)
    p.add_argument("--nu", default=None, help="real parts nu_0..nu_n of a candidate moment vector")
    p.add_argument("--nu-im", default=None)
    p.add_argument("--order", type=int, default=10)
    p.add_argument("--check-psd", action="store_true")
    p.add_argument("--tol", type=float, default=1e-9)

    p = sub.add_parser("minimize-circle", help="minimize a potential over measures on the circle")
    _add_common(p); _add_potential(p); _add_optimizer(p)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--n-atoms", type=int, default=8)

    p = sub.add_parser("minimize-sphere", help="minimize over N points on S^d")
    _add_common(p); _add_potential(p); _add_optimizer(p)
    p.add_argument("--n-points", type=int, required=True)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--weights-free", action="store_true")

    p = sub.add_parser("subsum", help="n-gon sub-sums of the Chebyshev coefficients")
    _add_common(p); _add_potential(p)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--n-max", type=int, default=12)
    p.add_argument("--all-n", action="store_true", help="include odd n")
    p.add_argument("--tie-tol", type=float, default=1e-12)

    p = sub.add_parser("two-point", help="best measure on two points")
    _add_common(p); _add_potential(p)
    p.add_argument("--dim", type=int, default=None)

    p = sub.add_parser("conjecture", help="compare minimizer support with critical points")
    _add_common(p); _add_potential(p); _add_optimizer(p)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--all-n", action="store_true")
    p.add_argument("--tie-tol", type=float, default=1e-12)
    p.add_argument("--threshold", type=float, default=1e-3)
    p.add_argument("--n-atoms", default=None, help="comma-separated support sizes to try")

    for name, extra in (("sweep-alpha", "--alphas"), ("sweep-p", "--ps")):
        p = sub.add_parser(name, help=f"parameter sweep ({extra[2:]})")
        _add_common(p); _add_optimizer(p)
        p.add_argument("--k", type=int, default=None)
        p.add_argument("--dim", type=int, default=None)
        p.add_argument("--n-atoms", type=int, default=None)
        p.add_argument(extra, default=None)
        if name == "sweep-p":
            p.add_argument("--n-max", type=int, default=None)

    p = sub.add_parser("compare", help="distance between inner-product profiles of two minimizers")
    _add_common(p)
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--index-a", type=int, default=None)
    p.add_argument("--index-b", type=int, default=None)
    return parser


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n"


def _write(args, payload, result):
    if args.out is None:
        sys.stdout.write(_dump(payload))
        return
    if args.command in ("sweep-alpha", "sweep-p"):
        args.out.write_text(result["csv"])
        args.out.with_suffix(".json").write_text(_dump(payload))
    else:
        args.out.write_text(_dump(payload))


def dispatch(argv=None) -> int:
    parser = make_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv:
        parser.print_usage(sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        file_cfg = _load_config(args.config)
        seed = _resolve_seed(args, file_cfg)
        ctx = {
            "file": file_cfg,
            "potential": _resolve_potential(args, file_cfg),
            "optimizer": _resolve_optimizer(args, file_cfg, seed),
        }
        result, status = COMMANDS[args.command](args, ctx)
    except (UsageError, ValueError) as exc:
        # library ValueErrors (bad sizes, off-domain inputs) are usage errors here
        print(f"polyenergy {args.command}: error: {exc}", file=sys.stderr)
        return 2
    params = {k: (str(v) if isinstance(v, Path) else v) for k, v in sorted(vars(args).items())
              if not k.startswith("opt_") and k not in ("config",)}
    payload = {
        "command": args.command,
        "seed": seed,
        "config": {
            "potential": ctx["potential"],
            "optimizer": ctx["optimizer"].to_dict(),
            "sweep": file_cfg.get("sweep", {}),
            "arguments": params,
            "config_file": str(args.config) if args.config else None,
        },
        "result": result,
    }
    _write(args, payload, result)
    return status


def main():
    sys.exit(dispatch())
