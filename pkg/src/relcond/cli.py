"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 unsupported spectral structure,
4 RLGE failure, 5 numeric range error, 6 preset reference check failed.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

import numpy as np

from . import __version__
from .asymptotic import AsymptoticModel, euclid_geometry, osf, ot_bounds
from .condition import PerturbationSpec, k_directional, k_worst, propagators
from .errors import InputError, RelcondError, UnsupportedStructureError
from .experiments import (census_v1w1, componentwise_ratio_study, fj_maxima_study,
                          ratio_r_study, SAMPLERS)
from .linalg import P2, as_matrix, as_vector, parse_norm
from .models import evaluate_preset, jordan_model, preset, preset_names
from .onset import eps_curves, measured_onset, onset_time
from .spectrum import COMPLEX_PAIR, characteristic_time

EXIT_PRESET_CHECK = 6
SEED_ENV = "RELCOND_SEED"

ANALYZE_COLUMNS = ("t", "K_direct", "K_directional", "K_inf", "K_inf_directional", "OSF", "OT",
                   "lower_bound", "upper_bound", "delta", "precision_bound")


# --- parsing ----------------------------------------------------------------


def _parse_entry(tok: str):
    try:
        return float(tok)
    except ValueError:
        pass
    if tok.endswith("i"):
        try:
            return complex(tok[:-1] + "j")
        except ValueError:
            pass
    raise InputError(f"cannot parse matrix entry {tok!r}")


def _split(line: str):
    return line.replace(",", " ").split()


def read_matrix(path: str) -> np.ndarray:
    """Read a matrix file: one row per line, comma or whitespace separated.

    Complex entries are written ``a+bi``; blank lines and text after ``#``
    are ignored.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read matrix file {path!r}: {exc}") from exc
    rows = []
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append([_parse_entry(tok) for tok in _split(line)])
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise InputError(f"matrix file {path!r} is empty or ragged")
    M = np.array(rows)
    if np.iscomplexobj(M) and not np.any(M.imag):
        M = M.real
    return as_matrix(M, "A", square=True)


def read_vector(arg: str | None, name: str, n: int | None = None):
    """Parse a comma-separated inline vector or a single-column file."""
    if arg is None:
        return None
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            toks = [t for line in fh for t in _split(line.split("#", 1)[0])]
    else:
        toks = _split(arg)
    if not toks:
        raise InputError(f"{name} is empty")
    v = np.array([_parse_entry(t) for t in toks])
    if np.iscomplexobj(v) and not np.any(v.imag):
        v = v.real
    return as_vector(v, name, n=n)


def fmt(x) -> str:
    """Round-trip float formatting."""
    return "%.17g" % x


class _Out:
    def __init__(self, path):
        self.path = path

    def __enter__(self):
        self.fh = open(self.path, "w", newline="", encoding="utf-8") if self.path else sys.stdout
        return self.fh

    def __exit__(self, *exc):
        if self.path:
            self.fh.close()
        else:
            self.fh.flush()


def _write_meta(fh, meta: dict):
    for k, v in meta.items():
        fh.write(f"# {k}={v}\n")


# --- problem assembly -------------------------------------------------------


def _problem(args):
    """Matrix, model, vectors and grid from ``--matrix`` or ``--preset``."""
    if bool(args.matrix) == bool(args.preset):
        raise InputError("give exactly one of --matrix or --preset")
    sc = None
    if args.preset:
        sc = preset(args.preset)
        A = sc.A
        norm = parse_norm(args.norm) if args.norm else sc.norm
        if norm == sc.norm:
            model = sc.model()
        elif "jordan" in sc.extra:
            model = jordan_model(sc.extra["jordan"], norm)
        else:
            model = AsymptoticModel.from_matrix(A, norm, dec=sc.extra.get("decomposition"))
        source = f"preset:{sc.name}"
    else:
        A = read_matrix(args.matrix)
        norm = parse_norm(args.norm or "2")
        model = AsymptoticModel.from_matrix(A, norm)
        source = f"file:{args.matrix}"
    n = A.shape[0]
    y0 = read_vector(args.y0, "y0", n)
    if y0 is None:
        if sc is None:
            raise InputError("--y0 is required with --matrix")
        y0 = sc.y0
    yt = read_vector(getattr(args, "y0_tilde", None), "y0_tilde", n)
    z0 = read_vector(getattr(args, "z0", None), "z0", n)
    if sc is not None and yt is None and z0 is None:
        yt, z0 = sc.y0_tilde, sc.z0_dir
    eps = None
    if yt is not None:
        spec = PerturbationSpec.from_perturbed(y0, yt, norm)
        eps = spec.epsilon
        if z0 is None:
            z0 = spec.z0_dir
    t_hat = sc.t_hat if sc is not None else \
        characteristic_time(model.dec.values if model.dec is not None else np.linalg.eigvals(A))
    if args.points < 2:
        raise InputError("--points must be at least 2")
    if args.tmax_chars is None and sc is not None:
        tmax = sc.horizon
    else:
        chars = 50.0 if args.tmax_chars is None else args.tmax_chars
        if not chars > 0:
            raise InputError("--tmax-chars must be positive")
        tmax = chars * t_hat
    times = np.linspace(0.0, tmax, args.points)
    return {"A": A, "model": model, "norm": norm, "y0": y0, "z0": z0, "eps": eps,
            "times": times, "t_hat": t_hat, "source": source, "scenario": sc}


def _nan(size):
    return np.full(size, np.nan)


def analyze_table(pb) -> dict:
    """Columns of the ``analyze`` CSV."""
    A, m, norm, y0, z0, t = pb["A"], pb["model"], pb["norm"], pb["y0"], pb["z0"], pb["times"]
    E, _ = propagators(A, t)
    cols = {"t": t, "K_direct": k_worst(A, y0, norm, t, props=E).values}
    cols["K_directional"] = (k_directional(A, y0, z0, norm, t, props=E).values
                             if z0 is not None else _nan(t.size))
    Ki = m.k_inf_worst(y0, t).values
    cols["K_inf"] = Ki
    cols["K_inf_directional"] = (m.k_inf_directional(y0, z0, t).values
                                 if z0 is not None else _nan(t.size))
    lo = hi = np.nan
    if m.rm is not None and m.rm.kind == COMPLEX_PAIR:
        o = osf(m.rm, y0)
        cols["OSF"] = np.full(t.size, o)
        cols["OT"] = Ki / o
        if norm == P2:
            b = ot_bounds(euclid_geometry(m.rm), y0)
            lo, hi = b["lo"], b["hi"]
    elif not np.any(m.q1.omegas):
        cols["OSF"] = Ki.copy()
        cols["OT"] = np.ones(t.size)
        lo = hi = 1.0
    else:
        cols["OSF"] = _nan(t.size)
        cols["OT"] = _nan(t.size)
    cols["lower_bound"] = np.full(t.size, lo)
    cols["upper_bound"] = np.full(t.size, hi)
    cols["delta"] = (pb["eps"] * cols["K_directional"] if pb["eps"] is not None and z0 is not None
                     else _nan(t.size))
    if m.part is not None and m.part.q == 1:
        cols["precision_bound"] = np.zeros(t.size)
    else:
        try:
            cols["precision_bound"] = eps_curves(m, y0, times=t).precision_worst
        except UnsupportedStructureError:
            cols["precision_bound"] = _nan(t.size)
    return cols


# --- commands ---------------------------------------------------------------


def cmd_analyze(args) -> int:
    pb = _problem(args)
    cols = analyze_table(pb)
    t = pb["times"]
    meta = {"command": "analyze", "source": pb["source"], "norm": pb["norm"],
            "t_hat": fmt(pb["t_hat"]), "kind": pb["model"].kind,
            "grid": f"linspace(0, {fmt(t[-1])}, {t.size})",
            "epsilon": "none" if pb["eps"] is None else fmt(pb["eps"]),
            "bounds": "oscillating-term bounds (1 for a real rightmost eigenvalue)",
            "version": __version__}
    with _Out(args.out) as fh:
        _write_meta(fh, meta)
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(ANALYZE_COLUMNS)
        for i in range(t.size):
            w.writerow([fmt(cols[c][i]) for c in ANALYZE_COLUMNS])
    return 0


def cmd_onset(args) -> int:
    pb = _problem(args)
    m, y0, target = pb["model"], pb["y0"], args.precision
    if not target > 0:
        raise InputError("--precision must be positive")
    ot = onset_time(m, y0, target)
    lines = [f"characteristic_time={fmt(m.t_hat)}", f"norm={pb['norm']}",
             f"target_precision={fmt(target)}"]
    if ot["value"] is None:
        lines.append(f"formula_bound_chars=unavailable ({ot['reason']})")
    else:
        lines.append(f"formula_bound_chars={fmt(ot['value'])}")
        lines.append(f"formula_bound_time={fmt(ot['value'] * ot['t_hat'])}")
        for r in ot["terms"]:
            parts = " ".join(f"{k}={fmt(r[k])}" for k in
                             ("log2", "log_target", "log_q", "log_V1", "log_f", "log_w", "total"))
            lines.append(f"level_{r['j']}: {parts}")
    t = pb["times"]
    rep = None
    if m.part is not None and m.part.q > 1:
        rep = eps_curves(m, y0, times=t, target=target)
        lines.append("bound_t_star_chars=" + ("none" if rep.t_star is None
                                              else fmt(rep.t_star / m.t_hat)))
    if m.A is not None:
        mo = measured_onset(m, y0, target, t)
        lines.append("empirical_t_star_chars=" + ("none" if mo["t"] is None
                                                  else fmt(mo["t_chars"])))
    print("\n".join(lines))
    if args.out:
        with _Out(args.out) as fh:
            _write_meta(fh, {"command": "onset", "source": pb["source"], "norm": pb["norm"],
                             "target": fmt(target), "t_hat": fmt(m.t_hat)})
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("t", "eps_y", "eps_worst", "precision_worst", "deviation"))
            dev = mo["deviation"] if m.A is not None else _nan(t.size)
            for i in range(t.size):
                row = (t[i], rep.eps_y[i] if rep else 0.0, rep.eps_worst[i] if rep else 0.0,
                       rep.precision_worst[i] if rep else 0.0, dev[i])
                w.writerow([fmt(x) for x in row])
    return 0


def _write_study(args, res, print_summary=True):
    with _Out(args.out) as fh:
        meta = dict(res.meta)
        meta["tallies"] = ";".join(f"{k}:{v}" for k, v in sorted(res.tallies.items()))
        _write_meta(fh, meta)
        keys = list(res.records)
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["instance"] + keys)
        size = len(res.records[keys[0]])
        for i in range(size):
            row = [str(i)]
            for k in keys:
                v = res.records[k][i]
                row.append(v if isinstance(v, str) else fmt(v))
            w.writerow(row)
        summary = _summary_lines(res)
        for line in summary:
            fh.write(f"# summary {line}\n")
    if args.out and print_summary:
        print("\n".join(_summary_lines(res)))
    return 0


def _summary_lines(res):
    out = []
    for name, s in res.summary.items():
        out.append(name + " " + " ".join(f"{k}={fmt(v) if isinstance(v, float) else v}"
                                        for k, v in s.as_dict().items()))
    for k, v in res.extra.items():
        if isinstance(v, dict):
            v = ";".join(f"{kk:g}:{fmt(vv)}" for kk, vv in v.items())
        elif isinstance(v, float):
            v = fmt(v)
        out.append(f"{k}={v}")
    d = res.tallies.get("draws", 0)
    out.append(f"draws={d} rejection_rate={fmt(res.rejection_rate)}")
    return out


def cmd_census(args) -> int:
    th = tuple(float(x) for x in _split(args.thresholds)) if args.thresholds else ()
    res = census_v1w1(args.n or 5, args.trials or 5000, args.seed, th, args.sampler,
                      args.workers)
    return _write_study(args, res)


def cmd_ratio(args) -> int:
    norm = parse_norm(args.norm or "2")
    res = ratio_r_study(args.n or 5, args.trials or 500, args.seed, norm, args.sampler,
                        args.rightmost, args.tmax_chars or 50.0, args.points, args.workers)
    return _write_study(args, res)


def cmd_components(args) -> int:
    res = componentwise_ratio_study(args.kind, args.trials or 2000, args.seed, args.n or 100,
                                    a22_sign=args.a22_sign, workers=args.workers)
    return _write_study(args, res)


def cmd_fjmax(args) -> int:
    norm = parse_norm(args.norm or "2")
    res = fj_maxima_study(args.n or 100, args.trials or 500, args.seed, args.sampler, norm,
                          args.workers)
    return _write_study(args, res)


def cmd_model(args) -> int:
    if args.action == "list":
        for name in preset_names():
            print(f"{name}: {preset(name).description}")
        return 0
    names = [args.name] if args.name else preset_names()
    failed = 0
    for name in names:
        for c in evaluate_preset(name):
            status = "PASS" if c.passed else "FAIL"
            failed += not c.passed
            print(f"{status} {name} {c.quantity} computed={fmt(c.computed)} "
                  f"expected {c.expected.describe()}")
    return EXIT_PRESET_CHECK if failed else 0


# --- entry point ------------------------------------------------------------


def _default_seed() -> int:
    v = os.environ.get(SEED_ENV)
    if v is None:
        return 0
    try:
        return int(v)
    except ValueError:
        raise InputError(f"{SEED_ENV} must be an integer, got {v!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="relcond",
                                description="Relative-error conditioning of y0 -> exp(tA) y0.")
    p.add_argument("--version", action="version", version=f"relcond {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, problem=True):
        sp.add_argument("--norm", help="1, 2, inf or mean-p:P")
        sp.add_argument("--tmax-chars", type=float, help="horizon in characteristic times")
        sp.add_argument("--points", type=int, default=1000)
        sp.add_argument("--out", help="output CSV path (default: stdout)")
        if problem:
            sp.add_argument("--matrix", help="matrix file")
            sp.add_argument("--preset", choices=preset_names())
            sp.add_argument("--y0")
            sp.add_argument("--y0-tilde", dest="y0_tilde")
            sp.add_argument("--z0")

    def study(sp):
        common(sp, problem=False)
        sp.add_argument("--seed", type=int, default=None, help=f"default: ${SEED_ENV} or 0")
        sp.add_argument("--trials", type=int)
        sp.add_argument("--n", type=int)
        sp.add_argument("--sampler", choices=sorted(SAMPLERS), default="gaussian")
        sp.add_argument("--workers", type=int, default=None)

    sp = sub.add_parser("analyze", help="condition-number curves as CSV")
    common(sp)
    sp.set_defaults(func=cmd_analyze)
    sp = sub.add_parser("onset", help="onset-of-asymptotics report")
    common(sp)
    sp.add_argument("--precision", type=float, default=0.1)
    sp.set_defaults(func=cmd_onset)
    sp = sub.add_parser("census", help="V1/W1 census")
    study(sp)
    sp.add_argument("--thresholds", default="0.9,0.99,0.999,0.9999")
    sp.set_defaults(func=cmd_census)
    sp = sub.add_parser("ratio", help="ratio of maximal direct to asymptotic condition numbers")
    study(sp)
    sp.add_argument("--rightmost", default="auto",
                    choices=("auto", "balanced", "real", "complex", "any"))
    sp.set_defaults(func=cmd_ratio)
    sp = sub.add_parser("components", help="componentwise-ratio study")
    study(sp)
    sp.add_argument("--kind", choices=("gdpnd", "general"), default="gdpnd")
    sp.add_argument("--a22-sign", type=float, choices=(1.0, -1.0), default=1.0,
                    help="sign of the sampled a22 in the gdpnd study")
    sp.set_defaults(func=cmd_components)
    sp = sub.add_parser("fjmax", help="maxima of log f_j")
    study(sp)
    sp.set_defaults(func=cmd_fjmax)
    sp = sub.add_parser("model", help="list presets or check their reference values")
    sp.add_argument("action", choices=("list", "run"))
    sp.add_argument("name", nargs="?", choices=preset_names())
    sp.set_defaults(func=cmd_model)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if getattr(args, "seed", 0) is None:
            args.seed = _default_seed()
        return args.func(args)
    except RelcondError as exc:
        print(f"relcond: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
