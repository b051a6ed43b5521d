"""Command line front end.

    reinhardt analyze    --family entropy_ball --degree 200 --out out/
    reinhardt synthesize --domain ball --n-max 32 --j-max 40 --out out/
    reinhardt blowup     --domain polydisc --point 1,0.3 --stages 15 --out out/
    reinhardt hull       --polydiscs "1,2;2,1" --out out/
    reinhardt recover    --function geometric_product --radii 0.5,0.5 --indices "2,3"
    reinhardt stardom    --domain ball --rays 16 --out out/

Exit status: 0 on success, 2 on input errors, 3 on numerical failures.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import analyze, coeffs, logconvex, recover, stardom, synthesize
from .svg import line_plot

log = logging.getLogger("reinhardt")

EXIT_INPUT = 2
EXIT_NUMERIC = 3

DEFAULTS = {
    "n": 2,
    "degree": None,
    "window": 0.02,
    "band": 0.01,
    "out": ".",
    "seed": 0,
    "coeffs": None,
    "family": None,
    "domain": None,
    "n_max": 32,
    "j_max": 40,
    "point": None,
    "stages": 15,
    "polydiscs": None,
    "function": None,
    "radii": "0.5,0.5",
    "nodes": 256,
    "indices": None,
    "max_index_degree": None,
    "rays": 16,
}


class InputError(ValueError):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in str(text).split(",")]
    except ValueError as exc:
        raise InputError(f"bad number list {text!r}") from exc


def _fmt(v) -> str:
    v = float(v) + 0.0  # no negative zero in tables
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(v)


def _writer(path):
    fh = open(path, "w", newline="", encoding="utf-8")
    return fh, csv.writer(fh, lineterminator="\n")


def _oracle(cfg) -> coeffs.CoefficientOracle:
    if cfg["coeffs"]:
        try:
            return coeffs.load_table(cfg["coeffs"])
        except (OSError, coeffs.CoefficientFileError) as exc:
            raise InputError(str(exc)) from exc
    if cfg["family"]:
        try:
            return coeffs.from_tag(cfg["family"], int(cfg["n"]))
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    raise InputError("need --coeffs FILE or --family TAG")


def _degree(cfg, oracle) -> int:
    if cfg["degree"]:
        return int(cfg["degree"])
    if isinstance(oracle, coeffs.TableOracle):
        return max(oracle.max_degree, 4)
    return 100


def _log_domain(cfg) -> logconvex.ConvexLogDomain:
    tag = cfg["domain"]
    if not tag:
        raise InputError("need --domain TAG|FILE")
    try:
        if Path(tag).suffix == ".json" and Path(tag).exists():
            return logconvex.load_domain(tag)
        return logconvex.domain_from_tag(tag, int(cfg["n"]))
    except (OSError, ValueError, KeyError) as exc:
        raise InputError(str(exc)) from exc


def direction_grid(n: int) -> np.ndarray:
    return logconvex.simplex_grid(n, max(2, {2: 20, 3: 8}.get(n, 24 // n)))


def _log_profile(oracle, K, s1_values, lo=-8.0, hi=4.0, iters=60):
    # psi-hat is non-decreasing in each coordinate: bisection for psi-hat(s1, s2) = 0
    s1 = np.asarray(s1_values, dtype=float)
    a = np.full_like(s1, lo)
    b = np.full_like(s1, hi)
    fa = analyze.psi_batch(oracle, np.column_stack([s1, a]), K)
    fb = analyze.psi_batch(oracle, np.column_stack([s1, b]), K)
    valid = (fa < 0) & (fb > 0)
    for _ in range(iters):
        m = 0.5 * (a + b)
        fm = analyze.psi_batch(oracle, np.column_stack([s1, m]), K)
        a = np.where(fm < 0, m, a)
        b = np.where(fm < 0, b, m)
    return np.where(valid, 0.5 * (a + b), np.nan)


def cmd_analyze(cfg) -> dict:
    oracle = _oracle(cfg)
    n = oracle.dimension
    K = _degree(cfg, oracle)
    eps = float(cfg["window"])
    out = Path(cfg["out"])

    fh, w = _writer(out / "support.csv")
    with fh:
        w.writerow([f"alpha_{i + 1}" for i in range(n)] + ["h_hat", "achieving_J", "K", "epsilon"])
        for alpha in direction_grid(n):
            try:
                est = analyze.support_estimate(oracle, alpha, K, eps)
                row = [_fmt(est.value), " ".join(map(str, est.achieving_index)), K, _fmt(est.window)]
            except analyze.EmptyWindowError:
                # no strand near alpha: support function is +inf there
                row = ["inf", "", K, _fmt(eps)]
            w.writerow([_fmt(a) for a in alpha] + row)

    m = 41 if n == 2 else max(3, int(round(4000 ** (1 / n))))
    axis = np.linspace(-3.0, 1.0, m)
    S = np.stack(np.meshgrid(*([axis] * n), indexing="ij"), axis=-1).reshape(-1, n)
    psi = analyze.psi_batch(oracle, S, K)
    analyze.write_psi_csv(out / "psi.csv", S, psi)

    thetas = np.linspace(0.0, math.pi / 2, 41)
    if n == 2:
        dirs = np.column_stack([np.cos(thetas), np.sin(thetas)])
    else:
        g = direction_grid(n)
        dirs = np.sqrt(g)  # unit vectors in the positive orthant
    radial = [analyze.radial_estimate(oracle, v, K) for v in dirs]
    fh, w = _writer(out / "radial.csv")
    with fh:
        w.writerow([f"v_{i + 1}" for i in range(n)] + ["R_hat"])
        for v, r in zip(dirs, radial):
            w.writerow([_fmt(x) for x in v] + [_fmt(r)])

    if n == 2:
        pts = [r * v if math.isfinite(r) else (math.nan, math.nan) for r, v in zip(radial, dirs)]
        xs = [float(p[0]) for p in pts]
        ys = [float(p[1]) for p in pts]
        line_plot(out / "profile_absolute.svg", [(oracle.name, xs, ys)],
                  title="absolute profile", xlabel="|z1|", ylabel="|z2|")
        s1 = np.linspace(-3.0, 1.0, 81)
        s2 = _log_profile(oracle, K, s1)
        line_plot(out / "profile_log.svg", [(oracle.name, list(s1), list(s2))],
                  title="logarithmic profile", xlabel="log|z1|", ylabel="log|z2|")
    return {"K": K, "directions": len(direction_grid(n))}


def cmd_synthesize(cfg) -> dict:
    dom = _log_domain(cfg)
    spec = synthesize.DomainSpec(dom, seed=int(cfg["seed"]))
    stream = synthesize.synthesize_series(spec, int(cfg["n_max"]), int(cfg["j_max"]))
    out = Path(cfg["out"])
    stream.write_jsonl(out / "series.jsonl")
    K = int(cfg["degree"]) if cfg["degree"] else None
    rows = synthesize.round_trip(dom, stream, K=K, eps=float(cfg["window"]))
    fh, w = _writer(out / "round_trip.csv")
    with fh:
        w.writerow([f"alpha_{i + 1}" for i in range(dom.dimension)] + ["h", "h_hat", "abs_error"])
        for r in rows:
            w.writerow([_fmt(a) for a in r.alpha] + [_fmt(r.h), _fmt(r.h_hat), _fmt(r.error)])
    max_err = max(r.error for r in rows)
    return {"terms": len(stream), "directions": len(rows), "max_round_trip_error": max_err}


def cmd_blowup(cfg) -> dict:
    dom = _log_domain(cfg)
    if not cfg["point"]:
        raise InputError("need --point p1,p2,...")
    p = _floats(cfg["point"])
    if len(p) != dom.dimension:
        raise InputError("point dimension does not match the domain")
    stream = synthesize.blowup_series(synthesize.DomainSpec(dom), p, int(cfg["stages"]))
    out = Path(cfg["out"])
    stream.write_jsonl(out / "blowup.jsonl")
    fh, w = _writer(out / "stages.csv")
    exceeded = True
    with fh:
        w.writerow(["k"] + [f"p_{i + 1}" for i in range(dom.dimension)]
                   + ["J", "n_k", "log_c_k", "log_sup_bound", "log2_bound", "log_f_at_pk", "f_at_pk", "exceeds_k_minus_1"])
        for st in stream.stages:
            lf = stream.log_eval(st.point)
            ok = lf > math.log(st.k - 1) if st.k > 1 else True
            exceeded &= ok
            fval = math.exp(lf) if lf < 700 else math.inf
            w.writerow([st.k] + [_fmt(x) for x in st.point]
                       + [" ".join(map(str, st.index)), st.power, _fmt(st.log_c), _fmt(st.log_sup_bound),
                          _fmt(-st.k * math.log(2)), _fmt(lf), _fmt(fval), int(ok)])
    return {"stages": len(stream.stages), "all_exceed": bool(exceeded)}


def _parse_polydiscs(text) -> list[list[float]]:
    if not text:
        raise InputError("need --polydiscs 'r11,r12;r21,r22;...'")
    return [_floats(part) for part in str(text).split(";") if part.strip()]


def cmd_hull(cfg) -> dict:
    radii = _parse_polydiscs(cfg["polydiscs"])
    try:
        hull = logconvex.log_convex_hull(radii)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    out = Path(cfg["out"])
    doc = hull.to_json(direction_grid(hull.dimension))
    with open(out / "hull.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")
    if hull.dimension == 2:
        series = []
        lo = float(np.min(hull.points)) - 2.0
        for i, p in enumerate(hull.points):
            series.append((f"polydisc {i + 1}", [lo, p[0], p[0]], [p[1], p[1], lo]))
        # hull boundary: walk the vertices in order of the first coordinate
        P = hull.points[np.argsort(hull.points[:, 0])]
        verts = [P[0]]
        for q in P[1:]:
            while len(verts) >= 2 and _cross(verts[-2], verts[-1], q) >= 0:
                verts.pop()
            verts.append(q)
        verts = [v for v in verts if not any(np.all(u >= v) and np.any(u > v) for u in P)]
        xs = [lo] + [v[0] for v in verts] + [verts[-1][0]]
        ys = [verts[0][1]] + [v[1] for v in verts] + [lo]
        series.append(("log-convex hull", xs, ys))
        line_plot(out / "hull.svg", series, title="logarithmic image", xlabel="s1", ylabel="s2")
    return {"halfspaces": len(doc["halfspaces"])}


def _cross(o, a, b) -> float:
    return float((a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]))


def _indices(cfg, n) -> list[tuple]:
    if cfg["indices"]:
        return [tuple(int(x) for x in part.split(",")) for part in str(cfg["indices"]).split(";") if part.strip()]
    top = int(cfg["max_index_degree"] or 3)
    from .lattice import enumerate_by_degree

    return [tuple(J) for k in range(top + 1) for J in enumerate_by_degree(n, k)]


def cmd_recover(cfg) -> dict:
    radii = _floats(cfg["radii"])
    n = len(radii)
    if cfg["function"]:
        try:
            f = recover.evaluator_from_tag(cfg["function"])
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    else:
        oracle = _oracle(cfg)
        f = recover.truncated_series(oracle, _degree(cfg, oracle))
    sampler = recover.TorusSampler(f, radii, int(cfg["nodes"]))
    out = Path(cfg["out"])
    fh, w = _writer(out / "recover.csv")
    rows = 0
    with fh:
        w.writerow([f"K_{i + 1}" for i in range(n)] + ["re", "im", "abs", "cauchy_lhs", "cauchy_rhs", "cauchy_ok"])
        for K in _indices(cfg, n):
            if len(K) != n:
                raise InputError(f"index {K} does not match dimension {n}")
            try:
                c = recover.recover_coefficient(sampler, K)
                lhs, rhs, ok = recover.cauchy_estimate_check(sampler, K)
            except recover.AliasingError as exc:
                raise InputError(str(exc)) from exc
            w.writerow(list(K) + [_fmt(c.real), _fmt(c.imag), _fmt(abs(c)), _fmt(lhs), _fmt(rhs), int(ok)])
            rows += 1
    return {"coefficients": rows}


def cmd_stardom(cfg) -> dict:
    n = int(cfg["n"])
    if cfg["coeffs"] or cfg["family"]:
        oracle = _oracle(cfg)
        d = stardom.from_series(oracle, _degree(cfg, oracle))
        n = oracle.dimension
    elif cfg["domain"]:
        try:
            d = stardom.domain_from_tag(cfg["domain"], n)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        n = d.dimension
    else:
        raise InputError("need --domain TAG or a coefficient source")
    rng = np.random.default_rng(int(cfg["seed"]))
    count = int(cfg["rays"])
    if n == 2:
        th = np.linspace(0.0, 2 * math.pi, count, endpoint=False)
        rays = np.column_stack([np.cos(th), np.sin(th)])
    else:
        rays = rng.normal(size=(count, n))
        rays /= np.linalg.norm(rays, axis=1)[:, None]
    check = stardom.proper_star_check(d, rays)
    out = Path(cfg["out"])
    if check.reason and not check.offending:
        raise InputError(check.reason)
    fh, w = _writer(out / "stardom.csv")
    with fh:
        w.writerow([f"v_{i + 1}" for i in range(n)] + ["radial", "gauge", "phi_half"])
        for v in rays:
            rho = stardom.radial(d, v)
            g = stardom.gauge(d, v)
            phi = stardom.phi_map(d, 0.5 * v)
            w.writerow([_fmt(x) for x in v] + [_fmt(rho), _fmt(g), " ".join(_fmt(x) for x in phi)])
    with open(out / "proper_star.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump({"ok": check.ok, "offending": [list(map(float, v)) for v in check.offending],
                   "reason": check.reason}, fh, indent=1)
        fh.write("\n")
    return {"proper": check.ok}


COMMANDS = {
    "analyze": cmd_analyze,
    "synthesize": cmd_synthesize,
    "blowup": cmd_blowup,
    "hull": cmd_hull,
    "recover": cmd_recover,
    "stardom": cmd_stardom,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reinhardt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON file with default values; flags win")
        p.add_argument("--n", type=int)
        p.add_argument("--degree", type=int, help="degree cutoff K")
        p.add_argument("--window", type=float, help="direction window EPS")
        p.add_argument("--band", type=float, help="membership margin DELTA")
        p.add_argument("--out")
        p.add_argument("--seed", type=int)
        p.add_argument("--coeffs", help="JSONL coefficient file")
        p.add_argument("--family", help="builtin coefficient family tag")
        p.add_argument("--domain", help="domain tag or JSON file")
        p.add_argument("--n-max", dest="n_max", type=int)
        p.add_argument("--j-max", dest="j_max", type=int)
        p.add_argument("--point")
        p.add_argument("--stages", type=int)
        p.add_argument("--polydiscs")
        p.add_argument("--function")
        p.add_argument("--radii")
        p.add_argument("--nodes", type=int)
        p.add_argument("--indices")
        p.add_argument("--max-index-degree", dest="max_index_degree", type=int)
        p.add_argument("--rays", type=int)
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def resolve_config(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"config: {exc}") from exc
        unknown = set(data) - set(DEFAULTS)
        if unknown:
            raise InputError(f"config: unknown keys {sorted(unknown)}")
        cfg.update(data)
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    cfg["command"] = args.command
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        out = Path(cfg["out"])
        out.mkdir(parents=True, exist_ok=True)
        summary = COMMANDS[args.command](cfg)
        with open(out / "run_config.json", "w", encoding="utf-8", newline="\n") as fh:
            json.dump(cfg, fh, indent=1, sort_keys=True)
            fh.write("\n")
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (analyze.EmptyWindowError, logconvex.SeparationError, synthesize.SynthesisError,
            logconvex.DegenerateDefiningFunction, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(json.dumps(summary, default=float))
    return 0


if __name__ == "__main__":
    sys.exit(main())
