"""Command-line front end.

Subcommands: enum, kernel, conv, qlr, count, heat, validate, cache.
All output goes to stdout or --out as JSON or CSV; identical inputs and
seeds produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Sequence

import numpy as np

from . import configurations as cfg
from . import harmonic as hm
from . import heat, limits, qcoh, spectral

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2


def _parse_parts(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(t) for t in text.replace(" ", "").split(","))


def parse_measure_spec(spec: str, sd: spectral.SpectralData) -> hm.HMeasure:
    """dirac:<parts> | pieri | uniform-neighbors:<parts> | mix:w*spec+w*spec."""
    spec = spec.strip()
    if spec == "pieri":
        return hm.dirac(cfg.step_configuration(sd.k, sd.n), sd)
    if spec.startswith("dirac:"):
        return hm.dirac(cfg.Configuration(_parse_parts(spec[6:]), sd.n), sd)
    if spec.startswith("uniform-neighbors:"):
        return hm.uniform_neighbors(
            cfg.Configuration(_parse_parts(spec[18:]), sd.n), sd)
    if spec.startswith("mix:"):
        parts = spec[4:].split("+")
        weights, measures = [], []
        for p in parts:
            w, sub = p.split("*", 1)
            weights.append(float(w))
            measures.append(parse_measure_spec(sub, sd))
        return hm.mix(measures, weights)
    raise ValueError(f"cannot parse measure spec {spec!r}")


def _emit(payload, args) -> None:
    if getattr(args, "format", "json") == "json":
        text = json.dumps(payload, indent=2, sort_keys=True)
    else:
        rows = payload if isinstance(payload, list) else payload.get("rows", [])
        if not rows:
            text = ""
        else:
            def cell(v):
                s = str(v)
                return f'"{s}"' if "," in s else s

            header = sorted(rows[0])
            lines = [",".join(header)]
            for r in rows:
                lines.append(",".join(cell(r[h]) for h in header))
            text = "\n".join(lines)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _build(args) -> spectral.SpectralData:
    return spectral.build_spectral(args.k, args.n, cap=args.cap)


def cmd_enum(args) -> int:
    rows = [{"index": i, "parts": ",".join(map(str, v.parts)),
             "size": v.size,
             "partition": ",".join(map(str, cfg.to_partition(v)))}
            for i, v in enumerate(cfg.enumerate_configs(args.k, args.n))]
    _emit(rows, args)
    return EXIT_OK


def cmd_kernel(args) -> int:
    sd = _build(args)
    source = cfg.Configuration(_parse_parts(args.source), args.n)
    kern = spectral.markov_kernel(source, sd)
    rows = []
    for i, v in enumerate(sd.vertices):
        for j, w in enumerate(sd.vertices):
            p = kern.matrix[i, j]
            if p > 0:
                rows.append({"from": ",".join(map(str, v.parts)),
                             "to": ",".join(map(str, w.parts)),
                             "prob": repr(float(p))})
    _emit(rows, args)
    return EXIT_OK


def cmd_conv(args) -> int:
    sd = _build(args)
    measures = [parse_measure_spec(s, sd) for s in args.measures]
    base = measures[0]
    out = hm.convolve_sequence(measures[1:], base, sd)
    _emit(hm.measure_to_json(out), args)
    return EXIT_OK


def cmd_qlr(args) -> int:
    sd = _build(args)
    table = qcoh.qlr(_parse_parts(args.lam), _parse_parts(args.mu), sd)
    rows = [{"lambda": args.lam, "mu": args.mu,
             "nu": ",".join(map(str, nu)), "d": d, "coeff": c}
            for (nu, d), c in sorted(table.items())]
    _emit(rows, args)
    return EXIT_OK


def cmd_count(args) -> int:
    sd = _build(args)
    classes = [qcoh.schubert(_parse_parts(c), args.k, args.n)
               for c in args.classes]
    value = qcoh.enumerative_count(classes, args.d, sd)
    _emit({"classes": args.classes, "d": args.d, "count": str(value)}, args)
    return EXIT_OK


def cmd_heat(args) -> int:
    grid = np.linspace(0.0, 2.0 * math.pi, args.points, endpoint=False)
    u = _parse_angles(args.u)
    rows = []
    for x in grid:
        v = [float(x)] + [float(a) for a in u[1:]]
        if args.kernel == "suk":
            v[-1] = sum(u) - sum(v[:-1])
            ev = heat.heat_kernel_suk(u, v, args.gamma, args.t)
        else:
            ev = heat.heat_kernel_uk(
                u, v, heat.HeatParams(args.alpha, args.gamma, args.t))
        rows.append({"x": repr(float(x)), "value": repr(ev.value),
                     "tail_bound": repr(ev.tail_bound)})
    _emit(rows, args)
    return EXIT_OK


def _parse_angles(text: str) -> list[float]:
    return [float(t) for t in text.replace(" ", "").split(",")]


def cmd_validate(args) -> int:
    sd = _build(args)
    k, n, m = args.k, args.n, args.m
    measures = [parse_measure_spec(s, sd) for s in args.measure] or \
        [parse_measure_spec("pieri", sd)]
    seq = [measures[i % len(measures)] for i in range(m)]
    start = cfg.root_configuration(k, n)

    if args.check == "local-limit":
        rep = limits.local_limit_check(seq, start, sd, keep_rows=args.rows)
        payload = rep.to_dict()
        payload["metadata"] = {"seed": args.seed, "check": args.check}
        ok = rep.off_class_mass <= 1e-12
    elif args.check == "fourier":
        stats = hm.aggregate(seq)
        sup_b, _ = limits.decay_window(seq)
        window = limits.coefficient_window(k, max(2 * sup_b ** 2, 4.0), 2 * n)
        rows = []
        worst = 0.0
        for J in window:
            try:
                row = limits.fourier_decay_check(seq, J, sd)
            except ValueError:
                continue
            if row.in_window:
                worst = max(worst, row.error)
                rows.append({"J": ",".join(map(str, J)),
                             "error": repr(row.error),
                             "predicted_re": repr(row.predicted.real),
                             "actual_re": repr(row.actual.real)})
        payload = {"rows": rows, "max_error": repr(worst),
                   "k_stat": repr(stats.k_stat),
                   "metadata": {"seed": args.seed, "check": args.check}}
        ok = math.isfinite(worst)
    elif args.check == "wasserstein":
        stats = hm.aggregate(seq)
        gamma = limits.gamma_coefficient(stats, k)
        alpha = 0.5 * stats.var2
        t0 = (2.0 * math.pi) ** 2 * m / n ** 2
        conv = hm.convolve_sequence(seq, hm.dirac(start, sd), sd)
        window = limits.coefficient_window(k, 30.0 * n * n, 6 * n)
        rot = -2.0 * math.pi * m * stats.mean / (k * n)
        c1 = limits.embedded_fourier_table(conv, window, rotation=rot)
        c2 = limits.multiplier_prediction(start, window, alpha, gamma, t0)
        tg = [10 ** e for e in np.linspace(math.log10(0.5 / n ** 2),
                                           math.log10(0.5), 16)]
        bound = limits.wasserstein_upper_bound(c1, c2, k, tg)
        payload = {"bound": repr(bound), "gamma": repr(gamma),
                   "alpha": repr(alpha), "t0": repr(t0),
                   "window_size": len(window),
                   "metadata": {"seed": args.seed, "check": args.check}}
        ok = math.isfinite(bound)
    elif args.check == "corollary":
        end = _parse_parts(args.end_class)
        balance = k * (n - k) + args.d * n - 2 * sum(end)
        if balance < 0:
            raise ValueError("end classes outweigh the degree budget")
        classes = ([qcoh.schubert(end, k, n)]
                   + [qcoh.single_box(k, n)] * balance
                   + [qcoh.schubert(end, k, n)])
        res = limits.corollary_check(classes, args.d, sd)
        payload = {"exact": str(res.exact), "log_exact": repr(res.log_exact),
                   "log_asymptotic": repr(res.log_asymptotic),
                   "ratio": repr(res.ratio), "m": balance,
                   "metadata": {"seed": args.seed, "check": args.check}}
        ok = 0.75 <= res.ratio <= 1.25
    else:
        raise ValueError(f"unknown check {args.check}")

    _emit(payload, args)
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_cache(args) -> int:
    directory = args.dir or spectral.default_cache_dir()
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, spectral.cache_filename(args.k, args.n))
    if args.action == "build":
        sd = _build(args)
        spectral.save_cache(sd, path)
        _emit({"path": path, "vertices": sd.num_vertices}, args)
        return EXIT_OK
    sd = spectral.load_cache(path)
    _emit({"path": path, "k": sd.k, "n": sd.n,
           "vertices": sd.num_vertices}, args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ringwalk",
        description="Nonintersecting particle walks on a discrete circle.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, need_kn=True):
        if need_kn:
            sp.add_argument("--k", type=int, required=True)
            sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--cap", type=int, default=spectral.DEFAULT_VERTEX_CAP)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=int, default=1,
                        help="worker bound for independent cells (advisory)")
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("enum", help="list all configurations")
    common(sp)
    sp.set_defaults(func=cmd_enum)

    sp = sub.add_parser("kernel", help="emit one transition kernel")
    common(sp)
    sp.add_argument("--source", required=True,
                    help="comma-separated parts of the kernel label")
    sp.set_defaults(func=cmd_kernel)

    sp = sub.add_parser("conv", help="convolve measure specs left to right")
    common(sp)
    sp.add_argument("measures", nargs="+",
                    help="dirac:<parts> | pieri | uniform-neighbors:<parts> "
                         "| mix:w*spec+w*spec")
    sp.set_defaults(func=cmd_conv)

    sp = sub.add_parser("qlr", help="structure-constant table of two classes")
    common(sp)
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.add_argument("--mu", required=True)
    sp.set_defaults(func=cmd_qlr)

    sp = sub.add_parser("count", help="enumerative count of constraint classes")
    common(sp)
    sp.add_argument("--class", dest="classes", action="append", required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("heat", help="tabulate a heat kernel over a grid")
    common(sp, need_kn=False)
    sp.add_argument("--kernel", choices=("suk", "uk"), default="suk")
    sp.add_argument("--u", required=True, help="comma-separated start angles")
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--gamma", type=float, default=1.0)
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--points", type=int, default=64)
    sp.set_defaults(func=cmd_heat)

    sp = sub.add_parser("validate", help="run a limit-theorem check")
    common(sp)
    sp.add_argument("--check", required=True,
                    choices=("fourier", "local-limit", "wasserstein",
                             "corollary"))
    sp.add_argument("--m", type=int, default=0)
    sp.add_argument("--measure", action="append", default=[],
                    help="measure spec for the sequence (cycled); default pieri")
    sp.add_argument("--rows", action="store_true",
                    help="include per-vertex rows in the report")
    sp.add_argument("--d", type=int, default=0, help="map degree (corollary)")
    sp.add_argument("--end-class", default="",
                    help="end-class partition (corollary)")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("cache", help="build or inspect the spectral cache")
    common(sp)
    sp.add_argument("action", choices=("build", "inspect"))
    sp.add_argument("--dir", default=None,
                    help="cache directory (default RINGWALK_CACHE_DIR)")
    sp.set_defaults(func=cmd_cache)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0,) else 0
    try:
        return args.func(args)
    except (ValueError, KeyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
