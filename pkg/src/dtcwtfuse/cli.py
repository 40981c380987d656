"""Command line front end: fuse image pairs, score results, generate
phantom test pairs, and sweep the method/rule grid to CSV.

Exit codes: 0 on success, 1 on any runtime or data error (one-line
diagnostic on stderr), 2 on flag misuse (argparse).
"""

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from .feature_select import PsoConfig
from .fusion import METHODS, RULES, FusionSpec, fuse_pipeline
from .image_io import GrayImage, generate_phantom_pair, read_image, write_image
from .metrics import evaluate

__all__ = ["build_parser", "main"]

BENCH_HEADER = "method,lfc,hfc,en,sd,ssim,cc,psnr,elapsed_ms"

# The six rule pairings swept by `bench`, LFC rule first.
BENCH_COMBOS = (("avg", "avg"), ("avg", "max"), ("max", "avg"),
                ("max", "max"), ("min", "avg"), ("min", "max"))


def _num(value):
    return "inf" if math.isinf(value) else repr(float(value))


def _add_pso_flags(p):
    g = p.add_argument_group("pso hyperparameters")
    g.add_argument("--pso-pop", type=int, default=30, metavar="N",
                   help="swarm size (default 30)")
    g.add_argument("--pso-iters", type=int, default=100, metavar="N",
                   help="iterations per subband (default 100)")
    g.add_argument("--pso-inertia", type=float, default=0.7, metavar="W",
                   help="inertia weight (default 0.7)")
    g.add_argument("--pso-c1", type=float, default=1.5, metavar="PHI",
                   help="cognitive factor (default 1.5)")
    g.add_argument("--pso-c2", type=float, default=1.5, metavar="PHI",
                   help="social factor (default 1.5)")


def _pso_config(args):
    return PsoConfig(n=args.pso_pop, i_max=args.pso_iters,
                     w1=args.pso_inertia, phi1=args.pso_c1,
                     phi2=args.pso_c2)


def _fusion_spec(args):
    return FusionSpec(method=args.method, lfc_rule=args.lfc,
                      hfc_rule=args.hfc, levels=args.levels,
                      seed=args.seed, pso=_pso_config(args))


def _normalized_image(arr):
    """Map any real array onto 0..255 by min-max stretch (flat -> 0)."""
    arr = np.asarray(arr, dtype=np.float64)
    lo = arr.min()
    span = arr.max() - lo
    if span == 0.0:
        return GrayImage(np.zeros_like(arr), 255.0)
    return GrayImage((arr - lo) * (255.0 / span), 255.0)


def _dump_pyramid(pyr, outdir):
    """Write every subband as a stretched PGM for visual inspection.

    Lowpass trees go to lowpass_aa/ab/ba/bb.pgm; oriented bands to
    L<level>_O<index>.pgm holding the complex magnitude.
    """
    os.makedirs(outdir, exist_ok=True)
    for tag, arr in zip(("aa", "ab", "ba", "bb"), pyr.lowpass):
        write_image(_normalized_image(arr),
                    os.path.join(outdir, "lowpass_%s.pgm" % tag))
    for i, bands in enumerate(pyr.highpass):
        for k in range(6):
            name = "L%d_O%d.pgm" % (i + 1, k)
            write_image(_normalized_image(np.abs(bands[:, :, k])),
                        os.path.join(outdir, name))


def cmd_fuse(args):
    a = read_image(args.a)
    b = read_image(args.b)
    spec = _fusion_spec(args)
    if args.dump_pyramid:
        fused, pyr = fuse_pipeline(a, b, spec, want_pyramid=True)
        _dump_pyramid(pyr, args.dump_pyramid)
    else:
        fused = fuse_pipeline(a, b, spec)
    write_image(fused, args.out)
    if args.report == "json":
        print(json.dumps({"a": evaluate(a, fused).to_dict(),
                          "b": evaluate(b, fused).to_dict()}))
    return 0


def cmd_metrics(args):
    report = evaluate(read_image(args.ref), read_image(args.fused))
    print(report.to_csv() if args.format == "csv" else report.to_json())
    return 0


def cmd_gen(args):
    a, b = generate_phantom_pair(args.size, args.seed)
    write_image(a, args.out_a)
    write_image(b, args.out_b)
    return 0


def cmd_bench(args):
    a = read_image(args.a)
    b = read_image(args.b)
    rows = []
    for method in ("pca", "pso"):
        for lfc, hfc in BENCH_COMBOS:
            spec = FusionSpec(method=method, lfc_rule=lfc, hfc_rule=hfc,
                              levels=args.levels, seed=args.seed,
                              pso=_pso_config(args))
            t0 = time.perf_counter()
            fused = fuse_pipeline(a, b, spec)
            elapsed_ms = (time.perf_counter() - t0) * 1e3
            ra = evaluate(a, fused)
            rb = evaluate(b, fused)
            rows.append({"method": method, "lfc": lfc, "hfc": hfc,
                         "en": ra.en, "sd": ra.sd,
                         "ssim": 0.5 * (ra.ssim + rb.ssim),
                         "cc": 0.5 * (ra.cc + rb.cc),
                         "psnr": 0.5 * (ra.psnr + rb.psnr),
                         "elapsed_ms": elapsed_ms})
            if args.verbose:
                for tag, rep in (("a", ra), ("b", rb)):
                    print("# %s %s-%s vs %s: ssim=%s cc=%s psnr=%s"
                          % (method, lfc, hfc, tag, _num(rep.ssim),
                             _num(rep.cc), _num(rep.psnr)))
    lines = [BENCH_HEADER]
    for r in rows:
        lines.append("%s,%s,%s,%s,%s,%s,%s,%s,%.3f"
                     % (r["method"], r["lfc"], r["hfc"], _num(r["en"]),
                        _num(r["sd"]), _num(r["ssim"]), _num(r["cc"]),
                        _num(r["psnr"]), r["elapsed_ms"]))
    try:
        with open(args.out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    except Exception:
        if os.path.exists(args.out):
            os.unlink(args.out)
        raise
    pca = rows[:len(BENCH_COMBOS)]
    pso = rows[len(BENCH_COMBOS):]
    n_ssim = sum(p["ssim"] >= q["ssim"] for p, q in zip(pca, pso))
    n_cc = sum(p["cc"] >= q["cc"] for p, q in zip(pca, pso))
    mean_ms = lambda rs: sum(r["elapsed_ms"] for r in rs) / len(rs)
    print("pca >= pso on ssim in %d/%d combos, on cc in %d/%d; "
          "mean elapsed_ms pca %.3f, pso %.3f"
          % (n_ssim, len(BENCH_COMBOS), n_cc, len(BENCH_COMBOS),
             mean_ms(pca), mean_ms(pso)))
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dtcwtfuse",
        description="Fuse co-registered grayscale images in the dual-tree "
                    "complex wavelet domain.")
    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="command")

    p = sub.add_parser("fuse", help="fuse two images into one")
    p.add_argument("--a", required=True, metavar="PATH",
                   help="first source image (PGM/PPM/PNG)")
    p.add_argument("--b", required=True, metavar="PATH",
                   help="second source image")
    p.add_argument("--out", required=True, metavar="PATH",
                   help="output PGM path")
    p.add_argument("--method", choices=METHODS, default="pca",
                   help="subband weighting (default pca)")
    p.add_argument("--lfc", choices=RULES, default="avg",
                   help="lowpass merge rule (default avg)")
    p.add_argument("--hfc", choices=RULES, default="max",
                   help="oriented-band merge rule (default max)")
    p.add_argument("--levels", type=int, default=2, metavar="N",
                   help="decomposition depth (default 2)")
    p.add_argument("--seed", type=int, default=0, metavar="N",
                   help="base seed for the pso method (default 0)")
    p.add_argument("--dump-pyramid", metavar="DIR",
                   help="also write each fused subband as a PGM here")
    p.add_argument("--report", choices=("json",),
                   help="print fused-vs-source metrics as JSON")
    _add_pso_flags(p)
    p.set_defaults(func=cmd_fuse)

    p = sub.add_parser("metrics", help="score a fused image against a "
                                       "reference")
    p.add_argument("--ref", required=True, metavar="PATH")
    p.add_argument("--fused", required=True, metavar="PATH")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("gen", help="write a synthetic CT/MR-like pair")
    p.add_argument("--size", type=int, default=128, metavar="N",
                   help="square side, multiple of 8, at least 32")
    p.add_argument("--seed", type=int, default=0, metavar="N")
    p.add_argument("--out-a", required=True, metavar="PATH")
    p.add_argument("--out-b", required=True, metavar="PATH")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="sweep pca/pso over six rule combos "
                                     "and write a CSV")
    p.add_argument("--a", required=True, metavar="PATH")
    p.add_argument("--b", required=True, metavar="PATH")
    p.add_argument("--out", required=True, metavar="PATH",
                   help="output CSV path")
    p.add_argument("--levels", type=int, default=2, metavar="N")
    p.add_argument("--seed", type=int, default=0, metavar="N")
    p.add_argument("--verbose", action="store_true",
                   help="also print per-source ssim/cc/psnr lines")
    _add_pso_flags(p)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        print("dtcwtfuse: error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
