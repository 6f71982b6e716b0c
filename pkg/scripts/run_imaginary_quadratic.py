"""End-to-end run for an imaginary quadratic field.

Usage: python scripts/run_imaginary_quadratic.py [-d DISC] [--outdir DIR]

Builds the field spec for Q(sqrt(-d)), runs the whole pipeline, and prints
the report.  Defaults to the Gaussian field.
"""

import argparse
import json
import os
import sys
import tempfile

from blochforms.pipeline import PipelineConfig, run_pipeline


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("-d", type=int, default=1, help="positive d for Q(sqrt(-d))")
    ap.add_argument("--outdir", default=None)
    ap.add_argument("--precision", type=int, default=60)
    args = ap.parse_args()

    outdir = args.outdir or tempfile.mkdtemp(prefix="blochforms_")
    os.makedirs(outdir, exist_ok=True)
    spec = os.path.join(outdir, "field.json")
    with open(spec, "w") as fh:
        json.dump({"min_poly": [args.d, 0, 1], "label": "Q(sqrt-%d)" % args.d}, fh)

    code, report = run_pipeline(PipelineConfig(field_path=spec, out_dir=outdir,
                                               precision=args.precision))
    print(json.dumps(report, indent=1, sort_keys=True, default=str))
    print("artifacts in", outdir)
    return code


if __name__ == "__main__":
    sys.exit(main())
