"""Command line interface.

Subcommands mirror the pipeline stages:

  perfect-forms   enumerate perfect / T-perfect form classes
  tperfect        alias of perfect-forms for a field subspace
  complex         build the quotient cell complex and its homology
  bloch           extract and verify Bloch elements from H_3
  regulator       dilogarithm regulator matrix and index report
  verify          run the whole chain and print the verdicts

Exit codes: 0 pass, 1 fail, 2 inconclusive, 3 budget exhausted.
"""

import argparse
import json
import sys

from .field import nf_create
from .pipeline import (PipelineConfig, classes_json, complex_json, content_hash,
                       field_spec_json, load_field_spec, run_pipeline, _write_stage)
from .qforms import TSubspace
from .voronoi import BudgetExceeded, enumerate_perfect, first_perfect_form


def _add_common(p):
    p.add_argument("--field", help="field spec JSON (min_poly, integral_basis)")
    p.add_argument("--budget", type=int, default=64, help="class count limit")
    p.add_argument("--out", default=None, help="output JSON path")
    p.add_argument("--json", action="store_true", help="machine output on stdout")


def _get_tspace(args, m):
    if args.field:
        field = load_field_spec(args.field)
    else:
        field = nf_create([0, 1], label="Q")
    return TSubspace(field, m)


def cmd_perfect_forms(args):
    t = _get_tspace(args, args.dim)
    a0 = first_perfect_form(args.dim) if t.field.n == 1 else None
    try:
        graph = enumerate_perfect(t, a0=a0, budget=args.budget,
                                  order=args.traversal)
    except BudgetExceeded:
        print("budget exhausted", file=sys.stderr)
        return 3
    payload = classes_json(graph, t)
    out = args.out or "classes.json"
    _write_stage(out, payload, content_hash(field_spec_json(t.field)))
    msg = {"classes": len(graph.classes), "edges": len(graph.edges),
           "dead_ends": len(graph.dead_ends), "out": out}
    print(json.dumps(msg) if args.json else
          "%(classes)d classes, %(edges)d edges -> %(out)s" % msg)
    return 0


def cmd_complex(args):
    from .complexbuild import build_complex
    from .pipeline import _graph_from_json
    t = _get_tspace(args, 2)
    with open(args.classes) as fh:
        data = json.load(fh)
    graph = _graph_from_json(data, t)
    qc = build_complex(t, graph.classes)
    payload = complex_json(qc)
    out = args.out or "complex.json"
    _write_stage(out, payload, content_hash(data["classes"]))
    if args.json:
        print(json.dumps({"homology": payload["homology"], "out": out}))
    else:
        for k, h in sorted(payload["homology"].items()):
            print("H_%s: rank %d torsion %s" % (k, h["rank"], h["torsion"]))
    return 0


def cmd_verify(args):
    cfg = PipelineConfig(field_path=args.field, out_dir=args.outdir,
                         budget=args.budget, precision=args.precision,
                         k2=args.k2, k3tor=args.k3tor,
                         traversal=args.traversal)
    code, report = run_pipeline(cfg)
    if args.json:
        print(json.dumps(report, indent=1, sort_keys=True, default=str))
    else:
        for key in ("h3_rank", "n_value", "verdict_volume", "rel_error_volume",
                    "matching_constant", "elapsed_s", "error"):
            if key in report:
                print("%s: %s" % (key, report[key]))
    return code


def main(argv=None):
    ap = argparse.ArgumentParser(prog="blochforms", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("perfect-forms", help="enumerate perfect form classes")
    _add_common(p)
    p.add_argument("--dim", type=int, default=2, help="form dimension m")
    p.add_argument("--traversal", choices=("fifo", "lifo"), default="fifo")
    p.set_defaults(func=cmd_perfect_forms)

    p = sub.add_parser("tperfect", help="enumerate T-perfect classes over F")
    _add_common(p)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--traversal", choices=("fifo", "lifo"), default="fifo")
    p.set_defaults(func=cmd_perfect_forms)

    p = sub.add_parser("complex", help="quotient complex and homology")
    _add_common(p)
    p.add_argument("--classes", required=True, help="classes.json from tperfect")
    p.set_defaults(func=cmd_complex)

    p = sub.add_parser("bloch", help="Bloch elements from the H3 cycles")
    _add_common(p)
    p.add_argument("--outdir", default=".")
    p.set_defaults(func=cmd_verify)  # full chain; bloch.json is one artifact

    p = sub.add_parser("regulator", help="regulator matrix and index report")
    _add_common(p)
    p.add_argument("--outdir", default=".")
    p.add_argument("--precision", type=int, default=60)
    p.add_argument("--k2", type=int, default=None)
    p.add_argument("--k3tor", type=int, default=None)
    p.add_argument("--traversal", choices=("fifo", "lifo"), default="fifo")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("verify", help="end-to-end run with verdicts")
    _add_common(p)
    p.add_argument("--outdir", default=".")
    p.add_argument("--precision", type=int, default=60)
    p.add_argument("--k2", type=int, default=None)
    p.add_argument("--k3tor", type=int, default=None)
    p.add_argument("--traversal", choices=("fifo", "lifo"), default="fifo")
    p.set_defaults(func=cmd_verify)

    args = ap.parse_args(argv)
    if args.cmd in ("bloch", "regulator", "verify") and not args.field:
        ap.error("--field is required for this subcommand")
    if not hasattr(args, "precision"):
        args.precision = 60
    if not hasattr(args, "k2"):
        args.k2 = None
    if not hasattr(args, "k3tor"):
        args.k3tor = None
    if not hasattr(args, "traversal"):
        args.traversal = "fifo"
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
