"""Command-line interface: verify / faces / sweep / mesh / nice3d.

Exit code 0 means every check in the requested pipeline passed; failures
name the failing section on stderr. All outputs are deterministic for a
given configuration.
"""

from __future__ import annotations

import argparse
import sys

from . import meshes, reporting
from .linalg import DomainError


def _parse_eps(text):
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad epsilon list {text!r}") from exc


def build_parser():
    parser = argparse.ArgumentParser(
        prog="conelab",
        description="Verify the 4D facially-exposed-but-not-nice cone construction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out_default):
        p.add_argument("--samples", type=int, default=512,
                       help="curve samples per verification body (default 512)")
        p.add_argument("--theta-grid", type=int, default=64, dest="theta_grid",
                       help="ruling-parameter grid size (default 64)")
        p.add_argument("--tol", type=float, default=1e-9,
                       help="absolute equality tolerance (default 1e-9)")
        p.add_argument("--eps", type=_parse_eps, default=(1e-1, 1e-2, 1e-3, 1e-4),
                       help="comma-separated refinement levels, strictly decreasing")
        p.add_argument("--out", default=out_default, help="output path")

    common(sub.add_parser("verify", help="run the full pipeline, emit a JSON report"),
           "verify_report.json")
    common(sub.add_parser("faces", help="emit the face atlas with exposure reports"),
           "face_atlas.json")

    p_sweep = sub.add_parser("sweep", help="divergence sweep as CSV")
    common(p_sweep, "sweep.csv")
    p_sweep.add_argument("--control", action="store_true",
                         help="run the polyhedral control cone instead")

    p_mesh = sub.add_parser("mesh", help="export a triangle mesh as OBJ")
    p_mesh.add_argument("--which", choices=("C", "Cprime"), default="C")
    p_mesh.add_argument("--samples", type=int, default=64)
    p_mesh.add_argument("--out", default=None)

    p_n3 = sub.add_parser("nice3d", help="3D closedness ingredient checks")
    common(p_n3, "nice3d_report.json")
    return parser


def _config(args, **extra):
    return reporting.RunConfig(
        samples_per_curve=getattr(args, "samples", 512),
        theta_grid_size=getattr(args, "theta_grid", 64),
        eq_abs=getattr(args, "tol", 1e-9),
        eps_list=getattr(args, "eps", (1e-1, 1e-2, 1e-3, 1e-4)),
        out=args.out,
        **extra,
    )


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            report = reporting.run_verify(_config(args))
            reporting.write_json(args.out, report)
            print(f"wrote {args.out}; overall: {report['overall']}")
            if report["failures"]:
                print("FAILED sections: " + ", ".join(report["failures"]), file=sys.stderr)
                return 1
            return 0

        if args.command == "faces":
            atlas = reporting.run_faces(_config(args))
            reporting.write_json(args.out, atlas)
            print(f"wrote {args.out}; failed reports: {atlas['failed_reports']}")
            return 0 if atlas["failed_reports"] == 0 else 1

        if args.command == "sweep":
            sweep = reporting.run_sweep(_config(args, control=args.control))
            reporting.write_sweep_csv(args.out, sweep)
            print(f"wrote {args.out}; verdict: {sweep['verdict']}")
            return 0

        if args.command == "mesh":
            out = args.out or f"{args.which}.obj"
            mesh = meshes.build_mesh(args.which, args.samples)
            meshes.write_obj(out, mesh)
            v, f = mesh.counts
            print(f"wrote {out}: {v} vertices, {f} triangles")
            return 0

        if args.command == "nice3d":
            report = reporting.run_nice3d(_config(args))
            reporting.write_json(args.out, report)
            print(f"wrote {args.out}; pass: {report['pass']}")
            return 0 if report["pass"] else 1

    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
