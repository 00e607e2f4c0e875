"""Command-line front end: build graphs, emit spectra, certificates, witnesses
and fidelity series, and run the closed-form-vs-numeric verification suite.

Exit codes: 0 success, 1 negative verdict (no PST / hypothesis rejected / scan
short of target), 2 usage or input error, 3 search budget exceeded.  Payloads
go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .charpoly import exact_spectrum
from .corona import corona_closed_form
from .errors import BudgetExceededError, HypothesisError
from .graphs import (
    Graph,
    build_family,
    dumps_graph,
    neighborhood_corona,
    parse_family_spec,
    read_graph,
    regularity_degree,
    write_graph,
)
from .pgst import (
    DEFAULT_ALPHA_MAX,
    pgst_search_generic,
    pgst_witness_cycle4,
    pgst_witness_empty_copies,
)
from .pst import certify_pst, corona_no_pst_survey
from .spectral import (
    DEFAULT_CLUSTER_TOL,
    DEFAULT_SUPPORT_TOL,
    eigendecompose,
    fidelity_series,
)
from .verify import verify_corona

EXACT_ANNOTATION_LIMIT = 64  # charpoly recognition is quartic; keep the CLI snappy


@dataclass(frozen=True)
class CommandResult:
    exit_code: int
    payload: str | None = None


def canonical_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def main(argv: list[str] | None = None) -> int:
    result = run_cli(sys.argv[1:] if argv is None else argv)
    if result.payload is not None:
        sys.stdout.write(result.payload)
    return result.exit_code


def run_cli(argv: list[str]) -> CommandResult:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse prints its own usage text
        return CommandResult(exit_code=int(exc.code or 0))
    try:
        return args.handler(args)
    except (HypothesisError,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CommandResult(exit_code=1)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CommandResult(exit_code=3)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CommandResult(exit_code=2)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coronawalk",
        description="Quantum-walk state transfer on neighborhood corona graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a family graph or a neighborhood corona")
    p.add_argument("--g1", required=True, metavar="NAME:SIZE")
    p.add_argument("--g2", metavar="NAME:SIZE")
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(handler=_cmd_build)

    p = sub.add_parser("spectrum", help="numeric spectrum, or closed-form corona spectrum")
    _graph_inputs(p)
    p.add_argument("--cluster-tol", type=float, default=DEFAULT_CLUSTER_TOL)
    p.set_defaults(handler=_cmd_spectrum)

    p = sub.add_parser("fidelity", help="fidelity time series as CSV")
    _graph_inputs(p)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--t-max", type=float, default=20.0)
    p.add_argument("--steps", type=int, default=2001)
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(handler=_cmd_fidelity)

    p = sub.add_parser("check-pst", help="certify or refute perfect state transfer")
    _graph_inputs(p)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--cluster-tol", type=float, default=DEFAULT_CLUSTER_TOL)
    p.add_argument("--support-tol", type=float, default=DEFAULT_SUPPORT_TOL)
    p.set_defaults(handler=_cmd_check_pst)

    p = sub.add_parser("search-pgst", help="construct a pretty-good-state-transfer witness")
    _graph_inputs(p)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--alpha-max", type=int, default=DEFAULT_ALPHA_MAX)
    p.add_argument(
        "--construction",
        choices=("auto", "empty-copies", "cycle4", "scan"),
        default="auto",
    )
    p.add_argument("--t-max", type=float, default=200.0, help="scan window (scan construction)")
    p.add_argument("--steps", type=int, default=200001)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(handler=_cmd_search_pgst)

    p = sub.add_parser("verify", help="closed-form vs numeric verification of a corona")
    p.add_argument("--g1", required=True, metavar="NAME:SIZE")
    p.add_argument("--g2", required=True, metavar="NAME:SIZE")
    p.add_argument("--graph", help="optional corona JSON to check against the construction")
    p.add_argument("--eig-tol", type=float, default=1e-8)
    p.add_argument("--proj-tol", type=float, default=1e-9)
    p.add_argument("--amp-tol", type=float, default=1e-9)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(handler=_cmd_serve)

    return parser


def _graph_inputs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", help="graph JSON file")
    p.add_argument("--g1", metavar="NAME:SIZE", help="first-factor family spec")
    p.add_argument("--g2", metavar="NAME:SIZE", help="second-factor family spec")


def _resolve_graph(args) -> tuple[Graph, Graph | None, Graph | None]:
    """The working graph plus the corona factors when given as families."""
    if args.graph and (args.g1 or args.g2):
        raise ValueError("give either --graph or family specs, not both")
    if args.graph:
        return read_graph(args.graph), None, None
    if args.g1 and args.g2:
        g1 = parse_family_spec(args.g1)
        g2 = parse_family_spec(args.g2)
        return neighborhood_corona(g1, g2), g1, g2
    if args.g1:
        return parse_family_spec(args.g1), None, None
    raise ValueError("no input graph: give --graph FILE, or --g1 (and optionally --g2)")


def _cmd_build(args) -> CommandResult:
    g1 = parse_family_spec(args.g1)
    g = neighborhood_corona(g1, parse_family_spec(args.g2)) if args.g2 else g1
    if args.out:
        write_graph(g, args.out)
        print(f"wrote {g.n}-vertex graph to {args.out}", file=sys.stderr)
        return CommandResult(exit_code=0)
    return CommandResult(exit_code=0, payload=dumps_graph(g))


def _cmd_spectrum(args) -> CommandResult:
    g, g1, g2 = _resolve_graph(args)
    if g1 is not None and g2 is not None:
        cd = corona_closed_form(g1, g2, args.cluster_tol)
        payload = {
            "n1": cd.n1,
            "n2": cd.n2,
            "k": cd.k,
            "eigenvalues": cd.eigenvalue_dicts(),
        }
        return CommandResult(exit_code=0, payload=canonical_json(payload))
    d = eigendecompose(g, args.cluster_tol)
    spec = exact_spectrum(g.adjacency) if g.n <= EXACT_ANNOTATION_LIMIT else None
    eigenvalues = []
    for e in d.entries:
        exact = spec.match(e.value) if spec is not None else None
        eigenvalues.append(
            {
                "value": e.value,
                "multiplicity": e.multiplicity,
                "exact": exact.render() if exact is not None else None,
            }
        )
    return CommandResult(exit_code=0, payload=canonical_json({"n": g.n, "eigenvalues": eigenvalues}))


def _cmd_fidelity(args) -> CommandResult:
    g, _, _ = _resolve_graph(args)
    d = eigendecompose(g)
    series = fidelity_series(d, args.u, args.v, args.t_max, args.steps)
    csv = series.to_csv()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv)
        return CommandResult(exit_code=0)
    return CommandResult(exit_code=0, payload=csv)


def _cmd_check_pst(args) -> CommandResult:
    g, g1, g2 = _resolve_graph(args)
    cert = certify_pst(g, args.u, args.v, args.cluster_tol, args.support_tol)
    payload = cert.to_dict()
    if g1 is not None and g2 is not None and regularity_degree(g2) is not None:
        payload["theorem_reports"] = [r.to_dict() for r in corona_no_pst_survey(g1, g2)]
    return CommandResult(exit_code=0 if cert.is_pst else 1, payload=canonical_json(payload))


def _cmd_search_pgst(args) -> CommandResult:
    g, g1, g2 = _resolve_graph(args)
    construction = args.construction
    if construction == "auto":
        if g1 is not None and g2 is not None and g2.edge_count() == 0:
            construction = "empty-copies"
        elif g1 is not None and g1 == build_family("cycle", 4):
            construction = "cycle4"
        else:
            construction = "scan"
    if construction == "empty-copies":
        if g1 is None or g2 is None:
            raise ValueError("empty-copies construction needs --g1 and --g2")
        if g2.edge_count() != 0:
            raise HypothesisError("empty-copies construction needs an edgeless second factor")
        wit = pgst_witness_empty_copies(
            g1, args.u, args.v, g2.n, args.epsilon, args.alpha_max, threads=args.threads
        )
    elif construction == "cycle4":
        if g1 is None or g2 is None:
            raise ValueError("cycle4 construction needs --g1 and --g2")
        if g1 != build_family("cycle", 4):
            raise HypothesisError("cycle4 construction needs --g1 cycle:4")
        wit = pgst_witness_cycle4(
            g2, args.epsilon, args.alpha_max, u=args.u, v=args.v, threads=args.threads
        )
    else:
        wit = pgst_search_generic(g, args.u, args.v, args.epsilon, args.t_max, args.steps)
    return CommandResult(
        exit_code=0 if wit.meets_target else 1,
        payload=canonical_json(wit.to_dict()),
    )


def _cmd_verify(args) -> CommandResult:
    g1 = parse_family_spec(args.g1)
    g2 = parse_family_spec(args.g2)
    provided = read_graph(args.graph) if args.graph else None
    report = verify_corona(
        g1, g2,
        eig_tol=args.eig_tol, proj_tol=args.proj_tol, amp_tol=args.amp_tol,
        provided=provided,
    )
    return CommandResult(exit_code=0 if report["passed"] else 1, payload=canonical_json(report))


def _cmd_serve(args) -> CommandResult:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return CommandResult(exit_code=0)


if __name__ == "__main__":
    sys.exit(main())
