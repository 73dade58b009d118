"""
identcert command line.

Exit statuses: 0 PASS, 1 FAIL / known exception / k > k_max,
2 INCOMPLETE / ABORTED, 3 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from pydantic import ValidationError

from services.bounds.formulas import CUBIC_K_TABLE, co_bound, cubic_formula_rank, k_max, kruskal_cubic
from services.bounds.report import bound_report
from services.certvault.certificate import EXIT_CODES, Certificate, RunConfig, certificate_schema
from services.contact.errors import ComputationAborted, SpanFillsAmbient
from services.contact.groebner import Budget
from services.contact.hilbert import dim_degree
from services.contact.ideal import dump_ideal, span_section_ideal, tangency_ideal
from services.contact.incidence import incidence_report
from services.contact.report import check_contact_locus
from services.contact.saturation import saturate
from services.exactlin.field import FieldError, PrimeField
from services.exactlin.rng import RngState
from services.planner.errors import InvalidReductionTree, NoPlan, ScriptError
from services.planner.execute import execute
from services.planner.planner import plan
from services.planner.power_split import PowerSplit
from services.planner.script import SCHEDULE_ALIASES, Script, bundled_scripts, format_script
from services.segre.model import FormatError, Problem
from services.segre.span import sample_problem_span
from services.shared.config import settings
from services.shared.ids import new_id
from services.shared.logging import get_trace_logger, setup_logging
from workers.certify_worker import CertifyRequest, certificate_for_tree, certify, emit_certificate

EXIT_USAGE = 3
MODES = ("first-order", "groebner", "both")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--prime", type=int, default=settings.prime)
    parser.add_argument("--seed", type=int, default=settings.seed)
    parser.add_argument("--trials", type=int, default=settings.trials)
    parser.add_argument("--mode", choices=MODES, default=settings.mode)
    parser.add_argument("--budget", type=int, default=settings.budget, help="groebner S-pair reductions")
    parser.add_argument("--cache", default=settings.cache, help="JSON file or SQLAlchemy URL")
    parser.add_argument("--emit", default="", help="write the certificate (or ideal dump) here")
    parser.add_argument("--workers", type=int, default=settings.workers)
    parser.add_argument("--log-level", default=settings.log_level)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="identcert", description="Certify generic k-identifiability of tensor formats.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("certify", help="certify one format and rank")
    p.add_argument("dims", type=int, nargs="+")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--aux", type=int, nargs="+", help="aux counts p_1 .. p_n")
    _common(p)

    p = sub.add_parser("table", help="cubic k(a) table or the comparison table")
    p.add_argument("kind", choices=("cubic", "comparison"))
    p.add_argument("--max-a", type=int, default=10)
    p.add_argument("--verify", action="store_true")
    _common(p)

    p = sub.add_parser("plan", help="build (and run) a reduction tree")
    p.add_argument("dims", type=int, nargs="*")
    p.add_argument("--k", type=int)
    p.add_argument("--aux", type=int, nargs="+")
    p.add_argument("--base", type=int, default=2)
    schedules = ", ".join(sorted(SCHEDULE_ALIASES) + bundled_scripts())
    p.add_argument("--script", help=f"bundled schedule ({schedules}) or a file path")
    p.add_argument("--dry-run", action="store_true")
    _common(p)

    p = sub.add_parser("bounds", help="closed-form bounds and known exceptions")
    p.add_argument("dims", type=int, nargs="+")
    p.add_argument("--k", type=int)

    p = sub.add_parser("contact", help="exact contact locus of a small problem")
    p.add_argument("dims", type=int, nargs="+")
    p.add_argument("--k", type=int)
    p.add_argument("--aux", type=int, nargs="+", help="p_1 .. p_n, or k p_1 .. p_n")
    _common(p)

    sub.add_parser("schema", help="print the certificate JSON schema")
    return parser


def _problem(dims: Sequence[int], k: Optional[int], aux: Optional[Sequence[int]]) -> Problem:
    if aux is not None and len(aux) == len(dims) + 1:
        if k is not None and k != aux[0]:
            raise UsageError(f"--k {k} disagrees with --aux k = {aux[0]}")
        k, aux = aux[0], aux[1:]
    if k is None:
        raise UsageError("--k is required")
    if aux is not None and len(aux) != len(dims):
        raise UsageError(f"--aux takes {len(dims)} or {len(dims) + 1} values, got {len(aux)}")
    try:
        return Problem.of(dims, k, aux)
    except (ValidationError, FormatError) as exc:
        message = exc.errors()[0]["msg"] if isinstance(exc, ValidationError) else str(exc)
        raise UsageError(message) from exc


def _config(args) -> RunConfig:
    return RunConfig(
        prime=args.prime, seed=args.seed, trials=args.trials, mode=args.mode,
        budget=args.budget, workers=args.workers, cache=args.cache, emit=args.emit,
    )


def _print_certificate(cert: Certificate) -> None:
    print(f"{cert.verdict}  {'x'.join(map(str, cert.format))} k={cert.k}  route={cert.route}")
    print(f"  {cert.reason}")
    for caveat in cert.caveats:
        print(f"  note: {caveat}")
    print(f"  digest {cert.digest}")


def cmd_certify(args, trace_id: str) -> int:
    problem = _problem(args.dims, args.k, args.aux)
    if problem.k < 1:
        raise UsageError("certify needs k >= 1")
    request = CertifyRequest(
        dims=problem.dims, k=problem.k, p=problem.p, prime=args.prime, seed=args.seed,
        trials=args.trials, mode=args.mode, budget=args.budget, workers=args.workers,
        cache=args.cache, emit=args.emit,
    )
    cert = certify(request, trace_id)
    _print_certificate(cert)
    return cert.exit_code


def _run_script(name: str, args, config: RunConfig) -> Certificate:
    tree = plan(None, Script(name=name))
    result = execute(tree, RngState(args.seed), PrimeField(args.prime), Budget.from_steps(args.budget),
                     args.trials, args.workers)
    return certificate_for_tree("plan", tree, result, config, f"script {name}")


def cmd_table(args, trace_id: str) -> int:
    if args.max_a < 2:
        raise UsageError("--max-a must be >= 2")
    top = min(args.max_a, max(CUBIC_K_TABLE))
    rows = range(2, top + 1)
    status = 0
    if args.kind == "comparison":
        print(f"{'a':>10}" + "".join(f"{a:>5}" for a in rows))
        print(f"{'gen.rank':>10}" + "".join(f"{cubic_formula_rank(a):>5}" for a in rows))
        print(f"{'k(a)':>10}" + "".join(f"{CUBIC_K_TABLE[a]:>5}" for a in rows))
        print(f"{'Kruskal':>10}" + "".join(f"{kruskal_cubic(a):>5}" for a in rows))
        return status

    print(f"{'a':>3} {'k(a)':>5} {'k_max':>6} {'co_bound':>9}" + (" verified" if args.verify else ""))
    config = _config(args)
    for a in rows:
        k = CUBIC_K_TABLE[a]
        line = f"{a:>3} {k:>5} {k_max((a, a, a)):>6} {co_bound((a, a, a)):>9}"
        if args.verify:
            schedule = f"paper-a{a}"
            if schedule in SCHEDULE_ALIASES:
                cert = _run_script(schedule, args, config)
            else:
                cert = certify(CertifyRequest(
                    dims=(a, a, a), k=k, prime=args.prime, seed=args.seed, trials=args.trials,
                    mode=args.mode, budget=args.budget, workers=args.workers, cache=args.cache,
                ), trace_id)
            line += f" {cert.verdict} ({cert.route})"
            status = max(status, cert.exit_code)
        print(line)
    return status


def cmd_plan(args, trace_id: str) -> int:
    if args.script:
        path = Path(args.script)
        strategy = Script(text=path.read_text(encoding="utf-8")) if path.is_file() else Script(name=args.script)
        problem = _problem(args.dims, args.k, args.aux) if args.dims else None
        label = f"script {args.script}"
    else:
        if not args.dims:
            raise UsageError("plan needs dims and --k, or --script")
        problem = _problem(args.dims, args.k, args.aux)
        strategy = PowerSplit(base=args.base)
        label = f"power-split base {args.base}"
    try:
        tree = plan(problem, strategy)
    except NoPlan as exc:
        print(f"NO PLAN  {exc}")
        return EXIT_CODES["INCOMPLETE"]
    except (ScriptError, InvalidReductionTree) as exc:
        print(f"INVALID  {exc}")
        return EXIT_CODES["FAIL"]

    print(format_script(tree), end="")
    if args.dry_run:
        return 0
    result = execute(tree, RngState(args.seed), PrimeField(args.prime), Budget.from_steps(args.budget),
                     args.trials, args.workers)
    cert = certificate_for_tree("plan", tree, result, _config(args), label)
    if args.emit:
        emit_certificate(cert, args.emit)
    _print_certificate(cert)
    return cert.exit_code


def cmd_bounds(args, trace_id: str) -> int:
    try:
        report = bound_report(args.dims, args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(json.dumps(report.model_dump(mode="json"), indent=2, sort_keys=True))
    return 0


def cmd_contact(args, trace_id: str) -> int:
    problem = _problem(args.dims, args.k, args.aux)
    field = PrimeField(args.prime)
    rng = RngState(args.seed)
    budget = Budget.from_steps(args.budget)
    report = check_contact_locus(problem, rng, field, budget)
    print(f"tangency locus: {report.verdict}  dim={report.dim} degree={report.degree} "
          f"span rank {report.span_rank}/{report.ambient}")
    if report.dim == -1:
        print("  tangency locus empty")
    status = {"PASS": 0, "FAIL": 1}.get(report.verdict, 2)

    span = sample_problem_span(problem, rng.child(0), field)
    if args.emit:
        try:
            ideal = saturate(tangency_ideal(span, seed=rng.seed), rng.child(1), budget)
            Path(args.emit).write_text(dump_ideal(ideal), encoding="utf-8")
        except ComputationAborted as exc:
            print(f"ideal dump: ABORTED at {exc.stage}")
            return max(status, 2)
        except SpanFillsAmbient:
            print("ideal dump: skipped, the span fills the ambient space")
            return max(status, 2)
    if problem.format.variables > settings.groebner_max_vars or span.fills_ambient:
        return status
    try:
        section = saturate(span_section_ideal(span, seed=rng.seed), rng.child(3), budget)
        locus = dim_degree(section, budget, rng.child(4))
        print(f"span meets X: dim={locus.dim} degree={locus.degree} reduced={locus.reduced_degree}")
        if locus.dim == 1:
            incidence = incidence_report(span, seed=rng.seed, budget=budget)
            shape = "a closed cycle" if incidence.is_cycle else "no single cycle"
            print(f"  span meets X in {len(incidence.lines)} lines "
                  f"(per factor {incidence.per_direction}), incidence graph is {shape}")
    except ComputationAborted as exc:
        print(f"span meets X: ABORTED at {exc.stage}")
        status = max(status, 2)
    return status


def cmd_schema(args, trace_id: str) -> int:
    print(json.dumps(certificate_schema(), indent=2, sort_keys=True))
    return 0


COMMANDS = {
    "certify": cmd_certify,
    "table": cmd_table,
    "plan": cmd_plan,
    "bounds": cmd_bounds,
    "contact": cmd_contact,
    "schema": cmd_schema,
}


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        setup_logging(getattr(args, "log_level", settings.log_level))
        trace_id = new_id("run")
        get_trace_logger(trace_id, "identcert.cli").info("command %s", args.command)
        return COMMANDS[args.command](args, trace_id)
    except (UsageError, FieldError, ScriptError) as exc:
        print(f"identcert: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
