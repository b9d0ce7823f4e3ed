"""Command-line entry point: verification suites, contact reports, flows.

Reports are line-oriented JSON, one check per line, so suites can be diffed
and streamed.  Identical inputs (including the random seed) produce
byte-identical output: the ``timing`` field stays null unless ``--timings``
is passed.  Exit codes: 0 all checks pass, 1 some check failed, 2 a
trajectory escaped at runtime, 64 usage or parse error.

Rational values travel as strings like "3" or "-1/2" so that exact inputs
never pass through floats.  RBKIT_THREADS caps the worker threads used for
independent check instances; output order never depends on scheduling.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .errors import BoundaryEscape, NonFinite, ParseError, RBKitError
from .exterior import ext_d, lie_derivative_form
from .flows import FlowSpec, FlowState, closed_flow, integrate, write_trajectory_csv
from .halfspace import (
    SolitonParams,
    flat,
    lie_derivative_metric,
    random_params,
    rb_residual,
)
from .ratlaurent import parse_rational
from .solitons import (
    MATRIX_CONVENTION,
    algebra_closure,
    build_field,
    contact_report,
    generator,
    lie_bracket,
    sl2_check,
    structure_constants,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_ESCAPE = 2
EXIT_USAGE = 64


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def worker_count() -> int:
    raw = os.environ.get("RBKIT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def pmap(fn, items):
    """Order-preserving map, threaded when RBKIT_THREADS allows."""
    items = list(items)
    workers = min(worker_count(), len(items)) if items else 1
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def load_params(path: str) -> SolitonParams:
    """Read a parameter file: {"n": int, "a": [...], "b": str, "c": [...], "rho": str}."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ParseError(f"{path}: top level must be an object")
    for key in ("n", "a", "b", "c", "rho"):
        if key not in raw:
            raise ParseError(f"{path}: missing field '{key}'")
    n = raw["n"]
    if not isinstance(n, int) or n < 2:
        raise ParseError(f"{path}: field 'n': must be an integer >= 2")

    def rat(value, where: str) -> Fraction:
        try:
            return parse_rational(value)
        except ValueError as exc:
            raise ParseError(f"{path}: field '{where}': {exc}") from exc

    for key in ("a", "c"):
        if not isinstance(raw[key], list) or len(raw[key]) != n - 1:
            raise ParseError(f"{path}: field '{key}': expected a list of length n-1 = {n - 1}")
    a = tuple(rat(v, f"a[{i}]") for i, v in enumerate(raw["a"]))
    c = tuple(rat(v, f"c[{i}]") for i, v in enumerate(raw["c"]))
    b = rat(raw["b"], "b")
    rho = rat(raw["rho"], "rho")
    try:
        return SolitonParams(n=n, a=a, b=b, c=c, rho=rho)
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from exc


# -- verify ------------------------------------------------------------------


def _check_killing(params: SolitonParams):
    residual = lie_derivative_metric(build_field(params))
    if residual.is_zero():
        return "pass", "L_X g = 0"
    return "fail", f"L_X g = {residual.text()}"


def _check_rb(params: SolitonParams):
    lam = params.soliton_constant()
    residual = rb_residual(build_field(params), params)
    if residual.is_zero():
        return "pass", f"residual = 0 at lambda = {lam} (rho = {params.rho})"
    return "fail", f"residual = {residual.text()} at lambda = {lam}"


def _check_not_closed(params: SolitonParams):
    domega = ext_d(flat(build_field(params)))
    if domega.is_zero():
        status = "degenerate" if params.degenerate else "fail"
        return status, "dw = 0 (constant field)" if params.degenerate else "dw = 0"
    return "pass", f"dw = {domega.text()}"


def _check_preserved(params: SolitonParams):
    field = build_field(params)
    result = lie_derivative_form(field, flat(field))
    if result.is_zero():
        return "pass", "L_X w = 0 (homotopy identity and direct formula agree)"
    return "fail", f"L_X w = {result.text()}"


def _check_contact(params: SolitonParams):
    report = contact_report(params)
    witness = (
        f"Pf = {report.pf}; det = {report.det}; "
        f"top*xn^{report.n} = {report.cleared.text()}; "
        f"contact = {'true' if report.is_contact else 'false'}; {report.convention}"
    )
    return ("pass" if report.consistent else "fail"), witness


_VERIFY_CHECKS = (
    ("killing_residual", _check_killing),
    ("rb_residual", _check_rb),
    ("dual_form_not_closed", _check_not_closed),
    ("dual_form_preserved", _check_preserved),
    ("contact_consistency", _check_contact),
)


def _aggregate(results, labels):
    """Combine per-instance outcomes: any fail wins, then degenerate."""
    status = "pass"
    witness = results[0][1]
    for (st, wt), label in zip(results, labels):
        if st == "fail":
            return "fail", f"{label}: {wt}"
        if st == "degenerate" and status == "pass":
            status, witness = "degenerate", f"{label}: {wt}"
    return status, witness


def cmd_verify(params: SolitonParams, trials: int, seed: int, timings: bool):
    rng = random.Random(seed)
    instances = [params] + [random_params(rng, params.n) for _ in range(trials)]
    labels = ["params"] + [f"trial {i}" for i in range(1, trials + 1)]
    records = []
    for name, check in _VERIFY_CHECKS:
        if name == "contact_consistency" and params.n % 2 == 0:
            continue
        start = time.perf_counter()
        results = pmap(check, instances)
        elapsed = (time.perf_counter() - start) * 1000.0
        status, witness = _aggregate(results, labels)
        records.append(
            {
                "name": name,
                "status": status,
                "witness": witness,
                "timing": round(elapsed, 3) if timings else None,
            }
        )
    return records


# -- contact -----------------------------------------------------------------


def cmd_contact(params: SolitonParams, timings: bool):
    start = time.perf_counter()
    report = contact_report(params)
    elapsed = (time.perf_counter() - start) * 1000.0
    timing = round(elapsed, 3) if timings else None

    def record(name, status, witness):
        return {"name": name, "status": status, "witness": witness, "timing": timing}

    verdict = "true" if report.is_contact else "false"
    return [
        record("contact_matrix", "pass", f"{MATRIX_CONVENTION}; M = {report.matrix.row_text()}"),
        record("pfaffian", "pass", f"Pf = {report.pf}; det = {report.det}"),
        record(
            "top_form",
            "pass" if report.consistent else "fail",
            f"coefficient = {report.top_coeff.text()}; "
            f"times xn^{report.n} = {report.cleared.text()}; "
            f"|cleared|/2^{(report.n - 1) // 2} == |Pf|: "
            f"{'true' if report.consistent else 'false'}",
        ),
        record("contact_verdict", "pass", f"contact = {verdict}"),
    ]


# -- flow --------------------------------------------------------------------


def cmd_flow(gen: str, n: int, point, t_max: float, dt: float, out_path: str) -> int:
    try:
        field = generator(gen, n)
    except (ValueError, RBKitError) as exc:
        raise _UsageError(str(exc)) from exc
    if len(point) != n:
        raise _UsageError(f"point has {len(point)} coordinates, expected {n}")
    if point[-1] < 0:
        raise _UsageError("point must have nonnegative last coordinate")
    spec = FlowSpec(kind=gen, n=n, t_max=t_max, dt=dt)
    p0 = FlowState(tuple(point))
    print(f"convention: {spec.convention()}")
    try:
        states = integrate(field, p0, t_max, dt)
    except (BoundaryEscape, NonFinite) as exc:
        partial = getattr(exc, "trajectory", [])
        if partial:
            write_trajectory_csv(out_path, partial, spec)
        print(f"escape: {exc}")
        return EXIT_ESCAPE
    write_trajectory_csv(out_path, states, spec)
    worst = 0.0
    for state in states:
        reference = closed_flow(spec, p0, state.t - p0.t)
        gap = math.sqrt(sum((a - b) ** 2 for a, b in zip(state.coords, reference.coords)))
        worst = max(worst, gap)
    print(f"max_deviation_vs_closed_form: {worst!r}")
    return EXIT_PASS


# -- algebra -----------------------------------------------------------------


def _seed_generators(n: int):
    names = [f"T{k}" for k in range(1, n)] + ["D"] + [f"G{k}" for k in range(1, n)]
    return names, [generator(name, n) for name in names]


def cmd_algebra(n: int, timings: bool):
    if not 2 <= n <= 6:
        raise _UsageError(f"algebra command supports 2 <= n <= 6, got {n}")
    start = time.perf_counter()
    names, seeds = _seed_generators(n)
    span, report = algebra_closure(seeds)
    basis_names = list(names) + [f"B{i}" for i in range(len(names) + 1, report.dimension + 1)]
    table = "; ".join(
        f"[{names[i]},{names[j]}] = {lie_bracket(seeds[i], seeds[j]).text()}"
        for j in range(len(seeds))
        for i in range(j)
    )
    added = "; ".join(
        f"[{basis_names[i]},{basis_names[j]}] = {field.text()}" for (i, j), field in report.added
    )
    closure_witness = (
        f"dimension = {report.dimension}; seed_dimension = {report.seed_dimension}; "
        f"cap = {report.cap}; already_closed = {'true' if report.already_closed else 'false'}; "
        f"cap_exceeded = {'true' if report.cap_exceeded else 'false'}; "
        f"adjoined = [{added}]"
    )
    records = []

    def elapsed():
        # cumulative wall clock since the command started
        return round((time.perf_counter() - start) * 1000.0, 3) if timings else None

    records.append(
        {
            "name": "generators",
            "status": "pass",
            "witness": "; ".join(f"{nm} = {f.text()}" for nm, f in zip(names, seeds)),
            "timing": elapsed(),
        }
    )
    records.append({"name": "bracket_table", "status": "pass", "witness": table, "timing": elapsed()})
    records.append(
        {
            "name": "closure",
            "status": "pass" if not report.cap_exceeded else "degenerate",
            "witness": closure_witness,
            "timing": elapsed(),
        }
    )
    if not report.cap_exceeded:
        constants = structure_constants(span)
        text = "; ".join(
            f"c[{basis_names[i - 1]},{basis_names[j - 1]},{basis_names[k - 1]}] = {v}"
            for (i, j, k), v in sorted(constants.items())
            if i < j
        )
        records.append(
            {"name": "structure_constants", "status": "pass", "witness": text, "timing": elapsed()}
        )
    if n == 2:
        ok = sl2_check()
        records.append(
            {
                "name": "sl2_fingerprint",
                "status": "pass" if ok else "fail",
                "witness": "e = T1, f = -G, h = -2D satisfy [h,e]=2e, [h,f]=-2f, [e,f]=h"
                if ok
                else "sl2 bracket table not satisfied",
                "timing": elapsed(),
            }
        )
    return records


# -- entry point ---------------------------------------------------------------


def _emit(records) -> int:
    failed = False
    for record in records:
        sys.stdout.write(json.dumps(record) + "\n")
        failed = failed or record["status"] == "fail"
    return EXIT_FAIL if failed else EXIT_PASS


def _build_parser() -> _Parser:
    parser = _Parser(prog="rbkit", description=__doc__, add_help=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run the identity suite for a parameter file")
    p_verify.add_argument("--params", required=True, help="JSON parameter file")
    p_verify.add_argument("--trials", type=int, default=25, help="random parameter sets to sweep")
    p_verify.add_argument("--seed", type=int, default=0, help="seed for the random sweep")
    p_verify.add_argument("--timings", action="store_true", help="include wall-clock timings")

    p_contact = sub.add_parser("contact", help="contact diagnostics for odd dimension")
    p_contact.add_argument("--params", required=True)
    p_contact.add_argument("--timings", action="store_true")

    p_flow = sub.add_parser("flow", help="integrate a generator flow and write CSV")
    p_flow.add_argument("--gen", required=True, help="generator name: D, Tk, Gk, or G (n=2)")
    p_flow.add_argument("--n", type=int, required=True)
    p_flow.add_argument("--point", required=True, help="comma-separated start coordinates")
    p_flow.add_argument("--t-max", type=float, default=1.0)
    p_flow.add_argument("--dt", type=float, default=1e-3)
    p_flow.add_argument("--out", required=True, help="trajectory CSV path")

    p_algebra = sub.add_parser("algebra", help="bracket table and closure report")
    p_algebra.add_argument("--n", type=int, required=True)
    p_algebra.add_argument("--timings", action="store_true")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "verify":
            if args.trials < 0:
                raise _UsageError("--trials must be nonnegative")
            params = load_params(args.params)
            return _emit(cmd_verify(params, args.trials, args.seed, args.timings))
        if args.command == "contact":
            params = load_params(args.params)
            if params.n % 2 == 0:
                raise _UsageError(f"contact diagnostics need odd n, got n={params.n}")
            return _emit(cmd_contact(params, args.timings))
        if args.command == "flow":
            try:
                point = [float(x) for x in args.point.split(",")]
            except ValueError as exc:
                raise _UsageError(f"--point: {exc}") from exc
            if args.dt <= 0:
                raise _UsageError("--dt must be positive")
            if args.t_max < 0:
                raise _UsageError("--t-max must be nonnegative")
            return cmd_flow(args.gen, args.n, point, args.t_max, args.dt, args.out)
        if args.command == "algebra":
            return _emit(cmd_algebra(args.n, args.timings))
        raise _UsageError(f"unknown command {args.command!r}")
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
