"""Command-line front end: tables, simulations, sweeps, partition counts.

Every command is deterministic and emits CSV or JSON; a timestamp header
is included unless --no-timestamp is given.  Exit codes: 0 success,
2 usage error, 3 domain error, 4 tolerance failure.
"""

import argparse
import json
import math
import sys
from datetime import datetime, timezone

from . import hierarchy as hier
from . import queries
from .core import (
    DEFAULT_FULL_VECTOR_CAP,
    DatabaseGeometry,
    GroverOperation,
    full_state_simulate,
    grover_full_search,
    project_to_symmetric,
    target_block_probability,
)
from .engine import (
    FinalOperation,
    IterationSchedule,
    optimal_integer_schedule,
    run_grk,
)
from .errors import DomainError, PartialSearchError, ToleranceError
from .minimization import query_offset
from .optimum import alpha_opt, alpha_upper_bound, eta_opt
from .partitions import ancilla_bits, partition_count
from .queries import ScaledParams
from .reference import table1_reference, table2_reference, table3_reference

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_TOLERANCE = 4

_FINAL_OPS = {
    "g1": FinalOperation.STANDARD_G1,
    "it-is1": FinalOperation.MINUS_IT_IS1,
    "is1": FinalOperation.IS1_ONLY,
}


def _parse_schedule(raw: str):
    if raw == "optimal":
        return "optimal"
    parts = raw.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(
            f"schedule must be 'optimal' or 'j1,j2', got {raw!r}"
        )
    try:
        return (float(parts[0]), float(parts[1]))
    except ValueError:
        raise argparse.ArgumentTypeError(f"schedule counts must be numbers, got {raw!r}")


def _parse_k_list(raw: str) -> tuple[int, ...]:
    try:
        values = tuple(int(p) for p in raw.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"block counts must be integers, got {raw!r}")
    if not values:
        raise argparse.ArgumentTypeError("at least one block count is required")
    return values


def _parse_range(raw: str) -> range:
    try:
        if ".." in raw:
            lo_s, hi_s = raw.split("..", 1)
            lo, hi = int(lo_s), int(hi_s)
        else:
            lo = hi = int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must be INT or LO..HI, got {raw!r}")
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {raw!r}")
    return range(lo, hi + 1)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "inf" if value == math.inf else f"{value:.9g}"
    if value is None:
        return ""
    return str(value)


def _emit(args, rows: list[dict], payload: dict | None = None):
    """Write rows as CSV or the payload (default: {'rows': rows}) as JSON."""
    lines = []
    if args.format == "csv":
        if not args.no_timestamp:
            lines.append(f"# generated: {datetime.now(timezone.utc).isoformat(timespec='seconds')}")
        columns = list(rows[0].keys())
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_fmt(row[c]) for c in columns))
        text = "\n".join(lines) + "\n"
    else:
        payload = dict(payload) if payload is not None else {"rows": rows}
        if not args.no_timestamp:
            payload = {"generated": datetime.now(timezone.utc).isoformat(timespec="seconds"), **payload}
        text = json.dumps(payload, indent=2, default=_json_default) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)


def _json_default(value):
    if isinstance(value, FinalOperation):
        return value.value
    if value == math.inf:
        return "inf"
    raise TypeError(f"not JSON serializable: {value!r}")


def _cmd_tables(args) -> int:
    if args.which == "table1":
        computed = {(r.k1, r.k2): r for r in hier.table1_reproduce()}
        rows = []
        worst = 0.0
        for ref in table1_reference():
            row = computed[(ref["k1"], ref["k2"])]
            devs = {
                "direct_dev": abs(row.direct - ref["direct"]),
                "hierarchical_dev": abs(row.hierarchical - ref["hierarchical"]),
                "gap_dev": abs(row.gap - ref["gap"]),
            }
            worst = max(worst, *devs.values())
            rows.append(
                {
                    "k1": row.k1,
                    "k2": row.k2,
                    "direct": row.direct,
                    "hierarchical": row.hierarchical,
                    "gap": row.gap,
                    **devs,
                }
            )
        _emit(args, rows, {"table": "table1", "rows": rows, "max_deviation": worst})
        if worst > 1e-5:
            raise ToleranceError(f"table1 deviates from reference by {worst:.3e} > 1e-5")
    elif args.which == "table2":
        rows = []
        failures = []
        for ref in table2_reference():
            k = ref["k"]
            value = alpha_upper_bound(k)
            dev = abs(value - ref["alpha_bound"])
            tol = 1e-6 if k == math.inf else 1e-5
            if dev > tol:
                failures.append((k, dev, tol))
            rows.append({"k": k, "alpha_bound": value, "deviation": dev})
        _emit(args, rows, {"table": "table2", "rows": rows})
        if failures:
            raise ToleranceError(f"table2 deviations beyond tolerance: {failures}")
    else:
        rows = []
        worst = 0.0
        for ref in table3_reference():
            k = ref["k"]
            bound = alpha_upper_bound(k)
            values = {
                "offset_at_zero": query_offset(0.0, k),
                "offset_at_optimum": query_offset(alpha_opt(k), k),
                "offset_at_bound": query_offset(bound, k),
            }
            devs = {f"{name}_dev": abs(values[name] - ref[name]) for name in values}
            worst = max(worst, *devs.values())
            rows.append({"k": k, **values, **devs})
        _emit(args, rows, {"table": "table3", "rows": rows, "max_deviation": worst})
        if worst > 1e-5:
            raise ToleranceError(f"table3 deviates from reference by {worst:.3e} > 1e-5")
    return EXIT_OK


def _oracle_check(geometry, schedule, result) -> float | None:
    """Brute-force cross-check of an integer run, when N is small enough."""
    if (
        not schedule.is_integer
        or schedule.final_op is not FinalOperation.STANDARD_G1
        or geometry.n_items > _oracle_check.cap
    ):
        return None
    word = (
        [GroverOperation.GLOBAL] * int(schedule.j1)
        + [GroverOperation.LOCAL] * int(schedule.j2)
        + [GroverOperation.GLOBAL]
    )
    full = full_state_simulate(geometry, 0, word, full_vector_cap=_oracle_check.cap)
    projected = project_to_symmetric(full, geometry)
    return float(
        max(
            abs(projected.amp_target - result.final_state.amp_target),
            abs(projected.amp_target_rest - result.final_state.amp_target_rest),
            abs(projected.amp_outside - result.final_state.amp_outside),
        )
    )


_oracle_check.cap = DEFAULT_FULL_VECTOR_CAP


def _cmd_simulate(args) -> int:
    geometry = DatabaseGeometry(n_items=args.n, n_blocks=args.k[0])
    final_op = _FINAL_OPS[args.final_op]
    if args.schedule == "optimal":
        schedule = optimal_integer_schedule(geometry, final_op=final_op)
    else:
        schedule = IterationSchedule(j1=args.schedule[0], j2=args.schedule[1], final_op=final_op)
    mode = "operators" if schedule.is_integer else "closed-form"
    result = run_grk(geometry, schedule, mode=mode)
    _oracle_check.cap = args.full_vector_cap
    deviation = _oracle_check(geometry, schedule, result)
    params = ScaledParams.from_schedule(geometry, schedule)
    state = result.final_state
    report = {
        "n_items": geometry.n_items,
        "n_blocks": geometry.n_blocks,
        "block_size": geometry.block_size,
        "j1": schedule.j1,
        "j2": schedule.j2,
        "final_op": schedule.final_op.value,
        "mode": mode,
        "queries_used": result.queries_used,
        "amp_target": state.amp_target,
        "amp_target_rest": state.amp_target_rest,
        "amp_outside": state.amp_outside,
        "target_block_probability": target_block_probability(state),
        "leaked_probability": result.leaked_probability,
        "scaled_alpha": params.alpha,
        "scaled_eta": params.eta,
        "oracle_check_max_deviation": deviation,
    }
    _emit(args, [report], report)
    return EXIT_OK


def _cmd_schedule(args) -> int:
    geometry = DatabaseGeometry(n_items=args.n, n_blocks=args.k[0])
    n, k = geometry.n_items, geometry.n_blocks
    sqrt_n = math.sqrt(n)
    full = grover_full_search(n)
    naive = queries.naive_queries(n, k)
    try:
        binary = queries.binary_queries(n, k)
    except DomainError:
        binary = None
    complement = queries.complement_queries(n, k)
    grk = optimal_integer_schedule(geometry)
    rows = [
        {"algorithm": "full", "queries": full.iterations, "coefficient": full.iterations / sqrt_n},
        {"algorithm": "naive_worst", "queries": naive.worst, "coefficient": naive.worst / sqrt_n},
        {"algorithm": "naive_average", "queries": naive.average, "coefficient": naive.average / sqrt_n},
        {
            "algorithm": "binary_worst",
            "queries": binary,
            "coefficient": None if binary is None else binary / sqrt_n,
        },
        {"algorithm": "complement", "queries": complement, "coefficient": complement / sqrt_n},
        {"algorithm": "grk_optimal", "queries": grk.queries, "coefficient": grk.queries / sqrt_n},
    ]
    payload = {
        "n_items": n,
        "n_blocks": k,
        "rows": rows,
        "grk_schedule": {
            "j1": grk.j1,
            "j2": grk.j2,
            "alpha": alpha_opt(k),
            "eta": eta_opt(k),
            "large_block_coefficient": queries.grk_coefficient(k),
        },
    }
    _emit(args, rows, payload)
    return EXIT_OK


def _cmd_hierarchy(args) -> int:
    spec = hier.HierarchySpec(levels=args.k)
    run = hier.run_hierarchy(args.n, spec)
    sqrt_n = math.sqrt(args.n)
    rows = []
    for i, level in enumerate(run.per_level, start=1):
        rows.append(
            {
                "stage": str(i),
                "n_items": level.geometry.n_items,
                "n_blocks": level.geometry.n_blocks,
                "j1": level.schedule.j1,
                "j2": level.schedule.j2,
                "queries": level.result.queries_used,
                "leaked_probability": level.result.leaked_probability,
                "clamped": level.clamped,
            }
        )
    rows.append(
        {
            "stage": "direct",
            "n_items": args.n,
            "n_blocks": spec.product,
            "j1": run.direct_schedule.j1,
            "j2": run.direct_schedule.j2,
            "queries": run.direct_equivalent.queries_used,
            "leaked_probability": run.direct_equivalent.leaked_probability,
            "clamped": False,
        }
    )
    payload = {
        "n_items": args.n,
        "levels": list(spec.levels),
        "per_level": rows[:-1],
        "total_queries": run.total_queries,
        "total_coefficient": run.total_queries / sqrt_n,
        "formula_coefficient": run.formula_coefficient,
        "direct": {
            **rows[-1],
            "coefficient": run.direct_equivalent.queries_used / sqrt_n,
            "formula_coefficient": run.direct_formula_coefficient,
            "target_block_probability": target_block_probability(
                run.direct_equivalent.final_state
            ),
        },
        "final_target_block_probability": target_block_probability(
            run.per_level[-1].result.final_state
        ),
    }
    _emit(args, rows, payload)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    for r in (args.k1, args.k2):
        if r.start < 2 or r.stop - 1 > 1024:
            raise DomainError(f"sweep ranges must stay within [2, 1024], got {r}")
    rows = []
    for k1 in args.k1:
        for k2 in args.k2:
            check = hier.theorem_check(k1, k2)
            rows.append(
                {
                    "k1": k1,
                    "k2": k2,
                    "S": queries.grk_coefficient(k1 * k2),
                    "T": queries.hierarchy_coefficient((k1, k2)),
                    "gap": check.gap,
                    "lemma1_term": check.lemma1_terms[0],
                    "lemma2_term": check.lemma2_term,
                }
            )
    _emit(args, rows)
    bad = [(r["k1"], r["k2"]) for r in rows if r["gap"] <= 0.0]
    if bad:
        raise ToleranceError(f"nonpositive hierarchy gap at {bad}")
    return EXIT_OK


def _cmd_partitions(args) -> int:
    count = partition_count(args.n, args.k[0])
    exact_bits, asymptotic_bits = ancilla_bits(args.n, args.k[0])
    report = {
        "n_items": args.n,
        "n_blocks": args.k[0],
        "block_size": args.n // args.k[0],
        "partition_count": count.exact,
        "log2_partition_count": count.log2_value,
        "exact_label_bits": exact_bits,
        "asymptotic_label_bits": asymptotic_bits,
    }
    _emit(args, [report], report)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grksearch",
        description="Grover full search and GRK partial search: simulation and query counts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_n=True):
        if with_n:
            p.add_argument("--n", type=int, required=True, help="database size N")
            p.add_argument(
                "--k",
                type=_parse_k_list,
                required=True,
                help="block count, or comma list for hierarchies",
            )
        p.add_argument("--format", choices=("csv", "json"), default="json")
        p.add_argument("--out", default="-", help="output path, '-' for stdout")
        p.add_argument("--no-timestamp", action="store_true")

    p = sub.add_parser("simulate", help="run one GRK partial search")
    add_common(p)
    p.add_argument("--schedule", type=_parse_schedule, default="optimal")
    p.add_argument("--final-op", choices=sorted(_FINAL_OPS), default="g1")
    p.add_argument("--full-vector-cap", type=int, default=DEFAULT_FULL_VECTOR_CAP)
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("schedule", help="closed-form query counts of every strategy")
    add_common(p)
    p.set_defaults(handler=_cmd_schedule)

    p = sub.add_parser("hierarchy", help="simulate a sequential GRK chain")
    add_common(p)
    p.set_defaults(handler=_cmd_hierarchy)

    p = sub.add_parser("tables", help="recompute a reference table and check it")
    p.add_argument("which", choices=("table1", "table2", "table3"))
    add_common(p, with_n=False)
    p.set_defaults(handler=_cmd_tables)

    p = sub.add_parser("sweep", help="hierarchy-vs-direct gap over a block-count grid")
    p.add_argument("--k1", type=_parse_range, required=True, help="INT or LO..HI")
    p.add_argument("--k2", type=_parse_range, required=True, help="INT or LO..HI")
    add_common(p, with_n=False)
    p.set_defaults(handler=_cmd_sweep)

    p = sub.add_parser("partitions", help="count equal-block partitions and label bits")
    add_common(p)
    p.set_defaults(handler=_cmd_partitions)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ToleranceError as exc:
        print(f"tolerance failure: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except PartialSearchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
