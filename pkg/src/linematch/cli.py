"""Batch command line: match cohort files, print certificates, run benchmarks.

Exit codes: 0 success; 1 certificate entry failed verification; 2 malformed
input CSV; 3 item count not divisible by k; 4 k outside the certified range
without --uncertified; 5 enumeration budget exceeded for a requested oracle.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import random
import sys
from dataclasses import dataclass

from .certify import certificate_render, certify_abs, certify_sq
from .core import (
    CERTIFIED_MAX_K,
    CertifiedRangeError,
    EnumerationBudgetError,
    ScoredItem,
    SizeError,
    ValidationError,
    WeightKind,
    within_distance,
)
from .heuristics import (
    hierarchical_triple_match,
    local_search_2tuple,
    points_from_coords,
    triangle_matching,
)
from .matching import balance_columns, match_line
from .multipartite import (
    heuristic_ratio_bound,
    instance_from_scores,
    match_sorted,
    tripartite_lower_bound,
)
from .oracle import (
    TRIPARTITE_ORACLE_MAX_N,
    brute_force_assignment,
    brute_force_partition,
    greedy_match,
    partition_count,
)

SCHEMA_VERSION = 1
DEFAULT_BUDGET = 10_000_000
COLLECT_LIMIT = 1_000_000

EXIT_OK = 0
EXIT_CERT_FAILED = 1
EXIT_BAD_CSV = 2
EXIT_BAD_SIZE = 3
EXIT_BAD_RANGE = 4
EXIT_BUDGET = 5


@dataclass
class RunConfig:
    subcommand: str
    input: str | None = None
    k: int = 2
    weight: WeightKind = WeightKind.ABS
    balance: bool = False
    format: str = "json"
    seed: int = 0
    budget: int = DEFAULT_BUDGET
    uncertified: bool = False
    full_range: bool = False
    line_sizes: tuple[int, ...] = (2, 4)
    tri_sizes: tuple[int, ...] = (2, 4, 6)
    instances: int = 3
    dist: str = "uniform-int"
    oracle: bool = False

    def as_dict(self) -> dict:
        return {
            "subcommand": self.subcommand,
            "input": self.input,
            "k": self.k,
            "weight": self.weight.value,
            "balance": self.balance,
            "format": self.format,
            "seed": self.seed,
            "budget": self.budget,
            "uncertified": self.uncertified,
            "full_range": self.full_range,
        }


class CsvError(Exception):
    pass


def read_cohort_csv(path: str) -> list[ScoredItem]:
    """Parse an `id,score` CSV into ScoredItems, naming the offending line
    on any malformation."""
    try:
        fh = open(path, "r", encoding="utf-8", newline="")
    except OSError as exc:
        raise CsvError(f"cannot open {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvError(f"{path}: empty file, expected header 'id,score'")
        if [h.strip() for h in header] != ["id", "score"]:
            raise CsvError(
                f"{path}: line 1: expected header 'id,score', got {','.join(header)!r}"
            )
        items = []
        seen: set[str] = set()
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise CsvError(f"{path}: line {line_no}: expected 2 fields, got {len(row)}")
            item_id = row[0].strip()
            if not item_id:
                raise CsvError(f"{path}: line {line_no}: empty id")
            if item_id in seen:
                raise CsvError(f"{path}: line {line_no}: duplicate id {item_id!r}")
            try:
                score = float(row[1])
            except ValueError:
                raise CsvError(
                    f"{path}: line {line_no}: score {row[1]!r} is not a number"
                )
            if not math.isfinite(score):
                raise CsvError(f"{path}: line {line_no}: non-finite score {row[1]!r}")
            seen.add(item_id)
            items.append(ScoredItem(item_id, score, len(items)))
    return items


def _emit(text: str, out) -> None:
    out.write(text)
    if not text.endswith("\n"):
        out.write("\n")


def cmd_match(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        items = read_cohort_csv(cfg.input)
    except CsvError as exc:
        _emit(f"error: {exc}", err)
        return EXIT_BAD_CSV
    try:
        partition = match_line(items, cfg.k, cfg.weight, uncertified=cfg.uncertified)
    except SizeError as exc:
        _emit(f"error: {exc}", err)
        return EXIT_BAD_SIZE
    except CertifiedRangeError as exc:
        _emit(f"error: {exc}", err)
        return EXIT_BAD_RANGE
    except ValidationError as exc:
        # scores were CSV-validated, so this can only be a bad group size
        _emit(f"error: {exc}", err)
        return EXIT_BAD_RANGE

    balanced = balance_columns(partition) if cfg.balance else None

    groups = []
    for idx, group in enumerate(partition.tuples):
        members = []
        slots = balanced.column_assignment[idx] if balanced else None
        for pos, member in enumerate(group.members):
            entry = {"id": member.id, "score": member.score}
            if slots is not None:
                entry["slot"] = slots.index(pos)
            members.append(entry)
        groups.append(
            {
                "index": idx,
                "members": members,
                "within": _within_of(partition, idx),
            }
        )

    if cfg.format == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "config": cfg.as_dict(),
            "groups": groups,
            "total_within": partition.total_within,
        }
        if balanced:
            doc["column_means"] = list(balanced.column_means)
        _emit(json.dumps(doc, indent=2), out)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["group", "id", "score", "slot", "within"])
        for g in groups:
            for m in g["members"]:
                writer.writerow(
                    [g["index"], m["id"], m["score"], m.get("slot", ""), g["within"]]
                )
        out.write(buf.getvalue())
    return EXIT_OK


def _within_of(partition, idx: int) -> float:
    return within_distance(partition.tuples[idx], partition.weight)


def cmd_certify(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    certifier = certify_abs if cfg.weight is WeightKind.ABS else certify_sq

    if cfg.full_range:
        cap = CERTIFIED_MAX_K[cfg.weight]
        all_ok = True
        for k in range(2, cap + 1):
            cert = certifier(k, collect=False)
            _emit(certificate_render(cert), out)
            all_ok = all_ok and cert.verified
        return EXIT_OK if all_ok else EXIT_CERT_FAILED

    try:
        collect = math.comb(2 * cfg.k - 1, cfg.k - 1) <= COLLECT_LIMIT if cfg.k >= 2 else True
        cert = certifier(cfg.k, exploratory=cfg.uncertified, collect=collect)
    except (CertifiedRangeError, ValidationError) as exc:
        _emit(f"error: {exc}", err)
        return EXIT_BAD_RANGE
    _emit(certificate_render(cert), out)
    return EXIT_OK if cert.verified else EXIT_CERT_FAILED


def _ratio(cost: float, reference: float) -> float:
    if reference == 0:
        return 1.0 if cost == 0 else math.inf
    return cost / reference


def _gen_scores(rng: random.Random, count: int, dist: str) -> list[float]:
    if dist == "uniform-real":
        return [round(rng.uniform(0, 100), 6) for _ in range(count)]
    return [rng.randint(0, 100) for _ in range(count)]


def cmd_bench(cfg: RunConfig, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    rng = random.Random(cfg.seed)

    line_specs: list[tuple[str, list[float]]] = []
    if cfg.k == 3:
        line_specs.append(("canonical", [1, 3, 4, 5, 8, 9]))
    for n in cfg.line_sizes:
        for rep in range(cfg.instances):
            line_specs.append(
                (f"n{n}r{rep}", _gen_scores(rng, n * cfg.k, cfg.dist))
            )

    line_rows = []
    for name, scores in line_specs:
        n = len(scores) // cfg.k
        count = partition_count(cfg.k, n)
        oracle_cost = None
        if count > cfg.budget and cfg.oracle:
            _emit(
                f"error: oracle for k={cfg.k} n={n} needs {count} partitions, "
                f"over budget {cfg.budget}",
                err,
            )
            return EXIT_BUDGET
        items = [ScoredItem(f"i{i}", s, i) for i, s in enumerate(scores)]
        try:
            if count <= cfg.budget:
                oracle_cost = brute_force_partition(
                    items, cfg.k, cfg.weight, budget=cfg.budget
                ).total_within
            matched = match_line(items, cfg.k, cfg.weight, uncertified=cfg.uncertified)
            greedy = greedy_match(items, cfg.k, cfg.weight, budget=cfg.budget)
            local = local_search_2tuple(greedy, cfg.weight, budget=cfg.budget)
        except EnumerationBudgetError as exc:
            _emit(f"error: {exc}", err)
            return EXIT_BUDGET
        except CertifiedRangeError as exc:
            _emit(f"error: {exc}", err)
            return EXIT_BAD_RANGE
        hier_cost = None
        if cfg.k == 3 and cfg.weight is WeightKind.ABS and n and not (n & (n - 1)):
            points = points_from_coords([[s] for s in scores])
            hier_cost = hierarchical_triple_match(points).cost
        reference = oracle_cost if oracle_cost is not None else matched.total_within
        row = {
            "family": "line",
            "instance": name,
            "k": cfg.k,
            "n": n,
            "scores": scores,
            "optimal": oracle_cost,
            "match_line": matched.total_within,
            "greedy": greedy.total_within,
            "local_search": local.total_within,
            "hierarchical": hier_cost,
            "ratio_match_line": _ratio(matched.total_within, reference),
            "ratio_greedy": _ratio(greedy.total_within, reference),
            "ratio_local_search": _ratio(local.total_within, reference),
        }
        line_rows.append(row)

    tri_rows = []
    for n in cfg.tri_sizes:
        for rep in range(cfg.instances):
            parts = [_gen_scores(rng, n, cfg.dist) for _ in range(3)]
            instance = instance_from_scores(parts, cfg.weight)
            oracle_cost = None
            if n <= TRIPARTITE_ORACLE_MAX_N and math.factorial(n) ** 2 <= cfg.budget:
                oracle_cost = brute_force_assignment(instance).weight
            elif cfg.oracle:
                _emit(
                    f"error: tripartite oracle limited to "
                    f"n<={TRIPARTITE_ORACLE_MAX_N} within budget, requested n={n}",
                    err,
                )
                return EXIT_BUDGET
            sorted_m = match_sorted(instance)
            triangle = triangle_matching(instance)
            bound = tripartite_lower_bound(instance)
            tri_rows.append(
                {
                    "family": "tripartite",
                    "instance": f"n{n}r{rep}",
                    "n": n,
                    "parts": parts,
                    "optimal": oracle_cost,
                    "match_sorted": sorted_m.weight,
                    "triangle": triangle.weight,
                    "lower_bound": bound,
                    "ratio_triangle_to_bound": heuristic_ratio_bound(
                        instance, triangle
                    ),
                }
            )

    if cfg.format == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "config": cfg.as_dict(),
            "line_instances": line_rows,
            "tripartite_instances": tri_rows,
        }
        _emit(json.dumps(doc, indent=2), out)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        cols = [
            "family", "instance", "k", "n", "optimal", "match_line", "greedy",
            "local_search", "hierarchical", "match_sorted", "triangle",
            "lower_bound", "ratio_match_line", "ratio_greedy",
            "ratio_local_search", "ratio_triangle_to_bound",
        ]
        writer.writerow(cols)
        for row in line_rows + tri_rows:
            writer.writerow([
                "" if row.get(c) is None else row.get(c, "") for c in cols
            ])
        out.write(buf.getvalue())
    return EXIT_OK


def _parse_sizes(text: str) -> tuple[int, ...]:
    try:
        sizes = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}")
    if not sizes or any(s < 1 for s in sizes):
        raise argparse.ArgumentTypeError(f"sizes must be positive, got {text!r}")
    return sizes


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linematch",
        description="Minimal-cost k-group matching of scored items on a line.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--weight", choices=["abs", "sq"], default="abs",
                       help="pairwise distance inside a group")
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                       help="max enumerations for oracle/greedy searches")
        p.add_argument("--uncertified", action="store_true",
                       help="allow k beyond the certified range")
        p.add_argument("--full-range", action="store_true",
                       help="certify: sweep the whole verified k range")

    p_match = sub.add_parser("match", help="group a cohort CSV into k-tuples")
    p_match.add_argument("--input", required=True, help="CSV with header id,score")
    p_match.add_argument("--k", type=int, required=True, help="group size (>= 2)")
    p_match.add_argument("--balance", action="store_true",
                         help="assign members to slots with near-equal means")
    common(p_match)

    p_cert = sub.add_parser("certify", help="print exchange-inequality certificates")
    p_cert.add_argument("--k", type=int, default=None)
    common(p_cert)

    p_bench = sub.add_parser("bench", help="benchmark heuristics against bounds")
    p_bench.add_argument("--k", type=int, default=3, help="group size for line instances")
    p_bench.add_argument("--line-sizes", type=_parse_sizes, default=(2, 4),
                         help="comma list of group counts per line instance")
    p_bench.add_argument("--tri-sizes", type=_parse_sizes, default=(2, 4, 6),
                         help="comma list of per-part sizes for tripartite instances")
    p_bench.add_argument("--instances", type=int, default=3,
                         help="instances per size")
    p_bench.add_argument("--dist", choices=["uniform-int", "uniform-real"],
                         default="uniform-int")
    p_bench.add_argument("--oracle", action="store_true",
                         help="require exact oracle columns (exit 5 if over budget)")
    common(p_bench)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        subcommand=args.subcommand,
        weight=WeightKind(args.weight),
        format=args.format,
        seed=args.seed,
        budget=args.budget,
        uncertified=args.uncertified,
        full_range=args.full_range,
    )
    if args.subcommand == "match":
        cfg.input = args.input
        cfg.k = args.k
        cfg.balance = args.balance
    elif args.subcommand == "certify":
        cfg.k = args.k if args.k is not None else 0
    else:
        cfg.k = args.k
        cfg.line_sizes = tuple(args.line_sizes)
        cfg.tri_sizes = tuple(args.tri_sizes)
        cfg.instances = args.instances
        cfg.dist = args.dist
        cfg.oracle = args.oracle
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = config_from_args(args)
    if cfg.subcommand == "match":
        return cmd_match(cfg)
    if cfg.subcommand == "certify":
        if not cfg.full_range and cfg.k < 2:
            sys.stderr.write("error: certify needs --k >= 2 or --full-range\n")
            return EXIT_BAD_RANGE
        return cmd_certify(cfg)
    return cmd_bench(cfg)


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
