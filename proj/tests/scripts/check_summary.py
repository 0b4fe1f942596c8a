#!/usr/bin/env python3
"""Recompute every summary.csv under a run directory from its results.csv
and compare field by field.

The arithmetic follows the same order as the C++ code (plain left-to-right
sums, two-pass population variance, linear-interpolation quantiles), so
the floating-point values must match exactly.
"""

import csv
import math
import sys
from collections import Counter, OrderedDict
from pathlib import Path

GOLD_SIZES = {1: 1, 2: 2, 3: 4, 4: 3, 5: 4, 6: 3, 7: 4}


def mean(values):
    total = 0.0
    for v in values:
        total += v
    return total / len(values)


def pstd(values):
    m = mean(values)
    sq = 0.0
    for v in values:
        sq += (v - m) * (v - m)
    return math.sqrt(sq / len(values))


def quantile(sorted_values, p):
    pos = p * (len(sorted_values) - 1)
    lo = math.floor(pos)
    hi = min(lo + 1, len(sorted_values) - 1)
    frac = pos - lo
    return sorted_values[lo] + (sorted_values[hi] - sorted_values[lo]) * frac


def read_rows(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def group(rows, key):
    groups = OrderedDict()
    for r in rows:
        groups.setdefault(key(r), []).append(r)
    return groups


def table2_expected(rows):
    out = {}
    for (language, method), members in group(rows, lambda r: (int(r["language"]), r["method"])).items():
        sizes = [int(r["min_size"]) for r in members]
        counts = Counter(sizes)
        best = max(counts.values())
        out[(language, method)] = {
            "runs": len(members),
            "acc_rnn_mean": mean([float(r["acc_rnn"]) for r in members]),
            "acc_rnn_std": pstd([float(r["acc_rnn"]) for r in members]),
            "acc_gold_mean": mean([float(r["acc_gold"]) for r in members]),
            "acc_gold_std": pstd([float(r["acc_gold"]) for r in members]),
            "size_min": min(sizes),
            "size_mode": min(s for s, c in counts.items() if c == best),
            "gold_hits": sum(1 for r in members if r["gold_equivalent"] == "1"),
            "gold_size_hits": counts.get(GOLD_SIZES.get(language), 0),
        }
    return out


def sweep_expected(rows):
    def key(r):
        return (int(r["language"]), r["method"], int(r["epoch"]), int(r["data"]), float(r["kappa"]))

    out = {}
    for k, members in group(rows, key).items():
        acc = sorted(float(r["acc_rnn"]) for r in members)
        size = sorted(float(r["min_size"]) for r in members)
        merged = sorted(float(r["merged_size"]) for r in members)
        out[k] = {
            "runs": len(members),
            "acc_median": quantile(acc, 0.5),
            "acc_q1": quantile(acc, 0.25),
            "acc_q3": quantile(acc, 0.75),
            "acc_mean": mean([float(r["acc_rnn"]) for r in members]),
            "size_median": quantile(size, 0.5),
            "size_q1": quantile(size, 0.25),
            "size_q3": quantile(size, 0.75),
            "merged_median": quantile(merged, 0.5),
            "merged_q1": quantile(merged, 0.25),
            "merged_q3": quantile(merged, 0.75),
        }
    return out


def compare(summary_path, expected, key):
    problems = []
    seen = set()
    for row in read_rows(summary_path):
        k = key(row)
        seen.add(k)
        if k not in expected:
            problems.append(f"{summary_path}: unexpected group {k}")
            continue
        for field, want in expected[k].items():
            got = type(want)(float(row[field])) if isinstance(want, float) else int(row[field])
            if got != want:
                problems.append(f"{summary_path}: {k} {field}: file {row[field]} recomputed {want!r}")
    for k in expected:
        if k not in seen:
            problems.append(f"{summary_path}: missing group {k}")
    return problems


def main():
    root = Path(sys.argv[1] if len(sys.argv) > 1 else "acceptance-runs")
    summaries = sorted(root.rglob("summary.csv"))
    if not summaries:
        print(f"no summary.csv under {root}")
        return 1
    problems = []
    for path in summaries:
        rows = read_rows(path.parent / "results.csv")
        header = next(csv.reader(open(path)))
        if "size_mode" in header:
            problems += compare(path, table2_expected(rows), lambda r: (int(r["language"]), r["method"]))
        else:
            problems += compare(
                path,
                sweep_expected(rows),
                lambda r: (int(r["language"]), r["method"], int(r["epoch"]), int(r["data"]), float(r["kappa"])),
            )
        print(f"checked {path}")
    for p in problems:
        print(p)
    print("summaries match" if not problems else f"{len(problems)} mismatches")
    return 0 if not problems else 1


if __name__ == "__main__":
    sys.exit(main())
