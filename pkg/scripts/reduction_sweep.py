"""Check every hardness construction end to end on all tiny source instances.

For each case the generated instance is decided by the automatic solver choice
and compared with the source problem's brute-force answer; score audits run on
every non-degenerate instance.
"""

import argparse
import collections
import time

from shiftbribery.audits import check_case, reduction_cases, structural_audit


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-vertices", type=int, default=6)
    parser.add_argument("--max-sets", type=int, default=3)
    args = parser.parse_args(argv)
    counts = collections.Counter()
    failures = []
    start = time.perf_counter()
    for case in reduction_cases(args.max_vertices, max_sets=args.max_sets):
        counts[case.family, case.expected] += 1
        problem = check_case(case)
        if problem:
            failures.append(problem)
        failures += [f"{case.label()}: {p}" for p in structural_audit(case)]
    for (family, expected), n in sorted(counts.items()):
        print(f"{family:9s} {'yes' if expected else 'no ':3s} {n:5d}")
    print(f"{sum(counts.values())} cases, {len(failures)} failures, {time.perf_counter() - start:.1f}s")
    for line in failures[:20]:
        print("FAIL", line)
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
