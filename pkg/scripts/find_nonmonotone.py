"""Search for elections where shifting a Greedy-Borda-CC committee member forward ejects it.

Two exhibits are written to tests/data/:

* ``greedy_borda_cc_nonmonotone.json``: unit weights, ties broken by lowest index.
* ``greedy_borda_cc_nonmonotone_tiefree.json``: holds under every tie-breaking order.

With unit weights a one-step shift moves any marginal gain by at most one, so
the first round that changes either admits p or turns a strict lead into a tie.
A tie-free exhibit therefore needs a heavier voter; it uses weights up to 2.
"""

import argparse
import itertools
import json
import random
from pathlib import Path

from shiftbribery.election import ShiftAction, apply_shift
from shiftbribery.rules import greedy_cc
from shiftbribery.sampling import random_election
from shiftbribery.textio import format_election

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"


def member(election, k: int, p: int, orders) -> bool | None:
    """p's membership if every tie order in ``orders`` agrees, else None."""
    verdicts = {p in greedy_cc(election, k, tie_order=order).committee for order in orders}
    return verdicts.pop() if len(verdicts) == 1 else None


def search(seed: int, tries: int, tie_free: bool, m_max: int = 6, n_max: int = 6):
    rng = random.Random(seed)
    for attempt in range(tries):
        m = rng.randint(3, m_max)
        n = rng.randint(2, n_max)
        election = random_election(rng, m, n, weight_max=2 if tie_free else 1)
        k = rng.randint(1, m - 1)
        cheap = [range(m), range(m - 1, -1, -1)] if tie_free else [range(m)]
        full = list(itertools.permutations(range(m))) if tie_free else cheap
        for p in range(m):
            if member(election, k, p, cheap) is not True:
                continue
            for v, voter in enumerate(election.voters):
                if voter.position(p) == 1:
                    continue
                shifts = [0] * n
                shifts[v] = 1
                after = apply_shift(election, p, ShiftAction(tuple(shifts)))
                if member(after, k, p, cheap) is not False:
                    continue
                if member(election, k, p, full) is True and member(after, k, p, full) is False:
                    return attempt, {
                        "rule": "greedy-borda-cc",
                        "k": k,
                        "preferred": election.candidates[p],
                        "voter": v,
                        "tie_free": tie_free,
                        "election": format_election(election),
                    }
    return None, None


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--tries", type=int, default=200_000)
    parser.add_argument("--out-dir", type=Path, default=DATA)
    args = parser.parse_args(argv)
    status = 0
    for tie_free, name in ((False, "greedy_borda_cc_nonmonotone.json"), (True, "greedy_borda_cc_nonmonotone_tiefree.json")):
        attempt, found = search(args.seed, args.tries, tie_free)
        if found is None:
            print(f"{name}: nothing in {args.tries} tries")
            status = 1
            continue
        args.out_dir.mkdir(parents=True, exist_ok=True)
        (args.out_dir / name).write_text(json.dumps(found, indent=2) + "\n")
        print(f"{name}: found after {attempt + 1} elections")
        print(found["election"], end="")
        print(f"k={found['k']}, shift {found['preferred']} one step forward in voter {found['voter']}")
    return status


if __name__ == "__main__":
    raise SystemExit(main())
