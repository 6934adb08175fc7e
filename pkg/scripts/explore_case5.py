"""Tabulate the case-5 parameters (a, b) over every subgroup of (Z/(n+1))^2."""
import argparse
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from quotfib.acceptance import all_subgroups
from quotfib.classify import DeltaSubgroup, PairSpec, classify, verify_class
from quotfib.torsion import TorsionPoint


@dataclass(frozen=True)
class ExploreConfig:
    max_n: int = 5
    verify: bool = False


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--max-n", type=int, default=5)
    p.add_argument("--verify", action="store_true")
    a = p.parse_args()
    cfg = ExploreConfig(a.max_n, a.verify)
    for n in range(1, cfg.max_n + 1):
        N = n + 1
        counts = Counter()
        bad = 0
        for pair in all_subgroups(N).values():
            gens = [(TorsionPoint(Fraction(x, N), Fraction(y, N)),) for x, y in pair]
            cls = classify(PairSpec.beta(n), DeltaSubgroup(tuple(gens)))
            counts[cls.params or "trivial"] += 1
            if cfg.verify:
                bad += any(e["status"] != "pass" for e in verify_class(PairSpec.beta(n), cls))
        summary = ", ".join(f"{k}: {v}" for k, v in sorted(counts.items(), key=str))
        print(f"n={n}: {sum(counts.values())} subgroups; {summary}" + (f"; failing {bad}" if cfg.verify else ""))


if __name__ == "__main__":
    main()
