"""Compare dd with d_Cu on random spectral pairs.

For q = 2^oo the level form of the equivalence is a theorem; for other q it
is the open p-relaxed conjecture and only recorded. The literal chain
dd <= d <= p dd is tallied separately, split by which side fails.
"""
import argparse
import collections
import random
from fractions import Fraction

from cuntzkit.basis import Supernatural
from cuntzkit.metrics import SpectralMorphism, equivalence_probe


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pairs", type=int, default=200)
    ap.add_argument("--max-size", type=int, default=8)
    ap.add_argument("--den", type=int, default=64)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    for primes in ((2,), (3,), (2, 3)):
        q = Supernatural.of(*primes)
        rng = random.Random(a.seed)
        tally = collections.Counter()
        first = None
        for k in range(a.pairs):
            n = rng.randint(1, a.max_size)
            xs = [Fraction(rng.randrange(a.den), a.den) for _ in range(n)]
            ys = [(x + Fraction(rng.randint(-3, 3), a.den)) % 1 for x in xs] if k % 2 else \
                [Fraction(rng.randrange(a.den), a.den) for _ in range(n)]
            rep = equivalence_probe(SpectralMorphism(tuple(xs)), SpectralMorphism(tuple(ys)), q)
            tally["level form ok" if rep.ok else "level form fails"] += 1
            if rep.literal_ok:
                tally["literal ok"] += 1
            elif rep.dd.value > rep.d:
                tally["literal: dd > d"] += 1
                first = first or (xs, ys, rep.dd.value, rep.d)
            else:
                tally["literal: d > p dd"] += 1
        print(f"q={q} ({'theorem' if primes == (2,) else 'conjecture probe'}): {dict(tally)}")
        if first:
            xs, ys, dd, d = first
            print(f"  e.g. X={[str(x) for x in xs]} Y={[str(y) for y in ys]} dd={dd} d={d}")


if __name__ == "__main__":
    main()
