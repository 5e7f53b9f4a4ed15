#!/usr/bin/env python3
"""How much does the first letter of a reduced word influence later letters?

Prints the exact conditional law of the letter at position n (same letter,
inverse letter, or any other fixed letter), the independent transfer-matrix
recomputation, and a sampled estimate.  The influence decays geometrically:
both interval endpoints approach 1/2m.
"""

from fractions import Fraction

from halfdensity import distribution
from halfdensity.rng import RandomSource

M = 2
SAMPLES = 200_000

print(f"m = {M}, so each step chooses uniformly among {2 * M - 1} non-cancelling letters")
print(f"{'n':>3} {'relation':>9} {'exact':>12} {'oracle':>12} {'sampled':>9} {'bounds':>21}")

for n in range(1, 7):
    oracle = distribution.letter_law_oracle(M, n)
    counts = distribution.sample_relation_counts(M, n, SAMPLES, RandomSource(1000 + n))
    lo, hi = distribution.decay_bounds(M, n)
    for rel in ("same", "inverse", "other"):
        exact = distribution.letter_law(M, n, rel)
        # sampled counts pool the 2m-2 "other" letters
        weight = 1 if rel in ("same", "inverse") else 2 * M - 2
        sampled = counts[rel] / (SAMPLES * weight)
        assert lo <= exact <= hi
        print(f"{n:>3} {rel:>9} {str(exact):>12} {str(oracle[rel]):>12} "
              f"{sampled:>9.5f} [{str(lo):>9}, {str(hi):>8}]")
    print()

limit = Fraction(1, 2 * M)
lo, hi = distribution.decay_bounds(M, 40)
print(f"at n = 40 the interval has collapsed onto 1/2m = {limit}:")
print(f"  [{float(lo):.15f}, {float(hi):.15f}]")
