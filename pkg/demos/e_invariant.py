"""How often is Z[alpha] saturated?  The e-invariant of random quadratics.

For a primitive minimal polynomial a_n x^n + ... + a_0 the e-invariant is
gcd(a_n, ..., a_1).  Its distribution has a closed form; this script prints
the certified values next to exhaustive and Monte-Carlo counts.

Run:  python3 demos/e_invariant.py
"""

from fractions import Fraction

from ringdensity import density, sampler

# Certified probabilities P[e = k] for quadratic algebraic numbers.
print("k   certified P[e=k]                exhaustive H=120   Monte-Carlo H=1e5")
exhaustive = sampler.run(sampler.EnumSpec(2, 120), blocks=4)
mc = sampler.run(sampler.EnumSpec(2, 10**5, mode="montecarlo", samples=300_000, seed=1))
for k in range(1, 9):
    iv = density.prob_e(k, 2)
    print(f"{k}   {iv}   {exhaustive.prob_e(k):.5f}            {mc.prob_e(k):.5f}")

# The probabilities sum to one.  The tail past K is bounded through the
# Moebius expansion of phi(k)/k, which is far sharper than sum k^-n.
for K in (10, 100, 1000):
    sharp = density.prob_e_normalization(K, 2)
    crude = density.prob_e_normalization(K, 2, crude=True)
    print(f"K={K:5d}: sum + tail in {sharp} (width {float(sharp.width):.1e}); "
          f"crude tail width {float(crude.width):.1e}")

# Ring equality at the primes dividing k depends only on rad(k).
for k in (2, 4, 8, 6, 12):
    print(f"P[ring agrees at primes of {k:2d}] in {density.prob_ring_equals(k, 2)}")

# Counts behind the main terms.
c, pred = sampler.count_irreducible(2, 50)
print(f"irreducible quadratics of height <= 50: {c}, main term {pred}, "
      f"relative deviation {float(sampler.relative_deviation(c, pred)):.4f}")
print("containment of {2, 3} factorizes:",
      density.prob_X_contains({2, 3}) == density.prob_X_contains({2}) * density.prob_X_contains({3}),
      Fraction(density.prob_X_contains({2, 3})))
