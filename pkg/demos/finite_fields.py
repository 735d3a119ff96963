"""Number of distinct irreducible factors of a random polynomial mod p.

As p grows the distribution tends to the coefficients of y(y+1)...(y+m-1)/m!.
Sampled integer polynomials follow the same law through their reduction.

Run:  python3 demos/finite_fields.py
"""

from ringdensity import factorstats as fs
from ringdensity.exact import stirling_density_row

m = 3
limit = stirling_density_row(m)
print("p     " + "  ".join(f"i={i}" for i in range(1, m + 1)))
for p in (5, 11, 31, 101):
    census = fs.exact_factor_census(m, p)
    print(f"{p:<5d} " + "  ".join(f"{float(census.fraction(i)):.4f}" for i in range(1, m + 1)))
print("limit " + "  ".join(f"{float(limit[i]):.4f}" for i in range(1, m + 1)))

census = fs.exact_factor_census(3, 7)
print("\nsquarefree census (3, 7):", census.squarefree,
      "formula:", {i: fs.squarefree_partition_count(3, i, 7) for i in (1, 2, 3)})

sample = fs.empirical_splitting(2, 11, 100, 30000, seed=5)
exact = fs.exact_factor_census(2, 11)
print("\nsampled monic quadratics mod 11 (skip fraction "
      f"{sample.skip_fraction:.3f}):")
for i in (1, 2):
    print(f"  i={i}: sample {sample.fraction(i):.4f}, census {float(exact.fraction(i)):.4f}")
