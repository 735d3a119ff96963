"""Size of the set X of primes where Z[alpha] fails to be locally maximal.

Prints certified coefficient tables a_t = P[|X| = t] for a few splitting
profiles and points out where they stop being monotone.

Run:  python3 demos/xsize_tables.py
"""

from fractions import Fraction

from ringdensity import density

TOL = Fraction(1, 10**5)

for prof in ("rational", "quadratic:-7", "quadratic:-4", "quadratic:5", "cyclotomic:5"):
    table = density.coefficient_table(prof, 2, 8, TOL)
    print(f"\n{prof} (prime cutoff {table.N})")
    for row in density.coefficient_rows(table, digits=8):
        print(f"  t={row['t']}: [{row['lo_dec']}, {row['hi_dec']}] {row['vs_next']}")

# Over Q(sqrt -7) the prime 2 splits, so |X| jumps by 2 at once and a_1 < a_2.
table = density.coefficient_table("quadratic:-7", 2, 2, TOL)
print("\nQ(sqrt -7): a_1 < a_2 certified:", table.intervals[1].certainly_lt(table.intervals[2]))

# Steps of length d do restore monotonicity for Galois fields of degree d.
rep = density.monotonicity_scan("quadratic:-7", 2, 12)
print("a_t > a_(t+2) for t <= 12:", all(r["relation"] == ">" for r in rep.rows))

# Moments by two independent routes.
for prof in ("rational", "quadratic:-7"):
    E, V = density.expectation_variance(prof, 2, Fraction(1, 10**4))
    series, comb = density.moment(prof, 2, 2, Fraction(1, 10**4))
    print(f"{prof}: E {E}, Var {V}, E|X|^2 {series} vs {comb}")

# Exploratory: -log a_t / (t log t) along the rational table.
table = density.coefficient_table("rational", 2, 14, TOL)
for row in density.growth_table(table):
    print(f"  t={row['t']:2d}: {row['ratio']:.4f}")
