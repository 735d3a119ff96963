"""Class groups of imaginary quadratic fields and torsion of prime classes.

Run:  python3 demos/class_groups.py
"""

from fractions import Fraction

from ringdensity import quadfield as qf

for d in (-23, -47, -71, -84, -163):
    table = qf.class_group(d)
    orders = {p: qf.prime_class_order(d, p, table) for p in (2, 3, 5, 7, 11, 13)}
    print(f"d={d}: h={table.h}, forms {' '.join(map(str, table.forms))}")
    print(f"   prime class orders: {orders}")

# The density of numbers whose non-maximal primes all have t-torsion class
# approaches the character product f_n(d) as |d| grows.
print("\n d        torsion density           f_2(d)                 ratio")
for d in (-43, -403, -4003, -40003):
    while not qf.is_fundamental(d):
        d -= 1
    dens = qf.torsion_density(d, 1, 2, tol=Fraction(1, 10**3))
    f, _, _ = qf.character_products_tol(d, 2, Fraction(1, 10**3))
    print(f"{d:7d}  {dens}  {f}  {dens / f}")
