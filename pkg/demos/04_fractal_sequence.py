"""The doubling-free sequence and its self-similar structure.

Admit n unless n/2 was already admitted: the result contains every odd
number, its even members are multiples of 4, and dividing those by 4
reproduces the sequence, an exact self-assembly.  A generating identity
with doubling exponents pins the terms a second, independent way.
"""

from schurlab import (
    exponents,
    fractal_check,
    generate,
    genfun_check,
    greedy_reference,
    occupancy_string,
)

state = generate(30)
print("first 30 terms:", state.terms)

# the recursion agrees with the independent greedy construction
assert list(generate(10_000).terms) == greedy_reference(10_000)
print("greedy-scan oracle agrees on 10^4 terms")

# --- self-similarity ---------------------------------------------------------
report = fractal_check(generate(1000))
evens = [t for t in generate(60).terms if t % 2 == 0]
print("\neven terms:", evens[:9])
print("quartered:  ", [t // 4 for t in evens[:9]], "(the sequence again)")
print(f"fractal check at 1000 terms: prefix of length {report.prefix_length} "
      f"reproduced, passed = {report.passed}")

# --- generating identity ------------------------------------------------------
print("\nexponents:", exponents(8))
gf = genfun_check(generate(400), 6)
print(f"product over 6 exponent factors matches the first "
      f"{gf.orders_checked} coefficients: {gf.passed}")

# --- lattice rendering --------------------------------------------------------
print("\nsite occupancy (first 60 sites):")
print(occupancy_string(generate(60), 60))
