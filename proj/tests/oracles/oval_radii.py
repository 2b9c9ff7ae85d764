#!/usr/bin/env python3
"""Closed-form radii for the concentric-oval program.

Ring i (0-based) has radii (major0 + i*g, minor0 + i*g). Printed as a C++
initializer so the values can be frozen into the tests.
"""
from fractions import Fraction

MAJOR0 = Fraction(2)
MINOR0 = Fraction(1)
GROWTH = Fraction(1, 2)

for count in (1, 3, 7):
    rings = [(MAJOR0 + i * GROWTH, MINOR0 + i * GROWTH) for i in range(count)]
    body = ", ".join(f"{{{float(a)!r}, {float(b)!r}}}" for a, b in rings)
    print(f"{{{count}, {{{body}}}}},")
