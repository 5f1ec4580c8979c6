"""Hilbert functions of a complete intersection and of a perturbation of it."""

from sosborder.core import parse_poly
from sosborder.ideals import MonomialIdeal, hilbert_table

ci = MonomialIdeal.powers(3, 3)
print("cubes in 3 variables:", hilbert_table(ci, 6).hf())
extra = MonomialIdeal(3, [parse_poly("x^2*y", 3).leading_monomial()])
print("plus x^2 y:          ", hilbert_table(ci + extra, 6).hf())
