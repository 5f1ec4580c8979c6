"""Exact dual certificate: a positive semidefinite moment matrix whose kernel is the span of the squares."""

from sosborder import registry
from sosborder.analyze import certificate_search
from sosborder.core import parse_poly

polys = list(registry.get("reznick46").decomposition.polys)
probes = [parse_poly(t, 4).leading_monomial() for t in ("x^3", "y^3", "z^3", "w^3")]
print(certificate_search(polys, probes).transcript())
