"""Boundary test and rank analysis of a Gram spectrahedron."""

from sosborder import registry
from sosborder.analyze import analyze
from sosborder.sdp import SdpOptions

for key in ("ex1:54", "ex2:54"):
    rep = analyze(registry.get(key).decomposition, SdpOptions(seed=42))
    print(f"== {key}")
    print(rep.to_text())
