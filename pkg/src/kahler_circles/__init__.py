"""
kahler-circles - a numerical laboratory for metrics whose geodesics are circles

Fubini metrics, their connections and curvature, quaternionic 2-jets,
complex projective rectifiers and complete complex families of circles,
with verification suites for each claim about them.
"""

__version__ = "0.1.0"
