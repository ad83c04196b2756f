"""Exact-arithmetic cell complexes from quadratic forms and arithmetic
quotients: perfect-form catalogs and reduction, regular cell complexes
with integral homology, congruence tessellation quotients, shelling
certificates, and parabolic/building combinatorics."""

__version__ = "0.1.0"
