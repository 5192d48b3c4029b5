"""Exact Heun-polynomial ladders, Lambe-Ward recurrences and Darboux partners
for the hyperbolic Poschl-Teller potential."""

from fractions import Fraction

from .poly_core import ExactPoly, IdentityViolation, DegenerateScale, InvalidIndex, Unsupported
from .heun_ladder import HPTIndex, HeunPoly, construct

__all__ = [
    "Fraction", "ExactPoly", "IdentityViolation", "DegenerateScale", "InvalidIndex",
    "Unsupported", "HPTIndex", "HeunPoly", "construct",
]
