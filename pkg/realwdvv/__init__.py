"""Exact open and closed genus-0 invariants of (ℙ³, τ₃) from the real WDVV relations."""

from realwdvv.complex_gw import ComplexStore, solve_complex
from realwdvv.real_wdvv import RealStore, solve_real
from realwdvv.target import ProjectiveSpaceP3, get_target

__all__ = [
    "ComplexStore",
    "ProjectiveSpaceP3",
    "RealStore",
    "get_target",
    "solve_complex",
    "solve_real",
]
