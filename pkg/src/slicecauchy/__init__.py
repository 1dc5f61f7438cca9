"""Slice-regular functions: Fueter polynomials, axially monogenic
decomposition and a local Cauchy-type integral formula over hypersurfaces
in R^4."""

from .quat import Quaternion, decompose, inv, mul
from .sympoly import RPoly4, RationalH, expand_power
from .slicefn import QPoly, SliceFn, StemFn
from .fueter import (MonogenicPair, decompose_poly, decompose_slicefn,
                     fueter_poly, fueter_preimage, zonal)
from .quadrature import Box4, Sphere3, integrate, nodes
from .driver import ReconstructionReport, convergence_sweep, reconstruct

__version__ = "0.1.0"

__all__ = [
    "Quaternion", "mul", "inv", "decompose",
    "RPoly4", "RationalH", "expand_power",
    "QPoly", "StemFn", "SliceFn",
    "MonogenicPair", "zonal", "fueter_poly", "decompose_poly",
    "decompose_slicefn", "fueter_preimage",
    "Sphere3", "Box4", "nodes", "integrate",
    "ReconstructionReport", "reconstruct", "convergence_sweep",
]
