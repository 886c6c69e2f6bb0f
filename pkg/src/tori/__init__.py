"""Complex tori, their length spectra and the noncommutative tori attached to them."""

from .contfrac import ContinuedFraction, UnimodularMatrix, convergents, expand_real, expand_surd
from .errors import ConvergenceFailure, DegenerateError, FieldMismatch, InvalidInput, ResourceLimit, ToriError
from .lattice import Lattice, Modulus, isomorphic, reduce
from .spectrum import LengthSpectrum, enumerate_spectrum
from .surd import QuadraticIrrational

__version__ = "0.1.0"

__all__ = [
    "ContinuedFraction",
    "ConvergenceFailure",
    "DegenerateError",
    "FieldMismatch",
    "InvalidInput",
    "Lattice",
    "LengthSpectrum",
    "Modulus",
    "QuadraticIrrational",
    "ResourceLimit",
    "ToriError",
    "UnimodularMatrix",
    "convergents",
    "enumerate_spectrum",
    "expand_real",
    "expand_surd",
    "isomorphic",
    "reduce",
]
