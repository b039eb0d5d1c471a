"""Length spectra, dual trees and equivariant Gromov comparisons for surface groups."""

from teich._kernels import BACKEND
from teich.group import ConjClass, conj_class, enumerate_classes, format_word, parse
from teich.hyp2 import HPoint, MoebiusMap
from teich.rep import Representation, pinching_family, punctured_torus_from_traces
from teich.rtree import DualTreeModel, britton_length, length_function
from teich.spectrum import LengthSpectrum, projectivize

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "ConjClass", "DualTreeModel", "HPoint", "LengthSpectrum", "MoebiusMap",
    "Representation", "britton_length", "conj_class", "enumerate_classes", "format_word",
    "length_function", "parse", "pinching_family", "projectivize",
    "punctured_torus_from_traces",
]
