"""Segre products, local cohomology and Kunneth-formula verification over exact fields."""

from .algebra import GF, QQ, Field, Polynomial, Ring, generalized_binomial, is_homogeneous
from .groebner import Ideal, ModulePresentation, colon_saturate, ring_map_kernel, syzygies
from .hilbert import HilbertSeries, hadamard_product, hf_value

__version__ = "0.1.0"
