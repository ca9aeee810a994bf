"""Chirp-product decomposition of compactly supported radial multilinear multipliers."""
from .chirp import build_decomposition, choose_truncation, reconstruct
from .operator import GridFunction, apply_direct, apply_fast
from .spectral import fourier_coefficients
from .symbols import RadialSymbolSpec, make_bochner_riesz, make_custom_radial, make_modified_br
from .trace import dyadic_localize, extract_trace

__version__ = "0.1.0"
__all__ = ["GridFunction", "RadialSymbolSpec", "apply_direct", "apply_fast", "build_decomposition",
           "choose_truncation", "dyadic_localize", "extract_trace", "fourier_coefficients", "make_bochner_riesz",
           "make_custom_radial", "make_modified_br", "reconstruct"]
