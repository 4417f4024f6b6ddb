"""dsamp: reconstruction of bandlimited functions from lattice samples of
the function and its mixed first partial derivatives, with truncation-tail
certificates."""

from .bounds import TailBoundReport, growth_check, kernel_sum_bound, lp_sample_norm, tail_bound
from .corpus import (CORPUS_NAMES, CorpusFunction, QuadratureError, make_counterexample,
                     make_shifted_sinc, make_sinc_sq_product, make_tilde_f, named_corpus,
                     normalize_to_pi, sample_function)
from .kernels import sicn, sinc1, sinc1_deriv, sinc_sq_node_kernel, sincn
from .lattice import (Bandwidth, DimensionError, MultiIndex, TruncationWindow,
                      WindowTooLargeError, enum_multi_indices, enum_window, lattice_coords)
from .reconstruct import (METHODS, LatticeError, MissingChannelError, hermite1_eval,
                          hermite_nd_eval, legacy2d_eval, poly_term, reconstruct_grid, wks_eval)
from .sampleio import DsampFormatError, SampleSet, read_samples, write_field, write_samples

__version__ = "0.1.0"

__all__ = [
    "Bandwidth", "CORPUS_NAMES", "CorpusFunction", "DimensionError", "DsampFormatError",
    "LatticeError", "METHODS", "MissingChannelError", "MultiIndex", "QuadratureError",
    "SampleSet", "TailBoundReport", "TruncationWindow", "WindowTooLargeError",
    "enum_multi_indices", "enum_window", "growth_check", "hermite1_eval", "hermite_nd_eval",
    "kernel_sum_bound", "lattice_coords", "legacy2d_eval", "lp_sample_norm",
    "make_counterexample", "make_shifted_sinc", "make_sinc_sq_product", "make_tilde_f",
    "named_corpus", "normalize_to_pi", "poly_term", "read_samples", "reconstruct_grid",
    "sample_function", "sicn", "sinc1", "sinc1_deriv", "sinc_sq_node_kernel", "sincn",
    "tail_bound", "wks_eval", "write_field", "write_samples",
]
