"""Numerical lower-bound toolbox: Fourier spectra, LP degree/norm machinery,
discrepancy, the correlated-distribution construction, and reduction
embeddings."""

from .fourier import Spectrum, walsh_hadamard, inverse_transform
from .lp import LPError, LPResult, solve_lp
from .approx import (approx_degree, approx_spectral_norm, dual_witness,
                     DualWitness, min_uniform_error, symmetric_adeg_oracle)
from .discrepancy import (Distribution, correlation, discrepancy,
                          composed_disc_chain, gdm_bound, is_balanced,
                          lambda_construct, naive_discrepancy,
                          product_distribution, uniform_distribution,
                          xor_lemma_check)
from .reductions import (ccc20_value, check_embed_reduction,
                         check_embed_reduction_addressing, embed_reduction,
                         embed_reduction_addressing, ip_projection_check)

__all__ = [
    "Spectrum", "walsh_hadamard", "inverse_transform",
    "LPError", "LPResult", "solve_lp",
    "approx_degree", "approx_spectral_norm", "dual_witness", "DualWitness",
    "min_uniform_error", "symmetric_adeg_oracle",
    "Distribution", "correlation", "discrepancy", "composed_disc_chain",
    "gdm_bound", "is_balanced", "lambda_construct", "naive_discrepancy",
    "product_distribution", "uniform_distribution", "xor_lemma_check",
    "ccc20_value", "check_embed_reduction", "check_embed_reduction_addressing",
    "embed_reduction", "embed_reduction_addressing", "ip_projection_check",
]
