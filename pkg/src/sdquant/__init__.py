"""Sigma-Delta quantization of harmonic frames and partial Fourier measurements."""
from .decode import (
    DecodeOutcome,
    DecoderConfig,
    consistent_decode,
    l1_decode,
    residual_inf,
    sobolev_decode,
    sobolev_dual,
    sparse_error,
)
from .fit import SlopeFit, fit_loglog_slope
from .frames import (
    HarmonicFrame,
    SelectionMap,
    apply_selection,
    build_dft,
    build_harmonic_frame,
    draw_selection,
    normalize_columns,
)
from .numkit import (
    AnalyticSvd,
    SingularOperatorError,
    analytic_svd_dinv,
    apply_dinv_power,
    apply_dpower,
    materialize_difference,
    numeric_svd,
)
from .quant import (
    QuantAlphabet,
    SigmaDeltaResult,
    msq_quantize,
    scalar_quantize,
    sigma_delta_quantize,
    stable_alphabet,
    stable_radius,
)
from .rng import stream
from .spectral import (
    ConcentrationReport,
    ConjectureReport,
    RicEstimate,
    concentration_experiment,
    conjecture_check,
    estimate_ric,
    projected_spectrum,
)

__all__ = [
    "AnalyticSvd",
    "ConcentrationReport",
    "ConjectureReport",
    "DecodeOutcome",
    "DecoderConfig",
    "HarmonicFrame",
    "QuantAlphabet",
    "RicEstimate",
    "SelectionMap",
    "SigmaDeltaResult",
    "SingularOperatorError",
    "SlopeFit",
    "analytic_svd_dinv",
    "apply_dinv_power",
    "apply_dpower",
    "apply_selection",
    "build_dft",
    "build_harmonic_frame",
    "concentration_experiment",
    "conjecture_check",
    "consistent_decode",
    "draw_selection",
    "estimate_ric",
    "fit_loglog_slope",
    "l1_decode",
    "materialize_difference",
    "msq_quantize",
    "normalize_columns",
    "numeric_svd",
    "projected_spectrum",
    "residual_inf",
    "scalar_quantize",
    "sigma_delta_quantize",
    "sobolev_decode",
    "sobolev_dual",
    "sparse_error",
    "stable_alphabet",
    "stable_radius",
    "stream",
]

__version__ = "0.1.0"
