"""Modeling, synthesis, and band analysis for varactor-tuned dual-band IFAs."""

from .antmodel import (
    AntennaGeometry,
    FrequencyProfile,
    impedance_toward_open,
    impedance_toward_short,
    input_impedance,
    return_loss,
    sweep,
)
from .bandplan import (
    BandPlan,
    CoverageReport,
    FrequencyIntervalSet,
    Interval,
    builtin_bandplan,
    coverage_report,
    extract_bands,
    load_band_plan,
    tuning_sweep,
    tuning_union,
)
from .config import RunConfig, default_config, load_config, write_config
from .errors import ConfigError, ConvergenceError, IfatunerError, InfeasibleTargetError
from .kernels import BACKEND
from .resosynth import (
    CalibrationResult,
    SynthesisResult,
    calibrate,
    effective_electrical_length,
    find_resonances,
    quarter_wave_residual,
    resonance_residual,
    synthesize_lc,
)
from .rfcore import (
    CLIP_OHMS,
    OPEN_LOAD,
    ResonatorNetwork,
    VaractorModel,
    line_transform,
    parallel_lc_impedance,
    resonator_impedance,
    shorted_stub_impedance,
    varactor_capacitance,
)

__version__ = "0.1.0"

__all__ = [
    "AntennaGeometry",
    "BACKEND",
    "BandPlan",
    "CLIP_OHMS",
    "CalibrationResult",
    "ConfigError",
    "ConvergenceError",
    "CoverageReport",
    "FrequencyIntervalSet",
    "FrequencyProfile",
    "IfatunerError",
    "InfeasibleTargetError",
    "Interval",
    "OPEN_LOAD",
    "ResonatorNetwork",
    "RunConfig",
    "SynthesisResult",
    "VaractorModel",
    "builtin_bandplan",
    "calibrate",
    "coverage_report",
    "default_config",
    "effective_electrical_length",
    "extract_bands",
    "find_resonances",
    "impedance_toward_open",
    "impedance_toward_short",
    "input_impedance",
    "line_transform",
    "load_band_plan",
    "load_config",
    "parallel_lc_impedance",
    "quarter_wave_residual",
    "resonance_residual",
    "resonator_impedance",
    "return_loss",
    "shorted_stub_impedance",
    "sweep",
    "synthesize_lc",
    "tuning_sweep",
    "tuning_union",
    "varactor_capacitance",
    "write_config",
]
