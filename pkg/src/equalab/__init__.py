"""Block-equalization laboratory for doubly selective Rayleigh fading channels."""

from .analysis import (
    EffectiveScalarChannel,
    SerModel,
    UnknownDetector,
    ber_frame,
    complexity_model,
    diversity_bound,
    effective_scalar_channel,
    gamma_high_snr,
    gamma_k,
    ser_mpsk,
)
from .channel import (
    ChannelMatrix,
    ChannelRealization,
    FadingParams,
    NoiseModel,
    RankDeficientPilot,
    build_channel_matrix,
    jakes_realize,
    load_realization_csv,
    ls_estimate,
    save_realization_csv,
    transmit,
)
from .constellation import Constellation
from .equalizers import (
    AmlDfbeConfig,
    DETECTOR_IDS,
    DetectionResult,
    DimensionMismatch,
    SearchSpaceTooLarge,
    StateSpaceTooLarge,
    amldfbe_detect,
    amldfbe_detect_no_mf,
    batched_detect,
    exhaustive_ml,
    linear_mmse_detect,
    mlse_detect,
    mmse_dfe_detect,
)
from .harness import (
    BerRecord,
    ConfigError,
    DetectorSpec,
    SweepConfig,
    run_sweep,
    write_records_csv,
)
from .linalg import ConvergenceFailure, NotPositiveDefinite, OpCounter

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
