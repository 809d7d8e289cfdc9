"""Preprocessing presets and the notch -> band-pass -> rejection -> windowing chain"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..errors import PreconditionError, ShapeError
from .artifacts import reject_by_kurtosis
from .filters import MultiChannelSignal, butterworth_bandpass, notch_filter
from .segmentation import WindowSpec, mean_std_normalize, window_segments

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PreprocessPreset:
    name: str
    fs: float
    n_channels: int
    notch_f0: float = 50.0
    notch_q: float = 30.0
    band: Tuple[float, float] = (0.5, 45.0)
    order: int = 4
    chunk: int = 384
    overlap: int = 128
    z_thresh: float = 4.0

    @property
    def window(self) -> WindowSpec:
        return WindowSpec(self.chunk, self.overlap)


PRESETS: Dict[str, PreprocessPreset] = {
    'headset-14ch-128hz': PreprocessPreset(
        name='headset-14ch-128hz', fs=128.0, n_channels=14, chunk=384, overlap=128,
    ),
    'cap-62ch-200hz': PreprocessPreset(
        name='cap-62ch-200hz', fs=200.0, n_channels=62, chunk=600, overlap=200,
    ),
}


def get_preset(name: str) -> PreprocessPreset:
    try:
        return PRESETS[name]
    except KeyError:
        raise PreconditionError(f"Unknown preset '{name}', expected one of {sorted(PRESETS)}") from None


@dataclass
class PreprocessResult:
    segments: List[np.ndarray]
    rejected: List[int] = field(default_factory=list)


def preprocess(
    sig: MultiChannelSignal,
    preset: PreprocessPreset,
    components: Optional[np.ndarray] = None,
    mixing: Optional[np.ndarray] = None,
) -> PreprocessResult:
    """
    Run the full preprocessing chain on one recording

    Args:
        sig: raw recording, must match the preset's sampling rate
        preset: filter and windowing parameters
        components: optional C' x N sources of the filtered signal from an
            external decomposition; rejected sources are zeroed
        mixing: C x C' matrix mapping the cleaned sources back to channels

    Returns:
        PreprocessResult with normalized windows and rejected source indices
    """
    if not np.isclose(sig.fs, preset.fs):
        raise PreconditionError(f"Signal fs={sig.fs} Hz does not match preset {preset.name} ({preset.fs} Hz)")

    filtered = notch_filter(sig, preset.notch_f0, preset.notch_q)
    filtered = butterworth_bandpass(filtered, preset.band[0], preset.band[1], preset.order)

    rejected: List[int] = []
    if components is not None:
        if mixing is None:
            raise PreconditionError("Component rejection needs the mixing matrix")
        components = np.atleast_2d(np.asarray(components, dtype=np.float64))
        mixing = np.atleast_2d(np.asarray(mixing, dtype=np.float64))
        if mixing.shape != (sig.n_channels, components.shape[0]) or components.shape[1] != sig.n_samples:
            raise ShapeError(
                f"Mixing {mixing.shape} and components {components.shape} do not fit a "
                f"{sig.n_channels} x {sig.n_samples} signal"
            )
        cleaned, rejected = reject_by_kurtosis(components, preset.z_thresh)
        filtered = filtered.replace(mixing @ cleaned)

    segments = window_segments(mean_std_normalize(filtered), preset.window)
    logger.debug(f"{preset.name}: {len(segments)} windows, rejected {rejected}")
    return PreprocessResult(segments, rejected)
