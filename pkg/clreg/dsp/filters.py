"""Notch and Butterworth band-pass filtering of multi-channel signals"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple, Union

import numpy as np
import pandas as pd
from scipy import signal as sps

from ..errors import PreconditionError

logger = logging.getLogger(__name__)


@dataclass
class MultiChannelSignal:
    """C x N samples at sampling rate fs (Hz)"""
    data: np.ndarray
    fs: float

    def __post_init__(self):
        self.data = np.atleast_2d(np.asarray(self.data, dtype=np.float64))
        if self.fs <= 0:
            raise PreconditionError(f"Sampling rate must be positive, got {self.fs}")
        if self.data.shape[1] < 1:
            raise PreconditionError("Signal needs at least one sample")

    @property
    def n_channels(self) -> int:
        return self.data.shape[0]

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]

    def replace(self, data: np.ndarray) -> "MultiChannelSignal":
        return MultiChannelSignal(data, self.fs)


def notch_coefficients(f0: float, q: float, fs: float) -> Tuple[np.ndarray, np.ndarray]:
    """Second-order IIR notch (b, a) with bandwidth f0 / q"""
    if not 0 < f0 < fs / 2:
        raise PreconditionError(f"Notch frequency {f0} Hz must lie in (0, {fs / 2}) Hz")
    if q <= 0:
        raise PreconditionError(f"Quality factor must be positive, got {q}")
    return sps.iirnotch(f0, q, fs=fs)


def notch_filter(sig: MultiChannelSignal, f0: float = 50.0, q: float = 30.0) -> MultiChannelSignal:
    """Causal biquad notch applied to every channel"""
    b, a = notch_coefficients(f0, q, sig.fs)
    return sig.replace(sps.lfilter(b, a, sig.data, axis=1))


def bandpass_sos(lo: float, hi: float, order: int, fs: float) -> np.ndarray:
    """
    Butterworth band-pass as second-order sections (bilinear transform)

    ``order`` is the prototype order, so the band-pass has ``order`` biquads.
    """
    if not 0 < lo < hi < fs / 2:
        raise PreconditionError(f"Invalid band {lo}-{hi} Hz for fs={fs} Hz")
    if order < 1:
        raise PreconditionError(f"Filter order must be >= 1, got {order}")
    return sps.butter(order, [lo, hi], btype="bandpass", fs=fs, output="sos")


def butterworth_bandpass(
    sig: MultiChannelSignal,
    lo: float = 0.5,
    hi: float = 45.0,
    order: int = 4,
    zero_phase: bool = False,
) -> MultiChannelSignal:
    """
    Band-pass every channel

    Args:
        sig: input signal
        lo, hi: pass band edges in Hz
        order: Butterworth prototype order
        zero_phase: run the cascade forward and backward (doubles the
            stop-band attenuation in dB, non-causal)
    """
    sos = bandpass_sos(lo, hi, order, sig.fs)
    if zero_phase:
        return sig.replace(sps.sosfiltfilt(sos, sig.data, axis=1))
    return sig.replace(sps.sosfilt(sos, sig.data, axis=1))


def bandpass_gain_db(lo: float, hi: float, order: int, fs: float, freq: float) -> float:
    """Steady-state single-pass gain of the band-pass at ``freq`` in dB"""
    _, response = sps.sosfreqz(bandpass_sos(lo, hi, order, fs), worN=[freq], fs=fs)
    return float(20.0 * np.log10(np.abs(response[0])))


def write_signal(sig: MultiChannelSignal, path: Union[str, Path]) -> Path:
    """CSV with one row per channel plus a ``<stem>.json`` sidecar holding fs"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(sig.data).to_csv(path, header=False, index=False, lineterminator="\n")
    path.with_suffix(".json").write_text(json.dumps({"fs": sig.fs}) + "\n")
    return path


def read_signal(path: Union[str, Path]) -> MultiChannelSignal:
    path = Path(path)
    sidecar = path.with_suffix(".json")
    if not sidecar.exists():
        raise PreconditionError(f"Missing sampling-rate sidecar {sidecar}")
    fs = json.loads(sidecar.read_text())["fs"]
    data = pd.read_csv(path, header=None, float_precision="round_trip").to_numpy(dtype=np.float64)
    return MultiChannelSignal(data, fs)
