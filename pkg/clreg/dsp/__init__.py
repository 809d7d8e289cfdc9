"""Signal preprocessing: filtering, artefact rejection, windowing"""

from .artifacts import excess_kurtosis, kurtosis_zscores, reject_by_kurtosis
from .filters import (
    MultiChannelSignal,
    bandpass_gain_db,
    bandpass_sos,
    butterworth_bandpass,
    notch_coefficients,
    notch_filter,
    read_signal,
    write_signal,
)
from .pipeline import PRESETS, PreprocessPreset, PreprocessResult, get_preset, preprocess
from .segmentation import WindowSpec, mean_std_normalize, window_segments

__all__ = [
    'MultiChannelSignal',
    'WindowSpec',
    'PreprocessPreset',
    'PreprocessResult',
    'PRESETS',
    'get_preset',
    'preprocess',
    'notch_coefficients',
    'notch_filter',
    'bandpass_sos',
    'bandpass_gain_db',
    'butterworth_bandpass',
    'excess_kurtosis',
    'kurtosis_zscores',
    'reject_by_kurtosis',
    'window_segments',
    'mean_std_normalize',
    'read_signal',
    'write_signal',
]
