"""Synthetic subject-incremental task streams"""

from .generator import (
    GeneratorParams,
    StreamSpec,
    SubjectTask,
    base_class_means,
    bayes_accuracy,
    export_stream_csv,
    generate_stream,
    generate_subject,
    load_subject_csv,
    reorder_stream,
    rotate,
    rotation_pairs,
    shuffle_stream,
    subject_means,
)
from .labels import QUADRANTS, quadrant_label, trinary_label

__all__ = [
    'GeneratorParams',
    'StreamSpec',
    'SubjectTask',
    'base_class_means',
    'bayes_accuracy',
    'export_stream_csv',
    'generate_stream',
    'generate_subject',
    'load_subject_csv',
    'reorder_stream',
    'rotate',
    'rotation_pairs',
    'shuffle_stream',
    'subject_means',
    'QUADRANTS',
    'quadrant_label',
    'trinary_label',
]
