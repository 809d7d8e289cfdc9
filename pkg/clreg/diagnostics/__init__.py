"""Fisher, batch-noise, interference and accumulation probes with their statistics"""

from .accumulation import is_nondecreasing, probe_importance_accumulation
from .batch_noise import (
    SingleTaskTrace,
    probe_adam_path_integral,
    probe_mas_batch_robustness,
    probe_si_batch_inflation,
    run_batch_traces,
    train_single_task,
)
from .fisher import (
    FisherDecomposition,
    empirical_fisher_decomposition,
    empirical_fisher_diag,
    flip_labels,
    hessian_diag_fd,
    nll_hessian_diag,
    probe_fisher_convergence,
    probe_hessian_gap,
    resample_labels,
    true_fisher_diag,
)
from .interference import gradient_interference, probe_gradient_interference, top_fraction
from .models import DiagnosticReport, ProbeRow, StatResult
from .stats import (
    cosine_similarity,
    pearson,
    pearson_or_flag,
    relative_l2,
    student_t_sf,
    t_test_one_sample_greater,
)

__all__ = [
    'DiagnosticReport',
    'ProbeRow',
    'StatResult',
    'FisherDecomposition',
    'SingleTaskTrace',
    'cosine_similarity',
    'empirical_fisher_decomposition',
    'empirical_fisher_diag',
    'flip_labels',
    'gradient_interference',
    'hessian_diag_fd',
    'is_nondecreasing',
    'nll_hessian_diag',
    'pearson',
    'pearson_or_flag',
    'probe_adam_path_integral',
    'probe_fisher_convergence',
    'probe_gradient_interference',
    'probe_hessian_gap',
    'probe_importance_accumulation',
    'probe_mas_batch_robustness',
    'probe_si_batch_inflation',
    'relative_l2',
    'resample_labels',
    'run_batch_traces',
    'student_t_sf',
    't_test_one_sample_greater',
    'top_fraction',
    'train_single_task',
    'true_fisher_diag',
]
