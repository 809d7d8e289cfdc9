"""Continual-learning strategies: Naive, Online EWC, SI, MAS"""

from ..errors import PreconditionError
from .base import ImportanceMap, Strategy, penalty_and_grad
from .ewc import EwcState, EwcStrategy, ewc_estimate_fisher, ewc_task_end
from .mas import MasStrategy, mas_importance, mas_task_end
from .naive import NaiveStrategy, naive_task_end
from .si import SiStrategy, SiTaskState, si_accumulate_step, si_task_end

STRATEGY_NAMES = ('naive', 'ewc', 'si', 'mas')

# lambdas tuned on the 14-channel emotion benchmark; starting points for sweeps
DEFAULT_LAMBDAS = {'naive': 0.0, 'ewc': 5.0, 'si': 0.5, 'mas': 0.1}

# re-tuned by lambda sweep on the 10-subject synthetic shifted stream
SHIFTED_STREAM_LAMBDAS = {'naive': 0.0, 'ewc': 5.0, 'si': 5.0, 'mas': 0.1}


def make_strategy(
    name: str,
    lam: float = 0.0,
    gamma: float = 0.9,
    xi_damp: float = 0.1,
    n_fisher: int = 500,
) -> Strategy:
    """
    Build a strategy by name

    Args:
        name: one of STRATEGY_NAMES
        lam: regularisation strength (ignored by naive)
        gamma: Online EWC decay
        xi_damp: SI dampening term
        n_fisher: EWC Fisher sample count
    """
    name = name.lower()
    if name == 'naive':
        return NaiveStrategy(lam)
    if name == 'ewc':
        return EwcStrategy(lam, gamma=gamma, n_fisher=n_fisher)
    if name == 'si':
        return SiStrategy(lam, xi_damp=xi_damp)
    if name == 'mas':
        return MasStrategy(lam)
    raise PreconditionError(f"Unknown strategy '{name}' (expected one of {STRATEGY_NAMES})")


__all__ = [
    'DEFAULT_LAMBDAS',
    'SHIFTED_STREAM_LAMBDAS',
    'STRATEGY_NAMES',
    'ImportanceMap',
    'Strategy',
    'penalty_and_grad',
    'EwcState',
    'EwcStrategy',
    'ewc_estimate_fisher',
    'ewc_task_end',
    'MasStrategy',
    'mas_importance',
    'mas_task_end',
    'NaiveStrategy',
    'naive_task_end',
    'SiStrategy',
    'SiTaskState',
    'si_accumulate_step',
    'si_task_end',
    'make_strategy',
]
