"""Dense numeric primitives: activations, loss, and the Adam optimizer.

Everything operates on float64 numpy arrays. Parameters live in plain
arrays; optimizer state is a small mutable struct owned by the parameter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ContractViolation

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8

# Probability floor in the loss keeps the hedge discount exponent finite.
PROB_FLOOR = 1e-12


def relu(v: np.ndarray) -> np.ndarray:
    """Elementwise max(0, x)."""
    return np.maximum(v, 0.0)


def softmax(v: np.ndarray) -> np.ndarray:
    """Stable softmax (max-subtracted); output sums to 1."""
    shifted = v - np.max(v)
    e = np.exp(shifted)
    return e / e.sum()


def cross_entropy(probs: np.ndarray, label: int) -> float:
    """-ln(probs[label]), floored at PROB_FLOOR."""
    if not 0 <= label < len(probs):
        raise ContractViolation(f"label {label} out of range for {len(probs)} classes")
    return -np.log(max(float(probs[label]), PROB_FLOOR))


@dataclass
class AdamState:
    """First/second moment buffers plus the step counter for one parameter."""

    m: np.ndarray
    v: np.ndarray
    step_count: int = 0

    @classmethod
    def zeros(cls, shape) -> AdamState:
        return cls(m=np.zeros(shape), v=np.zeros(shape))

    def copy(self) -> AdamState:
        return AdamState(self.m.copy(), self.v.copy(), self.step_count)


def adam_update(param: np.ndarray, grad: np.ndarray, state: AdamState, eta: float) -> None:
    """One Adam step, in place on ``param`` and ``state``."""
    if param.shape != grad.shape or param.shape != state.m.shape:
        raise ContractViolation(
            f"shape mismatch: param {param.shape}, grad {grad.shape}, state {state.m.shape}"
        )
    state.step_count += 1
    kernels.adam_step(
        param, grad, state.m, state.v, state.step_count, eta, ADAM_BETA1, ADAM_BETA2, ADAM_EPS
    )
