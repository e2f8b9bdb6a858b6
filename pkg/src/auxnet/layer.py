"""One network layer with its attached softmax classifier head.

A layer computes hidden = relu(W @ input + c) and exposes a per-layer
prediction f = softmax(theta @ hidden). The hedge weight alpha scales this
head's share of the ensemble output and of the backpropagated loss.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ContractViolation
from .numeric import AdamState


@dataclass
class LayerParams:
    """Parameters and optimizer state of one layer.

    W: (out_dim, in_dim) weights; c: (out_dim,) bias;
    theta: (num_classes, out_dim) classifier weights (no classifier bias);
    alpha: hedge weight of the classifier head, in [0, 1].
    """

    W: np.ndarray
    c: np.ndarray
    theta: np.ndarray
    alpha: float
    adam_W: AdamState
    adam_c: AdamState
    adam_theta: AdamState

    @property
    def in_dim(self) -> int:
        return self.W.shape[1]

    @property
    def out_dim(self) -> int:
        return self.W.shape[0]

    @property
    def num_classes(self) -> int:
        return self.theta.shape[0]

    @classmethod
    def create(cls, rng: np.random.Generator, in_dim: int, out_dim: int,
               num_classes: int, alpha: float) -> LayerParams:
        """Scaled-uniform init for W and theta, zero bias, zero Adam state.

        Draw order (W then theta) is part of the seeded-determinism contract.
        """
        w_limit = np.sqrt(6.0 / (in_dim + out_dim))
        t_limit = np.sqrt(6.0 / (out_dim + num_classes))
        W = rng.uniform(-w_limit, w_limit, size=(out_dim, in_dim))
        theta = rng.uniform(-t_limit, t_limit, size=(num_classes, out_dim))
        return cls(
            W=W,
            c=np.zeros(out_dim),
            theta=theta,
            alpha=alpha,
            adam_W=AdamState.zeros(W.shape),
            adam_c=AdamState.zeros(out_dim),
            adam_theta=AdamState.zeros(theta.shape),
        )

    def copy(self) -> LayerParams:
        return LayerParams(
            W=self.W.copy(), c=self.c.copy(), theta=self.theta.copy(),
            alpha=self.alpha, adam_W=self.adam_W.copy(),
            adam_c=self.adam_c.copy(), adam_theta=self.adam_theta.copy(),
        )


@dataclass
class LayerActivation:
    """Forward-pass cache for one layer; preact is kept for backprop."""

    input: np.ndarray
    preact: np.ndarray
    hidden: np.ndarray
    class_probs: np.ndarray


def layer_forward(params: LayerParams, input: np.ndarray) -> LayerActivation:
    """hidden = relu(W @ input + c); class_probs = softmax(theta @ hidden)."""
    input = np.ascontiguousarray(input, dtype=float)  # compiled kernels need C order
    if len(input) != params.in_dim:
        raise ContractViolation(
            f"input length {len(input)} != layer in_dim {params.in_dim}"
        )
    preact = np.empty(params.out_dim)
    hidden = np.empty(params.out_dim)
    kernels.dense_forward(params.W, params.c, input, preact, hidden)
    probs = np.empty(params.num_classes)
    kernels.classifier_forward(params.theta, hidden, probs)
    return LayerActivation(input=input, preact=preact, hidden=hidden, class_probs=probs)


def classifier_grad_theta(act: LayerActivation, label: int) -> np.ndarray:
    """d CE(class_probs, label) / d theta = (probs - onehot) x hidden."""
    if not 0 <= label < len(act.class_probs):
        raise ContractViolation(f"label {label} out of range")
    err = act.class_probs.copy()
    err[label] -= 1.0
    return np.outer(err, act.hidden)


def classifier_grad_hidden(act: LayerActivation, params: LayerParams, label: int) -> np.ndarray:
    """d CE(class_probs, label) / d hidden = theta.T @ (probs - onehot).

    Seed for backpropagating this head's loss into earlier layers.
    """
    if not 0 <= label < len(act.class_probs):
        raise ContractViolation(f"label {label} out of range")
    err = act.class_probs.copy()
    err[label] -= 1.0
    return params.theta.T @ err


def backprop_through_layer(act: LayerActivation, params: LayerParams,
                           upstream: np.ndarray):
    """Push a gradient w.r.t. hidden back through relu and the dense map.

    Returns (grad_W, grad_c, downstream) where downstream is the gradient
    w.r.t. this layer's input. Relu subgradient at exactly 0 is taken as 0.
    """
    if len(upstream) != params.out_dim:
        raise ContractViolation(
            f"upstream length {len(upstream)} != layer out_dim {params.out_dim}"
        )
    grad_W = np.empty_like(params.W)
    grad_c = np.empty_like(params.c)
    downstream = np.empty(params.in_dim)
    kernels.layer_backward(params.W, act.preact, act.input, upstream,
                           grad_W, grad_c, downstream)
    return grad_W, grad_c, downstream
