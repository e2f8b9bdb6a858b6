"""Standalone online deep learner over a fixed input dimension.

A plain chain of hidden layers (base stack, middle, end stack from the same
seeded initializer), each with a hedge-weighted classifier head, trained
test-then-train with the combined head loss backpropagated through the
chain. No auxiliary slots, no freezing, no importance weights.

This is an independent implementation path from the auxiliary-network
model; with zero auxiliary layers the two must produce identical
predictions step for step. The arithmetic here is deliberately kept in the
same accumulation order (chain order for sums, discount -> floor ->
renormalize -> knowledge renormalize for the hedge weights) so the
equivalence is exact, not just approximate.
"""

from __future__ import annotations

import numpy as np

from . import kernels
from .errors import ContractViolation, DataFormatError
from .layer import layer_forward
from .metrics import RunMetrics
from .model import NetworkConfig, init_knowledge_base
from .numeric import ADAM_BETA1, ADAM_BETA2, ADAM_EPS, cross_entropy


class OnlineDeepLearner:
    """Hedge-backpropagation chain learner; one instance per run."""

    def __init__(self, cfg: NetworkConfig):
        if cfg.aux_layers != 0:
            raise ContractViolation("the chain learner takes no auxiliary layers")
        kb = init_knowledge_base(cfg)
        self.cfg = cfg
        self.chain = list(kb.base) + [kb.middle] + list(kb.end)

    def step(self, x: np.ndarray, label: int) -> tuple[int, float]:
        """Predict on x, then train on the revealed label.

        Returns (predicted class, hedge-weighted loss of the prediction).
        """
        cfg = self.cfg
        chain = self.chain
        denom = 0.0
        for layer in chain:
            denom += layer.alpha
        alphas = [layer.alpha / denom for layer in chain]

        acts = []
        h = np.asarray(x, dtype=float)
        for layer in chain:
            act = layer_forward(layer, h)
            acts.append(act)
            h = act.hidden

        prediction = np.zeros(cfg.num_classes)
        for a, act in zip(alphas, acts):
            prediction += a * act.class_probs
        predicted = int(np.argmax(prediction))

        losses = [cross_entropy(act.class_probs, label) for act in acts]
        step_loss = 0.0
        for a, loss in zip(alphas, losses):
            step_loss += a * loss

        # reverse pass: each head seeds its own alpha-weighted gradient
        grads = [None] * len(chain)
        u = np.zeros(cfg.nodes_per_layer)
        for i in range(len(chain) - 1, -1, -1):
            layer, act = chain[i], acts[i]
            gtheta = np.empty_like(layer.theta)
            kernels.classifier_backward(layer.theta, act.hidden, act.class_probs,
                                        label, alphas[i], gtheta, u)
            gW = np.empty_like(layer.W)
            gc = np.empty_like(layer.c)
            downstream = np.empty(layer.in_dim)
            kernels.layer_backward(layer.W, act.preact, act.input, u, gW, gc, downstream)
            grads[i] = (gW, gc, gtheta)
            u = downstream

        adam = cfg.optimizer == "adam"
        for layer, (gW, gc, gtheta) in zip(chain, grads):
            for param, grad, state in ((layer.W, gW, layer.adam_W),
                                       (layer.c, gc, layer.adam_c),
                                       (layer.theta, gtheta, layer.adam_theta)):
                if adam:
                    state.step_count += 1
                    kernels.adam_step(param, grad, state.m, state.v, state.step_count,
                                      cfg.eta, ADAM_BETA1, ADAM_BETA2, ADAM_EPS)
                else:
                    kernels.sgd_step(param, grad, cfg.eta)

        floor = cfg.smoothing / cfg.total_layers
        prenorm = []
        total = 0.0
        for a, loss in zip(alphas, losses):
            v = max(a * cfg.discount ** loss, floor)
            prenorm.append(v)
            total += v
        for layer, v in zip(chain, prenorm):
            layer.alpha = v / total
        total = 0.0
        for layer in chain:
            total += layer.alpha
        for layer in chain:
            layer.alpha = layer.alpha / total

        return predicted, step_loss


def run_stream_odl(cfg: NetworkConfig, stream) -> RunMetrics:
    """Prequential loop for the chain learner; instances must carry no aux values."""
    learner = OnlineDeepLearner(cfg)
    predicted, actual, losses = [], [], []
    for i, inst in enumerate(stream):
        if inst.x_aux:
            raise ContractViolation(
                f"step {i + 1}: chain learner received auxiliary values"
            )
        if len(inst.x_base) != cfg.num_base_features:
            raise DataFormatError(
                f"step {i + 1}: base vector has {len(inst.x_base)} features, "
                f"expected {cfg.num_base_features}"
            )
        pred, loss = learner.step(inst.x_base, inst.label)
        predicted.append(pred)
        actual.append(inst.label)
        losses.append(loss)
    return RunMetrics.from_steps([0] * len(predicted), predicted, actual, losses)
