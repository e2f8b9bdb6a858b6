"""Finite-difference verification of the backward pass.

Perturbs every parameter entry of every active layer and compares the
central difference of the ensemble loss against the analytic gradients the
update uses. Run with the plain-SGD optimizer so the comparison sees raw
gradients rather than Adam-scaled steps.
"""

from __future__ import annotations

import numpy as np

from .model import (KnowledgeBase, NetworkConfig, compute_gradients, create_model,
                    ensemble_loss, forward, init_knowledge_base, merge_knowledge,
                    update_step)

# entries smaller than this count as zero when forming relative errors,
# keeping finite-difference roundoff noise out of dead-relu paths
REL_ERROR_FLOOR = 1e-6

TINY_CONFIG = NetworkConfig(
    num_base_features=4, num_classes=2, base_layers=2, middle_layers=1,
    aux_layers=2, end_layers=2, nodes_per_layer=3, optimizer="sgd",
)


def total_loss(kb: KnowledgeBase, active_aux, x_base, x_aux, label) -> float:
    model = create_model(kb, active_aux)
    trace = forward(model, x_base, x_aux)
    return ensemble_loss(trace, model, label)


def finite_difference_gradients(kb: KnowledgeBase, active_aux, x_base, x_aux,
                                label, h: float = 1e-5):
    """Central differences of the ensemble loss w.r.t. every active parameter."""
    model = create_model(kb, active_aux)
    fd = {}
    for key in model.active_keys():
        layer = kb.layer_for(key)
        out = []
        for param in (layer.W, layer.c, layer.theta):
            g = np.empty_like(param)
            flat = param.reshape(-1)
            gflat = g.reshape(-1)
            for i in range(flat.size):
                orig = flat[i]
                flat[i] = orig + h
                up = total_loss(kb, active_aux, x_base, x_aux, label)
                flat[i] = orig - h
                down = total_loss(kb, active_aux, x_base, x_aux, label)
                flat[i] = orig
                gflat[i] = (up - down) / (2.0 * h)
            out.append(g)
        fd[key] = tuple(out)
    return fd


def max_relative_error(analytic: np.ndarray, numeric: np.ndarray) -> float:
    denom = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), REL_ERROR_FLOOR)
    return float(np.max(np.abs(analytic - numeric) / denom))


def check_case(kb: KnowledgeBase, active_aux, x_base, x_aux, label, h=1e-5) -> dict:
    """Compare analytic and finite-difference gradients for one instance."""
    model = create_model(kb, active_aux)
    trace = forward(model, x_base, x_aux)
    ensemble_loss(trace, model, label)
    analytic = compute_gradients(model, trace, label)
    numeric = finite_difference_gradients(kb, active_aux, x_base, x_aux, label, h)
    per_layer = {}
    worst = 0.0
    for key in model.active_keys():
        errs = tuple(max_relative_error(a, n)
                     for a, n in zip(analytic[key], numeric[key]))
        per_layer[key] = errs
        worst = max(worst, *errs)
    return {"active_aux": tuple(sorted(active_aux)), "label": label,
            "max_rel_error": worst, "per_layer": per_layer}


def _min_preact_margin(kb, active_aux, x_base, x_aux) -> float:
    """Distance of the closest preactivation to the relu kink."""
    model = create_model(kb, active_aux)
    trace = forward(model, x_base, x_aux)
    return min(float(np.min(np.abs(trace.activations[key].preact)))
               for key in model.active_keys())


def run_gradient_check(cfg: NetworkConfig = TINY_CONFIG, seed: int = 7,
                       h: float = 1e-5, warmup_steps: int = 5) -> list[dict]:
    """Check three (input, label, availability) cases: none, all, partial aux.

    The knowledge base is warmed up with a few online steps first: a freshly
    initialized network has zero biases, so a fully dead layer parks its
    successor's preactivation exactly on the relu kink, where one-sided
    finite differences and the subgradient-0 convention legitimately
    disagree. Inputs that still land within 10h of a kink are redrawn.
    """
    if cfg.optimizer != "sgd":
        raise ValueError("gradient checks need the plain-SGD optimizer mode")
    rng = np.random.default_rng(seed)
    kb = init_knowledge_base(cfg)
    all_aux = tuple(range(1, cfg.aux_layers + 1))
    for _ in range(warmup_steps):
        model = create_model(kb, all_aux)
        x_base = rng.normal(size=cfg.num_base_features)
        x_aux = {j: float(rng.normal()) for j in all_aux}
        label = int(rng.integers(cfg.num_classes))
        trace = forward(model, x_base, x_aux)
        update_step(model, trace, label)
        merge_knowledge(kb, model)

    cases = [
        (),          # no auxiliary inputs
        all_aux,     # all of them
        tuple(sorted(rng.choice(np.arange(1, cfg.aux_layers + 1),
                                size=max(1, cfg.aux_layers // 2),
                                replace=False).tolist())),
    ]
    reports = []
    for active in cases:
        for _ in range(100):
            x_base = rng.normal(size=cfg.num_base_features)
            x_aux = {j: float(rng.normal()) for j in active}
            if _min_preact_margin(kb, active, x_base, x_aux) > 10.0 * h:
                break
        label = int(rng.integers(cfg.num_classes))
        reports.append(check_case(kb, active, x_base, x_aux, label, h))
    return reports
