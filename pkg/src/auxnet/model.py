"""The auxiliary-network online learner.

A persistent knowledge base holds parameters for every layer: a chain of
base layers, one middle layer, one single-input auxiliary layer per
auxiliary feature (in parallel), and a chain of end layers. At each step an
active model is instantiated to match the auxiliary features actually
present: missing auxiliary layers are frozen (excluded from the forward
pass, from backpropagation, and from the hedge update), the hedge weights
of the remaining layers are renormalized, and importance weights scale the
middle/auxiliary hidden features feeding the first end layer. After the
update the knowledge base absorbs the trained layers back, reconciling the
hedge weights of frozen and active layers.

Every layer carries a softmax classifier head; the model output is the
hedge-weighted convex combination of all active heads, and the training
loss is the same combination of the per-head cross-entropies. Hidden
weights are trained by backpropagating that combined loss, so each layer
receives gradient from every head downstream of it; each classifier head
is trained only on its own loss. Hedge weights follow multiplicative
weights: alpha <- alpha * discount**loss, floored at smoothing/L, then
renormalized over the active layers.

Layers are addressed by keys ("base", z) / ("middle", 1) / ("aux", j) /
("end", z), all 1-based. The first end layer's input is a concatenation of
slots of width nodes_per_layer: slot 0 holds the importance-scaled middle
hidden feature, slot j the importance-scaled hidden feature of auxiliary
layer j. Slots of frozen layers stay zero, so their weight columns neither
contribute to the forward product nor receive gradient; those columns (and
their optimizer moments) are skipped entirely during the update.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ContractViolation, DataFormatError
from .layer import LayerActivation, LayerParams, layer_forward
from .metrics import RunMetrics
from .numeric import ADAM_BETA1, ADAM_BETA2, ADAM_EPS, cross_entropy

LayerKey = tuple[str, int]


@dataclass(frozen=True)
class NetworkConfig:
    """Topology and training hyperparameters for one run."""

    num_base_features: int
    num_classes: int
    base_layers: int = 5
    middle_layers: int = 1
    aux_layers: int = 0
    end_layers: int = 5
    nodes_per_layer: int = 50
    eta: float = 0.01
    discount: float = 0.99   # hedge discount rate, in (0, 1)
    smoothing: float = 0.2   # hedge floor parameter, in (0, 1)
    seed: int = 0
    optimizer: str = "adam"  # "sgd" is the plain-OGD mode used by gradient checks

    def __post_init__(self):
        if self.base_layers < 1 or self.end_layers < 1:
            raise ContractViolation("need at least one base and one end layer")
        if self.middle_layers != 1:
            raise ContractViolation("exactly one middle layer is supported")
        if self.aux_layers < 0:
            raise ContractViolation("aux_layers must be >= 0")
        if not 0.0 < self.discount < 1.0:
            raise ContractViolation("discount must lie strictly inside (0, 1)")
        if not 0.0 < self.smoothing < 1.0:
            raise ContractViolation("smoothing must lie strictly inside (0, 1)")
        if self.nodes_per_layer < 1 or self.num_classes < 2 or self.num_base_features < 1:
            raise ContractViolation("invalid layer width, class count, or feature count")
        if self.eta <= 0.0:
            raise ContractViolation("eta must be positive")
        if self.optimizer not in ("adam", "sgd"):
            raise ContractViolation(f"unknown optimizer {self.optimizer!r}")

    @property
    def total_layers(self) -> int:
        return self.base_layers + self.middle_layers + self.aux_layers + self.end_layers


@dataclass
class KnowledgeBase:
    """Persistent parameter store covering all layers, active or not."""

    config: NetworkConfig
    base: list[LayerParams]
    middle: LayerParams
    aux: list[LayerParams]
    end: list[LayerParams]

    def layer_for(self, key: LayerKey) -> LayerParams:
        kind, idx = key
        if kind == "base":
            return self.base[idx - 1]
        if kind == "middle":
            return self.middle
        if kind == "aux":
            return self.aux[idx - 1]
        if kind == "end":
            return self.end[idx - 1]
        raise ContractViolation(f"unknown layer key {key!r}")

    def layer_items(self):
        """(key, layer) pairs for all layers, in base/middle/aux/end order."""
        for z, layer in enumerate(self.base, start=1):
            yield ("base", z), layer
        yield ("middle", 1), self.middle
        for j, layer in enumerate(self.aux, start=1):
            yield ("aux", j), layer
        for z, layer in enumerate(self.end, start=1):
            yield ("end", z), layer


def init_knowledge_base(cfg: NetworkConfig) -> KnowledgeBase:
    """Fresh knowledge base: uniform hedge weights 1/L, seeded weight init.

    Draw order (base chain, middle, aux chain, end chain) is fixed so that a
    seed fully determines the parameters.
    """
    rng = np.random.default_rng(cfg.seed)
    n = cfg.nodes_per_layer
    C = cfg.num_classes
    alpha0 = 1.0 / cfg.total_layers
    base = [
        LayerParams.create(rng, cfg.num_base_features if z == 1 else n, n, C, alpha0)
        for z in range(1, cfg.base_layers + 1)
    ]
    middle = LayerParams.create(rng, n, n, C, alpha0)
    aux = [LayerParams.create(rng, 1, n, C, alpha0) for _ in range(cfg.aux_layers)]
    end = [
        LayerParams.create(rng, n * (1 + cfg.aux_layers) if z == 1 else n, n, C, alpha0)
        for z in range(1, cfg.end_layers + 1)
    ]
    return KnowledgeBase(config=cfg, base=base, middle=middle, aux=aux, end=end)


@dataclass
class ActiveModel:
    """Per-step view of the knowledge base restricted to available inputs.

    alpha holds the renormalized hedge weights of the active layers (they
    sum to 1); gamma holds the importance of the middle layer and of each
    active auxiliary layer (they share one denominator and sum to 1).
    Layer parameters are shared with the knowledge base, not copied;
    update_step trains them in place and never touches frozen layers.
    """

    kb: KnowledgeBase
    active_aux: tuple[int, ...]
    alpha: dict[LayerKey, float]
    gamma: dict[LayerKey, float]

    def active_keys(self) -> list[LayerKey]:
        cfg = self.kb.config
        keys: list[LayerKey] = [("base", z) for z in range(1, cfg.base_layers + 1)]
        keys.append(("middle", 1))
        keys.extend(("end", z) for z in range(1, cfg.end_layers + 1))
        keys.extend(("aux", j) for j in self.active_aux)
        return keys


@dataclass
class ForwardTrace:
    """Cached activations of one forward pass plus the ensemble prediction.

    classifier_losses is filled in by ensemble_loss once the label arrives.
    """

    activations: dict[LayerKey, LayerActivation]
    end_input: np.ndarray
    prediction: np.ndarray
    classifier_losses: dict[LayerKey, float] | None = None


@dataclass
class UpdateReport:
    """Post-update bookkeeping exposed for invariant checks."""

    classifier_losses: dict[LayerKey, float]
    prenorm_alpha: dict[LayerKey, float]


def create_model(kb: KnowledgeBase, active_aux) -> ActiveModel:
    """Instantiate the active model for the given set of auxiliary indices.

    Hedge weights of the active layers are renormalized by their joint sum;
    importance weights are the middle/auxiliary hedge weights renormalized
    over just those layers. Both use the stored knowledge-base weights, so
    scaling the knowledge base never changes them.
    """
    cfg = kb.config
    active = tuple(sorted(set(int(j) for j in active_aux)))
    for j in active:
        if not 1 <= j <= cfg.aux_layers:
            raise ContractViolation(
                f"auxiliary index {j} outside 1..{cfg.aux_layers}"
            )
    # plain left-to-right sums: keep one accumulation order everywhere
    denom = 0.0
    for layer in kb.base:
        denom += layer.alpha
    denom += kb.middle.alpha
    for layer in kb.end:
        denom += layer.alpha
    for j in active:
        denom += kb.aux[j - 1].alpha
    gdenom = kb.middle.alpha
    for j in active:
        gdenom += kb.aux[j - 1].alpha

    alpha: dict[LayerKey, float] = {}
    for z in range(1, cfg.base_layers + 1):
        alpha[("base", z)] = kb.base[z - 1].alpha / denom
    alpha[("middle", 1)] = kb.middle.alpha / denom
    for z in range(1, cfg.end_layers + 1):
        alpha[("end", z)] = kb.end[z - 1].alpha / denom
    for j in active:
        alpha[("aux", j)] = kb.aux[j - 1].alpha / denom

    gamma: dict[LayerKey, float] = {("middle", 1): kb.middle.alpha / gdenom}
    for j in active:
        gamma[("aux", j)] = kb.aux[j - 1].alpha / gdenom
    return ActiveModel(kb=kb, active_aux=active, alpha=alpha, gamma=gamma)


def forward(model: ActiveModel, x_base: np.ndarray, x_aux: dict[int, float]) -> ForwardTrace:
    """Run the active network and form the hedge-weighted ensemble prediction."""
    kb = model.kb
    cfg = kb.config
    n = cfg.nodes_per_layer
    if len(x_base) != cfg.num_base_features:
        raise ContractViolation(
            f"base vector length {len(x_base)} != {cfg.num_base_features}"
        )
    if set(x_aux.keys()) != set(model.active_aux):
        raise ContractViolation(
            f"auxiliary values {sorted(x_aux)} do not match active set {list(model.active_aux)}"
        )

    acts: dict[LayerKey, LayerActivation] = {}
    h = np.asarray(x_base, dtype=float)
    for z in range(1, cfg.base_layers + 1):
        act = layer_forward(kb.base[z - 1], h)
        acts[("base", z)] = act
        h = act.hidden
    act_m = layer_forward(kb.middle, h)
    acts[("middle", 1)] = act_m
    for j in model.active_aux:
        acts[("aux", j)] = layer_forward(kb.aux[j - 1], np.array([float(x_aux[j])]))

    # slot concat; frozen slots stay zero and thus drop out of the end chain
    end_input = np.zeros(n * (1 + cfg.aux_layers))
    end_input[0:n] = model.gamma[("middle", 1)] * act_m.hidden
    for j in model.active_aux:
        end_input[j * n:(j + 1) * n] = model.gamma[("aux", j)] * acts[("aux", j)].hidden

    h = end_input
    for z in range(1, cfg.end_layers + 1):
        act = layer_forward(kb.end[z - 1], h)
        acts[("end", z)] = act
        h = act.hidden

    prediction = np.zeros(cfg.num_classes)
    for key in model.active_keys():
        prediction += model.alpha[key] * acts[key].class_probs
    return ForwardTrace(activations=acts, end_input=end_input, prediction=prediction)


def ensemble_loss(trace: ForwardTrace, model: ActiveModel, label: int) -> float:
    """Hedge-weighted sum of the active classifiers' cross-entropies.

    Also records the per-classifier losses on the trace for the hedge update.
    """
    losses: dict[LayerKey, float] = {}
    total = 0.0
    for key in model.active_keys():
        loss = cross_entropy(trace.activations[key].class_probs, label)
        losses[key] = loss
        total += model.alpha[key] * loss
    trace.classifier_losses = losses
    return total


def compute_gradients(model: ActiveModel, trace: ForwardTrace, label: int):
    """Gradients of the ensemble loss w.r.t. every active layer's W, c, theta.

    Importance weights are constants here: no gradient flows into the hedge
    weights through them. Classifier heads contribute alpha-weighted
    gradients; each layer's W and c receive the sum over every head that
    depends on them, which is exactly what one reverse pass accumulates.
    Returns {key: (grad_W, grad_c, grad_theta)} over active layers.
    """
    kb = model.kb
    cfg = kb.config
    n = cfg.nodes_per_layer
    grads: dict[LayerKey, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}

    def backward_layer(key: LayerKey, upstream: np.ndarray) -> np.ndarray:
        """Accumulate own-head gradient into upstream, then push through."""
        layer = kb.layer_for(key)
        act = trace.activations[key]
        gtheta = np.empty_like(layer.theta)
        kernels.classifier_backward(
            layer.theta, act.hidden, act.class_probs, label,
            model.alpha[key], gtheta, upstream,
        )
        gW = np.empty_like(layer.W)
        gc = np.empty_like(layer.c)
        downstream = np.empty(layer.in_dim)
        kernels.layer_backward(layer.W, act.preact, act.input, upstream,
                               gW, gc, downstream)
        grads[key] = (gW, gc, gtheta)
        return downstream

    u = np.zeros(n)
    for z in range(cfg.end_layers, 0, -1):
        u = backward_layer(("end", z), u)
    d_end_input = u  # gradient w.r.t. the slot concatenation

    u = model.gamma[("middle", 1)] * d_end_input[0:n]
    u = backward_layer(("middle", 1), u)
    for z in range(cfg.base_layers, 0, -1):
        u = backward_layer(("base", z), u)

    for j in model.active_aux:
        backward_layer(("aux", j), model.gamma[("aux", j)] * d_end_input[j * n:(j + 1) * n])
    return grads


def _apply_gradients(model: ActiveModel, grads) -> None:
    """Optimizer step on every active layer; first end layer is slot-masked."""
    kb = model.kb
    cfg = kb.config
    n = cfg.nodes_per_layer
    eta = cfg.eta
    adam = cfg.optimizer == "adam"

    def step(param, grad, state):
        if adam:
            state.step_count += 1
            kernels.adam_step(param, grad, state.m, state.v, state.step_count,
                              eta, ADAM_BETA1, ADAM_BETA2, ADAM_EPS)
        else:
            kernels.sgd_step(param, grad, eta)

    for key in model.active_keys():
        layer = kb.layer_for(key)
        gW, gc, gtheta = grads[key]
        if key == ("end", 1) and cfg.aux_layers > 0:
            # frozen slots keep their columns and moments untouched
            state = layer.adam_W
            if adam:
                state.step_count += 1
            for s in (0, *model.active_aux):
                cols = slice(s * n, (s + 1) * n)
                if adam:
                    kernels.adam_step(layer.W[:, cols], gW[:, cols],
                                      state.m[:, cols], state.v[:, cols],
                                      state.step_count, eta,
                                      ADAM_BETA1, ADAM_BETA2, ADAM_EPS)
                else:
                    kernels.sgd_step(layer.W[:, cols], gW[:, cols], eta)
        else:
            step(layer.W, gW, layer.adam_W)
        step(layer.c, gc, layer.adam_c)
        step(layer.theta, gtheta, layer.adam_theta)


def update_step(model: ActiveModel, trace: ForwardTrace, label: int) -> UpdateReport:
    """Train the active model on one revealed label, in place.

    Order: gradients are computed with the current hedge weights, parameters
    are stepped, then the hedge weights are discounted by discount**loss,
    floored at smoothing/L, and renormalized over the active layers.
    """
    if trace.classifier_losses is None:
        ensemble_loss(trace, model, label)
    losses = trace.classifier_losses
    grads = compute_gradients(model, trace, label)
    _apply_gradients(model, grads)

    cfg = model.kb.config
    floor = cfg.smoothing / cfg.total_layers
    prenorm: dict[LayerKey, float] = {}
    total = 0.0
    for key in model.active_keys():
        a = model.alpha[key] * cfg.discount ** losses[key]
        a = max(a, floor)
        prenorm[key] = a
        total += a
    for key in model.active_keys():
        model.alpha[key] = prenorm[key] / total
    return UpdateReport(classifier_losses=dict(losses), prenorm_alpha=prenorm)


def merge_knowledge(kb: KnowledgeBase, updated: ActiveModel) -> KnowledgeBase:
    """Fold the trained model back into the knowledge base.

    Layer parameters were trained in place, so only hedge weights need
    reconciling: active layers take their updated weights (summing to 1),
    frozen auxiliary layers keep their previous ones, and everything is
    renormalized so all L layers sum to 1 again. Returns kb.
    """
    if updated.kb is not kb:
        raise ContractViolation("model was not derived from this knowledge base")
    for key in updated.active_keys():
        kb.layer_for(key).alpha = updated.alpha[key]
    total = 0.0
    for _, layer in kb.layer_items():
        total += layer.alpha
    for _, layer in kb.layer_items():
        layer.alpha = layer.alpha / total
    return kb


def run_stream(cfg: NetworkConfig, stream, kb: KnowledgeBase | None = None) -> RunMetrics:
    """Prequential loop: instantiate, predict, train, merge, for every instance.

    Pass an existing knowledge base to resume a run; it is trained in place.
    """
    if kb is None:
        kb = init_knowledge_base(cfg)
    num_active, predicted, actual, losses = [], [], [], []
    for i, inst in enumerate(stream):
        if len(inst.x_base) != cfg.num_base_features:
            raise DataFormatError(
                f"step {i + 1}: base vector has {len(inst.x_base)} features, "
                f"expected {cfg.num_base_features}"
            )
        model = create_model(kb, inst.x_aux.keys())
        trace = forward(model, inst.x_base, inst.x_aux)
        num_active.append(len(model.active_aux))
        predicted.append(int(np.argmax(trace.prediction)))
        actual.append(inst.label)
        losses.append(ensemble_loss(trace, model, inst.label))
        update_step(model, trace, inst.label)
        merge_knowledge(kb, model)
    return RunMetrics.from_steps(num_active, predicted, actual, losses)
