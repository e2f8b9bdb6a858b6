"""Knowledge-base checkpoints.

A snapshot is a single self-describing JSON document: the network
configuration plus every layer's parameters, hedge weight, and optimizer
state. Floats are serialized with shortest-round-trip repr, so a
save/load cycle reproduces the knowledge base exactly and a resumed run
continues bit for bit.
"""

from __future__ import annotations

import dataclasses
import json

import numpy as np

from .errors import DataFormatError
from .layer import LayerParams
from .model import KnowledgeBase, NetworkConfig
from .numeric import AdamState

FORMAT_NAME = "auxnet-knowledge-base"
FORMAT_VERSION = 1


def _adam_to_json(state: AdamState) -> dict:
    return {"m": state.m.tolist(), "v": state.v.tolist(), "step_count": state.step_count}


def _adam_from_json(obj: dict) -> AdamState:
    return AdamState(
        m=np.array(obj["m"], dtype=float),
        v=np.array(obj["v"], dtype=float),
        step_count=int(obj["step_count"]),
    )


def _layer_to_json(layer: LayerParams) -> dict:
    return {
        "W": layer.W.tolist(),
        "c": layer.c.tolist(),
        "theta": layer.theta.tolist(),
        "alpha": layer.alpha,
        "adam_W": _adam_to_json(layer.adam_W),
        "adam_c": _adam_to_json(layer.adam_c),
        "adam_theta": _adam_to_json(layer.adam_theta),
    }


def _layer_from_json(obj: dict) -> LayerParams:
    return LayerParams(
        W=np.array(obj["W"], dtype=float),
        c=np.array(obj["c"], dtype=float),
        theta=np.array(obj["theta"], dtype=float),
        alpha=float(obj["alpha"]),
        adam_W=_adam_from_json(obj["adam_W"]),
        adam_c=_adam_from_json(obj["adam_c"]),
        adam_theta=_adam_from_json(obj["adam_theta"]),
    )


def save_knowledge_base(kb: KnowledgeBase, path) -> None:
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "config": dataclasses.asdict(kb.config),
        "base": [_layer_to_json(l) for l in kb.base],
        "middle": _layer_to_json(kb.middle),
        "aux": [_layer_to_json(l) for l in kb.aux],
        "end": [_layer_to_json(l) for l in kb.end],
    }
    with open(path, "w") as f:
        json.dump(doc, f)


def load_knowledge_base(path) -> KnowledgeBase:
    with open(path) as f:
        doc = json.load(f)
    if doc.get("format") != FORMAT_NAME:
        raise DataFormatError(f"{path}: not a knowledge-base snapshot")
    if doc.get("version") != FORMAT_VERSION:
        raise DataFormatError(f"{path}: unsupported snapshot version {doc.get('version')}")
    cfg = NetworkConfig(**doc["config"])
    kb = KnowledgeBase(
        config=cfg,
        base=[_layer_from_json(o) for o in doc["base"]],
        middle=_layer_from_json(doc["middle"]),
        aux=[_layer_from_json(o) for o in doc["aux"]],
        end=[_layer_from_json(o) for o in doc["end"]],
    )
    if len(kb.base) != cfg.base_layers or len(kb.aux) != cfg.aux_layers \
            or len(kb.end) != cfg.end_layers:
        raise DataFormatError(f"{path}: layer counts disagree with the stored config")
    return kb
