from pathlib import Path

import numpy as np
import pytest

from auxnet import Dataset, NetworkConfig, StreamInstance, load_ucr

REPO_ROOT = Path(__file__).resolve().parent.parent
ITALY_PATH = REPO_ROOT / "data" / "italy_power_demand.tsv"


@pytest.fixture(scope="session")
def italy_path() -> Path:
    return ITALY_PATH


@pytest.fixture(scope="session")
def italy(italy_path) -> Dataset:
    return load_ucr(italy_path)


def tiny_config(**overrides) -> NetworkConfig:
    defaults = dict(num_base_features=4, num_classes=2, base_layers=2,
                    aux_layers=2, end_layers=2, nodes_per_layer=3, seed=1)
    defaults.update(overrides)
    return NetworkConfig(**defaults)


def synthetic_stream(num_steps=120, num_base=4, num_aux=2, p=0.7, seed=3):
    """Small learnable stream: label = sign of a fixed linear functional."""
    rng = np.random.default_rng(seed)
    w = rng.normal(size=num_base + num_aux)
    instances = []
    for t in range(num_steps):
        x = rng.normal(size=num_base + num_aux)
        label = int(x @ w > 0)
        mask = rng.random(num_aux) < p
        x_aux = {a: float(x[num_base + a - 1]) for a in range(1, num_aux + 1) if mask[a - 1]}
        instances.append(StreamInstance(x_base=x[:num_base], x_aux=x_aux, label=label, t=t))
    return instances
