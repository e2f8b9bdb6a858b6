"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; the numpy
fallback is always available. Set ``AUXNET_PURE_PYTHON=1`` in the environment
to force the fallback, or call :func:`set_backend` at runtime (tests and the
benchmark use this to compare the two).
"""

import os

from . import _kernels_np

try:
    from . import _kernels_c
except ImportError:
    _kernels_c = None

_BACKENDS = {"numpy": _kernels_np}
if _kernels_c is not None:
    _BACKENDS["compiled"] = _kernels_c

# Rebound by set_backend; orchestration code must access these through the
# module (kernels.dense_forward(...)), never via from-imports.
dense_forward = None
classifier_forward = None
classifier_backward = None
layer_backward = None
adam_step = None
sgd_step = None
_active = None


def available_backends():
    return tuple(sorted(_BACKENDS))


def backend_name():
    return _active


def set_backend(name):
    """Select the kernel implementation by name ('compiled' or 'numpy')."""
    global dense_forward, classifier_forward, classifier_backward
    global layer_backward, adam_step, sgd_step, _active
    try:
        mod = _BACKENDS[name]
    except KeyError:
        raise ValueError(
            f"unknown backend {name!r}; available: {available_backends()}"
        ) from None
    dense_forward = mod.dense_forward
    classifier_forward = mod.classifier_forward
    classifier_backward = mod.classifier_backward
    layer_backward = mod.layer_backward
    adam_step = mod.adam_step
    sgd_step = mod.sgd_step
    _active = name


if os.environ.get("AUXNET_PURE_PYTHON") or "compiled" not in _BACKENDS:
    set_backend("numpy")
else:
    set_backend("compiled")
