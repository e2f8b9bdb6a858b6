"""Pure-numpy kernel backend.

Same call signatures as the compiled backend (``auxnet._kernels_c``): every
function writes into caller-provided output arrays so the orchestration code
is backend-agnostic. ``classifier_backward`` accumulates into ``ghidden``;
everything else overwrites its outputs.
"""

import numpy as np


def dense_forward(W, c, x, preact, hidden):
    """preact = W @ x + c, hidden = relu(preact)."""
    np.dot(W, x, out=preact)
    preact += c
    np.maximum(preact, 0.0, out=hidden)


def classifier_forward(theta, h, probs):
    """probs = softmax(theta @ h), max-subtracted for overflow safety."""
    np.dot(theta, h, out=probs)
    probs -= probs.max()
    np.exp(probs, out=probs)
    probs /= probs.sum()


def classifier_backward(theta, h, probs, label, alpha, gtheta, ghidden):
    """Cross-entropy-through-softmax gradients of one classifier head.

    gtheta   <- alpha * outer(probs - onehot(label), h)
    ghidden  += alpha * theta.T @ (probs - onehot(label))
    """
    err = probs.copy()
    err[label] -= 1.0
    err *= alpha
    np.outer(err, h, out=gtheta)
    ghidden += theta.T @ err


def layer_backward(W, preact, x, upstream, gW, gc, downstream):
    """Backprop one dense+relu layer given the loss gradient at its output.

    gc         <- upstream * relu'(preact)
    gW         <- outer(gc, x)
    downstream <- W.T @ gc
    """
    np.multiply(upstream, preact > 0.0, out=gc)
    np.outer(gc, x, out=gW)
    np.dot(W.T, gc, out=downstream)


def adam_step(param, grad, m, v, t, eta, beta1, beta2, eps):
    """One in-place Adam update; t is the already-incremented step count."""
    m *= beta1
    m += (1.0 - beta1) * grad
    v *= beta2
    v += (1.0 - beta2) * np.square(grad)
    mhat = m / (1.0 - beta1**t)
    vhat = v / (1.0 - beta2**t)
    param -= eta * mhat / (np.sqrt(vhat) + eps)


def sgd_step(param, grad, eta):
    """One in-place plain gradient-descent update."""
    param -= eta * grad
