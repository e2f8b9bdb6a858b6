# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel backend; mirrors auxnet._kernels_np function for function.

Forward/backward kernels require C-contiguous arrays (they always receive
whole parameter matrices); the optimizer kernels accept strided views
because the slot-masked update of the first end layer slices column blocks
out of a C-contiguous matrix.
"""

from libc.math cimport exp, pow, sqrt


def dense_forward(double[:, ::1] W, double[::1] c, double[::1] x,
                  double[::1] preact, double[::1] hidden):
    cdef Py_ssize_t i, j
    cdef Py_ssize_t n = W.shape[0], d = W.shape[1]
    cdef double acc
    for i in range(n):
        acc = c[i]
        for j in range(d):
            acc += W[i, j] * x[j]
        preact[i] = acc
        hidden[i] = acc if acc > 0.0 else 0.0


def classifier_forward(double[:, ::1] theta, double[::1] h, double[::1] probs):
    cdef Py_ssize_t i, j
    cdef Py_ssize_t C = theta.shape[0], n = theta.shape[1]
    cdef double acc, mx, s
    for i in range(C):
        acc = 0.0
        for j in range(n):
            acc += theta[i, j] * h[j]
        probs[i] = acc
    mx = probs[0]
    for i in range(1, C):
        if probs[i] > mx:
            mx = probs[i]
    s = 0.0
    for i in range(C):
        probs[i] = exp(probs[i] - mx)
        s += probs[i]
    for i in range(C):
        probs[i] /= s


def classifier_backward(double[:, ::1] theta, double[::1] h, double[::1] probs,
                        Py_ssize_t label, double alpha,
                        double[:, ::1] gtheta, double[::1] ghidden):
    cdef Py_ssize_t i, j
    cdef Py_ssize_t C = theta.shape[0], n = theta.shape[1]
    cdef double e
    for i in range(C):
        e = alpha * (probs[i] - (1.0 if i == label else 0.0))
        for j in range(n):
            gtheta[i, j] = e * h[j]
            ghidden[j] += e * theta[i, j]


def layer_backward(double[:, ::1] W, double[::1] preact, double[::1] x,
                   double[::1] upstream, double[:, ::1] gW, double[::1] gc,
                   double[::1] downstream):
    cdef Py_ssize_t i, j
    cdef Py_ssize_t n = W.shape[0], d = W.shape[1]
    cdef double mi
    for j in range(d):
        downstream[j] = 0.0
    for i in range(n):
        mi = upstream[i] if preact[i] > 0.0 else 0.0
        gc[i] = mi
        for j in range(d):
            gW[i, j] = mi * x[j]
            downstream[j] += mi * W[i, j]


cdef void _adam1(double[:] param, double[:] grad, double[:] m, double[:] v,
                 double bc1, double bc2, double eta, double beta1,
                 double beta2, double eps) noexcept:
    cdef Py_ssize_t i
    cdef double mi, vi
    for i in range(param.shape[0]):
        mi = beta1 * m[i] + (1.0 - beta1) * grad[i]
        vi = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i]
        m[i] = mi
        v[i] = vi
        param[i] -= eta * (mi / bc1) / (sqrt(vi / bc2) + eps)


cdef void _adam2(double[:, :] param, double[:, :] grad, double[:, :] m,
                 double[:, :] v, double bc1, double bc2, double eta,
                 double beta1, double beta2, double eps) noexcept:
    cdef Py_ssize_t i, j
    cdef double mi, vi
    for i in range(param.shape[0]):
        for j in range(param.shape[1]):
            mi = beta1 * m[i, j] + (1.0 - beta1) * grad[i, j]
            vi = beta2 * v[i, j] + (1.0 - beta2) * grad[i, j] * grad[i, j]
            m[i, j] = mi
            v[i, j] = vi
            param[i, j] -= eta * (mi / bc1) / (sqrt(vi / bc2) + eps)


def adam_step(param, grad, m, v, long t, double eta, double beta1,
              double beta2, double eps):
    cdef double bc1 = 1.0 - pow(beta1, <double> t)
    cdef double bc2 = 1.0 - pow(beta2, <double> t)
    if param.ndim == 1:
        _adam1(param, grad, m, v, bc1, bc2, eta, beta1, beta2, eps)
    else:
        _adam2(param, grad, m, v, bc1, bc2, eta, beta1, beta2, eps)


cdef void _sgd1(double[:] param, double[:] grad, double eta) noexcept:
    cdef Py_ssize_t i
    for i in range(param.shape[0]):
        param[i] -= eta * grad[i]


cdef void _sgd2(double[:, :] param, double[:, :] grad, double eta) noexcept:
    cdef Py_ssize_t i, j
    for i in range(param.shape[0]):
        for j in range(param.shape[1]):
            param[i, j] -= eta * grad[i, j]


def sgd_step(param, grad, double eta):
    if param.ndim == 1:
        _sgd1(param, grad, eta)
    else:
        _sgd2(param, grad, eta)
