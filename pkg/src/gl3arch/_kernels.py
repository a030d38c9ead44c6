"""Hot numeric kernels.

Each kernel has a numba implementation and a numpy one; set
``GL3ARCH_DISABLE_NUMBA=1`` to force the numpy path.  Both produce the same
floating-point operations up to reassociation inside numpy reductions.
"""

from __future__ import annotations

import math
import os

import numpy as np

_G = 671.0 / 128.0
_C0 = 0.999999999999997092
_COEF = np.array([
    57.1562356658629235, -59.5979603554754912, 14.1360979747417471,
    -0.491913816097620199, 0.339946499848118887e-4, 0.465236289270485756e-4,
    -0.983744753048795646e-4, 0.158088703224912494e-3, -0.210264441724104883e-3,
    0.217439618115212643e-3, -0.164318106536763890e-3, 0.844182239838527433e-4,
    -0.261908384015814087e-4, 0.368991826595316234e-5,
])
_SQRT_2PI = 2.5066282746310005
_LOG_PI = math.log(math.pi)


def _env_disabled() -> bool:
    return os.environ.get("GL3ARCH_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")


# numpy implementations ---------------------------------------------------------


def _np_loggamma_right(z):
    tmp = z + _G
    tmp = (z + 0.5) * np.log(tmp) - tmp
    ser = np.full_like(z, _C0)
    y = z.copy()
    for c in _COEF:
        y = y + 1.0
        ser = ser + c / y
    return tmp + np.log(_SQRT_2PI * ser / z)


def _np_log_sin_pi(z):
    y = z.imag
    out = np.empty_like(z)
    small = np.abs(y) < 20.0
    out[small] = np.log(np.sin(np.pi * z[small]))
    pos = (~small) & (y > 0)
    zp = z[pos]
    out[pos] = -1j * np.pi * zp + np.log((np.exp(2j * np.pi * zp) - 1) / 2j)
    neg = (~small) & (y <= 0)
    zn = z[neg]
    out[neg] = 1j * np.pi * zn + np.log((1 - np.exp(-2j * np.pi * zn)) / 2j)
    return out


def loggamma_numpy(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.complex128)
    flat = z.ravel()
    out = np.empty_like(flat)
    right = flat.real >= 0.5
    out[right] = _np_loggamma_right(flat[right])
    left = ~right
    if left.any():
        zl = flat[left]
        out[left] = _LOG_PI - _np_log_sin_pi(zl) - _np_loggamma_right(1.0 - zl)
    return out.reshape(z.shape)


def hankel_kernel_numpy(a: np.ndarray, h: np.ndarray, b: np.ndarray) -> np.ndarray:
    """G[i, j] = a[i] * h[i + j] * b[j]."""
    n, m = a.shape[0], b.shape[0]
    idx = np.add.outer(np.arange(n), np.arange(m))
    return a[:, None] * h[idx] * b[None, :]


def weighted_sum_numpy(values: np.ndarray, w1: np.ndarray, w2: np.ndarray) -> complex:
    return complex(w1 @ values @ w2)


# numba implementations ----------------------------------------------------------

_NUMBA_OK = False
if not _env_disabled():
    try:
        import numba

        @numba.njit(cache=True)
        def _nb_lg_right(z):
            tmp = z + _G
            tmp = (z + 0.5) * np.log(tmp) - tmp
            ser = _C0 + 0j
            y = z
            for k in range(_COEF.shape[0]):
                y = y + 1.0
                ser = ser + _COEF[k] / y
            return tmp + np.log(_SQRT_2PI * ser / z)

        @numba.njit(cache=True)
        def _nb_log_sin_pi(z):
            y = z.imag
            if abs(y) < 20.0:
                return np.log(np.sin(np.pi * z))
            if y > 0:
                return -1j * np.pi * z + np.log((np.exp(2j * np.pi * z) - 1) / 2j)
            return 1j * np.pi * z + np.log((1 - np.exp(-2j * np.pi * z)) / 2j)

        @numba.njit(cache=True)
        def _nb_loggamma(z):
            out = np.empty_like(z)
            for k in range(z.shape[0]):
                x = z[k]
                if x.real >= 0.5:
                    out[k] = _nb_lg_right(x)
                else:
                    out[k] = _LOG_PI - _nb_log_sin_pi(x) - _nb_lg_right(1.0 - x)
            return out

        @numba.njit(cache=True)
        def _nb_hankel(a, h, b):
            n, m = a.shape[0], b.shape[0]
            out = np.empty((n, m), dtype=np.complex128)
            for i in range(n):
                ai = a[i]
                for j in range(m):
                    out[i, j] = ai * h[i + j] * b[j]
            return out

        @numba.njit(cache=True)
        def _nb_weighted_sum(values, w1, w2):
            acc = 0j
            for i in range(values.shape[0]):
                row = 0j
                for j in range(values.shape[1]):
                    row += values[i, j] * w2[j]
                acc += w1[i] * row
            return acc

        _NUMBA_OK = True
    except Exception:  # numba missing or broken: numpy path
        _NUMBA_OK = False


def backend() -> str:
    return "numba" if (_NUMBA_OK and not _env_disabled()) else "numpy"


def loggamma(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.complex128)
    if backend() == "numba":
        return _nb_loggamma(np.ascontiguousarray(z.ravel())).reshape(z.shape)
    return loggamma_numpy(z)


def hankel_kernel(a: np.ndarray, h: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.complex128)
    h = np.ascontiguousarray(h, dtype=np.complex128)
    b = np.ascontiguousarray(b, dtype=np.complex128)
    if h.shape[0] < a.shape[0] + b.shape[0] - 1:
        raise ValueError("Hankel symbol too short")
    if backend() == "numba":
        return _nb_hankel(a, h, b)
    return hankel_kernel_numpy(a, h, b)


def weighted_sum(values: np.ndarray, w1: np.ndarray, w2: np.ndarray) -> complex:
    values = np.ascontiguousarray(values, dtype=np.complex128)
    w1 = np.ascontiguousarray(w1, dtype=np.complex128)
    w2 = np.ascontiguousarray(w2, dtype=np.complex128)
    if backend() == "numba":
        return complex(_nb_weighted_sum(values, w1, w2))
    return weighted_sum_numpy(values, w1, w2)
