"""Outgoing Hankel functions H_n^(1) for orders 0..3 and derived kernels.

Two interchangeable backends implement the numerics: a compiled extension
(``elastosrc._speckern``) and a pure-numpy fallback (``_specfun_pure``).
The compiled one is picked at import when present; set
``ELASTOSRC_BACKEND=pure`` to force the fallback.  All operations are pure
functions with no shared mutable state, so concurrent use is safe.

Only positive real arguments are supported; that is all the elastic kernels
require.
"""

import os

import numpy as np

from . import _specfun_pure as _pure
from ._specfun_pure import (
    ASYM_TERMS,
    CROSSOVER,
    EULER_GAMMA,
    MAX_ORDER,
    asym_coeff,
    watson_product,
)
from .errors import DomainError, SingularPointError

_FORCED = os.environ.get("ELASTOSRC_BACKEND", "").lower()
if _FORCED not in ("", "pure", "compiled"):
    raise ImportError(f"unknown ELASTOSRC_BACKEND value: {_FORCED!r}")

if _FORCED == "pure":
    _kern = _pure
    BACKEND = "pure"
else:
    try:
        from . import _speckern as _kern
        BACKEND = "compiled"
    except ImportError:
        if _FORCED == "compiled":
            raise
        _kern = _pure
        BACKEND = "pure"

# Small-argument expansion constants b_0..b_3 (coefficient of t^n next to
# the t^n log t term).
SMALLARG_B = (
    1.0 + 2.0j * EULER_GAMMA / np.pi,
    0.5 + 1.0j * EULER_GAMMA / np.pi - 0.5j / np.pi,
    0.25j * EULER_GAMMA / np.pi - 3.0j / (16.0 * np.pi) + 0.125,
    1.0j * EULER_GAMMA / (24.0 * np.pi) + 1.0 / 48.0 - 11.0j / (288.0 * np.pi),
)


def _check_order(n):
    if n not in (0, 1, 2, 3):
        raise DomainError(f"Hankel order must be one of 0..{MAX_ORDER}, got {n}")


def _check_positive(t, what="argument"):
    t = np.asarray(t, dtype=np.float64)
    if not np.all(np.isfinite(t)) or np.any(t <= 0.0):
        raise DomainError(f"{what} must be positive and finite")
    return t


def hankel1(n, t):
    """H_n^(1)(t) = J_n(t) + i Y_n(t) for t > 0; accepts scalars or arrays."""
    _check_order(n)
    tv = _check_positive(t)
    out = _kern.hankel1_arr(n, tv)
    return complex(out) if np.isscalar(t) or np.ndim(t) == 0 else out


def hankel1_smallarg(n, t):
    """Small-argument expansion of H_n^(1) through the b_n term.

    Validity window t <= 0.1; larger arguments are accepted but the omitted
    remainder grows like t^(n+2) log t.
    """
    _check_order(n)
    tv = _check_positive(t)
    log_half = np.log(0.5 * tv)
    b = SMALLARG_B[n]
    i_pi = 1j / np.pi
    if n == 0:
        out = 2.0 * i_pi * log_half + b + 0.0 * tv
    elif n == 1:
        out = -2.0 * i_pi / tv + i_pi * tv * log_half + b * tv
    elif n == 2:
        t2 = tv * tv
        out = -4.0 * i_pi / t2 - i_pi + 0.25 * i_pi * t2 * log_half + b * t2
    else:
        t3 = tv ** 3
        out = (-16.0 * i_pi / t3 - 2.0 * i_pi / tv - 0.25 * i_pi * tv
               + i_pi / 24.0 * t3 * log_half + b * t3)
    return complex(out) if np.isscalar(t) or np.ndim(t) == 0 else out


def hankel1_asym(n, num_terms, x):
    """Truncated asymptotic H_{n,N}^(1)(x) with N = num_terms corrections."""
    _check_order(n)
    if num_terms < 0:
        raise DomainError("number of asymptotic terms must be >= 0")
    xv = _check_positive(x)
    if num_terms > ASYM_TERMS:
        out = _pure.hankel1_asym_eval(n, num_terms, xv)
    else:
        out = _kern.hankel1_asym_eval(n, num_terms, xv)
    return complex(out) if np.isscalar(x) or np.ndim(x) == 0 else out


def asym_remainder(n, num_terms, x):
    """|H_n^(1)(x) - H_{n,N}^(1)(x)|, the truncation remainder magnitude."""
    h = hankel1(n, x)
    ha = hankel1_asym(n, num_terms, x)
    return np.abs(h - ha)


def gamma_n_kappa(n, kappa_p, kappa_s, r):
    """kappa_s^n H_n^(1)(kappa_s r) - kappa_p^n H_n^(1)(kappa_p r)."""
    _check_order(n)
    rv = _check_positive(r)
    if np.any(np.asarray(kappa_p) <= 0) or np.any(np.asarray(kappa_s) <= 0):
        raise DomainError("wavenumbers must be positive")
    out = kappa_s ** n * _kern.hankel1_arr(n, kappa_s * rv) \
        - kappa_p ** n * _kern.hankel1_arr(n, kappa_p * rv)
    return complex(out) if np.isscalar(r) or np.ndim(r) == 0 else out


def gamma_n(n, z, medium, omega):
    """Wavenumber difference kernel at displacement z for the given medium."""
    if n not in (1, 2, 3):
        raise DomainError(f"order must be 1, 2 or 3, got {n}")
    if omega <= 0:
        raise DomainError("frequency must be positive")
    r = float(np.hypot(z[0], z[1]))
    if r == 0.0:
        raise SingularPointError("kernel is singular at |z| = 0")
    kappa_p, kappa_s = medium.wavenumbers(omega)
    return gamma_n_kappa(n, kappa_p, kappa_s, r)
