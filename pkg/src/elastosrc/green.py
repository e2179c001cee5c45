"""Green tensor of the 2D time-harmonic Navier operator.

The tensor for a medium with Lame pair (lam, mu) at frequency omega is

    G(x, y) = [ (i/4mu) H_0^(1)(ks r) - (i/4w^2) Gamma_1(r)/r ] I
              + (i/4w^2) (Gamma_2(r)/r^2) (x-y)(x-y)^T,      r = |x-y|,

with Gamma_n the shear/compressional Hankel difference from ``specfun``.
``green_tensor_leading`` truncates every Hankel factor to its zeroth-order
outgoing asymptotic, which is the large-frequency limit used by the
second-Born diagnostics.  All functions are pure.
"""

from dataclasses import dataclass, field

import numpy as np

from . import specfun
from .errors import DomainError, ResonanceError, SingularPointError

RESONANCE_TOL = 1e-12


@dataclass(frozen=True)
class ElasticMedium:
    """Lame pair with derived slownesses; requires mu > 0 and lam + mu > 0."""

    lam: float
    mu: float
    c_p: float = field(init=False)
    c_s: float = field(init=False)

    def __post_init__(self):
        if not (self.mu > 0.0):
            raise DomainError(f"mu must be positive, got {self.mu}")
        if not (self.lam + self.mu > 0.0):
            raise DomainError(f"lam + mu must be positive, got {self.lam + self.mu}")
        object.__setattr__(self, "c_p", (self.lam + 2.0 * self.mu) ** -0.5)
        object.__setattr__(self, "c_s", self.mu ** -0.5)

    def wavenumbers(self, omega):
        if omega <= 0:
            raise DomainError("frequency must be positive")
        return self.c_p * omega, self.c_s * omega


def wavenumbers(medium, omega):
    """Compressional and shear wavenumbers (c_p w, c_s w)."""
    return medium.wavenumbers(omega)


def kernel_radial(r, medium, omega, leading=False):
    """Radial pieces (A, B) of the tensor G = A(r) I + B(r) zz^T / r^2.

    A(r) = (i/4mu) H_0(ks r) - (i/4w^2) Gamma_1(r)/r and
    B(r) = (i/4w^2) Gamma_2(r).  With ``leading=True`` every Hankel factor
    is replaced by its zeroth-order outgoing asymptotic.
    """
    r = np.asarray(r, dtype=np.float64)
    if np.any(r == 0.0):
        raise SingularPointError("Green tensor evaluated at coincident points")
    kp, ks = medium.wavenumbers(omega)

    if leading:
        def h(n, t):
            return specfun.hankel1_asym(n, 0, t)
    else:
        h = specfun.hankel1

    h0s = h(0, ks * r)
    g1 = ks * h(1, ks * r) - kp * h(1, kp * r)
    g2 = ks ** 2 * h(2, ks * r) - kp ** 2 * h(2, kp * r)

    iw2 = 0.25j / omega ** 2
    a = 0.25j / medium.mu * h0s - iw2 * g1 / r
    b = iw2 * g2
    return a, b


def green_kernel(dx, dy, medium, omega, leading=False):
    """Entries (G11, G12, G22) on arrays of displacement components.

    The inputs are x1-y1 and x2-y2; every displacement must be nonzero.
    With ``leading=True`` the zeroth-order asymptotic tensor is evaluated
    instead of the exact one.
    """
    dx = np.asarray(dx, dtype=np.float64)
    dy = np.asarray(dy, dtype=np.float64)
    r2 = dx * dx + dy * dy
    a, b = kernel_radial(np.sqrt(r2), medium, omega, leading=leading)
    dyad = b / r2
    g11 = a + dyad * dx * dx
    g12 = dyad * dx * dy
    g22 = a + dyad * dy * dy
    return g11, g12, g22


def _as_matrix(x, y, medium, omega, leading):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    g11, g12, g22 = green_kernel(x[0] - y[0], x[1] - y[1], medium, omega,
                                 leading=leading)
    return np.array([[g11, g12], [g12, g22]], dtype=np.complex128)


def green_tensor(x, y, medium, omega):
    """Exact 2x2 Green tensor at a point pair x != y."""
    return _as_matrix(x, y, medium, omega, leading=False)


def green_tensor_leading(x, y, medium, omega):
    """Zeroth-order outgoing asymptotic truncation of the Green tensor."""
    return _as_matrix(x, y, medium, omega, leading=True)


def green_symbol(xi, medium, omega):
    """Fourier symbol of the Green tensor in the 2pi-exponent convention.

    Returns [(4 pi^2 mu |xi|^2 - w^2) I + 4 pi^2 (lam+mu) xi xi^T]^{-1};
    raises ResonanceError when xi sits on one of the two resonant circles.
    """
    xi = np.asarray(xi, dtype=np.float64)
    if omega <= 0:
        raise DomainError("frequency must be positive")
    four_pi2 = 4.0 * np.pi ** 2
    q2 = float(xi @ xi)
    w2 = omega ** 2
    mat = (four_pi2 * medium.mu * q2 - w2) * np.eye(2) \
        + four_pi2 * (medium.lam + medium.mu) * np.outer(xi, xi)
    det = mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]
    scale = (four_pi2 * (medium.lam + 2 * medium.mu) * q2 + w2) \
        * (four_pi2 * medium.mu * q2 + w2)
    if abs(det) < RESONANCE_TOL * scale:
        raise ResonanceError(
            f"symbol singular at |xi| = {np.sqrt(q2):.6g} for omega = {omega:g}")
    return np.array([[mat[1, 1], -mat[0, 1]], [-mat[1, 0], mat[0, 0]]]) / det


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform frequency grid on [1, Q] used by the band averages."""

    q: float
    n_omega: int

    def __post_init__(self):
        if not (self.q > 1.0):
            raise DomainError(f"band endpoint Q must exceed 1, got {self.q}")
        if self.n_omega < 2:
            raise DomainError("need at least 2 frequencies")

    @property
    def omegas(self):
        return np.linspace(1.0, self.q, self.n_omega)
