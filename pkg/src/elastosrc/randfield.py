"""Synthesis of the rough Gaussian source field and covariance checks.

A realization component is built by the factorized spectral construction

    f_j = A * sqrt(phi) . IFFT( |xi|^(-m/2) . FFT(W_j) ),

where W_j is grid white noise with per-cell variance h^-2, xi runs over the
angular FFT frequencies of the periodic box (DC mode dropped), and A is the
fixed amplitude convention below.  The resulting covariance operator is
A^2 sqrt(phi) |xi|^(-m) sqrt(phi) up to lower-order terms, so the two-point
function carries the local structure  c0(x,y)|x-y|^(m-2) + smooth  (log for
m = 2) that the fitting helpers estimate.

Randomness: every stream is a counter-based Philox generator keyed by
``SeedSequence((seed, component, realization_index))`` with components
1 and 2 for (f1, f2); identical seeds replay bit-identically regardless of
thread schedule.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import curve_fit

from .errors import ConfigurationError, DomainError, InputError

# Amplitude convention of the covariance symbol.  The factor 1/2 (1/4 on the
# covariance) pins the synthesized field to the normalization under which the
# frequency-band average of the scattered amplitude reproduces
# estimator.riesz_constant exactly; see tests/test_estimator.py
# (exact-second-moment check).
COV_AMPLITUDE = 0.5

M_LOW, M_HIGH = 2.0, 2.5
SUPPORT_COLLAR = 2  # cells of mandatory zero padding at the box boundary


@dataclass(frozen=True)
class SourceGrid:
    """Uniform n x n cell-centered grid over a square box.

    n must be a power of two (spectral synthesis); the box must strictly
    contain the supports of the strength and of the density perturbation.
    """

    n: int
    box: float
    origin: tuple = None
    h: float = field(init=False)

    def __post_init__(self):
        if self.n < 4 or (self.n & (self.n - 1)) != 0:
            raise ConfigurationError(f"grid size must be a power of two >= 4, got {self.n}")
        if not (self.box > 0):
            raise ConfigurationError("box size must be positive")
        if self.origin is None:
            object.__setattr__(self, "origin", (-0.5 * self.box, -0.5 * self.box))
        object.__setattr__(self, "origin", (float(self.origin[0]), float(self.origin[1])))
        object.__setattr__(self, "h", self.box / self.n)

    def centers(self):
        """Cell-center coordinate arrays (X, Y), 'ij' indexed."""
        c = self.origin[0] + (np.arange(self.n) + 0.5) * self.h
        d = self.origin[1] + (np.arange(self.n) + 0.5) * self.h
        return np.meshgrid(c, d, indexing="ij")

    def angular_frequencies(self):
        xi = 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.h)
        xx, yy = np.meshgrid(xi, xi, indexing="ij")
        return np.hypot(xx, yy)


def bump(grid, center=(0.0, 0.0), radius=0.35, amplitude=1.0):
    """Smooth compactly supported bump exp(1 - 1/(1-s^2)) on |x-c| < radius."""
    xx, yy = grid.centers()
    s2 = ((xx - center[0]) ** 2 + (yy - center[1]) ** 2) / radius ** 2
    out = np.zeros_like(xx)
    inside = s2 < 1.0
    out[inside] = amplitude * np.exp(1.0 - 1.0 / (1.0 - s2[inside]))
    return out


def _check_support(values, what):
    c = SUPPORT_COLLAR
    border = np.concatenate([
        values[:c, :].ravel(), values[-c:, :].ravel(),
        values[:, :c].ravel(), values[:, -c:].ravel(),
    ])
    if np.any(border != 0.0):
        raise ConfigurationError(
            f"{what} must vanish on a {c}-cell collar inside the box; "
            "enlarge the box or shrink the support")


@dataclass(frozen=True)
class SourceModel:
    """Roughness order m in [2, 5/2), strength grid phi >= 0, and base seed."""

    m: float
    phi: np.ndarray
    seed: int

    def __post_init__(self):
        if not (M_LOW <= self.m < M_HIGH):
            raise DomainError(
                f"order m must lie in [{M_LOW}, {M_HIGH}), got {self.m}")
        phi = np.asarray(self.phi, dtype=np.float64)
        if phi.ndim != 2 or phi.shape[0] != phi.shape[1]:
            raise ConfigurationError("strength grid must be square")
        if np.any(phi < 0.0):
            raise DomainError("strength must be nonnegative")
        _check_support(phi, "strength grid")
        object.__setattr__(self, "phi", phi)


@dataclass(frozen=True)
class SourceRealization:
    """Sampled real source components on the grid."""

    f1: np.ndarray
    f2: np.ndarray
    seed: int
    realization_index: int
    model: SourceModel


def component_rng(seed, component, realization_index=0):
    """The documented stream-splitting rule for all field randomness."""
    ss = np.random.SeedSequence((int(seed), int(component), int(realization_index)))
    return np.random.Generator(np.random.Philox(ss))


def synthesize(model, grid, realization_index=0):
    """Draw one source realization; deterministic in (seed, grid, model)."""
    if model.phi.shape != (grid.n, grid.n):
        raise ConfigurationError(
            f"strength grid {model.phi.shape} does not match grid n = {grid.n}")
    k = grid.angular_frequencies()
    with np.errstate(divide="ignore"):
        mult = k ** (-0.5 * model.m)
    mult[0, 0] = 0.0  # symbol undefined at xi = 0; consistent with mean zero

    sqrt_phi = np.sqrt(model.phi)
    comps = []
    for j in (1, 2):
        rng = component_rng(model.seed, j, realization_index)
        w = rng.standard_normal((grid.n, grid.n)) / grid.h
        rough = np.fft.ifft2(mult * np.fft.fft2(w)).real
        comps.append(COV_AMPLITUDE * sqrt_phi * rough)
    return SourceRealization(f1=comps[0], f2=comps[1], seed=model.seed,
                             realization_index=realization_index, model=model)


def empirical_covariance(model, grid, n_samples, z, offsets):
    """Monte-Carlo estimates of Cov(f1(z), f1(z + offset)) with standard errors.

    z is a grid index pair and offsets a list of index offsets; returns a
    list of (estimate, standard_error) in the order of ``offsets``.
    """
    if n_samples < 100:
        raise InputError("need at least 100 samples for a covariance estimate")
    iz, jz = z
    base = np.zeros(n_samples)
    others = np.zeros((len(offsets), n_samples))
    for k in range(n_samples):
        f1 = synthesize(model, grid, realization_index=k).f1
        base[k] = f1[iz, jz]
        for a, (di, dj) in enumerate(offsets):
            others[a, k] = f1[iz + di, jz + dj]
    out = []
    b = base - base.mean()
    for a in range(len(offsets)):
        o = others[a] - others[a].mean()
        prods = b * o
        est = prods.mean()
        sem = prods.std(ddof=1) / np.sqrt(n_samples)
        out.append((est, sem))
    return out


def structure_fit(cov_profile, m):
    """Fit the local covariance structure over a distance profile.

    For m in (2, 5/2) fits value ~ A r^e + B and returns (e, stderr);
    for m = 2 fits value ~ A log r + B and returns (A, stderr).
    """
    r = np.array([p[0] for p in cov_profile], dtype=np.float64)
    v = np.array([p[1] for p in cov_profile], dtype=np.float64)
    if len(np.unique(r)) < 4:
        raise InputError("need at least 4 distinct distances")
    if np.ptp(v) == 0.0:
        raise InputError("degenerate (constant) covariance profile")
    if not (M_LOW <= m < M_HIGH):
        raise DomainError(f"order m must lie in [{M_LOW}, {M_HIGH}), got {m}")

    if m == M_LOW:
        design = np.column_stack([np.log(r), np.ones_like(r)])
        coef, res, *_ = np.linalg.lstsq(design, v, rcond=None)
        dof = max(len(r) - 2, 1)
        resid = v - design @ coef
        cov = np.linalg.inv(design.T @ design) * (resid @ resid) / dof
        return float(coef[0]), float(np.sqrt(cov[0, 0]))

    def power_model(rr, a, e, b):
        return a * rr ** e + b

    a0 = (v[np.argmax(r)] - v[np.argmin(r)]) / (r.max() ** (m - 2) - r.min() ** (m - 2))
    p0 = (a0 if a0 != 0 else 1.0, m - 2.0, float(v[np.argmin(r)]))
    popt, pcov = curve_fit(power_model, r, v, p0=p0,
                           bounds=([-np.inf, 0.01, -np.inf], [np.inf, 1.0, np.inf]),
                           maxfev=20000)
    return float(popt[1]), float(np.sqrt(pcov[1, 1]))


def save_grid_csv(path, grid, channels):
    """Write grid channels in the text format: header line, values row-major."""
    channels = [np.asarray(c) for c in channels]
    with open(path, "w") as fh:
        fh.write("n,h,origin_x,origin_y\n")
        fh.write(f"{grid.n},{grid.h!r},{grid.origin[0]!r},{grid.origin[1]!r}\n")
        flat = [c.reshape(-1) for c in channels]
        for row in zip(*flat):
            fh.write(",".join(repr(float(x)) for x in row) + "\n")


def load_grid_csv(path):
    """Read a grid file; returns (grid, list of channel arrays)."""
    with open(path) as fh:
        header = fh.readline().strip()
        if header.replace(" ", "") != "n,h,origin_x,origin_y":
            raise InputError(f"unrecognized grid file header: {header!r}")
        n_s, h_s, ox, oy = fh.readline().split(",")
        n = int(n_s)
        grid = SourceGrid(n=n, box=float(h_s) * n, origin=(float(ox), float(oy)))
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.shape[0] != n * n:
        raise InputError(f"expected {n * n} rows of values, got {data.shape[0]}")
    return grid, [data[:, k].reshape(n, n) for k in range(data.shape[1])]
