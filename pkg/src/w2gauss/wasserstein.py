"""Exact squared 2-Wasserstein distances from sorted Gaussian samples.

The empirical quantile function of a sorted sample ``Z_1 <= ... <= Z_n`` is
the right-continuous step ``F_n^{-1}(u) = Z_{ceil(nu)}``, so the defining
integral ``W_2^2 = int_0^1 |F_n^{-1}(u) - F^{-1}(u)|^2 du`` against a
Gaussian reference splits over the cells ``((i-1)/n, i/n]`` and is computed
in closed form from the two antiderivatives

* ``int Phi^{-1}(u) du = -h(u)``  with ``h(u) = phi(Phi^{-1}(u))``,
* ``int Phi^{-1}(u)^2 du = u - Phi^{-1}(u) h(u)``,

both of which extend continuously to the endpoints (``h -> 0``), so no
truncation is ever needed.  Per-interval terms are accumulated with
pairwise-summing dot products, keeping the rounding error of the n = 10^6
assembly far below the 1e-12 relative contract.

The module also provides the two-sample distance on a common grid, the
upper-tail decomposition of the half integral into the pieces A, B, C, D
used to separate extreme-rank and bulk contributions, and an exact /
series-hybrid evaluation of ``E[n W_2^2]``.
"""

from __future__ import annotations

import dataclasses
import functools
import math

import numpy as np
from scipy import integrate
from scipy.special import betaln, ndtr, ndtri

from .errors import DomainError
from .special import std_normal_pdf, std_normal_quantile

__all__ = [
    "GaussianReference",
    "SortedSample",
    "W2Decomposition",
    "quantile_integral",
    "quantile_sq_integral",
    "w2sq_vs_gaussian",
    "w2sq_two_sample",
    "tail_decomposition",
    "expected_one_sample_w2sq",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_LOG_2PI = math.log(2.0 * math.pi)

STANDARD = None  # sentinel replaced below once GaussianReference exists


@dataclasses.dataclass(frozen=True)
class GaussianReference:
    """A Gaussian reference law N(mu, sigma^2) with sigma > 0."""

    mu: float = 0.0
    sigma: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.sigma)
                and self.sigma > 0.0):
            raise DomainError(
                f"GaussianReference requires finite mu and sigma > 0, "
                f"got mu={self.mu!r}, sigma={self.sigma!r}")


STANDARD = GaussianReference(0.0, 1.0)


@dataclasses.dataclass(frozen=True)
class SortedSample:
    """An ascending sample of finite reals; rank i holds the order statistic.

    ``values`` is stored as a read-only float array.  Construction checks
    sortedness; use :meth:`from_unsorted` to sort a raw draw (stable, so
    ties keep their input order).
    """

    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim != 1 or arr.size < 1:
            raise DomainError("SortedSample requires a 1-d sample with n >= 1")
        if not np.all(np.isfinite(arr)):
            raise DomainError("SortedSample requires finite values")
        if np.any(np.diff(arr) < 0):
            raise DomainError("SortedSample values must be nondecreasing")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @classmethod
    def from_unsorted(cls, values) -> "SortedSample":
        arr = np.sort(np.asarray(values, dtype=float), kind="stable")
        return cls(arr)

    @property
    def n(self) -> int:
        return int(self.values.size)


@dataclasses.dataclass(frozen=True)
class W2Decomposition:
    """Upper-half-integral decomposition into pieces A, B, C, D.

    ``a_n + b_n`` cover the top cell ``(1-1/n, 1]`` split at
    ``1 - 1/(n (log n)^gamma)``; ``c_n`` sums the next ``K-1`` extreme
    cells; ``d_n`` is the bulk over ``[1/2, 1 - K/n]`` where
    ``K = floor(C (log n)^theta)`` and ``cut = K/n``.  The four pieces add
    up to the exact half integral ``int_{1/2}^1 (F_n^{-1} - Phi^{-1})^2``.
    """

    a_n: float
    b_n: float
    c_n: float
    d_n: float
    C: float
    theta: float
    gamma: float
    n: int
    half_total: float
    K: int
    cut: float

    def __post_init__(self):
        pieces = (self.a_n, self.b_n, self.c_n, self.d_n)
        if any(p < 0 for p in pieces):
            raise DomainError(f"decomposition pieces must be >= 0, got {pieces}")
        total = sum(pieces)
        tol = 1e-10 * max(1.0, abs(self.half_total))
        if abs(total - self.half_total) > tol:
            raise DomainError(
                f"decomposition pieces sum to {total!r}, expected "
                f"{self.half_total!r} within 1e-10 relative")


# --------------------------------------------------------------------------
# antiderivative tables
# --------------------------------------------------------------------------

@functools.lru_cache(maxsize=8)
def _boundary_tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Tables ``H[i] = h(i/n)`` and ``A2[i] = (A2 at i/n)`` for i = 0..n.

    ``A2(u) = u - Phi^{-1}(u) h(u)`` is the antiderivative of the squared
    quantile, with ``A2(0) = 0`` and ``A2(1) = 1``.  The upper half of each
    table is produced by mirroring the lower half (``h(1-u) = h(u)``,
    ``A2(1-u) = 1 - A2(u)``), which makes the symmetries exact in floating
    point.
    """
    i = np.arange(0, n + 1)
    lower = np.minimum(i, n - i)
    u_low = lower / n
    interior = u_low > 0
    x = np.zeros(n + 1)
    x[interior] = ndtri(u_low[interior])
    H = np.where(interior, np.exp(-0.5 * x * x) / _SQRT_2PI, 0.0)
    A2_low = np.where(interior, u_low - x * H, 0.0)
    A2 = np.where(i * 2 <= n, A2_low, 1.0 - A2_low)
    H.flags.writeable = False
    A2.flags.writeable = False
    return H, A2


def _h_at(u: float) -> float:
    if u <= 0.0 or u >= 1.0:
        return 0.0
    return float(std_normal_pdf(std_normal_quantile(u)))


def _a2_at(u: float) -> float:
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    x = float(std_normal_quantile(u))
    return u - x * float(std_normal_pdf(x))


# --------------------------------------------------------------------------
# quantile integrals
# --------------------------------------------------------------------------

def _check_bounds(a: float, b: float):
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError("integral bounds must be finite")
    if not (0.0 <= a <= b <= 1.0):
        raise DomainError(
            f"integral bounds must satisfy 0 <= a <= b <= 1, got ({a!r}, {b!r})")


def quantile_integral(a, b, ref: GaussianReference = STANDARD) -> float:
    """``int_a^b F_ref^{-1}(u) du`` in closed form.

    Equals ``mu (b-a) + sigma (h(a) - h(b))``.  The endpoints 0 and 1 are
    accepted as exact limits (``h -> 0`` there).
    """
    a = float(a)
    b = float(b)
    _check_bounds(a, b)
    return ref.mu * (b - a) + ref.sigma * (_h_at(a) - _h_at(b))


def quantile_sq_integral(a, b, ref: GaussianReference = STANDARD) -> float:
    """``int_a^b F_ref^{-1}(u)^2 du`` in closed form.

    The antiderivative is ``mu^2 u - 2 mu sigma h(u) + sigma^2 A2(u)``
    with ``A2(u) = u - Phi^{-1}(u) h(u)``; endpoints are exact limits
    (full-interval value ``mu^2 + sigma^2``).
    """
    a = float(a)
    b = float(b)
    _check_bounds(a, b)

    def F(u: float) -> float:
        return (ref.mu * ref.mu * u - 2.0 * ref.mu * ref.sigma * _h_at(u)
                + ref.sigma * ref.sigma * _a2_at(u))

    return F(b) - F(a)


# --------------------------------------------------------------------------
# W2^2 distances
# --------------------------------------------------------------------------

def w2sq_vs_gaussian(s: SortedSample, ref: GaussianReference = STANDARD) -> float:
    """Exact ``W_2^2(F_n, N(mu, sigma^2))`` from the sorted sample.

    Assembled cell by cell from the closed-form antiderivatives; for the
    standard reference this reduces to
    ``mean(Z^2) + 2 sum_i Z_i (H_i - H_{i-1}) + 1``.
    """
    z = s.values
    n = s.n
    H, _ = _boundary_tables(n)
    dH = np.diff(H)
    mean_sq = float(z @ z) / n
    cross = float(z @ dH)
    mean_z = float(np.sum(z)) / n
    val = (mean_sq
           - 2.0 * ref.mu * mean_z
           + 2.0 * ref.sigma * cross
           + ref.mu * ref.mu + ref.sigma * ref.sigma)
    return max(0.0, val)


def w2sq_two_sample(sx: SortedSample, sy: SortedSample) -> float:
    """Exact ``W_2^2(F_n, G_n) = (1/n) sum_i (X_(i) - Y_(i))^2``.

    Both empirical quantile functions are constant on the same cells, so
    the defining integral collapses to the mean squared rank-wise gap.
    """
    if sx.n != sy.n:
        raise DomainError(f"sample sizes differ: {sx.n} != {sy.n}")
    d = sx.values - sy.values
    return float(d @ d) / sx.n


# --------------------------------------------------------------------------
# tail decomposition
# --------------------------------------------------------------------------

def _cell_integral(z: float, a: float, b: float) -> float:
    """``int_a^b (z - Phi^{-1}(u))^2 du`` for a constant step value z."""
    i1 = _h_at(a) - _h_at(b)           # int Phi^{-1}
    i2 = _a2_at(b) - _a2_at(a)         # int (Phi^{-1})^2
    return z * z * (b - a) - 2.0 * z * i1 + i2


def tail_decomposition(s: SortedSample, C: float = 1.0, theta: float = 2.0,
                       gamma: float = 2.0) -> W2Decomposition:
    """Split ``int_{1/2}^1 (F_n^{-1} - Phi^{-1})^2 du`` into A, B, C, D.

    With ``K = floor(C (log n)^theta)`` and cut ``d = K/n``:

    * A: ``[1 - 1/(n (log n)^gamma), 1]`` with constant ``Z_n``,
    * B: ``[1 - 1/n, 1 - 1/(n (log n)^gamma)]`` with constant ``Z_n``,
    * C: cells of ``Z_{n-k}`` for ``k = 1 .. K-1``, covering
      ``[1 - K/n, 1 - 1/n]``,
    * D: the bulk ``[1/2, 1 - K/n]``.

    The top-rank index range ``k <= K-1`` (rather than ``k <= K``) is what
    makes the four pieces a partition: the cell of ``Z_{n-K}`` already
    belongs to the bulk piece.  Requires ``1 - K/n > 1/2``.
    """
    n = s.n
    z = s.values
    if not (C > 0.0 and 1.0 < theta <= 2.0 and gamma > 1.0):
        raise DomainError(
            f"need C > 0, 1 < theta <= 2, gamma > 1; got C={C!r}, "
            f"theta={theta!r}, gamma={gamma!r}")
    logn = math.log(n)
    if logn <= 0:
        raise DomainError("tail_decomposition requires n >= 2")
    K = int(math.floor(C * logn ** theta))
    if K < 1 or 1.0 - K / n <= 0.5:
        raise DomainError(
            f"cut K/n = {K}/{n} leaves no bulk above 1/2; "
            f"n too small for (C, theta) = ({C}, {theta})")
    cut_a = 1.0 - 1.0 / (n * logn ** gamma)
    zn = float(z[-1])

    # closed-form integrals of every whole grid cell, from the cached tables
    H, A2 = _boundary_tables(n)
    cells = z * z / n + 2.0 * z * np.diff(H) + np.diff(A2)

    a_n = _cell_integral(zn, cut_a, 1.0)
    b_n = float(cells[-1]) - a_n       # rest of the top cell, exactly
    c_n = math.fsum(cells[n - K:n - 1])
    # bulk: partial first cell containing 1/2, then whole cells up to n-K
    i_half = math.ceil(n / 2)  # index of the cell whose interval holds 1/2
    partial = _cell_integral(float(z[i_half - 1]), 0.5, i_half / n)
    d_n = partial + math.fsum(cells[i_half:n - K])

    # direct evaluation of the half integral for the partition identity
    half_total = partial + math.fsum(cells[i_half:])

    return W2Decomposition(
        a_n=max(0.0, a_n), b_n=max(0.0, b_n), c_n=max(0.0, c_n),
        d_n=max(0.0, d_n), C=C, theta=theta, gamma=gamma, n=n,
        half_total=half_total, K=K, cut=K / n)


# --------------------------------------------------------------------------
# exact expectation of n * W2^2 (one sample, standard reference)
# --------------------------------------------------------------------------

def _exact_mean_rank(i: int, n: int) -> float:
    """``E Z_(i)`` by adaptive quadrature of the order-statistic density."""
    lc = -float(betaln(i, n - i + 1))
    p = i / (n + 1.0)
    z0 = float(ndtri(p))
    dens = max(math.exp(-0.5 * z0 * z0) / _SQRT_2PI, 1e-300)
    sd = min(math.sqrt(p * (1.0 - p) / n) / dens, 3.0)

    def f(zv: float) -> float:
        lp = float(ndtr(zv))
        ls = float(ndtr(-zv))
        if lp <= 0.0 or ls <= 0.0:
            return 0.0
        ll = (lc + (i - 1) * math.log(lp) + (n - i) * math.log(ls)
              - 0.5 * zv * zv - 0.5 * _LOG_2PI)
        return zv * math.exp(ll)

    lo, hi = z0 - 12.0 * sd - 1.0, z0 + 12.0 * sd + 1.0
    val, _ = integrate.quad(f, lo, hi, limit=200, epsabs=1e-12, epsrel=1e-11)
    return val


def _dj_mean_ranks(i_arr: np.ndarray, n: int) -> np.ndarray:
    """Fourth-order David-Johnson series for ``E Z_(i)`` at interior ranks."""
    p = i_arr / (n + 1.0)
    q = 1.0 - p
    x = ndtri(p)
    h = np.exp(-0.5 * x * x) / _SQRT_2PI
    Q2 = x / h ** 2
    Q3 = (1.0 + 2.0 * x * x) / h ** 3
    Q4 = x * (7.0 + 6.0 * x * x) / h ** 4
    return (x + p * q / (2.0 * (n + 2.0)) * Q2
            + p * q / (n + 2.0) ** 2 * ((q - p) * Q3 / 3.0 + p * q * Q4 / 8.0))


def expected_one_sample_w2sq(n: int, n_exact_tail: int = 400) -> float:
    """``E[n W_2^2(F_n, Phi)]`` via ``2n (1 + sum_i E Z_(i) dH_i)``.

    The outermost ``n_exact_tail`` ranks on each side use adaptive
    quadrature for ``E Z_(i)``; interior ranks use the fourth-order
    David-Johnson series, whose error is negligible away from the edges.
    Setting ``n_exact_tail >= n/2`` makes the evaluation fully exact.
    """
    if n < 1:
        raise DomainError("n >= 1 required")
    H, _ = _boundary_tables(n)
    dH = np.diff(H)
    means = np.empty(n)
    lo = min(int(n_exact_tail), n // 2)
    for i in range(1, lo + 1):
        m = _exact_mean_rank(i, n)
        means[i - 1] = m
        means[n - i] = -m
    if n % 2 == 1 and lo == n // 2:
        means[n // 2] = 0.0
    mids = np.arange(lo + 1, n - lo + 1)
    if mids.size:
        means[mids - 1] = _dj_mean_ranks(mids, n)
    return 2.0 * n * (1.0 + float(means @ dH))
