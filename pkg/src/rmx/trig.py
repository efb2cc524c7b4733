"""Trigonometric degenerations of the elliptic R-matrix.

``r_dy`` is the scaling limit ``z/tau = i beta/(hbar xi)``, ``w/tau = 1/xi``,
``w -> 0`` along the positive imaginary axis. ``r_q`` is the ordinary limit
``tau -> +i inf`` at ``z = i beta/(hbar xi)``, ``w = 1/xi``. Both follow the
storage layout of :mod:`rmx.znmatrix`.

For hbar = pi the six-vertex matrix ``r_q`` at n = 2 is the sine-Gordon
two-particle S-matrix.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .errors import DomainError
from .qproducts import kappa
from .theta import DEFAULT_CONTROL, POLE_FLOOR, TruncationControl
from .znmatrix import _check_n, sbar_sum

PI = math.pi


@dataclass(frozen=True)
class DegenerateParams:
    n: int
    beta: float
    xi: float
    hbar: float = 1.0
    include_kappa: bool = True

    def __post_init__(self):
        _check_n(self.n)
        object.__setattr__(self, "n", int(self.n))
        if not self.xi > 0 or not self.hbar > 0:
            raise DomainError("xi and hbar must be positive")
        if not math.isfinite(self.beta):
            raise DomainError("beta must be a finite real number")

    @property
    def z(self) -> complex:
        """Spectral argument ``i beta / (hbar xi)`` of the limiting matrices."""
        return 1j * self.beta / (self.hbar * self.xi)

    @property
    def w(self) -> float:
        return 1 / self.xi

    def with_beta(self, beta) -> "DegenerateParams":
        return DegenerateParams(self.n, beta, self.xi, self.hbar, self.include_kappa)

    def scalar(self) -> complex:
        if not self.include_kappa:
            return 1 + 0j
        return kappa(self.beta, self.xi, self.hbar, self.n)


def sine_product(x, n: int) -> complex:
    """prod_{j=1}^{n-1} sin(x + j pi/n) / sin(j pi/n), equal to sin(n x)/(n sin x)."""
    out = 1 + 0j
    for j in range(1, n):
        out *= cmath.sin(x + j * PI / n) / math.sin(j * PI / n)
    return out


def _nonzero(value, what):
    if not abs(value) > POLE_FLOOR:
        from .errors import PoleError
        raise PoleError(f"{what} vanishes ({abs(value):.3e})")
    return value


def r_dy(p: DegenerateParams) -> np.ndarray:
    """Scaling-limit R-matrix.

    Element ``(kl | ij)``::

        sin(pi/xi) sin(n pi y) sin pi(y + 1/(n xi) + (l-k)/n)
        ----------------------------------------------------------------
        n sin pi(n y + 1/xi) sin pi(1/(n xi) + (i-k)/n) sin pi(y + (l-i)/n)

    with ``y = i beta/(n hbar xi)``. The factor ``sin(n pi y)/(n sin pi(y + m/n))``
    is evaluated as ``(-1)^m sine_product(pi (y + m/n), n)``, which is regular
    at ``beta = 0`` for every ``m``.
    """
    n = p.n
    y = 1j * p.beta / (n * p.hbar * p.xi)
    s = cmath.sin
    lead = math.sin(PI / p.xi) / _nonzero(s(PI * (n * y + 1 / p.xi)), "sin pi(i beta/(hbar xi) + 1/xi)")
    out = np.zeros((n * n, n * n), dtype=complex)
    for i, j, k, l in itertools.product(range(n), repeat=4):
        if (i + j - k - l) % n:
            continue
        m = l - i
        ratio = (-1) ** (m % 2) * sine_product(PI * (y + m / n), n)
        num = s(PI * (y + 1 / (n * p.xi) + (l - k) / n))
        den = _nonzero(math.sin(PI * (1 / (n * p.xi) + (i - k) / n)), "sin pi(1/(n xi) + (i-k)/n)")
        out[i * n + j, k * n + l] = lead * ratio * num / den
    return p.scalar() * out


def _phase_exponent(i, j, n):
    return (j - i) / n - 0.5 if i < j else (j - i) / n + 0.5


def r_q(p: DegenerateParams) -> np.ndarray:
    """Ordinary-limit R-matrix.

    With ``z = i beta/(hbar xi)``, ``w = 1/xi`` and ``e_ij = (j-i)/n -+ 1/2``
    (minus for i < j)::

        (ii | ii) = 1
        (ij | ij) = sin(pi z) / sin pi(z + w) * exp(2 i pi e_ij w)
        (ij | ji) = sin(pi w) / sin pi(z + w) * exp(2 i pi e_ij z)

    The upper pair of ``(kl | ij)`` is the column index. The phase of the
    ``(ij | ij)`` entries is carried by ``w``, not ``z``, as the tau -> i inf
    limit of the bare matrix shows.
    """
    n = p.n
    z, w = p.z, p.w
    den = _nonzero(cmath.sin(PI * (z + w)), "sin pi(i beta/(hbar xi) + 1/xi)")
    diag = cmath.sin(PI * z) / den
    swap = math.sin(PI * w) / den
    out = np.zeros((n * n, n * n), dtype=complex)
    for i in range(n):
        out[i * n + i, i * n + i] = 1
        for j in range(n):
            if i == j:
                continue
            e = _phase_exponent(i, j, n)
            # (ij | ij): row (i, j), column (i, j)
            out[i * n + j, i * n + j] = diag * cmath.exp(2j * PI * e * w)
            # (ij | ji): row (j, i), column (i, j)
            out[j * n + i, i * n + j] = swap * cmath.exp(2j * PI * e * z)
    return p.scalar() * out


def reference_n2(kind: str, p: DegenerateParams) -> np.ndarray:
    """The n = 2 eight-vertex and six-vertex matrices written out entrywise.

    Transcribed independently of :func:`r_dy` and :func:`r_q` for use as
    golden references. In the six-vertex matrix the swap entries carry
    ``sin(pi/xi)``.
    """
    if p.n != 2:
        raise DomainError(f"reference matrices exist only for n = 2, got n = {p.n}")
    b, xi, hb = p.beta, p.xi, p.hbar
    k = p.scalar()
    cos, sin = cmath.cos, cmath.sin
    if kind == "eight_vertex":
        u = 1j * PI * b / (2 * hb * xi)
        c0, s0 = math.cos(PI / (2 * xi)), math.sin(PI / (2 * xi))
        dc = cos(u + PI / (2 * xi))
        ds = sin(u + PI / (2 * xi))
        a = c0 * cos(u) / dc
        d = -s0 * sin(u) / dc
        bb = c0 * sin(u) / ds
        c = s0 * cos(u) / ds
        mat = [[a, 0, 0, d],
               [0, bb, c, 0],
               [0, c, bb, 0],
               [d, 0, 0, a]]
    elif kind == "six_vertex":
        u = 1j * PI * b / (hb * xi)
        den = sin(u + PI / xi)
        bb = sin(u) / den
        c = math.sin(PI / xi) / den
        mat = [[1, 0, 0, 0],
               [0, bb, c, 0],
               [0, c, bb, 0],
               [0, 0, 0, 1]]
    else:
        raise DomainError(f"unknown reference kind {kind!r}")
    return k * np.array(mat, dtype=complex)


def scaling_point(p: DegenerateParams, w) -> Tuple[complex, complex, complex]:
    """``(z, w, tau) = (i beta w / hbar, w, xi w)`` on the scaling path."""
    w = complex(w)
    if not w.imag > 0:
        raise DomainError(f"scaling path needs Im(w) > 0, got w={w}")
    return 1j * p.beta * w / p.hbar, w, p.xi * w


def scaling_phase(p: DegenerateParams, w) -> complex:
    """Scalar ``c = exp(2 pi beta w (1-n) / (n hbar xi))`` along the scaling path.

    This is the modular scalar of the bare matrix evaluated at the
    transformed point. It tends to 1 only linearly in ``w``, so the bare
    matrix approaches the limit at rate O(w) while ``Sbar / c`` converges
    exponentially.
    """
    n = p.n
    return cmath.exp(2 * PI * p.beta * complex(w) * (1 - n) / (n * p.hbar * p.xi))


def scaling_path_sample(p: DegenerateParams, w_path: Sequence[complex],
                        ctrl: TruncationControl = DEFAULT_CONTROL) -> List[Tuple[complex, np.ndarray]]:
    pts = [scaling_point(p, w) for w in w_path]
    return [(w, sbar_sum(z, w, tau, p.n, ctrl)) for z, w, tau in pts]


def ordinary_path_sample(p: DegenerateParams, tau_path: Sequence[complex],
                         ctrl: TruncationControl = DEFAULT_CONTROL) -> List[Tuple[complex, np.ndarray]]:
    taus = [complex(t) for t in tau_path]
    for t in taus:
        if not t.imag > 0:
            raise DomainError(f"Im(tau) must be positive, got tau={t}")
    for a, b in zip(taus, taus[1:]):
        if not b.imag > a.imag:
            raise DomainError("Im(tau) must increase along the ordinary path")
    return [(t, sbar_sum(p.z, p.w, t, p.n, ctrl)) for t in taus]
