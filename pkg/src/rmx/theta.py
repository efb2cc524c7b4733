r"""Theta functions with rational characteristics.

The basic object is

.. math::

    \theta\begin{bmatrix} a \\ b \end{bmatrix}(z, \tau)
        = \sum_{m \in \mathbb{Z}} \exp\{ i\pi [(m+a)^2 \tau + 2(m+a)(z+b)] \}

evaluated by a symmetric truncated sum with an explicit majorant for the
discarded tail.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

import numpy as np

from .errors import DomainError, NonConvergent, PoleError

DEFAULT_TOL = 1e-17
POLE_FLOOR = 1e-14


@dataclass(frozen=True)
class TruncationControl:
    """Truncation orders and the absolute accuracy each evaluation must reach.

    ``max_terms`` caps the theta sum at ``|m| <= max_terms``; ``product_depth``
    caps the exponent of every nome in infinite products. Evaluations pick
    the smallest order meeting ``tol`` and raise ``NonConvergent`` if the cap
    is hit first.
    """

    max_terms: int = 2000
    product_depth: int = 5000
    tol: float = DEFAULT_TOL
    pole_floor: float = POLE_FLOOR

    def __post_init__(self):
        if self.max_terms < 1 or self.product_depth < 1:
            raise DomainError("truncation orders must be positive")
        if not self.tol > 0 or not self.pole_floor >= 0:
            raise DomainError("tol must be positive and pole_floor non-negative")


DEFAULT_CONTROL = TruncationControl()


@dataclass(frozen=True)
class ThetaCharacteristic:
    """Exact rational characteristic ``(a, b)``."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @classmethod
    def from_index(cls, alpha: Tuple[int, int], n: int) -> "ThetaCharacteristic":
        """Characteristic ``(1/2 + alpha_1/n, 1/2 + alpha_2/n)`` of ``sigma_alpha``."""
        return cls(Fraction(1, 2) + Fraction(alpha[0], n),
                   Fraction(1, 2) + Fraction(alpha[1], n))


@dataclass(frozen=True)
class ModularPoint:
    z: complex
    tau: complex

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "tau", complex(self.tau))
        if not self.tau.imag > 0:
            raise DomainError(f"Im(tau) must be positive, got tau={self.tau}")


def tail_bound(a: float, z: complex, b: float, tau: complex, terms: int) -> float:
    """Majorant of the discarded terms ``|m| > terms`` of the theta series.

    ``a`` must already be reduced to ``|a| <= 1/2``. Each side of the tail
    is bounded by its first term times a geometric series; returns ``inf``
    when the terms are not yet decreasing.
    """
    t = tau.imag
    y = abs((z + b).imag)
    u0 = terms + 1 - abs(a)
    rate = 2 * math.pi * (t * u0 - y)
    if rate <= 0:
        return math.inf
    log_first = -math.pi * t * u0 * u0 + 2 * math.pi * y * u0
    return 2 * math.exp(log_first) / -math.expm1(-rate)


def _terms_needed(a, z, b, tau, ctrl):
    t = tau.imag
    y = abs((z + b).imag)
    # first M past the peak of the Gaussian envelope, then walk up
    m = max(1, int(math.ceil(y / t)))
    while m <= ctrl.max_terms:
        if tail_bound(a, z, b, tau, m) <= ctrl.tol:
            return m
        m += max(1, m // 4)
    bound = tail_bound(a, z, b, tau, ctrl.max_terms)
    raise NonConvergent(
        f"theta tail bound {bound:.3e} exceeds tol {ctrl.tol:.1e} at max_terms={ctrl.max_terms}")


def theta_series(a, b, z, tau, ctrl: TruncationControl = DEFAULT_CONTROL):
    """Return ``(value, error_bound)`` for theta[a; b](z, tau).

    The top characteristic is reduced modulo 1 first, which leaves the
    series unchanged and keeps the window centred.
    """
    tau = complex(tau)
    z = complex(z)
    if not tau.imag > 0:
        raise DomainError(f"Im(tau) must be positive, got tau={tau}")
    a = float(a)
    b = float(b)
    a -= round(a)
    m_max = _terms_needed(a, z, b, tau, ctrl)
    u = np.arange(-m_max, m_max + 1) + a
    phase = 1j * np.pi * (u * u * tau + 2 * u * (z + b))
    value = complex(np.sum(np.exp(phase)))
    return value, tail_bound(a, z, b, tau, m_max)


def theta(a, b, z, tau, ctrl: TruncationControl = DEFAULT_CONTROL) -> complex:
    """theta[a; b](z, tau) for plain numeric characteristics."""
    return theta_series(a, b, z, tau, ctrl)[0]


def theta_char(chr: ThetaCharacteristic, pt: ModularPoint,
               ctrl: TruncationControl = DEFAULT_CONTROL) -> complex:
    return theta(chr.a, chr.b, pt.z, pt.tau, ctrl)


def sigma_alpha(alpha, n: int, pt: ModularPoint,
                ctrl: TruncationControl = DEFAULT_CONTROL) -> complex:
    """sigma_alpha(z, tau) = theta[1/2 + alpha_1/n; 1/2 + alpha_2/n](z, tau)."""
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    return theta_char(ThetaCharacteristic.from_index(alpha, n), pt, ctrl)


def sigma(alpha, n, z, tau, ctrl: TruncationControl = DEFAULT_CONTROL) -> complex:
    return theta(0.5 + alpha[0] / n, 0.5 + alpha[1] / n, z, tau, ctrl)


def guard(value: complex, ctrl: TruncationControl = DEFAULT_CONTROL, what: str = "theta") -> complex:
    """Raise ``PoleError`` if ``value`` is below the pole floor."""
    if not abs(value) > ctrl.pole_floor:
        raise PoleError(f"{what} value {abs(value):.3e} below pole floor {ctrl.pole_floor:.1e}")
    return value


def shift_prefactor(a, b, z, tau) -> complex:
    r"""Prefactor in theta[1/2+a; 1/2+b](z) = phi * theta[1/2; 1/2](z + b + a tau).

    Completing the square in the series gives

    .. math:: \phi = \exp\{ i\pi [a^2 \tau + 2a(z + 1/2 + b)] \}.

    The frequently quoted ``exp{2 i pi [z + 1/2 + b + a tau/2]}`` is missing
    the factor ``a`` and is off by O(1) away from ``a = 1``.
    """
    a = float(a)
    b = float(b)
    return cmath.exp(1j * math.pi * (a * a * tau + 2 * a * (z + 0.5 + b)))


def check_shift_identity(a, b, pt: ModularPoint,
                         ctrl: TruncationControl = DEFAULT_CONTROL) -> float:
    lhs = theta(0.5 + float(a), 0.5 + float(b), pt.z, pt.tau, ctrl)
    shifted = pt.z + float(b) + float(a) * pt.tau
    rhs = shift_prefactor(a, b, pt.z, pt.tau) * theta(0.5, 0.5, shifted, pt.tau, ctrl)
    return abs(lhs - rhs)


def check_mt1_ratio(a, b, z1, z2, tau, ctrl: TruncationControl = DEFAULT_CONTROL) -> float:
    """Deviation from the S-transformation law, in ratio form.

    Compares theta[1/2+a; 1/2+b](z/tau, -1/tau) at two arguments against
    ``exp(i pi z^2/tau) theta[1/2+b; 1/2-a](z, tau)`` at the same two, so
    the tau-only normalisation constant drops out.
    """
    z1, z2, tau = complex(z1), complex(z2), complex(tau)
    if z1 == z2:
        raise DomainError("check_mt1_ratio needs z1 != z2")
    if not tau.imag > 0:
        raise DomainError(f"Im(tau) must be positive, got tau={tau}")
    a, b = float(a), float(b)
    tt = -1 / tau
    l1 = guard(theta(0.5 + a, 0.5 + b, z1 / tau, tt, ctrl), ctrl)
    l2 = guard(theta(0.5 + a, 0.5 + b, z2 / tau, tt, ctrl), ctrl)
    r1 = guard(theta(0.5 + b, 0.5 - a, z1, tau, ctrl), ctrl)
    r2 = guard(theta(0.5 + b, 0.5 - a, z2, tau, ctrl), ctrl)
    lhs = l1 / l2
    rhs = cmath.exp(1j * math.pi * (z1 * z1 - z2 * z2) / tau) * r1 / r2
    return abs(lhs - rhs)
