"""Normalised eigenvalue counting measures chi_n and their tail estimates.

``chi_n`` puts weight ``S_{n-k} / (V_n - 2)`` on every root of gamma_k,
k <= n, so that it is the normalised counting measure of the Dirichlet
spectrum of G_n.  The tail formulas use the roots rho_1 < rho_2 < rho_3 of
``rho^3 - rho^2 - 2 rho + 1`` and the angle phi of the closed-form degree
formula.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from gmpy2 import mpq

from .exact.roots import IsolatingInterval
from .graphs import vertex_count_formula
from .recursion import cubic_roots, cubic_weights, degree_gamma, multiplicity_S
from .spectrum import SpectrumIsolation

__all__ = [
    "SpectralAtom",
    "spectral_measure",
    "total_mass",
    "weight",
    "weight_bound",
    "limit_weight",
    "weight_bound_holds",
    "tail_sum",
    "tail_sum_direct",
    "limit_tail",
    "limit_proportion",
    "mass_horizon",
    "mass_on_levels",
]


@dataclass(frozen=True)
class SpectralAtom:
    """One eigenvalue of G_n with its first-appearance level and exact weight."""

    root: IsolatingInterval
    level: int
    weight: mpq


def weight(n: int, k: int) -> mpq:
    """Exact chi_n weight S_{n-k} / (V_n - 2) of a single gamma_k root."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    return mpq(multiplicity_S(n - k), vertex_count_formula(n) - 2)


def spectral_measure(n: int, iso: SpectrumIsolation | None = None) -> list[SpectralAtom]:
    """Atoms of chi_n sorted by position; atoms of zero weight are dropped."""
    if n < 1:
        raise ValueError("chi_n is defined for n >= 1")
    iso = iso if iso is not None else SpectrumIsolation()
    atoms = []
    for iv, k, _ in iso.dirichlet_spectrum(n):
        atoms.append(SpectralAtom(iv, k, weight(n, k)))
    return atoms


def total_mass(atoms) -> mpq:
    return sum((a.weight for a in atoms), mpq(0))


def weight_bound(n: int, k: int) -> mpq:
    """Bound (n + 5) / 2^(n+1) on |S_{n-k}/(V_n - 2) - 2^-k/6|."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    return mpq(n + 5, 2 ** (n + 1))


def limit_weight(k: int) -> mpq:
    """Limit 2^-k / 6 of the weight of a level-k atom."""
    if k < 1:
        raise ValueError("k must be positive")
    return mpq(1, 6 * 2**k)


def weight_bound_holds(n: int, k: int) -> bool:
    return abs(weight(n, k) - limit_weight(k)) <= weight_bound(n, k)


def tail_sum(m: int, n: int, rho):
    """Closed form of sum_{k=m+1}^n S_{n-k} rho^k for rho a root of the cubic."""
    if n < m:
        raise ValueError("need n >= m")
    rho = mpmath.mpf(rho)
    s = -1 if (n - m) % 2 else 1
    return (
        rho ** (m + 1)
        / 36
        * (
            mpmath.mpf(2) ** (n - m + 2) * rho * (rho + 1)
            + (5 * rho**2 - 4 * rho - 18) * s
            + 6 * rho * (2 - rho) * s * (n - m)
            + 9 * (2 - rho**2)
        )
    )


def tail_sum_direct(m: int, n: int, rho):
    """Brute-force sum_{k=m+1}^n S_{n-k} rho^k."""
    rho = mpmath.mpf(rho)
    return mpmath.fsum(multiplicity_S(n - k) * rho**k for k in range(m + 1, n + 1))


def limit_tail(m: int, bits: int = 128):
    """Limiting share of chi_n mass on roots of gamma_k with k > m.

    ``(1 / (3 sqrt 7)) sum_j cos(phi + 2 j pi / 3) rho_j^2 (rho_j + 1) (rho_j / 2)^m``;
    it equals 1 at m = 0.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    roots, _, _ = cubic_roots(bits)
    w = cubic_weights(bits)
    with mpmath.workprec(bits + 16):
        return mpmath.fsum(c * r**2 * (r + 1) * (r / 2) ** m for r, c in zip(roots, w)) / (3 * mpmath.sqrt(7))


def limit_proportion(m: int, bits: int = 128):
    """Limiting share of chi_n mass carried by eigenvalues of G_m (roots of gamma_k, k <= m)."""
    with mpmath.workprec(bits + 16):
        return 1 - limit_tail(m, bits)


def mass_horizon(eps, bits: int = 128) -> int:
    """Smallest m with (12 / sqrt 7) (rho_3 / 2)^(m+1) < eps."""
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    roots, _, _ = cubic_roots(bits)
    r3 = roots[2]
    with mpmath.workprec(bits + 16):
        eps = mpmath.mpf(eps)
        c = 12 / mpmath.sqrt(7)
        m = 0
        while c * (r3 / 2) ** (m + 1) >= eps:
            m += 1
        return m


def mass_on_levels(n: int, m: int) -> mpq:
    """Exact chi_n mass on roots of gamma_k, k <= min(m, n)."""
    if n < 1 or m < 1:
        raise ValueError("levels start at 1")
    num = sum(multiplicity_S(n - k) * degree_gamma(k) for k in range(1, min(m, n) + 1))
    return mpq(num, vertex_count_formula(n) - 2)
