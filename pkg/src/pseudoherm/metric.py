"""Metric operators and Hermitian counterparts from terminating BCH series.

Given a non-Hermitian symbol H related to a Hermitian h by a similarity
transformation with eta = exp(q/2), the nested star-commutator chain

    c_q^(n)(h0) = [q, [q, ... [q, h0]]]   (n factors of q)

terminates for the structured pairs treated here, and both partners are
finite linear combinations of the chain with universal rational
coefficients: secant ("Euler") numbers for the Hermitian side and the
kappa coefficients for the non-Hermitian side.  The kappa values are
exact fractions; the first few are 1/2, -1/4, 1/2, -17/8.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .weyl import ExpPolySymbol, WeylSymbol, hermitian_conjugate, star, star_commutator

_EULER_REFERENCE = (1, 5, 61, 1385)
_KAPPA_REFERENCE = (Fraction(1, 2), Fraction(-1, 4), Fraction(1, 2), Fraction(-17, 8))


class TerminationError(RuntimeError):
    """A commutator chain required to terminate did not."""

    def __init__(self, message, order=None):
        super().__init__(message)
        self.order = order


class MetricConvergenceError(RuntimeError):
    """Root finding on the metric ansatz did not reach a solution."""

    def __init__(self, message, best_residual=None, best_coefficients=None):
        super().__init__(message)
        self.best_residual = best_residual
        self.best_coefficients = best_coefficients


def euler_numbers(k):
    """First k secant numbers 1, 5, 61, 1385, 50521, ...

    Generated exactly from the convolution identity sec * cos = 1:
    S_n = sum_{j=1..n} (-1)^(j+1) C(2n, 2j) S_{n-j}, S_0 = 1.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    series = [1]
    for n in range(1, k + 1):
        s = 0
        for j in range(1, n + 1):
            s += (-1) ** (j + 1) * math.comb(2 * n, 2 * j) * series[n - j]
        series.append(s)
    return series[1:]


def kappa(n):
    """Exact expansion coefficient kappa_n (odd n only), as a Fraction."""
    if n < 1 or n % 2 == 0:
        raise ValueError(f"kappa is defined for odd n >= 1, got {n}")
    top = (n + 1) // 2
    eulers = euler_numbers(top)
    total = 0
    for m in range(1, top + 1):
        total += (-1) ** (n + m) * math.comb(n, 2 * m - 1) * eulers[m - 1]
    return Fraction(total, 2 ** n)


@dataclass(frozen=True)
class KappaTable:
    """Euler numbers E_1..E_k and kappa_1, kappa_3, ..., kappa_(2k-1)."""

    euler: tuple
    kappa: tuple

    @classmethod
    def build(cls, count):
        if count < 1:
            raise ValueError("count must be >= 1")
        eulers = tuple(euler_numbers(count))
        kappas = tuple(kappa(2 * n - 1) for n in range(1, count + 1))
        for i, ref in enumerate(_EULER_REFERENCE[: min(4, count)]):
            if eulers[i] != ref:
                raise RuntimeError(f"euler number {i + 1} mismatch: {eulers[i]} != {ref}")
        for i, ref in enumerate(_KAPPA_REFERENCE[: min(4, count)]):
            if kappas[i] != ref:
                raise RuntimeError(f"kappa_{2 * i + 1} mismatch: {kappas[i]} != {ref}")
        return cls(euler=eulers, kappa=kappas)


def nfold_commutator(q, operator, n):
    """n-fold nested star commutator of q with the operator symbol."""
    if n < 0:
        raise ValueError("n must be non-negative")
    out = operator
    for _ in range(n):
        out = star_commutator(q, out)
    return out


@dataclass(frozen=True)
class SimilarityPair:
    """Hermitian h and non-Hermitian H sharing the generator q at order ell."""

    h: WeylSymbol
    H: WeylSymbol
    q: WeylSymbol
    ell: int


def hermitian_pair_from_q(h0, q, ell):
    """Build the (h, H) pair generated by q on the Hermitian seed h0.

    Requires the commutator chain to terminate: c_q^(ell+1)(h0) = 0.
    h collects the even chain entries with Euler-number weights, H the
    odd entries with kappa weights; eta = exp(q/2) intertwines them.
    """
    if not h0.isclose(h0.conjugate()):
        raise ValueError("h0 must be Hermitian (real coefficients)")
    if ell < 0:
        raise ValueError("ell must be non-negative")
    chain = [h0]
    for _ in range(ell + 1):
        chain.append(star_commutator(q, chain[-1]))
    if not chain[ell + 1].is_zero():
        raise TerminationError(
            f"commutator chain does not terminate: order {ell + 1} is nonzero",
            order=ell + 1,
        )
    h = h0
    for n in range(1, ell // 2 + 1):
        weight = ((-1) ** n) * euler_numbers(n)[-1] / (4 ** n * math.factorial(2 * n))
        h = h + weight * chain[2 * n]
    H = h0
    for n in range(1, (ell + 1) // 2 + 1):
        weight = float(kappa(2 * n - 1)) / math.factorial(2 * n - 1)
        H = H - weight * chain[2 * n - 1]
    return SimilarityPair(h=h, H=H, q=q, ell=ell)


class BchSeries(NamedTuple):
    value: WeylSymbol
    terminated: bool
    order: int


def conjugate_by_exp(q, operator, max_order=32):
    """Star-product conjugation exp(q) * operator * exp(-q) as a series.

    Sums c_q^(n)(operator)/n! until a chain entry vanishes identically
    (terminated=True) or max_order is reached (terminated=False).
    """
    if max_order < 0:
        raise ValueError("max_order must be non-negative")
    total = operator
    term = operator
    for n in range(1, max_order + 1):
        term = star_commutator(q, term)
        if term.is_zero():
            return BchSeries(value=total, terminated=True, order=n - 1)
        total = total + (1.0 / math.factorial(n)) * term
    return BchSeries(value=total, terminated=False, order=max_order)


def observable_map(observable, q, max_order=32):
    """Map an observable o to eta^-1 o eta with eta = exp(q/2).

    The conjugation series must terminate within max_order; a
    non-terminating series raises TerminationError.
    """
    series = conjugate_by_exp(-0.5 * q, observable, max_order)
    if not series.terminated:
        raise TerminationError(
            f"observable conjugation series did not terminate within {max_order} orders",
            order=max_order,
        )
    return series.value


def metric_residual(H, eta_squared):
    """Pseudo-Hermiticity defect star(H^dag, eta^2) - star(eta^2, H)."""
    if isinstance(eta_squared, WeylSymbol):
        raise TypeError("eta_squared must be an ExpPolySymbol; use ExpPolySymbol.exp")
    left = star(hermitian_conjugate(H), eta_squared)
    right = star(eta_squared, H)
    return left - right


@dataclass(frozen=True)
class MetricAnsatzSolution:
    coefficients: dict
    eta_squared: ExpPolySymbol
    residual_norm: float


def solve_metric_ansatz(H, exponent_monomials, initial=None, tol=1e-10, max_tries=5):
    """Find real coefficients c_k with eta^2 = exp(sum c_k m_k) killing the residual.

    The residual prefactor is evaluated on a fixed seeded set of sample
    points and driven to zero with damped least squares; the returned
    solution is re-verified coefficientwise through metric_residual.
    """
    from scipy.optimize import least_squares

    keys = []
    for key in exponent_monomials:
        dx, dp = key
        keys.append((int(dx), int(dp)))
    if not keys:
        raise ValueError("ansatz needs at least one exponent monomial")

    rng = np.random.default_rng(20240817)
    n_pts = max(10, 3 * len(keys) + 6)
    pts = rng.uniform(-1.6, 1.6, size=(n_pts, 2))

    def build(c):
        return ExpPolySymbol.exp(WeylSymbol({k: v for k, v in zip(keys, c)}))

    def resid_vec(c):
        # a single-exponent ansatz leaves a single-exponent residual, so
        # the prefactors can be combined before sampling
        residual = metric_residual(H, build(c))
        combined = WeylSymbol.zero()
        for prefactor, _ in residual.terms:
            combined = combined + prefactor
        vals = np.zeros(2 * n_pts)
        for i, (xv, pv) in enumerate(pts):
            v = combined.evaluate(xv, pv)
            vals[2 * i] = v.real
            vals[2 * i + 1] = v.imag
        return vals

    scale = max(1.0, H.max_abs())
    x0 = np.zeros(len(keys)) if initial is None else np.asarray(initial, dtype=float)
    best = None
    for attempt in range(max_tries):
        sol = least_squares(resid_vec, x0, method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15)
        c = sol.x
        residual = metric_residual(H, build(c))
        norm = residual.max_abs_coeff()
        if best is None or norm < best[0]:
            best = (norm, c)
        if norm <= tol * scale:
            coefficients = {k: float(v) for k, v in zip(keys, c)}
            return MetricAnsatzSolution(
                coefficients=coefficients, eta_squared=build(c), residual_norm=float(norm)
            )
        x0 = rng.normal(scale=0.5 + attempt, size=len(keys))
    raise MetricConvergenceError(
        f"metric ansatz did not converge: best residual {best[0]:.3e}",
        best_residual=float(best[0]),
        best_coefficients={k: float(v) for k, v in zip(keys, best[1])},
    )
