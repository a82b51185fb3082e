"""Scratch: metric-layer oracles (zigzag triangle, deep-chain BCH consistency)."""
from fractions import Fraction

from pseudoherm import metric, models, weyl
from pseudoherm.weyl import ExpPolySymbol, WeylSymbol, star, star_commutator


def zigzag_secant(count):
    """Secant numbers via the Seidel boustrophedon triangle (independent route).

    The transform of the seed 1, 0, 0, ... produces the zigzag numbers
    T(n); the even-index entries T(2), T(4), ... are the secant numbers.
    """
    row = [1]
    zigzag = [1]
    for n in range(1, 2 * count + 1):
        new = [0]
        for k in range(n):
            new.append(new[k] + row[n - 1 - k])
        row = new
        zigzag.append(row[-1])
    return [zigzag[2 * i] for i in range(1, count + 1)]


print("zigzag:", zigzag_secant(6))
print("euler_numbers:", metric.euler_numbers(6))
assert zigzag_secant(6) == metric.euler_numbers(6)

# deep chain: h0 = p^5, q = g x^2 -> c1..c5 nonzero, c6 = 0 (ell = 5)
g = 0.37
h0 = WeylSymbol.p(5)
q = WeylSymbol.monomial(2, 0, g)
chain = [h0]
for k in range(7):
    chain.append(star_commutator(q, chain[-1]))
for k, c in enumerate(chain):
    print(f"c{k}: zero={c.is_zero()} deg={c.total_degree()} nterms={len(c.terms)}")

pair = metric.hermitian_pair_from_q(h0, q, ell=5)
print("h terms:", dict(sorted(pair.h.items())))
print("H terms:", dict(sorted(pair.H.items())))

# eta H eta^-1 = h with eta = exp(q/2): conjugate H by generator q/2
back = metric.conjugate_by_exp(0.5 * q, pair.H)
print("terminated:", back.terminated, "order:", back.order)
diff = back.value - pair.h
print("BCH round trip max err:", diff.max_abs())
assert diff.max_abs() < 1e-10 * max(1.0, pair.h.max_abs())

# also H must be eta^-1-side consistent: conjugate h by -q/2 gives H
fwd = metric.conjugate_by_exp(-0.5 * q, pair.h)
print("reverse max err:", (fwd.value - pair.H).max_abs())

# Hermiticity structure: h real, H has the odd-chain anti-Hermitian parts
print("h hermitian:", pair.h.is_hermitian())

# frozen nonzero residual: Swanson H22 with wrong metric exponent 2 g x^2
alpha, gs = 1.1, 0.4
fam = models.swanson_pair(2, 2, alpha, gs)
bad = ExpPolySymbol.exp(WeylSymbol.monomial(2, 0, 2 * gs))
res = metric.metric_residual(fam.H, bad)
print("residual terms:")
for pref, expo in res.terms:
    print("  prefactor:", dict(pref.items()), " exponent:", dict(expo.items()))
# expected: single term, prefactor -2i*gs * (x p), exponent 2 gs x^2
expect = WeylSymbol.monomial(1, 1, -2j * gs)
assert len(res.terms) == 1
pref, expo = res.terms[0]
assert (pref - expect).max_abs() < 1e-14
assert (expo - WeylSymbol.monomial(2, 0, 2 * gs)).max_abs() < 1e-14
print("frozen nonzero residual verified: -2i*g*x*p * exp(2*g*x^2)")

# point-evaluation double check at (x,p) = (0.7, -1.3) via independent formula
x0, p0 = 0.7, -1.3
import cmath

val = res.evaluate(x0, p0)
ref = -2j * gs * x0 * p0 * cmath.exp(2 * gs * x0 * x0)
print("point eval:", val, ref, abs(val - ref))
assert abs(val - ref) < 1e-12 * abs(ref)
