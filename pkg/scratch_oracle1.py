"""Scratch: validate the normal-ordering oracle engine before freezing tests."""
import itertools
import math

import numpy as np

from pseudoherm import weyl
from pseudoherm.weyl import WeylSymbol, star, star_commutator


def op_mul(a, b):
    # normal-ordered operator algebra, x left of p, [x, p] = i (so p x = x p - i)
    out = {}
    for (ax, ap), ca in a.items():
        for (bx, bp), cb in b.items():
            for k in range(min(ap, bx) + 1):
                coeff = (
                    ca
                    * cb
                    * math.factorial(k)
                    * math.comb(bx, k)
                    * math.comb(ap, k)
                    * (-1j) ** k
                )
                key = (ax + bx - k, ap + bp - k)
                out[key] = out.get(key, 0j) + coeff
    return {k: v for k, v in out.items() if v != 0}


def word_average(n_x, n_p):
    # brute-force symmetrized product: average the distinct orderings
    total = {}
    count = 0
    for p_slots in itertools.combinations(range(n_x + n_p), n_p):
        pset = set(p_slots)
        word = {(0, 0): 1.0 + 0j}
        for i in range(n_x + n_p):
            letter = {(0, 1): 1.0 + 0j} if i in pset else {(1, 0): 1.0 + 0j}
            word = op_mul(word, letter)
        for k, v in word.items():
            total[k] = total.get(k, 0j) + v
        count += 1
    return {k: v / count for k, v in total.items() if v != 0}


def mccoy(n_x, n_p):
    # McCoy formula for the Weyl-ordered monomial: 2^-n sum_k C(n,k) x^k p^m x^(n-k)
    total = {}
    for k in range(n_x + 1):
        term = op_mul({(k, 0): 1.0 + 0j}, {(0, n_p): 1.0 + 0j})
        term = op_mul(term, {(n_x - k, 0): 1.0 + 0j})
        w = math.comb(n_x, k) / 2.0**n_x
        for key, v in term.items():
            total[key] = total.get(key, 0j) + w * v
    return {k: v for k, v in total.items() if v != 0}


def weyl_to_normal(sym):
    out = {}
    for (dx, dp), c in sym.items():
        base = word_average(dx, dp)
        for k, v in base.items():
            out[k] = out.get(k, 0j) + c * v
    return {k: v for k, v in out.items() if v != 0}


def dict_close(a, b, tol=1e-12):
    keys = set(a) | set(b)
    scale = max([1.0] + [abs(v) for v in list(a.values()) + list(b.values())])
    return all(abs(a.get(k, 0j) - b.get(k, 0j)) <= tol * scale for k in keys)


# 1. engine sanity: p x = x p - i
px = op_mul({(0, 1): 1}, {(1, 0): 1})
assert px == {(1, 1): 1 + 0j, (0, 0): -1j}, px
print("op_mul px -> xp - i OK")

# 2. word_average == mccoy for all small degrees
for n_x in range(5):
    for n_p in range(5):
        assert dict_close(word_average(n_x, n_p), mccoy(n_x, n_p)), (n_x, n_p)
print("word_average == mccoy up to degree (4,4) OK")

# 3. specific check: S(x p) = (xp + px)/2 = xp - i/2 normal ordered
assert dict_close(word_average(1, 1), {(1, 1): 1 + 0j, (0, 0): -0.5j})
print("S(xp) = xp - i/2 OK")

# 4. star vs operator product, random symbols
rng = np.random.default_rng(7)


def random_symbol(max_deg, n_terms):
    terms = {}
    for _ in range(n_terms):
        dx = int(rng.integers(0, max_deg + 1))
        dp = int(rng.integers(0, max_deg + 1 - dx))
        c = complex(rng.normal(), rng.normal())
        terms[(dx, dp)] = terms.get((dx, dp), 0j) + c
    return WeylSymbol(terms)


worst = 0.0
for trial in range(20):
    f = random_symbol(3, 4)
    g = random_symbol(3, 4)
    lhs = weyl_to_normal(star(f, g))
    rhs = op_mul(weyl_to_normal(f), weyl_to_normal(g))
    keys = set(lhs) | set(rhs)
    scale = max([1.0] + [abs(v) for v in rhs.values()])
    err = max(abs(lhs.get(k, 0j) - rhs.get(k, 0j)) for k in keys) / scale
    worst = max(worst, err)
print(f"star vs operator product: worst rel err {worst:.2e}")
assert worst < 1e-13

# 5. freeze a concrete star value: f = x^2 p, g = x p^2
f = WeylSymbol.monomial(2, 1)
g = WeylSymbol.monomial(1, 2)
fg = star(f, g)
gf = star(g, f)
print("star(x2p, xp2) terms:", {k: v for k, v in sorted(fg.items())})
print("star(xp2, x2p) terms:", {k: v for k, v in sorted(gf.items())})
# cross-check via oracle
assert dict_close(weyl_to_normal(fg), op_mul(weyl_to_normal(f), weyl_to_normal(g)))
assert dict_close(weyl_to_normal(gf), op_mul(weyl_to_normal(g), weyl_to_normal(f)))
print("frozen pair verified against oracle")
