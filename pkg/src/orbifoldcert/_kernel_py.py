"""Pure-Python arithmetic kernel for cyclotomic coefficient vectors.

An element of Q(zeta_n) is stored as ``(nums, den)`` where ``nums`` is a
tuple of ints holding the coordinates in the power basis
1, zeta, ..., zeta^(d-1) (d = deg of the n-th cyclotomic polynomial) and
``den`` is a positive int.  Invariant: gcd(*nums, den) == 1 and den >= 1,
so equal field elements have identical representations.

Multiplication reduces the degree overflow through ``red``, the tuple of
precomputed rows red[i] = x^(d+i) mod Phi_n expressed in degree < d.
These functions are the hot path of normal ordering and row reduction;
the compiled twin in _ckernel.pyx implements the same signatures.
"""

from math import gcd

BACKEND = "python"


def vnormalize(nums, den):
    if den < 0:
        den = -den
        nums = [-x for x in nums]
    g = den
    for x in nums:
        g = gcd(g, x)
        if g == 1:
            return tuple(nums), den
    # g == den == 0 cannot happen: denominators are never zero
    return tuple(x // g for x in nums), den // g


def viszero(nums):
    return not any(nums)


def vneg(nums, den):
    # negation preserves the gcd invariant
    return tuple(-x for x in nums), den


def vadd(a, ad, b, bd):
    if ad == bd:
        return vnormalize([x + y for x, y in zip(a, b)], ad)
    return vnormalize([x * bd + y * ad for x, y in zip(a, b)], ad * bd)


def vsub(a, ad, b, bd):
    if ad == bd:
        return vnormalize([x - y for x, y in zip(a, b)], ad)
    return vnormalize([x * bd - y * ad for x, y in zip(a, b)], ad * bd)


def vscale(a, ad, pn, pd):
    if pn == 0:
        return (0,) * len(a), 1
    return vnormalize([x * pn for x in a], ad * pd)


def _conv_reduce(a, b, red):
    """Multiply coefficient vectors and reduce mod Phi; returns a list."""
    d = len(a)
    prod = [0] * (2 * d - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
    out = prod[:d]
    for k in range(d, 2 * d - 1):
        c = prod[k]
        if c:
            row = red[k - d]
            for t in range(d):
                r = row[t]
                if r:
                    out[t] += c * r
    return out


def vmul(a, ad, b, bd, red):
    return vnormalize(_conv_reduce(a, b, red), ad * bd)


def vaddmul(a, ad, c, cd, b, bd, red):
    """a + c*b in one normalization pass (c a coefficient vector)."""
    out = _conv_reduce(c, b, red)
    od = cd * bd
    if ad == od:
        return vnormalize([x + y for x, y in zip(a, out)], ad)
    return vnormalize([x * od + y * ad for x, y in zip(a, out)], ad * od)
