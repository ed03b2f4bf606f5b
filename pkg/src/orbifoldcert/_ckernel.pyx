"""Compiled arithmetic kernel for cyclotomic coefficient vectors.

Same representation and signatures as _kernel_py; see there for the
invariants.  Coefficients are arbitrary-precision Python ints, so the
speedup comes from loop and call overhead, not from machine arithmetic.
"""

from math import gcd

BACKEND = "c"


def vnormalize(nums, den):
    cdef Py_ssize_t i, n
    if den < 0:
        den = -den
        nums = [-x for x in nums]
    g = den
    n = len(nums)
    for i in range(n):
        g = gcd(g, nums[i])
        if g == 1:
            return tuple(nums), den
    return tuple(x // g for x in nums), den // g


def viszero(nums):
    cdef Py_ssize_t i
    for i in range(len(nums)):
        if nums[i]:
            return False
    return True


def vneg(nums, den):
    return tuple(-x for x in nums), den


def vadd(a, ad, b, bd):
    cdef Py_ssize_t i, n = len(a)
    cdef list out = [0] * n
    if ad == bd:
        for i in range(n):
            out[i] = a[i] + b[i]
        return vnormalize(out, ad)
    for i in range(n):
        out[i] = a[i] * bd + b[i] * ad
    return vnormalize(out, ad * bd)


def vsub(a, ad, b, bd):
    cdef Py_ssize_t i, n = len(a)
    cdef list out = [0] * n
    if ad == bd:
        for i in range(n):
            out[i] = a[i] - b[i]
        return vnormalize(out, ad)
    for i in range(n):
        out[i] = a[i] * bd - b[i] * ad
    return vnormalize(out, ad * bd)


def vscale(a, ad, pn, pd):
    if pn == 0:
        return (0,) * len(a), 1
    return vnormalize([x * pn for x in a], ad * pd)


cdef list _conv_reduce(a, b, red):
    cdef Py_ssize_t i, j, k, t, d = len(a)
    cdef list prod = [0] * (2 * d - 1)
    for i in range(d):
        x = a[i]
        if x:
            for j in range(d):
                y = b[j]
                if y:
                    prod[i + j] = prod[i + j] + x * y
    cdef list out = prod[:d]
    for k in range(d, 2 * d - 1):
        c = prod[k]
        if c:
            row = red[k - d]
            for t in range(d):
                r = row[t]
                if r:
                    out[t] = out[t] + c * r
    return out


def vmul(a, ad, b, bd, red):
    return vnormalize(_conv_reduce(a, b, red), ad * bd)


def vaddmul(a, ad, c, cd, b, bd, red):
    cdef Py_ssize_t i, n = len(a)
    cdef list out = _conv_reduce(c, b, red)
    od = cd * bd
    if ad == od:
        for i in range(n):
            out[i] = out[i] + a[i]
        return vnormalize(out, ad)
    for i in range(n):
        out[i] = out[i] * ad + a[i] * od
    return vnormalize(out, ad * od)
