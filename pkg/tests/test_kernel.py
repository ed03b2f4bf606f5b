"""Cross-checks between the compiled kernel and its pure-Python twin."""

import os
import random
import subprocess
import sys

import pytest

from orbifoldcert import _kernel_py
from orbifoldcert.scalars import _reduction_rows, cyclotomic_polynomial

BACKENDS = [_kernel_py]
try:
    from orbifoldcert import _ckernel

    BACKENDS.append(_ckernel)
except ImportError:
    pass


def _rand_vec(rng, d):
    nums = [rng.randint(-9, 9) for _ in range(d)]
    den = rng.randint(1, 9)
    return _kernel_py.vnormalize(nums, den)


def _check_invariant(nums, den):
    from math import gcd

    assert den >= 1
    g = den
    for x in nums:
        g = gcd(g, x)
    assert g == 1
    assert isinstance(nums, tuple)


@pytest.mark.parametrize("order", [1, 2, 3, 4, 12])
def test_backends_agree(order):
    d = cyclotomic_polynomial(order).degree
    red = _reduction_rows(order)
    rng = random.Random(20240817)
    for _ in range(120):
        a, ad = _rand_vec(rng, d)
        b, bd = _rand_vec(rng, d)
        c, cd = _rand_vec(rng, d)
        pn, pd = rng.randint(-6, 6), rng.randint(1, 6)
        results = []
        for impl in BACKENDS:
            results.append(
                (
                    impl.vadd(a, ad, b, bd),
                    impl.vsub(a, ad, b, bd),
                    impl.vneg(a, ad),
                    impl.vmul(a, ad, b, bd, red),
                    impl.vaddmul(a, ad, c, cd, b, bd, red),
                    impl.vscale(a, ad, pn, pd),
                    impl.viszero(a),
                )
            )
        for got in results[1:]:
            assert got == results[0]
        for out in results[0][:-1]:
            _check_invariant(*out)


@pytest.mark.parametrize("impl", BACKENDS)
def test_normalize_canonical(impl):
    assert impl.vnormalize([2, -4, 6], 8) == ((1, -2, 3), 4)
    assert impl.vnormalize([0, 0], 5) == ((0, 0), 1)
    assert impl.vnormalize([3], -6) == ((-1,), 2)
    assert impl.vnormalize([-3], -6) == ((1,), 2)


@pytest.mark.parametrize("impl", BACKENDS)
def test_addmul_matches_separate_ops(impl):
    red = _reduction_rows(4)
    rng = random.Random(7)
    for _ in range(60):
        a, ad = _rand_vec(rng, 2)
        b, bd = _rand_vec(rng, 2)
        c, cd = _rand_vec(rng, 2)
        prod, prodd = impl.vmul(c, cd, b, bd, red)
        expected = impl.vadd(a, ad, prod, prodd)
        assert impl.vaddmul(a, ad, c, cd, b, bd, red) == expected


def test_compiled_backend_available():
    # the build is expected to produce the extension in this tree
    assert len(BACKENDS) == 2, "compiled kernel missing; check the build"


def test_pure_override_env():
    code = "from orbifoldcert.kernel import BACKEND; print(BACKEND)"
    env = dict(os.environ, ORBIFOLDCERT_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    assert out.returncode == 0
    assert out.stdout.strip() == "python"
