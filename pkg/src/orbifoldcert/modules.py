"""Whittaker modules and their exact mode actions.

A module is spanned by monomials of creation modes applied to a cyclic
vector w.  The annihilator part acts through a Whittaker function
Lambda with finite support and K acts by the level, which this release
pins to 1.  Commuting an annihilation mode to the right only produces
central corrections, so the action of any mode on a basis monomial is a
finite exact sum computed in :func:`act_mode`.

A handle may carry a twist (g, k): the composition module W o g^k, on
which x acts as g^k(x) does on W.  All degree bookkeeping is exact
(degrees are half-integers stored as fractions).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from .modes import (
    AlgebraSignature,
    Automorphism,
    GeneratorMode,
    OperatorExpr,
    mode_key,
    parse_operator_expr,
)
from .scalars import Scalar


class WhittakerFunction:
    """A character of the annihilator part plus the level on K."""

    __slots__ = ("sig", "values", "level")

    def __init__(self, sig: AlgebraSignature, values: dict, level=None):
        clean = {}
        for mode, val in values.items():
            if not sig.in_annihilator(mode):
                raise ValueError(
                    f"{mode} lies outside the annihilator part of {sig.name}"
                )
            if not isinstance(val, Scalar):
                val = Scalar.from_rational(val)
            if not val.is_zero():
                clean[mode] = val
        self.sig = sig
        self.values = clean
        if level is None:
            level = Scalar.one()
        elif not isinstance(level, Scalar):
            level = Scalar.from_rational(level)
        self.level = level

    def value(self, mode: GeneratorMode) -> Scalar:
        return self.values.get(mode, Scalar.zero())

    @property
    def support_bound(self) -> int:
        """Largest index carrying a nonzero value; -1 for the vacuum."""
        return max((m.index for m in self.values), default=-1)

    def is_zero(self) -> bool:
        return not self.values

    def __eq__(self, other) -> bool:
        if not isinstance(other, WhittakerFunction):
            return NotImplemented
        if self.sig.species != other.sig.species:
            return False
        if self.level != other.level:
            return False
        keys = set(self.values) | set(other.values)
        return all(self.value(k) == other.value(k) for k in keys)

    __hash__ = None

    def __str__(self) -> str:
        if not self.values:
            return "0"
        items = sorted(self.values.items(), key=lambda kv: mode_key(kv[0]))
        return ", ".join(f"{m} -> {v}" for m, v in items)

    def __repr__(self) -> str:
        return f"WhittakerFunction({self.sig.name}; {self})"


def vacuum_whittaker(sig: AlgebraSignature) -> WhittakerFunction:
    return WhittakerFunction(sig, {})


def heisenberg_whittaker(
    sig: AlgebraSignature, rows: Sequence[Sequence]
) -> WhittakerFunction:
    """rows[i][n] is the value on h_{i+1}(n), n = 0, 1, ..."""
    if sig.kind != "heisenberg":
        raise ValueError("expected a heisenberg signature")
    if len(rows) != len(sig.species):
        raise ValueError(f"expected {len(sig.species)} rows of values")
    values = {}
    for s, row in zip(sig.species, rows):
        for n, val in enumerate(row):
            values[GeneratorMode(s, n)] = val
    return WhittakerFunction(sig, values)


def weyl_whittaker(
    sig: AlgebraSignature, lam: Sequence = (), mu: Sequence = ()
) -> WhittakerFunction:
    """lam[n] is the value on a(n); mu[k] the value on a*(k + 1)."""
    if sig.kind != "weyl":
        raise ValueError("expected the weyl signature")
    a, astar = sig.species
    values = {}
    for n, val in enumerate(lam):
        values[GeneratorMode(a, n)] = val
    for k, val in enumerate(mu):
        values[GeneratorMode(astar, k + 1)] = val
    return WhittakerFunction(sig, values)


class BasisMonomial(NamedTuple):
    """A sorted product of creation modes applied to the cyclic vector."""

    modes: tuple[GeneratorMode, ...] = ()

    @classmethod
    def of(cls, modes) -> "BasisMonomial":
        return cls(tuple(sorted(modes, key=mode_key)))

    def degree(self, sig: AlgebraSignature) -> Fraction:
        return sum((sig.degree(m) for m in self.modes), Fraction(0))

    def __str__(self) -> str:
        return " ".join(str(m) for m in self.modes) if self.modes else "1"


def monomial_key(mono: BasisMonomial, sig: AlgebraSignature):
    """Deterministic (degree, then lexicographic) ordering key."""
    twice = 2 * mono.degree(sig)
    return (
        twice.numerator,
        len(mono.modes),
        tuple((m.index, m.species.id) for m in mono.modes),
    )


class ModuleVector:
    """Finite linear combination of basis monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[dict] = None):
        clean = {}
        for mono, c in (terms or {}).items():
            if not isinstance(mono, BasisMonomial):
                raise TypeError("keys must be BasisMonomial")
            if not c.is_zero():
                clean[mono] = c
        self.terms = clean

    @classmethod
    def _make(cls, terms: dict) -> "ModuleVector":
        v = object.__new__(cls)
        v.terms = terms
        return v

    @classmethod
    def zero(cls) -> "ModuleVector":
        return cls._make({})

    @classmethod
    def cyclic(cls, coeff=None) -> "ModuleVector":
        c = Scalar.one() if coeff is None else coeff
        return cls._make({BasisMonomial(): c} if not c.is_zero() else {})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "ModuleVector") -> "ModuleVector":
        out = dict(self.terms)
        for mono, c in other.terms.items():
            cur = out.get(mono)
            s = c if cur is None else cur + c
            if s.is_zero():
                out.pop(mono, None)
            else:
                out[mono] = s
        return ModuleVector._make(out)

    def __sub__(self, other: "ModuleVector") -> "ModuleVector":
        return self + (-other)

    def __neg__(self) -> "ModuleVector":
        return ModuleVector._make({m: -c for m, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            if isinstance(other, Scalar):
                if other.is_zero():
                    return ModuleVector.zero()
            elif other == 0:
                return ModuleVector.zero()
            return ModuleVector._make(
                {m: c * other for m, c in self.terms.items()}
            )
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModuleVector):
            return NotImplemented
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[m] == other.terms[m] for m in self.terms)

    __hash__ = None

    def max_creation_depth(self) -> int:
        depth = 0
        for mono in self.terms:
            for m in mono.modes:
                depth = max(depth, -m.index)
        return depth

    def max_degree(self, sig: AlgebraSignature) -> Fraction:
        return max(
            (mono.degree(sig) for mono in self.terms), default=Fraction(0)
        )

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for mono in sorted(
            self.terms,
            key=lambda u: (len(u.modes), tuple(map(mode_key, u.modes))),
        ):
            c = str(self.terms[mono])
            c = f"({c})" if " " in c else c
            pieces.append(f"{c} * {mono}" if mono.modes else c)
        return " + ".join(pieces)

    def __repr__(self) -> str:
        return f"ModuleVector('{self}')"


class ModuleHandle:
    """A Whittaker module, optionally precomposed with a twist g^k."""

    __slots__ = ("sig", "whittaker", "twist")

    def __init__(
        self,
        sig: AlgebraSignature,
        whittaker: WhittakerFunction,
        twist: Optional[tuple[Automorphism, int]] = None,
    ):
        self.sig = sig
        self.whittaker = whittaker
        self.twist = twist

    def __repr__(self) -> str:
        t = ""
        if self.twist is not None:
            t = f", twist=g^{self.twist[1]}"
        return f"ModuleHandle({self.sig.name}; {self.whittaker}{t})"


def build_module(
    sig: AlgebraSignature,
    whittaker: WhittakerFunction,
    twist: Optional[tuple[Automorphism, int]] = None,
) -> ModuleHandle:
    if whittaker.sig.species != sig.species:
        raise ValueError("whittaker function belongs to a different signature")
    if whittaker.level != Scalar.one():
        raise ValueError("only level 1 is supported")
    if twist is not None:
        g, k = twist
        if g.sig.species != sig.species:
            raise ValueError("twist automorphism belongs to a different signature")
        twist = (g, k % g.order)
    return ModuleHandle(sig, whittaker, twist)


def _insert_sorted(
    modes: tuple[GeneratorMode, ...], x: GeneratorMode
) -> tuple[GeneratorMode, ...]:
    key = mode_key(x)
    for i, m in enumerate(modes):
        if key < mode_key(m):
            return modes[:i] + (x,) + modes[i:]
    return modes + (x,)


def _accumulate(out: dict, mono: BasisMonomial, c: Scalar):
    cur = out.get(mono)
    s = c if cur is None else cur + c
    if s.is_zero():
        out.pop(mono, None)
    else:
        out[mono] = s


def _act_base(
    x: GeneratorMode,
    v: ModuleVector,
    m: ModuleHandle,
    scale: Optional[Scalar],
    out: dict,
):
    """Action of an untwisted mode, scaled, accumulated into out."""
    sig = m.sig
    if sig.is_creation(x):
        for mono, c in v.terms.items():
            if scale is not None:
                c = c * scale
            _accumulate(out, BasisMonomial(_insert_sorted(mono.modes, x)), c)
        return
    lam = m.whittaker.value(x)
    have_lam = not lam.is_zero()
    for mono, c in v.terms.items():
        if scale is not None:
            c = c * scale
        if have_lam:
            _accumulate(out, mono, c * lam)
        # commute x past each creation mode; brackets are central, and
        # the level is pinned to 1, so each contraction just deletes one
        # mode with the commutator coefficient
        for i, y in enumerate(mono.modes):
            rule = sig.commutator(x, y)
            if not rule.is_zero():
                shorter = BasisMonomial(mono.modes[:i] + mono.modes[i + 1 :])
                _accumulate(out, shorter, c * rule)


def act_mode(
    x: GeneratorMode, v: ModuleVector, m: ModuleHandle
) -> ModuleVector:
    out: dict = {}
    if m.twist is None:
        _act_base(x, v, m, None, out)
    else:
        g, k = m.twist
        for mode, coeff in g.apply_to_mode(x, k):
            _act_base(mode, v, m, coeff, out)
    return ModuleVector._make(out)


def act_expr(
    e: OperatorExpr, v: ModuleVector, m: ModuleHandle
) -> ModuleVector:
    """Apply a sum of words, rightmost mode first; K acts by the level."""
    total: dict = {}
    for word, coeff in e.terms.items():
        cur = v
        for x in reversed(word.modes):
            cur = act_mode(x, cur, m)
            if cur.is_zero():
                break
        if cur.is_zero():
            continue
        if word.k_power:
            coeff = coeff * m.whittaker.level ** word.k_power
        for mono, c in cur.terms.items():
            _accumulate(total, mono, c * coeff)
    return ModuleVector._make(total)


def _ordered_pair(sig, x, y):
    # creation factor to the left; mixed-order pairs here always commute
    # except at the single ambiguous spot fixed by this convention
    if sig.in_annihilator(x) and sig.is_creation(y):
        return y, x
    return x, y


def act_virasoro(
    n: int, v: ModuleVector, m: ModuleHandle, widen: int = 0
) -> ModuleVector:
    """L(n) through the quadratic mode expansion of the conformal vector.

    The infinite normally ordered sum truncates exactly: an annihilation
    factor of index beyond the creation depth of v and the Whittaker
    support bound acts as zero.  ``widen`` enlarges the window; any
    nonnegative value gives the same vector.
    """
    if v.is_zero():
        return ModuleVector.zero()
    sig = m.sig
    r = max(m.whittaker.support_bound, 0)
    depth = v.max_creation_depth()
    total = ModuleVector.zero()
    if sig.kind == "heisenberg":
        window = depth + r + abs(n) + 1 + widen
        for k in range(-window, window + 1):
            for s in sig.species:
                x = GeneratorMode(s, -k)
                y = GeneratorMode(s, k + n)
                left, right = _ordered_pair(sig, x, y)
                w = act_mode(left, act_mode(right, v, m), m)
                if not w.is_zero():
                    total = total + w * Fraction(1, 2)
        return total
    window = depth + r + abs(n) + 2 + widen
    a, astar = sig.species
    for j in range(-window, window + 1):
        coeff = Fraction(2 * j - n + 1, 2)
        if not coeff:
            continue
        x = GeneratorMode(a, j)
        y = GeneratorMode(astar, n - j)
        left, right = _ordered_pair(sig, x, y)
        w = act_mode(left, act_mode(right, v, m), m)
        if not w.is_zero():
            total = total + w * coeff
    return total


def whittaker_type(m: ModuleHandle) -> WhittakerFunction:
    """The Whittaker function of the twisted module W o g^k."""
    if m.twist is None:
        return m.whittaker
    sig = m.sig
    g, k = m.twist
    mat = g.power_matrix(k)
    values = {}
    indices = sorted({x.index for x in m.whittaker.values})
    for n in indices:
        for s in sig.species:
            x = GeneratorMode(s, n)
            if not sig.in_annihilator(x):
                continue
            acc = Scalar.zero()
            for t in sig.species:
                c = mat[t.id][s.id]
                if c.is_zero():
                    continue
                target = GeneratorMode(t, n)
                if not sig.in_annihilator(target):
                    raise ValueError(
                        "twist does not preserve the annihilator part"
                    )
                acc = acc.addmul(c, m.whittaker.value(target))
            if not acc.is_zero():
                values[x] = acc
    return WhittakerFunction(sig, values, m.whittaker.level)


def generalized_eigen_degree(
    x: GeneratorMode, v: ModuleVector, m: ModuleHandle
) -> int:
    """Least k with (x - Lambda(x))^k v = 0.

    Each pass of x - Lambda(x) replaces every monomial by strictly
    shorter ones, so k is at most 1 + the longest monomial of v.
    """
    if not m.sig.in_annihilator(x):
        raise ValueError(f"{x} is not in the annihilator part")
    if v.is_zero():
        raise ValueError("the zero vector has no eigen degree")
    lam = whittaker_type(m).value(x)
    bound = 1 + max(len(u.modes) for u in v.terms)
    w = v
    for k in range(1, bound + 1):
        w = act_mode(x, w, m) - w * lam
        if w.is_zero():
            return k
    raise ArithmeticError("nilpotency bound exceeded")


def filtration_basis(m: ModuleHandle, max_degree) -> list[BasisMonomial]:
    """All basis monomials of degree at most max_degree, ordered by
    (degree, lexicographic position)."""
    max_degree = Fraction(max_degree)
    sig = m.sig
    modes = sig.creation_modes(max_degree)
    out: list[BasisMonomial] = []

    def rec(start: int, acc: list, remaining: Fraction):
        out.append(BasisMonomial(tuple(acc)))
        for i in range(start, len(modes)):
            d = sig.degree(modes[i])
            if d <= remaining:
                acc.append(modes[i])
                rec(i, acc, remaining - d)
                acc.pop()

    rec(0, [], max_degree)
    out.sort(key=lambda mono: monomial_key(mono, sig))
    return out


def parse_module_vector(
    text: str, sig: AlgebraSignature, order: int = 1
) -> ModuleVector:
    """Read a vector as expression text in creation modes.

    Creation modes commute exactly, so the written order is free.
    """
    e = parse_operator_expr(text, sig, order)
    terms: dict = {}
    for word, c in e.terms.items():
        if word.k_power:
            raise ValueError("module vectors carry no K power")
        for m in word.modes:
            if not sig.is_creation(m):
                raise ValueError(f"{m} is not a creation mode")
        _accumulate(terms, BasisMonomial.of(word.modes), c)
    return ModuleVector._make(terms)


@dataclass(frozen=True)
class ConformalData:
    central_charge: Scalar
    description: str


_conformal_cache: dict[str, ConformalData] = {}


def conformal_data(sig: AlgebraSignature) -> ConformalData:
    """Central charge read off the vacuum rather than assumed.

    [L(2), L(-2)] 1 = 4 L(0) 1 + (c/2) 1, and both L(0) 1 and the
    positive-mode contributions are computed exactly, so the multiple
    of the vacuum vector determines c.
    """
    key = sig.name
    cached = _conformal_cache.get(key)
    if cached is not None:
        return cached
    vac = build_module(sig, vacuum_whittaker(sig))
    one = ModuleVector.cyclic()
    lhs = act_virasoro(2, act_virasoro(-2, one, vac), vac) - act_virasoro(
        -2, act_virasoro(2, one, vac), vac
    )
    resid = lhs - act_virasoro(0, one, vac) * 4
    coeff = resid.terms.get(BasisMonomial(), Scalar.zero())
    if resid != ModuleVector.cyclic(coeff):
        raise ArithmeticError("vacuum probe did not return a vacuum multiple")
    data = ConformalData(coeff * 2, f"vacuum probe on {sig.name}")
    _conformal_cache[key] = data
    return data
