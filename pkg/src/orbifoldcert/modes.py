"""Mode words and their commutation algebra.

Generators are modes x_s(n) indexed by a species s and an integer n,
together with a central element K.  All commutators here are central:
[x_s(m), x_t(n)] = c * K with c rational, nonzero only when m + n = 0.
That makes the span of words a quasi-commutative setting where normal
ordering only ever produces shorter words, which the rewriting in
:func:`normal_form` exploits.

Two signatures are provided: the rank-l Heisenberg algebra with
orthonormal species h1..hl and [h_i(m), h_j(n)] = m delta_{ij}
delta_{m+n,0} K, and the Weyl pair a, a* with [a(m), a*(n)] =
delta_{m+n,0} K.  Degrees are the conformal weights of the modes: -n
for h_i(n), -n - 1/2 for a(n) and -n + 1/2 for a*(n).
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction
from math import lcm
from typing import Iterable, NamedTuple, Optional, Sequence

from .scalars import Scalar


class Species(NamedTuple):
    id: int
    name: str


class GeneratorMode(NamedTuple):
    species: Species
    index: int

    def __str__(self) -> str:
        return f"{self.species.name}({self.index})"


def mode_key(m: GeneratorMode) -> tuple[int, int]:
    """Canonical word order: index ascending, then species id."""
    return (m.index, m.species.id)


class AlgebraSignature:
    """Species list plus commutator, degree and annihilator data."""

    def __init__(self, kind: str, species: tuple[Species, ...], rank: int):
        self.kind = kind
        self.species = species
        self.rank = rank
        self._by_name = {s.name: s for s in species}

    @property
    def name(self) -> str:
        if self.kind == "heisenberg":
            return f"heisenberg({self.rank})"
        return "weyl"

    def species_named(self, name: str) -> Species:
        try:
            return self._by_name[name]
        except KeyError:
            raise ValueError(f"unknown species {name!r} in {self.name}") from None

    def mode(self, name: str, index: int) -> GeneratorMode:
        return GeneratorMode(self.species_named(name), index)

    def commutator(self, x: GeneratorMode, y: GeneratorMode) -> Scalar:
        """Coefficient c in [x, y] = c K."""
        if x.index + y.index != 0:
            return Scalar.zero()
        if self.kind == "heisenberg":
            if x.species == y.species:
                return Scalar.from_rational(x.index)
            return Scalar.zero()
        # weyl: species 0 is a, species 1 is a*
        if x.species.id == 0 and y.species.id == 1:
            return Scalar.one()
        if x.species.id == 1 and y.species.id == 0:
            return Scalar.from_rational(-1)
        return Scalar.zero()

    def degree(self, m: GeneratorMode) -> Fraction:
        if self.kind == "heisenberg":
            return Fraction(-m.index)
        if m.species.id == 0:
            return Fraction(-2 * m.index - 1, 2)
        return Fraction(-2 * m.index + 1, 2)

    def in_annihilator(self, m: GeneratorMode) -> bool:
        """Membership in the positive part n (K excluded)."""
        if self.kind == "heisenberg":
            return m.index >= 0
        if m.species.id == 0:
            return m.index >= 0
        return m.index >= 1

    def is_creation(self, m: GeneratorMode) -> bool:
        return not self.in_annihilator(m)

    def creation_modes(self, max_degree: Fraction) -> list[GeneratorMode]:
        # creation modes all have positive degree growing as the index
        # drops, so each species contributes a finite initial stretch
        out = []
        for s in self.species:
            n = 1
            while True:
                n -= 1
                m = GeneratorMode(s, n)
                if self.in_annihilator(m):
                    continue
                if self.degree(m) > max_degree:
                    break
                out.append(m)
        out.sort(key=mode_key)
        return out

    def modes_in_range(self, max_index: int) -> list[GeneratorMode]:
        out = [
            GeneratorMode(s, n)
            for s in self.species
            for n in range(-max_index, max_index + 1)
        ]
        out.sort(key=mode_key)
        return out


def heisenberg_signature(rank: int) -> AlgebraSignature:
    if rank < 1:
        raise ValueError("heisenberg rank must be at least 1")
    species = tuple(Species(i, f"h{i + 1}") for i in range(rank))
    return AlgebraSignature("heisenberg", species, rank)


def weyl_signature() -> AlgebraSignature:
    return AlgebraSignature("weyl", (Species(0, "a"), Species(1, "a*")), 1)


class Word(NamedTuple):
    """A product of modes times K^k_power, in the written order."""

    modes: tuple[GeneratorMode, ...] = ()
    k_power: int = 0

    def key(self):
        return (
            len(self.modes),
            tuple((m.index, m.species.id) for m in self.modes),
            self.k_power,
        )

    def is_canonical(self) -> bool:
        return all(
            mode_key(a) <= mode_key(b)
            for a, b in zip(self.modes, self.modes[1:])
        )

    @classmethod
    def canonical(cls, modes: Iterable[GeneratorMode], k_power: int = 0) -> "Word":
        return cls(tuple(sorted(modes, key=mode_key)), k_power)

    def __str__(self) -> str:
        parts = [str(m) for m in self.modes]
        if self.k_power == 1:
            parts.append("K")
        elif self.k_power > 1:
            parts.append(f"K^{self.k_power}")
        return " ".join(parts) if parts else "1"


def _first_descent(modes: tuple[GeneratorMode, ...]) -> Optional[int]:
    for i in range(len(modes) - 1):
        if mode_key(modes[i]) > mode_key(modes[i + 1]):
            return i
    return None


def _coeff_str(c: Scalar) -> str:
    s = str(c)
    return f"({s})" if " " in s else s


class OperatorExpr:
    """Finite linear combination of words with cyclotomic coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[dict] = None):
        clean = {}
        for w, c in (terms or {}).items():
            if not isinstance(w, Word):
                raise TypeError("keys must be Word")
            if not c.is_zero():
                clean[w] = c
        self.terms = clean

    @classmethod
    def _make(cls, terms: dict) -> "OperatorExpr":
        e = object.__new__(cls)
        e.terms = terms
        return e

    @classmethod
    def zero(cls) -> "OperatorExpr":
        return cls._make({})

    @classmethod
    def identity(cls, coeff=None) -> "OperatorExpr":
        c = Scalar.one() if coeff is None else coeff
        return cls._make({Word(): c} if not c.is_zero() else {})

    @classmethod
    def from_word(cls, word: Word, coeff=None) -> "OperatorExpr":
        c = Scalar.one() if coeff is None else coeff
        return cls._make({word: c} if not c.is_zero() else {})

    @classmethod
    def from_mode(cls, mode: GeneratorMode, coeff=None) -> "OperatorExpr":
        return cls.from_word(Word((mode,)), coeff)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "OperatorExpr") -> "OperatorExpr":
        out = dict(self.terms)
        for w, c in other.terms.items():
            cur = out.get(w)
            s = c if cur is None else cur + c
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s
        return OperatorExpr._make(out)

    def __sub__(self, other: "OperatorExpr") -> "OperatorExpr":
        return self + (-other)

    def __neg__(self) -> "OperatorExpr":
        return OperatorExpr._make({w: -c for w, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, OperatorExpr):
            out: dict = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = Word(w1.modes + w2.modes, w1.k_power + w2.k_power)
                    c = c1 * c2
                    cur = out.get(w)
                    s = c if cur is None else cur + c
                    if s.is_zero():
                        out.pop(w, None)
                    else:
                        out[w] = s
            return OperatorExpr._make(out)
        if isinstance(other, (int, Fraction, Scalar)):
            if isinstance(other, Scalar) and other.is_zero():
                return OperatorExpr.zero()
            if not isinstance(other, Scalar) and other == 0:
                return OperatorExpr.zero()
            return OperatorExpr._make(
                {w: c * other for w, c in self.terms.items()}
            )
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.__mul__(other)
        return NotImplemented

    def __pow__(self, exponent: int) -> "OperatorExpr":
        if exponent < 0:
            raise ValueError("operator expressions have no inverses here")
        result = OperatorExpr.identity()
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, OperatorExpr):
            return NotImplemented
        if set(self.terms) != set(other.terms):
            return False
        return all(self.terms[w] == other.terms[w] for w in self.terms)

    __hash__ = None

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for w in sorted(self.terms, key=Word.key):
            c = _coeff_str(self.terms[w])
            if w.modes or w.k_power:
                pieces.append(f"{c} * {w}")
            else:
                pieces.append(c)
        return " + ".join(pieces)

    def __repr__(self) -> str:
        return f"OperatorExpr('{self}')"


def commutator_scalar(
    sig: AlgebraSignature, x: GeneratorMode, y: GeneratorMode
) -> Scalar:
    return sig.commutator(x, y)


def normal_form(expr: OperatorExpr, sig: AlgebraSignature) -> OperatorExpr:
    """Rewrite into the canonical sorted basis of words.

    Swapping an out-of-order adjacent pair costs a central correction on
    a strictly shorter word, so the rewriting terminates and the result
    is independent of the swap order.
    """
    out: dict = {}
    stack = list(expr.terms.items())
    while stack:
        word, coeff = stack.pop()
        i = _first_descent(word.modes)
        if i is None:
            cur = out.get(word)
            s = coeff if cur is None else cur + coeff
            if s.is_zero():
                out.pop(word, None)
            else:
                out[word] = s
            continue
        x, y = word.modes[i], word.modes[i + 1]
        swapped = word.modes[:i] + (y, x) + word.modes[i + 2 :]
        stack.append((Word(swapped, word.k_power), coeff))
        c = sig.commutator(x, y)
        if not c.is_zero():
            shorter = word.modes[:i] + word.modes[i + 2 :]
            stack.append((Word(shorter, word.k_power + 1), coeff * c))
    return OperatorExpr._make(out)


class Automorphism:
    """Index-preserving, species-linear symmetry of the mode algebra.

    matrix[t][s] is the coefficient of x_t(n) in the image of x_s(n).
    Construction checks both g^order = id and preservation of all
    commutators on a spanning sample of index pairs.
    """

    def __init__(
        self,
        sig: AlgebraSignature,
        order: int,
        matrix: Sequence[Sequence],
    ):
        if order < 1:
            raise ValueError("automorphism order must be positive")
        size = len(sig.species)
        rows = []
        for row in matrix:
            row = tuple(
                c if isinstance(c, Scalar) else Scalar.from_rational(c)
                for c in row
            )
            if len(row) != size:
                raise ValueError("species matrix must be square")
            rows.append(row)
        if len(rows) != size:
            raise ValueError("species matrix must be square")
        self.sig = sig
        self.order = order
        self.matrix = tuple(rows)
        self._powers: dict[int, tuple] = {0: _identity_matrix(size), 1: self.matrix}
        acc = _identity_matrix(size)
        for _ in range(order):
            acc = _mat_mul(acc, self.matrix)
        if acc != _identity_matrix(size):
            raise ValueError(f"matrix does not satisfy g^{order} = id")
        self._check_commutators()
        self._charges: Optional[tuple[int, ...]] = None

    def _check_commutators(self):
        sig = self.sig
        for m in range(-3, 4):
            for s in sig.species:
                for t in sig.species:
                    x = GeneratorMode(s, m)
                    y = GeneratorMode(t, -m)
                    expected = sig.commutator(x, y)
                    got = Scalar.zero()
                    for u in sig.species:
                        cu = self.matrix[u.id][s.id]
                        if cu.is_zero():
                            continue
                        for v in sig.species:
                            cv = self.matrix[v.id][t.id]
                            if cv.is_zero():
                                continue
                            rule = sig.commutator(
                                GeneratorMode(u, m), GeneratorMode(v, -m)
                            )
                            if not rule.is_zero():
                                got = got.addmul(cu * cv, rule)
                    if got != expected:
                        raise ValueError(
                            "matrix does not preserve commutators "
                            f"at [{x}, {y}]"
                        )

    def power_matrix(self, k: int) -> tuple:
        k %= self.order
        if k not in self._powers:
            self._powers[k] = _mat_mul(self.power_matrix(k - 1), self.matrix)
        return self._powers[k]

    def apply_to_mode(
        self, mode: GeneratorMode, k: int = 1
    ) -> list[tuple[GeneratorMode, Scalar]]:
        mat = self.power_matrix(k)
        s = mode.species.id
        out = []
        for t in self.sig.species:
            c = mat[t.id][s]
            if not c.is_zero():
                out.append((GeneratorMode(t, mode.index), c))
        return out

    @property
    def is_diagonal(self) -> bool:
        return all(
            self.matrix[i][j].is_zero()
            for i in range(len(self.matrix))
            for j in range(len(self.matrix))
            if i != j
        )

    def diagonal_charges(self) -> tuple[int, ...]:
        """Exponent e_s per species with g(x_s) = zeta_order^{e_s} x_s."""
        if not self.is_diagonal:
            raise ValueError("automorphism is not diagonal on species")
        if self._charges is None:
            charges = []
            for s in self.sig.species:
                entry = self.matrix[s.id][s.id]
                for e in range(self.order):
                    if entry == Scalar.zeta(self.order, e):
                        charges.append(e)
                        break
                else:
                    # impossible once g^order = id holds
                    raise ValueError("diagonal entry is not a root of unity")
            self._charges = tuple(charges)
        return self._charges

    def __repr__(self) -> str:
        rows = "; ".join(
            ", ".join(str(c) for c in row) for row in self.matrix
        )
        return f"Automorphism({self.sig.name}, order={self.order}, [{rows}])"


def _identity_matrix(size: int) -> tuple:
    return tuple(
        tuple(Scalar.one() if i == j else Scalar.zero() for j in range(size))
        for i in range(size)
    )


def _mat_mul(a: tuple, b: tuple) -> tuple:
    size = len(a)
    out = []
    for i in range(size):
        row = []
        for j in range(size):
            acc = Scalar.zero()
            for k in range(size):
                if not a[i][k].is_zero() and not b[k][j].is_zero():
                    acc = acc.addmul(a[i][k], b[k][j])
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def theta_automorphism(sig: AlgebraSignature) -> Automorphism:
    """The sign flip x(n) -> -x(n); order 2."""
    size = len(sig.species)
    matrix = [
        [-1 if i == j else 0 for j in range(size)] for i in range(size)
    ]
    return Automorphism(sig, 2, matrix)


def weyl_cyclic_automorphism(sig: AlgebraSignature, p: int) -> Automorphism:
    """a -> zeta_p a, a* -> zeta_p^{-1} a* on the Weyl pair."""
    if sig.kind != "weyl":
        raise ValueError("cyclic rescaling needs the weyl signature")
    z = Scalar.zeta(p)
    zero = Scalar.zero(p)
    return Automorphism(sig, p, [[z, zero], [zero, z ** (p - 1)]])


def permutation_automorphism(
    sig: AlgebraSignature, images: Sequence[int]
) -> Automorphism:
    """g(h_i) = h_{images[i]} with 0-based species positions."""
    size = len(sig.species)
    if sorted(images) != list(range(size)):
        raise ValueError("images must be a permutation of species positions")
    matrix = [[0] * size for _ in range(size)]
    for i, img in enumerate(images):
        matrix[img][i] = 1
    order = 1
    for start in range(size):
        length = 1
        j = images[start]
        while j != start:
            j = images[j]
            length += 1
        order = lcm(order, length)
    return Automorphism(sig, order, matrix)


def orthogonal_automorphism(
    sig: AlgebraSignature, matrix: Sequence[Sequence], order: int
) -> Automorphism:
    return Automorphism(sig, order, matrix)


def apply_automorphism(
    g: Automorphism, k: int, expr: OperatorExpr
) -> OperatorExpr:
    """Expand g^k across every word and return the normal form."""
    out: dict = {}
    for word, coeff in expr.terms.items():
        options = [g.apply_to_mode(m, k) for m in word.modes]
        for combo in itertools.product(*options):
            c = coeff
            for _, factor in combo:
                c = c * factor
            w = Word(tuple(m for m, _ in combo), word.k_power)
            cur = out.get(w)
            s = c if cur is None else cur + c
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s
    return normal_form(OperatorExpr._make(out), g.sig)


def average_projector(
    g: Automorphism, j: int, expr: OperatorExpr
) -> OperatorExpr:
    """(1/p) sum_k zeta^{-jk} g^k applied to expr."""
    p = g.order
    acc = OperatorExpr.zero()
    for k in range(p):
        weight = Scalar.zeta(p, (-j * k) % p) / p
        acc = acc + apply_automorphism(g, k, expr) * weight
    return acc


def word_charge(word: Word, g: Automorphism) -> Optional[int]:
    """Total eigen-exponent mod p for diagonal g; None when mixed."""
    if not g.is_diagonal:
        return None
    charges = g.diagonal_charges()
    total = sum(charges[m.species.id] for m in word.modes)
    return total % g.order


# -- text input -----------------------------------------------------------

_MODE_TOKEN_RE = re.compile(r"^([A-Za-z][A-Za-z0-9]*\*?)\((-?\d+)\)$")
_K_TOKEN_RE = re.compile(r"^K(?:\^(\d+))?$")


def _split_expr_terms(s: str) -> list[tuple[int, str]]:
    out = []
    sign = 1
    cur: list[str] = []
    depth = 0
    pending = False
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ValueError(f"unbalanced parentheses in {s!r}")
        if ch in "+-" and depth == 0:
            if any(c.strip() for c in cur):
                out.append((sign, "".join(cur)))
                sign = -1 if ch == "-" else 1
                cur = []
            else:
                sign *= -1 if ch == "-" else 1
            pending = True
        else:
            if ch.strip():
                pending = False
            cur.append(ch)
    if depth != 0:
        raise ValueError(f"unbalanced parentheses in {s!r}")
    if any(c.strip() for c in cur):
        out.append((sign, "".join(cur)))
    elif pending or not out:
        raise ValueError(f"dangling operator in {s!r}")
    return out


def _parse_term(
    term: str, sig: AlgebraSignature, order: int
) -> tuple[Word, Scalar]:
    term = term.strip()
    coeff_text = None
    if term.startswith("("):
        depth = 0
        for i, ch in enumerate(term):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
                if depth == 0:
                    coeff_text = term[1:i]
                    term = term[i + 1 :].lstrip()
                    break
        if term.startswith("*"):
            term = term[1:]
    tokens = [t for t in term.split() if t != "*"]
    modes = []
    k_power = 0
    for pos, tok in enumerate(tokens):
        if tok.endswith("*") and coeff_text is None and pos == 0:
            # a coefficient glued to its star, like "3/2*"
            tok = tok[:-1]
        m = _MODE_TOKEN_RE.match(tok)
        if m:
            modes.append(sig.mode(m.group(1), int(m.group(2))))
            continue
        k = _K_TOKEN_RE.match(tok)
        if k:
            k_power += int(k.group(1) or 1)
            continue
        if tok == "1" and pos > 0:
            continue
        if pos == 0 and coeff_text is None:
            coeff_text = tok
            continue
        raise ValueError(f"unrecognized token {tok!r} in term {term!r}")
    coeff = Scalar.parse(coeff_text, order) if coeff_text else Scalar.one(order)
    return Word(tuple(modes), k_power), coeff


def parse_operator_expr(
    text: str, sig: AlgebraSignature, order: int = 1
) -> OperatorExpr:
    """Parse expression text like ``(1 + z) * a(-1) a*(0) + 2 * h1(3)``.

    Coefficients follow the scalar syntax (parenthesized when they
    contain several terms); modes multiply left to right; ``K^m`` tags
    central powers; a bare coefficient is a multiple of the empty word.
    """
    s = text.strip()
    if not s or s == "0":
        return OperatorExpr.zero()
    acc: dict = {}
    for sign, chunk in _split_expr_terms(s):
        word, coeff = _parse_term(chunk, sig, order)
        if sign < 0:
            coeff = -coeff
        cur = acc.get(word)
        total = coeff if cur is None else cur + coeff
        if total.is_zero():
            acc.pop(word, None)
        else:
            acc[word] = total
    return OperatorExpr._make(acc)
