"""Cyclic twists, diagonal-style embeddings and charge decompositions.

For a finite-order automorphism g, the family W o g^i carries the data
of the orbit of a module W.  The embeddings

    delta_i(w) = (w, zeta^i w, ..., zeta^{i(p-1)} w)

into the direct sum of the twisted copies interact with the charge
decomposition of the algebra: a charge-j element maps the image of
delta_i into the image of delta_{i+j}.  :func:`verify_delta_lemma`
checks that identity on random samples through the actual twisted
actions, with exact arithmetic and no appeal to the derivation.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .modes import (
    Automorphism,
    GeneratorMode,
    OperatorExpr,
    Word,
    average_projector,
    word_charge,
)
from .modules import (
    BasisMonomial,
    ModuleHandle,
    ModuleVector,
    act_expr,
    build_module,
    filtration_basis,
)
from .scalars import Scalar


class CyclicAction:
    """An automorphism g together with p = ord(g) and a primitive
    p-th root of unity fixing the eigenvalue bookkeeping."""

    __slots__ = ("g", "p", "zeta")

    def __init__(self, g: Automorphism):
        self.g = g
        self.p = g.order
        self.zeta = Scalar.zeta(self.p)

    def twisted_handles(self, base: ModuleHandle) -> tuple[ModuleHandle, ...]:
        if base.twist is not None:
            raise ValueError("base handle must be untwisted")
        return tuple(
            build_module(base.sig, base.whittaker, twist=(self.g, r))
            for r in range(self.p)
        )

    def __repr__(self) -> str:
        return f"CyclicAction(p={self.p}, {self.g!r})"


class DirectSumVector:
    """A vector in the direct sum of the p twisted copies of a module."""

    __slots__ = ("handles", "components")

    def __init__(self, handles, components):
        handles = tuple(handles)
        components = tuple(components)
        if len(handles) != len(components):
            raise ValueError("one component per twisted handle")
        self.handles = handles
        self.components = components

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __add__(self, other: "DirectSumVector") -> "DirectSumVector":
        return DirectSumVector(
            self.handles,
            tuple(a + b for a, b in zip(self.components, other.components)),
        )

    def __sub__(self, other: "DirectSumVector") -> "DirectSumVector":
        return DirectSumVector(
            self.handles,
            tuple(a - b for a, b in zip(self.components, other.components)),
        )

    def __neg__(self) -> "DirectSumVector":
        return DirectSumVector(self.handles, tuple(-c for c in self.components))

    def __mul__(self, other):
        return DirectSumVector(
            self.handles, tuple(c * other for c in self.components)
        )

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, DirectSumVector):
            return NotImplemented
        return self.components == other.components

    __hash__ = None

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.components) + ")"


def delta_embed(
    act: CyclicAction, base: ModuleHandle, w: ModuleVector, i: int
) -> DirectSumVector:
    """delta_i(w): component r carries zeta^{i r} w in W o g^r."""
    handles = act.twisted_handles(base)
    comps = tuple(
        w * Scalar.zeta(act.p, (i * r) % act.p) for r in range(act.p)
    )
    return DirectSumVector(handles, comps)


def delta_extract(
    act: CyclicAction, v: DirectSumVector, i: int
) -> Optional[ModuleVector]:
    """Invert delta_i where possible: exact componentwise ratio check."""
    w = v.components[0]
    for r in range(1, act.p):
        if v.components[r] != w * Scalar.zeta(act.p, (i * r) % act.p):
            return None
    return w


def act_on_sum(e: OperatorExpr, v: DirectSumVector) -> DirectSumVector:
    """Apply an expression componentwise through each twisted handle."""
    return DirectSumVector(
        v.handles,
        tuple(act_expr(e, c, h) for c, h in zip(v.components, v.handles)),
    )


def act_mode_on_sum(x: GeneratorMode, v: DirectSumVector) -> DirectSumVector:
    return act_on_sum(OperatorExpr.from_mode(x), v)


@dataclass
class DeltaLemmaReport:
    p: int
    i: int
    j: int
    checked: int = 0
    passed: bool = True
    failures: list = field(default_factory=list)


def verify_delta_lemma(
    act: CyclicAction,
    base: ModuleHandle,
    i: int,
    j: int,
    samples: int = 30,
    seed: int = 0,
    index_bound: int = 2,
    max_word_len: int = 2,
) -> DeltaLemmaReport:
    """Sample charge-j elements and check they shift delta_i to delta_{i+j}."""
    sig = base.sig
    rng = random.Random(seed)
    report = DeltaLemmaReport(act.p, i, j)
    low_basis = filtration_basis(base, Fraction(1))
    for _ in range(samples):
        projected = None
        for _ in range(60):
            modes = tuple(
                GeneratorMode(
                    rng.choice(sig.species),
                    rng.randint(-index_bound, index_bound),
                )
                for _ in range(rng.randint(1, max_word_len))
            )
            candidate = average_projector(
                act.g, j % act.p, OperatorExpr.from_word(Word(modes))
            )
            if not candidate.is_zero():
                projected = candidate
                break
        if projected is None:
            report.passed = False
            report.failures.append("could not sample a charge component")
            continue
        w = ModuleVector(
            {
                rng.choice(low_basis): Scalar.from_rational(rng.randint(1, 5)),
                rng.choice(low_basis): Scalar.from_rational(rng.randint(0, 3)),
            }
        )
        image = act_on_sum(projected, delta_embed(act, base, w, i))
        report.checked += 1
        if delta_extract(act, image, (i + j) % act.p) is None:
            report.passed = False
            report.failures.append(
                f"charge-{j} element {projected} left the image of "
                f"delta_{(i + j) % act.p}"
            )
    return report


def module_automorphism_image(
    g: Automorphism, k: int, v: ModuleVector
) -> ModuleVector:
    """The induced map on a module with invariant Whittaker data:
    rewrite each creation mode through the species matrix of g^k."""
    out: dict = {}
    for mono, coeff in v.terms.items():
        options = [g.apply_to_mode(m, k) for m in mono.modes]
        for combo in itertools.product(*options):
            c = coeff
            for mode, f in combo:
                if not g.sig.is_creation(mode):
                    raise ValueError(
                        "automorphism image leaves the creation monomials"
                    )
                c = c * f
            mono2 = BasisMonomial.of(m for m, _ in combo)
            cur = out.get(mono2)
            s = c if cur is None else cur + c
            if s.is_zero():
                out.pop(mono2, None)
            else:
                out[mono2] = s
    return ModuleVector._make(out)


@dataclass
class ChargeDecomposition:
    """Partition of a filtration layer by charge.

    For diagonal g the components list basis monomials; otherwise they
    list projector images.  The grading statement V^i W^j <= W^{i+j}
    is meaningful for modules whose Whittaker function is zero.
    """

    p: int
    max_degree: Fraction
    diagonal: bool
    monomial_components: dict = field(default_factory=dict)
    projected_components: dict = field(default_factory=dict)

    def charges(self) -> list[int]:
        src = (
            self.monomial_components
            if self.diagonal
            else self.projected_components
        )
        return sorted(j for j, items in src.items() if items)


def monomial_charge(mono: BasisMonomial, g: Automorphism) -> Optional[int]:
    return word_charge(Word(mono.modes), g)


def charge_decompose(
    m: ModuleHandle, act: CyclicAction, max_degree
) -> ChargeDecomposition:
    max_degree = Fraction(max_degree)
    basis = filtration_basis(m, max_degree)
    g = act.g
    if g.is_diagonal:
        components: dict = {j: [] for j in range(act.p)}
        for mono in basis:
            components[monomial_charge(mono, g)].append(mono)
        return ChargeDecomposition(
            act.p, max_degree, True, monomial_components=components
        )
    projected: dict = {j: [] for j in range(act.p)}
    for j in range(act.p):
        for mono in basis:
            v = ModuleVector({mono: Scalar.one()})
            acc = ModuleVector.zero()
            for k in range(act.p):
                weight = Scalar.zeta(act.p, (-j * k) % act.p) / act.p
                acc = acc + module_automorphism_image(g, k, v) * weight
            if not acc.is_zero():
                projected[j].append(acc)
    return ChargeDecomposition(
        act.p, max_degree, False, projected_components=projected
    )
