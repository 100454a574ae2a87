"""Verma modules over numeric integral highest weights.

Vectors are finite sums of PBW lowering monomials applied to the highest
vector ``v``; coefficients are univariate :class:`QRat` values.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .pbw import AlgebraContext, AlgebraElement, _acc, involution
from .qfield import CartanRat, QRat

__all__ = [
    "HighestWeight",
    "VermaVector",
    "act",
    "contravariant_form",
    "form",
    "generic_weight",
    "highest_vector",
    "is_generic",
    "weight_space_basis",
]


@dataclass(frozen=True)
class HighestWeight:
    lam: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "lam", tuple(int(x) for x in self.lam))

    @property
    def N(self) -> int:
        return len(self.lam)

    def is_dominant(self) -> bool:
        return all(a >= b for a, b in zip(self.lam, self.lam[1:]))


def _hw(lam) -> tuple[int, ...]:
    return lam.lam if isinstance(lam, HighestWeight) else tuple(int(x) for x in lam)


class VermaVector:
    """Element of the Verma module ``M(lam)``."""

    __slots__ = ("ctx", "lam", "terms")

    def __init__(self, ctx: AlgebraContext, lam, terms: dict | None = None):
        self.ctx = ctx
        self.lam = _hw(lam)
        if len(self.lam) != ctx.N:
            raise ValueError(f"weight {self.lam} has wrong length for N={ctx.N}")
        self.terms = {m: c for m, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def monomial(cls, ctx, lam, mono: Sequence[int], coeff=1) -> "VermaVector":
        c = coeff if isinstance(coeff, CartanRat) else QRat.from_int(coeff)
        return cls(ctx, lam, {tuple(mono): c})

    def _same(self, other: "VermaVector"):
        if self.ctx is not other.ctx or self.lam != other.lam:
            raise ValueError("vectors live in different modules")

    def __add__(self, other):
        self._same(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            _acc(out, m, c)
        return VermaVector(self.ctx, self.lam, out)

    def __neg__(self):
        return VermaVector(self.ctx, self.lam, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "VermaVector":
        return VermaVector(self.ctx, self.lam, {m: c * x for m, x in self.terms.items()})

    def __rmul__(self, c):
        if isinstance(c, (int, CartanRat)):
            return self.scale(c)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, VermaVector):
            return NotImplemented
        return self.ctx is other.ctx and self.lam == other.lam and self.terms == other.terms

    def __hash__(self):
        return hash((self.lam, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, mono: Sequence[int] | None = None) -> QRat:
        mono = tuple(mono) if mono is not None else self.ctx.zero_mono
        return self.terms.get(mono, QRat.from_int(0))

    def weight_of(self, mono) -> tuple[int, ...]:
        w = self.ctx.mono_weight(mono, False)
        return tuple(a + b for a, b in zip(self.lam, w))

    def weights(self) -> set[tuple[int, ...]]:
        return {self.weight_of(m) for m in self.terms}

    def weight(self) -> tuple[int, ...]:
        ws = self.weights()
        if len(ws) != 1:
            raise ValueError("vector is not weight homogeneous")
        return ws.pop()

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items()):
            word = "*".join(
                (self.ctx.gen_name(p) if e == 1 else f"{self.ctx.gen_name(p)}^{e}")
                for p, e in enumerate(m) if e) or "1"
            parts.append(f"{c.to_string()}*{word}")
        return " + ".join(parts) + " v"


def highest_vector(ctx: AlgebraContext, lam) -> VermaVector:
    return VermaVector.monomial(ctx, lam, ctx.zero_mono)


_spec_cache: dict = {}


def _spec(C: CartanRat, w: tuple[int, ...]) -> QRat:
    if C.rank == 0:
        return C
    key = (C, w)
    hit = _spec_cache.get(key)
    if hit is None:
        if len(_spec_cache) > 200_000:
            _spec_cache.clear()
        hit = C.specialize(w)
        _spec_cache[key] = hit
    return hit


def _raise(ctx: AlgebraContext, g: int, terms: dict, lam) -> dict:
    out: dict = {}
    zero = ctx.zero_mono
    for m, c in terms.items():
        for (L, R), C in ctx._push(g, m).items():
            if R == zero:
                _acc(out, L, _spec(C, lam) * c)
    return out


def _lower(ctx: AlgebraContext, low: tuple[int, ...], terms: dict) -> dict:
    if not any(low):
        return terms
    out: dict = {}
    for m, c in terms.items():
        for m2, c2 in ctx._mono_mul(low, m, False).items():
            _acc(out, m2, c2 * c)
    return out


def act(ctx: AlgebraContext, g: AlgebraElement, v: VermaVector) -> VermaVector:
    """Left action of an algebra element on a Verma vector."""
    if g.ctx is not ctx or v.ctx is not ctx:
        raise ValueError("context mismatch")
    lam = v.lam
    out: dict = {}
    for (L, R), C in g.terms.items():
        terms = v.terms
        for gen in reversed(ctx.mono_word(R, True)):
            terms = _raise(ctx, gen, terms, lam)
            if not terms:
                break
        if not terms:
            continue
        scaled = {}
        for m, c in terms.items():
            val = _spec(C, v.weight_of(m))
            if not val.is_zero():
                scaled[m] = val * c
        for m, c in _lower(ctx, L, scaled).items():
            _acc(out, m, c)
    return VermaVector(ctx, lam, out)


def act_gen(ctx: AlgebraContext, g: int, v: VermaVector) -> VermaVector:
    """Action of a single root-vector generator id, without building elements."""
    if g >= ctx.M:
        return VermaVector(ctx, v.lam, _raise(ctx, g, v.terms, v.lam))
    m = [0] * ctx.M
    m[g] = 1
    return VermaVector(ctx, v.lam, _lower(ctx, tuple(m), v.terms))


def _as_element(ctx, u) -> AlgebraElement:
    if isinstance(u, AlgebraElement):
        return u
    return ctx.monomial(low=tuple(u))


def contravariant_form(ctx: AlgebraContext, u1, u2, lam, kind: str = "compact",
                       q_mode: str = "circular", n: int | None = None) -> QRat:
    """Coefficient of ``v`` in ``involution(u2) * u1 * v``."""
    x1 = _as_element(ctx, u1)
    x2 = _as_element(ctx, u2)
    vec = act(ctx, x1, highest_vector(ctx, lam))
    return act(ctx, involution(ctx, x2, kind, q_mode, n), vec).coefficient()


def form(ctx: AlgebraContext, w1: VermaVector, w2: VermaVector, kind: str = "compact",
         q_mode: str = "circular", n: int | None = None) -> QRat:
    """Sesquilinear extension of :func:`contravariant_form` to Verma vectors."""
    w1._same(w2)
    conj = (lambda c: c.conjugate_circular()) if q_mode == "circular" else (lambda c: c)
    total = QRat.from_int(0)
    for m2, c2 in w2.terms.items():
        g = involution(ctx, ctx.monomial(low=m2), kind, q_mode, n)
        total = total + conj(c2) * act(ctx, g, w1).coefficient()
    return total


def weight_space_basis(ctx: AlgebraContext, lam, mu, maxdeg: int) -> list[tuple[int, ...]]:
    """Lowering monomials of weight ``mu - lam`` and degree at most ``maxdeg``."""
    lam, mu = _hw(lam), _hw(mu)
    target = tuple(b - a for a, b in zip(lam, mu))
    if sum(target) != 0:
        return []
    out = [m for m in _monomials(ctx, maxdeg) if ctx.mono_weight(m, False) == target]
    return sorted(out, key=lambda m: (sum(m), tuple(-x for x in m)))


def _monomials(ctx: AlgebraContext, maxdeg: int) -> Iterable[tuple[int, ...]]:
    for combo in itertools.product(range(maxdeg + 1), repeat=ctx.M):
        if sum(combo) <= maxdeg:
            yield combo


def monomials_up_to(ctx: AlgebraContext, maxdeg: int) -> list[tuple[int, ...]]:
    return sorted(_monomials(ctx, maxdeg), key=lambda m: (sum(m), tuple(-x for x in m)))


def is_generic(lam, cushion: int = 12) -> bool:
    """No ``[phi_ij + s]`` with ``|s| <= cushion`` vanishes at ``lam``."""
    lam = _hw(lam)
    N = len(lam)
    return all(abs(lam[i] - lam[j] + j - i) > cushion
               for i in range(N) for j in range(i + 1, N))


def generic_weight(N: int, rng: random.Random, cushion: int = 12, spread: int = 40) -> tuple[int, ...]:
    """Sample an integral weight satisfying :func:`is_generic`."""
    while True:
        lam = tuple(rng.randint(-spread, spread) for _ in range(N))
        if is_generic(lam, cushion):
            return lam
