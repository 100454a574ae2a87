"""Extremal projector of U_q(gl(n)) acting on Verma vectors.

The projector is the ordered product ``p_12 (p_13 p_23) ... (p_1n ... p_{n-1,n})``
with

    p_ij = sum_r (-1)^r / [r]! * phi_ij,r * e_ji^r e_ij^r,
    phi_ij,r = q^{-(j-i-1) r} / prod_{s=1..r} [e_ii - e_jj + j - i + s].

On a vector the raising power acts first, so each series stops as soon as
``e_ij^r`` kills the running vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .pbw import AlgebraContext, AlgebraElement, _acc, involution
from .qfield import (AffineExpr, CartanRat, QRat, VanishingDenominator, qbracket,
                     qbracket_sym, qint_factorial)
from .verma import VermaVector, _lower, _raise, act, act_gen, highest_vector, monomials_up_to

__all__ = [
    "ProjectorReport",
    "ProjectorSpec",
    "apply_projector",
    "projector_element",
    "projector_factor_terms",
    "verify_projector_properties",
]


@dataclass(frozen=True)
class ProjectorSpec:
    """Projector of the gl(n) block sitting at rows ``offset+1 .. offset+n`` of gl(N)."""

    ctx: AlgebraContext
    n: int
    offset: int = 0

    def __post_init__(self):
        if self.n < 1 or self.offset < 0 or self.offset + self.n > self.ctx.N:
            raise ValueError(f"gl({self.n}) at offset {self.offset} does not fit in gl({self.ctx.N})")

    @property
    def factors(self) -> tuple[tuple[int, int], ...]:
        o = self.offset
        return tuple((i + o, j + o) for j in range(2, self.n + 1) for i in range(1, j))

    def simple_raising(self) -> list[int]:
        o = self.offset
        return [self.ctx.gen_id(i + o, i + o + 1) for i in range(1, self.n)]

    def simple_lowering(self) -> list[int]:
        o = self.offset
        return [self.ctx.gen_id(i + o + 1, i + o) for i in range(1, self.n)]


def _phi_value(i: int, j: int, r: int, w: tuple[int, ...]) -> QRat:
    base = w[i - 1] - w[j - 1] + j - i
    den = QRat.from_int(1)
    for s in range(1, r + 1):
        b = qbracket(base + s)
        if b.is_zero():
            raise VanishingDenominator(
                f"[e_{i}{i} - e_{j}{j} + {j - i + s}] vanishes at weight {w}")
        den = den * b
    return CartanRat.q_power(-(j - i - 1) * r) / den


_factor_cache: dict = {}


def _apply_factor(ctx: AlgebraContext, i: int, j: int, lam, mono) -> dict:
    key = (ctx.N, i, j, lam, mono)
    hit = _factor_cache.get(key)
    if hit is not None:
        return hit
    lam_w = ctx.mono_weight(mono, False)
    w = tuple(a + b for a, b in zip(lam, lam_w))
    up, down = ctx.gen_id(i, j), ctx.gen_id(j, i)
    out = {mono: QRat.from_int(1)}
    cur = {mono: QRat.from_int(1)}
    r = 0
    cap = ctx.mono_height(mono)
    fact = QRat.from_int(1)
    while True:
        r += 1
        if r > cap:
            break
        cur = _raise(ctx, up, cur, lam)
        if not cur:
            break
        fact = fact * qbracket(r)
        coeff = _phi_value(i, j, r, w) / fact
        if r % 2:
            coeff = -coeff
        low = [0] * ctx.M
        low[down] = r
        for m, c in _lower(ctx, tuple(low), cur).items():
            _acc(out, m, coeff * c)
    if len(_factor_cache) > 100_000:
        _factor_cache.clear()
    _factor_cache[key] = out
    return out


def apply_factor(spec: ProjectorSpec, i: int, j: int, v: VermaVector) -> VermaVector:
    out: dict = {}
    for m, c in v.terms.items():
        for m2, c2 in _apply_factor(spec.ctx, i, j, v.lam, m).items():
            _acc(out, m2, c * c2)
    return VermaVector(spec.ctx, v.lam, out)


def apply_projector(spec: ProjectorSpec, v: VermaVector) -> VermaVector:
    """``p v``; the rightmost factor of the ordered product acts first."""
    for i, j in reversed(spec.factors):
        v = apply_factor(spec, i, j, v)
        if v.is_zero():
            break
    return v


def projector_factor_terms(spec: ProjectorSpec, i: int, j: int, rmax: int) -> AlgebraElement:
    """Truncation ``sum_{r <= rmax}`` of ``p_ij`` with symbolic Cartan coefficients."""
    ctx = spec.ctx
    N = ctx.N
    up, down = ctx.gen_id(i, j), ctx.gen_id(j, i)
    coeffs = [0] * N
    coeffs[i - 1], coeffs[j - 1] = 1, -1
    total = ctx.one()
    for r in range(1, rmax + 1):
        den = CartanRat.from_int(1, N)
        for s in range(1, r + 1):
            den = den * qbracket_sym(AffineExpr(tuple(coeffs), j - i + s))
        phi = CartanRat.q_power(-(j - i - 1) * r, N) / den
        coeff = phi / qint_factorial(r)
        if r % 2:
            coeff = -coeff
        low = [0] * ctx.M
        low[down % ctx.M] = r
        high = [0] * ctx.M
        high[up - ctx.M] = r
        # phi sits left of the weight-zero word e_ji^r e_ij^r
        term = ctx.element({((tuple(low)), ctx.zero_mono): ctx.cartan(1)})
        term = ctx.scalar(coeff) * term * ctx.element({(ctx.zero_mono, tuple(high)): ctx.cartan(1)})
        total = total + term
    return total


def projector_element(spec: ProjectorSpec, rmax: int) -> AlgebraElement:
    out = spec.ctx.one()
    for i, j in spec.factors:
        out = out * projector_factor_terms(spec, i, j, rmax)
    return out


@dataclass
class ProjectorReport:
    checks: int = 0
    failures: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and not self.errors

    def record(self, ok: bool, what: str, weight, mono) -> None:
        self.checks += 1
        if not ok:
            self.failures.append({"check": what, "weight": list(weight), "vector": list(mono)})


def verify_projector_properties(spec: ProjectorSpec, weights, maxdeg: int,
                                q_modes=("real", "circular")) -> ProjectorReport:
    """Check annihilation, idempotence, fixed points and involution invariance."""
    ctx = spec.ctx
    report = ProjectorReport()
    monos = monomials_up_to(ctx, maxdeg)
    ups, downs = spec.simple_raising(), spec.simple_lowering()
    # truncation is exact once rmax reaches the largest root height of a test vector
    rmax = max(1, (spec.n - 1) * maxdeg)
    stars = {}
    for mode in q_modes:
        # (p_12 p_13 ...)^star acts as p_12^star first
        stars[mode] = [involution(ctx, projector_factor_terms(spec, i, j, rmax), "compact", mode)
                       for i, j in spec.factors]
    for lam in weights:
        lam = tuple(lam)
        for mono in monos:
            try:
                w = VermaVector.monomial(ctx, lam, mono)
                pw = apply_projector(spec, w)
                for g in ups:
                    report.record(act_gen(ctx, g, pw).is_zero(), "annihilation", lam, mono)
                for g in downs:
                    report.record(apply_projector(spec, act_gen(ctx, g, w)).is_zero(),
                                  "right-annihilation", lam, mono)
                report.record(apply_projector(spec, pw) == pw, "idempotence", lam, mono)
                highest = all(act_gen(ctx, g, w).is_zero() for g in ups)
                if highest:
                    report.record(pw == w, "fixed-point", lam, mono)
                for mode, factors in stars.items():
                    u = w
                    for f in factors:
                        u = act(ctx, f, u)
                    report.record(u == pw, f"involution-{mode}", lam, mono)
            except VanishingDenominator as exc:
                report.errors.append({"check": "VanishingDenominator", "weight": list(lam),
                                      "vector": list(mono), "detail": str(exc)})
    return report
