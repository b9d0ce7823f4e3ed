"""Metric layer of the hyperbolic upper half-space {xn > 0}.

The metric is g_ij = delta_ij / xn^2.  Everything curved is *computed*, not
hard-coded: Christoffel symbols come with a cross-check against the standard
metric formula, and the Ricci tensor is contracted from them, so the facts
Ric = -(n-1) g and r = -n(n-1) are theorems of the code rather than inputs.

Also hosts the parameter record for the soliton field family, the flat
(index-lowering) map, the Lie derivative of the metric, the soliton residual,
and the numeric hyperbolic distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import BoundaryPoint
from .exterior import KForm, VectorField
from .ratlaurent import LaurentPoly


class SymTensor2:
    """Symmetric (0,2)-tensor; only keys (i, j) with i <= j are stored."""

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms=None):
        clean: dict[tuple[int, int], LaurentPoly] = {}
        for (i, j), poly in (terms or {}).items():
            if not (1 <= i <= j <= n):
                raise ValueError(f"key ({i}, {j}) not ordered inside 1..{n}")
            if poly.n != n:
                raise ValueError("coefficient arity differs from tensor dimension")
            if poly:
                clean[(i, j)] = clean[(i, j)] + poly if (i, j) in clean else poly
                if not clean[(i, j)]:
                    del clean[(i, j)]
        self.n = n
        self._terms = clean

    def get(self, i: int, j: int) -> LaurentPoly:
        if i > j:
            i, j = j, i
        return self._terms.get((i, j), LaurentPoly.zero(self.n))

    def items(self):
        return iter(sorted(self._terms.items()))

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymTensor2):
            return NotImplemented
        return (self.n, self._terms) == (other.n, other._terms)

    def __add__(self, other: "SymTensor2") -> "SymTensor2":
        if self.n != other.n:
            raise ValueError("mixed dimensions")
        out = dict(self._terms)
        for key, poly in other._terms.items():
            out[key] = out[key] + poly if key in out else poly
        return SymTensor2(self.n, out)

    def __neg__(self) -> "SymTensor2":
        return SymTensor2(self.n, {k: -p for k, p in self._terms.items()})

    def __sub__(self, other: "SymTensor2") -> "SymTensor2":
        return self + (-other)

    def __mul__(self, scale) -> "SymTensor2":
        return SymTensor2(self.n, {k: p * scale for k, p in self._terms.items()})

    __rmul__ = __mul__

    def text(self) -> str:
        if not self._terms:
            return "0"
        return "; ".join(f"[{i},{j}] {p.text()}" for (i, j), p in sorted(self._terms.items()))

    def __repr__(self) -> str:
        return f"SymTensor2({self.n}, {self.text()!r})"


@dataclass(frozen=True)
class SolitonParams:
    """Parameters (a_1..a_{n-1}, b, c_1..c_{n-1}, rho, lam) of a soliton field.

    ``lam`` is optional: when omitted, the soliton constant forced by the
    trace identities, (n-1)(n*rho - 1), is used.  A parameter set with all
    a_k = 0 and b = 0 gives a constant (possibly zero) field; it is accepted
    but flagged ``degenerate`` so callers can report it instead of silently
    treating it as a generic family member.
    """

    n: int
    a: tuple
    b: Fraction
    c: tuple
    rho: Fraction = Fraction(1)
    lam: Fraction | None = None

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"dimension must be >= 2, got {self.n}")
        object.__setattr__(self, "a", tuple(Fraction(x) for x in self.a))
        object.__setattr__(self, "c", tuple(Fraction(x) for x in self.c))
        object.__setattr__(self, "b", Fraction(self.b))
        object.__setattr__(self, "rho", Fraction(self.rho))
        if self.lam is not None:
            object.__setattr__(self, "lam", Fraction(self.lam))
        if len(self.a) != self.n - 1 or len(self.c) != self.n - 1:
            raise ValueError(f"a and c must have length n-1 = {self.n - 1}")
        if self.rho == 0:
            raise ValueError("rho must be nonzero")

    @property
    def degenerate(self) -> bool:
        """True when the field is constant (all a_k and b vanish)."""
        return self.b == 0 and all(x == 0 for x in self.a)

    def soliton_constant(self) -> Fraction:
        return self.lam if self.lam is not None else soliton_lambda(self.n, self.rho)

    def text(self) -> str:
        return (
            f"n={self.n} a=({','.join(map(str, self.a))}) b={self.b} "
            f"c=({','.join(map(str, self.c))}) rho={self.rho}"
        )


def random_params(rng, n: int, *, allow_degenerate: bool = False) -> SolitonParams:
    """Draw small random rational parameters, deterministic in ``rng``."""

    def q() -> Fraction:
        return Fraction(rng.randint(-4, 4), rng.randint(1, 4))

    while True:
        a = tuple(q() for _ in range(n - 1))
        b = q()
        c = tuple(q() for _ in range(n - 1))
        if allow_degenerate or any(x != 0 for x in a) or b != 0:
            break
    rho = q()
    while rho == 0:
        rho = q()
    return SolitonParams(n=n, a=a, b=b, c=c, rho=rho)


def metric(n: int) -> SymTensor2:
    """Diagonal metric with entries xn^-2."""
    if n < 2:
        raise ValueError(f"dimension must be >= 2, got {n}")
    entry = LaurentPoly.monomial(n, (0,) * (n - 1) + (-2,))
    return SymTensor2(n, {(i, i): entry for i in range(1, n + 1)})


def inverse_metric(n: int) -> SymTensor2:
    entry = LaurentPoly.monomial(n, (0,) * (n - 1) + (2,))
    return SymTensor2(n, {(i, i): entry for i in range(1, n + 1)})


def _christoffel_closed(n: int) -> dict:
    inv_xn = LaurentPoly.monomial(n, (0,) * (n - 1) + (-1,))
    out = {}
    for k in range(1, n + 1):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                value = int(i == j and k == n) - int(i == k and j == n) - int(j == k and i == n)
                if value:
                    out[(k, i, j)] = value * inv_xn
    return out


def _christoffel_from_metric(n: int) -> dict:
    g = metric(n)
    ginv = inverse_metric(n)
    half = Fraction(1, 2)
    out = {}
    for k in range(1, n + 1):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                total = LaurentPoly.zero(n)
                for l in range(1, n + 1):
                    gkl = ginv.get(k, l)
                    if not gkl:
                        continue
                    total = total + half * gkl * (
                        g.get(j, l).deriv(i) + g.get(i, l).deriv(j) - g.get(i, j).deriv(l)
                    )
                if total:
                    out[(k, i, j)] = total
    return out


def christoffel(n: int) -> dict:
    """Levi-Civita symbols as a sparse map (k, i, j) -> Gamma^k_ij.

    The closed form (delta_ij delta_kn - delta_ik delta_jn - delta_jk
    delta_in)/xn is validated against the standard metric formula
    (1/2) g^kl (d_i g_jl + d_j g_il - d_l g_ij) on every call.
    """
    closed = _christoffel_closed(n)
    derived = _christoffel_from_metric(n)
    if closed != derived:
        raise AssertionError("closed-form Christoffel symbols disagree with the metric formula")
    return closed


def flat(field: VectorField) -> KForm:
    """Index lowering: the dual 1-form w_i = X^i / xn^2."""
    n = field.n
    weight = LaurentPoly.monomial(n, (0,) * (n - 1) + (-2,))
    return KForm(n, 1, {(i,): field.component(i) * weight for i in range(1, n + 1) if field.component(i)})


def lie_derivative_metric(field: VectorField) -> SymTensor2:
    """(L_X g)_ij = X^k d_k g_ij + g_kj d_i X^k + g_ik d_j X^k."""
    n = field.n
    g = metric(n)
    out = {}
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            total = LaurentPoly.zero(n)
            for k in range(1, n + 1):
                total = total + field.component(k) * g.get(i, j).deriv(k)
                total = total + g.get(k, j) * field.component(k).deriv(i)
                total = total + g.get(i, k) * field.component(k).deriv(j)
            if total:
                out[(i, j)] = total
    return SymTensor2(n, out)


def ricci(n: int) -> SymTensor2:
    """Ricci tensor contracted from the Christoffel symbols."""
    gam = christoffel(n)
    zero = LaurentPoly.zero(n)

    def G(k, i, j):
        return gam.get((k, i, j), zero)

    out = {}
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            total = LaurentPoly.zero(n)
            for k in range(1, n + 1):
                total = total + G(k, i, j).deriv(k) - G(k, k, j).deriv(i)
                for l in range(1, n + 1):
                    total = total + G(k, k, l) * G(l, i, j) - G(k, i, l) * G(l, k, j)
            if total:
                out[(i, j)] = total
    return SymTensor2(n, out)


def scalar_curvature(n: int) -> LaurentPoly:
    """r = g^ij R_ij; equals the constant -n(n-1) for the half-space."""
    ginv = inverse_metric(n)
    ric = ricci(n)
    total = LaurentPoly.zero(n)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            total = total + ginv.get(i, j) * ric.get(i, j)
    return total


def soliton_lambda(n: int, rho) -> Fraction:
    """Soliton constant forced by L_X g = 0, Ric = -(n-1)g, r = -n(n-1)."""
    rho = Fraction(rho)
    if rho == 0:
        raise ValueError("rho must be nonzero")
    return Fraction(n - 1) * (n * rho - 1)


def rb_residual(field: VectorField, params: SolitonParams) -> SymTensor2:
    """Defect of the soliton equation: L_X g + 2 Ric - 2(lam + rho r) g."""
    n = field.n
    lam = params.soliton_constant()
    r = scalar_curvature(n)
    factor = LaurentPoly.const(n, 2 * lam) + LaurentPoly.const(n, 2) * params.rho * r
    return lie_derivative_metric(field) + 2 * ricci(n) - metric(n) * factor


def hyp_distance(p: Sequence[float], q: Sequence[float]) -> float:
    """Hyperbolic distance arcosh(1 + |p-q|^2 / (2 p_n q_n))."""
    if len(p) != len(q):
        raise ValueError("points of different dimensions")
    pn, qn = p[-1], q[-1]
    if pn <= 0 or qn <= 0:
        raise BoundaryPoint("points must have positive last coordinate")
    sq = sum((a - b) ** 2 for a, b in zip(p, q))
    return math.acosh(1.0 + sq / (2.0 * pn * qn))
