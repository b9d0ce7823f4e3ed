"""Differential forms with exact Laurent-polynomial coefficients.

A grade-k form is stored sparsely: strictly increasing index tuples
(i1 < ... < ik, 1-based) map to nonzero coefficient polynomials.  Grade-0
forms use the empty tuple.  Tuples longer than the ambient dimension cannot
be strictly increasing inside 1..n, so forms of grade > n are automatically
the zero form, matching the usual exterior-algebra convention.

Provides wedge products, the exterior derivative, interior products and the
Lie derivative, the latter computed by the homotopy (Cartan) identity
L_X a = i_X da + d(i_X a) and, on 1-forms, cross-checked against the direct
coordinate formula.
"""

from __future__ import annotations

from bisect import bisect_left
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, GradeOverflow
from .ratlaurent import LaurentPoly

IndexTuple = tuple  # strictly increasing tuple[int, ...] with entries in 1..n


class VectorField:
    """n contravariant components, each a LaurentPoly in x1..xn."""

    __slots__ = ("n", "components")

    def __init__(self, components: Sequence[LaurentPoly]):
        components = tuple(components)
        if not components:
            raise ValueError("a vector field needs at least one component")
        n = components[0].n
        if len(components) != n or any(p.n != n for p in components):
            raise ValueError("need exactly n components, each a polynomial in n coordinates")
        self.n = n
        self.components = components

    @classmethod
    def zero(cls, n: int) -> "VectorField":
        return cls([LaurentPoly.zero(n)] * n)

    def component(self, i: int) -> LaurentPoly:
        """Component X^i, 1-based."""
        return self.components[i - 1]

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __add__(self, other: "VectorField") -> "VectorField":
        if self.n != other.n:
            raise DimensionMismatch(f"vector fields in dimensions {self.n} and {other.n}")
        return VectorField([p + q for p, q in zip(self.components, other.components)])

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + (-other)

    def __neg__(self) -> "VectorField":
        return VectorField([-p for p in self.components])

    def __mul__(self, scale) -> "VectorField":
        return VectorField([p * scale for p in self.components])

    __rmul__ = __mul__

    def text(self) -> str:
        return "(" + ", ".join(p.text() for p in self.components) + ")"

    def __repr__(self) -> str:
        return f"VectorField{self.text()}"


class KForm:
    """Grade-k differential form in dimension n, sparsely stored."""

    __slots__ = ("n", "grade", "_terms")

    def __init__(self, n: int, grade: int, terms=None):
        if grade < 0:
            raise ValueError(f"negative grade {grade}")
        clean: dict[IndexTuple, LaurentPoly] = {}
        for idx, poly in (terms or {}).items():
            idx = tuple(idx)
            if len(idx) != grade:
                raise ValueError(f"index tuple {idx} has length {len(idx)}, expected grade {grade}")
            if any(not 1 <= i <= n for i in idx) or any(a >= b for a, b in zip(idx, idx[1:])):
                raise ValueError(f"index tuple {idx} not strictly increasing inside 1..{n}")
            if poly.n != n:
                raise ValueError("coefficient arity differs from form dimension")
            if poly:
                clean[idx] = clean[idx] + poly if idx in clean else poly
                if not clean[idx]:
                    del clean[idx]
        self.n = n
        self.grade = grade
        self._terms = clean

    @classmethod
    def zero(cls, n: int, grade: int) -> "KForm":
        return cls(n, grade)

    @classmethod
    def scalar(cls, n: int, poly: LaurentPoly) -> "KForm":
        """Wrap a polynomial as a grade-0 form."""
        return cls(n, 0, {(): poly})

    @classmethod
    def dx(cls, n: int, i: int) -> "KForm":
        return cls(n, 1, {(i,): LaurentPoly.const(n, 1)})

    def coeff(self, idx: Iterable[int]) -> LaurentPoly:
        return self._terms.get(tuple(idx), LaurentPoly.zero(self.n))

    def items(self):
        """Terms as (index tuple, coefficient), in index order."""
        return iter(sorted(self._terms.items()))

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, KForm):
            return NotImplemented
        return (self.n, self.grade, self._terms) == (other.n, other.grade, other._terms)

    def __hash__(self) -> int:
        return hash((self.n, self.grade, frozenset(self._terms.items())))

    def _check_same(self, other: "KForm"):
        if self.n != other.n:
            raise DimensionMismatch(f"forms in dimensions {self.n} and {other.n}")
        if self.grade != other.grade:
            raise ValueError(f"mixed grades {self.grade} and {other.grade}")

    def __add__(self, other: "KForm") -> "KForm":
        self._check_same(other)
        out = dict(self._terms)
        for idx, poly in other._terms.items():
            out[idx] = out[idx] + poly if idx in out else poly
        return KForm(self.n, self.grade, out)

    def __neg__(self) -> "KForm":
        return KForm(self.n, self.grade, {i: -p for i, p in self._terms.items()})

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-other)

    def __mul__(self, scale) -> "KForm":
        """Multiply every coefficient by a polynomial or rational scalar."""
        return KForm(self.n, self.grade, {i: p * scale for i, p in self._terms.items()})

    __rmul__ = __mul__

    def text(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for idx, poly in sorted(self._terms.items()):
            key = "^".join(f"dx{i}" for i in idx)
            pieces.append(f"({poly.text()})" + (f"*{key}" if key else ""))
        return " + ".join(pieces)

    def __repr__(self) -> str:
        return f"KForm({self.n}, grade={self.grade}, {self.text()!r})"


def _merge_sign(left: IndexTuple, right: IndexTuple) -> int:
    """Sign of sorting the concatenation of two increasing index tuples."""
    inversions = 0
    for a in left:
        # every element of `right` smaller than `a` must jump over it
        inversions += bisect_left(right, a)
    return -1 if inversions % 2 else 1


def wedge(alpha: KForm, beta: KForm) -> KForm:
    """Exterior product; grades add, overlapping indices annihilate."""
    if alpha.n != beta.n:
        raise DimensionMismatch(f"forms in dimensions {alpha.n} and {beta.n}")
    n = alpha.n
    out: dict[IndexTuple, LaurentPoly] = {}
    for ia, pa in alpha._terms.items():
        seen = set(ia)
        for ib, pb in beta._terms.items():
            if seen.intersection(ib):
                continue
            sign = _merge_sign(ia, ib)
            idx = tuple(sorted(ia + ib))
            term = pa * pb
            if sign < 0:
                term = -term
            out[idx] = out[idx] + term if idx in out else term
    return KForm(n, alpha.grade + beta.grade, out)


def ext_d(alpha: KForm) -> KForm:
    """Exterior derivative.

    On 1-forms the (i, j) coefficient is dw_j/dx_i - dw_i/dx_j for i < j; the
    general grade uses the same insert-with-sign rule per coordinate.
    """
    n = alpha.n
    out: dict[IndexTuple, LaurentPoly] = {}
    for idx, poly in alpha._terms.items():
        for i in range(1, n + 1):
            if i in idx:
                continue
            dpoly = poly.deriv(i)
            if not dpoly:
                continue
            pos = bisect_left(idx, i)
            if pos % 2:
                dpoly = -dpoly
            new_idx = idx[:pos] + (i,) + idx[pos:]
            out[new_idx] = out[new_idx] + dpoly if new_idx in out else dpoly
    return KForm(n, alpha.grade + 1, out)


def interior(field: VectorField, alpha: KForm) -> KForm:
    """Contraction i_X into the first slot, with alternating signs."""
    if field.n != alpha.n:
        raise DimensionMismatch(f"field in dimension {field.n}, form in {alpha.n}")
    if alpha.grade < 1:
        raise ValueError("interior product needs grade >= 1")
    out: dict[IndexTuple, LaurentPoly] = {}
    for idx, poly in alpha._terms.items():
        for pos, i in enumerate(idx):
            term = poly * field.component(i)
            if not term:
                continue
            if pos % 2:
                term = -term
            new_idx = idx[:pos] + idx[pos + 1 :]
            out[new_idx] = out[new_idx] + term if new_idx in out else term
    return KForm(alpha.n, alpha.grade - 1, out)


def _lie_derivative_direct(field: VectorField, omega: KForm) -> KForm:
    # (L_X w)_i = sum_j X^j d_j w_i + w_j d_i X^j, valid on 1-forms only
    n = omega.n
    out = {}
    for i in range(1, n + 1):
        total = LaurentPoly.zero(n)
        for j in range(1, n + 1):
            total = total + field.component(j) * omega.coeff((i,)).deriv(j)
            total = total + omega.coeff((j,)) * field.component(j).deriv(i)
        if total:
            out[(i,)] = total
    return KForm(n, 1, out)


def lie_derivative_form(field: VectorField, alpha: KForm) -> KForm:
    """Lie derivative L_X alpha = i_X d(alpha) + d(i_X alpha)."""
    if field.n != alpha.n:
        raise DimensionMismatch(f"field in dimension {field.n}, form in {alpha.n}")
    if alpha.grade == 0:
        return interior(field, ext_d(alpha))
    result = interior(field, ext_d(alpha)) + ext_d(interior(field, alpha))
    if alpha.grade == 1:
        direct = _lie_derivative_direct(field, alpha)
        if direct != result:
            raise AssertionError(
                "homotopy-identity and direct Lie-derivative formulas disagree: "
                f"{result.text()} vs {direct.text()}"
            )
    return result


def _split_last(alpha: KForm) -> tuple[KForm, KForm]:
    """Split a form into (terms without index n, terms with index n)."""
    without, with_n = {}, {}
    for idx, poly in alpha._terms.items():
        (with_n if alpha.n in idx else without)[idx] = poly
    return KForm(alpha.n, alpha.grade, without), KForm(alpha.n, alpha.grade, with_n)


def power_wedge(alpha: KForm, m: int) -> KForm:
    """m-fold wedge power of a form.

    For 2-forms the result is also computed through the split
    (O + L)^m = O^m + m O^(m-1) ^ L, where L collects the dxn terms and
    L ^ L = 0; the two routes must agree exactly.
    """
    if m < 1:
        raise ValueError("wedge power needs m >= 1")
    if alpha.grade * m > alpha.n:
        raise GradeOverflow(f"grade {alpha.grade}*{m} exceeds dimension {alpha.n}")
    out = alpha
    for _ in range(m - 1):
        out = wedge(out, alpha)
    if alpha.grade == 2 and m >= 2:
        omega_part, last_part = _split_last(alpha)
        unit = KForm.scalar(alpha.n, LaurentPoly.const(alpha.n, 1))
        pow_omega = unit
        for _ in range(m):
            pow_omega = wedge(pow_omega, omega_part)
        pow_prev = unit
        for _ in range(m - 1):
            pow_prev = wedge(pow_prev, omega_part)
        split = pow_omega + m * wedge(pow_prev, last_part)
        if split != out:
            raise AssertionError("direct and split wedge powers disagree")
    return out
