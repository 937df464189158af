"""Exact formal algebra of Itô differentials.

Differentials are linear combinations of six monomials built from the sign
``s = sign(dW)`` and the magnitude ``a = |dW|``::

    1, s, a, s*a = dW, a**2 = dt, s*a**2 = sign(dW) dt

with ``s**2 = 1`` and every product carrying ``a**3`` or higher dropped
(``dW dt = dt**2 = 0``). Coefficients are polynomials in a formal symbol
``V`` with exact complex-rational scalars, so identities are checked with
zero residual rather than to a tolerance.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Union

__all__ = [
    "QI",
    "Poly",
    "Monomial",
    "ItoExpr",
    "SqrtAnsatzCoefficients",
    "V",
    "mul",
    "solve_sqrt_coefficients",
    "reduce_ansatz_square",
    "theorem_target",
    "corollary_ansatz",
    "parse_complex_rational",
]


@dataclass(frozen=True)
class QI:
    """Gaussian rational ``re + im*i`` with arbitrary-precision parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def coerce(cls, value) -> "QI":
        if isinstance(value, QI):
            return value
        if isinstance(value, (int, Rational)):
            return cls(Fraction(value))
        if isinstance(value, str):
            return parse_complex_rational(value)
        raise TypeError(f"cannot convert {value!r} to an exact complex rational")

    def conjugate(self) -> "QI":
        return QI(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __add__(self, other):
        o = QI.coerce(other)
        return QI(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-QI.coerce(other))

    def __rsub__(self, other):
        return QI.coerce(other) - self

    def __mul__(self, other):
        o = QI.coerce(other)
        return QI(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QI.coerce(other)
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("division by exact complex zero")
        num = self * o.conjugate()
        return QI(num.re / den, num.im / den)

    def __rtruediv__(self, other):
        return QI.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("only integer powers are exact")
        if k < 0:
            return QI(1) / (self ** -k)
        out = QI(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            o = QI.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self):
        if not self.im:
            return str(self.re)
        im = "i" if self.im == 1 else "-i" if self.im == -1 else f"{self.im}i"
        if not self.re:
            return im
        sep = "" if im.startswith("-") else "+"
        return f"{self.re}{sep}{im}"

    def __repr__(self):
        return f"QI({self})"


def parse_complex_rational(text: str) -> QI:
    """Parse ``"p/q"``, ``"re,im"`` (each a rational), or ``"i"``."""
    text = text.strip()
    if text in ("i", "+i"):
        return QI(0, 1)
    if text == "-i":
        return QI(0, -1)
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return QI(Fraction(parts[0].strip()))
        if len(parts) == 2:
            return QI(Fraction(parts[0].strip()), Fraction(parts[1].strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact complex rational: {text!r}") from exc
    raise ValueError(f"not an exact complex rational: {text!r}")


class Poly:
    """Polynomial in the formal symbol ``V`` with :class:`QI` coefficients.

    Immutable; zero coefficients are never stored.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, object] | None = None):
        clean = {}
        for power, c in (terms or {}).items():
            if power < 0:
                raise ValueError("negative powers of V are not polynomial")
            c = QI.coerce(c)
            if c:
                clean[int(power)] = c
        self._terms = tuple(sorted(clean.items()))

    @classmethod
    def coerce(cls, value) -> "Poly":
        if isinstance(value, Poly):
            return value
        return cls({0: QI.coerce(value)})

    @property
    def terms(self) -> dict[int, QI]:
        return dict(self._terms)

    def degree(self) -> int:
        return self._terms[-1][0] if self._terms else -1

    def constant(self) -> QI:
        return self.terms.get(0, QI(0))

    def is_constant(self) -> bool:
        return self.degree() <= 0

    def __bool__(self):
        return bool(self._terms)

    def __neg__(self):
        return Poly({p: -c for p, c in self._terms})

    def __add__(self, other):
        o = Poly.coerce(other)
        out = dict(self._terms)
        for p, c in o._terms:
            out[p] = out.get(p, QI(0)) + c
        return Poly(out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-Poly.coerce(other))

    def __rsub__(self, other):
        return Poly.coerce(other) - self

    def __mul__(self, other):
        o = Poly.coerce(other)
        out: dict[int, QI] = {}
        for p1, c1 in self._terms:
            for p2, c2 in o._terms:
                out[p1 + p2] = out.get(p1 + p2, QI(0)) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        try:
            o = Poly.coerce(other)
        except TypeError:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        return hash(self._terms)

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for p, c in self._terms:
            sym = "" if p == 0 else "V" if p == 1 else f"V^{p}"
            if not sym:
                parts.append(str(c))
            elif c == 1:
                parts.append(sym)
            elif c == -1:
                parts.append("-" + sym)
            elif c.im and c.re:
                parts.append(f"({c})·{sym}")
            else:
                parts.append(f"{c}·{sym}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Poly({self})"


V = Poly({1: 1})


class Monomial(enum.Enum):
    """Basis differentials, valued by their (sign power, |dW| power)."""

    ONE = (0, 0)
    SIGN_DW = (1, 0)
    ABS_DW = (0, 1)
    DW = (1, 1)
    DT = (0, 2)
    SIGN_DT = (1, 2)

    @property
    def order(self) -> Fraction:
        return Fraction(self.value[1], 2)

    @property
    def null_measure(self) -> bool:
        return self in (Monomial.SIGN_DW, Monomial.SIGN_DT)

    @property
    def label(self) -> str:
        return _LABELS[self]


_LABELS = {
    Monomial.ONE: "1",
    Monomial.SIGN_DW: "sign(dW)",
    Monomial.DW: "dW",
    Monomial.ABS_DW: "|dW|",
    Monomial.DT: "dt",
    Monomial.SIGN_DT: "sign(dW)·dt",
}
_BY_POWERS = {m.value: m for m in Monomial}
_DISPLAY_ORDER = (
    Monomial.ONE,
    Monomial.SIGN_DW,
    Monomial.DW,
    Monomial.ABS_DW,
    Monomial.DT,
    Monomial.SIGN_DT,
)


def monomial_product(m1: Monomial, m2: Monomial) -> Monomial | None:
    """Product of two basis monomials, or ``None`` when it is beyond order dt."""
    s = (m1.value[0] + m2.value[0]) % 2
    a = m1.value[1] + m2.value[1]
    if a > 2:
        return None
    return _BY_POWERS[(s, a)]


class ItoExpr:
    """Immutable formal differential ``sum(coeff[m] * m)``."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[Monomial, object] | None = None):
        clean = {}
        for m, c in (coeffs or {}).items():
            if not isinstance(m, Monomial):
                raise TypeError(f"unknown basis monomial {m!r}")
            c = Poly.coerce(c)
            if c:
                clean[m] = c
        self._coeffs = tuple((m, clean[m]) for m in _DISPLAY_ORDER if m in clean)

    @classmethod
    def of(cls, monomial: Monomial, coeff=1) -> "ItoExpr":
        return cls({monomial: coeff})

    @property
    def coeffs(self) -> dict[Monomial, Poly]:
        return dict(self._coeffs)

    def coeff(self, monomial: Monomial) -> Poly:
        return self.coeffs.get(monomial, Poly())

    def monomials(self) -> set[Monomial]:
        return {m for m, _ in self._coeffs}

    def is_zero(self) -> bool:
        return not self._coeffs

    def drop_null_measure(self) -> "ItoExpr":
        """Discard the terms whose Itô integral vanishes after regularization."""
        return ItoExpr({m: c for m, c in self._coeffs if not m.null_measure})

    def __add__(self, other):
        o = _as_expr(other)
        out = self.coeffs
        for m, c in o._coeffs:
            out[m] = out.get(m, Poly()) + c
        return ItoExpr(out)

    __radd__ = __add__

    def __neg__(self):
        return ItoExpr({m: -c for m, c in self._coeffs})

    def __sub__(self, other):
        return self + (-_as_expr(other))

    def __rsub__(self, other):
        return _as_expr(other) - self

    def __mul__(self, other):
        return mul(self, _as_expr(other))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        out = ItoExpr.of(Monomial.ONE)
        for _ in range(k):
            out = mul(out, self)
        return out

    def __eq__(self, other):
        try:
            o = _as_expr(other)
        except TypeError:
            return NotImplemented
        return self._coeffs == o._coeffs

    def __hash__(self):
        return hash(self._coeffs)

    def __str__(self):
        if not self._coeffs:
            return "0"
        parts = []
        for m, c in self._coeffs:
            if m is Monomial.ONE:
                parts.append(str(c))
                continue
            cs = str(c)
            if c == 1:
                parts.append(m.label)
            elif c == -1:
                parts.append("-" + m.label)
            elif " " in cs or ("i" in cs and any(ch in cs[1:] for ch in "+-")):
                parts.append(f"({cs})·{m.label}")
            else:
                parts.append(f"{cs}·{m.label}")
        return " + ".join(parts)

    def __repr__(self):
        return f"ItoExpr({self})"


def _as_expr(value) -> ItoExpr:
    if isinstance(value, ItoExpr):
        return value
    return ItoExpr.of(Monomial.ONE, Poly.coerce(value))


def mul(a: ItoExpr, b: ItoExpr) -> ItoExpr:
    """Bilinear product under the truncated multiplication table."""
    out: dict[Monomial, Poly] = {}
    for m1, c1 in a._coeffs:
        for m2, c2 in b._coeffs:
            m = monomial_product(m1, m2)
            if m is None:
                continue
            out[m] = out.get(m, Poly()) + c1 * c2
    return ItoExpr(out)


def solve_sqrt_coefficients(mu0) -> tuple[QI, QI]:
    """Return ``(mu1, mu2) = (1/(2 mu0), -1/(8 mu0**3))`` exactly."""
    mu0 = QI.coerce(mu0)
    if not mu0:
        raise ZeroDivisionError("mu0 must be nonzero")
    return QI(1) / (2 * mu0), -(QI(1) / (8 * mu0 ** 3))


Scalar = Union[QI, int, Fraction, str]


@dataclass(frozen=True)
class SqrtAnsatzCoefficients:
    """Bracket ``mu0 + mu1 |dW| + (drift + sign_drift sign(dW)) dt``."""

    mu0: QI
    mu1: QI
    drift: Poly
    sign_drift: Poly = Poly()

    def __post_init__(self):
        object.__setattr__(self, "mu0", QI.coerce(self.mu0))
        object.__setattr__(self, "mu1", QI.coerce(self.mu1))
        object.__setattr__(self, "drift", Poly.coerce(self.drift))
        object.__setattr__(self, "sign_drift", Poly.coerce(self.sign_drift))

    @classmethod
    def solved(cls, mu0: Scalar) -> "SqrtAnsatzCoefficients":
        mu1, mu2 = solve_sqrt_coefficients(mu0)
        return cls(QI.coerce(mu0), mu1, Poly.coerce(mu2))

    @property
    def mu2(self) -> QI:
        return self.drift.constant()

    def bracket(self) -> ItoExpr:
        return ItoExpr(
            {
                Monomial.ONE: self.mu0,
                Monomial.ABS_DW: self.mu1,
                Monomial.DT: self.drift,
                Monomial.SIGN_DT: self.sign_drift,
            }
        )


def corollary_ansatz(potential: Poly = V) -> SqrtAnsatzCoefficients:
    """The interacting bracket ``1/2 + |dW| + (-1 + V sign(dW)) dt``."""
    return SqrtAnsatzCoefficients(QI(Fraction(1, 2)), QI(1), Poly.coerce(-1), potential)


def reduce_ansatz_square(c: SqrtAnsatzCoefficients) -> ItoExpr:
    """Square of ``bracket * Phi``, using ``Phi**2 = sign(dW)``."""
    b = c.bracket()
    return mul(mul(b, b), ItoExpr.of(Monomial.SIGN_DW))


def theorem_target(mu0: Scalar) -> ItoExpr:
    """``mu0**2 sign(dW) + dW``."""
    mu0 = QI.coerce(mu0)
    return ItoExpr({Monomial.SIGN_DW: mu0 * mu0, Monomial.DW: 1})


def exhaustive_table(basis: Iterable[Monomial] = Monomial) -> dict:
    """Full multiplication table as ``{(m1, m2): product-or-None}``."""
    basis = list(basis)
    return {(m1, m2): monomial_product(m1, m2) for m1 in basis for m2 in basis}
