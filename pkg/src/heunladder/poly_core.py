"""Exact rational scalars and dense univariate polynomials over them.

Scalars are plain ``fractions.Fraction`` values (always in lowest terms with a
positive denominator).  ``ExactPoly`` is an immutable dense coefficient tuple,
index i holding the coefficient of y**i.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
Number = Union[int, Fraction]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


class IdentityViolation(ArithmeticError):
    """An exact identity that must hold was found to fail."""

    def __init__(self, anchor: str, detail: str = ""):
        self.anchor = anchor
        self.detail = detail
        super().__init__(f"{anchor}: {detail}" if detail else anchor)


class DegenerateScale(ValueError):
    """A normalizing scale factor vanishes for the requested parameters."""


class InvalidIndex(ValueError):
    """Index parameters outside the admissible range."""


class Unsupported(ValueError):
    """Parameters for which the construction is not defined."""


def to_rational(x: Union[Number, str]) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or an integer literal; floats are rejected on purpose."""
    m = _RATIONAL_RE.match(text)
    if not m:
        raise ValueError(f"not an exact rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(num, den)


def fmt_rational(x: Number) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


class ExactPoly:
    """Dense polynomial with Fraction coefficients (immutable)."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        c = [to_rational(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)

    # construction helpers
    @classmethod
    def const(cls, value: Number) -> "ExactPoly":
        return cls([value])

    @classmethod
    def monomial(cls, k: int, coeff: Number = 1) -> "ExactPoly":
        return cls([0] * k + [coeff])

    @classmethod
    def from_roots(cls, roots: Iterable[Number]) -> "ExactPoly":
        p = cls([1])
        for r in roots:
            p = p * cls([-to_rational(r), 1])
        return p

    @classmethod
    def from_strings(cls, items: Sequence[str]) -> "ExactPoly":
        return cls(parse_rational(s) for s in items)

    # basic accessors
    @property
    def coeffs(self) -> tuple:
        return self._c

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    @property
    def lc(self) -> Fraction:
        return self._c[-1] if self._c else Fraction(0)

    def is_zero(self) -> bool:
        return not self._c

    def coeff(self, i: int) -> Fraction:
        return self._c[i] if 0 <= i < len(self._c) else Fraction(0)

    def to_strings(self) -> list:
        return [fmt_rational(c) for c in self._c]

    def __repr__(self):
        return f"ExactPoly({[str(c) for c in self._c]})"

    def __str__(self):
        if not self._c:
            return "0"
        terms = []
        for i in range(len(self._c) - 1, -1, -1):
            c = self._c[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("y" if i == 1 else f"y^{i}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                cs = str(c) if c.denominator == 1 else f"({c})"
                terms.append(cs + ("*" + mono if mono else ""))
        return " + ".join(terms).replace("+ -", "- ")

    def __eq__(self, other):
        if isinstance(other, ExactPoly):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            return self._c == ExactPoly([other])._c
        return NotImplemented

    def __hash__(self):
        return hash(self._c)

    # ring operations
    @staticmethod
    def _coerce(q) -> "ExactPoly":
        if isinstance(q, ExactPoly):
            return q
        return ExactPoly([q])

    def __add__(self, other):
        q = self._coerce(other)
        n = max(len(self._c), len(q._c))
        return ExactPoly(self.coeff(i) + q.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return ExactPoly(-c for c in self._c)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            k = to_rational(other)
            return ExactPoly(c * k for c in self._c)
        q = self._coerce(other)
        if not self._c or not q._c:
            return ExactPoly()
        out = [Fraction(0)] * (len(self._c) + len(q._c) - 1)
        for i, a in enumerate(self._c):
            if a == 0:
                continue
            for j, b in enumerate(q._c):
                out[i + j] += a * b
        return ExactPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = ExactPoly([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, k: Number) -> "ExactPoly":
        return self * to_rational(k)

    def derivative(self) -> "ExactPoly":
        return ExactPoly(i * c for i, c in enumerate(self._c) if i > 0)

    def compose_y2(self) -> "ExactPoly":
        """p(y) -> p(y**2)."""
        out = []
        for c in self._c:
            out.extend([c, Fraction(0)])
        return ExactPoly(out)

    def even_part_in_z(self) -> "ExactPoly":
        """Inverse of compose_y2 for an even polynomial."""
        if any(c != 0 for c in self._c[1::2]):
            raise ValueError("polynomial is not even")
        return ExactPoly(self._c[0::2])

    def compose(self, q: "ExactPoly") -> "ExactPoly":
        out = ExactPoly()
        for c in reversed(self._c):
            out = out * q + c
        return out

    def __call__(self, x):
        """Horner evaluation; exact for rationals, float for floats/arrays."""
        if isinstance(x, (int, Fraction)):
            acc = Fraction(0)
            for c in reversed(self._c):
                acc = acc * x + c
            return acc
        acc = 0.0 * x
        for c in reversed(self._c):
            acc = acc * x + float(c)
        return acc

    def evaluate(self, x):
        return self(x)

    def monic(self) -> "ExactPoly":
        if not self._c:
            raise ZeroDivisionError("zero polynomial has no leading coefficient")
        return self * (1 / self.lc)

    def divmod(self, d: "ExactPoly"):
        if d.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self._c)
        dl = d.lc
        dd = d.degree
        if len(rem) - 1 < dd:
            return ExactPoly(), self
        quo = [Fraction(0)] * (len(rem) - dd)
        for k in range(len(rem) - 1 - dd, -1, -1):
            f = rem[k + dd] / dl
            quo[k] = f
            if f:
                for j, c in enumerate(d._c):
                    rem[k + j] -= f * c
        return ExactPoly(quo), ExactPoly(rem[:dd])

    def __divmod__(self, d):
        return self.divmod(d)

    def exact_div(self, d: "ExactPoly", anchor: str = "exact division") -> "ExactPoly":
        q, r = self.divmod(self._coerce(d))
        if not r.is_zero():
            raise IdentityViolation(anchor, f"nonzero remainder {r}")
        return q

    def strip_root(self, x0: Number) -> tuple:
        """Divide out (y - x0) as often as possible; return (quotient, multiplicity)."""
        p, k = self, 0
        lin = ExactPoly([-to_rational(x0), 1])
        while not p.is_zero() and p(to_rational(x0)) == 0:
            p = p.exact_div(lin)
            k += 1
        return p, k

    def float_coeffs(self):
        return [float(c) for c in self._c]


Y = ExactPoly([0, 1])
ONE = ExactPoly([1])
ZERO = ExactPoly()


def wronskian(f: ExactPoly, g: ExactPoly) -> ExactPoly:
    return f * g.derivative() - f.derivative() * g


def poly_gcd(p: ExactPoly, q: ExactPoly) -> ExactPoly:
    """Monic gcd (zero if both inputs are zero)."""
    a, b = p, q
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic() if not a.is_zero() else a


def squarefree_part(p: ExactPoly) -> ExactPoly:
    if p.degree <= 0:
        return p
    return p.exact_div(poly_gcd(p, p.derivative()))


def sturm_sequence(p: ExactPoly) -> list:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        r = seq[-2].divmod(seq[-1])[1]
        if r.is_zero():
            break
        # positive rescaling keeps coefficients small without touching signs
        seq.append(-r * (1 / abs(r.lc)))
    return [q for q in seq if not q.is_zero()]


def _sign_changes(seq: list, x: Fraction) -> int:
    signs = []
    for q in seq:
        v = q(x)
        if v != 0:
            signs.append(v > 0)
    return sum(1 for u, w in zip(signs, signs[1:]) if u != w)


def sturm_count(p: ExactPoly, a: Number, b: Number) -> int:
    """Number of distinct real roots of p in the open interval (a, b).

    Endpoint roots are divided out exactly before counting, so no
    perturbation of the interval is ever needed.
    """
    a, b = to_rational(a), to_rational(b)
    if p.is_zero():
        raise ValueError("sturm_count of the zero polynomial")
    if not a < b:
        raise ValueError("need a < b")
    q = squarefree_part(p)
    q, _ = q.strip_root(a)
    q, _ = q.strip_root(b)
    if q.degree <= 0:
        return 0
    seq = sturm_sequence(q)
    return _sign_changes(seq, a) - _sign_changes(seq, b)


def shifted_pochhammer(kappa: Number, t: int) -> Fraction:
    """prod_{i=1..t} (kappa + i)."""
    kappa = to_rational(kappa)
    out = Fraction(1)
    for i in range(1, t + 1):
        out *= kappa + i
    return out


def rising_pochhammer(x: Number, k: int) -> Fraction:
    x = to_rational(x)
    out = Fraction(1)
    for i in range(k):
        out *= x + i
    return out


def double_factorial(k: int) -> int:
    if k < -1:
        raise ValueError("double factorial defined here for k >= -1")
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


def gbinom(x: Number, k: int) -> Fraction:
    """Generalized binomial C(x, k) for rational x and integer k."""
    if k < 0:
        return Fraction(0)
    x = to_rational(x)
    out = Fraction(1)
    for i in range(k):
        out = out * (x - i) / (i + 1)
    return out


def is_rational_square(q: Fraction):
    """Return the exact rational square root of q, or None."""
    if q < 0:
        return None
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        return Fraction(rn, rd)
    return None
