"""Exact arithmetic for the quantity sort.

Values are elements of a square-root tower over the rationals: a chain
Q = F_0 < F_1 < ... < F_k where F_{i+1} = F_i(sqrt(d_i)) for a positive
radicand d_i in F_i that is not a square there.  Every quantity the
workbench needs (Lorentz factors sqrt(1-v^2), proper times of piecewise
worldlines, suprema of quadratic interval sets) lives in such a tower,
and all of +, -, *, /, sqrt and comparison are exact.

Representation.  An :class:`ExactReal` carries its tower (a tuple of
radicands, each itself an ExactReal over the tower below) and a nested
coefficient tree: at level 0 a ``Fraction``, at level k a pair ``(a, b)``
of level-(k-1) trees denoting ``a + b*sqrt(d_{k-1})``.  Because each
radicand is not a square below it, the representation is canonical and a
value is zero iff every coefficient is zero; that is what makes equality
and division decidable without numerics.

Comparison refines rational interval enclosures (32, 64, 128, ... bits,
with the exact zero test resolving the straddling case) until the sign
of the difference is determined; for nonzero values this terminates.

Values are immutable and safe to share between threads.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Union

__all__ = [
    "ExactReal",
    "ApproxReal",
    "DivisionByZero",
    "NegativeRadicand",
    "ExactRealSyntaxError",
    "ER",
    "sqrt",
    "parse_exact",
]


class DivisionByZero(ZeroDivisionError):
    """Division of an ExactReal by an exact zero."""


class NegativeRadicand(ValueError):
    """sqrt() of a value that is exactly negative."""


class ExactRealSyntaxError(ValueError):
    """Malformed field literal."""


Rational = Union[int, Fraction]

# A coefficient tree: Fraction at level 0, (low, high) pairs above.
_ZERO = Fraction(0)
_ONE = Fraction(1)


def _tree_const(q: Fraction, level: int):
    t = q
    z = _ZERO
    for _ in range(level):
        t = (t, z)
        z = (z, z)
    return t


def _tree_is_zero(t, level: int) -> bool:
    if level == 0:
        return t == 0
    return _tree_is_zero(t[0], level - 1) and _tree_is_zero(t[1], level - 1)


def _tree_add(x, y, level: int):
    if level == 0:
        return x + y
    k = level - 1
    return (_tree_add(x[0], y[0], k), _tree_add(x[1], y[1], k))


def _rad(tower, k: int):
    # Radicands are stored normalized (their own tower may be shorter than
    # the prefix they sit over), so promote the rep tree to level k.
    r = tower[k]
    return _tree_promote(r._rep, len(r._tower), k)


def _tree_neg(x, level: int):
    if level == 0:
        return -x
    k = level - 1
    return (_tree_neg(x[0], k), _tree_neg(x[1], k))


def _tree_sub(x, y, level: int):
    return _tree_add(x, _tree_neg(y, level), level)


def _tree_mul(x, y, tower, level: int):
    if level == 0:
        return x * y
    k = level - 1
    a, b = x
    c, d = y
    rad = _rad(tower, k)
    ac = _tree_mul(a, c, tower, k)
    bd = _tree_mul(b, d, tower, k)
    low = _tree_add(ac, _tree_mul(bd, rad, tower, k), k)
    high = _tree_add(_tree_mul(a, d, tower, k), _tree_mul(b, c, tower, k), k)
    return (low, high)


def _tree_inv(x, tower, level: int):
    # Caller guarantees x != 0.  At level k, 1/(a+b*sqrt(d)) =
    # (a-b*sqrt(d))/(a^2-b^2 d); the denominator is nonzero because
    # sqrt(d) is not in the field below (canonical tower).
    if level == 0:
        return 1 / x
    k = level - 1
    a, b = x
    rad = _rad(tower, k)
    den = _tree_sub(_tree_mul(a, a, tower, k), _tree_mul(_tree_mul(b, b, tower, k), rad, tower, k), k)
    inv_den = _tree_inv(den, tower, k)
    return (_tree_mul(a, inv_den, tower, k), _tree_neg(_tree_mul(b, inv_den, tower, k), k))


def _tree_promote(t, from_level: int, to_level: int):
    for lvl in range(from_level, to_level):
        t = (t, _tree_const(_ZERO, lvl))
    return t


# ---------------------------------------------------------------------------
# Rational interval helpers for sign determination.

def _frac_sqrt_bounds(q: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    # q >= 0; enclosure of sqrt(q) with width <= 2^-bits (plus rounding slack).
    if q == 0:
        return (_ZERO, _ZERO)
    p, d = q.numerator, q.denominator
    scale = 1 << bits
    n = p * d * scale * scale
    r = isqrt(n)
    lo = Fraction(r, d * scale)
    hi = Fraction(r + 1, d * scale)
    return (lo, hi)


def _iv_add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _iv_mul(a, b):
    ps = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(ps), max(ps))


def _tree_interval(t, tower, level: int, bits: int):
    if level == 0:
        return (t, t)
    k = level - 1
    a, b = t
    ia = _tree_interval(a, tower, k, bits)
    ib = _tree_interval(b, tower, k, bits)
    id_ = _tree_interval(_rad(tower, k), tower, k, bits)
    lo = max(id_[0], _ZERO)
    isq = (_frac_sqrt_bounds(lo, bits)[0], _frac_sqrt_bounds(id_[1], bits)[1])
    return _iv_add(ia, _iv_mul(ib, isq))


def _tree_sign(t, tower, level: int) -> int:
    if _tree_is_zero(t, level):
        return 0
    bits = 32
    while True:
        lo, hi = _tree_interval(t, tower, level, bits)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        # Width 2^-128 reached and still straddling: the exact zero test
        # above already ruled zero out, so keep refining; termination is
        # guaranteed for nonzero values.
        bits *= 2


def _frac_sqrt_exact(q: Fraction):
    if q < 0:
        return None
    sp, sq = isqrt(q.numerator), isqrt(q.denominator)
    if sp * sp == q.numerator and sq * sq == q.denominator:
        return Fraction(sp, sq)
    return None


def _tree_sqrt(t, tower, level: int):
    """Square root of t within the level's field, or None if not a square.

    Returns the nonnegative root.
    """
    if level == 0:
        return _frac_sqrt_exact(t)
    k = level - 1
    a, b = t
    rad = _rad(tower, k)
    if _tree_is_zero(b, k):
        s = _tree_sqrt(a, tower, k)
        if s is not None:
            return (s, _tree_const(_ZERO, k))
        # a might be t^2 * d, i.e. sqrt(a) = t*sqrt(d).
        if not _tree_is_zero(a, k):
            s = _tree_sqrt(_tree_mul(a, _tree_inv(rad, tower, k), tower, k), tower, k)
            if s is not None:
                cand = (_tree_const(_ZERO, k), s)
                return cand if _tree_sign(cand, tower, level) >= 0 else _tree_neg(cand, level)
        return None
    # sqrt(a + b*sqrt(d)) = x + y*sqrt(d) requires n = sqrt(a^2 - b^2 d)
    # in the field below, with x^2 in {(a+n)/2, (a-n)/2} and y = b/(2x).
    n2 = _tree_sub(_tree_mul(a, a, tower, k), _tree_mul(_tree_mul(b, b, tower, k), rad, tower, k), k)
    n = _tree_sqrt(n2, tower, k)
    if n is None:
        return None
    half = _tree_const(Fraction(1, 2), k)
    for cand2 in (_tree_mul(_tree_add(a, n, k), half, tower, k),
                  _tree_mul(_tree_sub(a, n, k), half, tower, k)):
        x = _tree_sqrt(cand2, tower, k)
        if x is None or _tree_is_zero(x, k):
            continue
        two_x_inv = _tree_inv(_tree_add(x, x, k), tower, k)
        y = _tree_mul(b, two_x_inv, tower, k)
        root = (x, y)
        if _tree_is_zero(_tree_sub(_tree_mul(root, root, tower, level), t, level), level):
            return root if _tree_sign(root, tower, level) >= 0 else _tree_neg(root, level)
    return None


def _tree_structural_eq(x, y, level: int) -> bool:
    if level == 0:
        return x == y
    k = level - 1
    return _tree_structural_eq(x[0], y[0], k) and _tree_structural_eq(x[1], y[1], k)


class ExactReal:
    """An element of a square-root tower over Q, with exact arithmetic.

    Construct via :meth:`from_rational`, :func:`parse_exact`, the ``ER``
    convenience converter, arithmetic on existing values, or
    :func:`sqrt`.
    """

    __slots__ = ("_tower", "_rep")

    def __init__(self, tower, rep, _normalize: bool = True):
        if _normalize:
            level = len(tower)
            while level > 0 and _tree_is_zero(rep[1], level - 1):
                rep = rep[0]
                level -= 1
            tower = tower[:level]
        self._tower = tower
        self._rep = rep

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rational(value: Rational, den: int | None = None) -> "ExactReal":
        if den is not None:
            value = Fraction(value, den)
        return ExactReal((), Fraction(value), _normalize=False)

    # -- structure ---------------------------------------------------------

    @property
    def tower(self) -> tuple:
        """The radicands adjoined below this value (innermost first)."""
        return self._tower

    @property
    def level(self) -> int:
        return len(self._tower)

    def is_rational(self) -> bool:
        return not self._tower

    def as_fraction(self) -> Fraction:
        if self._tower:
            raise ValueError("value is irrational: %s" % self)
        return self._rep

    # -- tower unification ---------------------------------------------------

    @staticmethod
    def _radicands_eq(a: "ExactReal", b: "ExactReal") -> bool:
        # Radicands are normalized, so equal values have equal trees.
        if len(a._tower) != len(b._tower):
            return False
        return _tree_structural_eq(a._rep, b._rep, len(a._tower))

    def _same_tower(self, other: "ExactReal") -> bool:
        if len(self._tower) != len(other._tower):
            return False
        return all(
            ExactReal._radicands_eq(a, b)
            for a, b in zip(self._tower, other._tower)
        )

    def _tower_prefix_of(self, other: "ExactReal") -> bool:
        if len(self._tower) > len(other._tower):
            return False
        return all(
            ExactReal._radicands_eq(a, b)
            for a, b in zip(self._tower, other._tower)
        )

    @staticmethod
    def _lift(value: "ExactReal", tower: tuple) -> tuple:
        """Re-express value over (an extension of) the given tower.

        Returns (tower', rep) where tower' extends tower.
        """
        if value.is_rational():
            return tower, _tree_const(value._rep, len(tower))
        sub = ExactReal(value._tower[:-1], value._rep[0], _normalize=False)
        rad = value._tower[-1]
        coeff = ExactReal(value._tower[:-1], value._rep[1], _normalize=False)
        tower, rad_rep = ExactReal._lift(rad, tower)
        tower, root_rep = ExactReal._sqrt_rep(rad_rep, tower)
        tower, sub_rep = ExactReal._lift(sub, tower)
        tower, coeff_rep = ExactReal._lift(coeff, tower)
        level = len(tower)
        root_rep = _tree_promote(root_rep, ExactReal._rep_level(root_rep), level)
        sub_rep = _tree_promote(sub_rep, ExactReal._rep_level(sub_rep), level)
        coeff_rep = _tree_promote(coeff_rep, ExactReal._rep_level(coeff_rep), level)
        return tower, _tree_add(sub_rep, _tree_mul(coeff_rep, root_rep, tower, level), level)

    @staticmethod
    def _rep_level(rep) -> int:
        level = 0
        while not isinstance(rep, Fraction):
            rep = rep[0]
            level += 1
        return level

    @staticmethod
    def _sqrt_rep(rep, tower) -> tuple:
        """sqrt of a rep over tower, adjoining a new radicand if needed."""
        level = len(tower)
        rep = _tree_promote(rep, ExactReal._rep_level(rep), level)
        sign = _tree_sign(rep, tower, level)
        if sign < 0:
            raise NegativeRadicand("sqrt of negative value %s" % ExactReal(tower, rep))
        if sign == 0:
            return tower, _tree_const(_ZERO, level)
        root = _tree_sqrt(rep, tower, level)
        if root is not None:
            return tower, root
        radicand = ExactReal(tower, rep)
        new_tower = tower + (radicand,)
        return new_tower, (_tree_const(_ZERO, level), _tree_const(_ONE, level))

    def _unified(self, other: "ExactReal") -> tuple:
        if self._same_tower(other):
            return self._tower, self._rep, other._rep
        if other._tower_prefix_of(self):
            return self._tower, self._rep, _tree_promote(other._rep, other.level, self.level)
        if self._tower_prefix_of(other):
            return other._tower, _tree_promote(self._rep, self.level, other.level), other._rep
        tower, orep = ExactReal._lift(other, self._tower)
        srep = _tree_promote(self._rep, self.level, len(tower))
        return tower, srep, orep

    # -- arithmetic ----------------------------------------------------------

    @staticmethod
    def _coerce(value) -> "ExactReal":
        if isinstance(value, ExactReal):
            return value
        if isinstance(value, (int, Fraction)):
            return ExactReal.from_rational(value)
        return NotImplemented

    def __add__(self, other):
        other = ExactReal._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        tower, a, b = self._unified(other)
        return ExactReal(tower, _tree_add(a, b, len(tower)))

    __radd__ = __add__

    def __neg__(self):
        return ExactReal(self._tower, _tree_neg(self._rep, self.level), _normalize=False)

    def __sub__(self, other):
        other = ExactReal._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = ExactReal._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = ExactReal._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        tower, a, b = self._unified(other)
        return ExactReal(tower, _tree_mul(a, b, tower, len(tower)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = ExactReal._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZero("division by exact zero")
        tower, a, b = self._unified(other)
        return ExactReal(tower, _tree_mul(a, _tree_inv(b, tower, len(tower)), tower, len(tower)))

    def __rtruediv__(self, other):
        other = ExactReal._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return ExactReal.from_rational(1) / self ** (-exponent)
        result = ExactReal.from_rational(1)
        base = self
        n = exponent
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- predicates and order ------------------------------------------------

    def is_zero(self) -> bool:
        return _tree_is_zero(self._rep, self.level)

    def sign(self) -> int:
        return _tree_sign(self._rep, self._tower, self.level)

    def compare(self, other) -> int:
        """-1, 0 or 1 as self <, ==, > other; exact."""
        other = ExactReal._coerce(other)
        return (self - other).sign()

    def __eq__(self, other):
        other = ExactReal._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.compare(other) == 0

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    __hash__ = None  # value-equal numbers may have different trees; do not hash

    def __bool__(self):
        return not self.is_zero()

    # -- numeric views ---------------------------------------------------------

    def interval(self, bits: int = 64) -> tuple[Fraction, Fraction]:
        """A rational enclosure [lo, hi] with width roughly 2^-bits."""
        return _tree_interval(self._rep, self._tower, self.level, bits)

    def approx(self, bits: int = 128) -> "ApproxReal":
        lo, hi = self.interval(bits)
        return ApproxReal(lo, hi)

    def __float__(self):
        lo, hi = self.interval(64)
        return float((lo + hi) / 2)

    def decimal_str(self, digits: int = 12) -> str:
        """Deterministic decimal rendering with the given significant digits."""
        bits = 16
        while True:
            lo, hi = self.interval(bits)
            mid = (lo + hi) / 2
            if mid != 0 and (hi - lo) < abs(mid) / Fraction(10) ** (digits + 2):
                break
            if mid == 0 and hi - lo < Fraction(1, 10 ** (digits + 2)):
                break
            bits *= 2
            if bits > 4096:
                break
        return _format_sig(mid, digits)

    # -- rendering ---------------------------------------------------------------

    def literal(self) -> str:
        """Canonical re-parseable literal, e.g. ``4/5`` or ``1/2*sqrt(2)``."""
        return _render(self._rep, self._tower, self.level, top=True)

    def __str__(self):
        return self.literal()

    def __repr__(self):
        return "ExactReal(%s)" % self.literal()


def _format_sig(q: Fraction, digits: int) -> str:
    if q == 0:
        return "0." + "0" * (digits - 1)
    sign = "-" if q < 0 else ""
    q = abs(q)
    exp = 0
    while q >= 10:
        q /= 10
        exp += 1
    while q < 1:
        q *= 10
        exp -= 1
    scaled = q * Fraction(10) ** (digits - 1)
    n = scaled.numerator // scaled.denominator
    if (scaled - n) * 2 >= 1:
        n += 1
    s = str(n)
    if len(s) > digits:  # rounding carried over, e.g. 9.99... -> 10.0
        s = s[:digits]
        exp += 1
    if -4 < exp < digits:
        if exp >= 0:
            intpart = s[: exp + 1]
            fracpart = s[exp + 1 :]
            return sign + intpart + ("." + fracpart if fracpart else "")
        return sign + "0." + "0" * (-exp - 1) + s
    return "%s%s.%se%+d" % (sign, s[0], s[1:], exp)


def _render(rep, tower, level: int, top: bool = False) -> str:
    if level == 0:
        return str(rep)
    k = level - 1
    a, b = rep
    rad = _render(tower[k]._rep, tower[k]._tower, len(tower[k]._tower), top=True)
    parts = []
    if not _tree_is_zero(a, k):
        parts.append(_render(a, tower, k, top=top))
    if not _tree_is_zero(b, k):
        root = "sqrt(%s)" % rad
        if _tree_structural_eq(b, _tree_const(_ONE, k), k):
            coeff = root
        elif _tree_structural_eq(b, _tree_const(-_ONE, k), k):
            coeff = "-" + root
        else:
            rendered = _render(b, tower, k)
            if "+" in rendered or ("-" in rendered[1:]):
                rendered = "(%s)" % rendered
            coeff = "%s*%s" % (rendered, root)
        parts.append(coeff)
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def sqrt(value) -> ExactReal:
    """Exact nonnegative square root; extends the tower only when needed."""
    value = ExactReal._coerce(value)
    if value is NotImplemented:
        raise TypeError("sqrt expects an ExactReal or rational")
    tower, rep = ExactReal._sqrt_rep(value._rep, value._tower)
    return ExactReal(tower, rep)


def ER(value) -> ExactReal:
    """Convenience converter: int, Fraction, 'p/q' strings and literals."""
    if isinstance(value, ExactReal):
        return value
    if isinstance(value, (int, Fraction)):
        return ExactReal.from_rational(value)
    if isinstance(value, str):
        return parse_exact(value)
    raise TypeError("cannot convert %r to ExactReal" % (value,))


# ---------------------------------------------------------------------------
# Interval values for the numeric fallback paths.


class ApproxReal:
    """A rational interval guaranteed to contain the true value.

    Produced when quadrature or other numeric routines cannot stay in the
    tower; the width is part of the result and is reported alongside it.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo: Rational, hi: Rational):
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise ValueError("empty interval")
        self.lo = lo
        self.hi = hi

    @staticmethod
    def from_exact(value: ExactReal, bits: int = 128) -> "ApproxReal":
        return value.approx(bits)

    @staticmethod
    def from_float(value: float, error: float) -> "ApproxReal":
        e = abs(Fraction(error))
        v = Fraction(value)
        return ApproxReal(v - e, v + e)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, value) -> bool:
        if isinstance(value, ExactReal):
            return value.compare(ExactReal.from_rational(self.lo)) >= 0 and \
                value.compare(ExactReal.from_rational(self.hi)) <= 0
        v = Fraction(value)
        return self.lo <= v <= self.hi

    def __add__(self, other):
        if isinstance(other, ApproxReal):
            return ApproxReal(self.lo + other.lo, self.hi + other.hi)
        v = Fraction(other)
        return ApproxReal(self.lo + v, self.hi + v)

    __radd__ = __add__

    def __mul__(self, other):
        if isinstance(other, ApproxReal):
            ps = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
            return ApproxReal(min(ps), max(ps))
        v = Fraction(other)
        ps = (self.lo * v, self.hi * v)
        return ApproxReal(min(ps), max(ps))

    __rmul__ = __mul__

    def __float__(self):
        return float(self.midpoint)

    def __repr__(self):
        return "ApproxReal(%s, width=%s)" % (float(self), float(self.width))


# ---------------------------------------------------------------------------
# Field literals: `p/q`, `sqrt(E)`, sums, differences, products, quotients.


def parse_exact(text: str) -> ExactReal:
    """Parse a field literal such as ``3/5`` or ``sqrt(1 - 9/25)``."""
    from .exprs import parse_expression, evaluate_exact

    expr = parse_expression(text, variables=())
    return evaluate_exact(expr, {})
