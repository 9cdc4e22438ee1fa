"""Exact scalars: rationals (``fractions.Fraction``) and the golden ring Q(phi).

``Golden(a, b)`` is ``a + b*phi`` with ``phi**2 == phi + 1``.  Rationals and
``Golden`` mix freely; the result of a mixed operation is ``Golden``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from numbers import Rational

__all__ = ["Golden", "PHI", "as_scalar", "sign", "reflect_vector", "dot"]


def _q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


@total_ordering
class Golden:
    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = _q(a)
        self.b = _q(b)

    @classmethod
    def coerce(cls, x) -> "Golden":
        if isinstance(x, Golden):
            return x
        return cls(_q(x), 0)

    # ring operations

    def __add__(self, other):
        try:
            o = Golden.coerce(other)
        except TypeError:
            return NotImplemented
        return Golden(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return Golden(-self.a, -self.b)

    def __sub__(self, other):
        try:
            o = Golden.coerce(other)
        except TypeError:
            return NotImplemented
        return Golden(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = Golden.coerce(other)
        except TypeError:
            return NotImplemented
        # (a + b phi)(c + d phi) = ac + bd + (ad + bc + bd) phi
        bd = self.b * o.b
        return Golden(self.a * o.a + bd, self.a * o.b + self.b * o.a + bd)

    __rmul__ = __mul__

    def conjugate(self) -> "Golden":
        # phi -> 1 - phi
        return Golden(self.a + self.b, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a + self.a * self.b - self.b * self.b

    def __truediv__(self, other):
        try:
            o = Golden.coerce(other)
        except TypeError:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(phi)")
        c = self * o.conjugate()
        return Golden(c.a / n, c.b / n)

    def __rtruediv__(self, other):
        return Golden.coerce(other) / self

    # comparison

    def __eq__(self, other):
        try:
            o = Golden.coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __lt__(self, other):
        try:
            o = Golden.coerce(other)
        except TypeError:
            return NotImplemented
        return sign(self - o) < 0

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self):
        return f"Golden({self.a}, {self.b})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            head = ""
        else:
            head = str(self.a)
        b = self.b
        if b == 1:
            tail = "φ"
        elif b == -1:
            tail = "-φ"
        else:
            tail = f"{b}φ"
        if head and not tail.startswith("-"):
            tail = "+" + tail
        return head + tail


PHI = Golden(0, 1)


def as_scalar(x):
    """Normalize ``x`` to ``Fraction`` or, if it has a phi part, ``Golden``."""
    if isinstance(x, Golden):
        return x.a if x.b == 0 else x
    return _q(x)


def _sign_q(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def sign(x) -> int:
    """Exact sign (-1, 0, 1) of a rational or golden scalar."""
    if not isinstance(x, Golden):
        return _sign_q(_q(x))
    a, b = x.a, x.b
    if b == 0:
        return _sign_q(a)
    # a + b phi = ((2a + b) + b sqrt5) / 2 ; compare p = 2a + b against -b sqrt5
    p = 2 * a + b
    if p >= 0 and b >= 0:
        return 1 if (p > 0 or b > 0) else 0
    if p <= 0 and b <= 0:
        return -1
    # opposite signs: compare magnitudes by squaring
    lhs, rhs = p * p, 5 * b * b
    if lhs == rhs:
        return 0
    big = p if lhs > rhs else b
    return 1 if big > 0 else -1


def dot(u, v, gram):
    """Bilinear form ``u^T gram v`` in exact arithmetic."""
    total = 0
    for i, ui in enumerate(u):
        if ui == 0:
            continue
        row = gram[i]
        for j, vj in enumerate(v):
            if vj != 0 and row[j] != 0:
                total = total + ui * row[j] * vj
    return as_scalar(total)


def reflect_vector(v, root, gram):
    """Reflect ``v`` in the hyperplane orthogonal to ``root``.

    Returns ``v - 2 B(root, v) / B(root, root) * root``.
    """
    rr = dot(root, root, gram)
    if rr == 0:
        raise ZeroDivisionError("root has zero norm under the given form")
    c = as_scalar(2 * dot(root, v, gram) / rr)
    return tuple(as_scalar(vi - c * ri) for vi, ri in zip(v, root))
