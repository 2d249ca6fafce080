"""Exact coefficient arithmetic over Z[v, 1/v].

The formal variable ``v`` stands for the square root of ``q``, so every
half-integer power of ``q`` becomes an integer power of ``v``.  Values are
immutable; all operations are pure.

Polynomial gcds go through sympy's dense univariate routines over ``ZZ``.
"""

from __future__ import annotations

import json
from math import gcd
from typing import Iterable, Mapping, Sequence

from sympy.polys.densearith import dup_exquo, dup_mul, dup_sub
from sympy.polys.domains import ZZ
from sympy.polys.euclidtools import dup_gcd

__all__ = [
    "VLaurent",
    "VRatio",
    "ExactMatrix",
    "vl_arith",
    "vl_eval_one",
    "vl_content_unit",
    "exact_kernel",
]


class VLaurent:
    """Laurent polynomial in ``v`` with integer coefficients.

    >>> v = VLaurent.v()
    >>> (v - 1) * (v + 1)
    VLaurent('v^2 - 1')
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | None = None):
        self._terms = {int(k): int(c) for k, c in (terms or {}).items() if c}
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def _raw(cls, terms: dict) -> "VLaurent":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: int) -> "VLaurent":
        return cls._raw({0: int(c)} if c else {})

    @classmethod
    def mono(cls, c: int, k: int) -> "VLaurent":
        return cls._raw({int(k): int(c)} if c else {})

    @classmethod
    def v(cls) -> "VLaurent":
        return cls._raw({1: 1})

    @classmethod
    def coerce(cls, x) -> "VLaurent":
        if isinstance(x, VLaurent):
            return x
        if isinstance(x, int):
            return cls.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to VLaurent")

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def low(self) -> int:
        return min(self._terms)

    def high(self) -> int:
        return max(self._terms)

    def is_unit(self) -> bool:
        """True for ``±v^k``."""
        return len(self._terms) == 1 and abs(next(iter(self._terms.values()))) == 1

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def leading(self) -> int:
        return self._terms[self.high()]

    def coeff(self, k: int) -> int:
        return self._terms.get(k, 0)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = VLaurent.coerce(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return VLaurent._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return VLaurent._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-VLaurent.coerce(other))

    def __rsub__(self, other):
        return VLaurent.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return VLaurent._raw({})
            return VLaurent._raw({k: c * other for k, c in self._terms.items()})
        other = VLaurent.coerce(other)
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (kb, cb), = b.items()
            return VLaurent._raw({k + kb: c * cb for k, c in a.items()})
        out: dict = {}
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = ka + kb
                out[k] = out.get(k, 0) + ca * cb
        return VLaurent._raw({k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_unit():
                raise ValueError("negative powers need a unit ±v^k")
            (k, c), = self._terms.items()
            return VLaurent.mono(c ** (-n), k * n)
        out = VLaurent.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k: int) -> "VLaurent":
        """Multiply by ``v^k``."""
        return VLaurent._raw({e + k: c for e, c in self._terms.items()})

    def substitute_sign(self) -> "VLaurent":
        """Image under ``v -> -v``."""
        return VLaurent._raw({k: (-c if k % 2 else c) for k, c in self._terms.items()})

    def exquo(self, other: "VLaurent") -> "VLaurent":
        """Exact division; raises ``ArithmeticError`` if not exact."""
        other = VLaurent.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero VLaurent")
        if self.is_zero():
            return self
        if other.is_monomial():
            (k0, c0), = other._terms.items()
            out = {}
            for k, c in self._terms.items():
                qd, r = divmod(c, c0)
                if r:
                    raise ArithmeticError("inexact division")
                out[k - k0] = qd
            return VLaurent._raw(out)
        f, lf = _to_dup(self)
        g, lg = _to_dup(other)
        try:
            h = dup_exquo(f, g, ZZ)
        except Exception as exc:
            raise ArithmeticError("inexact division") from exc
        return _from_dup(h, lf - lg)

    # -- evaluation -------------------------------------------------------

    def eval_one(self) -> int:
        return sum(self._terms.values())

    def __call__(self, z):
        """Numeric evaluation at ``v = z``."""
        return sum(c * z ** k for k, c in self._terms.items())

    def content_unit(self):
        return vl_content_unit(self)

    # -- comparison / hashing --------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = VLaurent.const(other)
        if not isinstance(other, VLaurent):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- text / json ------------------------------------------------------

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for k, c in sorted(self._terms.items(), reverse=True):
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                pw = "v" if k == 1 else f"v^{k}"
                body = pw if mag == 1 else f"{mag}*{pw}"
            parts.append(("-" if c < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self):
        return f"VLaurent('{self}')"

    def to_json(self) -> list:
        return [[k, str(c)] for k, c in sorted(self._terms.items())]

    @classmethod
    def from_json(cls, data: Iterable[Sequence]) -> "VLaurent":
        return cls({int(k): int(c) for k, c in data})

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def vl_arith(a: VLaurent, b: VLaurent, op: str) -> VLaurent:
    """Ring operation ``op`` in {'add', 'sub', 'mul'}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def vl_eval_one(a: VLaurent) -> int:
    """Value at ``v = 1`` (hence ``q = 1``): the sum of the coefficients."""
    return a.eval_one()


def vl_content_unit(a: VLaurent):
    """Split ``a = content * unit * primitive``.

    ``content > 0``; ``unit`` is ``±v^k``; ``primitive`` has coprime integer
    coefficients, lowest exponent 0 and positive leading coefficient.
    """
    if a.is_zero():
        raise ValueError("zero polynomial has no content decomposition")
    cont = 0
    for c in a._terms.values():
        cont = gcd(cont, c)
    low = a.low()
    sign = 1 if a.leading() > 0 else -1
    prim = VLaurent._raw({k - low: sign * c // cont for k, c in a._terms.items()})
    return cont, VLaurent.mono(sign, low), prim


# -- dense helpers (sympy dup: highest degree first) -------------------------

def _to_dup(a: VLaurent):
    if a.is_zero():
        return [], 0
    lo, hi = a.low(), a.high()
    t = a._terms
    return [ZZ(t.get(k, 0)) for k in range(hi, lo - 1, -1)], lo


def _from_dup(f, low: int) -> VLaurent:
    n = len(f)
    return VLaurent._raw({low + n - 1 - i: int(c) for i, c in enumerate(f) if c})


def vl_gcd(a: VLaurent, b: VLaurent) -> VLaurent:
    """Gcd in Z[v, 1/v], normalized to lowest exponent 0 and positive lead."""
    if a.is_zero():
        a, b = b, a
    if a.is_zero():
        return VLaurent()
    if b.is_zero():
        c, _, p = vl_content_unit(a)
        return p * c
    f, _ = _to_dup(a)
    g, _ = _to_dup(b)
    h = dup_gcd(f, g, ZZ)
    out = _from_dup(h, 0)
    out = out.shift(-out.low())
    return out if out.leading() > 0 else -out


class VRatio:
    """Element of Q(v) as a reduced fraction of two VLaurents.

    The denominator has positive leading coefficient and lowest exponent 0.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1, *, _reduced: bool = False):
        num = VLaurent.coerce(num)
        den = VLaurent.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("VRatio with zero denominator")
        if not _reduced:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den

    def __add__(self, other):
        other = _as_ratio(other)
        return VRatio(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return VRatio(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-_as_ratio(other))

    def __rsub__(self, other):
        return _as_ratio(other) - self

    def __mul__(self, other):
        other = _as_ratio(other)
        return VRatio(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_ratio(other)
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero VRatio")
        return VRatio(self.num * other.den, self.den * other.num)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, VLaurent)):
            other = VRatio(other)
        if not isinstance(other, VRatio):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __call__(self, z):
        return self.num(z) / self.den(z)

    def __repr__(self):
        if self.den == 1:
            return f"VRatio({self.num})"
        return f"VRatio(({self.num})/({self.den}))"


def _as_ratio(x) -> VRatio:
    return x if isinstance(x, VRatio) else VRatio(x)


def _reduce(num: VLaurent, den: VLaurent):
    if num.is_zero():
        return num, VLaurent.const(1)
    if den.is_monomial():
        (k, c), = den._terms.items()
        g = 0
        for x in num._terms.values():
            g = gcd(g, x)
        g = gcd(g, c)
        if c < 0:
            g = -g
        return (VLaurent._raw({e - k: x // g for e, x in num._terms.items()}),
                VLaurent.const(c // g))
    g = vl_gcd(num, den)
    if g != 1:
        num = num.exquo(g)
        den = den.exquo(g)
    low = den.low()
    sign = 1 if den.leading() > 0 else -1
    return num.shift(-low) * sign, den.shift(-low) * sign


class ExactMatrix:
    """Rectangular matrix of VLaurent entries."""

    def __init__(self, rows: Sequence[Sequence]):
        rows = [[VLaurent.coerce(x) for x in r] for r in rows]
        if not rows or not rows[0]:
            raise ValueError("matrix dimensions must be positive")
        ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        self.rows = rows
        self.shape = (len(rows), ncols)

    @classmethod
    def from_sparse(cls, nrows: int, ncols: int, entries: Mapping):
        """Build from ``{(i, j): VLaurent}``."""
        obj = cls.__new__(cls)
        if nrows <= 0 or ncols <= 0:
            raise ValueError("matrix dimensions must be positive")
        obj.rows = [[VLaurent() for _ in range(ncols)] for _ in range(nrows)]
        for (i, j), x in entries.items():
            obj.rows[i][j] = VLaurent.coerce(x)
        obj.shape = (nrows, ncols)
        return obj

    def apply(self, vec: Sequence) -> list:
        """Exact product ``M @ vec`` for VLaurent or VRatio vectors."""
        out = []
        for r in self.rows:
            acc = VRatio(0)
            for x, y in zip(r, vec):
                if x and y:
                    acc = acc + _as_ratio(y) * x
            out.append(acc)
        return out


def exact_kernel(M: ExactMatrix) -> list:
    """Basis of the right null space of ``M`` over Q(v).

    Sparse fraction-free Gauss-Jordan elimination over Z[v]: each row update
    ``r <- p*r - c*pivot_row`` is followed by removal of the row's polynomial
    content, which keeps coefficient growth in check.  Each returned column
    is cleared of denominators and made primitive, so entries are VRatios
    with denominator 1.
    """
    nrows, ncols = M.shape
    rows = []
    for r in M.rows:
        d = {j: x for j, x in enumerate(r) if x}
        if d:
            rows.append(_primitive_row(_dense_row(d)))
    pivots = {}  # col -> row
    active = list(range(len(rows)))
    for col in range(ncols):
        cands = [i for i in active if col in rows[i]]
        if not cands:
            continue
        piv = min(cands, key=lambda i: (len(rows[i]), len(rows[i][col]), i))
        active.remove(piv)
        prow = rows[piv]
        p = prow[col]
        for i in range(len(rows)):
            if i == piv or col not in rows[i]:
                continue
            r = rows[i]
            c = r[col]
            g = dup_gcd(p, c, ZZ)
            pm = dup_exquo(p, g, ZZ)
            cm = dup_exquo(c, g, ZZ)
            new = {}
            for j in set(r) | set(prow):
                if j == col:
                    continue
                a = dup_mul(pm, r[j], ZZ) if j in r else []
                b = dup_mul(cm, prow[j], ZZ) if j in prow else []
                x = dup_sub(a, b, ZZ)
                if x:
                    new[j] = x
            rows[i] = _primitive_row(new) if new else {}
        pivots[col] = piv
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        # x_f = 1, x_col = -R[piv][f] / R[piv][col]
        vec: list = [VRatio(0)] * ncols
        vec[f] = VRatio(1)
        for col, piv in pivots.items():
            r = rows[piv]
            if f in r:
                vec[col] = VRatio(-_from_dup(r[f], 0), _from_dup(r[col], 0))
        basis.append(_normalize_vector(vec))
    return basis


def _dense_row(d: dict) -> dict:
    low = min(x.low() for x in d.values())
    return {j: _to_dup(x.shift(-low))[0] + [ZZ(0)] * (x.low() - low) for j, x in d.items()}


def _primitive_row(d: dict) -> dict:
    g = None
    for x in d.values():
        g = x if g is None else dup_gcd(g, x, ZZ)
        if len(g) == 1 and abs(g[0]) == 1:
            break
    if g is not None and not (len(g) == 1 and abs(g[0]) == 1):
        d = {j: dup_exquo(x, g, ZZ) for j, x in d.items()}
    # strip common powers of v (trailing zeros in dense form)
    tz = min(_trailing_zeros(x) for x in d.values())
    if tz:
        d = {j: x[:-tz] for j, x in d.items()}
    return d


def _trailing_zeros(f) -> int:
    n = 0
    for c in reversed(f):
        if c:
            break
        n += 1
    return n


def _normalize_vector(vec: list) -> list:
    den = VLaurent.const(1)
    for x in vec:
        if x and x.den != 1:
            den = den * x.den.exquo(vl_gcd(den, x.den))
    nums = [(x * den).num if x else VLaurent() for x in vec]
    g = VLaurent()
    for x in nums:
        if x:
            g = vl_gcd(g, x) if g else vl_content_unit(x)[0] * vl_content_unit(x)[2]
    nums = [x.exquo(g) if x else x for x in nums]
    low = min(x.low() for x in nums if x)
    first = next(x for x in nums if x)
    sign = 1 if first.leading() > 0 else -1
    return [VRatio(x.shift(-low) * sign, _reduced=True) for x in nums]
