"""The q-Weyl algebra on the operator pairs (mx, lx) and (my, ly).

Within each pair ``l * m = q * m * l``; operators from different pairs
commute.  Elements are stored in the normal order

    coef * mx^a lx^b my^c ly^d

with ``coef`` a :class:`VLaurent` in ``v = q^(1/2)`` and Laurent exponents
allowed everywhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import gcd
from typing import Iterator, Mapping

from .exactalg import VLaurent

__all__ = [
    "NCPoly",
    "CommPoly2",
    "ParseError",
    "nc_mul",
    "nc_parse",
    "nc_substitute_ly",
    "nc_rescale_lx",
    "nc_classical_limit",
    "nc_unit_normalize",
    "GENERATORS",
]

GENERATORS = ("mx", "lx", "my", "ly")
_ONE = VLaurent.const(1)


def _mono_key(m):
    a, b, c, d = m
    return (b, a, c, d)


class NCPoly:
    """Normal-ordered noncommutative Laurent polynomial.

    ``terms`` maps ``(a, b, c, d)`` (exponents of mx, lx, my, ly) to a
    nonzero VLaurent coefficient.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | None = None):
        out = {}
        for m, c in (terms or {}).items():
            c = VLaurent.coerce(c)
            if c:
                out[tuple(int(e) for e in m)] = c
        self._terms = out

    @classmethod
    def _raw(cls, terms: dict) -> "NCPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def gen(cls, name: str, power: int = 1) -> "NCPoly":
        mono = [0, 0, 0, 0]
        mono[GENERATORS.index(name)] = power
        return cls._raw({tuple(mono): _ONE})

    @classmethod
    def scalar(cls, c) -> "NCPoly":
        c = VLaurent.coerce(c)
        return cls._raw({(0, 0, 0, 0): c} if c else {})

    @classmethod
    def monomial(cls, mono, coef=1) -> "NCPoly":
        return cls({tuple(mono): coef})

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self) -> Iterator:
        return iter(sorted(self._terms.items(), key=lambda kv: _mono_key(kv[0]), reverse=True))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self, name: str) -> int:
        """Largest exponent of generator ``name`` (0 for the zero polynomial)."""
        i = GENERATORS.index(name)
        return max((m[i] for m in self._terms), default=0)

    def min_degree(self, name: str) -> int:
        i = GENERATORS.index(name)
        return min((m[i] for m in self._terms), default=0)

    def is_free_of(self, *names: str) -> bool:
        idx = [GENERATORS.index(n) for n in names]
        return all(m[i] == 0 for m in self._terms for i in idx)

    def coefficient(self, mono) -> VLaurent:
        return self._terms.get(tuple(mono), VLaurent())

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out[m] + c if m in out else c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return NCPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return NCPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        return nc_mul(self, _coerce(other))

    def __rmul__(self, other):
        return nc_mul(_coerce(other), self)

    def __pow__(self, n: int):
        if n >= 0:
            out = NCPoly.scalar(1)
            for _ in range(n):
                out = nc_mul(out, self)
            return out
        if len(self._terms) != 1:
            raise ValueError("negative powers need a monomial")
        (m, c), = self._terms.items()
        a, b, cy, d = m
        # (c * mx^a lx^b my^c ly^d)^-1 = ly^-d my^-c lx^-b mx^-a c^-1
        inv = (NCPoly.gen("ly", -d) * NCPoly.gen("my", -cy)
               * NCPoly.gen("lx", -b) * NCPoly.gen("mx", -a)).scale(c ** -1)
        return inv ** (-n)

    def scale(self, c) -> "NCPoly":
        c = VLaurent.coerce(c)
        if not c:
            return NCPoly()
        return NCPoly._raw({m: x * c for m, x in self._terms.items()})

    def shift_mono(self, mono) -> "NCPoly":
        """Left multiplication by the normal-ordered monomial ``mono``."""
        return nc_mul(NCPoly._raw({tuple(mono): _ONE}), self)

    def map_coefficients(self, fn) -> "NCPoly":
        return NCPoly({m: fn(c) for m, c in self._terms.items()})

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, VLaurent)):
            other = NCPoly.scalar(other)
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    # -- text / json ------------------------------------------------------

    def __str__(self):
        return nc_format(self)

    def __repr__(self):
        return f"NCPoly('{nc_format(self)}')"

    def to_json(self) -> list:
        return [{"mono": list(m), "coef": c.to_json()} for m, c in self.items()]

    @classmethod
    def from_json(cls, data) -> "NCPoly":
        return cls({tuple(t["mono"]): VLaurent.from_json(t["coef"]) for t in data})

    def evaluate_coefficients(self, v) -> dict:
        """Numeric coefficients at ``v``: ``{mono: complex}``."""
        return {m: c(v) for m, c in self._terms.items()}


def _coerce(x) -> NCPoly:
    if isinstance(x, NCPoly):
        return x
    return NCPoly.scalar(x)


def nc_mul(p: NCPoly, r: NCPoly) -> NCPoly:
    """Exact product in normal order.

    Moving ``lx^b`` past ``mx^a'`` contributes ``q^(b*a')``; likewise for
    the y-pair.  With ``q = v^2`` the factor is ``v^(2*(b*a' + d*c'))``.
    """
    out: dict = {}
    for (a, b, c, d), x in p._terms.items():
        for (a2, b2, c2, d2), y in r._terms.items():
            m = (a + a2, b + b2, c + c2, d + d2)
            z = (x * y).shift(2 * (b * a2 + d * c2))
            if m in out:
                z = out[m] + z
                if z:
                    out[m] = z
                else:
                    del out[m]
            else:
                out[m] = z
    return NCPoly._raw(out)


def nc_substitute_ly(p: NCPoly, value: int = 1) -> NCPoly:
    """Set ``ly = 1`` termwise; valid since ly is rightmost in normal order."""
    if value != 1:
        raise ValueError("only ly = 1 is supported")
    out = NCPoly()
    for (a, b, c, _d), x in p._terms.items():
        out = out + NCPoly._raw({(a, b, c, 0): x})
    return out


def nc_rescale_lx(p: NCPoly, lam: VLaurent) -> NCPoly:
    """Replace ``lx`` by ``lam * lx`` for a unit ``lam = ±v^k``."""
    lam = VLaurent.coerce(lam)
    if not lam.is_unit():
        raise ValueError("rescaling factor must be ±v^k")
    return NCPoly._raw({m: x * lam ** m[1] for m, x in p._terms.items()})


def nc_rescale_mx(p: NCPoly, lam: VLaurent) -> NCPoly:
    lam = VLaurent.coerce(lam)
    if not lam.is_unit():
        raise ValueError("rescaling factor must be ±v^k")
    return NCPoly._raw({m: x * lam ** m[0] for m, x in p._terms.items()})


# -- commutative bivariate polynomials --------------------------------------

@dataclass(frozen=True)
class CommPoly2:
    """Integer Laurent polynomial in commuting variables ``m`` and ``l``."""

    terms: tuple  # sorted tuple of ((i, j), coef)

    @classmethod
    def from_dict(cls, d: Mapping) -> "CommPoly2":
        return cls(tuple(sorted((tuple(k), int(c)) for k, c in d.items() if c)))

    def as_dict(self) -> dict:
        return dict(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        d = self.as_dict()
        for k, c in other.terms:
            d[k] = d.get(k, 0) + c
        return CommPoly2.from_dict(d)

    def __neg__(self):
        return CommPoly2(tuple((k, -c) for k, c in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return CommPoly2.from_dict({k: c * other for k, c in self.terms})
        d: dict = {}
        for (i, j), c in self.terms:
            for (i2, j2), c2 in other.terms:
                k = (i + i2, j + j2)
                d[k] = d.get(k, 0) + c * c2
        return CommPoly2.from_dict(d)

    def substitute_m_power(self, k: int) -> "CommPoly2":
        """Replace ``m`` by ``m^k`` (re-index exponents)."""
        return CommPoly2.from_dict({(i * k, j): c for (i, j), c in self.terms})

    def normalize_unit(self):
        """Divide out the monomial content and sign: returns ``(sign, (i, j), rest)``."""
        if not self.terms:
            raise ValueError("zero polynomial")
        i0 = min(i for (i, _), _ in self.terms)
        j0 = min(j for (_, j), _ in self.terms)
        lead = max(self.terms)[1]
        sign = 1 if lead > 0 else -1
        rest = CommPoly2.from_dict({(i - i0, j - j0): sign * c for (i, j), c in self.terms})
        return sign, (i0, j0), rest

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self.terms, key=lambda t: (t[0][1], t[0][0]), reverse=True):
            mono = "*".join(
                s for s in (_pw("m", i), _pw("l", j)) if s
            )
            mag = abs(c)
            body = mono if (mag == 1 and mono) else (f"{mag}*{mono}" if mono else str(mag))
            parts.append(("-" if c < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


def _pw(name, e):
    if e == 0:
        return ""
    return name if e == 1 else f"{name}^{e}"


def nc_classical_limit(p: NCPoly) -> CommPoly2:
    """Set ``v = 1`` and let ``mx -> M``, ``lx -> L`` commute."""
    if not p.is_free_of("my", "ly"):
        raise ValueError("classical limit requires y-free input")
    d: dict = {}
    for (a, b, _, _), x in p._terms.items():
        d[(a, b)] = d.get((a, b), 0) + x.eval_one()
    return CommPoly2.from_dict(d)


def nc_unit_normalize(p: NCPoly):
    """Split off a unit so that ``p = unit * normalized``.

    ``unit`` is returned as ``(content, scalar, mono)`` where ``scalar`` is
    ``±v^k`` and ``mono`` a normal-ordered monomial; ``p`` equals
    ``content * scalar * mono * normalized`` (mono acting on the left).
    The normalized polynomial has exponent-minimal monomial support, integer
    coefficients with gcd 1, and its greatest monomial (order: lx, mx, my,
    ly) carries a coefficient positive at ``v = 1`` with lowest v-power 0.
    """
    if p.is_zero():
        raise ValueError("zero polynomial has no unit normalization")
    mono = tuple(min(m[i] for m in p._terms) for i in range(4))
    stripped = nc_mul(NCPoly.monomial(tuple(-e for e in mono)), p)
    c_int = 0
    for x in stripped._terms.values():
        for k in x._terms.values():
            c_int = gcd(c_int, k)
    lead = stripped._terms[max(stripped._terms, key=_mono_key)]
    at_one = lead.eval_one()
    sign = 1 if at_one > 0 or (at_one == 0 and lead.leading() > 0) else -1
    low = lead.low()
    normalized = NCPoly._raw(
        {m: VLaurent._raw({k - low: sign * c // c_int for k, c in x._terms.items()})
         for m, x in stripped._terms.items()}
    )
    return (c_int, VLaurent.mono(sign, low), mono), normalized


def unit_as_poly(unit) -> NCPoly:
    content, scalar, mono = unit
    return NCPoly.monomial(mono, scalar * content)


# -- text format ------------------------------------------------------------

def _coef_text(x: VLaurent) -> str:
    """Coefficient as text in q-powers: v^k -> q^(k/2)."""
    parts = []
    for k, c in sorted(x._terms.items(), reverse=True):
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            pw = _q_power(k)
            body = pw if mag == 1 else f"{mag}*{pw}"
        parts.append(("-" if c < 0 else "+", body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


def _q_power(k: int) -> str:
    if k % 2 == 0:
        e = k // 2
        return "q" if e == 1 else f"q^({e})" if e < 0 else f"q^{e}"
    return f"q^({k}/2)"


def _mono_text(m) -> str:
    out = []
    for name, e in zip(GENERATORS, m):
        if e == 1:
            out.append(name)
        elif e > 0:
            out.append(f"{name}^{e}")
        elif e < 0:
            out.append(f"{name}^({e})")
    return "*".join(out)


def nc_format(p: NCPoly) -> str:
    if p.is_zero():
        return "0"
    chunks = []
    for m, x in p.items():
        mono = _mono_text(m)
        if x.is_monomial():
            (k, c), = x._terms.items()
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            scal = "" if k == 0 else _q_power(k)
            if mag != 1:
                scal = f"{mag}*{scal}" if scal else str(mag)
            body = "*".join(s for s in (scal, mono) if s) or "1"
        else:
            sign = "+"
            body = f"({_coef_text(x)})" + (f"*{mono}" if mono else "")
        chunks.append((sign, body))
    s = ("-" if chunks[0][0] == "-" else "") + chunks[0][1]
    for sign, body in chunks[1:]:
        s += f" {sign} {body}"
    return s


# -- parser -----------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]\w*)|(\S))")


def _tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("int", int(m.group(1)), start))
        elif m.group(2):
            toks.append(("name", m.group(2), start))
        else:
            toks.append(("op", m.group(3), start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    # expr   := ['+'|'-'] term (('+'|'-') term)*
    # term   := factor ('*' factor)*
    # factor := atom ['^' exponent]
    # atom   := INT | name | '(' expr ')'

    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            raise ParseError(f"expected {op!r}", t[2])
        return t

    def parse(self) -> NCPoly:
        out = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected {t[1]!r}", t[2])
        return out

    def expr(self) -> NCPoly:
        sign = 1
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            sign = -1 if t[1] == "-" else 1
        out = self.term()
        if sign < 0:
            out = -out
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "+-":
                self.take()
                rhs = self.term()
                out = out + rhs if t[1] == "+" else out - rhs
            else:
                return out

    def term(self) -> NCPoly:
        out = self.factor()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] == "*":
                self.take()
                out = nc_mul(out, self.factor())
            elif t[0] in ("name", "int") or (t[0] == "op" and t[1] == "("):
                raise ParseError("juxtaposition is not allowed; use '*'", t[2])
            else:
                return out

    def factor(self) -> NCPoly:
        t = self.peek()
        kind, val, pos = t
        if kind == "name" and val == "q":
            self.take()
            k2 = 2
            if self._at("^"):
                self.take()
                k2 = self.exponent(allow_half=True)
            return NCPoly.scalar(VLaurent.mono(1, k2))
        base = self.atom()
        if self._at("^"):
            self.take()
            e = self.exponent(allow_half=False) // 2
            return self._power(base, e, pos)
        return base

    def _power(self, base: NCPoly, e: int, pos: int) -> NCPoly:
        if e >= 0:
            out = NCPoly.scalar(1)
            for _ in range(e):
                out = nc_mul(out, base)
            return out
        if len(base) != 1:
            raise ParseError("negative power of a non-monomial", pos)
        (m, c), = base.terms.items()
        if not c.is_unit():
            raise ParseError("negative power of a non-unit coefficient", pos)
        if sum(1 for x in m if x) > 1:
            raise ParseError("negative power of a composite monomial", pos)
        inv = NCPoly.monomial(tuple(-x for x in m), c ** -1)
        out = NCPoly.scalar(1)
        for _ in range(-e):
            out = nc_mul(out, inv)
        return out

    def _at(self, op):
        t = self.peek()
        return t[0] == "op" and t[1] == op

    def exponent(self, allow_half: bool) -> int:
        """Returns twice the exponent."""
        t = self.peek()
        if t[0] == "int":
            self.take()
            return 2 * t[1]
        if t[0] == "op" and t[1] == "-":
            self.take()
            t = self.take()
            if t[0] != "int":
                raise ParseError("expected integer exponent", t[2])
            return -2 * t[1]
        if t[0] == "op" and t[1] == "(":
            self.take()
            sign = 1
            if self._at("-"):
                self.take()
                sign = -1
            elif self._at("+"):
                self.take()
            n = self.take()
            if n[0] != "int":
                raise ParseError("expected integer exponent", n[2])
            num = sign * n[1]
            if self._at("/"):
                slash = self.take()
                d = self.take()
                if d[0] != "int" or d[1] != 2 or not allow_half:
                    raise ParseError("only q admits half-integer exponents k/2", slash[2])
                self.expect(")")
                return num
            self.expect(")")
            return 2 * num
        raise ParseError("expected exponent", t[2])

    def atom(self) -> NCPoly:
        kind, val, pos = self.take()
        if kind == "int":
            return NCPoly.scalar(val)
        if kind == "name":
            if val in GENERATORS:
                return NCPoly.gen(val)
            raise ParseError(f"unknown symbol {val!r}", pos)
        if kind == "op" and val == "(":
            out = self.expr()
            self.expect(")")
            return out
        raise ParseError(f"unexpected {val!r}" if val else "unexpected end of input", pos)


def nc_parse(text: str) -> NCPoly:
    """Parse an expression in mx, lx, my, ly, q with literal operator order."""
    return _Parser(text).parse()
