"""Exact coefficient arithmetic in Q(p1, ..., pk).

Every coefficient appearing anywhere in the engine is a Scalar: a rational
function of the declared parameters (and, for ansatz presentations, the
declared unknowns) with exact rational coefficients.  Scalars from different
fields never mix; arithmetic between them raises ScalarError.

The representation is backed by sympy's sparse rational function fields,
which keep every element reduced (gcd of numerator and denominator is 1,
denominator has a positive leading coefficient in graded-lex order), so
structural equality of canonical forms is plain equality of the wrapped
elements.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dfield
from fractions import Fraction

from sympy import QQ
from sympy.polys.fields import field as _sympy_field
from sympy.polys.orderings import grlex


class ScalarError(Exception):
    pass


_FIELDS: dict[tuple[str, ...], "ScalarField"] = {}

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*\Z")


def scalar_field(params=()) -> "ScalarField":
    """Return the (interned) field Q(params).  Order of params matters."""
    key = tuple(params)
    try:
        return _FIELDS[key]
    except KeyError:
        pass
    fld = ScalarField(key)
    _FIELDS[key] = fld
    return fld


class ScalarField:
    """The field Q(p1, ..., pk).  Use scalar_field() to construct."""

    def __init__(self, params: tuple[str, ...]):
        for p in params:
            if not _NAME_RE.match(p):
                raise ScalarError("bad parameter name %r" % (p,))
        if len(set(params)) != len(params):
            raise ScalarError("duplicate parameter names in %r" % (params,))
        self.params = params
        ret = _sympy_field(list(params), QQ, order=grlex)
        self._field = ret[0]
        self._gens = dict(zip(params, ret[1:]))
        self._ints: dict[int, object] = {}
        self.zero = Scalar(self, self._field.zero)
        self.one = Scalar(self, self._field.one)

    def __repr__(self):
        return "ScalarField(%s)" % (", ".join(self.params) or "Q")

    def param(self, name: str) -> "Scalar":
        try:
            return Scalar(self, self._gens[name])
        except KeyError:
            raise ScalarError("unknown parameter %r" % (name,)) from None

    def _int_raw(self, n: int):
        # ints must become ground elements up front: sympy's zero fast paths
        # would otherwise leak bare ints into later arithmetic
        try:
            return self._ints[n]
        except KeyError:
            r = self._field.ground_new(QQ(n))
            if -64 <= n <= 64:
                self._ints[n] = r
            return r

    def from_int(self, n: int) -> "Scalar":
        return Scalar(self, self._int_raw(n))

    def from_fraction(self, q: Fraction) -> "Scalar":
        return Scalar(self, self._field.ground_new(QQ(q.numerator, q.denominator)))

    def convert(self, x) -> "Scalar":
        if isinstance(x, Scalar):
            if x.field is not self:
                raise ScalarError("Scalar from a different field")
            return x
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, Fraction):
            return self.from_fraction(x)
        raise ScalarError("cannot convert %r to a Scalar" % (x,))

    def _coerce_raw(self, x):
        if isinstance(x, Scalar):
            if x.field is not self:
                raise ScalarError("Scalar from a different field")
            return x.raw
        if isinstance(x, int):
            return self._int_raw(x)
        if isinstance(x, Fraction):
            return self._field.ground_new(QQ(x.numerator, x.denominator))
        return None

    def parse(self, text: str) -> "Scalar":
        return _parse_scalar(self, text)

    def render(self, s: "Scalar") -> str:
        return _render(self, s.raw)

    def transfer(self, s: "Scalar", target: "ScalarField") -> "Scalar":
        """Rebuild s in target, which must declare every parameter s uses."""
        pos = []
        for i, p in enumerate(self.params):
            j = target.params.index(p) if p in target.params else -1
            pos.append(j)
        tf = target._field

        def move(poly):
            d = {}
            for exps, coeff in poly.terms():
                texps = [0] * len(target.params)
                for i, e in enumerate(exps):
                    if e:
                        if pos[i] < 0:
                            raise ScalarError(
                                "parameter %r not present in target field"
                                % (self.params[i],))
                        texps[pos[i]] = e
                d[tuple(texps)] = coeff
            return tf.ring.from_dict(d)

        num = move(s.raw.numer)
        den = move(s.raw.denom)
        return Scalar(target, tf.new(num, den))


class Scalar:
    """An element of a ScalarField, kept in reduced canonical form."""

    __slots__ = ("field", "raw")

    def __init__(self, fld: ScalarField, raw):
        self.field = fld
        self.raw = raw

    def __bool__(self):
        return bool(self.raw)

    @property
    def is_zero(self) -> bool:
        return not self.raw

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field is other.field and self.raw == other.raw
        if isinstance(other, (int, Fraction)):
            return self.raw == self.field._coerce_raw(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.raw)

    def __add__(self, other):
        r = self.field._coerce_raw(other)
        if r is None:
            return NotImplemented
        return Scalar(self.field, self.raw + r)

    __radd__ = __add__

    def __sub__(self, other):
        r = self.field._coerce_raw(other)
        if r is None:
            return NotImplemented
        return Scalar(self.field, self.raw - r)

    def __rsub__(self, other):
        r = self.field._coerce_raw(other)
        if r is None:
            return NotImplemented
        return Scalar(self.field, r - self.raw)

    def __neg__(self):
        return Scalar(self.field, -self.raw)

    def __mul__(self, other):
        r = self.field._coerce_raw(other)
        if r is None:
            return NotImplemented
        return Scalar(self.field, self.raw * r)

    __rmul__ = __mul__

    def __truediv__(self, other):
        r = self.field._coerce_raw(other)
        if r is None:
            return NotImplemented
        try:
            return Scalar(self.field, self.raw / r)
        except ZeroDivisionError:
            raise ScalarError("division by zero") from None

    def __rtruediv__(self, other):
        r = self.field._coerce_raw(other)
        if r is None:
            return NotImplemented
        try:
            return Scalar(self.field, r / self.raw)
        except ZeroDivisionError:
            raise ScalarError("division by zero") from None

    def __pow__(self, n: int):
        try:
            return Scalar(self.field, self.raw ** n)
        except ZeroDivisionError:
            raise ScalarError("division by zero") from None

    def __str__(self):
        return _render(self.field, self.raw)

    def __repr__(self):
        return "Scalar(%s)" % (self,)

    def evaluate(self, assignment: dict[str, Fraction]) -> Fraction:
        """Evaluate at rational parameter values.  All params must be given."""
        fld = self.field
        pairs = []
        for i, p in enumerate(fld.params):
            if p not in assignment:
                raise ScalarError("no value for parameter %r" % (p,))
            v = Fraction(assignment[p])
            pairs.append((fld._field.ring.gens[i], QQ(v.numerator, v.denominator)))
        num = self.raw.numer.evaluate(pairs) if pairs else self.raw.numer.coeff(1)
        den = self.raw.denom.evaluate(pairs) if pairs else self.raw.denom.coeff(1)
        nf = Fraction(int(num.numerator), int(num.denominator))
        df = Fraction(int(den.numerator), int(den.denominator))
        if df == 0:
            raise ScalarError("denominator vanishes at the given point")
        return nf / df

    def complexity(self) -> int:
        return len(self.raw.numer.terms()) + len(self.raw.denom.terms())


def canonicalize(s: Scalar) -> Scalar:
    """Return the canonical form of s.

    The backing representation is already canonical (reduced, denominator
    with positive leading coefficient), so this verifies the invariants and
    returns s unchanged.  Idempotent by construction.
    """
    den = s.raw.denom
    if not den:
        raise ScalarError("zero denominator")
    lc = den.LC
    if lc <= 0:
        raise ScalarError("denominator not normalized: leading coefficient %s" % (lc,))
    return s


# -- rendering ---------------------------------------------------------------

def _fmt_q(c) -> str:
    n, d = c.numerator, c.denominator
    return str(n) if d == 1 else "%s/%s" % (n, d)


def _fmt_poly(poly, names) -> str:
    terms = list(poly.terms())
    if not terms:
        return "0"
    out = []
    for exps, coeff in terms:
        neg = coeff < 0
        ac = -coeff if neg else coeff
        mono = "*".join(
            nm if e == 1 else "%s^%d" % (nm, e)
            for nm, e in zip(names, exps) if e)
        if not mono:
            body = _fmt_q(ac)
        elif ac == 1:
            body = mono
        else:
            body = "%s*%s" % (_fmt_q(ac), mono)
        if not out:
            out.append("-" + body if neg else body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def _render(fld: ScalarField, raw) -> str:
    num, den = raw.numer, raw.denom
    ns = _fmt_poly(num, fld.params)
    if den == 1:
        return ns
    if len(num.terms()) > 1:
        ns = "(%s)" % ns
    dterms = den.terms()
    if len(dterms) == 1 and not any(dterms[0][0]):
        ds = _fmt_q(dterms[0][1])
    else:
        ds = "(%s)" % _fmt_poly(den, fld.params)
    return "%s/%s" % (ns, ds)


# -- parsing -----------------------------------------------------------------

_TOK = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([-+*/^()]))")


def _tokenize_scalar(text: str):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOK.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise ScalarError("bad character %r in scalar" % (text[pos],))
            break
        if m.group(1) is not None:
            toks.append(("int", int(m.group(1))))
        elif m.group(2) is not None:
            toks.append(("name", m.group(2)))
        else:
            toks.append((m.group(3), None))
        pos = m.end()
    toks.append(("end", None))
    return toks


class _ScalarParser:
    def __init__(self, fld, toks):
        self.fld = fld
        self.toks = toks
        self.i = 0

    def peek(self):
        return self.toks[self.i][0]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expr(self) -> Scalar:
        v = self.term()
        while self.peek() in ("+", "-"):
            op, _ = self.next()
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self) -> Scalar:
        v = self.unary()
        while self.peek() in ("*", "/"):
            op, _ = self.next()
            w = self.unary()
            v = v * w if op == "*" else v / w
        return v

    def unary(self) -> Scalar:
        if self.peek() == "-":
            self.next()
            return -self.unary()
        if self.peek() == "+":
            self.next()
            return self.unary()
        return self.power()

    def power(self) -> Scalar:
        v = self.atom()
        if self.peek() == "^":
            self.next()
            kind, val = self.next()
            neg = False
            if kind == "-":
                neg = True
                kind, val = self.next()
            if kind != "int":
                raise ScalarError("exponent must be an integer")
            v = v ** (-val if neg else val)
        return v

    def atom(self) -> Scalar:
        kind, val = self.next()
        if kind == "int":
            return self.fld.from_int(val)
        if kind == "name":
            return self.fld.param(val)
        if kind == "(":
            v = self.expr()
            kind, _ = self.next()
            if kind != ")":
                raise ScalarError("expected ')'")
            return v
        raise ScalarError("unexpected token %r in scalar" % (kind,))


def _parse_scalar(fld: ScalarField, text: str) -> Scalar:
    p = _ScalarParser(fld, _tokenize_scalar(text))
    v = p.expr()
    if p.peek() != "end":
        raise ScalarError("trailing input in scalar: %r" % (text,))
    return v


def affine_split(s: Scalar, unknowns) -> tuple[Scalar, list[Scalar]]:
    """Write s = c0 + sum_u c_u * u over the listed parameters.

    Requires s to be affine in the unknowns taken jointly, with none of
    them in the denominator; raises ScalarError otherwise.  The returned
    Scalars live in s.field and are themselves unknown-free.
    """
    fld = s.field
    idx = [fld.params.index(u) for u in unknowns]
    gens = [fld._field.ring.gens[i] for i in idx]
    den = s.raw.denom
    if any(den.degree(g) > 0 for g in gens):
        raise ScalarError("unknown in a denominator: %s" % (s,))
    num = s.raw.numer
    for exps, _ in num.terms():
        if sum(exps[i] for i in idx) > 1:
            raise ScalarError("not affine in the unknowns: %s" % (s,))
    coeffs = [Scalar(fld, fld._field.new(num.diff(g), den)) for g in gens]
    c0 = s
    for u, cu in zip(unknowns, coeffs):
        c0 = c0 - cu * fld.param(u)
    return c0, coeffs


# -- linear systems ----------------------------------------------------------

@dataclass
class LinearSystem:
    """Rows (coeffs, rhs) of linear equations sum(coeffs[i]*u[i]) = rhs."""

    field: ScalarField
    unknowns: tuple[str, ...]
    rows: list = dfield(default_factory=list)

    def add_row(self, coeffs, rhs) -> None:
        coeffs = tuple(self.field.convert(c) for c in coeffs)
        rhs = self.field.convert(rhs)
        if len(coeffs) != len(self.unknowns):
            raise ScalarError("row length %d != %d unknowns"
                              % (len(coeffs), len(self.unknowns)))
        if all(c.is_zero for c in coeffs) and rhs.is_zero:
            return
        self.rows.append((coeffs, rhs))

    def is_homogeneous(self) -> bool:
        return all(rhs.is_zero for _, rhs in self.rows)

    def sort_rows(self) -> None:
        keyed = {}
        for coeffs, rhs in self.rows:
            k = tuple(str(c) for c in coeffs) + (str(rhs),)
            keyed.setdefault(k, (coeffs, rhs))
        self.rows = [keyed[k] for k in sorted(keyed)]


def nullspace(system: LinearSystem) -> list[list[Scalar]]:
    """Basis of the kernel of the coefficient matrix (rhs ignored).

    Gaussian elimination over the field; the pivot in each column is the
    candidate entry with the fewest monomials.  Each basis vector is scaled
    so its first nonzero coordinate is 1.
    """
    fld = system.field
    n = len(system.unknowns)
    rows = [list(coeffs) for coeffs, _ in system.rows]
    pivots = []
    r = 0
    for col in range(n):
        best = None
        for i in range(r, len(rows)):
            e = rows[i][col]
            if not e.is_zero:
                if best is None or e.complexity() < rows[best][col].complexity():
                    best = i
        if best is None:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        piv = rows[r][col]
        rows[r] = [e / piv for e in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][col].is_zero:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append((r, col))
        r += 1
    pivot_cols = {c for _, c in pivots}
    basis = []
    for free in range(n):
        if free in pivot_cols:
            continue
        v = [fld.zero] * n
        v[free] = fld.one
        for ri, cj in pivots:
            v[cj] = -rows[ri][free]
        first = next(c for c in v if not c.is_zero)
        basis.append([c / first for c in v])
    return basis
