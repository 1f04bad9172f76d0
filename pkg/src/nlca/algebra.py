"""Generators, tensor monomials and presentations.

A presentation declares a finite set of generators, each with a parity, a
positive degree and optionally a conformal weight, plus a lambda-bracket
table on generator pairs.  The free objects built on top of the generators
are T-monomials (tensor words in T^n-derivatives of generators) and their
finite linear combinations (TPoly).

Degrees grade the tensor algebra: deg(T^n a) = deg(a), deg of a word is the
sum over its factors, the empty word has degree 0.  Conformal weight of
T^n a is weight(a) + n.  Parity of a word is the mod-2 sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import NamedTuple

from .scalars import Scalar, ScalarError, scalar_field


class AlgebraError(Exception):
    pass


class RGen(NamedTuple):
    """T^n applied to the generator with declaration index `gen`."""
    gen: int
    n: int


TMono = tuple  # tuple[RGen, ...]


@dataclass(frozen=True)
class GeneratorDecl:
    name: str
    parity: int
    degree: Fraction
    weight: Fraction | None
    index: int

    def __post_init__(self):
        if self.parity not in (0, 1):
            raise AlgebraError("parity of %s must be 0 or 1" % (self.name,))
        if self.degree <= 0:
            raise AlgebraError("degree of %s must be positive" % (self.name,))


class TPoly:
    """Finite Scalar-linear combination of T-monomials over one presentation."""

    __slots__ = ("pres", "terms")

    def __init__(self, pres: "Presentation", terms: dict | None = None):
        self.pres = pres
        self.terms = terms if terms is not None else {}

    def _check(self, other: "TPoly"):
        if other.pres is not self.pres:
            raise AlgebraError("operands belong to different presentations")

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, TPoly):
            return NotImplemented
        return self.pres is other.pres and self.terms == other.terms

    def __add__(self, other: "TPoly") -> "TPoly":
        self._check(other)
        out = dict(self.terms)
        for m, s in other.terms.items():
            acc = out.get(m)
            if acc is None:
                out[m] = s
            else:
                acc = acc + s
                if acc.is_zero:
                    del out[m]
                else:
                    out[m] = acc
        return TPoly(self.pres, out)

    def __sub__(self, other: "TPoly") -> "TPoly":
        return self + (-other)

    def __neg__(self) -> "TPoly":
        return TPoly(self.pres, {m: -s for m, s in self.terms.items()})

    def scale(self, s) -> "TPoly":
        s = self.pres.field.convert(s)
        if s.is_zero:
            return TPoly(self.pres)
        return TPoly(self.pres, {m: c * s for m, c in self.terms.items()})

    def tensor(self, other: "TPoly") -> "TPoly":
        self._check(other)
        out = {}
        for m1, s1 in self.terms.items():
            for m2, s2 in other.terms.items():
                _add_term(out, m1 + m2, s1 * s2)
        return TPoly(self.pres, out)

    def degree(self) -> Fraction | None:
        """Max degree over monomials; None for the zero element."""
        if not self.terms:
            return None
        return max(self.pres.mono_degree(m) for m in self.terms)

    def parity(self) -> int | None:
        """Common parity of all monomials, or None if mixed / zero."""
        ps = {self.pres.mono_parity(m) for m in self.terms}
        return ps.pop() if len(ps) == 1 else None

    def weights(self) -> set:
        return {self.pres.mono_weight(m) for m in self.terms}

    def __str__(self):
        return render_tpoly(self)

    def __repr__(self):
        return "TPoly(%s)" % (self,)


def _add_term(d: dict, mono: TMono, s: Scalar) -> None:
    acc = d.get(mono)
    if acc is None:
        if not s.is_zero:
            d[mono] = s
    else:
        acc = acc + s
        if acc.is_zero:
            del d[mono]
        else:
            d[mono] = acc


def apply_T(x: TPoly, k: int = 1) -> TPoly:
    """k-fold derivation T, Leibniz over tensor factors.  T(1) = 0."""
    for _ in range(k):
        out = {}
        for mono, s in x.terms.items():
            for p, rg in enumerate(mono):
                lifted = mono[:p] + (RGen(rg.gen, rg.n + 1),) + mono[p + 1:]
                _add_term(out, lifted, s)
        x = TPoly(x.pres, out)
    return x


class Presentation:
    """Generator declarations plus a lambda-bracket table.

    Treated as immutable once the bracket table is filled in; engines cache
    against object identity.
    """

    def __init__(self, generators, params=(), unknowns=(), name=None):
        self.name = name
        self.params = tuple(params)
        self.unknowns = tuple(unknowns)
        overlap = set(self.params) & set(self.unknowns)
        if overlap:
            raise AlgebraError("params and unknowns overlap: %s" % (sorted(overlap),))
        self.field = scalar_field(self.params + self.unknowns)
        decls = []
        for i, g in enumerate(generators):
            if isinstance(g, GeneratorDecl):
                g = GeneratorDecl(g.name, g.parity, Fraction(g.degree),
                                  None if g.weight is None else Fraction(g.weight), i)
            else:
                nm, parity, degree, weight = g
                g = GeneratorDecl(nm, parity, Fraction(degree),
                                  None if weight is None else Fraction(weight), i)
            decls.append(g)
        self.generators = tuple(decls)
        self.gen_index = {g.name: g.index for g in self.generators}
        if len(self.gen_index) != len(self.generators):
            raise AlgebraError("duplicate generator names")
        for g in self.generators:
            if g.name in self.field.params:
                raise AlgebraError("generator %r shadows a parameter" % (g.name,))
        self._table: dict[tuple[int, int], list[TPoly]] = {}
        self._pair_cache: dict[tuple[int, int], list[TPoly]] = {}

    def __repr__(self):
        return "Presentation(%s)" % (self.name or ",".join(g.name for g in self.generators))

    @property
    def weights_declared(self) -> bool:
        return all(g.weight is not None for g in self.generators)

    # -- element constructors ------------------------------------------------

    def rgen(self, name: str, n: int = 0) -> RGen:
        try:
            return RGen(self.gen_index[name], n)
        except KeyError:
            raise AlgebraError("unknown generator %r" % (name,)) from None

    def mono(self, *factors) -> TMono:
        out = []
        for f in factors:
            if isinstance(f, RGen):
                out.append(f)
            elif isinstance(f, str):
                out.append(self.rgen(f))
            else:
                nm, n = f
                out.append(self.rgen(nm, n))
        return tuple(out)

    def poly(self, terms) -> TPoly:
        """TPoly from {mono: coeff}; coeffs may be int/Fraction/Scalar."""
        out = {}
        for mono, c in terms.items():
            _add_term(out, mono, self.field.convert(c))
        return TPoly(self, out)

    def gen(self, name: str, n: int = 0) -> TPoly:
        return TPoly(self, {(self.rgen(name, n),): self.field.one})

    def unit(self) -> TPoly:
        return TPoly(self, {(): self.field.one})

    def zero(self) -> TPoly:
        return TPoly(self)

    # -- metadata ------------------------------------------------------------

    def rgen_degree(self, rg: RGen) -> Fraction:
        return self.generators[rg.gen].degree

    def rgen_parity(self, rg: RGen) -> int:
        return self.generators[rg.gen].parity

    def rgen_weight(self, rg: RGen) -> Fraction:
        w = self.generators[rg.gen].weight
        if w is None:
            raise AlgebraError("generator %s has no conformal weight"
                               % (self.generators[rg.gen].name,))
        return w + rg.n

    def rgen_key(self, rg: RGen):
        """Total order on T^n-generators: by degree, then declaration, then n."""
        return (self.generators[rg.gen].degree, rg.gen, rg.n)

    def mono_degree(self, mono: TMono) -> Fraction:
        return sum((self.rgen_degree(rg) for rg in mono), Fraction(0))

    def mono_parity(self, mono: TMono) -> int:
        return sum(self.rgen_parity(rg) for rg in mono) & 1

    def mono_weight(self, mono: TMono) -> Fraction:
        return sum((self.rgen_weight(rg) for rg in mono), Fraction(0))

    def parity_sign(self, a: TMono, b: TMono) -> int:
        """Koszul sign (-1)^{p(a)p(b)}."""
        return -1 if (self.mono_parity(a) and self.mono_parity(b)) else 1

    # -- bracket table -------------------------------------------------------

    def set_bracket(self, a: str, b: str, coeffs: dict[int, TPoly]) -> None:
        """Install [a_lambda b] as {lambda-power: TPoly coefficient}."""
        i, j = self.gen_index[a], self.gen_index[b]
        top = max(coeffs) if coeffs else 0
        lst = [TPoly(self)] * (top + 1)
        for k, x in coeffs.items():
            if not isinstance(x, TPoly) or x.pres is not self:
                raise AlgebraError("bracket coefficient must be a TPoly over this presentation")
            lst[k] = x
        while lst and lst[-1].is_zero:
            lst.pop()
        self._table[(i, j)] = lst
        self._pair_cache.clear()

    def given_pairs(self):
        return sorted(self._table)

    def pair_coeffs(self, i: int, j: int) -> list[TPoly]:
        """[a_i lambda a_j] as a coefficient list, deriving the missing
        orientation through skewsymmetry; absent pairs are zero."""
        key = (i, j)
        out = self._pair_cache.get(key)
        if out is not None:
            return out
        if key in self._table:
            out = self._table[key]
        elif (j, i) in self._table:
            given = self._table[(j, i)]
            sign = -self.parity_sign(((RGen(i, 0),)), ((RGen(j, 0),)))
            acc: list[dict] = [dict() for _ in range(len(given))]
            for n, Y in enumerate(given):
                for jj in range(n + 1):
                    # lambda^n X -> sum_j C(n,j) (-1)^n lambda^{n-j} T^j X
                    c = comb(n, jj) * (-1) ** n * sign
                    shifted = apply_T(Y, jj).scale(c)
                    for mono, s in shifted.terms.items():
                        _add_term(acc[n - jj], mono, s)
            out = [TPoly(self, d) for d in acc]
            while out and out[-1].is_zero:
                out.pop()
        else:
            out = []
        self._pair_cache[key] = out
        return out

    def bracket_r(self, x: RGen, y: RGen, var: str = "lambda"):
        """[T^m a_lambda T^n b] by sesquilinearity from the stored table."""
        from .formal import LPoly
        base = self.pair_coeffs(x.gen, y.gen)
        acc: dict[int, TPoly] = {}
        for k, X in enumerate(base):
            if X.is_zero:
                continue
            # right slot: (lambda+T)^n, binomially
            for jj in range(y.n + 1):
                Y = apply_T(X, y.n - jj).scale(comb(y.n, jj))
                if Y.is_zero:
                    continue
                kk = k + jj
                acc[kk] = acc[kk] + Y if kk in acc else Y
        # left slot: (-lambda)^m
        sgn = (-1) ** x.n
        out = {}
        for k, X in acc.items():
            X = X.scale(sgn)
            if not X.is_zero:
                out[(k + x.n,)] = X
        return LPoly(self, (var,), out)

    # -- validation ----------------------------------------------------------

    def validate(self) -> list[str]:
        """Structural table checks: grading, parity, weights, ansatz linearity.

        Returns human-readable violation strings; empty means well formed.
        """
        out = []
        for (i, j), lst in sorted(self._table.items()):
            gi, gj = self.generators[i], self.generators[j]
            bound = gi.degree + gj.degree
            want_parity = (gi.parity + gj.parity) & 1
            label = "[%s,%s]" % (gi.name, gj.name)
            for k, X in enumerate(lst):
                for mono in X.terms:
                    d = self.mono_degree(mono)
                    if not d < bound:
                        out.append(
                            "%s: lambda^%d term %s has degree %s, needs < %s"
                            % (label, k, _mono_str(self, mono), d, bound))
                    if self.mono_parity(mono) != want_parity:
                        out.append(
                            "%s: lambda^%d term %s has parity %d, expected %d"
                            % (label, k, _mono_str(self, mono),
                               self.mono_parity(mono), want_parity))
                if self.weights_declared:
                    want_w = gi.weight + gj.weight - k - 1
                    for mono in X.terms:
                        w = self.mono_weight(mono)
                        if w != want_w:
                            out.append(
                                "%s: lambda^%d term %s has weight %s, expected %s"
                                % (label, k, _mono_str(self, mono), w, want_w))
        if self.unknowns:
            out.extend(self._validate_linearity())
        return out

    def _validate_linearity(self) -> list[str]:
        out = []
        fld = self.field
        ugens = [fld._field.ring.gens[fld.params.index(u)] for u in self.unknowns]
        upos = [fld.params.index(u) for u in self.unknowns]
        for (i, j), lst in sorted(self._table.items()):
            label = "[%s,%s]" % (self.generators[i].name, self.generators[j].name)
            for k, X in enumerate(lst):
                for mono, s in X.terms.items():
                    for exps, _ in s.raw.numer.terms():
                        if sum(exps[p] for p in upos) > 1:
                            out.append(
                                "%s: lambda^%d coefficient of %s is not affine "
                                "in the unknowns" % (label, k, _mono_str(self, mono)))
                            break
                    if any(s.raw.denom.degree(g) > 0 for g in ugens):
                        out.append(
                            "%s: lambda^%d coefficient of %s has an unknown in "
                            "its denominator" % (label, k, _mono_str(self, mono)))
        return out


# -- rendering ---------------------------------------------------------------

def render_rgen(pres: Presentation, rg: RGen) -> str:
    nm = pres.generators[rg.gen].name
    if rg.n == 0:
        return nm
    if rg.n == 1:
        return "T " + nm
    return "T^%d %s" % (rg.n, nm)


def _mono_str(pres: Presentation, mono: TMono) -> str:
    if not mono:
        return "1"
    return ":%s:" % " ".join(render_rgen(pres, rg) for rg in mono)


def render_tmono(pres: Presentation, mono: TMono) -> str:
    return _mono_str(pres, mono)


def mono_sort_key(pres: Presentation, mono: TMono):
    return (len(mono), tuple(pres.rgen_key(rg) for rg in mono))


def scalar_prefix(s: Scalar):
    """Split a scalar coefficient into (sign, text or None for |coeff| 1)."""
    r = str(s)
    neg = r.startswith("-")
    if neg:
        r = r[1:]
    if r == "1":
        return neg, None
    if " " in r:
        r = "(%s)" % r
    return neg, r


def render_tpoly(x: TPoly) -> str:
    if x.is_zero:
        return "0"
    pres = x.pres
    parts = []
    for mono in sorted(x.terms, key=lambda m: mono_sort_key(pres, m)):
        neg, coeff = scalar_prefix(x.terms[mono])
        ms = _mono_str(pres, mono)
        body = ms if coeff is None else "%s*%s" % (coeff, ms)
        if not parts:
            parts.append("-" + body if neg else body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)
