"""Polynomials in formal lambda-variables with TPoly coefficients.

An LPoly is a finite sum  sum_e  lambda_1^{e_1} ... lambda_r^{e_r} X_e
with X_e a TPoly.  The variable names come from a fixed pool (lambda, mu,
nu, lambda4, ...) assigned outward-in by bracket nesting depth; every
operation keeps the variable tuple explicit, so coefficients can be read
off positionally.

The calculus here is what the bracket recursion consumes: definite
integrals with upper limit a variable, with upper limit T (as coefficient
pairs), and over [-T, 0]; the substitution lambda -> -lambda - T; binomial
expansion of one variable into a sum or difference of two; divided-power
expansion of e^{T d/dlambda} against a single lambda-slot.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from .algebra import (
    AlgebraError, Presentation, TPoly, apply_T, mono_sort_key, render_tmono,
    scalar_prefix)

VAR_POOL = ("lambda", "mu", "nu") + tuple("lambda%d" % i for i in range(4, 17))


def pool_var(depth: int) -> str:
    return VAR_POOL[depth]


def _var_order(name: str):
    try:
        return (0, VAR_POOL.index(name))
    except ValueError:
        return (1, name)


class LPoly:
    __slots__ = ("pres", "vars", "terms")

    def __init__(self, pres: Presentation, vars: tuple[str, ...] = (),
                 terms: dict | None = None):
        self.pres = pres
        self.vars = tuple(vars)
        self.terms = terms if terms is not None else {}

    @classmethod
    def from_tpoly(cls, x: TPoly, vars: tuple[str, ...] = ()) -> "LPoly":
        t = {}
        if not x.is_zero:
            t[(0,) * len(vars)] = x
        return cls(x.pres, vars, t)

    @classmethod
    def from_coeff_list(cls, pres: Presentation, var: str, coeffs) -> "LPoly":
        return cls(pres, (var,),
                   {(k,): X for k, X in enumerate(coeffs) if not X.is_zero})

    def coeff_list(self) -> list[TPoly]:
        """Dense coefficient list; only for univariate LPolys."""
        if len(self.vars) != 1:
            raise AlgebraError("coeff_list needs exactly one variable")
        top = max((e[0] for e in self.terms), default=-1)
        out = [self.pres.zero() for _ in range(top + 1)]
        for e, X in self.terms.items():
            out[e[0]] = X
        return out

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, LPoly):
            return NotImplemented
        return (self.pres is other.pres and self.vars == other.vars
                and self.terms == other.terms)

    def _check(self, other: "LPoly"):
        if other.pres is not self.pres or other.vars != self.vars:
            raise AlgebraError("operands differ in presentation or variables")

    def __add__(self, other: "LPoly") -> "LPoly":
        self._check(other)
        out = dict(self.terms)
        for e, X in other.terms.items():
            acc = out.get(e)
            acc = X if acc is None else acc + X
            if acc.is_zero:
                out.pop(e, None)
            else:
                out[e] = acc
        return LPoly(self.pres, self.vars, out)

    def __sub__(self, other: "LPoly") -> "LPoly":
        return self + (-other)

    def __neg__(self) -> "LPoly":
        return LPoly(self.pres, self.vars,
                     {e: -X for e, X in self.terms.items()})

    def scale(self, s) -> "LPoly":
        s = self.pres.field.convert(s)
        if s.is_zero:
            return LPoly(self.pres, self.vars)
        return LPoly(self.pres, self.vars,
                     {e: X.scale(s) for e, X in self.terms.items()})

    def map_coeffs(self, fn) -> "LPoly":
        out = {}
        for e, X in self.terms.items():
            Y = fn(X)
            if not Y.is_zero:
                out[e] = Y
        return LPoly(self.pres, self.vars, out)

    def shift(self, var: str, k: int = 1) -> "LPoly":
        """Multiply by var^k."""
        vi = self.vars.index(var)
        out = {}
        for e, X in self.terms.items():
            e2 = e[:vi] + (e[vi] + k,) + e[vi + 1:]
            out[e2] = X
        return LPoly(self.pres, self.vars, out)

    def coeff(self, exps) -> TPoly:
        return self.terms.get(tuple(exps), self.pres.zero())

    def constant(self) -> TPoly:
        return self.coeff((0,) * len(self.vars))

    def to_tpoly(self) -> TPoly:
        if any(any(e) for e in self.terms):
            raise AlgebraError("nonconstant in its variables")
        return self.constant()

    def var_degree(self, var: str) -> int:
        vi = self.vars.index(var)
        return max((e[vi] for e in self.terms), default=0)

    def with_vars(self, vars: tuple[str, ...]) -> "LPoly":
        """Reindex onto a variable tuple that contains all current vars."""
        vars = tuple(vars)
        pos = [vars.index(v) for v in self.vars]
        out = {}
        for e, X in self.terms.items():
            e2 = [0] * len(vars)
            for i, k in enumerate(e):
                e2[pos[i]] = k
            out[tuple(e2)] = X
        return LPoly(self.pres, vars, out)

    def __str__(self):
        return render_lpoly(self)

    def __repr__(self):
        return "LPoly(%s)" % (self,)


def integrate_upper(p: LPoly, var: str, upper):
    """Definite integral of p in `var` from 0.

    upper = a variable name: ordinary integration, var^m -> upper^{m+1}/(m+1);
    upper = "T": returns the (m, X_m) coefficient pairs of p in var, for the
    caller to pair X_m against T^{m+1}/(m+1) applied to its other operand;
    upper = None: integral over [-T, 0], var^m X -> (-1)^m T^{m+1} X/(m+1).
    """
    vi = p.vars.index(var)
    rest = p.vars[:vi] + p.vars[vi + 1:]
    if upper == "T":
        if p.vars != (var,):
            raise AlgebraError("coefficient-pair integration needs a univariate operand")
        return [(e[0], X) for e, X in sorted(p.terms.items())]
    if upper is None:
        out = {}
        for e, X in p.terms.items():
            m = e[vi]
            Y = apply_T(X, m + 1).scale(Fraction((-1) ** m, m + 1))
            if not Y.is_zero:
                e2 = e[:vi] + e[vi + 1:]
                acc = out.get(e2)
                acc = Y if acc is None else acc + Y
                if acc.is_zero:
                    out.pop(e2, None)
                else:
                    out[e2] = acc
        return LPoly(p.pres, rest, out)
    # upper is a variable name
    if upper in rest:
        tvars = rest
        ui = rest.index(upper)
    else:
        tvars = tuple(sorted(rest + (upper,), key=_var_order))
        ui = tvars.index(upper)
    pos = [tvars.index(v) for v in rest]
    out = {}
    for e, X in p.terms.items():
        m = e[vi]
        e_rest = e[:vi] + e[vi + 1:]
        e2 = [0] * len(tvars)
        for i, k in enumerate(e_rest):
            e2[pos[i]] = k
        e2[ui] += m + 1
        Y = X.scale(Fraction(1, m + 1))
        acc_key = tuple(e2)
        acc = out.get(acc_key)
        acc = Y if acc is None else acc + Y
        out[acc_key] = acc
    return LPoly(p.pres, tvars, {e: X for e, X in out.items() if not X.is_zero})


def differentiate(p: LPoly, var: str) -> LPoly:
    vi = p.vars.index(var)
    out = {}
    for e, X in p.terms.items():
        m = e[vi]
        if m == 0:
            continue
        e2 = e[:vi] + (m - 1,) + e[vi + 1:]
        Y = X.scale(m)
        acc = out.get(e2)
        out[e2] = Y if acc is None else acc + Y
    return LPoly(p.pres, p.vars, {e: X for e, X in out.items() if not X.is_zero})


def subst_neg_lambda_minus_T(p: LPoly, var: str) -> LPoly:
    """Substitute var -> -var - T, with T acting on the coefficients.

    var^n X -> sum_k C(n,k) (-1)^n var^{n-k} T^k X.  An involution.
    """
    vi = p.vars.index(var)
    out = {}
    for e, X in p.terms.items():
        n = e[vi]
        for k in range(n + 1):
            Y = apply_T(X, k).scale(comb(n, k) * (-1) ** n)
            if Y.is_zero:
                continue
            e2 = e[:vi] + (n - k,) + e[vi + 1:]
            acc = out.get(e2)
            acc = Y if acc is None else acc + Y
            if acc.is_zero:
                out.pop(e2, None)
            else:
                out[e2] = acc
    return LPoly(p.pres, p.vars, out)


def expand_var_to_pair(p: LPoly, var: str, v1: str, v2: str, sign2: int = 1) -> LPoly:
    """Substitute var -> v1 + sign2*v2 binomially."""
    vi = p.vars.index(var)
    rest = p.vars[:vi] + p.vars[vi + 1:]
    tvars = tuple(rest)
    for v in (v1, v2):
        if v not in tvars:
            tvars = tuple(sorted(tvars + (v,), key=_var_order))
    pos = [tvars.index(v) for v in rest]
    i1, i2 = tvars.index(v1), tvars.index(v2)
    out = {}
    for e, X in p.terms.items():
        n = e[vi]
        e_rest = e[:vi] + e[vi + 1:]
        base = [0] * len(tvars)
        for i, k in enumerate(e_rest):
            base[pos[i]] = k
        for k in range(n + 1):
            c = comb(n, k) * (sign2 ** (n - k))
            e2 = list(base)
            e2[i1] += k
            e2[i2] += n - k
            Y = X.scale(c)
            key = tuple(e2)
            acc = out.get(key)
            acc = Y if acc is None else acc + Y
            if acc.is_zero:
                out.pop(key, None)
            else:
                out[key] = acc
    return LPoly(p.pres, tvars, out)


def exp_T_dlambda_expand(a: TPoly, m: int) -> list[tuple[int, TPoly]]:
    """Expand e^{T d/dlambda} against a divided power slot lambda^{(m)}.

    Returns the pairs (m-k, T^{(k)} a): lambda^{(m)} a becomes
    sum_k lambda^{(m-k)} (T^k a / k!).
    """
    out = []
    for k in range(m + 1):
        img = apply_T(a, k).scale(Fraction(1, factorial(k)))
        out.append((m - k, img))
    return out


# -- rendering ---------------------------------------------------------------

def render_lpoly(p: LPoly) -> str:
    if p.is_zero:
        return "0"
    pres = p.pres
    parts = []
    for e in sorted(p.terms, key=lambda e: (sum(e), e)):
        X = p.terms[e]
        vpart = "*".join(
            v if k == 1 else "%s^%d" % (v, k)
            for v, k in zip(p.vars, e) if k)
        for mono in sorted(X.terms, key=lambda m: mono_sort_key(pres, m)):
            neg, coeff = scalar_prefix(X.terms[mono])
            ms = render_tmono(pres, mono)
            body = "*".join(x for x in (coeff, vpart, ms) if x) or "1"
            if not parts:
                parts.append("-" + body if neg else body)
            else:
                parts.append((" - " if neg else " + ") + body)
    return "".join(parts)
