"""The product/bracket recursion on the tensor algebra.

Extends the generator lambda-bracket table to a quasi-product N(A, B) and a
quasi-bracket P_lambda(A, B) on all of the tensor algebra, by the mutual
recursion that peels tensor factors off the left argument (and, for P with
a single left factor, off the right argument).  These are the operations
whose failure to be associative/Lie is measured by the structure defects,
all of which land in the ideal generated by m_element instances and so
vanish after normal ordering.

Everything is memoized per presentation at the monomial level; bracket
coefficients are held as dense lists indexed by the lambda-power, with the
concrete variable name bound only when results are handed back.  In checked
mode every memoized entry is verified against the degree bounds
deg N(A,B) <= deg A + deg B and deg P(A,B) < deg A + deg B.
"""

from __future__ import annotations

import os
from fractions import Fraction
from math import comb

from .algebra import Presentation, RGen, TMono, TPoly, _add_term, apply_T, render_tmono
from .formal import LPoly


class CalculusError(Exception):
    pass


class Engine:
    def __init__(self, pres: Presentation, checked: bool = True,
                 memoize: bool = True, cache_limit: int | None = None):
        self.pres = pres
        self.checked = checked
        self.memoize = memoize
        if cache_limit is None:
            env = os.environ.get("NLCA_CACHE_LIMIT")
            cache_limit = int(env) if env else None
        self.cache_limit = cache_limit
        self._nmemo: dict = {}
        self._pmemo: dict = {}
        self.stats = {"n_calls": 0, "p_calls": 0, "n_hits": 0, "p_hits": 0}

    # -- public operations ---------------------------------------------------

    def nprod(self, x: TPoly, y: TPoly) -> TPoly:
        """N(x, y), the quasi-product extending juxtaposition."""
        return self._n_poly(x, y)

    def pbracket(self, x: TPoly, y: TPoly, var: str = "lambda") -> LPoly:
        """P_var(x, y), the quasi-bracket extending the generator table."""
        return LPoly.from_coeff_list(self.pres, var, self._p_poly(x, y))

    def lie(self, x: TPoly, y: TPoly) -> TPoly:
        """Integral of the quasi-bracket over [-T, 0]."""
        return _int_minus_T(self.pres, self._p_poly(x, y))

    def m_element(self, A: TPoly, b: RGen, c: RGen, D: TPoly) -> TPoly:
        """A (x) sn(b, c, D): a generating element of the PBW kernel ideal."""
        pres = self.pres
        bp = TPoly(pres, {(b,): pres.field.one})
        cp = TPoly(pres, {(c,): pres.field.one})
        sign = pres.parity_sign((b,), (c,))
        sn = (self._n_poly(bp, self._n_poly(cp, D))
              - self._n_poly(cp, self._n_poly(bp, D)).scale(sign)
              - self._n_poly(self.lie(bp, cp), D))
        return A.tensor(sn)

    def jacobiator(self, x: TPoly, y: TPoly, z: TPoly,
                   vars: tuple[str, str] = ("lambda", "mu")) -> LPoly:
        """P_l(x, P_m(y,z)) - p(x,y) P_m(y, P_l(x,z)) - P_{l+m}(P_l(x,y), z)."""
        acc: dict = {}
        for A, sa in x.terms.items():
            for B, sb in y.terms.items():
                for C, sc in z.terms.items():
                    s = sa * sb * sc
                    for (i, j), W in self._jac_mono(A, B, C).items():
                        _acc2(acc, (i, j), W.scale(s))
        return LPoly(self.pres, tuple(vars),
                     {e: W for e, W in acc.items() if not W.is_zero})

    def structure_defect(self, kind: str, x: TPoly, y: TPoly, z: TPoly = None,
                         var: str = "lambda"):
        """One of the named defects: sl, sn, wl, wr, q.

        sl/wl/wr are lambda-polynomials (LPoly in var); sn/q are TPolys.
        All vanish identically when an argument is a bare generator in the
        slot the recursion peels, and always vanish after normal ordering.
        """
        if kind == "sl":
            if z is not None:
                raise CalculusError("sl takes two operands")
            return self._defect2(self._sl_mono, x, y, var)
        if kind not in ("sn", "wl", "wr", "q"):
            raise CalculusError("unknown defect kind %r" % (kind,))
        if z is None:
            raise CalculusError("%s takes three operands" % (kind,))
        fn = {"sn": self._sn_mono, "wl": self._wl_mono,
              "wr": self._wr_mono, "q": self._q_mono}[kind]
        lists = kind in ("wl", "wr")
        acc_list: list[TPoly] = []
        acc_poly = self.pres.zero()
        for A, sa in x.terms.items():
            for B, sb in y.terms.items():
                for C, sc in z.terms.items():
                    s = sa * sb * sc
                    r = fn(A, B, C)
                    if lists:
                        for m, X in enumerate(r):
                            _lacc(acc_list, m, X.scale(s))
                    else:
                        acc_poly = acc_poly + r.scale(s)
        if lists:
            return LPoly.from_coeff_list(self.pres, var, acc_list)
        return acc_poly

    def _defect2(self, fn, x: TPoly, y: TPoly, var: str) -> LPoly:
        acc: list[TPoly] = []
        for A, sa in x.terms.items():
            for B, sb in y.terms.items():
                s = sa * sb
                for m, X in enumerate(fn(A, B)):
                    _lacc(acc, m, X.scale(s))
        return LPoly.from_coeff_list(self.pres, var, acc)

    # -- monomial-level core -------------------------------------------------

    def _mono(self, m: TMono) -> TPoly:
        return TPoly(self.pres, {m: self.pres.field.one})

    def _n_poly(self, x: TPoly, y: TPoly) -> TPoly:
        out = self.pres.zero()
        for A, sa in x.terms.items():
            for B, sb in y.terms.items():
                out = out + self._n(A, B).scale(sa * sb)
        return out

    def _p_poly(self, x: TPoly, y: TPoly) -> list[TPoly]:
        acc: list[TPoly] = []
        for A, sa in x.terms.items():
            for B, sb in y.terms.items():
                s = sa * sb
                for m, X in enumerate(self._p(A, B)):
                    if X:
                        _lacc(acc, m, X.scale(s))
        while acc and acc[-1].is_zero:
            acc.pop()
        return acc

    def _n(self, A: TMono, B: TMono) -> TPoly:
        self.stats["n_calls"] += 1
        hit = self._nmemo.get((A, B))
        if hit is not None:
            self.stats["n_hits"] += 1
            return hit
        pres = self.pres
        if not A:
            out = self._mono(B)
        elif not B:
            out = self._mono(A)
        elif len(A) == 1:
            out = self._mono(A + B)
        else:
            a, Ap = A[0], A[1:]
            sign = pres.parity_sign((a,), Ap)
            out = _prepend(a, self._n(Ap, B))
            a_poly = self._mono((a,))
            Ap_poly = self._mono(Ap)
            for m, X in enumerate(self._p(Ap, B)):
                if X:
                    img = apply_T(a_poly, m + 1).scale(Fraction(1, m + 1))
                    out = out + self._n_poly(img, X)
            for m, Y in enumerate(self._p((a,), B)):
                if Y:
                    img = apply_T(Ap_poly, m + 1).scale(Fraction(sign, m + 1))
                    out = out + self._n_poly(img, Y)
        if self.checked and out:
            bound = pres.mono_degree(A) + pres.mono_degree(B)
            for mono in out.terms:
                if not pres.mono_degree(mono) <= bound:
                    raise CalculusError(
                        "degree bound broken: N(%s, %s) contains %s"
                        % (render_tmono(pres, A), render_tmono(pres, B),
                           render_tmono(pres, mono)))
        if self.memoize:
            self._store(self._nmemo, (A, B), out)
        return out

    def _p(self, A: TMono, B: TMono) -> list[TPoly]:
        self.stats["p_calls"] += 1
        hit = self._pmemo.get((A, B))
        if hit is not None:
            self.stats["p_hits"] += 1
            return hit
        pres = self.pres
        if not A or not B:
            out: list[TPoly] = []
        elif len(A) == 1 and len(B) == 1:
            out = pres.bracket_r(A[0], B[0]).coeff_list()
        elif len(A) == 1:
            out = self._p_peel_right(A[0], B)
        else:
            out = self._p_peel_left(A[0], A[1:], B)
        while out and out[-1].is_zero:
            out.pop()
        if self.checked:
            bound = pres.mono_degree(A) + pres.mono_degree(B)
            for X in out:
                for mono in X.terms:
                    if not pres.mono_degree(mono) < bound:
                        raise CalculusError(
                            "degree bound broken: P(%s, %s) contains %s"
                            % (render_tmono(pres, A), render_tmono(pres, B),
                               render_tmono(pres, mono)))
        if self.memoize:
            self._store(self._pmemo, (A, B), out)
        return out

    def _p_peel_right(self, a: RGen, B: TMono) -> list[TPoly]:
        """P(a, b (x) C) for a single left factor."""
        pres = self.pres
        b, C = B[0], B[1:]
        sign = pres.parity_sign((a,), (b,))
        pab = self._p((a,), (b,))
        paC = self._p((a,), C)
        C_poly = self._mono(C)
        acc: list[TPoly] = []
        for m, X in enumerate(pab):
            if X:
                _lacc(acc, m, self._n_poly(X, C_poly))
        for m, Y in enumerate(paC):
            if Y:
                _lacc(acc, m, _prepend(b, Y).scale(sign))
        for i, X in enumerate(pab):
            if not X:
                continue
            for m, Wm in enumerate(self._p_poly(X, C_poly)):
                if Wm:
                    _lacc(acc, i + m + 1, Wm.scale(Fraction(1, m + 1)))
        return acc

    def _p_peel_left(self, a: RGen, Ap: TMono, B: TMono) -> list[TPoly]:
        """P(a (x) A', B), peeling the leftmost factor."""
        pres = self.pres
        sign = pres.parity_sign((a,), Ap)
        pApB = self._p(Ap, B)
        paB = self._p((a,), B)
        a_poly = self._mono((a,))
        Ap_poly = self._mono(Ap)
        acc: list[TPoly] = []
        for m, X in enumerate(pApB):
            if not X:
                continue
            for k in range(m + 1):
                img = apply_T(a_poly, k).scale(comb(m, k))
                _lacc(acc, m - k, self._n_poly(img, X))
        for m, Y in enumerate(paB):
            if not Y:
                continue
            for k in range(m + 1):
                img = apply_T(Ap_poly, k).scale(comb(m, k) * sign)
                _lacc(acc, m - k, self._n_poly(img, Y))
        for n, Y in enumerate(paB):
            if not Y:
                continue
            Wlist = self._p_poly(Ap_poly, Y)
            for k in range(n + 1):
                cnk = comb(n, k) * ((-1) ** (n - k)) * sign
                j = n - k
                for m, Wm in enumerate(Wlist):
                    if Wm:
                        _lacc(acc, k + j + m + 1,
                              Wm.scale(Fraction(cnk, j + m + 1)))
        return acc

    def _jac_mono(self, A: TMono, B: TMono, C: TMono) -> dict:
        pres = self.pres
        acc: dict = {}
        A_poly, B_poly = self._mono(A), self._mono(B)
        for j, Z in enumerate(self._p(B, C)):
            if not Z:
                continue
            for i, W in enumerate(self._p_poly(A_poly, Z)):
                if W:
                    _acc2(acc, (i, j), W)
        sign = pres.parity_sign(A, B)
        for i, Z in enumerate(self._p(A, C)):
            if not Z:
                continue
            for j, W in enumerate(self._p_poly(B_poly, Z)):
                if W:
                    _acc2(acc, (i, j), W.scale(-sign))
        C_poly = self._mono(C)
        for i, Z in enumerate(self._p(A, B)):
            if not Z:
                continue
            for n, W in enumerate(self._p_poly(Z, C_poly)):
                if not W:
                    continue
                for k in range(n + 1):
                    _acc2(acc, (i + k, n - k), W.scale(-comb(n, k)))
        return {e: W for e, W in acc.items() if not W.is_zero}

    # -- defect kernels ------------------------------------------------------

    def _sl_mono(self, A: TMono, B: TMono) -> list[TPoly]:
        acc: list[TPoly] = []
        for m, X in enumerate(self._p(A, B)):
            _lacc(acc, m, X)
        sign = self.pres.parity_sign(A, B)
        for m, X in _subst_neg_list(self._p(B, A)):
            _lacc(acc, m, X.scale(sign))
        return acc

    def _sn_mono(self, A: TMono, B: TMono, C: TMono) -> TPoly:
        A_poly, B_poly, C_poly = self._mono(A), self._mono(B), self._mono(C)
        sign = self.pres.parity_sign(A, B)
        return (self._n_poly(A_poly, self._n_poly(B_poly, C_poly))
                - self._n_poly(B_poly, self._n_poly(A_poly, C_poly)).scale(sign)
                - self._n_poly(_int_minus_T(self.pres, self._p(A, B)), C_poly))

    def _wl_mono(self, A: TMono, B: TMono, C: TMono) -> list[TPoly]:
        pres = self.pres
        A_poly, B_poly, C_poly = self._mono(A), self._mono(B), self._mono(C)
        sign = pres.parity_sign(A, B)
        acc: list[TPoly] = []
        for m, X in enumerate(self._p_poly(A_poly, self._n(B, C))):
            _lacc(acc, m, X)
        pAB = self._p(A, B)
        for i, X in enumerate(pAB):
            if not X:
                continue
            for m, Wm in enumerate(self._p_poly(X, C_poly)):
                if Wm:
                    _lacc(acc, i + m + 1, Wm.scale(Fraction(-1, m + 1)))
            _lacc(acc, i, -self._n_poly(X, C_poly))
        for i, Y in enumerate(self._p(A, C)):
            if Y:
                _lacc(acc, i, self._n_poly(B_poly, Y).scale(-sign))
        return acc

    def _wr_mono(self, A: TMono, B: TMono, C: TMono) -> list[TPoly]:
        pres = self.pres
        A_poly, B_poly, C_poly = self._mono(A), self._mono(B), self._mono(C)
        sign = pres.parity_sign(A, B)
        acc: list[TPoly] = []
        for m, X in enumerate(self._p_poly(self._n(A, B), C_poly)):
            _lacc(acc, m, X)
        for n, Y in enumerate(self._p(A, C)):
            if not Y:
                continue
            Wlist = self._p_poly(B_poly, Y)
            for k in range(n + 1):
                cnk = comb(n, k) * ((-1) ** (n - k))
                j = n - k
                for m, Wm in enumerate(Wlist):
                    if Wm:
                        _lacc(acc, k + j + m + 1,
                              Wm.scale(Fraction(-sign * cnk, j + m + 1)))
        for m, X in enumerate(self._p(B, C)):
            if not X:
                continue
            for k in range(m + 1):
                img = apply_T(A_poly, k).scale(-comb(m, k))
                _lacc(acc, m - k, self._n_poly(img, X))
        for m, Y in enumerate(self._p(A, C)):
            if not Y:
                continue
            for k in range(m + 1):
                img = apply_T(B_poly, k).scale(-sign * comb(m, k))
                _lacc(acc, m - k, self._n_poly(img, Y))
        return acc

    def _q_mono(self, A: TMono, B: TMono, C: TMono) -> TPoly:
        pres = self.pres
        A_poly, B_poly, C_poly = self._mono(A), self._mono(B), self._mono(C)
        sign = pres.parity_sign(A, B)
        out = (self._n_poly(self._n(A, B), C_poly)
               - self._n_poly(A_poly, self._n(B, C)))
        for m, X in enumerate(self._p(B, C)):
            if X:
                img = apply_T(A_poly, m + 1).scale(Fraction(1, m + 1))
                out = out - self._n_poly(img, X)
        for m, Y in enumerate(self._p(A, C)):
            if Y:
                img = apply_T(B_poly, m + 1).scale(Fraction(sign, m + 1))
                out = out - self._n_poly(img, Y)
        return out

    # -- cache plumbing ------------------------------------------------------

    def _store(self, memo: dict, key, val) -> None:
        if (self.cache_limit is not None
                and len(self._nmemo) + len(self._pmemo) >= self.cache_limit):
            self._nmemo.clear()
            self._pmemo.clear()
        memo[key] = val


def _prepend(rg: RGen, x: TPoly) -> TPoly:
    return TPoly(x.pres, {(rg,) + mono: s for mono, s in x.terms.items()})


def _lacc(acc: list, m: int, x: TPoly) -> None:
    while len(acc) <= m:
        acc.append(x.pres.zero())
    acc[m] = acc[m] + x


def _acc2(acc: dict, key, x: TPoly) -> None:
    cur = acc.get(key)
    acc[key] = x if cur is None else cur + x


def _int_minus_T(pres: Presentation, coeffs: list) -> TPoly:
    """sum_m (-1)^m T^{m+1}(X_m)/(m+1): the bracket integral over [-T, 0]."""
    out = pres.zero()
    for m, X in enumerate(coeffs):
        if X:
            out = out + apply_T(X, m + 1).scale(Fraction((-1) ** m, m + 1))
    return out


def _subst_neg_list(coeffs: list):
    """lambda -> -lambda - T on a coefficient list; yields (power, TPoly)."""
    for n, X in enumerate(coeffs):
        if not X:
            continue
        for k in range(n + 1):
            yield n - k, apply_T(X, k).scale(comb(n, k) * (-1) ** n)
