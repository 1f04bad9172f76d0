"""Axiom checks over a presentation, reported with witnesses.

run_all chains: structural validation, skewsymmetry of the bracket table,
conformal weight bookkeeping, the grading bound, and the Jacobi identity
modulo the PBW kernel.  Each check times itself and carries witnesses for
failures; a jacobiator that is nonzero before reduction but vanishes after
is recorded as a note, since that is the expected non-linear behaviour.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dfield

from .algebra import Presentation, TPoly, render_tpoly
from .calculus import Engine
from .formal import render_lpoly
from .pbw import Reducer


@dataclass
class Witness:
    operands: tuple[str, ...]
    where: str
    residue: str

    def to_json(self):
        return {"operands": list(self.operands), "where": self.where,
                "residue": self.residue}


@dataclass
class CheckResult:
    check: str
    status: str  # pass | fail | skipped
    witnesses: list[Witness] = dfield(default_factory=list)
    notes: list[str] = dfield(default_factory=list)
    time_ms: float = 0.0

    def to_json(self, timing: bool = True):
        out = {"check": self.check, "status": self.status,
               "witnesses": [w.to_json() for w in self.witnesses],
               "notes": list(self.notes)}
        if timing:
            out["time_ms"] = round(self.time_ms, 3)
        return out


@dataclass
class Report:
    presentation: str | None
    results: list[CheckResult] = dfield(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.status != "fail" for r in self.results)

    def to_json(self, timing: bool = True):
        return {"presentation": self.presentation, "ok": self.ok,
                "results": [r.to_json(timing) for r in self.results]}

    def to_text(self) -> str:
        lines = []
        for r in self.results:
            lines.append("%-10s %s (%.1f ms)" % (r.check, r.status, r.time_ms))
            for n in r.notes:
                lines.append("    note: %s" % n)
            for w in r.witnesses:
                where = " at %s" % w.where if w.where else ""
                lines.append("    witness [%s]%s: %s"
                             % (", ".join(w.operands), where, w.residue))
        if self.ok:
            lines.append("all checks passed")
        else:
            bad = sum(1 for r in self.results if r.status == "fail")
            lines.append("FAILED: %d check(s)" % bad)
        return "\n".join(lines)


def _timed(fn):
    t0 = time.perf_counter()
    res = fn()
    res.time_ms = (time.perf_counter() - t0) * 1000.0
    return res


def check_validate(pres: Presentation) -> CheckResult:
    def run():
        violations = pres.validate()
        if violations:
            return CheckResult("validate", "fail", notes=violations)
        return CheckResult("validate", "pass")
    return _timed(run)


def check_skew(pres: Presentation, engine: Engine | None = None) -> CheckResult:
    """sl(a, b) must vanish identically for every ordered generator pair."""
    engine = engine or Engine(pres)

    def run():
        res = CheckResult("skew", "pass")
        for gi in pres.generators:
            for gj in pres.generators:
                d = engine.structure_defect("sl", pres.gen(gi.name), pres.gen(gj.name))
                if not d.is_zero:
                    res.status = "fail"
                    res.witnesses.append(Witness(
                        (gi.name, gj.name), "", render_lpoly(d)))
        return res
    return _timed(run)


def check_weights(pres: Presentation) -> CheckResult:
    """Every lambda^k coefficient of [a_i lambda a_j], in either orientation,
    must be weight-homogeneous of weight w_i + w_j - k - 1."""
    def run():
        if not pres.weights_declared:
            return CheckResult("weights", "skipped",
                               notes=["conformal weights not declared"])
        res = CheckResult("weights", "pass")
        for gi in pres.generators:
            for gj in pres.generators:
                coeffs = pres.pair_coeffs(gi.index, gj.index)
                for k, X in enumerate(coeffs):
                    want = gi.weight + gj.weight - k - 1
                    bad = {m: s for m, s in X.terms.items()
                           if pres.mono_weight(m) != want}
                    if bad:
                        res.status = "fail"
                        res.witnesses.append(Witness(
                            (gi.name, gj.name), "lambda^%d" % k,
                            render_tpoly(TPoly(pres, bad))))
        return res
    return _timed(run)


def check_grading(pres: Presentation) -> CheckResult:
    """Strict degree drop and parity preservation for both orientations."""
    def run():
        res = CheckResult("grading", "pass")
        for gi in pres.generators:
            for gj in pres.generators:
                bound = gi.degree + gj.degree
                parity = (gi.parity + gj.parity) & 1
                for k, X in enumerate(pres.pair_coeffs(gi.index, gj.index)):
                    bad = {m: s for m, s in X.terms.items()
                           if not (pres.mono_degree(m) < bound
                                   and pres.mono_parity(m) == parity)}
                    if bad:
                        res.status = "fail"
                        res.witnesses.append(Witness(
                            (gi.name, gj.name), "lambda^%d" % k,
                            render_tpoly(TPoly(pres, bad))))
        return res
    return _timed(run)


def check_jacobi(pres: Presentation, engine: Engine | None = None,
                 reducer: Reducer | None = None, triples=None) -> CheckResult:
    """Jacobiator of every generator triple must reduce to zero."""
    engine = engine or Engine(pres)
    reducer = reducer or Reducer(engine)
    if triples is None:
        names = [g.name for g in pres.generators]
        triples = [(a, b, c) for a in names for b in names for c in names]

    def run():
        res = CheckResult("jacobi", "pass")
        for (na, nb, nc) in triples:
            j = engine.jacobiator(pres.gen(na), pres.gen(nb), pres.gen(nc))
            if j.is_zero:
                continue
            top = max(pres.mono_degree(m)
                      for X in j.terms.values() for m in X.terms)
            red = reducer.normal_order_lpoly(j)
            if red.is_zero:
                res.notes.append(
                    "jacobiator(%s, %s, %s) has a nonzero pre-reduction "
                    "residue of top degree %s; zero after normal ordering"
                    % (na, nb, nc, top))
            else:
                res.status = "fail"
                for e in sorted(red.terms):
                    where = " ".join(
                        "%s^%d" % (v, p) for v, p in zip(red.vars, e) if p)
                    res.witnesses.append(Witness(
                        (na, nb, nc), where or "constant term",
                        render_tpoly(red.terms[e])))
        return res
    return _timed(run)


def run_all(pres: Presentation, engine: Engine | None = None,
            triples=None) -> Report:
    """validate, skew, weights, grading, jacobi; later checks are skipped
    when validation fails, since the engine's bounds assume a well formed
    table."""
    report = Report(pres.name)
    v = check_validate(pres)
    report.results.append(v)
    if v.status == "fail":
        for name in ("skew", "weights", "grading", "jacobi"):
            report.results.append(CheckResult(
                name, "skipped", notes=["presentation failed validation"]))
        return report
    engine = engine or Engine(pres)
    reducer = Reducer(engine)
    report.results.append(check_skew(pres, engine))
    report.results.append(check_weights(pres))
    report.results.append(check_grading(pres))
    report.results.append(check_jacobi(pres, engine, reducer, triples))
    return report
