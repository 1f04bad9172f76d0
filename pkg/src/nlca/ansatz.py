"""Solving bracket tables with unknown structure constants.

A presentation may declare unknowns alongside its parameters; bracket
coefficients must then be affine in the unknowns.  The Jacobi identity,
reduced to the PBW basis, becomes a linear system over Q(params): one
equation per (lambda-power, basis monomial) pair.  A one-dimensional
solution space plus one pinned unknown determines all the others; the
solved table is substituted back and fully re-verified.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import Presentation, TPoly
from .calculus import Engine
from .pbw import Reducer
from .scalars import (
    LinearSystem, Scalar, ScalarError, affine_split, nullspace, scalar_field)
from .verify import Report, run_all


class AnsatzError(Exception):
    def __init__(self, msg, basis=None):
        super().__init__(msg)
        self.basis = basis


def extract_system(pres: Presentation, triples=None,
                   engine: Engine | None = None,
                   reducer: Reducer | None = None,
                   nonlinear: str = "error",
                   skipped: list | None = None) -> LinearSystem:
    """Linear equations on the unknowns from reduced jacobiators.

    triples: generator-name triples to impose; all ordered triples by
    default.  Rows are deduplicated and sorted, so the result does not
    depend on the processing order.

    A triple whose reduced jacobiator is not affine in the unknowns (they
    met each other through nested brackets) raises by default; with
    nonlinear="skip" it is left out and appended to `skipped`, to be
    covered by the full verification after substitution.
    """
    if not pres.unknowns:
        raise AnsatzError("presentation declares no unknowns")
    violations = pres.validate()
    if violations:
        raise AnsatzError("invalid presentation: %s" % violations[0])
    engine = engine or Engine(pres)
    reducer = reducer or Reducer(engine)
    if triples is None:
        names = [g.name for g in pres.generators]
        triples = [(a, b, c) for a in names for b in names for c in names]
    target = scalar_field(pres.params)
    system = LinearSystem(target, pres.unknowns)
    big = pres.field
    for (na, nb, nc) in triples:
        j = engine.jacobiator(pres.gen(na), pres.gen(nb), pres.gen(nc))
        rows = []
        try:
            for e in j.terms:
                red = reducer.normal_order(j.terms[e])
                for mono, s in red.terms.items():
                    c0, cus = affine_split(s, pres.unknowns)
                    rows.append(([big.transfer(cu, target) for cu in cus],
                                 -big.transfer(c0, target)))
        except ScalarError as ex:
            if nonlinear == "skip":
                if skipped is not None:
                    skipped.append((na, nb, nc))
                continue
            raise AnsatzError(
                "triple (%s, %s, %s) leaves the linear regime: %s"
                % (na, nb, nc, ex)) from None
        for coeffs, rhs in rows:
            system.add_row(coeffs, rhs)
    system.sort_rows()
    return system


def substitute_unknowns(pres: Presentation, values: dict[str, Scalar]) -> Presentation:
    """Concrete presentation with every unknown replaced by its value."""
    target = scalar_field(pres.params)
    out = Presentation(
        [(g.name, g.parity, g.degree, g.weight) for g in pres.generators],
        params=pres.params, name=pres.name)
    big = pres.field
    for (i, j) in pres.given_pairs():
        lst = pres._table[(i, j)]
        coeffs = {}
        for k, X in enumerate(lst):
            terms = {}
            for mono, s in X.terms.items():
                c0, cus = affine_split(s, pres.unknowns)
                snew = big.transfer(c0, target)
                for u, cu in zip(pres.unknowns, cus):
                    snew = snew + big.transfer(cu, target) * values[u]
                if not snew.is_zero:
                    terms[mono] = snew
            coeffs[k] = TPoly(out, terms)
        out.set_bracket(pres.generators[i].name, pres.generators[j].name, coeffs)
    return out


@dataclass
class SolveResult:
    values: dict[str, Scalar]
    presentation: Presentation
    report: Report
    basis: list


def solve_and_substitute(pres: Presentation, system: LinearSystem,
                         pin: tuple) -> SolveResult:
    """Solve a one-dimensional system by pinning one unknown's value.

    pin = (unknown name, value); the value may be an int, Fraction, Scalar
    over Q(params), or a string parsed in that field.
    """
    name, val = pin
    if name not in system.unknowns:
        raise AnsatzError("%r is not an unknown of the system" % (name,))
    target = system.field
    if isinstance(val, str):
        val = target.parse(val)
    elif isinstance(val, (int, Fraction)):
        val = target.convert(val)
    elif isinstance(val, Scalar):
        val = target.convert(val)
    else:
        raise AnsatzError("cannot interpret pin value %r" % (val,))
    if not system.is_homogeneous():
        raise AnsatzError("system has inhomogeneous rows")
    basis = nullspace(system)
    if not basis:
        raise AnsatzError("only the zero solution satisfies the system")
    if len(basis) > 1:
        raise AnsatzError(
            "solution space has dimension %d; a single pin cannot fix it"
            % len(basis), basis=basis)
    v = basis[0]
    i = system.unknowns.index(name)
    if v[i].is_zero:
        raise AnsatzError(
            "%s vanishes on the solution line; pinning it cannot normalize"
            % (name,))
    scale = val / v[i]
    values = {u: v[k] * scale for k, u in enumerate(system.unknowns)}
    solved = substitute_unknowns(pres, values)
    report = run_all(solved)
    return SolveResult(values, solved, report, basis)
