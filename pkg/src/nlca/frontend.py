"""Text format for algebra presentations.

A source file is a sequence of `;`-terminated statements:

    name virasoro;
    param c;
    generator L parity=even degree=2 weight=2;
    bracket [L,L] = :T L: + 2*lambda*:L: + (c/12)*lambda^3*1;

Tensor monomials are written `:T^2 L W:` (or `1` for the empty monomial);
scalars are rational expressions in the declared params/unknowns.  `#`
starts a comment.  Only one bracket orientation per pair needs to be
given; the other is derived by skewsymmetry.
"""

from fractions import Fraction
from importlib import resources
from typing import NamedTuple

from .algebra import Presentation, TPoly
from .formal import LPoly, render_lpoly
from .scalars import ScalarError


class Diagnostic(NamedTuple):
    file: str
    line: int
    col: int
    message: str

    def __str__(self):
        return "%s:%d:%d: %s" % (self.file, self.line, self.col, self.message)


class ParseError(Exception):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


class Token(NamedTuple):
    kind: str  # int | name | op | eof
    text: str
    line: int
    col: int


_OPS = set(";,=[]():+-*/^")


def _tokenize(text: str, file: str, diags: list) -> list[Token]:
    toks = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(Token("int", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(Token("name", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch in _OPS:
            toks.append(Token("op", ch, line, start_col))
            i += 1
            col += 1
            continue
        diags.append(Diagnostic(file, line, start_col,
                                "unexpected character %r" % ch))
        i += 1
        col += 1
    toks.append(Token("eof", "", line, col))
    return toks


class _Halt(Exception):
    """Abandon the current statement; the caller resyncs at ';'."""


class _TokenStream:
    def __init__(self, toks, file, diags, start=0, stop=None):
        self.toks = toks
        self.file = file
        self.diags = diags
        self.pos = start
        self.stop = len(toks) - 1 if stop is None else stop

    def peek(self) -> Token:
        if self.pos >= self.stop:
            return self.toks[self.stop]._replace(kind="eof", text="")
        return self.toks[self.pos]

    def next(self) -> Token:
        t = self.peek()
        if t.kind != "eof":
            self.pos += 1
        return t

    def at_op(self, text: str) -> bool:
        t = self.peek()
        return t.kind == "op" and t.text == text

    def take_op(self, text: str) -> bool:
        if self.at_op(text):
            self.pos += 1
            return True
        return False

    def error(self, tok: Token, message: str):
        self.diags.append(Diagnostic(self.file, tok.line, tok.col, message))
        raise _Halt()

    def expect_op(self, text: str) -> Token:
        t = self.peek()
        if not (t.kind == "op" and t.text == text):
            self.error(t, "expected %r, found %s" % (text, _show(t)))
        return self.next()

    def expect_name(self, what: str = "a name") -> Token:
        t = self.peek()
        if t.kind != "name":
            self.error(t, "expected %s, found %s" % (what, _show(t)))
        return self.next()

    def expect_int(self) -> int:
        t = self.peek()
        if t.kind != "int":
            self.error(t, "expected an integer, found %s" % _show(t))
        self.next()
        return int(t.text)


def _show(t: Token) -> str:
    if t.kind == "eof":
        return "end of input"
    return repr(t.text)


_RESERVED = ("T", "lambda")


def _rational(ts: _TokenStream) -> Fraction:
    sign = -1 if ts.take_op("-") else 1
    num = ts.expect_int()
    if ts.take_op("/"):
        den = ts.expect_int()
        if den == 0:
            ts.error(ts.toks[ts.pos - 1], "zero denominator")
        return Fraction(sign * num, den)
    return Fraction(sign * num)


class _ExprParser:
    """Parses bracket right-hand sides and CLI operand expressions."""

    def __init__(self, ts: _TokenStream, pres: Presentation,
                 allow_lambda: bool):
        self.ts = ts
        self.pres = pres
        self.allow_lambda = allow_lambda

    def expression(self) -> dict[int, TPoly]:
        ts = self.ts
        out: dict[int, TPoly] = {}
        neg = ts.take_op("-")
        self._accumulate(out, self.term(), neg)
        while True:
            if ts.take_op("+"):
                neg = False
            elif ts.take_op("-"):
                neg = True
            else:
                break
            self._accumulate(out, self.term(), neg)
        t = ts.peek()
        if t.kind != "eof":
            ts.error(t, "expected '+', '-' or end of expression, found %s"
                     % _show(t))
        return {k: x for k, x in out.items() if not x.is_zero}

    def _accumulate(self, out, term, neg):
        k, x = term
        if neg:
            x = -x
        acc = out.get(k)
        out[k] = x if acc is None else acc + x

    def term(self) -> tuple[int, TPoly]:
        ts = self.ts
        scalar = self.pres.field.one
        lampow = 0
        mono = None
        while True:
            t = ts.peek()
            if t.kind == "op" and t.text == ":":
                if mono is not None:
                    ts.error(t, "more than one tensor monomial in a term")
                mono = self._colon_mono()
            elif t.kind == "name" and t.text == "lambda":
                ts.next()
                if not self.allow_lambda:
                    ts.error(t, "lambda is not allowed in this expression")
                lampow += self._opt_power()
            elif t.kind == "name" and t.text in self.pres.gen_index:
                ts.next()
                if mono is not None:
                    ts.error(t, "more than one tensor monomial in a term")
                mono = (self.pres.rgen(t.text),)
            else:
                scalar = scalar * self._scalar_factor()
            while ts.at_op("/"):
                t = ts.next()
                try:
                    scalar = scalar / self._scalar_factor()
                except ScalarError as ex:
                    ts.error(t, str(ex))
            if not ts.take_op("*"):
                break
        return lampow, self.pres.poly({mono if mono is not None else (): scalar})

    def _opt_power(self) -> int:
        if self.ts.take_op("^"):
            return self.ts.expect_int()
        return 1

    def _scalar_factor(self):
        ts = self.ts
        t = ts.peek()
        if t.kind == "int":
            ts.next()
            base = self.pres.field.from_int(int(t.text))
        elif t.kind == "name":
            if t.text not in self.pres.field.params:
                ts.error(t, "%r is not a declared scalar or generator" % t.text)
            ts.next()
            base = self.pres.field.param(t.text)
        elif t.kind == "op" and t.text == "(":
            ts.next()
            base = self._scalar_expr()
            ts.expect_op(")")
        else:
            ts.error(t, "expected a scalar factor, found %s" % _show(t))
        k = self._opt_power()
        return base ** k if k != 1 else base

    def _scalar_expr(self):
        ts = self.ts
        neg = ts.take_op("-")
        acc = self._scalar_term()
        if neg:
            acc = -acc
        while True:
            if ts.take_op("+"):
                acc = acc + self._scalar_term()
            elif ts.take_op("-"):
                acc = acc - self._scalar_term()
            else:
                return acc

    def _scalar_term(self):
        acc = self._scalar_factor()
        while True:
            if self.ts.take_op("*"):
                acc = acc * self._scalar_factor()
            elif self.ts.at_op("/"):
                t = self.ts.next()
                try:
                    acc = acc / self._scalar_factor()
                except ScalarError as ex:
                    self.ts.error(t, str(ex))
            else:
                return acc

    def _colon_mono(self) -> tuple:
        ts = self.ts
        ts.expect_op(":")
        factors = []
        while not ts.take_op(":"):
            t = ts.peek()
            if t.kind != "name":
                ts.error(t, "expected a generator inside ': ... :', found %s"
                         % _show(t))
            n = 0
            if t.text == "T":
                ts.next()
                n = self._opt_power()
                t = ts.expect_name("a generator after 'T'")
            else:
                ts.next()
            if t.text not in self.pres.gen_index:
                ts.error(t, "unknown generator %r" % t.text)
            factors.append(self.pres.rgen(t.text, n))
        return tuple(factors)


class _FileParser:
    def __init__(self, text: str, file: str):
        self.file = file
        self.diags: list[Diagnostic] = []
        self.toks = _tokenize(text, file, self.diags)
        self.ts = _TokenStream(self.toks, file, self.diags)
        self.name = None
        self.params: list[tuple[str, Token]] = []
        self.unknowns: list[tuple[str, Token]] = []
        self.gens: list[tuple] = []  # (name, parity, degree, weight, tok)
        self.brackets: list[tuple] = []  # (a_tok, b_tok, start, stop)

    def parse(self) -> Presentation:
        ts = self.ts
        while ts.peek().kind != "eof":
            try:
                self._statement()
            except _Halt:
                self._resync()
        pres = self._build()
        if self.diags:
            self.diags.sort(key=lambda d: (d.line, d.col))
            raise ParseError(self.diags)
        return pres

    def _resync(self):
        ts = self.ts
        while ts.peek().kind != "eof":
            if ts.next().text == ";":
                return

    def _statement(self):
        ts = self.ts
        head = ts.expect_name("a statement keyword")
        if head.text == "name":
            t = ts.expect_name()
            self.name = t.text
        elif head.text == "param":
            t = ts.expect_name()
            self.params.append((t.text, t))
        elif head.text == "unknown":
            t = ts.expect_name()
            self.unknowns.append((t.text, t))
        elif head.text == "generator":
            self._generator()
        elif head.text == "bracket":
            self._bracket()
        else:
            ts.error(head, "unknown statement %r" % head.text)
        ts.expect_op(";")

    def _generator(self):
        ts = self.ts
        nt = ts.expect_name("a generator name")
        parity = degree = weight = None
        while ts.peek().kind == "name":
            key = ts.next()
            ts.expect_op("=")
            if key.text == "parity":
                v = ts.expect_name("'even' or 'odd'")
                if v.text not in ("even", "odd"):
                    ts.error(v, "parity must be 'even' or 'odd'")
                parity = 0 if v.text == "even" else 1
            elif key.text == "degree":
                degree = _rational(ts)
                if degree <= 0:
                    ts.error(key, "degree must be positive")
            elif key.text == "weight":
                weight = _rational(ts)
            else:
                ts.error(key, "unknown generator attribute %r" % key.text)
        if parity is None:
            ts.error(nt, "generator %r is missing parity=" % nt.text)
        if degree is None:
            ts.error(nt, "generator %r is missing degree=" % nt.text)
        self.gens.append((nt.text, parity, degree, weight, nt))

    def _bracket(self):
        ts = self.ts
        ts.expect_op("[")
        a = ts.expect_name("a generator name")
        ts.expect_op(",")
        b = ts.expect_name("a generator name")
        ts.expect_op("]")
        ts.expect_op("=")
        start = ts.pos
        while ts.peek().kind != "eof" and not ts.at_op(";"):
            ts.next()
        self.brackets.append((a, b, start, ts.pos))

    def _build(self) -> Presentation | None:
        d = self.diags
        seen: dict[str, str] = {}
        for text, tok in self.params:
            self._declare(seen, text, tok, "param")
        for text, tok in self.unknowns:
            self._declare(seen, text, tok, "unknown")
        decls = []
        for nm, parity, degree, weight, tok in self.gens:
            if self._declare(seen, nm, tok, "generator"):
                decls.append((nm, parity, degree, weight))
        if d:
            return None
        pres = Presentation(decls,
                            params=tuple(t for t, _ in self.params),
                            unknowns=tuple(t for t, _ in self.unknowns),
                            name=self.name)
        entries = set()
        for a, b, start, stop in self.brackets:
            bad = False
            for t in (a, b):
                if t.text not in pres.gen_index:
                    d.append(Diagnostic(self.file, t.line, t.col,
                                        "unknown generator %r" % t.text))
                    bad = True
            if bad:
                continue
            key = (a.text, b.text)
            if key in entries or (b.text, a.text) in entries:
                d.append(Diagnostic(self.file, a.line, a.col,
                                    "bracket [%s,%s] given twice" % key))
                continue
            entries.add(key)
            sub = _TokenStream(self.toks, self.file, d, start, stop)
            try:
                coeffs = _ExprParser(sub, pres, allow_lambda=True).expression()
            except _Halt:
                continue
            pres.set_bracket(a.text, b.text,
                             {k: x for k, x in coeffs.items()})
        return pres

    def _declare(self, seen, text, tok, kind) -> bool:
        if text in _RESERVED:
            self.diags.append(Diagnostic(self.file, tok.line, tok.col,
                                         "%r is reserved" % text))
            return False
        if text in seen:
            self.diags.append(Diagnostic(
                self.file, tok.line, tok.col,
                "%s %r already declared as a %s" % (kind, text, seen[text])))
            return False
        seen[text] = kind
        return True


def parse_source(text: str, file: str = "<input>") -> Presentation:
    return _FileParser(text, file).parse()


def parse_path(path) -> Presentation:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_source(fh.read(), str(path))


def parse_expression(pres: Presentation, text: str,
                     file: str = "<expr>") -> TPoly:
    """A lambda-free expression over `pres`, e.g. for CLI operands."""
    diags: list[Diagnostic] = []
    toks = _tokenize(text, file, diags)
    ts = _TokenStream(toks, file, diags)
    try:
        coeffs = _ExprParser(ts, pres, allow_lambda=False).expression()
    except _Halt:
        coeffs = {}
    if diags:
        raise ParseError(diags)
    return coeffs.get(0, pres.zero())


# -- rendering ---------------------------------------------------------------

def _fmt_rat(q: Fraction) -> str:
    return str(q)


def render_presentation(pres: Presentation) -> str:
    lines = []
    if pres.name:
        lines.append("name %s;" % pres.name)
    for p in pres.params:
        lines.append("param %s;" % p)
    for u in pres.unknowns:
        lines.append("unknown %s;" % u)
    if lines:
        lines.append("")
    for g in pres.generators:
        w = "" if g.weight is None else " weight=%s" % _fmt_rat(g.weight)
        lines.append("generator %s parity=%s degree=%s%s;"
                     % (g.name, "odd" if g.parity else "even",
                        _fmt_rat(g.degree), w))
    lines.append("")
    for i, j in pres.given_pairs():
        lp = LPoly.from_coeff_list(pres, "lambda", pres.pair_coeffs(i, j))
        lines.append("bracket [%s,%s] = %s;"
                     % (pres.generators[i].name, pres.generators[j].name,
                        render_lpoly(lp)))
    return "\n".join(lines) + "\n"


def same_presentation(p: Presentation, q: Presentation) -> bool:
    """Structural equality, ignoring object identity."""
    if (p.name != q.name or p.params != q.params or p.unknowns != q.unknowns):
        return False
    if tuple((g.name, g.parity, g.degree, g.weight) for g in p.generators) != \
       tuple((g.name, g.parity, g.degree, g.weight) for g in q.generators):
        return False
    if p.given_pairs() != q.given_pairs():
        return False
    for key in p.given_pairs():
        a = p.pair_coeffs(*key)
        b = q.pair_coeffs(*key)
        if len(a) != len(b) or any(x.terms != y.terms for x, y in zip(a, b)):
            return False
    return True


# -- bundled algebra files ---------------------------------------------------

def bundled_names() -> list[str]:
    root = resources.files(__package__) / "algebras"
    return sorted(p.name[:-5] for p in root.iterdir()
                  if p.name.endswith(".nlca"))


def load_bundled(name: str) -> Presentation:
    path = resources.files(__package__) / "algebras" / (name + ".nlca")
    return parse_source(path.read_text(encoding="utf-8"), name + ".nlca")
