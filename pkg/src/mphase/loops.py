"""Single-path linear-constraint loops and ranking-tuple checkers.

A loop is a guard over the variables plus an update relation over the
variables and their primed successors.  The transition polyhedron
stacks guard rows (padded with zero coefficients on the primed half)
over the update rows; everything downstream works on that polyhedron.

Loop file format (UTF-8, line oriented, '#' comments):

    vars x y z
    domain rational            # optional: rational | integer
    guard  <affine> <op> <affine>    # op in {<=, >=, =, <, >}
    update <affine'> <op> <affine'>  # primed names allowed; strict not

"x' = e" update lines expand to the two inequalities x' - e <= 0 and
e - x' <= 0.  Rational literals are "p/q" or integers.  Ranking-tuple
files hold one "component <affine>" line per entry, in order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import (
    AffineFunc,
    DimensionMismatchError,
    RatVec,
    delta,
    embed_pre,
    rat_str,
    vec,
    zero_vec,
)
from .polyhedra import (
    Constraint,
    FarkasCert,
    Polyhedron,
    implies_nonneg,
    is_feasible,
    lt_one_constraint,
    neg_constraint,
)

RATIONAL_DOMAIN = "rational"
INTEGER_DOMAIN = "integer"

KIND_MLRF = "mlrf"
KIND_NESTED = "nested"
KIND_BMS = "bms"
KIND_WEAK_BMS = "weak-bms"


class LoopParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 0):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class SLCLoop:
    """Guard B x <= b plus update A (x; x') <= c, with a domain tag."""

    var_names: tuple[str, ...]
    guard: tuple[Constraint, ...]
    update: tuple[Constraint, ...]
    domain: str = RATIONAL_DOMAIN

    @property
    def n(self) -> int:
        return len(self.var_names)

    def all_names(self) -> list[str]:
        return list(self.var_names) + [f"{v}'" for v in self.var_names]


@dataclass(frozen=True)
class TransitionPoint:
    """A transition (x, x') as a single point in 2n dimensions."""

    values: RatVec

    @property
    def n(self) -> int:
        return len(self.values) // 2

    @property
    def pre(self) -> RatVec:
        return self.values[: self.n]

    @property
    def post(self) -> RatVec:
        return self.values[self.n:]


@dataclass(frozen=True)
class RankTuple:
    """Ordered tuple of affine components with a kind tag."""

    components: tuple[AffineFunc, ...]
    kind: str = KIND_MLRF

    @property
    def depth(self) -> int:
        return len(self.components)

    def with_kind(self, kind: str) -> "RankTuple":
        return RankTuple(self.components, kind)


# ---------------------------------------------------------------------------
# Affine expression parsing

_TOKEN_RE = re.compile(
    r"(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*'?)|(?P<op>[-+*/()]))")


def _tokenize(text: str, line: int) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise LoopParseError(f"bad character {text[pos:]!r}", line, pos)
        if m.group("num"):
            tokens.append(("num", m.group("num")))
        elif m.group("name"):
            tokens.append(("name", m.group("name")))
        else:
            tokens.append(("op", m.group("op")))
        pos = m.end()
    return tokens


class _AffineParser:
    """Recursive-descent parser for linear expressions over named vars."""

    def __init__(self, tokens, names: Sequence[str], line: int):
        self.tokens = tokens
        self.pos = 0
        self.names = {name: i for i, name in enumerate(names)}
        self.dim = len(names)
        self.line = line

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self) -> AffineFunc:
        f = self.expr()
        if self.pos != len(self.tokens):
            raise LoopParseError(f"trailing input near {self.peek()[1]!r}", self.line)
        return f

    def expr(self) -> AffineFunc:
        kind, val = self.peek()
        negate = False
        if (kind, val) == ("op", "-"):
            self.take()
            negate = True
        elif (kind, val) == ("op", "+"):
            self.take()
        f = self.term()
        if negate:
            f = -f
        while True:
            kind, val = self.peek()
            if (kind, val) == ("op", "+"):
                self.take()
                f = f + self.term()
            elif (kind, val) == ("op", "-"):
                self.take()
                f = f - self.term()
            else:
                return f

    def term(self) -> AffineFunc:
        f = self.factor()
        while True:
            kind, val = self.peek()
            if (kind, val) == ("op", "*"):
                self.take()
                f = self._mul(f, self.factor())
            elif (kind, val) == ("op", "/"):
                self.take()
                g = self.factor()
                if any(c != 0 for c in g.coeffs):
                    raise LoopParseError("division by a non-constant", self.line)
                if g.const == 0:
                    raise LoopParseError("division by zero", self.line)
                f = f.scale(Fraction(1) / g.const)
            elif kind in ("name",) or (kind, val) == ("op", "("):
                # juxtaposition, e.g. "10x" or "2(x+y)"
                f = self._mul(f, self.factor())
            else:
                return f

    def _mul(self, a: AffineFunc, b: AffineFunc) -> AffineFunc:
        a_lin = any(c != 0 for c in a.coeffs)
        b_lin = any(c != 0 for c in b.coeffs)
        if a_lin and b_lin:
            raise LoopParseError("nonlinear term", self.line)
        if a_lin:
            return a.scale(b.const)
        return b.scale(a.const)

    def factor(self) -> AffineFunc:
        kind, val = self.take()
        if kind == "num":
            return AffineFunc.constant(self.dim, int(val))
        if kind == "name":
            idx = self.names.get(val)
            if idx is None:
                raise LoopParseError(f"unknown variable {val!r}", self.line)
            coeffs = [Fraction(0)] * self.dim
            coeffs[idx] = Fraction(1)
            return AffineFunc(tuple(coeffs), Fraction(0))
        if (kind, val) == ("op", "-"):
            return -self.factor()
        if (kind, val) == ("op", "("):
            f = self.expr()
            kind, val = self.take()
            if (kind, val) != ("op", ")"):
                raise LoopParseError("expected ')'", self.line)
            return f
        raise LoopParseError(f"unexpected token {val!r}", self.line)


def parse_affine(text: str, names: Sequence[str], line: int = 0) -> AffineFunc:
    return _AffineParser(_tokenize(text, line), names, line).parse()


_OP_RE = re.compile(r"(<=|>=|=|<|>)")


def _parse_relation(text: str, names: Sequence[str], line: int):
    parts = _OP_RE.split(text)
    if len(parts) != 3:
        raise LoopParseError("expected exactly one relation <=, >=, =, <, >", line)
    lhs = parse_affine(parts[0], names, line)
    rhs = parse_affine(parts[2], names, line)
    return lhs - rhs, parts[1]  # g op 0


def _relation_rows(g: AffineFunc, op: str, line: int, allow_strict: bool,
                   split_eq: bool) -> list[Constraint]:
    if op == ">=":
        g, op = -g, "<="
    elif op == ">":
        g, op = -g, "<"
    if op == "<=":
        return [Constraint(g.coeffs, "<=", -g.const)]
    if op == "<":
        if not allow_strict:
            raise LoopParseError("strict relation not allowed here", line)
        return [Constraint(g.coeffs, "<", -g.const)]
    # equality
    if split_eq:
        return [Constraint(g.coeffs, "<=", -g.const),
                Constraint(tuple(-c for c in g.coeffs), "<=", g.const)]
    return [Constraint(g.coeffs, "=", -g.const)]


def parse_loop(text: str) -> SLCLoop:
    """Parse the loop file format; see the module docstring."""
    var_names: Optional[tuple[str, ...]] = None
    domain = RATIONAL_DOMAIN
    guard: list[Constraint] = []
    update: list[Constraint] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, _, rest = line.partition(" ")
        rest = rest.strip()
        if word == "vars":
            if var_names is not None:
                raise LoopParseError("duplicate vars line", lineno)
            names = rest.split()
            if not names:
                raise LoopParseError("vars line needs at least one name", lineno)
            if len(set(names)) != len(names):
                raise LoopParseError("duplicate variable name", lineno)
            for name in names:
                if name.endswith("'"):
                    raise LoopParseError("variable names must be unprimed", lineno)
            var_names = tuple(names)
        elif word == "domain":
            if rest not in (RATIONAL_DOMAIN, INTEGER_DOMAIN):
                raise LoopParseError("domain must be rational or integer", lineno)
            domain = rest
        elif word == "guard":
            if var_names is None:
                raise LoopParseError("vars must come before guard", lineno)
            g, op = _parse_relation(rest, var_names, lineno)
            guard.extend(_relation_rows(g, op, lineno, allow_strict=True,
                                        split_eq=False))
        elif word == "update":
            if var_names is None:
                raise LoopParseError("vars must come before update", lineno)
            all_names = list(var_names) + [f"{v}'" for v in var_names]
            g, op = _parse_relation(rest, all_names, lineno)
            update.extend(_relation_rows(g, op, lineno, allow_strict=False,
                                         split_eq=True))
        else:
            raise LoopParseError(f"unknown directive {word!r}", lineno)
    if var_names is None:
        raise LoopParseError("missing vars line", 0)
    return SLCLoop(var_names, tuple(guard), tuple(update), domain)


def parse_tuple_file(text: str, loop: SLCLoop, kind: str = KIND_MLRF) -> RankTuple:
    """Parse a ranking-tuple file: one "component <affine>" line per entry."""
    comps: list[AffineFunc] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, _, rest = line.partition(" ")
        if word != "component":
            raise LoopParseError(f"unknown directive {word!r}", lineno)
        comps.append(parse_affine(rest, loop.var_names, lineno))
    return RankTuple(tuple(comps), kind)


def format_affine(f: AffineFunc, names: Sequence[str]) -> str:
    terms = []
    for c, name in zip(f.coeffs, names):
        if c == 0:
            continue
        if c == 1:
            terms.append(("+", name))
        elif c == -1:
            terms.append(("-", name))
        elif c > 0:
            terms.append(("+", f"{rat_str(c)}*{name}"))
        else:
            terms.append(("-", f"{rat_str(-c)}*{name}"))
    if f.const > 0 or (f.const == 0 and not terms):
        terms.append(("+", rat_str(f.const)))
    elif f.const < 0:
        terms.append(("-", rat_str(-f.const)))
    sign, head = terms[0]
    out = head if sign == "+" else f"-{head}"
    for sign, part in terms[1:]:
        out += f" {sign} {part}"
    return out


# ---------------------------------------------------------------------------
# Transition polyhedron and tuple checkers

def transition_polyhedron(loop: SLCLoop) -> Polyhedron:
    """Stack padded guard rows over update rows in 2n dimensions."""
    n = loop.n
    rows: list[Constraint] = []
    for c in loop.guard:
        rows.append(Constraint(c.coeffs + zero_vec(n), c.rel, c.rhs))
    rows.extend(loop.update)
    return Polyhedron(2 * n, rows)


@dataclass(frozen=True)
class MlrfCheck:
    valid: bool
    residual: Optional[Polyhedron] = None
    witness: Optional[TransitionPoint] = None
    level: Optional[int] = None


def _component_dims(q: Polyhedron, tup: RankTuple) -> int:
    if q.dim % 2 != 0:
        raise DimensionMismatchError("transition polyhedron dimension must be even")
    n = q.dim // 2
    for f in tup.components:
        if f.dim != n:
            raise DimensionMismatchError(
                f"component dim {f.dim} does not match {n} loop variables")
    return n


def check_mlrf(q: Polyhedron, tup: RankTuple) -> MlrfCheck:
    """Decide the multiphase ranking property for the tuple over q.

    Walks the phases: at level i the accumulated residual holds the
    transitions with f_1 < 0, ..., f_{i-1} < 0; the tuple is invalid
    exactly when some residual admits a transition with the level's
    decrease short of 1, or survives all components.  Witnesses are
    genuine transitions of q that no component ranks.
    """
    _component_dims(q, tup)
    rows = list(q.constraints)
    for level, f in enumerate(tup.components, start=1):
        residual = Polyhedron(q.dim, rows)
        probe = residual.with_rows([lt_one_constraint(delta(f))])
        feas = is_feasible(probe)
        if feas.feasible:
            return MlrfCheck(False, residual, TransitionPoint(feas.witness), level)
        rows.append(neg_constraint(embed_pre(f)))
    residual = Polyhedron(q.dim, rows)
    feas = is_feasible(residual)
    if feas.feasible:
        return MlrfCheck(False, residual, TransitionPoint(feas.witness),
                         tup.depth + 1)
    return MlrfCheck(True)


@dataclass(frozen=True)
class NestedCheck:
    valid: bool
    certs: tuple[FarkasCert, ...] = ()
    failed_condition: Optional[str] = None
    failed_index: Optional[int] = None
    witness: Optional[TransitionPoint] = None


def check_nested(q: Polyhedron, tup: RankTuple) -> NestedCheck:
    """Check the nested conditions: the last component is nonnegative
    over q and every step satisfies (delta f_i - 1) + f_{i-1} >= 0 with
    f_0 identically zero.  Returns one certificate per condition."""
    n = _component_dims(q, tup)
    d = tup.depth
    if d == 0:
        if is_feasible(q).feasible:
            witness = TransitionPoint(is_feasible(q).witness)
            return NestedCheck(False, failed_condition="empty-tuple",
                               failed_index=0, witness=witness)
        return NestedCheck(True)
    certs: list[FarkasCert] = []
    last = implies_nonneg(q, embed_pre(tup.components[-1]))
    if not last.holds:
        return NestedCheck(False, failed_condition="last-nonneg", failed_index=d,
                           witness=TransitionPoint(last.counterexample))
    certs.append(last.cert)
    prev = AffineFunc.constant(n, 0)
    for i, f in enumerate(tup.components, start=1):
        cond = delta(f).shift(-1) + embed_pre(prev)
        step = implies_nonneg(q, cond)
        if not step.holds:
            return NestedCheck(False, failed_condition="step", failed_index=i,
                               witness=TransitionPoint(step.counterexample))
        certs.append(step.cert)
        prev = f
    return NestedCheck(True, tuple(certs))
