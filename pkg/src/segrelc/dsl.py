"""Line-oriented script language.

Statements end with ``;`` and ``--`` starts a comment running to the end of
the line. Grammar (one production per statement kind)::

    ring R = QQ[x,y];            ring S = GF(3)[u,v]/(u^2);    ring P = k[a,b];
    ideal I = (x^2, x*y) in R;
    module M = coker [[x, y]] in R twists (0);
    module F = free in R twists (0, -1);
    segre T = R # S;
    lctable R I M box=-5..3;
    kunneth R I M S J N box=-4..4 k<=4;
    saturation R I M S J N box=-3..3;
    goto R M S N window=-6..-2;
    depth I # J mode=equality box=-3..3;
    cd I # J mode=poly box=-3..3;
    eulerian R I t<=2 box=-6..2;
    report out=path format=json;

``k`` in a ring declaration means the session's default field. In
``kunneth``/``saturation``/``goto`` a module slot may name the ring itself.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .algebra import _is_prime

__all__ = [
    "CdCmd",
    "DSLError",
    "DepthCmd",
    "EulerianCmd",
    "GotoCmd",
    "IdealDecl",
    "KunnethCmd",
    "LcTableCmd",
    "ModuleDecl",
    "ReportCmd",
    "RingDecl",
    "SaturationCmd",
    "SegreDecl",
    "parse_polynomial",
    "parse_script",
    "render",
]


class DSLError(ValueError):
    """Syntax or binding error with a 1-based source location."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}" if line else message)


# -- polynomial expressions -------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DSLError(f"unexpected character {text[pos]!r} in {text!r}", 0, pos + 1)
        if m.group(1):
            out.append(("num", m.group(1), m.start(1)))
        elif m.group(2):
            out.append(("name", m.group(2), m.start(2)))
        else:
            out.append(("op", "^" if m.group(3) == "**" else m.group(3), m.start(3)))
        pos = m.end()
    return out


def parse_polynomial(text: str, ring):
    """Parse ``text`` (e.g. ``"x^2 - 2/3*x*y + 1"``) as an element of ``ring``."""
    from .algebra import Polynomial

    toks = _tokenize(text)
    pos = 0
    names = {v: i for i, v in enumerate(ring.variables)}

    def peek():
        return toks[pos] if pos < len(toks) else None

    def take(value=None):
        nonlocal pos
        t = peek()
        if t is None or (value is not None and t[1] != value):
            raise DSLError(f"expected {value or 'a term'} in {text!r}", 0, (t[2] + 1) if t else len(text) + 1)
        pos += 1
        return t

    def expr():
        sign = 1
        if peek() and peek()[1] in "+-" and peek()[0] == "op":
            sign = -1 if take()[1] == "-" else 1
        acc = term()
        if sign < 0:
            acc = -acc
        while peek() and peek()[0] == "op" and peek()[1] in "+-":
            op = take()[1]
            rhs = term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term():
        acc = power()
        while peek() and peek()[0] == "op" and peek()[1] in "*/":
            op = take()[1]
            rhs = power()
            if op == "*":
                acc = acc * rhs
            else:
                if not rhs.is_constant():
                    raise DSLError(f"division by a non-constant in {text!r}")
                acc = acc.scale(ring.field.inv(rhs.constant()))
        return acc

    def power():
        base = atom()
        if peek() and peek()[1] == "^":
            take()
            neg = False
            if peek() and peek()[1] == "-":
                take()
                neg = True
            e = int(take()[1])
            if neg:
                raise DSLError(f"negative exponent in {text!r}")
            return base**e
        return base

    def atom():
        t = peek()
        if t is None:
            raise DSLError(f"unexpected end of {text!r}")
        if t[0] == "num":
            take()
            return _Scalar(Fraction(int(t[1])), ring)
        if t[0] == "name":
            take()
            if t[1] not in names:
                raise DSLError(f"unknown variable {t[1]!r} for ring with variables {ring.variables}", 0, t[2] + 1)
            e = [0] * ring.ngens
            e[names[t[1]]] = 1
            return _Scalar.wrap(ring.monomial(tuple(e)))
        if t[1] == "(":
            take()
            v = expr()
            take(")")
            return v
        if t[1] == "-":
            take()
            return -power()
        raise DSLError(f"unexpected {t[1]!r} in {text!r}", 0, t[2] + 1)

    if not toks:
        raise DSLError("empty polynomial")
    result = expr()
    if pos != len(toks):
        raise DSLError(f"trailing input in {text!r}", 0, toks[pos][2] + 1)
    poly = result.poly
    if not isinstance(poly, Polynomial):
        raise DSLError(f"could not parse {text!r}")
    return poly


class _Scalar:
    """Polynomial wrapper whose arithmetic stays exact while parsing."""

    def __init__(self, value, ring):
        self.ring = ring
        if isinstance(value, Fraction):
            value = ring.monomial((0,) * ring.ngens, ring.field(value)) if value else ring.zero()
        self.poly = value

    @classmethod
    def wrap(cls, poly):
        return cls(poly, poly.ring)

    def is_constant(self):
        return all(not any(e) for e in self.poly._terms)

    def constant(self):
        return self.poly.coefficient((0,) * self.ring.ngens)

    def __add__(self, o):
        return _Scalar(self.poly + o.poly, self.ring)

    def __sub__(self, o):
        return _Scalar(self.poly - o.poly, self.ring)

    def __mul__(self, o):
        return _Scalar(self.poly * o.poly, self.ring)

    def __neg__(self):
        return _Scalar(-self.poly, self.ring)

    def __pow__(self, e):
        return _Scalar(self.poly**e, self.ring)

    def scale(self, c):
        return _Scalar(self.poly.scale(c), self.ring)


# -- commands -------------------------------------------------------------------------------


def _range(lo: int, hi: int) -> str:
    return f"{lo}..{hi}"


@dataclass(frozen=True)
class RingDecl:
    name: str
    field: str
    variables: tuple[str, ...]
    relations: tuple[str, ...] = ()

    def render(self) -> str:
        s = f"ring {self.name} = {self.field}[{','.join(self.variables)}]"
        if self.relations:
            s += "/(" + ", ".join(self.relations) + ")"
        return s + ";"


@dataclass(frozen=True)
class IdealDecl:
    name: str
    generators: tuple[str, ...]
    ring: str

    def render(self) -> str:
        return f"ideal {self.name} = ({', '.join(self.generators)}) in {self.ring};"


@dataclass(frozen=True)
class ModuleDecl:
    name: str
    matrix: tuple[tuple[str, ...], ...] | None
    ring: str
    twists: tuple[int, ...]

    def render(self) -> str:
        tw = "(" + ", ".join(str(t) for t in self.twists) + ")"
        if self.matrix is None:
            return f"module {self.name} = free in {self.ring} twists {tw};"
        rows = ", ".join("[" + ", ".join(r) + "]" for r in self.matrix)
        return f"module {self.name} = coker [{rows}] in {self.ring} twists {tw};"


@dataclass(frozen=True)
class SegreDecl:
    name: str
    left: str
    right: str

    def render(self) -> str:
        return f"segre {self.name} = {self.left} # {self.right};"


@dataclass(frozen=True)
class LcTableCmd:
    ring: str
    ideal: str
    module: str
    box: tuple[int, int] | None = None

    def render(self) -> str:
        return f"lctable {self.ring} {self.ideal} {self.module}" + (f" box={_range(*self.box)}" if self.box else "") + ";"


@dataclass(frozen=True)
class KunnethCmd:
    R: str
    I: str
    M: str
    S: str
    J: str
    N: str
    box: tuple[int, int] | None = None
    kmax: int = 3

    def render(self) -> str:
        s = f"kunneth {self.R} {self.I} {self.M} {self.S} {self.J} {self.N}"
        if self.box:
            s += f" box={_range(*self.box)}"
        return s + f" k<={self.kmax};"


@dataclass(frozen=True)
class SaturationCmd:
    R: str
    I: str
    M: str
    S: str
    J: str
    N: str
    box: tuple[int, int] | None = None

    def render(self) -> str:
        s = f"saturation {self.R} {self.I} {self.M} {self.S} {self.J} {self.N}"
        return s + (f" box={_range(*self.box)}" if self.box else "") + ";"


@dataclass(frozen=True)
class GotoCmd:
    R: str
    M: str
    S: str
    N: str
    window: tuple[int, int]

    def render(self) -> str:
        return f"goto {self.R} {self.M} {self.S} {self.N} window={_range(*self.window)};"


@dataclass(frozen=True)
class DepthCmd:
    I: str
    J: str
    mode: str = "bound"
    box: tuple[int, int] | None = None

    def render(self) -> str:
        return f"depth {self.I} # {self.J} mode={self.mode}" + (f" box={_range(*self.box)}" if self.box else "") + ";"


@dataclass(frozen=True)
class CdCmd:
    I: str
    J: str
    mode: str = "bound"
    box: tuple[int, int] | None = None

    def render(self) -> str:
        return f"cd {self.I} # {self.J} mode={self.mode}" + (f" box={_range(*self.box)}" if self.box else "") + ";"


@dataclass(frozen=True)
class EulerianCmd:
    ring: str
    ideal: str
    tmax: int = 2
    box: tuple[int, int] | None = None

    def render(self) -> str:
        return f"eulerian {self.ring} {self.ideal} t<={self.tmax}" + (f" box={_range(*self.box)}" if self.box else "") + ";"


@dataclass(frozen=True)
class ReportCmd:
    out: str
    format: str | None = None

    def render(self) -> str:
        return f"report out={self.out}" + (f" format={self.format}" if self.format else "") + ";"


Command = Union[
    RingDecl, IdealDecl, ModuleDecl, SegreDecl, LcTableCmd, KunnethCmd, SaturationCmd,
    GotoCmd, DepthCmd, CdCmd, EulerianCmd, ReportCmd,
]


def render(cmd: Command) -> str:
    return cmd.render()


@dataclass
class Statement:
    command: Command
    line: int
    column: int
    text: str = field(default="", compare=False)


# -- statement parsing --------------------------------------------------------------------------

_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_INT = r"-?\d+"
_RANGE = rf"({_INT})\.\.({_INT})"
_FIELD = r"QQ|k|GF\(\s*\d+\s*\)"

_PATTERNS = {
    "ring": re.compile(rf"ring\s+({_NAME})\s*=\s*({_FIELD})\s*\[([^\]]*)\]\s*(?:/\s*\((.*)\))?$", re.S),
    "ideal": re.compile(rf"ideal\s+({_NAME})\s*=\s*\((.*)\)\s*in\s+({_NAME})$", re.S),
    "module": re.compile(
        rf"module\s+({_NAME})\s*=\s*(?:coker\s*\[(.*)\]|(free))\s*in\s+({_NAME})\s*twists\s*\(([^)]*)\)$", re.S
    ),
    "segre": re.compile(rf"segre\s+({_NAME})\s*=\s*({_NAME})\s*#\s*({_NAME})$"),
    "lctable": re.compile(rf"lctable\s+({_NAME})\s+({_NAME})\s+({_NAME})(?:\s+box={_RANGE})?$"),
    "kunneth": re.compile(
        rf"kunneth\s+({_NAME})\s+({_NAME})\s+({_NAME})\s+({_NAME})\s+({_NAME})\s+({_NAME})"
        rf"(?:\s+box={_RANGE})?(?:\s+k<=(\d+))?$"
    ),
    "saturation": re.compile(
        rf"saturation\s+({_NAME})\s+({_NAME})\s+({_NAME})\s+({_NAME})\s+({_NAME})\s+({_NAME})(?:\s+box={_RANGE})?$"
    ),
    "goto": re.compile(rf"goto\s+({_NAME})\s+({_NAME})\s+({_NAME})\s+({_NAME})\s+window={_RANGE}$"),
    "depth": re.compile(rf"depth\s+({_NAME})\s*#\s*({_NAME})(?:\s+mode=(\w+))?(?:\s+box={_RANGE})?$"),
    "cd": re.compile(rf"cd\s+({_NAME})\s*#\s*({_NAME})(?:\s+mode=(\w+))?(?:\s+box={_RANGE})?$"),
    "eulerian": re.compile(rf"eulerian\s+({_NAME})\s+({_NAME})(?:\s+t<=(\d+))?(?:\s+box={_RANGE})?$"),
    "report": re.compile(r"report\s+out=(\S+?)(?:\s+format=(json|markdown))?$"),
}

DEPTH_MODES = ("bound", "equality")
CD_MODES = ("bound", "poly", "cci")


def _split_top(text: str, sep: str = ",") -> list[str]:
    """Split at ``sep`` outside brackets and parentheses."""
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def _clean(expr: str) -> str:
    return re.sub(r"\s+", "", expr)


def _box(m, i):
    return (int(m.group(i)), int(m.group(i + 1))) if m.group(i) is not None else None


def _parse_statement(text: str, line: int, column: int) -> Command:
    body = text.strip()
    keyword = body.split(None, 1)[0] if body else ""
    pat = _PATTERNS.get(keyword)
    if pat is None:
        raise DSLError(f"unknown statement {keyword!r}", line, column)
    m = pat.match(body)
    if not m:
        raise DSLError(f"malformed {keyword} statement: {body!r}", line, column)
    g = m.group
    if keyword == "ring":
        variables = tuple(v.strip() for v in g(3).split(",") if v.strip())
        if not variables or any(not re.fullmatch(_NAME, v) for v in variables):
            raise DSLError("ring needs a comma-separated list of variable names", line, column)
        fld = _clean(g(2))
        if fld.startswith("GF"):
            p = int(fld[3:-1])
            if not _is_prime(p):
                raise DSLError(f"GF({p}): only prime fields are supported", line, column)
        rels = tuple(_clean(r) for r in _split_top(g(4))) if g(4) else ()
        if any(not r for r in rels):
            raise DSLError("empty relation", line, column)
        return RingDecl(g(1), fld, variables, rels)
    if keyword == "ideal":
        gens = tuple(_clean(x) for x in _split_top(g(2))) if g(2).strip() else ()
        if any(not x for x in gens):
            raise DSLError("empty ideal generator", line, column)
        return IdealDecl(g(1), gens, g(3))
    if keyword == "module":
        twists = tuple(int(t) for t in g(5).split(",") if t.strip())
        if g(3):
            matrix = None
        else:
            rows_text = _split_top(g(2))
            rows = []
            for r in rows_text:
                if not (r.startswith("[") and r.endswith("]")):
                    raise DSLError("matrix rows must be bracketed", line, column)
                rows.append(tuple(_clean(x) for x in _split_top(r[1:-1])))
            if len({len(r) for r in rows}) > 1:
                raise DSLError("matrix rows have different lengths", line, column)
            if len(rows) != len(twists):
                raise DSLError("one twist per matrix row is required", line, column)
            matrix = tuple(rows)
        return ModuleDecl(g(1), matrix, g(4), twists)
    if keyword == "segre":
        return SegreDecl(g(1), g(2), g(3))
    if keyword == "lctable":
        return LcTableCmd(g(1), g(2), g(3), _box(m, 4))
    if keyword == "kunneth":
        return KunnethCmd(g(1), g(2), g(3), g(4), g(5), g(6), _box(m, 7), int(g(9)) if g(9) else 3)
    if keyword == "saturation":
        return SaturationCmd(g(1), g(2), g(3), g(4), g(5), g(6), _box(m, 7))
    if keyword == "goto":
        return GotoCmd(g(1), g(2), g(3), g(4), _box(m, 5))
    if keyword in ("depth", "cd"):
        mode = g(3) or "bound"
        allowed = DEPTH_MODES if keyword == "depth" else CD_MODES
        if mode not in allowed:
            raise DSLError(f"{keyword} mode must be one of {allowed}", line, column)
        cls = DepthCmd if keyword == "depth" else CdCmd
        return cls(g(1), g(2), mode, _box(m, 4))
    if keyword == "eulerian":
        return EulerianCmd(g(1), g(2), int(g(3)) if g(3) else 2, _box(m, 4))
    return ReportCmd(g(1), g(2))


def _strip_comments(text: str) -> str:
    return "\n".join(line.split("--", 1)[0] for line in text.splitlines())


def parse_script(text: str) -> list[Statement]:
    """Split a script into statements, each tagged with its source location."""
    text = _strip_comments(text)
    out = []
    line, col = 1, 1
    start = None
    buf: list[str] = []
    depth = 0
    for ch in text:
        if start is None and not ch.isspace():
            start = (line, col)
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == ";" and depth == 0:
            stmt = "".join(buf).strip()
            if not stmt:
                raise DSLError("empty statement", line, col)
            out.append(Statement(_parse_statement(stmt, *start), start[0], start[1], stmt))
            buf, start = [], None
        else:
            buf.append(ch)
        if ch == "\n":
            line, col = line + 1, 1
        else:
            col += 1
    if "".join(buf).strip():
        raise DSLError("missing ';' at end of statement", *(start or (line, col)))
    return out
