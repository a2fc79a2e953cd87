"""Parser for a small synthesizable Verilog subset.

Supported constructs: module/endmodule with ANSI port lists, wire/reg
declarations, continuous assigns, always@* blocking assignments,
always@(posedge clk) nonblocking assignments, module instances with
named or wildcard (.*) connections, and expressions over ~ ! & | ^
== != ?: with bit/part selects, concatenation, replication and sized
constants.  Anything else is rejected explicitly, never dropped.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


# ---------------------------------------------------------------------------
# Errors and diagnostics

class FrontendError(Exception):
    """Base class for all frontend failures, carries a source location."""

    def __init__(self, message, filename="<input>", line=0, col=0):
        self.message = message
        self.filename = filename
        self.line = line
        self.col = col
        super().__init__(str(self))

    def __str__(self):
        return f"{self.filename}:{self.line}:{self.col}: error: {self.message}"


class ParseError(FrontendError):
    pass


class UnsupportedConstruct(FrontendError):
    def __init__(self, construct, filename="<input>", line=0, col=0):
        self.construct = construct
        super().__init__(f"unsupported construct: {construct}", filename, line, col)


class WidthMismatch(FrontendError):
    pass


@dataclass
class Diagnostic:
    filename: str
    line: int
    col: int
    severity: str
    message: str

    def __str__(self):
        return f"{self.filename}:{self.line}:{self.col}: {self.severity}: {self.message}"


# ---------------------------------------------------------------------------
# AST
#
# Source positions never participate in equality so that a parse/print
# round trip compares structurally equal.

def _pos():
    return field(default=0, compare=False, repr=False)


@dataclass
class Expr:
    pass


@dataclass
class Const(Expr):
    value: int
    width: int | None = None  # None: unsized, adopts context width
    line: int = _pos()
    col: int = _pos()


@dataclass
class Ref(Expr):
    name: str
    line: int = _pos()
    col: int = _pos()


@dataclass
class BitSelect(Expr):
    name: str
    index: int
    line: int = _pos()
    col: int = _pos()


@dataclass
class PartSelect(Expr):
    name: str
    hi: int
    lo: int
    line: int = _pos()
    col: int = _pos()


@dataclass
class Concat(Expr):
    parts: list[Expr]
    line: int = _pos()
    col: int = _pos()


@dataclass
class Replicate(Expr):
    count: int
    expr: Expr
    line: int = _pos()
    col: int = _pos()


@dataclass
class Unary(Expr):
    op: str  # ~ ! & | ^   (& | ^ are reductions)
    operand: Expr
    line: int = _pos()
    col: int = _pos()


@dataclass
class Binary(Expr):
    op: str  # & | ^ == !=
    a: Expr
    b: Expr
    line: int = _pos()
    col: int = _pos()


@dataclass
class Ternary(Expr):
    cond: Expr
    then: Expr
    other: Expr
    line: int = _pos()
    col: int = _pos()


@dataclass
class Port:
    name: str
    direction: str  # input | output
    width: int
    kind: str = "wire"  # wire | reg
    line: int = _pos()
    col: int = _pos()


@dataclass
class Decl:
    name: str
    kind: str  # wire | reg
    width: int
    line: int = _pos()
    col: int = _pos()


@dataclass
class Statement:
    kind: str  # ff | comb
    lhs: str
    rhs: Expr
    clock: str | None = None  # ff only
    line: int = _pos()
    col: int = _pos()


@dataclass
class Instance:
    module_name: str
    instance_name: str
    connections: dict[str, str] | None  # None means .* wildcard
    line: int = _pos()
    col: int = _pos()


@dataclass
class SourceModule:
    name: str
    ports: list[Port]
    decls: list[Decl]
    stmts: list[Statement]
    instances: list[Instance]
    line: int = _pos()
    col: int = _pos()

    def widths(self) -> dict[str, int]:
        """Declared width of every signal, ports included."""
        w = {p.name: p.width for p in self.ports}
        w.update({d.name: d.width for d in self.decls})
        return w

    def kinds(self) -> dict[str, str]:
        k = {p.name: p.kind for p in self.ports}
        k.update({d.name: d.kind for d in self.decls})
        return k


# ---------------------------------------------------------------------------
# Lexer

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<comment>//[^\n]*|/\*.*?\*/)
    | (?P<sized>\d+'[bdhoBDHO][0-9a-fA-FxzXZ_]+)
    | (?P<number>\d+)
    | (?P<ident>[A-Za-z_][A-Za-z0-9_$]*)
    | (?P<op><=|==|!=|\.\*|[()\[\]{},;:@#.=~!&|^?*+\-/%<>])
    """,
    re.VERBOSE | re.DOTALL,
)

KEYWORDS = {
    "module", "endmodule", "input", "output", "inout", "wire", "reg",
    "always", "posedge", "negedge", "assign", "initial", "begin", "end",
    "if", "else", "for", "while", "case", "casex", "casez", "endcase",
    "generate", "endgenerate", "function", "endfunction", "task", "endtask",
    "integer", "real", "parameter", "localparam",
}

# Recognized keywords outside the subset; named in the rejection message.
UNSUPPORTED_KEYWORDS = KEYWORDS - {
    "module", "endmodule", "input", "output", "wire", "reg",
    "always", "posedge", "assign",
}

UNSUPPORTED_OPS = {"+", "-", "/", "%", "<", ">", "#"}


@dataclass
class Token:
    kind: str  # ident | keyword | number | sized | op | eof
    text: str
    line: int
    col: int


def tokenize(source: str, filename: str) -> list[Token]:
    tokens = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if not m:
            col = pos - line_start + 1
            raise ParseError(f"unexpected character {source[pos]!r}", filename, line, col)
        text = m.group(0)
        col = pos - line_start + 1
        kind = m.lastgroup
        if kind in ("ws", "comment"):
            pass
        elif kind == "ident" and text in KEYWORDS:
            tokens.append(Token("keyword", text, line, col))
        else:
            tokens.append(Token(kind, text, line, col))
        nl = text.count("\n")
        if nl:
            line += nl
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


def _parse_sized(text: str, filename: str, line: int, col: int) -> tuple[int, int]:
    """Decode a sized literal like 2'b01 into (value, width)."""
    width_str, rest = text.split("'", 1)
    width = int(width_str)
    base_char = rest[0].lower()
    digits = rest[1:].replace("_", "")
    if "x" in digits.lower() or "z" in digits.lower():
        raise UnsupportedConstruct("x/z literal", filename, line, col)
    base = {"b": 2, "d": 10, "h": 16, "o": 8}[base_char]
    value = int(digits, base)
    if width < 1:
        raise ParseError("constant width must be >= 1", filename, line, col)
    if value >= (1 << width):
        raise WidthMismatch(
            f"constant {text} does not fit in {width} bits", filename, line, col)
    return value, width


# ---------------------------------------------------------------------------
# Parser

class _Parser:
    def __init__(self, tokens: list[Token], filename: str):
        self.tokens = tokens
        self.filename = filename
        self.i = 0

    def peek(self, ahead=0) -> Token:
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def next(self) -> Token:
        t = self.tokens[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def at(self, kind, text=None) -> bool:
        t = self.peek()
        return t.kind == kind and (text is None or t.text == text)

    def accept(self, kind, text=None):
        if self.at(kind, text):
            return self.next()
        return None

    def expect(self, kind, text=None) -> Token:
        t = self.peek()
        if not self.at(kind, text):
            want = text if text is not None else kind
            raise ParseError(f"expected {want!r}, found {t.text!r}",
                             self.filename, t.line, t.col)
        return self.next()

    def err(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, self.filename, tok.line, tok.col)

    def unsupported(self, construct, tok=None):
        tok = tok or self.peek()
        raise UnsupportedConstruct(construct, self.filename, tok.line, tok.col)

    # -- top level ---------------------------------------------------------

    def source(self) -> list[SourceModule]:
        modules = []
        while not self.at("eof"):
            t = self.peek()
            if self.at("keyword", "module"):
                modules.append(self.module())
            elif t.kind == "keyword" and t.text in UNSUPPORTED_KEYWORDS:
                self.unsupported(t.text)
            else:
                self.err(f"expected 'module', found {t.text!r}")
        return modules

    def module(self) -> SourceModule:
        mtok = self.expect("keyword", "module")
        name = self.expect("ident").text
        ports = []
        self.expect("op", "(")
        if not self.at("op", ")"):
            ports.append(self.port())
            while self.accept("op", ","):
                ports.append(self.port())
        self.expect("op", ")")
        self.expect("op", ";")

        decls, stmts, instances = [], [], []
        while not self.at("keyword", "endmodule"):
            t = self.peek()
            if t.kind == "eof":
                self.err("unexpected end of input, missing 'endmodule'")
            elif t.kind == "keyword" and t.text in ("wire", "reg"):
                decls.extend(self.decl())
            elif self.at("keyword", "assign"):
                stmts.append(self.assign())
            elif self.at("keyword", "always"):
                stmts.append(self.always())
            elif t.kind == "keyword" and t.text in UNSUPPORTED_KEYWORDS:
                self.unsupported(t.text)
            elif t.kind == "ident":
                instances.append(self.instance())
            else:
                self.err(f"unexpected token {t.text!r} in module body")
        self.expect("keyword", "endmodule")

        mod = SourceModule(name, ports, decls, stmts, instances,
                           line=mtok.line, col=mtok.col)
        self._validate(mod)
        return mod

    def port(self) -> Port:
        t = self.peek()
        if self.at("keyword", "inout"):
            self.unsupported("inout")
        if not (self.at("keyword", "input") or self.at("keyword", "output")):
            self.err(f"expected port direction, found {t.text!r}")
        direction = self.next().text
        kind = "wire"
        if self.at("keyword", "reg"):
            self.next()
            kind = "reg"
        elif self.at("keyword", "wire"):
            self.next()
        width = self.opt_range()
        nt = self.expect("ident")
        return Port(nt.text, direction, width, kind, line=nt.line, col=nt.col)

    def opt_range(self) -> int:
        """Parse an optional [N:0] range, returning the bit width."""
        if not self.at("op", "["):
            return 1
        self.expect("op", "[")
        hi_tok = self.expect("number")
        self.expect("op", ":")
        lo_tok = self.expect("number")
        self.expect("op", "]")
        hi, lo = int(hi_tok.text), int(lo_tok.text)
        if lo != 0:
            self.unsupported(f"range with nonzero base [{hi}:{lo}]", hi_tok)
        return hi + 1

    def decl(self) -> list[Decl]:
        kind = self.next().text  # wire | reg
        width = self.opt_range()
        out = []
        nt = self.expect("ident")
        out.append(Decl(nt.text, kind, width, line=nt.line, col=nt.col))
        while self.accept("op", ","):
            nt = self.expect("ident")
            out.append(Decl(nt.text, kind, width, line=nt.line, col=nt.col))
        self.expect("op", ";")
        return out

    def assign(self) -> Statement:
        at = self.expect("keyword", "assign")
        lhs = self.expect("ident")
        if self.at("op", "["):
            self.unsupported("select on assignment target", lhs)
        self.expect("op", "=")
        rhs = self.expr()
        self.expect("op", ";")
        return Statement("comb", lhs.text, rhs, line=at.line, col=at.col)

    def always(self) -> Statement:
        at = self.expect("keyword", "always")
        self.expect("op", "@")
        clock = None
        if self.accept("op", "*"):
            pass
        else:
            self.expect("op", "(")
            if self.accept("op", "*"):
                pass
            elif self.at("keyword", "negedge"):
                self.unsupported("negedge")
            else:
                self.expect("keyword", "posedge")
                clock = self.expect("ident").text
            self.expect("op", ")")

        t = self.peek()
        if t.kind == "keyword" and t.text in ("begin", "if", "for", "case"):
            self.unsupported(t.text)
        lhs = self.expect("ident")
        if self.at("op", "["):
            self.unsupported("select on assignment target", lhs)
        if self.at("op", "<="):
            self.next()
            if clock is None:
                self.unsupported("nonblocking assign in combinational block", lhs)
            kind = "ff"
        else:
            self.expect("op", "=")
            if clock is not None:
                self.unsupported("blocking assign in clocked block", lhs)
            kind = "comb"
        rhs = self.expr()
        self.expect("op", ";")
        return Statement(kind, lhs.text, rhs, clock=clock, line=at.line, col=at.col)

    def instance(self) -> Instance:
        mt = self.expect("ident")
        it = self.expect("ident")
        self.expect("op", "(")
        connections: dict[str, str] | None
        if self.accept("op", ".*"):
            connections = None
        else:
            connections = {}
            while True:
                self.expect("op", ".")
                port = self.expect("ident").text
                self.expect("op", "(")
                sig = self.expect("ident").text
                self.expect("op", ")")
                if port in connections:
                    self.err(f"port {port!r} connected twice", mt)
                connections[port] = sig
                if not self.accept("op", ","):
                    break
        self.expect("op", ")")
        self.expect("op", ";")
        return Instance(mt.text, it.text, connections, line=mt.line, col=mt.col)

    # -- expressions ---------------------------------------------------------
    # Precedence (tightest first): unary, == !=, &, ^, |, ?:

    def expr(self) -> Expr:
        return self.ternary()

    def ternary(self) -> Expr:
        cond = self.bitor()
        if self.accept("op", "?"):
            then = self.ternary()
            self.expect("op", ":")
            other = self.ternary()
            return Ternary(cond, then, other, line=cond.line, col=cond.col)
        return cond

    def bitor(self) -> Expr:
        e = self.bitxor()
        while self.at("op", "|"):
            t = self.next()
            e = Binary("|", e, self.bitxor(), line=t.line, col=t.col)
        return e

    def bitxor(self) -> Expr:
        e = self.bitand()
        while self.at("op", "^"):
            t = self.next()
            e = Binary("^", e, self.bitand(), line=t.line, col=t.col)
        return e

    def bitand(self) -> Expr:
        e = self.equality()
        while self.at("op", "&"):
            t = self.next()
            e = Binary("&", e, self.equality(), line=t.line, col=t.col)
        return e

    def equality(self) -> Expr:
        e = self.unary()
        while self.at("op", "==") or self.at("op", "!="):
            t = self.next()
            e = Binary(t.text, e, self.unary(), line=t.line, col=t.col)
        return e

    def unary(self) -> Expr:
        t = self.peek()
        if t.kind == "op" and t.text in ("~", "!", "&", "|", "^"):
            self.next()
            return Unary(t.text, self.unary(), line=t.line, col=t.col)
        if t.kind == "op" and t.text in UNSUPPORTED_OPS:
            self.unsupported(f"operator {t.text}")
        return self.atom()

    def atom(self) -> Expr:
        t = self.peek()
        if t.kind == "op" and t.text in UNSUPPORTED_OPS:
            self.unsupported(f"operator {t.text}")
        if self.accept("op", "("):
            e = self.expr()
            self.expect("op", ")")
            return e
        if t.kind == "sized":
            self.next()
            value, width = _parse_sized(t.text, self.filename, t.line, t.col)
            return Const(value, width, line=t.line, col=t.col)
        if t.kind == "number":
            self.next()
            return Const(int(t.text), None, line=t.line, col=t.col)
        if t.kind == "ident":
            self.next()
            if self.accept("op", "["):
                hi = int(self.expect("number").text)
                if self.accept("op", ":"):
                    lo = int(self.expect("number").text)
                    self.expect("op", "]")
                    return PartSelect(t.text, hi, lo, line=t.line, col=t.col)
                self.expect("op", "]")
                return BitSelect(t.text, hi, line=t.line, col=t.col)
            return Ref(t.text, line=t.line, col=t.col)
        if self.at("op", "{"):
            return self.braces()
        if t.kind == "keyword":
            self.unsupported(t.text)
        self.err(f"expected expression, found {t.text!r}")

    def braces(self) -> Expr:
        bt = self.expect("op", "{")
        # {N{expr}} is replication, {a, b, ...} is concatenation
        if self.peek().kind in ("number", "sized") and self.peek(1).text == "{":
            ct = self.next()
            if ct.kind == "sized":
                count, _ = _parse_sized(ct.text, self.filename, ct.line, ct.col)
            else:
                count = int(ct.text)
            if count < 1:
                self.err("replication count must be >= 1", ct)
            self.expect("op", "{")
            inner = self.expr()
            self.expect("op", "}")
            self.expect("op", "}")
            return Replicate(count, inner, line=bt.line, col=bt.col)
        parts = [self.expr()]
        while self.accept("op", ","):
            parts.append(self.expr())
        self.expect("op", "}")
        return Concat(parts, line=bt.line, col=bt.col)

    # -- module-level validation --------------------------------------------

    def _validate(self, mod: SourceModule):
        names = {}
        for p in mod.ports:
            if p.name in names:
                raise ParseError(f"duplicate name {p.name!r} in module {mod.name!r}",
                                 self.filename, p.line, p.col)
            names[p.name] = p
        for d in mod.decls:
            if d.name in names:
                raise ParseError(f"duplicate name {d.name!r} in module {mod.name!r}",
                                 self.filename, d.line, d.col)
            names[d.name] = d
        kinds = mod.kinds()
        assigned = set()
        for s in mod.stmts:
            if s.lhs not in names:
                raise ParseError(f"assignment to undeclared signal {s.lhs!r}",
                                 self.filename, s.line, s.col)
            if s.lhs in assigned:
                raise ParseError(f"signal {s.lhs!r} assigned more than once",
                                 self.filename, s.line, s.col)
            assigned.add(s.lhs)
            if s.kind == "ff" and kinds[s.lhs] != "reg":
                raise ParseError(f"nonblocking target {s.lhs!r} must be a reg",
                                 self.filename, s.line, s.col)
            for r in _expr_refs(s.rhs):
                if r.name not in names:
                    raise ParseError(f"reference to undeclared signal {r.name!r}",
                                     self.filename, r.line, r.col)


def _expr_refs(e: Expr):
    """Yield every Ref/BitSelect/PartSelect node in an expression."""
    stack = [e]
    while stack:
        n = stack.pop()
        if isinstance(n, (Ref, BitSelect, PartSelect)):
            yield n
        elif isinstance(n, Concat):
            stack.extend(n.parts)
        elif isinstance(n, Replicate):
            stack.append(n.expr)
        elif isinstance(n, Unary):
            stack.append(n.operand)
        elif isinstance(n, Binary):
            stack.extend((n.a, n.b))
        elif isinstance(n, Ternary):
            stack.extend((n.cond, n.then, n.other))


def parse(source: str, filename: str = "<input>") -> list[SourceModule]:
    """Parse Verilog source text into a list of modules."""
    tokens = tokenize(source, filename)
    return _Parser(tokens, filename).source()


# ---------------------------------------------------------------------------
# Width checking
#
# Strict rules: operands of binary bitwise ops and ==/!= must have equal
# width, unsized constants adopt the width required by context, reductions
# and comparisons yield width 1, a ternary condition wider than 1 bit is
# implicitly OR-reduced.

def expr_width(e: Expr, widths: dict[str, int], ctx: int | None,
               diags: list[Diagnostic], filename: str) -> int | None:
    """Resolved width of e under context ctx, appending diagnostics.

    Returns None only when the width cannot be determined (unsized
    constant with no context), which is itself reported.
    """
    def bad(node, msg):
        diags.append(Diagnostic(filename, node.line, node.col, "error", msg))

    if isinstance(e, Const):
        if e.width is not None:
            return e.width
        if ctx is None:
            bad(e, "unsized constant needs a width context")
            return None
        return ctx
    if isinstance(e, Ref):
        w = widths.get(e.name)
        if w is None:
            bad(e, f"unknown signal {e.name!r}")
        return w
    if isinstance(e, BitSelect):
        w = widths.get(e.name)
        if w is None:
            bad(e, f"unknown signal {e.name!r}")
        elif not (0 <= e.index < w):
            bad(e, f"bit index {e.index} out of range for {e.name!r} of width {w}")
        return 1
    if isinstance(e, PartSelect):
        w = widths.get(e.name)
        if w is None:
            bad(e, f"unknown signal {e.name!r}")
            return None
        if e.hi < e.lo:
            bad(e, f"part select [{e.hi}:{e.lo}] is reversed")
            return None
        if e.hi >= w:
            bad(e, f"part select [{e.hi}:{e.lo}] out of range for width {w}")
        return e.hi - e.lo + 1
    if isinstance(e, Concat):
        total = 0
        for p in e.parts:
            w = expr_width(p, widths, None, diags, filename)
            if w is None:
                return None
            total += w
        return total
    if isinstance(e, Replicate):
        w = expr_width(e.expr, widths, None, diags, filename)
        return None if w is None else e.count * w
    if isinstance(e, Unary):
        if e.op == "~":
            return expr_width(e.operand, widths, ctx, diags, filename)
        expr_width(e.operand, widths, None, diags, filename)
        return 1  # reductions and !
    if isinstance(e, Binary):
        wa = expr_width(e.a, widths, None, [], filename)
        wb = expr_width(e.b, widths, None, [], filename)
        if wa is None and wb is None:
            wa = wb = ctx if e.op not in ("==", "!=") else None
            if wa is None:
                diags.append(Diagnostic(filename, e.line, e.col, "error",
                                        f"cannot size operands of {e.op!r}"))
                return 1 if e.op in ("==", "!=") else None
        elif wa is None:
            wa = wb
        elif wb is None:
            wb = wa
        # re-walk with the adopted context so nested problems get reported
        expr_width(e.a, widths, wa, diags, filename)
        expr_width(e.b, widths, wb, diags, filename)
        if wa != wb:
            diags.append(Diagnostic(filename, e.line, e.col, "error",
                                    f"width mismatch in {e.op!r}: {wa} vs {wb}"))
        if e.op in ("==", "!="):
            return 1
        return wa
    if isinstance(e, Ternary):
        expr_width(e.cond, widths, None, diags, filename)
        wt = expr_width(e.then, widths, ctx, [], filename)
        we = expr_width(e.other, widths, ctx, [], filename)
        if wt is None:
            wt = we
        if we is None:
            we = wt
        if wt is None:
            diags.append(Diagnostic(filename, e.line, e.col, "error",
                                    "cannot size ternary arms"))
            return ctx
        expr_width(e.then, widths, wt, diags, filename)
        expr_width(e.other, widths, we, diags, filename)
        if wt != we:
            diags.append(Diagnostic(filename, e.line, e.col, "error",
                                    f"width mismatch in ternary arms: {wt} vs {we}"))
        return wt
    raise TypeError(f"unexpected expression node {e!r}")


def check_widths(modules: list[SourceModule],
                 filename: str = "<input>") -> list[Diagnostic]:
    """Check width consistency of every statement; returns diagnostics."""
    diags: list[Diagnostic] = []
    for mod in modules:
        widths = mod.widths()
        for s in mod.stmts:
            lw = widths[s.lhs]
            rw = expr_width(s.rhs, widths, lw, diags, filename)
            if rw is not None and rw != lw:
                diags.append(Diagnostic(
                    filename, s.line, s.col, "error",
                    f"width mismatch assigning {s.lhs!r}: lhs {lw}, rhs {rw}"))
    return diags


def ensure_widths(modules: list[SourceModule], filename: str = "<input>"):
    """Raise WidthMismatch on the first width diagnostic."""
    diags = check_widths(modules, filename)
    errors = [d for d in diags if d.severity == "error"]
    if errors:
        d = errors[0]
        raise WidthMismatch(d.message, d.filename, d.line, d.col)


# ---------------------------------------------------------------------------
# Pretty printer (parse . pretty == identity, structurally)

def _fmt_expr(e: Expr, prec: int = 0) -> str:
    # precedence levels: 0 ternary, 1 |, 2 ^, 3 &, 4 ==/!=, 5 unary/atom
    if isinstance(e, Const):
        if e.width is None:
            return str(e.value)
        return f"{e.width}'b{e.value:0{e.width}b}"
    if isinstance(e, Ref):
        return e.name
    if isinstance(e, BitSelect):
        return f"{e.name}[{e.index}]"
    if isinstance(e, PartSelect):
        return f"{e.name}[{e.hi}:{e.lo}]"
    if isinstance(e, Concat):
        return "{" + ", ".join(_fmt_expr(p, 0) for p in e.parts) + "}"
    if isinstance(e, Replicate):
        return "{" + str(e.count) + "{" + _fmt_expr(e.expr, 0) + "}}"
    if isinstance(e, Unary):
        return f"{e.op}{_fmt_expr(e.operand, 5)}"
    if isinstance(e, Binary):
        level = {"|": 1, "^": 2, "&": 3, "==": 4, "!=": 4}[e.op]
        s = f"{_fmt_expr(e.a, level)} {e.op} {_fmt_expr(e.b, level + 1)}"
        return f"({s})" if level < prec else s
    if isinstance(e, Ternary):
        s = (f"{_fmt_expr(e.cond, 1)} ? {_fmt_expr(e.then, 0)}"
             f" : {_fmt_expr(e.other, 0)}")
        return f"({s})" if prec > 0 else s
    raise TypeError(f"unexpected expression node {e!r}")


def pretty(modules: list[SourceModule]) -> str:
    """Render modules back to parseable source text."""
    out = []
    for mod in modules:
        ports = []
        for p in mod.ports:
            rng = f" [{p.width - 1}:0]" if p.width > 1 else ""
            kind = " reg" if p.kind == "reg" else ""
            ports.append(f"{p.direction}{kind}{rng} {p.name}")
        out.append(f"module {mod.name} ({', '.join(ports)});")
        for d in mod.decls:
            rng = f" [{d.width - 1}:0]" if d.width > 1 else ""
            out.append(f"  {d.kind}{rng} {d.name};")
        for inst in mod.instances:
            if inst.connections is None:
                conns = ".*"
            else:
                conns = ", ".join(f".{p}({s})" for p, s in inst.connections.items())
            out.append(f"  {inst.module_name} {inst.instance_name} ({conns});")
        for s in mod.stmts:
            rhs = _fmt_expr(s.rhs)
            if s.kind == "ff":
                out.append(f"  always @(posedge {s.clock}) {s.lhs} <= {rhs};")
            else:
                out.append(f"  always @* {s.lhs} = {rhs};")
        out.append("endmodule")
        out.append("")
    return "\n".join(out)
