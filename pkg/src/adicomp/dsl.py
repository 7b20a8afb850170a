"""Scenario language: declarations of rings, ideals, modules, complexes and
ring maps, followed by tasks.

    ring R = poly(QQ, [x, y])
    ring S = quotient(R, [x*y])
    ideal I = (x, y)                 # in the most recent ring unless `in R`
    module M = coker([[x, y]])
    complex C = sum(koszul([x]), shift(koszul([y]), 2))
    map theta = ringmap(R -> S, x -> x, y -> y)
    task six_conditions M I depth=6

Every name, kind and polynomial variable is checked while parsing, so all
diagnostics carry a line and a column.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .expr import Node, ParseError, Token, TokenStream, parse_expression, tokenize

KINDS = ("ring", "ideal", "module", "complex", "map")

# task name -> (positional argument kinds, allowed parameters)
TASKS: Dict[str, Tuple[Tuple[Tuple[str, ...], ...], Tuple[str, ...]]] = {
    "profile": ((("module",), ("ideal",)), ("depth",)),
    "six_conditions": ((("module", "complex"), ("ideal",)), ("depth",)),
    "factorization": ((("module",), ("ideal",)), ("depth",)),
    "spectral_edge": ((("complex", "module"), ("ideal",)), ("depth",)),
    "base_change": ((("map",), ("ideal",), ("ideal",)), ("depth",)),
    "radical_invariance": ((("module", "complex"), ("ideal",)), ("depth", "exponents")),
    "wpr": ((("ideal",),), ("depth",)),
    "koszul_selfdual": ((("ideal",),), ()),
    "koszul_homology": ((("ideal",),), ()),
    "l_functor": ((("module",), ("ideal",)), ("depth", "n")),
    "derived_completion": ((("module", "complex"), ("ideal",)), ("depth",)),
    "derived_torsion": ((("module", "complex"), ("ideal",)), ("depth",)),
    "adic": ((("module",), ("ideal",)), ("depth",)),
    "gm_comparison": ((("module",), ("ideal",)), ("depth",)),
    "finite_oracle": ((), ("ring", "max_degree")),
}

ORACLE_RINGS = {"z8": "Z/8", "f2x3": "F2[x]/(x^3)"}


@dataclass(frozen=True)
class Ref:
    name: str
    line: int
    col: int


@dataclass
class Decl:
    kind: str
    name: str
    form: str
    args: List[Any]
    ring: Optional[str]
    line: int
    col: int


@dataclass
class Task:
    name: str
    args: List[Ref]
    params: Dict[str, Any]
    line: int
    col: int

    def describe(self) -> str:
        parts = [self.name] + [a.name for a in self.args]
        parts += [f"{k}={_param_text(v)}" for k, v in sorted(self.params.items())]
        return " ".join(parts)


def _param_text(v) -> str:
    if isinstance(v, list):
        return "[" + ",".join(str(x) for x in v) + "]"
    return str(v)


@dataclass
class Scenario:
    decls: List[Decl] = field(default_factory=list)
    tasks: List[Task] = field(default_factory=list)
    text: str = ""

    def decl(self, name: str) -> Decl:
        return next(d for d in self.decls if d.name == name)


# ---------------------------------------------------------------- parser

class _Parser:
    def __init__(self, text: str):
        self.ts = TokenStream(tokenize(text, keep_newlines=True))
        self.scn = Scenario(text=text)
        self.table: Dict[str, Decl] = {}
        self.ring_vars: Dict[str, Tuple[str, ...]] = {}
        self.current_ring: Optional[str] = None

    # -------------------------------------------------------- helpers
    def error(self, msg: str, tok: Token):
        raise ParseError(msg, tok.line, tok.col)

    def peek(self) -> Token:
        return self.ts.peek()

    def at_name(self, text: str) -> bool:
        t = self.peek()
        return t.kind == "name" and t.text == text

    def end_of_statement(self):
        t = self.peek()
        if t.kind == "nl":
            self.ts.next()
        elif t.kind != "eof":
            self.error(f"unexpected {t.text!r} at end of statement", t)

    def integer(self, signed: bool = False) -> int:
        neg = False
        if signed and self.ts.at("-"):
            self.ts.next()
            neg = True
        t = self.ts.next()
        if t.kind != "int":
            self.error(f"expected integer, found {t.text or 'end of line'!r}", t)
        return -int(t.text) if neg else int(t.text)

    def ref(self, kinds: Sequence[str]) -> Ref:
        t = self.ts.expect_name()
        d = self.table.get(t.text)
        if d is None:
            self.error(f"unknown identifier {t.text!r}", t)
        if d.kind not in kinds and not (d.kind == "ring" and "module" in kinds):
            self.error(f"type mismatch: {t.text!r} is a {d.kind}, expected {' or '.join(kinds)}", t)
        return Ref(t.text, t.line, t.col)

    def ring_of(self, r: Ref) -> str:
        d = self.table[r.name]
        return d.name if d.kind == "ring" else d.ring

    def check_expr(self, node: Node, ring: str):
        kind = node[0]
        if kind == "name":
            if node[1] not in self.ring_vars[ring]:
                raise ParseError(f"unknown variable {node[1]!r} in ring {ring}", node[2], node[3])
        elif kind in ("neg",):
            self.check_expr(node[1], ring)
        elif kind in ("add", "sub", "mul", "div", "pow"):
            self.check_expr(node[1], ring)
            self.check_expr(node[2], ring)

    def expr(self, ring: str) -> Node:
        if self.peek().kind in ("nl", "eof"):
            self.error("expected an expression", self.peek())
        node = parse_expression(self.ts)
        self.check_expr(node, ring)
        return node

    def expr_list(self, ring: str, close: str) -> List[Node]:
        out = []
        if self.ts.at(close):
            return out
        out.append(self.expr(ring))
        while self.ts.at(","):
            self.ts.next()
            out.append(self.expr(ring))
        return out

    def matrix(self, ring: str) -> List[List[Node]]:
        start = self.ts.expect("[")
        rows = []
        while True:
            self.ts.expect("[")
            rows.append(self.expr_list(ring, "]"))
            self.ts.expect("]")
            if not self.ts.at(","):
                break
            self.ts.next()
        self.ts.expect("]")
        widths = {len(r) for r in rows}
        if len(widths) != 1 or 0 in widths:
            self.error("matrix rows must be nonempty and of equal length", start)
        return rows

    def target_ring(self, anchor: Token) -> str:
        """Ring named by a trailing `in R`, else the most recent ring."""
        if self.at_name("in"):
            self.ts.next()
            r = self.ref(("ring",))
            if self.table[r.name].kind != "ring":
                self.error(f"type mismatch: {r.name!r} is not a ring", self.ts.tokens[self.ts.i - 1])
            return r.name
        if self.current_ring is None:
            self.error("no ring declared yet", anchor)
        return self.current_ring

    def peek_in_ring(self, anchor: Token) -> str:
        """Like target_ring, but looks ahead for `in R` at the end of the line."""
        j = self.ts.i
        toks = self.ts.tokens
        while toks[j].kind not in ("nl", "eof"):
            if toks[j].kind == "name" and toks[j].text == "in" and toks[j + 1].kind == "name":
                name = toks[j + 1].text
                d = self.table.get(name)
                if d is None:
                    self.error(f"unknown identifier {name!r}", toks[j + 1])
                if d.kind != "ring":
                    self.error(f"type mismatch: {name!r} is a {d.kind}, expected ring", toks[j + 1])
                return name
            j += 1
        if self.current_ring is None:
            self.error("no ring declared yet", anchor)
        return self.current_ring

    def skip_in_clause(self, ring: str):
        if self.at_name("in"):
            self.ts.next()
            t = self.ts.expect_name()
            if t.text != ring:
                self.error(f"type mismatch: object lives over {ring}, not {t.text}", t)

    # -------------------------------------------------------- statements
    def parse(self) -> Scenario:
        while True:
            t = self.peek()
            if t.kind == "eof":
                break
            if t.kind == "nl":
                self.ts.next()
                continue
            if t.kind == "name" and t.text == "task":
                self.task()
            elif t.kind == "name" and t.text in KINDS:
                self.declaration()
            else:
                self.error(f"expected a declaration or task, found {t.text!r}", t)
        return self.scn

    def declaration(self):
        kind_tok = self.ts.next()
        name_tok = self.ts.expect_name()
        if name_tok.text in self.table:
            self.error(f"duplicate name {name_tok.text!r}", name_tok)
        if name_tok.text in ("task", "in") or name_tok.text in KINDS:
            self.error(f"reserved word {name_tok.text!r} cannot be a name", name_tok)
        self.ts.expect("=")
        kind = kind_tok.text
        form, args, ring = getattr(self, f"_{kind}")(name_tok)
        decl = Decl(kind, name_tok.text, form, args, ring, kind_tok.line, kind_tok.col)
        self.table[decl.name] = decl
        self.scn.decls.append(decl)
        self.end_of_statement()

    def _domain(self) -> str:
        t = self.ts.expect_name()
        if t.text in ("ZZ", "QQ"):
            return t.text
        if t.text == "GF":
            self.ts.expect("(")
            p = self.integer()
            self.ts.expect(")")
            return f"GF({p})"
        self.error(f"unknown coefficient domain {t.text!r}", t)

    def _ring(self, name_tok: Token):
        t = self.peek()
        if self.at_name("ZZ") and self.ts.peek(1).kind == "op" and self.ts.peek(1).text == "/":
            self.ts.next()
            self.ts.next()
            m = self.integer()
            if m < 2:
                self.error("modulus must be at least 2", t)
            form, args, variables = "zmod", [m], ()
        elif self.at_name("ZZ") or self.at_name("QQ") or self.at_name("GF"):
            form, args, variables = "field_or_zz", [self._domain()], ()
        elif self.at_name("poly"):
            self.ts.next()
            self.ts.expect("(")
            dom = self._domain()
            self.ts.expect(",")
            self.ts.expect("[")
            names = []
            while not self.ts.at("]"):
                v = self.ts.expect_name()
                if v.text in names:
                    self.error(f"duplicate variable {v.text!r}", v)
                names.append(v.text)
                if self.ts.at(","):
                    self.ts.next()
            self.ts.expect("]")
            order = "grevlex"
            if self.ts.at(","):
                self.ts.next()
                o = self.ts.expect_name()
                if o.text not in ("lex", "grevlex"):
                    self.error(f"unknown monomial order {o.text!r}", o)
                order = o.text
            self.ts.expect(")")
            form, args, variables = "poly", [dom, names, order], tuple(names)
        elif self.at_name("quotient"):
            self.ts.next()
            self.ts.expect("(")
            base = self.ref(("ring",))
            if self.table[base.name].kind != "ring":
                self.error(f"type mismatch: {base.name!r} is not a ring", self.ts.tokens[self.ts.i - 1])
            self.ts.expect(",")
            self.ts.expect("[")
            rels = self.expr_list(base.name, "]")
            self.ts.expect("]")
            self.ts.expect(")")
            form, args, variables = "quotient", [base, rels], self.ring_vars[base.name]
        else:
            self.error(f"unknown ring form {t.text!r}", t)
        self.ring_vars[name_tok.text] = variables
        self.current_ring = name_tok.text
        return form, args, name_tok.text

    def _ideal(self, name_tok: Token):
        ring = self.peek_in_ring(name_tok)
        self.ts.expect("(")
        gens = self.expr_list(ring, ")")
        self.ts.expect(")")
        self.skip_in_clause(ring)
        return "gens", gens, ring

    def _module(self, name_tok: Token):
        t = self.peek()
        if self.at_name("coker"):
            ring = self.peek_in_ring(name_tok)
            self.ts.next()
            self.ts.expect("(")
            rows = self.matrix(ring)
            self.ts.expect(")")
            self.skip_in_clause(ring)
            return "coker", rows, ring
        if self.at_name("free"):
            ring = self.peek_in_ring(name_tok)
            self.ts.next()
            self.ts.expect("(")
            n = self.integer()
            self.ts.expect(")")
            self.skip_in_clause(ring)
            return "free", [n], ring
        if self.at_name("zero"):
            ring = self.peek_in_ring(name_tok)
            self.ts.next()
            self.skip_in_clause(ring)
            return "zero", [], ring
        if self.at_name("quotient"):
            self.ts.next()
            self.ts.expect("(")
            I = self.ref(("ideal",))
            self.ts.expect(")")
            ring = self.ring_of(I)
            self.skip_in_clause(ring)
            return "quotient", [I], ring
        if self.at_name("sum"):
            self.ts.next()
            refs = self._ref_list(("module",))
            ring = self._common_ring(refs)
            self.skip_in_clause(ring)
            return "sum", refs, ring
        self.error(f"unknown module form {t.text!r}", t)

    def _ref_list(self, kinds) -> List[Ref]:
        self.ts.expect("(")
        refs = [self.ref(kinds)]
        while self.ts.at(","):
            self.ts.next()
            refs.append(self.ref(kinds))
        self.ts.expect(")")
        return refs

    def _common_ring(self, refs: Sequence[Ref]) -> str:
        ring = self.ring_of(refs[0])
        for r in refs[1:]:
            if self.ring_of(r) != ring:
                raise ParseError(f"type mismatch: {r.name!r} lives over {self.ring_of(r)}, not {ring}", r.line, r.col)
        return ring

    def _complex(self, name_tok: Token):
        t = self.peek()
        if self.at_name("koszul"):
            self.ts.next()
            self.ts.expect("(")
            if self.ts.at("["):
                ring = self.peek_in_ring(name_tok)
                self.ts.next()
                gens = self.expr_list(ring, "]")
                self.ts.expect("]")
                if not gens:
                    self.error("a Koszul complex needs at least one element", t)
                self.ts.expect(")")
                self.skip_in_clause(ring)
                return "koszul", [gens], ring
            I = self.ref(("ideal",))
            self.ts.expect(")")
            ring = self.ring_of(I)
            self.skip_in_clause(ring)
            return "koszul_ideal", [I], ring
        if self.at_name("shift"):
            self.ts.next()
            self.ts.expect("(")
            C = self.ref(("complex",))
            self.ts.expect(",")
            k = self.integer(signed=True)
            self.ts.expect(")")
            return "shift", [C, k], self.ring_of(C)
        if self.at_name("sum"):
            self.ts.next()
            refs = self._ref_list(("complex",))
            return "sum", refs, self._common_ring(refs)
        if self.at_name("module"):
            self.ts.next()
            self.ts.expect("(")
            M = self.ref(("module",))
            deg = 0
            if self.ts.at(","):
                self.ts.next()
                deg = self.integer(signed=True)
            self.ts.expect(")")
            return "module", [M, deg], self.ring_of(M)
        if self.at_name("twoterm"):
            ring = self.peek_in_ring(name_tok)
            self.ts.next()
            self.ts.expect("(")
            rows = self.matrix(ring)
            self.ts.expect(",")
            deg = self.integer(signed=True)
            self.ts.expect(")")
            self.skip_in_clause(ring)
            return "twoterm", [rows, deg], ring
        self.error(f"unknown complex form {t.text!r}", t)

    def _map(self, name_tok: Token):
        t = self.peek()
        if not self.at_name("ringmap"):
            self.error(f"unknown map form {t.text!r}", t)
        self.ts.next()
        self.ts.expect("(")
        src = self.ref(("ring",))
        self.ts.expect("->")
        tgt = self.ref(("ring",))
        for r in (src, tgt):
            if self.table[r.name].kind != "ring":
                raise ParseError(f"type mismatch: {r.name!r} is not a ring", r.line, r.col)
        images: Dict[str, Node] = {}
        while self.ts.at(","):
            self.ts.next()
            v = self.ts.expect_name()
            if v.text not in self.ring_vars[src.name]:
                self.error(f"unknown variable {v.text!r} in ring {src.name}", v)
            if v.text in images:
                self.error(f"variable {v.text!r} mapped twice", v)
            self.ts.expect("->")
            images[v.text] = self.expr(tgt.name)
        self.ts.expect(")")
        missing = [v for v in self.ring_vars[src.name] if v not in images]
        if missing:
            self.error(f"no image for variables {missing}", t)
        return "ringmap", [src, tgt, images], None

    def task(self):
        kw = self.ts.next()
        t = self.ts.next()
        if t.kind != "name":
            self.error(f"expected task name, found {t.text or 'end of line'!r}", t)
        if t.text not in TASKS:
            self.error(f"unknown task {t.text!r}", t)
        kinds, allowed = TASKS[t.text]
        args: List[Ref] = []
        params: Dict[str, Any] = {}
        while self.peek().kind not in ("nl", "eof"):
            nt = self.peek()
            if nt.kind != "name":
                self.error(f"unexpected {nt.text!r} in task arguments", nt)
            if self.ts.peek(1).kind == "op" and self.ts.peek(1).text == "=":
                self.ts.next()
                self.ts.next()
                if nt.text not in allowed:
                    self.error(f"task {t.text!r} takes no parameter {nt.text!r}", nt)
                if nt.text in params:
                    self.error(f"parameter {nt.text!r} given twice", nt)
                params[nt.text] = self._param(nt)
                continue
            if params:
                self.error("positional arguments must come before parameters", nt)
            i = len(args)
            if i >= len(kinds):
                self.error(f"task {t.text!r} takes {len(kinds)} argument(s)", nt)
            args.append(self.ref(kinds[i]))
        if len(args) != len(kinds):
            self.error(f"task {t.text!r} takes {len(kinds)} argument(s), got {len(args)}", t)
        self._check_task_rings(t, args)
        if t.text == "radical_invariance" and "exponents" not in params:
            self.error("radical_invariance needs exponents=[...]", t)
        if t.text == "finite_oracle" and "ring" not in params:
            self.error("finite_oracle needs ring=z8 or ring=f2x3", t)
        self.scn.tasks.append(Task(t.text, args, params, kw.line, kw.col))
        self.end_of_statement()

    def _param(self, key: Token):
        if key.text == "exponents":
            self.ts.expect("[")
            vals = [self.integer()]
            while self.ts.at(","):
                self.ts.next()
                vals.append(self.integer())
            self.ts.expect("]")
            if any(v < 1 for v in vals):
                self.error("exponents must be positive", key)
            return vals
        if key.text == "ring":
            v = self.ts.expect_name()
            if v.text not in ORACLE_RINGS:
                self.error(f"unknown oracle ring {v.text!r} (choose z8 or f2x3)", v)
            return v.text
        tok = self.peek()
        n = self.integer()
        if key.text == "depth" and n < 2:
            self.error("depth must be at least 2", tok)
        return n

    def _check_task_rings(self, t: Token, args: List[Ref]):
        if t.text == "base_change":
            theta, I, J = args
            src, tgt = self.table[theta.name].args[0].name, self.table[theta.name].args[1].name
            if self.ring_of(I) != src:
                raise ParseError(f"type mismatch: {I.name!r} lives over {self.ring_of(I)}, not {src}", I.line, I.col)
            if self.ring_of(J) != tgt:
                raise ParseError(f"type mismatch: {J.name!r} lives over {self.ring_of(J)}, not {tgt}", J.line, J.col)
        elif len(args) >= 2:
            self._common_ring(args)


def parse_scenario(text: str) -> Scenario:
    """Parse scenario text; raises ParseError with a line and column on failure."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    return _Parser(text).parse()


# ---------------------------------------------------------------- elaboration

def elaborate(scn: Scenario) -> Dict[str, Any]:
    """Build the mathematical objects named in the declarations."""
    from .coeffs import GF, QQ, ZZ
    from .complexes import BoundedComplex, complex_sum, shift
    from .koszul import koszul_on
    from .modules import FpModule, ModuleMap, direct_sum
    from .rings import Ideal, Ring, RingMap, integers, integers_mod, polynomial_ring

    env: Dict[str, Any] = {}

    def dom(name):
        if name == "ZZ":
            return ZZ
        if name == "QQ":
            return QQ
        return GF(int(name[3:-1]))

    def as_module(r: Ref):
        v = env[r.name]
        return FpModule.free(v, 1) if isinstance(v, Ring) else v

    for d in scn.decls:
        ring = env.get(d.ring) if d.ring else None
        if d.kind == "ring":
            if d.form == "zmod":
                v = integers_mod(d.args[0])
            elif d.form == "field_or_zz":
                v = integers() if d.args[0] == "ZZ" else polynomial_ring(dom(d.args[0]), [])
            elif d.form == "poly":
                v = polynomial_ring(dom(d.args[0]), d.args[1], d.args[2])
            else:
                base = env[d.args[0].name]
                v = base.quotient([base.from_ast(e) for e in d.args[1]])
        elif d.kind == "ideal":
            v = Ideal(ring, [ring.from_ast(e) for e in d.args])
        elif d.kind == "module":
            if d.form == "coker":
                rows = [tuple(ring.from_ast(e) for e in row) for row in d.args]
                v = FpModule(ring, len(rows[0]), rows)
            elif d.form == "free":
                v = FpModule.free(ring, d.args[0])
            elif d.form == "zero":
                v = FpModule.zero(ring)
            elif d.form == "quotient":
                v = FpModule.cyclic(env[d.args[0].name])
            else:
                v = direct_sum(*[as_module(r) for r in d.args])
        elif d.kind == "complex":
            if d.form == "koszul":
                v = koszul_on(ring, [ring.from_ast(e) for e in d.args[0]])
            elif d.form == "koszul_ideal":
                v = koszul_on(ring, list(env[d.args[0].name].gens))
            elif d.form == "shift":
                v = shift(env[d.args[0].name], d.args[1])
            elif d.form == "sum":
                v = complex_sum(*[env[r.name] for r in d.args])
            elif d.form == "module":
                v = BoundedComplex.concentrated(as_module(d.args[0]), d.args[1])
            else:
                rows = [tuple(ring.from_ast(e) for e in row) for row in d.args[0]]
                f = ModuleMap(FpModule.free(ring, len(rows)), FpModule.free(ring, len(rows[0])), rows)
                v = BoundedComplex.two_term(f, d.args[1])
        else:
            src, tgt, images = env[d.args[0].name], env[d.args[1].name], d.args[2]
            v = RingMap(src, tgt, [tgt.from_ast(images[x]) for x in src.variables])
        env[d.name] = v
    return env
