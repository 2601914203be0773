"""Line-oriented scenario files.

    name FX-DAT
    ring p=3 atoms=[e1, e2, e3, e4]
    groupoid {
      objects [x, y]
      arrow l : x -> y
      inverse l l^-1
      compose ...
    }
    action { x = [e1]; g : [e1 |-> e1] }
    datum base=x { tau y = l; I x = [e1]; link y : [...]; local g : [...] }
    globalization { atoms=[...]; J x = [...]; local g : [...]; link y : [...] }
    check verify skew

Statements end at a newline or `;`, `#` starts a comment. Groupoids may
also be given as `groupoid gamma m=2 group=Z2`, `groupoid coarse [x, y]` or
`groupoid cyclic n=3`. Maps accept both `|->` and `↦`.
"""

from __future__ import annotations
from dataclasses import dataclass, field
import re
from typing import Iterator
from framework.errors import InputError
from plugins.datum.datum import Datum, ext
from plugins.globalization.globalization import GlobalizationData
from plugins.groupoid.groupoid import (
    Groupoid,
    RawGroupoid,
    Transversal,
    build_coarse,
    build_gamma,
    cyclic_group,
    validate_groupoid,
)
from plugins.partial_action.action import PartialAction
from plugins.split_ring.ring import Ideal, PartialRingIso, SplitRing


class ParseError(InputError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}", line=line, column=column)
        self.line, self.column = line, column


class UnresolvedReference(ParseError):
    def __init__(self, name: str, kind: str, line: int, column: int):
        super().__init__(f"unknown {kind} {name}", line, column)
        self.witness["name"] = name
        self.ref = name


class MissingStanza(InputError):
    pass


TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
    |(?P<comment>\#[^\n]*)
    |(?P<nl>\n|;)
    |(?P<maps>\|->|↦)
    |(?P<arrow>->)
    |(?P<punct>[{}\[\]=:,])
    |(?P<name>\([^()\s]*\)|[\w^*@.'+]+(?:-(?!>)[\w^*@.'+]+)*)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        if kind == "nl" and m.group() == "\n":
            line, line_start = line + 1, m.end()
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


@dataclass
class Scenario:
    name: str = "scenario"
    ring: SplitRing | None = None
    groupoid: Groupoid | None = None
    action: PartialAction | None = None
    datum: Datum | None = None
    globalization: GlobalizationData | None = None
    checks: list[str] = field(default_factory=list)

    def require_ring(self) -> SplitRing:
        if self.ring is None:
            raise MissingStanza(f"{self.name} has no ring")
        return self.ring

    def require_groupoid(self) -> Groupoid:
        if self.groupoid is None:
            raise MissingStanza(f"{self.name} has no groupoid")
        return self.groupoid

    def require_action(self) -> PartialAction:
        if self.action is None:
            raise MissingStanza(f"{self.name} has no action")
        return self.action

    def require_datum(self) -> Datum:
        if self.datum is None:
            raise MissingStanza(f"{self.name} has no datum")
        return self.datum

    def theta(self) -> PartialAction:
        """The action itself, or Ext of the datum."""
        if self.action is not None:
            return self.action
        return ext(self.require_datum())


# raw statements keep their tokens until the ring and groupoid are known

type MapTokens = list[tuple[Token, Token]]


@dataclass
class _Entry:
    head: Token
    target: Token
    atoms: list[Token] | None = None
    pairs: MapTokens | None = None


@dataclass
class _Raw:
    name: str | None = None
    ring: tuple[Token | None, list[Token]] | None = None
    groupoid: tuple[Token, object] | None = None
    action: list[_Entry] | None = None
    datum: tuple[Token, list[_Entry]] | None = None
    globalization: tuple[list[Token] | None, list[_Entry]] | None = None
    checks: list[str] = field(default_factory=list)


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def error(self, message: str, t: Token | None = None) -> ParseError:
        t = t or self.peek()
        return ParseError(message, t.line, t.column)

    def expect(self, kind: str, text: str | None = None) -> Token:
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            want = repr(text) if text is not None else kind
            got = repr(t.text) if t.text else t.kind
            raise self.error(f"expected {want}, got {got}")
        return self.next()

    def accept(self, kind: str, text: str | None = None) -> Token | None:
        t = self.peek()
        if t.kind == kind and (text is None or t.text == text):
            return self.next()
        return None

    def skip_nl(self):
        while self.accept("nl"):
            pass

    def end_statement(self):
        if self.peek().kind in ("eof",) or self.peek().text == "}":
            return
        self.expect("nl")

    def name_list(self) -> list[Token]:
        self.expect("punct", "[")
        items: list[Token] = []
        if self.accept("punct", "]"):
            return items
        while True:
            items.append(self.expect("name"))
            if self.accept("punct", "]"):
                return items
            self.expect("punct", ",")

    def map_list(self) -> MapTokens:
        self.expect("punct", "[")
        pairs: MapTokens = []
        if self.accept("punct", "]"):
            return pairs
        while True:
            a = self.expect("name")
            self.expect("maps")
            pairs.append((a, self.expect("name")))
            if self.accept("punct", "]"):
                return pairs
            self.expect("punct", ",")

    def keyword_int(self, key: str) -> int:
        self.expect("name", key)
        self.expect("punct", "=")
        t = self.expect("name")
        if not t.text.isdigit():
            raise self.error(f"{key} must be an integer", t)
        return int(t.text)

    def block(self, statement) -> list:
        self.expect("punct", "{")
        items = []
        self.skip_nl()
        while not self.accept("punct", "}"):
            if self.peek().kind == "eof":
                raise self.error("unterminated block")
            items.append(statement())
            self.end_statement()
            self.skip_nl()
        return items

    def scenario(self) -> _Raw:
        raw = _Raw()
        self.skip_nl()
        if self.peek().kind == "eof":
            raise self.error("empty scenario")
        seen: set[str] = set()
        while self.peek().kind != "eof":
            head = self.expect("name")
            if head.text in seen and head.text != "check":
                raise self.error(f"duplicate {head.text} stanza", head)
            seen.add(head.text)
            match head.text:
                case "name":
                    raw.name = self.expect("name").text
                case "ring":
                    p = None
                    if self.peek().text == "p":
                        p = self._ring_p()
                    self.expect("name", "atoms")
                    self.expect("punct", "=")
                    raw.ring = (p, self.name_list())
                case "groupoid":
                    raw.groupoid = (head, self.groupoid())
                case "action":
                    raw.action = self.block(self.entry)
                case "datum":
                    self.expect("name", "base")
                    self.expect("punct", "=")
                    base = self.expect("name")
                    raw.datum = (base, self.block(self.entry))
                case "globalization":
                    raw.globalization = self.globalization()
                case "check":
                    while self.peek().kind == "name":
                        raw.checks.append(self.next().text)
                case _:
                    raise self.error(f"unknown stanza {head.text}", head)
            self.end_statement()
            self.skip_nl()
        return raw

    def _ring_p(self) -> Token:
        self.expect("name", "p")
        self.expect("punct", "=")
        t = self.expect("name")
        if not t.text.isdigit():
            raise self.error("p must be an integer", t)
        return t

    def groupoid(self):
        if self.peek().text == "{":
            return ("table", self.block(self.groupoid_statement))
        kind = self.expect("name")
        match kind.text:
            case "gamma":
                m = self.keyword_int("m")
                self.expect("name", "group")
                self.expect("punct", "=")
                g = self.expect("name")
                if not re.fullmatch(r"Z\d+", g.text) or int(g.text[1:]) < 1:
                    raise self.error("group must be Z<n>", g)
                return ("gamma", m, int(g.text[1:]))
            case "coarse":
                return ("coarse", self.name_list())
            case "cyclic":
                return ("cyclic", self.keyword_int("n"))
        raise self.error(f"unknown groupoid form {kind.text}", kind)

    def groupoid_statement(self):
        head = self.expect("name")
        match head.text:
            case "objects":
                return (head, self.name_list())
            case "arrow":
                g = self.expect("name")
                self.expect("punct", ":")
                s = self.expect("name")
                self.expect("arrow")
                return (head, g, s, self.expect("name"))
            case "identity":
                x = self.expect("name")
                self.expect("punct", "=")
                return (head, x, self.expect("name"))
            case "inverse":
                return (head, self.expect("name"), self.expect("name"))
            case "compose":
                g, h = self.expect("name"), self.expect("name")
                self.expect("punct", "=")
                return (head, g, h, self.expect("name"))
        raise self.error(f"unknown groupoid statement {head.text}", head)

    def entry(self) -> _Entry:
        """`x = [atoms]`, `g : [maps]` or `<keyword> target ...`."""
        first = self.expect("name")
        if self.accept("punct", "="):
            return _Entry(first, first, atoms=self.name_list())
        if self.accept("punct", ":"):
            return _Entry(first, first, pairs=self.map_list())
        target = self.expect("name")
        if self.accept("punct", "="):
            if self.peek().text == "[":
                return _Entry(first, target, atoms=self.name_list())
            return _Entry(first, target, atoms=[self.expect("name")])
        self.expect("punct", ":")
        return _Entry(first, target, pairs=self.map_list())

    def globalization(self):
        atoms = None
        self.expect("punct", "{")
        entries: list[_Entry] = []
        self.skip_nl()
        while not self.accept("punct", "}"):
            if self.peek().kind == "eof":
                raise self.error("unterminated block")
            if self.peek().text == "atoms":
                self.next()
                self.expect("punct", "=")
                atoms = self.name_list()
            else:
                entries.append(self.entry())
            self.end_statement()
            self.skip_nl()
        return (atoms, entries)


class _Resolver:
    def __init__(self, raw: _Raw, p: int | None, default_p: int):
        self.raw = raw
        self.p = p
        self.default_p = default_p

    def ring(self) -> SplitRing | None:
        if self.raw.ring is None:
            return None
        p_tok, atoms = self.raw.ring
        p = self.p or (int(p_tok.text) if p_tok else self.default_p)
        names = [t.text for t in atoms]
        for i, t in enumerate(atoms):
            if t.text in names[:i]:
                raise ParseError(f"duplicate atom {t.text}", t.line, t.column)
        return SplitRing(p, tuple(names))

    def groupoid(self) -> Groupoid | None:
        if self.raw.groupoid is None:
            return None
        head, form = self.raw.groupoid
        match form:
            case ("gamma", m, n):
                return build_gamma(m, cyclic_group(n))
            case ("coarse", objects):
                return build_coarse([t.text for t in objects])
            case ("cyclic", n):
                return cyclic_group(n)
            case ("table", statements):
                return self.table(head, statements)

    def table(self, head: Token, statements) -> Groupoid:
        objects: list[str] = []
        raw = RawGroupoid(objects, [], {}, {}, {}, {})
        for st in statements:
            if st[0].text == "objects":
                objects.extend(t.text for t in st[1])
        if not objects:
            raise ParseError("groupoid has no objects", head.line, head.column)

        def obj(t: Token) -> str:
            if t.text not in objects:
                raise UnresolvedReference(t.text, "object", t.line, t.column)
            return t.text

        def mor(t: Token) -> str:
            if t.text not in raw.morphisms and t.text not in [raw.identity_of(x) for x in objects]:
                raise UnresolvedReference(t.text, "morphism", t.line, t.column)
            return t.text

        for st in statements:
            match st[0].text:
                case "identity":
                    raw.identity[obj(st[1])] = st[2].text
                case "arrow":
                    g = st[1].text
                    if g in raw.morphisms:
                        raise ParseError(f"duplicate arrow {g}", st[1].line, st[1].column)
                    raw.morphisms.append(g)
                    raw.src[g], raw.tgt[g] = obj(st[2]), obj(st[3])
        for st in statements:
            match st[0].text:
                case "inverse":
                    raw.inv[mor(st[1])] = mor(st[2])
                case "compose":
                    raw.comp[(mor(st[1]), mor(st[2]))] = mor(st[3])
        return validate_groupoid(raw.fill_identities())

    def atom(self, ring: SplitRing, t: Token) -> str:
        if t.text not in ring.positions:
            raise UnresolvedReference(t.text, "atom", t.line, t.column)
        return t.text

    def morphism(self, G: Groupoid, t: Token, within: Groupoid | None = None) -> str:
        if t.text not in G.index or (within is not None and t.text not in within.index):
            raise UnresolvedReference(t.text, "morphism", t.line, t.column)
        return t.text

    def object(self, G: Groupoid, t: Token) -> str:
        if t.text not in G.objects:
            raise UnresolvedReference(t.text, "object", t.line, t.column)
        return t.text

    def ideal(self, ring: SplitRing, atoms: list[Token]) -> Ideal:
        return ring.ideal(self.atom(ring, t) for t in atoms)

    def iso(self, ring: SplitRing, pairs: MapTokens) -> PartialRingIso:
        mapping = {self.atom(ring, a): self.atom(ring, b) for a, b in pairs}
        if len(set(mapping.values())) != len(mapping) or len(mapping) != len(pairs):
            t = pairs[0][0]
            raise ParseError("map is not a bijection", t.line, t.column)
        return PartialRingIso.of(mapping)

    def action_on(
        self, G: Groupoid, ring: SplitRing, entries: list[_Entry], defaults: dict[str, Ideal]
    ) -> PartialAction:
        """Unlisted identities act as identity on `defaults`, other arrows as the empty map."""
        isos: dict[str, PartialRingIso] = {}
        for x in G.objects:
            isos[G.identity[x]] = PartialRingIso.identity(defaults.get(x, Ideal(frozenset())))
        for e in entries:
            if e.atoms is not None:
                x = self.object(G, e.target)
                isos[G.identity[x]] = PartialRingIso.identity(self.ideal(ring, e.atoms))
            else:
                isos[self.morphism(G, e.target)] = self.iso(ring, e.pairs)
        empty = PartialRingIso.of({})
        isos = {g: isos.get(g, empty) for g in G.morphisms}
        return PartialAction(G, ring, {g: f.cod for g, f in isos.items()}, isos)

    def action(self, G: Groupoid, ring: SplitRing) -> PartialAction:
        for e in self.raw.action:
            if e.head is not e.target:
                raise ParseError(f"unexpected {e.head.text}", e.head.line, e.head.column)
        return self.action_on(G, ring, self.raw.action, {})

    def datum(self, G: Groupoid, ring: SplitRing) -> Datum:
        base_tok, entries = self.raw.datum
        x = self.object(G, base_tok)
        H = G.isotropy(x)
        pick = {x: G.identity[x]}
        ideals: dict[str, Ideal] = {y: Ideal(frozenset()) for y in G.objects}
        links: dict[str, PartialRingIso] = {}
        local: list[_Entry] = []
        for e in entries:
            match e.head.text:
                case "tau":
                    if e.atoms is None or len(e.atoms) != 1:
                        raise ParseError("tau needs one morphism", e.head.line, e.head.column)
                    pick[self.object(G, e.target)] = self.morphism(G, e.atoms[0])
                case "I" if e.atoms is not None:
                    ideals[self.object(G, e.target)] = self.ideal(ring, e.atoms)
                case "link" if e.pairs is not None:
                    links[self.object(G, e.target)] = self.iso(ring, e.pairs)
                case "local" if e.pairs is not None:
                    self.morphism(G, e.target, H)
                    local.append(_Entry(e.target, e.target, pairs=e.pairs))
                case _:
                    raise ParseError(f"unexpected {e.head.text}", e.head.line, e.head.column)
        missing = [y for y in G.objects if y not in pick]
        if missing:
            raise ParseError(f"no tau for {missing[0]}", base_tok.line, base_tok.column)
        links.setdefault(x, PartialRingIso.identity(ideals[x]))
        for y in G.objects:
            links.setdefault(y, PartialRingIso.of({}))
        return Datum(
            G,
            ring,
            Transversal.of(x, pick),
            ideals,
            links,
            self.action_on(H, ring, local, {x: ideals[x]}),
        )

    def globalization(self, d: Datum, ring: SplitRing) -> GlobalizationData:
        atoms, entries = self.raw.globalization
        G, x = d.groupoid, d.base
        if atoms is not None:
            names = [t.text for t in atoms]
            B = SplitRing(ring.p, tuple(names))
            for t in atoms:
                if names.count(t.text) > 1:
                    raise ParseError(f"duplicate atom {t.text}", t.line, t.column)
        else:
            B = ring
        H = G.isotropy(x)
        J: dict[str, Ideal] = {y: Ideal(frozenset()) for y in G.objects}
        links: dict[str, PartialRingIso] = {}
        local: list[_Entry] = []
        for e in entries:
            match e.head.text:
                case "J" if e.atoms is not None:
                    J[self.object(G, e.target)] = self.ideal(B, e.atoms)
                case "link" if e.pairs is not None:
                    links[self.object(G, e.target)] = self.iso(B, e.pairs)
                case "local" if e.pairs is not None:
                    self.morphism(G, e.target, H)
                    local.append(_Entry(e.target, e.target, pairs=e.pairs))
                case _:
                    raise ParseError(f"unexpected {e.head.text}", e.head.line, e.head.column)
        links.setdefault(x, PartialRingIso.identity(J[x]))
        for y in G.objects:
            links.setdefault(y, PartialRingIso.of({}))
        return GlobalizationData(d, B, J, self.action_on(H, B, local, {x: J[x]}), links)

    def build(self) -> Scenario:
        raw = self.raw
        sc = Scenario(name=raw.name or "scenario", checks=list(raw.checks))
        sc.ring = self.ring()
        sc.groupoid = self.groupoid()
        if raw.action is not None:
            sc.action = self.action(sc.require_groupoid(), sc.require_ring())
        if raw.datum is not None:
            sc.datum = self.datum(sc.require_groupoid(), sc.require_ring())
        if raw.globalization is not None:
            sc.globalization = self.globalization(sc.require_datum(), sc.require_ring())
        return sc


def parse_scenario(text: str, p: int | None = None, default_p: int = 3) -> Scenario:
    """Parse scenario text; `p` overrides the prime written in the file."""
    raw = _Parser(tokenize(text)).scenario()
    return _Resolver(raw, p, default_p).build()


def _names(items) -> str:
    return "[" + ", ".join(items) + "]"


def _maps(f: PartialRingIso) -> str:
    return "[" + ", ".join(f"{a} |-> {b}" for a, b in f.pairs) + "]"


def _groupoid_lines(G: Groupoid) -> Iterator[str]:
    yield "groupoid {"
    yield f"  objects {_names(G.objects)}"
    for x, e in G.identity.items():
        if e != x:
            yield f"  identity {x} = {e}"
    for g in G.morphisms:
        yield f"  arrow {g} : {G.src[g]} -> {G.tgt[g]}"
    for g in G.morphisms:
        yield f"  inverse {g} {G.inv[g]}"
    for g, h in G.composable_pairs():
        yield f"  compose {g} {h} = {G.compose(g, h)}"
    yield "}"


def serialize_scenario(sc: Scenario) -> str:
    """Explicit text form; parsing it gives back an equal scenario."""
    lines = [f"name {sc.name}"]
    if sc.ring is not None:
        lines.append(f"ring p={sc.ring.p} atoms={_names(sc.ring.atoms)}")
    if sc.groupoid is not None:
        lines.extend(_groupoid_lines(sc.groupoid))
    if sc.action is not None:
        lines.append("action {")
        lines += [f"  {g} : {_maps(sc.action.alpha(g))}" for g in sc.groupoid.morphisms]
        lines.append("}")
    if sc.datum is not None:
        d = sc.datum
        x = d.base
        lines.append(f"datum base={x} {{")
        lines += [f"  tau {y} = {g}" for y, g in d.transversal.pick if y != x]
        lines += [f"  I {y} = {d.I(y)}" for y in d.groupoid.objects]
        lines += [f"  link {y} : {_maps(d.link(y))}" for y in d.groupoid.objects]
        lines += [f"  local {h} : {_maps(d.local_iso(h))}" for h in d.local.groupoid.morphisms]
        lines.append("}")
    if sc.globalization is not None:
        gd = sc.globalization
        lines.append("globalization {")
        if gd.ring != sc.ring:
            lines.append(f"  atoms={_names(gd.ring.atoms)}")
        lines += [f"  J {y} = {gd.J[y]}" for y in sc.groupoid.objects]
        lines += [f"  link {y} : {_maps(f)}" for y, f in gd.tilde_links.items()]
        lines += [
            f"  local {h} : {_maps(gd.tilde_local.alpha(h))}"
            for h in gd.tilde_local.groupoid.morphisms
        ]
        lines.append("}")
    if sc.checks:
        lines.append("check " + " ".join(sc.checks))
    return "\n".join(lines) + "\n"
