# core/parser.py
"""
Concrete syntax.

Formulas use an ASCII keyword syntax:

    E x:0. phi      A x:0. phi            individual quantifiers
    E2 X:(0,1). phi A2 X:(0,1). phi       relation quantifiers
    Es X:(1). phi   Es (A:(1,1,1), Z:(1)). phi   new-sort blocks (As for the universal)
    ~ & | -> <->    x = y    P(x, y)    X(x)

`&` and `|` associate to the left, `->` to the right, and a quantifier body
extends as far to the right as possible. A bare variable name refers to the
innermost binder of that name; `x:0` and `X:(0,1)` always name the variable with
that sort. Formula files (`.slf`) may start with `pred NAME:(s1,...)` lines and
may contain `#` comments.

Vocabularies, structures, Henkin structures and proofs are JSON documents.
"""
from __future__ import annotations

import json
import logging
import re
import string
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Union

import pyparsing as pp

from .errors import ParseError, SourceSpan, ValidationError, Violation
from .model import Structure, validate_structure
from .proof import Justification, Proof, ProofLine
from .sem_henkin import GRelation, HenkinStructure, validate_henkin
from .syntax import (Equation, ExistsInd, ExistsNewSorts, ExistsRel, Formula, IndividualVar, Not, Or, PredAtom,
                     PredicateSymbol, RelationVar, VarAtom, Vocabulary, conj, disj, Iff, Implies, ForallInd,
                     ForallRel, ForallNewSorts, is_sentence, match_and, match_forall, match_iff, match_implies,
                     new_sort_violations, validate_vocabulary, well_formed)

logger = logging.getLogger(__name__)

pp.ParserElement.enable_packrat()

ALLOWED_CHARACTERS = frozenset(string.ascii_letters + string.digits + string.whitespace + "_:(),.~&|-<>=#")
_COMMENT = re.compile(r"#[^\n]*")


# ---------------------------------------------------------------------------
# Grammar
# ---------------------------------------------------------------------------

class _Mark:
    __slots__ = ("loc",)

    def __init__(self, loc: int):
        self.loc = loc


class _Raw:
    """An untyped parse tree node with its source location."""
    __slots__ = ("kind", "start", "end", "parts")

    def __init__(self, kind: str, start: int, end: int, parts: tuple):
        self.kind, self.start, self.end, self.parts = kind, start, end, parts


def _end() -> pp.ParserElement:
    return pp.Empty().set_parse_action(lambda s, loc, toks: [_Mark(loc)])


def _trim(s: str, start: int, end: int) -> int:
    while end > start and s[end - 1].isspace():
        end -= 1
    return end


def _raw(kind: str):
    def action(s, loc, toks):
        parts = list(toks)
        mark = parts.pop()
        return [_Raw(kind, loc, _trim(s, loc, mark.loc), tuple(parts))]
    return action


def _chain(kind: str):
    def action(s, loc, toks):
        parts = list(toks)
        mark = parts.pop()
        if len(parts) == 1:
            return [parts[0]]
        return [_Raw(kind, loc, _trim(s, loc, mark.loc), tuple(parts))]
    return action


def _build_grammar():
    LPAR, RPAR, COLON, DOT = map(pp.Suppress, "():.")
    NAME = pp.Word(pp.alphas, pp.alphanums + "_")
    NAT = pp.Word(pp.nums).set_parse_action(lambda toks: int(toks[0]))

    sorts = (LPAR + pp.Optional(pp.DelimitedList(NAT)) + RPAR + _end()).set_parse_action(_raw("sorts"))
    ivar = (NAME + COLON + NAT + _end()).set_parse_action(_raw("ivar"))
    rvar = (NAME + COLON + sorts + _end()).set_parse_action(_raw("rvar"))
    term = (NAME + pp.Optional(COLON + NAT) + _end()).set_parse_action(_raw("term"))
    relname = (NAME + pp.Optional(COLON + sorts) + _end()).set_parse_action(_raw("rel"))

    application = (relname + LPAR + pp.Optional(pp.DelimitedList(term)) + RPAR + _end()).set_parse_action(_raw("app"))
    equation = (term + pp.Suppress("=") + term + _end()).set_parse_action(_raw("eq"))
    atom = application | equation

    formula = pp.Forward()
    block = rvar | (LPAR + pp.DelimitedList(rvar) + RPAR)
    quantified = ((pp.Keyword("Es") + block | pp.Keyword("As") + block
                   | pp.Keyword("E2") + rvar | pp.Keyword("A2") + rvar
                   | pp.Keyword("E") + ivar | pp.Keyword("A") + ivar)
                  + DOT + formula + _end()).set_parse_action(_raw("quant"))
    primary = quantified | (LPAR + formula + RPAR) | atom

    unary = pp.Forward()
    unary <<= (pp.Suppress("~") + unary + _end()).set_parse_action(_raw("not")) | primary
    conjunction = (unary + pp.ZeroOrMore(pp.Suppress("&") + unary) + _end()).set_parse_action(_chain("and"))
    disjunction = (conjunction + pp.ZeroOrMore(pp.Suppress("|") + conjunction) + _end()).set_parse_action(_chain("or"))
    implication = pp.Forward()
    implication <<= (disjunction + pp.Optional(pp.Suppress("->") + implication) + _end()).set_parse_action(_chain("imp"))
    equivalence = (implication + pp.ZeroOrMore(pp.Suppress("<->") + implication) + _end()).set_parse_action(_chain("iff"))
    formula <<= equivalence

    declaration = (pp.Keyword("pred") + NAME + COLON + sorts + _end()).set_parse_action(_raw("decl"))
    document = pp.ZeroOrMore(declaration) + formula

    for element in (formula, document):
        element.ignore(pp.python_style_comment)
    return formula, document, ivar, rvar


_FORMULA, _DOCUMENT, _IVAR, _RVAR = _build_grammar()


# ---------------------------------------------------------------------------
# Locations
# ---------------------------------------------------------------------------

class _Source:
    """The text being parsed, possibly embedded at `offset` characters inside `outer`."""

    def __init__(self, text: str, outer: Optional[str] = None, offset: int = 0):
        self.text = text
        self.outer = outer if outer is not None else text
        self.offset = offset if outer is not None else 0

    def span(self, start: int, end: Optional[int] = None) -> SourceSpan:
        end = start if end is None else end
        start, end = start + self.offset, end + self.offset
        outer = self.outer
        start, end = min(start, len(outer)), min(end, len(outer))
        return SourceSpan(len(outer[:start].encode("utf-8")), len(outer[:end].encode("utf-8")),
                          pp.lineno(start, outer), pp.col(start, outer))

    def error(self, kind: str, message: str, start: int = 0, end: Optional[int] = None) -> ParseError:
        return ParseError(self.span(start, end), kind, message)


def _lex(source: _Source) -> None:
    blanked = _COMMENT.sub(lambda m: " " * len(m.group()), source.text)
    for index, char in enumerate(blanked):
        if char not in ALLOWED_CHARACTERS:
            raise source.error("Lex", f"unexpected character {char!r}", index, index + 1)


def _parse_raw(grammar: pp.ParserElement, source: _Source):
    _lex(source)
    try:
        return grammar.parse_string(source.text, parse_all=True)
    except pp.ParseBaseException as exc:
        raise source.error("Syntax", exc.msg, exc.loc) from None


# ---------------------------------------------------------------------------
# Name resolution
# ---------------------------------------------------------------------------

Scope = Tuple[Union[IndividualVar, RelationVar], ...]


class _Resolver:
    def __init__(self, source: _Source, voc: Vocabulary):
        self.source = source
        self.voc = voc

    def error(self, kind: str, message: str, raw: _Raw) -> ParseError:
        return self.source.error(kind, message, raw.start, raw.end)

    def formula(self, raw: _Raw, scope: Scope) -> Formula:
        kind = raw.kind
        if kind == "eq":
            return Equation(self.term(raw.parts[0], scope), self.term(raw.parts[1], scope))
        if kind == "app":
            return self.application(raw, scope)
        if kind == "not":
            return Not(self.formula(raw.parts[0], scope))
        parts = [self.formula(p, scope) for p in raw.parts] if kind != "quant" else None
        if kind == "and":
            return conj(*parts)
        if kind == "or":
            return disj(*parts)
        if kind == "imp":
            return Implies(parts[0], parts[1])
        if kind == "iff":
            result = parts[0]
            for part in parts[1:]:
                result = Iff(result, part)
            return result
        if kind == "quant":
            return self.quantifier(raw, scope)
        raise self.error("Syntax", f"unexpected {kind}", raw)

    def term(self, raw: _Raw, scope: Scope) -> IndividualVar:
        name = raw.parts[0]
        if len(raw.parts) == 2:
            return IndividualVar(name, raw.parts[1])
        for var in reversed(scope):
            if isinstance(var, IndividualVar) and var.name == name:
                return var
        raise self.error("Syntax", f"variable {name} is not bound; write {name}:<sort> for a free variable", raw)

    def relation_var(self, raw: _Raw) -> RelationVar:
        name, sorts = raw.parts[0], raw.parts[1].parts
        if name in self.voc:
            raise self.error("Syntax", f"relation variable {name} has the name of a predicate symbol", raw)
        if not sorts:
            raise self.error("Syntax", f"relation variable {name} needs at least one sort", raw)
        return RelationVar(name, tuple(sorts))

    def application(self, raw: _Raw, scope: Scope) -> Formula:
        head, *arg_raws = raw.parts
        args = tuple(self.term(a, scope) for a in arg_raws)
        name = head.parts[0]
        if len(head.parts) == 2:
            var = self.relation_var(head)
            self.check_args(str(var), var.sorts, args, raw)
            return VarAtom(var, args)
        for bound in reversed(scope):
            if isinstance(bound, RelationVar) and bound.name == name:
                self.check_args(str(bound), bound.sorts, args, raw)
                return VarAtom(bound, args)
        symbol = self.voc.get(name)
        if symbol is None:
            raise self.error("Syntax", f"{name} is neither a bound relation variable nor a declared predicate", raw)
        self.check_args(str(symbol), symbol.sorts, args, raw)
        return PredAtom(symbol, args)

    def check_args(self, label: str, sorts: Tuple[int, ...], args: Tuple[IndividualVar, ...], raw: _Raw) -> None:
        if len(args) != len(sorts):
            raise self.error("Sort", f"{label} expects {len(sorts)} arguments, got {len(args)}", raw)
        for position, (arg, sort) in enumerate(zip(args, sorts), start=1):
            if arg.sort != sort:
                raise self.error("Sort", f"argument {position} of {label} is {arg}, sort {sort} is required", raw)

    def quantifier(self, raw: _Raw, scope: Scope) -> Formula:
        keyword, *binders, body_raw = raw.parts
        if keyword in ("E", "A"):
            var = IndividualVar(binders[0].parts[0], binders[0].parts[1])
            body = self.formula(body_raw, scope + (var,))
            return ExistsInd(var, body) if keyword == "E" else ForallInd(var, body)
        if keyword in ("E2", "A2"):
            var = self.relation_var(binders[0])
            body = self.formula(body_raw, scope + (var,))
            return ExistsRel(var, body) if keyword == "E2" else ForallRel(var, body)
        block = tuple(self.relation_var(b) for b in binders)
        body = self.formula(body_raw, scope + block)
        node = ExistsNewSorts(block, body) if keyword == "Es" else ForallNewSorts(block, body)
        core = node if isinstance(node, ExistsNewSorts) else node.body
        violations = new_sort_violations(core)
        if violations:
            raise self.error("NewSort", violations[0].message, raw)
        return node


def _declarations(raws: Sequence[_Raw], source: _Source, voc: Vocabulary) -> Vocabulary:
    symbols = []
    for raw in raws:
        _, name, sorts = raw.parts
        symbol = PredicateSymbol(name, tuple(sorts.parts))
        known = voc.get(name)
        if known is not None and known.sorts != symbol.sorts:
            raise source.error("Sort", f"{name} is already declared as {known}", raw.start, raw.end)
        symbols.append(symbol)
    extended = voc.extend(symbols)
    violations = validate_vocabulary(extended)
    if violations:
        raise source.error("Syntax", str(violations[0]), raws[0].start if raws else 0)
    return extended


def _finish(phi: Formula, voc: Vocabulary, source: _Source) -> Formula:
    violations = well_formed(voc, phi)
    if violations:
        kind = "NewSort" if violations[0].kind == "NewSortViolation" else "Sort"
        raise source.error(kind, violations[0].message, 0, len(source.text))
    return phi


def _parse_formula(source: _Source, voc: Vocabulary) -> Formula:
    (raw,) = _parse_raw(_FORMULA, source)
    return _finish(_Resolver(source, voc).formula(raw, ()), voc, source)


def parse_formula(text: str, voc: Optional[Vocabulary] = None) -> Formula:
    voc = voc if voc is not None else Vocabulary()
    return _parse_formula(_Source(text), voc)


def parse_formula_file(text: str, voc: Optional[Vocabulary] = None) -> Tuple[Vocabulary, Formula]:
    """A `.slf` document: `pred` declarations extend `voc`, then one formula."""
    source = _Source(text)
    tokens = list(_parse_raw(_DOCUMENT, source))
    *declarations, raw = tokens
    extended = _declarations(declarations, source, voc if voc is not None else Vocabulary())
    return extended, _finish(_Resolver(source, extended).formula(raw, ()), extended, source)


def parse_individual_var(text: str) -> IndividualVar:
    source = _Source(text)
    (raw,) = _parse_raw(_IVAR, source)
    return IndividualVar(raw.parts[0], raw.parts[1])


def parse_relation_var(text: str) -> RelationVar:
    source = _Source(text)
    (raw,) = _parse_raw(_RVAR, source)
    if not raw.parts[1].parts:
        raise source.error("Syntax", "a relation variable needs at least one sort", raw.start, raw.end)
    return RelationVar(raw.parts[0], tuple(raw.parts[1].parts))


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def _binder(var: Union[IndividualVar, RelationVar]) -> str:
    return str(var)


def _use(var, scope: Scope) -> str:
    """Bare name when the innermost binder of that name is `var`, otherwise the annotated form."""
    for bound in reversed(scope):
        if type(bound) is type(var) and bound.name == var.name:
            return var.name if bound == var else str(var)
    return str(var)


def _tight(phi: Formula) -> bool:
    if isinstance(phi, (Equation, PredAtom, VarAtom)):
        return True
    return isinstance(phi, Not) and match_forall(phi) is None and match_and(phi) is None


def _operand(phi: Formula, scope: Scope) -> str:
    text = _render(phi, scope)
    return text if _tight(phi) else f"({text})"


def _render(phi: Formula, scope: Scope) -> str:
    if isinstance(phi, Equation):
        return f"{_use(phi.left, scope)} = {_use(phi.right, scope)}"
    if isinstance(phi, PredAtom):
        return f"{phi.symbol.name}({', '.join(_use(a, scope) for a in phi.args)})"
    if isinstance(phi, VarAtom):
        return f"{_use(phi.var, scope)}({', '.join(_use(a, scope) for a in phi.args)})"
    if isinstance(phi, Not):
        universal = match_forall(phi)
        if universal is not None:
            binder, body = universal
            if isinstance(binder, tuple):
                return f"As {_block(binder)}. {_render(body, scope + binder)}"
            keyword = "A" if isinstance(binder, IndividualVar) else "A2"
            return f"{keyword} {_binder(binder)}. {_render(body, scope + (binder,))}"
        both = match_iff(phi)
        if both is not None:
            return f"{_operand(both[0], scope)} <-> {_operand(both[1], scope)}"
        both = match_and(phi)
        if both is not None:
            return f"{_operand(both[0], scope)} & {_operand(both[1], scope)}"
        return f"~{_operand(phi.body, scope)}"
    if isinstance(phi, Or):
        both = match_implies(phi)
        if both is not None:
            return f"{_operand(both[0], scope)} -> {_operand(both[1], scope)}"
        return f"{_operand(phi.left, scope)} | {_operand(phi.right, scope)}"
    if isinstance(phi, ExistsInd):
        return f"E {_binder(phi.var)}. {_render(phi.body, scope + (phi.var,))}"
    if isinstance(phi, ExistsRel):
        return f"E2 {_binder(phi.var)}. {_render(phi.body, scope + (phi.var,))}"
    if isinstance(phi, ExistsNewSorts):
        return f"Es {_block(phi.block)}. {_render(phi.body, scope + phi.block)}"
    raise TypeError(f"not a formula: {phi!r}")


def _block(block: Sequence[RelationVar]) -> str:
    if len(block) == 1:
        return _binder(block[0])
    return "(" + ", ".join(_binder(v) for v in block) + ")"


def render_formula(phi: Formula) -> str:
    return _render(phi, ())


def render_formula_file(phi: Formula, voc: Vocabulary) -> str:
    lines = [f"pred {symbol}" for symbol in sorted(voc.symbols)]
    return "\n".join(lines + [render_formula(phi)]) + "\n"


# ---------------------------------------------------------------------------
# JSON documents
# ---------------------------------------------------------------------------

def _dump(data: Any) -> str:
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _load(text: str, what: str) -> Tuple[Dict[str, Any], List[str]]:
    """Decode a JSON object, returning it with the keys that occurred twice in some object."""
    duplicates: List[str] = []

    def collect(pairs):
        seen: Dict[str, Any] = {}
        for key, value in pairs:
            if key in seen:
                duplicates.append(key)
            seen[key] = value
        return seen

    source = _Source(text)
    try:
        data = json.loads(text, object_pairs_hook=collect)
    except json.JSONDecodeError as exc:
        raise source.error("Syntax", f"{what}: {exc.msg}", exc.pos) from None
    if not isinstance(data, dict):
        raise source.error("Syntax", f"{what} must be a JSON object")
    return data, duplicates


def _shape(condition: bool, text: str, message: str) -> None:
    if not condition:
        raise _Source(text).error("Syntax", message)


def vocabulary_from_dict(data: Mapping[str, Any], text: str = "") -> Vocabulary:
    _shape(isinstance(data, dict), text, "a vocabulary maps predicate names to sort lists")
    symbols = []
    for name, sorts in data.items():
        _shape(isinstance(sorts, list) and all(isinstance(n, int) and n >= 0 for n in sorts), text,
               f"sorts of {name} must be a list of natural numbers")
        symbols.append(PredicateSymbol(name, tuple(sorts)))
    return Vocabulary(tuple(sorted(symbols)))


def parse_vocabulary(text: str) -> Vocabulary:
    data, duplicates = _load(text, "vocabulary")
    violations = [Violation("DuplicateSymbol", f"predicate {name} declared twice", name) for name in duplicates]
    voc = vocabulary_from_dict(data, text)
    violations.extend(validate_vocabulary(voc))
    if violations:
        raise ValidationError(violations, "vocabulary")
    return voc


def render_vocabulary(voc: Vocabulary) -> str:
    return _dump(voc.as_mapping())


def structure_to_dict(structure: Structure) -> Dict[str, Any]:
    relations = {s.name: [] for s in structure.vocabulary}
    relations.update({name: sorted(list(row) for row in rows) for name, rows in structure.interps.items()})
    return {
        "sorts": {str(n): list(structure.domain(n)) for n in structure.sorts()},
        "relations": relations,
        "vocabulary": structure.vocabulary.as_mapping(),
    }


def structure_from_dict(data: Mapping[str, Any], voc: Optional[Vocabulary] = None, text: str = "") -> Structure:
    _shape(isinstance(data.get("sorts"), dict), text, "a structure needs a \"sorts\" object")
    violations: List[Violation] = []
    domains: Dict[int, List[str]] = {}
    for key, elements in data["sorts"].items():
        _shape(key.isdigit(), text, f"sort {key!r} is not a natural number")
        _shape(isinstance(elements, list), text, f"domain of sort {key} must be a list")
        names = [str(e) for e in elements]
        if len(set(names)) != len(names):
            violations.append(Violation("DuplicateElement", f"domain of sort {key} lists an element twice", key))
        domains[int(key)] = names
    relations = data.get("relations", {})
    _shape(isinstance(relations, dict), text, "\"relations\" must be an object")
    rows: Dict[str, List[Tuple[str, ...]]] = {}
    for name, tuples in relations.items():
        _shape(isinstance(tuples, list) and all(isinstance(t, list) for t in tuples), text,
               f"relation {name} must be a list of tuples")
        rows[name] = [tuple(str(e) for e in t) for t in tuples]
    if voc is None:
        if "vocabulary" in data:
            voc = vocabulary_from_dict(data["vocabulary"], text)
        else:
            voc, inferred = _infer_vocabulary(domains, rows)
            violations.extend(inferred)
    violations.extend(validate_vocabulary(voc))
    structure = Structure(domains, rows, voc)
    violations.extend(validate_structure(voc, structure))
    if violations:
        raise ValidationError(violations, "structure")
    return structure


def _infer_vocabulary(domains: Mapping[int, Sequence[str]],
                      rows: Mapping[str, Sequence[Tuple[str, ...]]]) -> Tuple[Vocabulary, List[Violation]]:
    """Column sorts from the unique domain containing each column."""
    symbols, violations = [], []
    for name, tuples in sorted(rows.items()):
        arities = {len(t) for t in tuples}
        if len(arities) != 1:
            violations.append(Violation("AmbiguousSort", f"cannot infer the sorts of {name}; give a vocabulary", name))
            continue
        sorts = []
        for column in range(arities.pop()):
            values = {t[column] for t in tuples}
            fits = [n for n in sorted(domains) if values <= set(domains[n])]
            if len(fits) != 1:
                kind = "TupleOutOfDomain" if not fits else "AmbiguousSort"
                violations.append(Violation(kind, f"column {column + 1} of {name} fits sorts {fits}", name))
                break
            sorts.append(fits[0])
        else:
            symbols.append(PredicateSymbol(name, tuple(sorts)))
    return Vocabulary(tuple(symbols)), violations


def parse_structure(text: str, voc: Optional[Vocabulary] = None) -> Structure:
    data, duplicates = _load(text, "structure")
    _shape(not duplicates, text, f"duplicate key {duplicates[0] if duplicates else ''}")
    return structure_from_dict(data, voc, text)


def render_structure(structure: Structure) -> str:
    return _dump(structure_to_dict(structure))


def henkin_to_dict(henkin: HenkinStructure) -> Dict[str, Any]:
    data = structure_to_dict(henkin.base)
    data["U"] = [sorted(d) for d in henkin.U]
    data["G"] = [{"sorts": list(g.sorts), "tuples": sorted(list(row) for row in g.tuples)} for g in henkin.G]
    return data


def henkin_from_dict(data: Mapping[str, Any], voc: Optional[Vocabulary] = None, text: str = "") -> HenkinStructure:
    base = structure_from_dict(data, voc, text)
    U = data.get("U", [])
    _shape(isinstance(U, list) and all(isinstance(d, list) for d in U), text, "\"U\" must be a list of domains")
    G = data.get("G", [])
    _shape(isinstance(G, list) and all(isinstance(g, dict) for g in G), text, "\"G\" must be a list of records")
    records = []
    for record in G:
        sorts, tuples = record.get("sorts"), record.get("tuples", [])
        _shape(isinstance(sorts, list) and all(isinstance(n, int) and n >= 0 for n in sorts) and sorts, text,
               "a G record needs a nonempty \"sorts\" list")
        _shape(isinstance(tuples, list) and all(isinstance(t, list) for t in tuples), text,
               "\"tuples\" of a G record must be a list of tuples")
        records.append(GRelation(tuple(sorts), frozenset(tuple(str(e) for e in t) for t in tuples)))
    henkin = HenkinStructure(base, tuple(frozenset(str(e) for e in d) for d in U), tuple(records))
    violations = validate_henkin(base.vocabulary, henkin)
    if violations:
        raise ValidationError(violations, "Henkin structure")
    return henkin


def parse_henkin(text: str, voc: Optional[Vocabulary] = None) -> HenkinStructure:
    data, duplicates = _load(text, "Henkin structure")
    _shape(not duplicates, text, f"duplicate key {duplicates[0] if duplicates else ''}")
    return henkin_from_dict(data, voc, text)


def render_henkin(henkin: HenkinStructure) -> str:
    return _dump(henkin_to_dict(henkin))


def justification_to_dict(just: Justification) -> Dict[str, Any]:
    if just.rule == "MP":
        return {"rule": "MP", "i": just.refs[0], "j": just.refs[1]}
    if just.rule in ("GenInd", "GenRel"):
        return {"rule": just.rule, "line": just.refs[0], "var": str(just.variables[0])}
    if just.rule == "GenNewSort":
        return {"rule": just.rule, "line": just.refs[0], "vars": [str(v) for v in just.variables]}
    return {"rule": just.rule}


def justification_from_dict(record: Any, text: str = "") -> Justification:
    _shape(isinstance(record, dict) and isinstance(record.get("rule"), str), text,
           "a justification needs a \"rule\"")
    rule = record["rule"]
    try:
        if rule == "MP":
            return Justification.mp(int(record["i"]), int(record["j"]))
        if rule == "GenInd":
            return Justification.gen_ind(int(record["line"]), parse_individual_var(record["var"]))
        if rule == "GenRel":
            return Justification.gen_rel(int(record["line"]), parse_relation_var(record["var"]))
        if rule == "GenNewSort":
            return Justification.gen_new_sort(int(record["line"]), [parse_relation_var(v) for v in record["vars"]])
        return Justification(rule)
    except (KeyError, TypeError, ValueError) as exc:
        raise _Source(text).error("Syntax", f"bad {rule} justification: {exc}") from None


def _embedded(text: str, value: str) -> _Source:
    """A source for a formula string that sits inside a JSON document."""
    literal = json.dumps(value, ensure_ascii=False)
    position = text.find(literal) if text else -1
    if position < 0:
        return _Source(value)
    return _Source(value, text, position + 1)


def proof_to_dict(proof: Proof) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "theory": [render_formula(t) for t in proof.theory],
        "lines": [{"formula": render_formula(line.formula), "just": justification_to_dict(line.just)}
                  for line in proof.lines],
    }
    if len(proof.vocabulary):
        data["vocabulary"] = proof.vocabulary.as_mapping()
    return data


def proof_from_dict(data: Mapping[str, Any], voc: Optional[Vocabulary] = None, text: str = "") -> Proof:
    if voc is None:
        voc = vocabulary_from_dict(data["vocabulary"], text) if "vocabulary" in data else Vocabulary()
    theory_texts = data.get("theory", [])
    lines = data.get("lines")
    _shape(isinstance(theory_texts, list) and all(isinstance(t, str) for t in theory_texts), text,
           "\"theory\" must be a list of formula strings")
    _shape(isinstance(lines, list) and all(isinstance(line, dict) for line in lines), text,
           "a proof needs a \"lines\" list")
    theory = []
    violations = []
    for index, item in enumerate(theory_texts, start=1):
        sentence = _parse_formula(_embedded(text, item), voc)
        if not is_sentence(sentence):
            violations.append(Violation("NotASentence", f"theory member {index} has free variables", sentence))
        theory.append(sentence)
    if violations:
        raise ValidationError(violations, "proof")
    parsed = []
    for line in lines:
        _shape(isinstance(line.get("formula"), str), text, "every proof line needs a \"formula\" string")
        formula = _parse_formula(_embedded(text, line["formula"]), voc)
        parsed.append(ProofLine(formula, justification_from_dict(line.get("just"), text)))
    return Proof(tuple(theory), tuple(parsed), voc)


def parse_proof(text: str, voc: Optional[Vocabulary] = None) -> Proof:
    data, duplicates = _load(text, "proof")
    _shape(not duplicates, text, f"duplicate key {duplicates[0] if duplicates else ''}")
    return proof_from_dict(data, voc, text)


def render_proof(proof: Proof) -> str:
    return _dump(proof_to_dict(proof))
