# core/axioms.py
"""Builders for the axiom families and the worked example sentences."""
from __future__ import annotations

from typing import List, Sequence, Tuple

from .syntax import (Equation, ExistsInd, ExistsNewSorts, ExistsRel, ForallInd, ForallRel, Formula, Iff, Implies,
                     IndividualVar, Not, Or, PredAtom, PredicateSymbol, RelationVar, VarAtom, Vocabulary, And,
                     closure_block, conj, exists_inds, forall_inds, fresh_name, relativize, replace_symbols,
                     subformulas, symbols_of, variable_names)


def first_comprehension(X: RelationVar, ys: Sequence[IndividualVar], psi: Formula) -> Formula:
    """∃X∀ȳ(Xȳ ↔ ψ)."""
    return ExistsRel(X, forall_inds(list(ys), Iff(VarAtom(X, tuple(ys)), psi)))


def second_comprehension(X: RelationVar, ys: Sequence[IndividualVar], psi: Formula) -> Formula:
    """∃̃X∀ȳ(Xȳ ↔ ψ)."""
    return ExistsNewSorts((X,), forall_inds(list(ys), Iff(VarAtom(X, tuple(ys)), psi)))


def power_sort_axiom(n: int = 1, u_sort: int = 0, x_sort: int = 1, z_sort: int = 2) -> Formula:
    """A new sort of x coding, through Y, every n-ary relation on a copy (sort of z) of the sort of u."""
    if n < 1:
        raise ValueError("the power sort axiom needs n >= 1")
    if len({u_sort, x_sort, z_sort}) != 3:
        raise ValueError("the sorts of u, x and z must be distinct")
    u = IndividualVar("u", u_sort)
    x, y = IndividualVar("x", x_sort), IndividualVar("y", x_sort)
    zs = [IndividualVar(f"z{i}", z_sort) for i in range(1, n + 1)]
    X = RelationVar("X", (z_sort,) * n)
    Y = RelationVar("Y", (x_sort,) + (z_sort,) * n)
    z1 = zs[0]
    copy = And(ForallInd(u, ExistsInd(z1, Equation(u, z1))), ForallInd(z1, ExistsInd(u, Equation(u, z1))))
    extensional = ForallInd(x, ForallInd(y, Implies(
        forall_inds(zs, Iff(VarAtom(Y, (x, *zs)), VarAtom(Y, (y, *zs)))), Equation(x, y))))
    complete = ForallRel(X, ExistsInd(x, forall_inds(zs, Iff(VarAtom(X, tuple(zs)), VarAtom(Y, (x, *zs))))))
    return ExistsNewSorts((Y,), conj(copy, extensional, complete))


def infinite_sort_axiom(sort: int = 0) -> Formula:
    """A new sort carrying an injective, total, non-surjective functional relation."""
    x, y, z = (IndividualVar(name, sort) for name in "xyz")
    X = RelationVar("X", (sort, sort))
    functional = forall_inds([x, y, z], Implies(And(VarAtom(X, (x, y)), VarAtom(X, (x, z))), Equation(y, z)))
    injective = forall_inds([x, y, z], Implies(And(VarAtom(X, (x, z)), VarAtom(X, (y, z))), Equation(x, y)))
    total = ForallInd(x, ExistsInd(y, VarAtom(X, (x, y))))
    missed = ExistsInd(z, forall_inds([x, y], Implies(VarAtom(X, (x, y)), Not(Equation(y, z)))))
    return ExistsNewSorts((X,), conj(functional, injective, total, missed))


# ---------------------------------------------------------------------------
# Fields over a multiplicative group
# ---------------------------------------------------------------------------

MUL = PredicateSymbol("mul", (0, 0, 0))
ONE = PredicateSymbol("one", (0,))
GROUP_VOCABULARY = Vocabulary((MUL, ONE))


def abelian_group_axioms() -> Formula:
    """Abelian group axioms for the graph `mul` of a binary operation with unit `one`, on sort 0."""
    x, y, z, p, q, r, e = (IndividualVar(name, 0) for name in ("x", "y", "z", "p", "q", "r", "e"))
    z2 = IndividualVar("z2", 0)

    def mul(a, b, c):
        return PredAtom(MUL, (a, b, c))

    def one(a):
        return PredAtom(ONE, (a,))

    total = forall_inds([x, y], ExistsInd(z, mul(x, y, z)))
    functional = forall_inds([x, y, z, z2], Implies(And(mul(x, y, z), mul(x, y, z2)), Equation(z, z2)))
    unit = And(ExistsInd(e, one(e)), forall_inds([x, y], Implies(And(one(x), one(y)), Equation(x, y))))
    associative = forall_inds([x, y, z, p, q], Implies(mul(x, y, p), Implies(
        mul(p, z, q), ForallInd(r, Implies(mul(y, z, r), mul(x, r, q))))))
    identity = forall_inds([x, e], Implies(one(e), mul(x, e, x)))
    commutative = forall_inds([x, y, z], Implies(mul(x, y, z), mul(y, x, z)))
    inverse = ForallInd(x, exists_inds([y, e], And(one(e), mul(x, y, e))))
    return conj(total, functional, unit, associative, identity, commutative, inverse)


def field_sentence() -> Formula:
    """"For some + and for some 0": the group on sort 0 is the multiplicative group of a field.

    The field lives on sort 1, bound by one block: `A` is the graph of addition and
    `Z` holds the zero. Every group element is a field element and the only other
    field element is the zero.
    """
    A = RelationVar("A", (1, 1, 1))
    Z = RelationVar("Z", (1,))
    u, v, w, s, t, o, w2 = (IndividualVar(name, 1) for name in ("u", "v", "w", "s", "t", "o", "w2"))
    p, q, r = (IndividualVar(name, 1) for name in ("p", "q", "r"))
    x, a, b, c = (IndividualVar(name, 0) for name in ("x", "a", "b", "c"))

    def add(i, j, k):
        return VarAtom(A, (i, j, k))

    def zero(i):
        return VarAtom(Z, (i,))

    def times(g, i, k):
        # g·i = k for a group element g and a field element i
        return Or(And(zero(i), zero(k)),
                  exists_inds([b, c], conj(Equation(b, i), Equation(c, k), PredAtom(MUL, (g, b, c)))))

    bridge = ForallInd(x, ExistsInd(u, Equation(x, u)))
    covered = ForallInd(u, Or(zero(u), ExistsInd(x, Equation(u, x))))
    one_zero = And(ExistsInd(u, zero(u)), forall_inds([u, v], Implies(And(zero(u), zero(v)), Equation(u, v))))
    zero_outside = ForallInd(u, Implies(zero(u), ForallInd(x, Not(Equation(u, x)))))
    total = forall_inds([u, v], ExistsInd(w, add(u, v, w)))
    functional = forall_inds([u, v, w, w2], Implies(And(add(u, v, w), add(u, v, w2)), Equation(w, w2)))
    identity = forall_inds([u, o], Implies(zero(o), add(u, o, u)))
    commutative = forall_inds([u, v, w], Implies(add(u, v, w), add(v, u, w)))
    inverse = ForallInd(u, exists_inds([v, o], And(zero(o), add(u, v, o))))
    associative = forall_inds([u, v, w, s, t], Implies(add(u, v, s), Implies(
        add(s, w, t), ForallInd(r, Implies(add(v, w, r), add(u, r, t))))))
    distributive = forall_inds([a, u, p], Implies(times(a, u, p), forall_inds([v, q], Implies(
        times(a, v, q), forall_inds([w, r], Implies(add(u, v, w), Implies(times(a, w, r), add(p, q, r))))))))
    body = conj(bridge, covered, one_zero, zero_outside, total, functional, identity, commutative, inverse,
                associative, distributive, abelian_group_axioms())
    return ExistsNewSorts((A, Z), body)


# ---------------------------------------------------------------------------
# Consistency sentences
# ---------------------------------------------------------------------------

def relativized_consistency(phi: Formula, voc: Vocabulary, predicate: str = "P") -> Formula:
    """∃P(∃R₁…∃Rₙφ)^(P): a subset P of one sort carrying relations that satisfy φ.

    Every individual quantifier of φ must range over a single sort.
    """
    symbols = sorted((s for s in symbols_of(phi) if s.sorts), key=lambda s: s.name)
    sorts = {n for s in symbols for n in s.sorts} | _quantified_sorts(phi)
    if len(sorts) != 1:
        raise ValueError("relativization needs a one-sorted formula")
    (sort,) = sorts
    taken = variable_names(phi) | set(voc.names())
    mapping = {}
    for symbol in symbols:
        name = fresh_name(symbol.name.upper(), taken)
        taken.add(name)
        mapping[symbol.name] = RelationVar(name, symbol.sorts)
    body = replace_symbols(phi, mapping)
    for var in reversed([mapping[s.name] for s in symbols]):
        body = ExistsRel(var, body)
    P = RelationVar(fresh_name(predicate, taken), (sort,))
    return ExistsRel(P, relativize(body, P))


def consistency_sentence(phi: Formula, voc: Vocabulary) -> Formula:
    """∃̃R₁…R_n φ as one block: φ has a model somewhere, whatever structure it is read in."""
    block, body = closure_block(phi, voc)
    if not block:
        return phi
    return ExistsNewSorts(tuple(block), body)


def _quantified_sorts(phi: Formula) -> set:
    return {node.var.sort for node in subformulas(phi) if isinstance(node, ExistsInd)}


def named_sentences() -> List[Tuple[str, Formula]]:
    """The worked example sentences by name; `data/` holds each one as a formula file."""
    return [
        ("field", field_sentence()),
        ("power-sort", power_sort_axiom()),
        ("infinite-sort", infinite_sort_axiom()),
    ]
