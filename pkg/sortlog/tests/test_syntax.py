import unittest

from sortlog.core.errors import CaptureViolation, SortClash
from sortlog.core.syntax import (And, Equation, ExistsInd, ExistsNewSorts, ExistsRel, ForallInd, ForallNewSorts,
                                 Iff, Implies, IndividualVar, Not, Or, PredAtom, PredicateSymbol, RelationVar,
                                 VarAtom, Vocabulary, alpha_equivalent, alpha_normalize, closure_block, conj,
                                 conjuncts, free_individual_vars, free_relation_vars, free_sorts, is_sentence,
                                 match_and, match_forall, match_iff, match_implies, new_sort_violations, node_count,
                                 quantifier_rank, relativize, replace_symbols, sort_closure, substitute_individual,
                                 substitute_relation, substitute_relations, symbols_of, validate_vocabulary, well_formed)

x, y, z = IndividualVar("x", 0), IndividualVar("y", 0), IndividualVar("z", 0)
u = IndividualVar("u", 1)
P = PredicateSymbol("p", (0,))
R = PredicateSymbol("r", (0, 0))
Q = PredicateSymbol("q", (1,))
VOC = Vocabulary((P, R, Q))


class TestVocabulary(unittest.TestCase):
    def test_symbol_order_does_not_matter(self):
        """Vocabularies with the same symbols compare equal"""
        self.assertEqual(Vocabulary((P, R)), Vocabulary((R, P)))
        self.assertEqual(Vocabulary.from_mapping({"r": [0, 0], "p": [0]}), Vocabulary((P, R)))

    def test_duplicate_symbol(self):
        """A name declared twice is reported"""
        voc = Vocabulary((P, PredicateSymbol("p", (1,))))
        kinds = [v.kind for v in validate_vocabulary(voc)]
        self.assertIn("DuplicateSymbol", kinds)

    def test_arity_mismatch(self):
        """Declared arity must match the sort list"""
        voc = Vocabulary((PredicateSymbol("t", (0, 1), declared_arity=3),))
        self.assertEqual([v.kind for v in validate_vocabulary(voc)], ["ArityMismatch"])

    def test_extend_keeps_identical_symbols_once(self):
        self.assertEqual(len(VOC.extend([P, PredicateSymbol("w", (2,))])), 4)


class TestDerivedForms(unittest.TestCase):
    def test_expansions_are_primitive(self):
        """Derived connectives only build the eight node classes"""
        self.assertEqual(And(PredAtom(P, (x,)), PredAtom(P, (y,))),
                         Not(Or(Not(PredAtom(P, (x,))), Not(PredAtom(P, (y,))))))
        self.assertEqual(Implies(Equation(x, y), Equation(y, x)), Or(Not(Equation(x, y)), Equation(y, x)))
        self.assertEqual(ForallInd(x, Equation(x, x)), Not(ExistsInd(x, Not(Equation(x, x)))))

    def test_matchers_invert_the_constructors(self):
        a, b = PredAtom(P, (x,)), PredAtom(P, (y,))
        self.assertEqual(match_and(And(a, b)), (a, b))
        self.assertEqual(match_implies(Implies(a, b)), (a, b))
        self.assertEqual(match_iff(Iff(a, b)), (a, b))
        self.assertEqual(match_forall(ForallInd(x, a)), (x, a))
        X = RelationVar("X", (1,))
        self.assertEqual(match_forall(ForallNewSorts((X,), a)), ((X,), a))
        self.assertIsNone(match_and(Or(a, b)))

    def test_conj_is_left_nested(self):
        a, b, c = PredAtom(P, (x,)), PredAtom(P, (y,)), PredAtom(P, (z,))
        self.assertEqual(conj(a, b, c), And(And(a, b), c))
        self.assertEqual(conjuncts(conj(a, b, c)), [a, b, c])


class TestFreeVariablesAndSorts(unittest.TestCase):
    def test_free_variables(self):
        X = RelationVar("X", (0,))
        phi = ExistsInd(x, And(VarAtom(X, (x,)), Equation(x, y)))
        self.assertEqual(free_individual_vars(phi), {y})
        self.assertEqual(free_relation_vars(phi), {X})
        self.assertFalse(is_sentence(phi))
        self.assertTrue(is_sentence(ExistsRel(X, ForallInd(y, phi))))

    def test_block_removes_its_sorts(self):
        """A new-sort block takes its sorts out of the free sorts"""
        X = RelationVar("X", (1,))
        phi = ExistsNewSorts((X,), ExistsInd(u, And(VarAtom(X, (u,)), ExistsInd(x, Equation(x, x)))))
        self.assertEqual(free_sorts(phi), frozenset({0}))

    def test_quantifiers_add_their_sorts(self):
        self.assertEqual(free_sorts(ExistsInd(u, Equation(u, u))), frozenset({1}))
        self.assertEqual(free_sorts(ExistsRel(RelationVar("X", (0, 2)), Equation(x, x))), frozenset({0, 2}))

    def test_quantifier_rank_counts_a_block_once(self):
        X, Y = RelationVar("X", (1,)), RelationVar("Y", (1,))
        phi = ExistsNewSorts((X, Y), ExistsInd(u, VarAtom(X, (u,))))
        self.assertEqual(quantifier_rank(phi), 2)
        self.assertEqual(quantifier_rank(Equation(x, y)), 0)

    def test_symbols_and_node_count(self):
        phi = Or(PredAtom(P, (x,)), PredAtom(R, (x, y)))
        self.assertEqual(symbols_of(phi), {P, R})
        self.assertEqual(node_count(phi), 3)


class TestWellFormedness(unittest.TestCase):
    def test_sort_mismatch_at_atom(self):
        phi = PredAtom(P, (u,))
        self.assertEqual([v.kind for v in well_formed(VOC, phi)], ["SortMismatchAtAtom"])

    def test_undeclared_symbol(self):
        phi = PredAtom(PredicateSymbol("missing", (0,)), (x,))
        self.assertEqual([v.kind for v in well_formed(VOC, phi)], ["SortMismatchAtAtom"])

    def test_new_sort_condition_free_individual(self):
        """A free variable of a block sort breaks the New Sort Condition"""
        X = RelationVar("X", (1,))
        phi = ExistsNewSorts((X,), VarAtom(X, (u,)))
        self.assertEqual([v.kind for v in well_formed(VOC, phi)], ["NewSortViolation"])

    def test_new_sort_condition_symbol(self):
        """A symbol touching a block sort breaks the New Sort Condition"""
        X = RelationVar("X", (1,))
        phi = ExistsNewSorts((X,), ExistsInd(u, And(VarAtom(X, (u,)), PredAtom(Q, (u,)))))
        violations = new_sort_violations(phi)
        self.assertEqual(len(violations), 1)
        self.assertIn("q", violations[0].message)

    def test_new_sort_condition_free_relation(self):
        X, Y = RelationVar("X", (1,)), RelationVar("Y", (1, 0))
        phi = ExistsNewSorts((X,), ExistsInd(u, And(VarAtom(X, (u,)), ExistsInd(x, VarAtom(Y, (u, x))))))
        self.assertEqual([v.kind for v in new_sort_violations(phi)], ["NewSortViolation"])

    def test_block_without_violations(self):
        X = RelationVar("X", (1,))
        phi = ExistsNewSorts((X,), ExistsInd(u, And(VarAtom(X, (u,)), PredAtom(P, (x,)))))
        self.assertEqual(well_formed(VOC, phi), [])


class TestSubstitution(unittest.TestCase):
    def test_free_occurrences_only(self):
        phi = And(Equation(x, z), ExistsInd(x, Equation(x, z)))
        result = substitute_individual(phi, x, y)
        self.assertEqual(result, And(Equation(y, z), ExistsInd(x, Equation(x, z))))

    def test_capture_is_rejected(self):
        """y is not free for x in ∃y r(x, y)"""
        phi = ExistsInd(y, PredAtom(R, (x, y)))
        with self.assertRaises(CaptureViolation):
            substitute_individual(phi, x, y)

    def test_sort_clash(self):
        with self.assertRaises(SortClash):
            substitute_individual(Equation(x, x), x, u)

    def test_simultaneous_relation_substitution(self):
        X, Y = RelationVar("X", (0,)), RelationVar("Y", (0,))
        phi = And(VarAtom(X, (x,)), VarAtom(Y, (x,)))
        swapped = substitute_relations(phi, {X: Y, Y: X})
        self.assertEqual(swapped, And(VarAtom(Y, (x,)), VarAtom(X, (x,))))

    def test_single_relation_substitution(self):
        X, Y = RelationVar("X", (0,)), RelationVar("Y", (0,))
        phi = ExistsInd(x, VarAtom(X, (x,)))
        self.assertEqual(substitute_relation(phi, X, Y), ExistsInd(x, VarAtom(Y, (x,))))
        with self.assertRaises(SortClash):
            substitute_relation(phi, X, RelationVar("Y", (1,)))

    def test_relation_capture(self):
        X, Y = RelationVar("X", (0,)), RelationVar("Y", (0,))
        phi = ExistsRel(Y, And(VarAtom(X, (x,)), VarAtom(Y, (x,))))
        with self.assertRaises(CaptureViolation):
            substitute_relations(phi, {X: Y})

    def test_replace_symbols(self):
        X = RelationVar("X", (0,))
        self.assertEqual(replace_symbols(PredAtom(P, (x,)), {"p": X}), VarAtom(X, (x,)))


class TestAlphaEquivalence(unittest.TestCase):
    def test_bound_names_do_not_matter(self):
        self.assertTrue(alpha_equivalent(ExistsInd(x, PredAtom(P, (x,))), ExistsInd(y, PredAtom(P, (y,)))))
        self.assertEqual(alpha_normalize(ExistsInd(x, Equation(x, x))),
                         alpha_normalize(ExistsInd(z, Equation(z, z))))

    def test_free_names_do(self):
        self.assertFalse(alpha_equivalent(PredAtom(P, (x,)), PredAtom(P, (y,))))

    def test_binding_structure_matters(self):
        left = ExistsInd(x, ExistsInd(y, PredAtom(R, (x, y))))
        right = ExistsInd(x, ExistsInd(y, PredAtom(R, (y, x))))
        self.assertFalse(alpha_equivalent(left, right))


class TestRelativizationAndClosure(unittest.TestCase):
    def test_relativize_guards_quantifiers(self):
        Pvar = RelationVar("P", (0,))
        result = relativize(ExistsInd(x, PredAtom(R, (x, x))), Pvar)
        self.assertEqual(result, ExistsInd(x, And(VarAtom(Pvar, (x,)), PredAtom(R, (x, x)))))

    def test_relativize_universal(self):
        Pvar = RelationVar("P", (0,))
        result = relativize(ForallInd(x, PredAtom(P, (x,))), Pvar)
        self.assertEqual(result, Not(ExistsInd(x, And(VarAtom(Pvar, (x,)), Not(PredAtom(P, (x,)))))))

    def test_relativize_needs_one_sort(self):
        with self.assertRaises(SortClash):
            relativize(ExistsInd(u, Equation(u, u)), RelationVar("P", (0,)))

    def test_closure_block_covers_free_sorts(self):
        phi = And(ExistsInd(x, PredAtom(P, (x,))), ExistsInd(u, Equation(u, u)))
        block, body = closure_block(phi, VOC)
        self.assertEqual(sorted(n for var in block for n in var.sorts), [0, 1])
        self.assertEqual(symbols_of(body), set())

    def test_sort_closure_has_no_free_sorts(self):
        phi = ForallInd(x, Implies(PredAtom(P, (x,)), ExistsInd(y, PredAtom(R, (x, y)))))
        closed = sort_closure(phi, VOC)
        self.assertEqual(free_sorts(closed), frozenset())
        self.assertTrue(is_sentence(closed))
        self.assertEqual(well_formed(Vocabulary(), closed), [])


if __name__ == '__main__':
    unittest.main()
