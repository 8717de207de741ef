import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from slp.core import Atom, ConditionalFact, DefaultAtom, DefInterp, ObjInterp, canonicalize, eval, format_name
from slp.errors import ContractError

p, q, r = Atom("p"), Atom("q"), Atom("r")

atoms = st.builds(
    Atom,
    st.sampled_from(["p", "q", "r", "edge", "-p"]),
    st.lists(st.one_of(st.integers(-3, 3), st.sampled_from(["a", "b", "V"])), max_size=2),
)


def test_canonicalize_sorts_and_deduplicates():
    assert canonicalize([q, p, q]) == DefaultAtom([p, q])
    assert canonicalize([q, p, q]).atoms == (p, q)
    assert str(canonicalize([q, p, q])) == "not(p & q)"


def test_empty_conjunction_is_not_true():
    d = canonicalize([])
    assert d.is_false
    assert str(d) == "not(true)"


def test_singleton():
    assert str(canonicalize([p])) == "not p"


@given(st.lists(atoms, max_size=6), st.randoms())
def test_canonicalize_idempotent_and_order_insensitive(xs, rnd):
    once = canonicalize(xs)
    assert canonicalize(once.atoms) == once
    shuffled = list(xs)
    rnd.shuffle(shuffled)
    assert canonicalize(shuffled) == once
    assert hash(canonicalize(shuffled)) == hash(once)


@given(atoms, atoms, atoms)
def test_atom_order_is_strict_total(a, b, c):
    assert sum([a < b, a == b, b < a]) == 1
    if a < b and b < c:
        assert a < c
    if a <= b and b <= a:
        assert a == b


def test_atom_order_is_by_name_arity_args():
    assert Atom("a", [9]) < Atom("b")
    assert Atom("p") < Atom("p", ["a"])
    assert Atom("p", [1]) < Atom("p", ["a"])


def test_format_name_quotes_reserved_and_odd_names():
    assert format_name("v") == "'v'"
    assert format_name("not") == "'not'"
    assert format_name("Big") == "'Big'"
    assert format_name("it's") == "'it''s'"
    assert format_name("-human") == "-human"
    assert format_name("plain_1") == "plain_1"


def test_eval_violated_rule():
    fact = ConditionalFact([p], [DefaultAtom([p])])
    assert not eval(DefInterp({DefaultAtom([p]): True}), ObjInterp({p: False}), fact)


def test_eval_satisfied_by_head():
    not_r = DefaultAtom([r])
    fact = ConditionalFact([p, q], [not_r])
    assert eval(DefInterp({not_r: True}), ObjInterp({p: False, q: True}), fact)


def test_eval_not_true_condition_is_vacuous():
    fact = ConditionalFact([p], [DefaultAtom()])
    assert eval(DefInterp({}), ObjInterp({p: False}), fact)
    assert eval(DefInterp({}), ObjInterp({}), DefaultAtom()) is False


def test_eval_outside_domain_is_contract_error():
    with pytest.raises(ContractError):
        eval(DefInterp({}), ObjInterp({p: True}), DefaultAtom([q]))
    with pytest.raises(ContractError):
        eval(DefInterp({}), ObjInterp({p: True}), {q})


def test_fact_is_material_implication():
    """With its condition true a fact evaluates like its head disjunction (exhaustive, 4 atoms)."""
    objs = [p, q, r, Atom("s")]
    defs = [DefaultAtom([p]), DefaultAtom([q, r])]
    for head_size in range(0, 3):
        for head in itertools.combinations(objs, head_size):
            for cond_size in range(0, 3):
                for cond in itertools.combinations(defs, cond_size):
                    fact = ConditionalFact(head, cond)
                    for dbits in itertools.product([False, True], repeat=len(defs)):
                        di = DefInterp(dict(zip(defs, dbits)))
                        for obits in itertools.product([False, True], repeat=len(objs)):
                            oi = ObjInterp(dict(zip(objs, obits)))
                            if all(di[c] for c in cond):
                                assert eval(di, oi, fact) == eval(di, oi, set(head))
                            else:
                                assert eval(di, oi, fact)
