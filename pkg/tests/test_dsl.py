import pytest
from hypothesis import given, strategies as st

from adicomp.dsl import TASKS, elaborate, parse_scenario
from adicomp.expr import ParseError
from adicomp.complexes import BoundedComplex
from adicomp.modules import FpModule
from adicomp.rings import Ideal, Ring, RingMap

BASE = """ring R = poly(QQ, [x, y])
ideal I = (x, y)
module M = coker([[x, y]])
"""


def err(text):
    with pytest.raises(ParseError) as info:
        parse_scenario(text)
    return info.value


def test_minimal_scenario_has_no_tasks():
    scn = parse_scenario("ring R = ZZ\n")
    assert len(scn.decls) == 1
    assert scn.tasks == []


def test_comments_and_blank_lines():
    scn = parse_scenario("# header\n\nring R = ZZ   # trailing\n\n")
    assert [d.name for d in scn.decls] == ["R"]


def test_full_declaration_set_elaborates():
    text = BASE + """ring S = quotient(R, [x*y])
map theta = ringmap(R -> S, x -> x, y -> y^2)
complex K = koszul(I)
complex C = shift(K, 2)
module N = sum(M, R)
ideal J = (x, y) in S
task six_conditions M I depth=6
task base_change theta I J depth=4
"""
    scn = parse_scenario(text)
    env = elaborate(scn)
    assert isinstance(env["R"], Ring)
    assert isinstance(env["I"], Ideal)
    assert isinstance(env["M"], FpModule)
    assert isinstance(env["theta"], RingMap)
    assert isinstance(env["C"], BoundedComplex)
    # rows are relations: one relation on two generators
    assert env["M"].ngens == 2
    assert env["N"].ngens == 3
    assert env["C"].lo == 0
    assert [t.name for t in scn.tasks] == ["six_conditions", "base_change"]
    assert scn.tasks[0].params == {"depth": 6}


def test_unknown_task_names_the_token():
    e = err(BASE + "task frobnicate M\n")
    assert "frobnicate" in e.message
    assert (e.line, e.col) == (4, 6)


def test_unknown_identifier_position():
    e = err(BASE + "task profile Q I\n")
    assert "Q" in e.message
    assert (e.line, e.col) == (4, 14)


def test_type_mismatch_ideal_for_module():
    e = err(BASE + "task profile I I\n")
    assert "ideal" in e.message
    assert e.line == 4


def test_unknown_variable_in_expression():
    e = err("ring R = poly(QQ, [x])\nideal I = (x, z)\n")
    assert "z" in e.message
    assert (e.line, e.col) == (2, 15)


def test_duplicate_name():
    e = err("ring R = ZZ\nring R = QQ\n")
    assert "R" in e.message and e.line == 2


def test_depth_must_be_at_least_two():
    e = err(BASE + "task profile M I depth=1\n")
    assert "depth" in e.message


def test_unknown_parameter():
    e = err(BASE + "task profile M I colour=3\n")
    assert "colour" in e.message


def test_arity():
    e = err(BASE + "task profile M\n")
    assert e.line == 4


def test_ring_mismatch_between_arguments():
    e = err(BASE + "ring Z = ZZ\nideal T = (2)\ntask profile M T\n")
    assert e.line == 6


def test_syntax_error_in_matrix():
    e = err("ring R = ZZ\nmodule M = coker([[2, ]])\n")
    assert e.line == 2


def test_every_task_is_registered():
    assert {"profile", "six_conditions", "base_change", "wpr", "finite_oracle"} <= set(TASKS)


def test_describe_round_trips_through_the_parser():
    scn = parse_scenario(BASE + "task radical_invariance M I exponents=[2,3] depth=4\n")
    line = "task " + scn.tasks[0].describe() + "\n"
    again = parse_scenario(BASE + line)
    assert again.tasks[0].params == scn.tasks[0].params


VOCAB = ["ring", "ideal", "module", "complex", "map", "task", "R", "I", "M", "x", "y", "=", "(", ")",
         "[", "]", ",", "->", "poly", "QQ", "ZZ", "GF(3)", "coker", "koszul", "sum", "shift", "quotient",
         "ringmap", "profile", "depth=3", "2", "-1", "x^2", "*", "+", "\n", "#", "in", "@", "1/0"]


@given(st.text(max_size=80))
def test_parser_total_on_arbitrary_text(text):
    try:
        parse_scenario(text)
    except ParseError as e:
        assert e.line >= 1 and e.col >= 1


@given(st.lists(st.sampled_from(VOCAB), max_size=30))
def test_parser_total_on_token_soup(words):
    text = BASE + " ".join(words)
    try:
        parse_scenario(text)
    except ParseError as e:
        assert e.line >= 1 and e.col >= 1
