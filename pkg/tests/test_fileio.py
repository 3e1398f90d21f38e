"""Instance and matching text formats: parsing, diagnostics, round trips."""

import random

import pytest

from paretomatch import (
    CawInstance,
    GroupPreferenceMode,
    ParseError,
    SmiwInstance,
    emit_instance,
    emit_matching,
    parse_instance,
    parse_matching,
    solve_smiw,
    weakly_stable_set,
)
from paretomatch.generator import random_caw_instance, random_smiw_instance

from conftest import M2, M4, M5, wo

TINY = """SMIW
men 1
women 1
man 1: 1 | _
woman 1: 1 | _
"""

REFERENCE = """SMIW
men 3
women 3
man 1: 2 | 3 | 1 | _
man 2: 1 | 3 | 2 | _
man 3: 1 2 | 3 | _
woman 1: 3 | 1 | 2 | _
woman 2: 1 2 3 | _
woman 3: 3 | 2 | 1 | _
"""


def test_parse_tiny_instance():
    instance = parse_instance(TINY)
    assert isinstance(instance, SmiwInstance)
    assert instance.men == (wo(1, 0),)
    assert instance.women == (wo(1, 0),)


def test_parse_reference_profile_matches_expected_sets():
    instance = parse_instance(REFERENCE)
    assert instance.men[2] == wo({1, 2}, 3, 0)
    assert {m.assignment for m in weakly_stable_set(instance)} == {M2, M4, M5}


def test_comments_and_blank_lines_ignored():
    noisy = "# a fixture\n\nSMIW\nmen 1   # one man\nwomen 1\nman 1: 1 | _\nwoman 1: 1 | _\n"
    assert parse_instance(noisy) == parse_instance(TINY)


def test_missing_unmatched_token_is_totality_error():
    bad = "SMIW\nmen 1\nwomen 1\nman 1: 1\nwoman 1: 1 | _\n"
    with pytest.raises(ParseError) as info:
        parse_instance(bad)
    assert "totality" in str(info.value)
    assert info.value.line == 4


def test_duplicate_alternative_diagnostic():
    bad = "SMIW\nmen 1\nwomen 1\nman 1: 1 | 1 | _\nwoman 1: 1 | _\n"
    with pytest.raises(ParseError) as info:
        parse_instance(bad)
    assert "duplicate alternative" in str(info.value)


def test_unknown_index_diagnostic():
    bad = "SMIW\nmen 1\nwomen 1\nman 1: 2 | _\nwoman 1: 1 | _\n"
    with pytest.raises(ParseError) as info:
        parse_instance(bad)
    assert "unknown index" in str(info.value)


def test_bad_capacity_diagnostic():
    bad = "CAW\nstudents 1\ncolleges 1\ncollege 1 capacity 0\nstudent 1: 1 | _\ncollege 1: 1 | _\n"
    with pytest.raises(ParseError) as info:
        parse_instance(bad)
    assert "bad capacity" in str(info.value)


def test_round_trip_fixtures():
    for text in (TINY, REFERENCE):
        instance = parse_instance(text)
        assert parse_instance(emit_instance(instance)) == instance
        assert emit_instance(instance) == text


def test_round_trip_random_instances():
    rng = random.Random(5309)
    for _ in range(40):
        smiw = random_smiw_instance(rng, rng.randint(1, 5), rng.randint(1, 5), tie_prob=0.4)
        assert parse_instance(emit_instance(smiw)) == smiw
        caw = random_caw_instance(rng, rng.randint(1, 5), rng.randint(1, 3), 3, tie_prob=0.4)
        assert parse_instance(emit_instance(caw)) == caw


def test_round_trip_additive_utilities():
    text = """CAW
students 2
colleges 1
college 1 capacity 2
student 1: 1 | _
student 2: 1 | _
college 1: 1 | 2 | _
college 1 utility: 1:7 2:3
"""
    instance = parse_instance(text)
    assert isinstance(instance, CawInstance)
    assert instance.mode is GroupPreferenceMode.ADDITIVE_UTILITY
    assert instance.utilities == ({1: 7, 2: 3, 0: 0},)
    assert parse_instance(emit_instance(instance)) == instance


def test_partial_utility_line_falls_back_to_canonical():
    text = """CAW
students 2
colleges 2
college 1 capacity 1
college 2 capacity 1
student 1: 1 | 2 | _
student 2: 2 | 1 | _
college 1: 1 | 2 | _
college 2: 1 2 | _
college 1 utility: 1:9
"""
    instance = parse_instance(text)
    # Student 2 keeps the canonical value for college 1; college 2 is fully
    # canonical because it has no utility line.
    assert instance.utilities[0] == {1: 9, 2: 1, 0: 0}
    assert instance.utilities[1] == {1: 2, 2: 2, 0: 0}


def test_inconsistent_utility_line_rejected():
    text = """CAW
students 2
colleges 1
college 1 capacity 1
student 1: 1 | _
student 2: 1 | _
college 1: 1 | 2 | _
college 1 utility: 1:1 2:5
"""
    with pytest.raises(ParseError):
        parse_instance(text)


def test_matching_round_trip():
    instance = parse_instance(REFERENCE)
    outcome = solve_smiw(instance)
    text = emit_matching(outcome)
    assert parse_matching(text, instance) == outcome


def test_matching_validation():
    instance = parse_instance(REFERENCE)
    with pytest.raises(ParseError):
        parse_matching("MATCHING\n1 1\n2 1\n3 2\n", instance)  # woman 1 twice
    with pytest.raises(ParseError):
        parse_matching("MATCHING\n1 1\n2 2\n", instance)  # missing man 3
    with pytest.raises(ParseError):
        parse_matching("MATCHING\n1 9\n2 2\n3 3\n", instance)  # unknown woman
    with pytest.raises(ParseError):
        parse_matching("1 1\n", instance)  # missing header
