import json
from pathlib import Path

import pytest

from approxstable import (InvalidMatching, Matching, ParseError, SchedulePolicy, ValidationError,
                          ValidationKind, audit, paper_example, parse_instance, parse_matching,
                          serialize_instance, serialize_matching, solve)
from approxstable.formats import (audit_from_json, audit_to_json, instance_from_json,
                                  instance_to_json, matching_from_json, matching_to_json,
                                  result_to_json, serialize_audit)

FIXTURES = Path(__file__).parent / "fixtures"


def test_fixture_is_canonical_example():
    text = (FIXTURES / "paper.smti").read_text()
    assert parse_instance(text) == paper_example()
    assert serialize_instance(paper_example()) == text


def test_loose_syntax_is_accepted():
    text = "# comment\nsmti 2 1\n\n  m 2 :  ( w1 )  # trailing\nm 1: w1\nw 1: (m1 m2)\n"
    inst = parse_instance(text)
    assert inst.prefs_right == (((0, 1),),)
    assert serialize_instance(inst) == "smti 2 1\nm 1: w1\nm 2: w1\nw 1: (m1 m2)\n"


def test_capacity_lines():
    text = "smti 1 2\ncap m 1 2\nm 1: w1 w2\nw 1: m1\nw 2: m1\n"
    inst = parse_instance(text)
    assert inst.capacities_left.tolist() == [2]
    assert serialize_instance(inst) == text


@pytest.mark.parametrize("text, kind", [
    ("smti 4 4\nm 1: (w1\n", "unclosed_tie"),
    ("smti 1 1\nm 1: w1)\n", "unbalanced_tie"),
    ("smti 1 1\nm 1: ((w1))\n", "nested_tie"),
    ("smti 1 1\nm 1: ()\n", "empty_tie"),
    ("smti 1 1\nm 1: m1\n", "bad_reference"),
    ("smti 1 1\nm 2: w1\n", "bad_id"),
    ("smti 1 1\nm 1: w1\nm 1: w1\n", "duplicate"),
    ("smti 1 1\nm 1: w1\ncap m 1 2\n", "order"),
    ("m 1: w1\n", "header"),
    ("", "header"),
    ("smti x 1\n", "bad_number"),
])
def test_parse_errors(text, kind):
    with pytest.raises(ParseError) as info:
        parse_instance(text)
    assert info.value.kind == kind


def test_error_position():
    with pytest.raises(ParseError) as info:
        parse_instance("smti 4 4\nm 1: (w1\n")
    assert (info.value.line, info.value.col) == (2, 6)


def test_out_of_range_reference_is_a_validation_error():
    text = "smti 4 4\nm 1: w5\n"
    with pytest.raises(ValidationError) as info:
        parse_instance(text)
    assert info.value.kind is ValidationKind.INDEX_OUT_OF_RANGE


def test_matching_text():
    m = solve(paper_example(), SchedulePolicy.scripted([0, 1, 2, 0, 1, 3, 3, 1])).matching
    text = serialize_matching(m)
    assert text == "matching\nmatch m1 w1\nmatch m2 w4\nmatch m3 w2\nmatch m4 w3\n"
    assert parse_matching(text, paper_example()) == m
    assert serialize_matching(Matching.of([])) == (FIXTURES / "empty.match").read_text()


def test_matching_errors():
    with pytest.raises(InvalidMatching):
        parse_matching("matching\nmatch m4 w1\n", paper_example())
    with pytest.raises(ParseError):
        parse_matching("match m1 w1\n")
    with pytest.raises(ParseError):
        parse_matching("matching\nmatch m1 w1\nmatch m1 w1\n")


def test_json_round_trips():
    inst = paper_example().with_capacities([2, 1, 1, 1])
    assert instance_from_json(json.dumps(instance_to_json(inst))) == inst
    m = Matching.of([(0, 0), (0, 1)])
    assert matching_from_json(json.dumps(matching_to_json(m)), inst) == m
    with pytest.raises(ValueError):
        instance_from_json({"type": "matching"})


def test_audit_report_formats():
    inst = paper_example()
    rep = audit(inst, Matching.of([]))
    assert audit_from_json(json.dumps(audit_to_json(rep))) == rep
    lines = serialize_audit(rep).splitlines()
    assert lines[0] == "audit valid=true stable=false blocking=10 dangerous=0"
    assert len(lines) == 11


def test_result_json_carries_trace():
    res = solve(paper_example(), SchedulePolicy.scripted([0, 1, 2, 0, 1, 3, 3, 1]), trace=True)
    obj = result_to_json(res)
    assert obj["counters"]["total_proposals"] == 9
    assert obj["trace"][0] == "EVENT propose m1 w1 L special"
    assert not obj["trace_truncated"]
