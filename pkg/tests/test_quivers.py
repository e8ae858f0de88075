import pytest

from exborel.quivers import ParseError, parse_input, parse_linear_combination


def test_parse_e1():
    job = parse_input("[quiver]\nvertices: 1 2\narrow: a 1 2\n")
    q = job.presentation.quiver
    assert q.vertices == ["1", "2"]
    assert len(q.arrows) == 1 and not job.presentation.relations


def test_parse_e2_relation():
    job = parse_input(
        "[quiver]\nvertices: 1 2 3\narrow: a 1 2\narrow: b 2 3\n"
        "[relations]\nb*a\n")
    assert len(job.presentation.relations) == 1
    (coeff, path), = job.presentation.relations[0].terms
    assert path == ("b", "a") and coeff == 1


def test_signed_combination():
    terms = parse_linear_combination("b*a - 2 d*c + 1/2 e*f", 1)
    assert terms[0][0] == 1 and terms[1][0] == -2
    assert str(terms[2][0]) == "1/2" and terms[2][1] == ("e", "f")


def test_non_parallel_relation_rejected():
    with pytest.raises(ParseError):
        parse_input(
            "[quiver]\nvertices: 1 2 3\narrow: a 1 2\narrow: b 2 3\n"
            "[relations]\nb*a - a*a\n")


def test_short_relation_rejected():
    with pytest.raises(ParseError) as exc:
        parse_input("[quiver]\nvertices: 1 2\narrow: a 1 2\n[relations]\na\n")
    assert exc.value.line == 5


def test_duplicate_arrow_rejected():
    with pytest.raises(ParseError):
        parse_input("[quiver]\nvertices: 1 2\narrow: a 1 2\narrow: a 2 1\n")


def test_dangling_endpoint_rejected():
    with pytest.raises(ParseError):
        parse_input("[quiver]\nvertices: 1 2\narrow: a 1 9\n")


def test_error_carries_line():
    bad = "[quiver]\nvertices: 1 2\narrow: a 1 2\n[relations]\nb*b\n"
    with pytest.raises(ParseError) as exc:
        parse_input(bad)
    assert exc.value.line == 5


def test_module_block_parses():
    text = """
[quiver]
vertices: 1 2
arrow: a 1 2
[deltas]
explicit
[module.1]
dims: 1 0
arrow a: zero
[module.2]
dims: 0 1
arrow a: zero
"""
    job = parse_input(text)
    assert set(job.modules) == {"1", "2"}
    assert job.modules["1"].dims == {"1": 1, "2": 0}


def test_acyclicity_and_longest_path():
    job = parse_input("[quiver]\nvertices: 1 2 3\narrow: a 1 2\n"
                      "arrow: b 2 3\n")
    q = job.presentation.quiver
    assert q.is_acyclic() and q.longest_path_bound() == 2
    job2 = parse_input("[quiver]\nvertices: 1\narrow: x 1 1\n"
                       "[relations]\nx*x\n")
    assert not job2.presentation.quiver.is_acyclic()
