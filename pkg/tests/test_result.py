import pytest

from trustres.errors import ParseError
from trustres.result import ResolutionResult, results_from_csv, results_to_csv


def test_csv_layout():
    r = ResolutionResult("k", {"u2": {"b", "a"}, "u1": {"a"}, "u3": set()}, {"u1": "a"})
    assert results_to_csv([r]) == (
        "user,key,value,certain\n"
        "u1,k,a,true\n"
        "u2,k,a,false\n"
        "u2,k,b,false\n"
    )
    assert results_from_csv(results_to_csv([r])) == [r]


def test_no_solution_mark():
    empty = ResolutionResult("k", {}, {}, no_stable_solution=True)
    text = results_to_csv([empty])
    assert text == "# no_stable_solution\nuser,key,value,certain\n"
    assert results_from_csv(text) == []


def test_empty_sets_dropped():
    assert ResolutionResult("k", {"u1": set()}) == ResolutionResult("k")


@pytest.mark.parametrize("text", ["", "u,k,v\n", "user,key,value,certain\nu1,k,a,maybe\n",
                                  "user,key,value,certain\nu1,k,a\n"])
def test_bad_csv(text):
    with pytest.raises(ParseError):
        results_from_csv(text)
