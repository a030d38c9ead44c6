import json
import math
from fractions import Fraction

from hypothesis import given, strategies as st

from gl3arch.exact_algebra import GaussianRational
from gl3arch.reports import (FAIL, NOT_CONFIRMED, PASS, SCHEMA_VERSION, Report, body_bytes, document, dumps,
                             encode, format_text)

FIELDS = {"lemma", "params", "numeric", "target", "deviation", "verdict", "diagnostics"}


def test_encoding():
    assert encode(1 + 2j) == {"re": 1.0, "im": 2.0}
    assert encode(Fraction(3, 4)) == "3/4"
    assert encode(GaussianRational(1, Fraction(-1, 2))) == {"re": "1", "im": "-1/2"}
    assert encode(math.nan) is None
    assert encode((1, [2.5])) == [1, [2.5]]


@given(st.floats(allow_nan=False), st.sampled_from([PASS, FAIL, NOT_CONFIRMED]))
def test_report_round_trips_through_json(x, verdict):
    r = Report("demo", {"x": x}, complex(x, 1), x, 0.0, verdict, {"note": "n"})
    doc = document([r], {"T": 60.0}, timestamp="t")
    back = json.loads(dumps(doc))
    assert back["schema_version"] == SCHEMA_VERSION
    assert set(back["body"]["reports"][0]) == FIELDS
    assert back["body"]["all_ok"] == (verdict == PASS)


def test_envelope_excluded_from_body():
    r = Report("demo", {}, 1.0, 1.0, 0.0, PASS)
    assert body_bytes(document([r], timestamp="a")) == body_bytes(document([r], timestamp="b"))


def test_text_output_has_verdict():
    r = Report("demo", {"ell": 3}, 1.0, 1.0, 0.0, NOT_CONFIRMED)
    assert format_text([r]).startswith("[MEMBERSHIP NOT CONFIRMED] demo ell=3")
