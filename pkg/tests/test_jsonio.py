import json

import numpy as np
import pytest

from tempora import (BanachWindow, Cesaro, Edu, ExpertPanel, IndicatorSet,
                     Inf, Liminf, Maxmin, Quadratic, Tabulated, Variational)
from tempora import jsonio
from tempora.errors import ParseError

CRITERIA = [
    Edu(0.95),
    Maxmin(points=(0.25, 0.5), intervals=((0.6, 0.8),)),
    Variational(IndicatorSet(points=(0.3,), intervals=((0.4, 0.6),))),
    Variational(Quadratic(0.9, 5.0)),
    Variational(Tabulated(knots=((0.1, 1.0), (0.5, 0.0)))),
    Inf(),
    Liminf(),
    BanachWindow(),
    Cesaro(),
]


def test_criterion_round_trip():
    for k in CRITERIA:
        encoded = json.dumps(jsonio.criterion_to_dict(k))
        assert jsonio.criterion_from_dict(json.loads(encoded)) == k


def test_criterion_tags_match_wire_format():
    assert jsonio.criterion_to_dict(Edu(0.95)) == {"edu": {"delta": 0.95}}
    assert jsonio.criterion_to_dict(Inf()) == {"inf": {}}
    assert jsonio.criterion_to_dict(BanachWindow()) == {"banach_window": {}}
    k = jsonio.criterion_from_dict(
        {"maxmin": {"points": [0.5], "intervals": [[0.6, 0.7]]}})
    assert k == Maxmin(points=(0.5,), intervals=((0.6, 0.7),))


def test_criterion_parse_errors():
    with pytest.raises(ParseError):
        jsonio.criterion_from_dict({"edu": {"delta": 0.95}, "inf": {}})
    with pytest.raises(ParseError):
        jsonio.criterion_from_dict({"nope": {}})
    with pytest.raises(ParseError):
        jsonio.criterion_from_dict({"edu": {}})
    with pytest.raises(ParseError):
        jsonio.criterion_from_dict({"edu": {"delta": 2.0}})
    with pytest.raises(ParseError):
        jsonio.criterion_from_dict({"variational": {"cost": {"quadratic": {"center": 0.5}}}})


def test_operator_decoding():
    op = jsonio.operator_from_dict({"matrix": [[0.0, 1.0], [1.0, 0.0]]})
    assert np.array_equal(op.entries, [[0.0, 1.0], [1.0, 0.0]])
    op = jsonio.operator_from_dict({"builtin": {"name": "scaling", "n": 2,
                                                "factor": 2.0}})
    assert np.array_equal(op.entries, 2.0 * np.eye(2))
    with pytest.raises(ParseError):
        jsonio.operator_from_dict({"builtin": {"name": "cyclic_delay"}})
    with pytest.raises(ParseError):
        jsonio.operator_from_dict({"matrix": [[-1.0]]})


def test_panel_round_trip():
    panel = ExpertPanel(factors=(0.3, 0.6), confidences=(0.0, 1.5))
    back = jsonio.panel_from_dict(json.loads(json.dumps(jsonio.panel_to_dict(panel))))
    assert back == panel
    with pytest.raises(ParseError):
        jsonio.panel_from_dict({"confidences": [0.0]})
    with pytest.raises(ParseError):
        jsonio.panel_from_dict({"factors": []})


def test_load_json_file_reports_location(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"a": 1,\n  broken')
    with pytest.raises(ParseError) as err:
        jsonio.load_json_file(str(bad))
    assert err.value.line == 2
