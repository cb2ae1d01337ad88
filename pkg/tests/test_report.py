import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qtriplet.config import AnalysisConfig
from qtriplet.qcore import QTriplet, QValue
from qtriplet.report import (SCHEMA_VERSION, AnalysisReport, parse_triplet_table, reference_triplets,
                             triplet_table)

qv = st.builds(QValue, st.floats(-3, 5), st.floats(0, 1), st.one_of(st.none(), st.floats(0, 1)))


@given(qv, qv, qv, st.text("ABCXYZ", min_size=1, max_size=8))
def test_report_json_round_trip(a, b, c, label):
    rep = AnalysisReport(label, QTriplet(a, b, c, label), None, {"qstat": {"bins": 41, "beta": 0.1}},
                         AnalysisConfig().to_dict())
    again = AnalysisReport.from_json(rep.to_json())
    assert again == rep
    assert again.to_json() == rep.to_json()


def test_failed_report_round_trip():
    rep = AnalysisReport("x", None, {"stage": "qrel", "message": "no decay"})
    d = json.loads(rep.to_json())
    assert d["triplet"] is None and d["failure"]["stage"] == "qrel"
    assert AnalysisReport.from_json(rep.to_json()) == rep


def test_schema_version_checked():
    d = json.loads(AnalysisReport("x", None).to_json())
    assert d["schema_version"] == SCHEMA_VERSION
    d["schema_version"] = 99
    with pytest.raises(ValueError):
        AnalysisReport.from_dict(d)


def test_report_top_level_fields():
    d = json.loads(AnalysisReport("x", QTriplet.from_values(0, 1.3, 2)).to_json())
    assert {"label", "triplet", "diagnostics", "config", "version"} <= set(d)
    assert set(d["triplet"]) == {"q_sens", "q_stat", "q_rel"}
    assert set(d["triplet"]["q_stat"]) == {"value", "uncertainty", "r_squared"}


def test_config_round_trip():
    cfg = AnalysisConfig(bins="auto", range_iqr=None, scale_grid="dyadic", max_lag=30)
    assert AnalysisConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg


def test_triplet_table_round_trip():
    ts = reference_triplets()
    text = triplet_table(ts)
    assert text.splitlines()[0] == "market,q_sens,q_sens_err,q_stat,q_stat_err,q_rel,q_rel_err,nonextensive"
    back = parse_triplet_table(text)
    assert [t.as_array().tolist() for t in back] == [t.as_array().tolist() for t in ts]
    assert sum(line.endswith(",1") for line in text.splitlines()[1:]) == 23
