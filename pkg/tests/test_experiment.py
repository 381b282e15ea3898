import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gtloc.bench.experiment import ExperimentConfig, QueryRecord, Report, run_experiment
from gtloc.bench.texture import footprint, view_fits
from gtloc.errors import FormatError
from gtloc.geometry import Pose2D

TINY = ExperimentConfig(grid_cols=2, grid_rows=2, image_width=160, image_height=120,
                        queries=3, prior_levels=(None, 0, 100))


@pytest.fixture(scope="module")
def tiny_report():
    return run_experiment(TINY, timing=True)


def test_single_reference_self_query():
    cfg = ExperimentConfig(grid_cols=1, grid_rows=1, image_width=160, image_height=120, queries=1)
    ref = cfg.reference_poses()[0]
    report = run_experiment(cfg, query_poses=[ref])
    assert report.success_rate(None) == 1.0
    assert report.records[0].considered == 1


def test_far_query_is_recorded_not_raised():
    cfg = ExperimentConfig(grid_cols=1, grid_rows=1, image_width=160, image_height=120, queries=1, border=300)
    far = Pose2D(590.0, 590.0, 0.0)  # inside the texture, clear of the single reference view
    report = run_experiment(cfg, query_poses=[far])
    (rec,) = report.records
    assert not rec.success
    assert report.success_rate(None) == 0.0


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.floats(0, 0.9), st.integers(0, 10**6), st.integers(0, 50))
def test_queries_inside_mapped_extent(cols, rows, overlap, seed, qid):
    cfg = ExperimentConfig(grid_cols=cols, grid_rows=rows, image_width=160, image_height=120,
                           overlap=overlap, query_seed=seed)
    pose, direction = cfg.query(qid)
    x0, y0, x1, y1 = cfg.mapped_extent()
    c = footprint(pose, 160, 120)
    center = c.mean(axis=0)
    assert x0 <= center[0] <= x1 and y0 <= center[1] <= y1
    if x1 - x0 > 200 and y1 - y0 > 200:
        assert np.all((c[:, 0] >= x0 - 1e-6) & (c[:, 0] <= x1 + 1e-6))
        assert np.all((c[:, 1] >= y0 - 1e-6) & (c[:, 1] <= y1 + 1e-6))
    assert view_fits(cfg.texture(), pose, 160, 120)
    assert 0 <= direction < 2 * np.pi


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(overlap=1.0)
    with pytest.raises(ValueError):
        ExperimentConfig(prior_levels=(0, 0))
    with pytest.raises(ValueError):
        ExperimentConfig(prior_levels=())
    assert ExperimentConfig(prior_levels=(None, 50)).prior_levels == (None, 50.0)


def test_report_content(tiny_report):
    recs = tiny_report.records
    assert [(r.query_id, r.prior_mm) for r in recs] == [(q, lv) for q in range(3) for lv in (None, 0.0, 100.0)]
    assert all(r.t_match_us is not None and r.t_match_us >= 0 for r in recs)
    for s in tiny_report.summary():
        level = tiny_report.level(s.prior_mm)
        assert s.success_rate == sum(r.success for r in level) / len(level)
    assert tiny_report.level(0)[0].considered == 4


def test_report_roundtrip(tiny_report):
    text = tiny_report.to_jsonl()
    back = Report.from_jsonl(text)
    assert back.to_jsonl() == text
    assert back.records == tiny_report.records


def _edit(text, index, fn):
    lines = text.splitlines()
    obj = json.loads(lines[index])
    fn(obj)
    lines[index] = json.dumps(obj)
    return "\n".join(lines) + "\n"


@pytest.mark.parametrize("index, fn", [
    (0, lambda o: o.update(extra=1)),
    (0, lambda o: o.update(version=2)),
    (0, lambda o: o["config"].update(colour="red")),
    (1, lambda o: o.update(note="hi")),
    (1, lambda o: o.pop("inliers")),
    (-1, lambda o: o["levels"][0].update(p90=1)),
    (-1, lambda o: o["levels"][0].update(successes=99)),
])
def test_report_reader_rejects(tiny_report, index, fn):
    with pytest.raises(FormatError):
        Report.from_jsonl(_edit(tiny_report.to_jsonl(), index, fn))


def test_report_reader_rejects_garbage():
    with pytest.raises(FormatError):
        Report.from_jsonl("not json\n{}\n")
    with pytest.raises(FormatError):
        Report.from_jsonl("")


def test_record_totals():
    r = QueryRecord(0, None, 3, True, 10, 5, 6, 7)
    assert r.t_total_us == 18
    assert QueryRecord(0, None, 3, True, 10, None, None, None).t_total_us is None
