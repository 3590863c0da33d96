"""End-to-end tabulation at small singularity numbers."""

from __future__ import annotations

import json

import pytest

import bondedknots.pipeline as pl
from bondedknots.diagram import parse_pd
from bondedknots.generate import generate_shadows
from bondedknots.pipeline import PipelineConfig, diagnostics_report, run_pipeline
from bondedknots.planar_code import import_planar_code, shadows_to_planar_code
from bondedknots.poly import canon_poly, parse_poly, poly_mirror
from bondedknots.yamada import yamada

FAST = dict(depths=(1,), max_states=(3000,))


@pytest.fixture(scope="module")
def s5():
    return run_pipeline(PipelineConfig(max_s=5, **FAST))


def test_config_validation():
    with pytest.raises(ValueError):
        PipelineConfig(max_s=-1)
    with pytest.raises(ValueError):
        PipelineConfig(depths=(2, 1))
    with pytest.raises(ValueError):
        PipelineConfig(depths=(1, 2), max_states=(10,))
    with pytest.raises(ValueError):
        PipelineConfig(jobs=0)


def test_budgets_follow_schedule():
    bs = PipelineConfig(depths=(1, 2), max_states=(5, 6)).budgets()
    assert [(b.max_up, b.max_states) for b in bs] == [(1, 5), (2, 6)]


def test_max_s_2():
    res = run_pipeline(PipelineConfig(max_s=2, **FAST))
    # [DERIVED] only theta and handcuff shadows exist, both without crossings
    assert [r.name for r in res.records] == ["B(0,1)_1", "H(0,1)_1"]
    assert all(r.chirality == "achiral" for r in res.records)
    assert res.resolved and not res.excluded


def test_max_s_5_records(s5, by_name):
    assert sorted(r.name for r in s5.records) == ["B(0,1)_1", "B(0,2)_1", "B(3,1)_1", "H(0,1)_1", "H(2,1)_1"]
    assert s5.resolved
    for r in s5.records:
        ref = canon_poly(parse_poly(by_name[r.name]["yamada"]))
        assert parse_poly(r.yamada) in (ref, canon_poly(poly_mirror(ref))), r.name
        assert r.chirality == by_name[r.name]["chirality"], r.name


def test_record_invariants(s5):
    for r in s5.records:
        d = parse_pd(r.pd)
        assert str(yamada(d)) == r.yamada
        assert r.s == r.c + 2 * r.b <= 5
        assert (d.crossing_count, d.vertex_count) == (r.c, 2 * r.b)
        assert r.composite == "prime"
        assert r.name[0] == r.cls


def test_max_s_5_excludes_tripod(s5):
    (ex,) = s5.excluded
    assert ex["reason"] == "unmatchable" and ex["vertices"] == 4 and ex["c"] == 0


def test_diagnostics_report(s5):
    rep = diagnostics_report(s5)
    assert rep["summary"]["records"] == 5
    assert rep["summary"]["by_class"] == {"B": 3, "H": 2, "L": 0}
    assert rep["this_run"]["candidate_diagrams"] >= rep["this_run"]["canonical_representatives"]
    assert set(rep["published"])


def test_parallel_run_is_identical(s5):
    par = run_pipeline(PipelineConfig(max_s=5, jobs=2, **FAST))
    assert [r.to_dict() for r in par.records] == [r.to_dict() for r in s5.records]
    assert par.excluded == s5.excluded


def test_checkpoint_resume(tmp_path, monkeypatch, s5):
    cfg = PipelineConfig(max_s=5, checkpoint=tmp_path, **FAST)
    first = run_pipeline(cfg)
    assert (tmp_path / "report.json").exists()
    assert json.loads((tmp_path / "report.json").read_text())["summary"]["records"] == 5

    def boom(*a, **k):
        raise AssertionError("stage recomputed")

    # a finished run resumes without recomputing any stage
    monkeypatch.setattr(pl, "_shadow_rows", boom)
    monkeypatch.setattr(pl, "_simplified_rows", boom)
    monkeypatch.setattr(pl, "_reduce_stage", boom)
    again = run_pipeline(cfg)
    assert [r.to_dict() for r in again.records] == [r.to_dict() for r in first.records]
    assert [r.to_dict() for r in first.records] == [r.to_dict() for r in s5.records]


def test_resume_after_interruption(tmp_path, s5):
    cfg = PipelineConfig(max_s=5, checkpoint=tmp_path, **FAST)
    run_pipeline(cfg)
    # drop everything after the reduction stage
    for name in ("classes", "records", "excluded"):
        (tmp_path / f"{name}.jsonl").unlink()
    again = run_pipeline(cfg)
    assert [r.to_dict() for r in again.records] == [r.to_dict() for r in s5.records]


def test_planar_code_import_gives_same_table(tmp_path):
    shadows = generate_shadows(4)
    path = tmp_path / "s4.pc"
    path.write_bytes(shadows_to_planar_code(shadows))
    assert {sh.code for sh in import_planar_code(path.read_bytes())} >= {sh.code for sh in shadows}
    native = run_pipeline(PipelineConfig(max_s=4, **FAST))
    imported = run_pipeline(PipelineConfig(max_s=4, planar_code=path, **FAST))
    strip = lambda rs: [(r.name, r.pd, r.yamada, r.chirality) for r in rs]  # noqa: E731
    assert strip(imported.records) == strip(native.records)
