import random
from collections import Counter
from math import comb

import numpy as np
import pytest

from madness.cubes import build_tableau, mirror_name
from madness.reports import EXPECTED_SUBSET_BUILD, EXPECTED_UNIVERSAL_SETS
from madness.universal import (
    SET_SIZE,
    TOTAL_TWELVE_SETS,
    SetSizeError,
    buildable_count,
    buildable_count_direct,
    conjecture_sets,
    exhaustive_search,
    orbit_and_stabilizer,
    per_target_analysis,
    sample_distribution,
    sample_sets,
    subset_build_distribution,
)


def test_conjecture_sets_shape():
    sets = conjecture_sets()
    assert len(sets) == EXPECTED_UNIVERSAL_SETS
    assert [s.pair for s in sets] == [
        ("b", "c"), ("b", "d"), ("b", "e"), ("b", "f"),
        ("c", "d"), ("c", "e"), ("c", "f"),
        ("d", "e"), ("d", "f"), ("e", "f"),
    ]
    assert sets[0].names == (
        "Ab", "Ac", "Ba", "Bc", "Ca", "Cb", "De", "Df", "Ed", "Ef", "Fd", "Fe"
    )
    assert len({s.mask for s in sets}) == EXPECTED_UNIVERSAL_SETS
    for s in sets:
        assert bin(s.mask).count("1") == SET_SIZE


def test_conjecture_sets_are_mirror_closed_and_balanced():
    for s in conjecture_sets():
        names = set(s.names)
        assert {mirror_name(n) for n in names} == names
        rows = Counter(n[0] for n in names)
        cols = Counter(n[1] for n in names)
        assert set(rows.values()) == {2}
        assert set(cols.values()) == {2}


def test_conjecture_sets_are_universal():
    t = build_tableau()
    for s in conjecture_sets(t):
        assert buildable_count(s.names, t) == 30
        assert buildable_count(s.mask, t) == 30


def test_fast_and_direct_buildable_counts_agree():
    t = build_tableau()
    s = conjecture_sets(t)[0]
    assert buildable_count_direct(s.names, t) == 30
    rng = random.Random(41)
    for _ in range(6):
        ids = tuple(sorted(rng.sample(range(30), rng.choice([8, 9, 10]))))
        assert buildable_count(ids, t) == buildable_count_direct(ids, t)


def test_buildable_count_monotone_under_growth():
    rng = random.Random(42)
    for _ in range(20):
        ids = rng.sample(range(30), 12)
        last = None
        for k in (8, 9, 10, 11, 12):
            count = buildable_count(tuple(sorted(ids[:k])))
            if last is not None:
                assert count >= last
            last = count


def test_buildable_count_validation():
    with pytest.raises(SetSizeError):
        buildable_count(tuple(range(7)))
    with pytest.raises(ValueError):
        buildable_count(("Ab", "Ab", "Ac", "Ad", "Ae", "Af", "Ba", "Ca"))


def test_random_twelve_sets_are_rarely_universal():
    conjecture_masks = {s.mask for s in conjecture_sets()}
    rng = random.Random(43)
    for _ in range(150):
        ids = tuple(sorted(rng.sample(range(30), 12)))
        mask = sum(1 << i for i in ids)
        if mask in conjecture_masks:
            continue
        assert buildable_count(ids) < 30


def test_single_rows_do_not_give_universal_sets():
    t = build_tableau()
    # rows B and C plus two fillers: heavy overlap starves most targets
    names = tuple(t.cube(i).name for i in range(5, 15)) + ("Ab", "Ac")
    assert buildable_count(names, t) < 30


def test_per_target_analysis_structure():
    t = build_tableau()
    for s in (conjecture_sets(t)[0], conjecture_sets(t)[7]):
        analyses = per_target_analysis(s, t)
        assert len(analyses) == 30
        in_set = [a for a in analyses if a.in_set]
        out_set = [a for a in analyses if not a.in_set]
        assert len(in_set) == 12
        for a in in_set:
            assert len(a.unusable_members) == 3
            values = sorted(v for _, v in a.collections)
            assert values == [2] * 7 + [8, 8]
        for a in out_set:
            assert len(a.unusable_members) == 4
            assert [v for _, v in a.collections] == [4]
        # every buildable collection is a subset of the candidate
        members = set(s.names)
        for a in analyses:
            for names, _ in a.collections:
                assert set(names) <= members


def test_subset_build_distribution_matches_expected():
    t = build_tableau()
    for s in (conjecture_sets(t)[0], conjecture_sets(t)[4]):
        for k, expected in EXPECTED_SUBSET_BUILD.items():
            histogram = subset_build_distribution(s, k, t)
            assert histogram == expected
            assert sum(histogram.values()) == comb(SET_SIZE, k)
    assert subset_build_distribution(conjecture_sets(t)[0], 12, t) == {30: 1}


def test_subset_build_distribution_validation():
    s = conjecture_sets()[0]
    with pytest.raises(SetSizeError):
        subset_build_distribution(s, 7)
    with pytest.raises(SetSizeError):
        subset_build_distribution(s, 13)


def test_sample_sets_reproducible():
    a = sample_sets(12, 40, 123)
    b = sample_sets(12, 40, 123)
    assert np.array_equal(a, b)
    # per-index seeding: a shorter run is a prefix of a longer one
    c = sample_sets(12, 10, 123)
    assert np.array_equal(a[:10], c)
    d = sample_sets(12, 40, 124)
    assert not np.array_equal(a, d)
    rows = np.sort(a, axis=1)
    assert np.array_equal(a, rows)
    assert a.min() >= 0 and a.max() <= 29


def test_sample_sets_validation():
    with pytest.raises(SetSizeError):
        sample_sets(7, 5, 1)
    with pytest.raises(SetSizeError):
        sample_sets(31, 5, 1)


def test_sample_distribution_statistics():
    stats, counts = sample_distribution(12, 2000, 7)
    assert stats.n == len(counts) == 2000
    assert sum(stats.histogram.values()) == 2000
    assert stats.min >= 1
    assert stats.max <= 30
    assert 0 < stats.mean < 30
    again, _ = sample_distribution(12, 2000, 7)
    assert again == stats


def test_sample_distribution_agrees_with_slow_count():
    t = build_tableau()
    ids_matrix = sample_sets(10, 12, 99)
    _, counts = sample_distribution(10, 12, 99, t)
    for row, count in zip(ids_matrix, counts):
        assert buildable_count_direct(tuple(int(i) for i in row), t) == int(count)


def test_orbit_report():
    report = orbit_and_stabilizer()
    assert report.orbit_size == EXPECTED_UNIVERSAL_SETS
    assert report.single_orbit
    assert report.stabilizer_orders == (72,) * EXPECTED_UNIVERSAL_SETS
    assert all(report.has_three_cycle)
    assert len(set(report.stabilizer_cycle_types)) == 1


def test_search_budget_and_resume(tmp_path):
    path = str(tmp_path / "scan.json")
    first = exhaustive_search(checkpoint_path=path, budget_combinations=30_000,
                              chunk_size=10_000)
    assert not first.finished
    assert first.completed == 30_000
    assert first.found == []
    second = exhaustive_search(checkpoint_path=path, budget_combinations=30_000,
                               chunk_size=10_000)
    assert second.completed == 60_000
    fresh = exhaustive_search(budget_combinations=60_000, chunk_size=20_000)
    assert fresh.completed == second.completed
    assert fresh.last_combo == second.last_combo
    assert fresh.found == second.found


def test_search_time_budget(tmp_path):
    path = str(tmp_path / "scan.json")
    # an already-expired deadline: the scan must stop before the first chunk
    state = exhaustive_search(checkpoint_path=path, budget_seconds=-1.0)
    assert not state.finished
    assert state.completed == 0
    resumed = exhaustive_search(checkpoint_path=path, budget_combinations=5_000,
                                chunk_size=5_000)
    assert resumed.completed == 5_000


def test_search_space_size():
    assert TOTAL_TWELVE_SETS == comb(30, 12) == 86_493_225
