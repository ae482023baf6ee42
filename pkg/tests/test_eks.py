"""Knowledge store: ranges, overrides, filtering, statistics, persistence."""

from __future__ import annotations

import math

import numpy as np
import pytest

import gaitbench.eks as eks
from gaitbench.eks import (
    DemographicFilter,
    apply_patient,
    default_store,
    distribution_stats,
    filtered_members,
    load_store,
    override_range,
    reset_category,
    save_store,
    stats_of,
)
from gaitbench.errors import (
    Duplicate,
    InvalidRange,
    NotFound,
    PersistenceError,
    VersionError,
)
from gaitbench.stps import STP_IDS
from gaitbench.trial import Gender

from conftest import full_values, make_record, seeded_store


class TestApplyPatient:
    def test_first_patient_sets_point_ranges(self):
        store = apply_patient(default_store(), "ankle", make_record("a", full_values(2.0)))
        ankle = store.category("ankle")
        for i in STP_IDS:
            r = ankle.range_for(i)
            assert r.min == r.max == 2.0 + 0.01 * i
            assert not r.manual

    def test_range_extends_to_new_extrema(self):
        store = default_store()
        store = apply_patient(store, "knee", make_record("a", {1: 0.60}))
        store = apply_patient(store, "knee", make_record("b", {1: 0.70}))
        store = apply_patient(store, "knee", make_record("c", {1: 0.75}))
        r = store.category("knee").range_for(1)
        assert (r.min, r.max) == (0.60, 0.75)

    def test_subset_apply_only_touches_chosen_stp(self):
        store = seeded_store()
        before = {
            i: distribution_stats(store.category("hip"), i) for i in STP_IDS
        }
        store = apply_patient(store, "hip", make_record("extra", full_values(4.0)), subset={1})
        after = {i: distribution_stats(store.category("hip"), i) for i in STP_IDS}
        assert after[1].n == before[1].n + 1
        for i in STP_IDS:
            if i == 1:
                continue
            assert after[i] == before[i]

    def test_duplicate_patient_rejected(self):
        store = apply_patient(default_store(), "ankle", make_record("a", full_values(1.0)))
        with pytest.raises(Duplicate):
            apply_patient(store, "ankle", make_record("a", full_values(2.0)))

    def test_unknown_category(self):
        with pytest.raises(NotFound):
            apply_patient(default_store(), "spine", make_record("a", full_values(1.0)))

    def test_unknown_subset_id(self):
        with pytest.raises(NotFound):
            apply_patient(
                default_store(), "ankle", make_record("a", full_values(1.0)), subset={99}
            )

    def test_manual_range_survives_apply(self):
        store = override_range(default_store(), "ankle", 1, 0.1, 9.9)
        store = apply_patient(store, "ankle", make_record("a", {1: 0.5}))
        r = store.category("ankle").range_for(1)
        assert (r.min, r.max, r.manual) == (0.1, 9.9, True)

    def test_input_store_not_mutated(self):
        store = default_store()
        apply_patient(store, "ankle", make_record("a", full_values(1.0)))
        assert store.category("ankle").patients == ()


class TestResetCategory:
    def test_idempotent_without_overrides(self):
        store = seeded_store()
        assert reset_category(store, "ankle") == store

    def test_reset_restores_extrema(self):
        store = default_store()
        store = apply_patient(store, "hip", make_record("a", {2: 0.6}))
        store = apply_patient(store, "hip", make_record("b", {2: 0.7}))
        store = override_range(store, "hip", 2, 0.0, 99.0)
        store = reset_category(store, "hip")
        r = store.category("hip").range_for(2)
        assert (r.min, r.max, r.manual) == (0.6, 0.7, False)

    def test_reset_empty_category_clears_ranges(self):
        store = override_range(default_store(), "knee", 3, 0.5, 0.8)
        store = reset_category(store, "knee")
        assert store.category("knee").range_for(3).is_empty

    def test_unknown_category(self):
        with pytest.raises(NotFound):
            reset_category(default_store(), "spine")


class TestOverrideRange:
    def test_override_then_reset_round_trip(self):
        store = apply_patient(default_store(), "ankle", make_record("a", {1: 0.66}))
        original = store.category("ankle").range_for(1)
        store = override_range(store, "ankle", 1, 0.0, 1.0)
        store = reset_category(store, "ankle")
        assert store.category("ankle").range_for(1) == original

    def test_override_on_empty_category_is_usable(self):
        store = override_range(default_store(), "calcaneus", 5, 0.5, 0.8)
        r = store.category("calcaneus").range_for(5)
        assert not r.is_empty and r.manual
        assert r.contains(0.65)
        assert not r.contains(0.9)

    def test_zero_width_range(self):
        store = override_range(default_store(), "ankle", 1, 0.7, 0.7)
        r = store.category("ankle").range_for(1)
        assert r.contains(0.7)
        assert not r.contains(0.7 + 1e-12)

    def test_min_above_max_rejected(self):
        with pytest.raises(InvalidRange):
            override_range(default_store(), "ankle", 1, 1.0, 0.5)

    def test_non_finite_rejected(self):
        with pytest.raises(InvalidRange):
            override_range(default_store(), "ankle", 1, 0.0, math.inf)

    def test_unknown_stp(self):
        with pytest.raises(NotFound):
            override_range(default_store(), "ankle", 17, 0.0, 1.0)

    def test_manual_marker_listed(self):
        store = override_range(default_store(), "ankle", 4, 0.0, 1.0)
        assert store.category("ankle").manual_stp_ids() == (4,)


class TestFilteredMembers:
    def test_empty_filter_returns_all(self, small_store):
        ankle = small_store.category("ankle")
        assert filtered_members(ankle) == list(ankle.patients)

    def test_gender_filter(self, small_store):
        norm = small_store.category("norm")
        females = filtered_members(
            norm, DemographicFilter(genders=frozenset({Gender.FEMALE}))
        )
        assert females
        assert all(p.meta.gender is Gender.FEMALE for p in females)
        brute = [p for p in norm.patients if p.meta.gender is Gender.FEMALE]
        assert females == brute

    def test_point_age_interval(self, small_store):
        norm = small_store.category("norm")
        exact = filtered_members(norm, DemographicFilter(age=(31.0, 31.0)))
        assert all(p.meta.age == 31.0 for p in exact)
        assert len(exact) == sum(1 for p in norm.patients if p.meta.age == 31.0)

    def test_filters_conjoin(self, small_store):
        norm = small_store.category("norm")
        combined = filtered_members(
            norm,
            DemographicFilter(
                genders=frozenset({Gender.MALE}), body_mass_kg=(60.0, 64.0)
            ),
        )
        brute = [
            p
            for p in norm.patients
            if p.meta.gender is Gender.MALE and 60.0 <= p.meta.body_mass_kg <= 64.0
        ]
        assert combined == brute

    def test_subset_of_members(self, small_store):
        norm = small_store.category("norm")
        got = filtered_members(norm, DemographicFilter(age=(0.0, 32.0)))
        assert set(p.meta.id for p in got) <= set(p.meta.id for p in norm.patients)

    def test_invalid_interval(self):
        with pytest.raises(InvalidRange):
            DemographicFilter(age=(40.0, 30.0))


class TestDistributionStats:
    def test_singleton(self):
        s = stats_of([5.0], 1)
        assert (s.n, s.mean, s.std_dev) == (1, 5.0, 0.0)
        assert (s.q1, s.median, s.q3) == (5.0, 5.0, 5.0)
        assert (s.min, s.max) == (5.0, 5.0)

    def test_five_values_hinge_oracle(self):
        s = stats_of([1.0, 2.0, 3.0, 4.0, 5.0], 1)
        assert s.mean == 3.0
        assert s.std_dev == pytest.approx(math.sqrt(2.0), rel=1e-15)
        assert (s.q1, s.median, s.q3) == (2.0, 3.0, 4.0)

    def test_even_count_hinges(self):
        s = stats_of([1.0, 2.0, 3.0, 4.0], 1)
        assert (s.q1, s.median, s.q3) == (1.5, 2.5, 3.5)

    def test_population_sigma(self):
        values = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]
        s = stats_of(values, 2)
        assert s.std_dev == pytest.approx(2.0, rel=1e-15)  # classic population example

    def test_filter_excluding_everything(self, small_store):
        stats = distribution_stats(
            small_store.category("norm"), 1, DemographicFilter(age=(200.0, 300.0))
        )
        assert stats.is_empty and stats.n == 0

    def test_permutation_invariance(self):
        rng = np.random.default_rng(17)
        values = rng.uniform(0, 10, size=31).tolist()
        shuffled = list(values)
        rng.shuffle(shuffled)
        a, b = stats_of(values, 3), stats_of(shuffled, 3)
        for field in ("n", "mean", "std_dev", "min", "max", "q1", "median", "q3"):
            assert getattr(a, field) == pytest.approx(getattr(b, field), rel=1e-12)

    def test_quartiles_ordered(self):
        rng = np.random.default_rng(19)
        for n in (1, 2, 3, 4, 5, 8, 13, 100):
            s = stats_of(rng.uniform(-5, 5, size=n).tolist(), 1)
            assert s.min <= s.q1 <= s.median <= s.q3 <= s.max

    def test_unknown_stp_id(self, small_store):
        with pytest.raises(NotFound):
            distribution_stats(small_store.category("norm"), 0)


def random_operations(store, rng, n_ops):
    """Random apply/override/reset mix; returns the final store."""
    category_ids = [c.id for c in store.categories()]
    for k in range(n_ops):
        op = rng.integers(0, 3)
        cid = category_ids[int(rng.integers(0, len(category_ids)))]
        if op == 0:
            values = {
                i: float(rng.uniform(0, 10)) for i in STP_IDS if rng.uniform() > 0.2
            }
            subset = None
            if rng.uniform() > 0.7 and values:
                subset = set(
                    int(i) for i in rng.choice(list(values), size=min(3, len(values)))
                )
            store = apply_patient(
                store, cid, make_record(f"r{k}", values, age=float(rng.uniform(10, 90)))
            , subset)
        elif op == 1:
            lo = float(rng.uniform(0, 5))
            store = override_range(
                store, cid, int(rng.integers(1, 17)), lo, lo + float(rng.uniform(0, 5))
            )
        else:
            store = reset_category(store, cid)
    return store


def assert_auto_ranges_match_extrema(store):
    for category in store.categories():
        for i in STP_IDS:
            r = category.range_for(i)
            if r.manual:
                continue
            values = category.values_for(i)
            if not values:
                assert r.is_empty
            else:
                assert (r.min, r.max) == (min(values), max(values))


def test_random_operation_sequences_keep_auto_ranges_exact():
    rng = np.random.default_rng(101)
    store = random_operations(default_store(), rng, 120)
    assert_auto_ranges_match_extrema(store)


def test_apply_then_rebuild_without_patient_is_a_no_op():
    # Non-manual state is a pure function of the member set: adding a patient
    # and rebuilding the category from the original members matches never
    # having applied at all.
    from gaitbench.eks import GaitCategory

    store = seeded_store()
    original = store.category("hip")
    with_extra = apply_patient(store, "hip", make_record("extra", full_values(9.0)))
    assert with_extra.category("hip") != original
    rebuilt = GaitCategory(
        id=original.id, name=original.name, patients=original.patients
    )
    assert rebuilt.ranges == original.ranges
    assert with_extra.replace_category(rebuilt) == store


class TestPersistence:
    def test_round_trip_small_store(self, small_store, tmp_path):
        path = tmp_path / "store.json"
        save_store(small_store, path)
        assert load_store(path) == small_store

    def test_round_trip_preserves_manual_flags_and_raw_values(self, tmp_path):
        store = seeded_store()
        store = override_range(store, "ankle", 7, -1.0, 42.0)
        path = tmp_path / "store.json"
        save_store(store, path)
        again = load_store(path)
        assert again == store
        assert again.category("ankle").range_for(7).manual

    def test_empty_store_round_trip(self, tmp_path):
        store = default_store()
        path = tmp_path / "store.json"
        save_store(store, path)
        assert load_store(path) == store

    def test_truncated_file_raises_and_leaves_file_alone(self, small_store, tmp_path):
        path = tmp_path / "store.json"
        save_store(small_store, path)
        text = path.read_text()
        path.write_text(text[: len(text) // 2])
        with pytest.raises(PersistenceError, match="line"):
            load_store(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(PersistenceError):
            load_store(tmp_path / "nope.json")

    def test_version_mismatch(self, small_store, tmp_path):
        path = tmp_path / "store.json"
        save_store(small_store, path)
        doc = path.read_text().replace('"schema_version": 1', '"schema_version": 99')
        path.write_text(doc)
        with pytest.raises(VersionError):
            load_store(path)

    def test_failed_write_keeps_existing_file(self, small_store, tmp_path, monkeypatch):
        path = tmp_path / "store.json"
        save_store(small_store, path)
        original = path.read_bytes()

        def boom(src, dst):
            raise OSError("disk full")

        monkeypatch.setattr(eks.os, "replace", boom)
        with pytest.raises(PersistenceError):
            save_store(reset_category(small_store, "ankle"), path)
        assert path.read_bytes() == original
        leftovers = [p for p in tmp_path.iterdir() if p.name != "store.json"]
        assert leftovers == []
