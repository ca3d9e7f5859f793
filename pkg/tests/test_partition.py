"""Coset-representative cells: builders, quantizer, tiling validation."""

import math

import numpy as np
import pytest

import lqn.partition as partition
from lqn import (
    FundamentalRegion,
    TooLargeError,
    TypicalityParams,
    build_ml_partition,
    build_typicality_partition,
    coset_id,
    coset_ids,
    lattice_contains,
    make_code,
    quantize,
    sample_generator,
    validate_discrete,
    validate_region,
)

C3 = make_code([[1, 1]], 3)
P532 = validate_discrete([0.5, 0.3, 0.2], 3)


def brute_force_cells(code):
    """Group all of Z_p^n by coset id. Test-local oracle."""
    p, n = code.p, code.n
    grid = np.stack(np.unravel_index(np.arange(p**n), (p,) * n), axis=1).astype(
        np.int64
    )
    cells = {}
    for v in grid:
        cells.setdefault(coset_id(code, v), []).append(tuple(int(x) for x in v))
    return cells


def test_coset_id_fixture_and_coset_invariance():
    assert coset_id(C3, [0, 0]) == 0
    assert coset_id(C3, [0, 1]) == 1
    assert coset_id(C3, [2, 1]) == 2
    # adding any codeword never moves a point across cosets
    for v in ([0, 0], [1, 2], [2, 2], [0, 2]):
        base = coset_id(C3, v)
        for w in ([0, 0], [1, 1], [2, 2]):
            assert coset_id(C3, (np.array(v) + w) % 3) == base


def test_coset_ids_matches_scalar():
    code = sample_generator(8, 2, 4, 3)
    grid = np.stack(np.unravel_index(np.arange(81), (3,) * 4), axis=1)
    ids = coset_ids(code, grid)
    for row, got in zip(grid, ids):
        assert coset_id(code, row) == got
    assert sorted(np.unique(ids)) == list(range(9))


def test_ml_region_fixture():
    # independently enumerated optimum per coset for P = (0.5, 0.3, 0.2)
    region = build_ml_partition(C3, P532)
    assert region.reps.tolist() == [[0, 0], [0, 1], [1, 0]]
    assert region.criterion == "ml"
    assert region.size == 3
    assert region.good_flags.all()
    assert region.bad_count == 0
    assert region.epsilon == 0.5


def test_ml_breaks_ties_lexicographically():
    # masses of (0,0) and (1,1) tie exactly; the smaller encoding wins
    t = validate_discrete([0.4, 0.4, 0.2], 3)
    region = build_ml_partition(C3, t)
    assert region.reps[0].tolist() == [0, 0]


def test_typicality_fallback_fixture():
    # P = (0.9, 0.05, 0.05): only (0,0) is typical; other cosets fall back to
    # their lexicographically smallest member and are flagged bad
    t = validate_discrete([0.9, 0.05, 0.05], 3)
    region = build_typicality_partition(C3, t)
    assert region.reps.tolist() == [[0, 0], [0, 1], [0, 2]]
    assert region.good_flags.tolist() == [True, False, False]
    assert region.bad_count == 2


def test_typicality_prefers_typical_over_smaller():
    # coset {(0,0),(1,1),(2,2)}: (0,0) is lex-smallest but only (1,1) is
    # typical, so the builder must skip ahead
    t = validate_discrete([0.05, 0.9, 0.05], 3)
    region = build_typicality_partition(C3, t)
    assert region.reps[0].tolist() == [1, 1]
    assert region.good_flags[0]


def test_ml_matches_exhaustive_search():
    rng = np.random.default_rng(21)
    for p, n in ((3, 3), (5, 4)):
        for trial in range(5):
            raw = rng.dirichlet(np.ones(p)).clip(1e-3)
            t = validate_discrete(raw / raw.sum(), p)
            code = sample_generator((100 + trial, p), 1, n, p)
            region = build_ml_partition(code, t)
            cells = brute_force_cells(code)
            for s, members in cells.items():
                best = max(
                    members,
                    key=lambda v: (
                        math.fsum(math.log2(t.probs[i]) for i in v),
                        [-c for c in v],
                    ),
                )
                got = tuple(region.reps[s].tolist())
                got_ll = math.fsum(math.log2(t.probs[i]) for i in got)
                best_ll = math.fsum(math.log2(t.probs[i]) for i in best)
                assert got_ll >= best_ll - 1e-12


def test_good_flags_follow_epsilon_override():
    t = validate_discrete([0.9, 0.05, 0.05], 3)
    tight = build_typicality_partition(C3, t, tp=TypicalityParams(n=2, epsilon=1e-3))
    assert tight.epsilon == 1e-3
    assert not tight.good_flags.any()
    loose = build_typicality_partition(C3, t, tp=TypicalityParams(n=2, epsilon=5.0))
    assert loose.good_flags.all()
    # with a huge budget every coset's lex-smallest member is typical
    assert loose.reps.tolist() == [[0, 0], [0, 1], [0, 2]]


def test_build_respects_point_cap():
    with pytest.raises(TooLargeError):
        build_ml_partition(C3, P532, max_points=8)
    build_ml_partition(C3, P532, max_points=9)


def test_build_rejects_modulus_mismatch():
    t5 = validate_discrete([0.2] * 5, 5)
    with pytest.raises(ValueError):
        build_ml_partition(C3, t5)


def test_builders_are_deterministic_and_block_independent(monkeypatch):
    code = sample_generator(9, 2, 5, 3)
    t = validate_discrete([0.6, 0.25, 0.15], 3)
    ref = build_typicality_partition(code, t)
    again = build_typicality_partition(code, t)
    assert np.array_equal(ref.reps, again.reps)
    assert np.array_equal(ref.good_flags, again.good_flags)
    # shrinking the processing block must not change any choice
    monkeypatch.setattr(partition, "_BLOCK_ELEMS", 16)
    small = build_typicality_partition(code, t)
    assert np.array_equal(ref.reps, small.reps)
    assert np.array_equal(ref.good_flags, small.good_flags)


def test_quantize_fixture():
    region = build_ml_partition(C3, P532)
    out = quantize(region, [4, 2])
    assert out.remainder.tolist() == [0, 1]
    assert out.lattice_point.tolist() == [4, 1]
    assert lattice_contains(C3, out.lattice_point)
    back = out.lattice_point + out.remainder
    assert back.tolist() == [4, 2]
    with pytest.raises(ValueError):
        quantize(region, [1, 2, 3])


def test_quantize_covers_negative_inputs():
    region = build_ml_partition(C3, P532)
    rng = np.random.default_rng(12)
    for _ in range(50):
        y = rng.integers(-50, 50, size=2)
        out = quantize(region, y)
        assert lattice_contains(C3, out.lattice_point)
        assert (out.lattice_point + out.remainder == y).all()
        # remainder is the cell member of y's coset
        assert out.remainder.tolist() == region.reps[coset_id(C3, y % 3)].tolist()


def test_validate_region_passes_for_builders():
    t = validate_discrete([0.6, 0.25, 0.15], 3)
    for builder in (build_ml_partition, build_typicality_partition):
        for seed in (1, 2):
            code = sample_generator(seed, 2, 5, 3)
            check = validate_region(builder(code, t))
            assert check.ok
            assert check.failure is None


def test_validate_region_reports_misplaced_representative():
    region = build_ml_partition(C3, P532)
    # move the syndrome-1 representative into coset 2
    reps = region.reps.copy()
    reps[1] = reps[2]
    bad = FundamentalRegion(C3, reps, region.good_flags, "ml", 0.5)
    check = validate_region(bad)
    assert not check.ok
    assert check.failure == "representative in wrong coset"
    assert check.counterexample[0] == 1


def test_validate_region_reports_wrong_size():
    region = build_ml_partition(C3, P532)
    bad = FundamentalRegion(C3, region.reps[:2], region.good_flags[:2], "ml", 0.5)
    check = validate_region(bad)
    assert not check.ok
    assert check.failure == "cell size"


def test_validate_region_respects_cap():
    region = build_ml_partition(C3, P532)
    with pytest.raises(TooLargeError):
        validate_region(region, max_points=4)


def test_region_arrays_read_only():
    region = build_ml_partition(C3, P532)
    with pytest.raises(ValueError):
        region.reps[0, 0] = 1
    with pytest.raises(ValueError):
        region.good_flags[0] = False


def test_partition_handles_binary_field():
    code = make_code([[1, 1, 1]], 2)
    t = validate_discrete([0.7, 0.3], 2)
    region = build_typicality_partition(code, t)
    assert region.size == 4
    assert validate_region(region).ok
