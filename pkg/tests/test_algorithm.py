import json
import math
import warnings

import numpy as np
import pytest

from medianlattice import (
    GuaranteeWarning,
    LatticeRule,
    alias_free_majority,
    approximant_from_json,
    approximant_to_json,
    build_plan,
    evaluate,
    run,
    search_guaranteed_plan,
)
from medianlattice.algorithm import AlgorithmPlan, draw_rules, plan_to_dict

from conftest import make_index_set, make_params, random_spectrum, sparse_eval


def quiet_plan(params, tau, R, N):
    return build_plan(params, tau, R, N, warn=False)


# ---------------------------------------------------------------------------
# plan derivation

def test_plan_hand_example():
    plan = quiet_plan(make_params(), 1.0, 3, 97)
    assert plan.oversampling == pytest.approx(12.149421957006766, rel=1e-14)
    assert plan.N2 == pytest.approx(2.906840051932752, rel=1e-14)
    assert plan.eps1 == pytest.approx(9.361620951853865, rel=1e-13)
    assert plan.eps2 == pytest.approx(37.44648380741546, rel=1e-13)
    assert [tuple(r) for r in plan.index_set.members] == [(-2,), (-1,), (0,), (1,), (2,)]
    assert not plan.guaranteed
    assert plan.total_evaluations == 3 * 97
    assert plan.half_count == 2


def test_plan_warns_when_unguaranteed():
    with pytest.warns(GuaranteeWarning, match="eps2"):
        build_plan(make_params(), 1.0, 3, 97)


def test_plan_degenerates_to_empty_set():
    with pytest.warns(GuaranteeWarning, match="empty"):
        plan = build_plan(make_params(), 1.0, 3, 5)
    assert plan.N2 <= 1.0
    assert len(plan.index_set) == 0
    assert math.isinf(plan.eps1) and math.isinf(plan.eps2)
    assert not plan.guaranteed


def test_plan_quantities_monotone_in_N():
    primes = [31, 61, 127, 251, 509, 1009]
    plans = [quiet_plan(make_params(), 1.0, 3, N) for N in primes]
    n2 = [p.N2 for p in plans]
    assert all(a < b for a, b in zip(n2, n2[1:]))
    sizes = [len(p.index_set) for p in plans]
    assert all(a <= b for a, b in zip(sizes, sizes[1:]))


def test_plan_validation():
    p = make_params()
    with pytest.raises(ValueError):
        quiet_plan(p, 1.0, 3, 91)  # 7 * 13
    with pytest.raises(ValueError):
        quiet_plan(p, 1.0, 4, 97)
    with pytest.raises(ValueError):
        quiet_plan(p, 1.0, 1, 97)
    with pytest.raises(ValueError):
        quiet_plan(p, 0.0, 3, 97)


# ---------------------------------------------------------------------------
# rule draws

def test_draw_rules_deterministic():
    plan = quiet_plan(make_params(d=2, gamma=(0.5, 0.5)), 1.0, 5, 101)
    r1 = draw_rules(plan, 42, shifted=False)
    r2 = draw_rules(plan, 42, shifted=False)
    assert [r.z for r in r1] == [r.z for r in r2]
    r3 = draw_rules(plan, 43, shifted=False)
    assert [r.z for r in r1] != [r.z for r in r3]


def test_shifted_draws_share_generators():
    plan = quiet_plan(make_params(d=2, gamma=(0.5, 0.5)), 1.0, 5, 101)
    plain = draw_rules(plan, 7, shifted=False)
    shifted = draw_rules(plan, 7, shifted=True)
    assert [r.z for r in plain] == [r.z for r in shifted]
    assert all(r.shift is None for r in plain)
    for r in shifted:
        assert r.shift is not None
        assert all(0.0 <= s < 1.0 for s in r.shift)
    # distinct repetitions draw distinct generators (overwhelmingly likely)
    assert len({r.z for r in plain}) > 1


# ---------------------------------------------------------------------------
# running

def test_run_reconstructs_in_set_tone():
    plan = quiet_plan(make_params(), 1.0, 3, 97)  # A = {-2..2}
    approx = run(lambda X: np.exp(2j * np.pi * X[:, 0]), plan, seed=0)
    i = plan.index_set.position((1,))
    assert abs(approx.coefficients[i] - 1.0) < 1e-12
    others = np.delete(np.abs(approx.coefficients), i)
    assert others.max() < 1e-12
    # evaluate: the single surviving mode at x = 1/4 gives exp(i pi / 2) = i
    val = evaluate(approx, [[0.25]])[0]
    assert abs(val - 1j) < 1e-12
    assert abs(approx([[0.25]])[0] - val) == 0.0


def test_run_is_deterministic():
    # mass at +-52 aliases into the set {-1, 0, 1} mod 53 and picks up a
    # shift-dependent phase, so different seeds give different coefficients
    plan = quiet_plan(make_params(), 1.0, 3, 53)
    assert [tuple(r) for r in plan.index_set.members] == [(-1,), (0,), (1,)]
    f = lambda X: np.cos(2 * np.pi * X[:, 0]) + 0.4 * np.cos(2 * np.pi * 52 * X[:, 0])
    a1 = run(f, plan, seed=5, shifted=True)
    a2 = run(f, plan, seed=5, shifted=True)
    np.testing.assert_array_equal(a1.coefficients, a2.coefficients)
    a3 = run(f, plan, seed=6, shifted=True)
    assert not np.array_equal(a1.coefficients, a3.coefficients)


def test_run_empty_plan_gives_zero_approximant():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GuaranteeWarning)
        plan = build_plan(make_params(), 1.0, 3, 5)
    approx = run(lambda X: np.exp(2j * np.pi * X[:, 0]), plan, seed=0)
    assert approx.coefficients.shape == (0,)
    assert len(approx.rules) == plan.R
    np.testing.assert_array_equal(evaluate(approx, [[0.1], [0.7]]), [0.0, 0.0])


def test_evaluate_matches_literal_sum(rng):
    plan = quiet_plan(make_params(d=2, gamma=(0.8, 0.8)), 1.0, 3, 101)
    spectrum = random_spectrum(rng, 2, 4, 2)
    approx = run(lambda X: sparse_eval(spectrum, X), plan, seed=1)
    X = rng.random((20, 2))
    recon = {tuple(h): c for h, c in zip(plan.index_set.members, approx.coefficients)}
    np.testing.assert_allclose(evaluate(approx, X), sparse_eval(recon, X), atol=1e-12)


# ---------------------------------------------------------------------------
# the success event

def test_alias_free_majority_one_dim_always_holds():
    plan = quiet_plan(make_params(), 1.0, 5, 97)
    for seed in range(10):
        assert alias_free_majority(plan, draw_rules(plan, seed, shifted=False))


def _tiny_plan_with_set(members):
    params = make_params(d=2, gamma=(1.0, 1.0))
    A = make_index_set(params, members)
    return AlgorithmPlan(params, 1.0, 3, 5, 1.0, 2.0, A, 0.5, 0.5, False)


def test_alias_free_majority_engineered_failure():
    plan = _tiny_plan_with_set([(0, 0), (1, 0), (0, 1)])
    # z = (1, 1) collides (1,0) with (0,1) on every repetition
    bad = [LatticeRule(5, (1, 1))] * 3
    assert not alias_free_majority(plan, bad)
    # z = (1, 2) separates all three residues on every repetition
    good = [LatticeRule(5, (1, 2))] * 3
    assert alias_free_majority(plan, good)
    # two good draws out of three make a majority
    assert alias_free_majority(plan, [bad[0], good[0], good[0]])
    assert not alias_free_majority(plan, [bad[0], bad[0], good[0]])


def test_alias_free_majority_empty_set_trivially_holds():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GuaranteeWarning)
        plan = build_plan(make_params(), 1.0, 3, 5)
    assert alias_free_majority(plan, draw_rules(plan, 0, shifted=False))


# ---------------------------------------------------------------------------
# plan search

def test_search_finds_guaranteed_plan():
    plan = search_guaranteed_plan(make_params(), 0.2, [4.0], [15], [9941])
    assert plan is not None
    assert plan.guaranteed
    assert plan.N == 9941 and plan.R == 15 and plan.tau == 4.0
    assert plan.eps2 == pytest.approx(0.0827666051552976, rel=1e-12)
    assert plan.eps2 <= 0.2


def test_search_returns_none_when_hopeless():
    assert search_guaranteed_plan(make_params(), 0.2, [1.0], [3], [97]) is None


def test_search_prefers_smaller_N():
    plan = search_guaranteed_plan(make_params(), 0.5, [4.0], [15, 17], [9941, 10007])
    assert plan.N == 9941
    assert plan.R == 15


# ---------------------------------------------------------------------------
# serialization

def test_plan_to_dict_fields():
    doc = plan_to_dict(quiet_plan(make_params(), 1.0, 3, 97))
    assert doc["d"] == 1 and doc["N"] == 97 and doc["R"] == 3
    assert doc["index_set_size"] == 5
    assert doc["N2"] == pytest.approx(2.906840051932752)
    assert doc["guaranteed"] is False
    assert doc["total_evaluations"] == 291


def test_plan_dict_is_strict_json_even_without_certificate():
    # an empty-set plan has unbounded eps; the dict must still serialize to
    # RFC-valid JSON (null, not the Infinity literal jq and friends reject)
    doc = plan_to_dict(quiet_plan(make_params(), 1.0, 3, 5))
    assert doc["eps1"] is None and doc["eps2"] is None
    text = json.dumps(doc)
    json.loads(text, parse_constant=lambda s: pytest.fail(f"non-strict literal {s}"))


def test_json_roundtrip(rng):
    plan = quiet_plan(make_params(d=2, gamma=(0.7, 0.7)), 1.0, 3, 53)
    spectrum = random_spectrum(rng, 2, 3, 2)
    approx = run(lambda X: sparse_eval(spectrum, X), plan, seed=9, shifted=True)
    text = approximant_to_json(approx)
    back = approximant_from_json(text)
    np.testing.assert_array_equal(back.coefficients, approx.coefficients)
    assert back.seed == 9 and back.shifted is True
    assert [r.z for r in back.rules] == [r.z for r in approx.rules]
    for r1, r2 in zip(back.rules, approx.rules):
        np.testing.assert_array_equal(r1.shift, r2.shift)
    X = rng.random((7, 2))
    np.testing.assert_array_equal(evaluate(back, X), evaluate(approx, X))


def test_json_detects_tampered_index_set(rng):
    plan = quiet_plan(make_params(), 1.0, 3, 97)
    approx = run(lambda X: np.exp(2j * np.pi * X[:, 0]), plan, seed=0)
    doc = json.loads(approximant_to_json(approx))
    doc["index_set"][0] = [40]
    with pytest.raises(ValueError):
        approximant_from_json(json.dumps(doc))
