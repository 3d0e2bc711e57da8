import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from beta4ucs.beta_math import (Beta4Params, reset_special_function_calls,
                                special_function_calls)
from beta4ucs.engine import Beta4UCS, EngineConfig, is_more_general
from beta4ucs.rules import Rule, TriangleSet, make_rule, matching_degree


def model(rep="fbr", n_dims=2, n_classes=2, seed=0, **kw):
    cfg = EngineConfig(representation=rep, **kw)
    return Beta4UCS(cfg, n_dims, n_classes, np.random.default_rng(seed))


def rule_of(params, cls, n_classes=2, **stats):
    r = make_rule(tuple(Beta4Params(*p) for p in params), cls, n_classes)
    for k, v in stats.items():
        setattr(r, k, v)
    return r


def load(m, rules):
    m.load_rules(rules)
    return m


class TestConfig:
    def test_defaults(self):
        cfg = EngineConfig()
        assert cfg.n_max == 2000 and cfg.f0 == 0.99 and cfg.theta_ga == 50
        assert cfg.p_hash == 0.33 and cfg.tol_sub == 0.01 and cfg.s0 == 1.0

    def test_rejects_bad_values(self):
        with pytest.raises(ValueError):
            EngineConfig(chi=1.5)
        with pytest.raises(ValueError):
            EngineConfig(s0=0.5)
        with pytest.raises(ValueError):
            EngineConfig(representation="nope")


class TestMatchSet:
    def test_empty_population(self):
        m = model()
        rows, mu = m.build_match_set(np.array([0.5, 0.5]))
        assert rows.size == 0

    def test_all_space_rule_always_matches(self):
        m = load(model(), [rule_of([(1, 1, 0, 1), (1, 1, 0, 1)], 0)])
        for x in np.random.default_rng(1).random((50, 2)):
            rows, mu = m.build_match_set(x)
            assert rows.size == 1 and mu[rows[0]] == 1.0

    def test_interval_exclusion(self):
        m = load(model(), [rule_of([(1, 1, 0.2, 0.4), (1, 1, 0, 1)], 0)])
        rows, _ = m.build_match_set(np.array([0.5, 0.5]))
        assert rows.size == 0

    def test_missing_dimension_contributes_one(self):
        m = load(model(), [rule_of([(1, 1, 0.2, 0.4), (2, 2, 0, 1)], 0)])
        x = np.array([np.nan, 0.5])
        mu = m.match_degrees(x, miss=np.array([True, False]))
        assert mu[0] == pytest.approx(1.0)

    def test_agrees_with_scalar_reference(self):
        rng = np.random.default_rng(5)
        rules = []
        for _ in range(40):
            cond = []
            for _ in range(3):
                lo = rng.uniform(-0.5, 0.8)
                up = lo + rng.uniform(0.05, 1.2)
                if rng.random() < 0.5:
                    cond.append((1.0, 1.0, lo, up))
                else:
                    cond.append((rng.uniform(1, 8), rng.uniform(1, 8), lo, up))
            rules.append(rule_of(cond, int(rng.integers(2)), n_classes=2))
        m = load(model(n_dims=3), rules)
        stored = m.to_rules()
        for x in rng.random((100, 3)):
            mu = m.match_degrees(x)
            rows = m.active_rows()
            for r, row in zip(stored, rows):
                assert mu[row] == pytest.approx(matching_degree(r, x), abs=1e-12)

    def test_triangular_agrees_with_scalar_reference(self):
        rng = np.random.default_rng(6)
        rules = []
        for _ in range(30):
            cond = []
            for _ in range(2):
                a = rng.uniform(-0.5, 0.4)
                b = a + rng.uniform(0.01, 0.6)
                c = b + rng.uniform(0.01, 0.6)
                cond.append(TriangleSet(a, b, c))
            rules.append(make_rule(tuple(cond), int(rng.integers(2)), 2))
        m = model(rep="tri")
        m.load_rules(rules)
        rows = m.active_rows()
        for x in rng.random((100, 2)):
            mu = m.match_degrees(x)
            for r, row in zip(m.to_rules(), rows):
                assert mu[row] == pytest.approx(matching_degree(r, x), abs=1e-12)


class TestCovering:
    def test_initial_statistics(self):
        m = model(seed=2)
        m.t = 17
        row = m.covering(np.array([0.3, 0.7]), 1)
        assert m.exp_[row] == 0.0 and m.num[row] == 1 and m.cs[row] == 1.0
        assert m.cm[row].sum() == 0.0 and m.ga_ts[row] == 17
        assert m.cls[row] == 1

    def test_covering_rule_matches_with_degree_one(self):
        for seed in range(20):
            m = model(seed=seed)
            x = np.random.default_rng(seed).random(2)
            m.covering(x, 0)
            mu = m.match_degrees(x)
            assert mu.max() == pytest.approx(1.0)

    def test_s0_one_covering_is_crisp(self):
        m = model(seed=3)
        row = m.covering(np.array([0.5, 0.5]), 0)
        assert not m.fuzzy_any[row]

    def test_s0_large_covering_produces_fuzzy_dims(self):
        hit = False
        for seed in range(10):
            m = model(seed=seed, s0=5.0, p_hash=0.0)
            row = m.covering(np.array([0.5, 0.5]), 0)
            hit = hit or m.fuzzy_any[row]
            assert m.match_degrees(np.array([0.5, 0.5]))[row] == pytest.approx(1.0)
        assert hit

    def test_dont_care_probability(self):
        m = model(seed=11, n_dims=1, p_hash=1.0)
        row = m.covering(np.array([0.5]), 0)
        assert (m.sa[row, 0], m.sb[row, 0], m.lo[row, 0], m.up[row, 0]) \
            == (1.0, 1.0, 0.0, 1.0)

    def test_interval_straddles_x(self):
        m = model(seed=4, n_dims=1, p_hash=0.0)
        row = m.covering(np.array([0.3]), 0)
        assert m.lo[row, 0] < 0.3 < m.up[row, 0]
        assert m.up[row, 0] - 0.3 <= 1.0 + 1e-12  # d <= r0

    def test_rect_representation_never_fuzzy(self):
        m = model(rep="rect", seed=5, s0=5.0, p_hash=0.0)
        row = m.covering(np.array([0.4, 0.6]), 0)
        assert not m.fuzzy_any[row]

    def test_triangular_covering_vertices(self):
        m = model(rep="tri", seed=6, n_dims=1)
        row = m.covering(np.array([0.3]), 0)
        assert -0.5 <= m.va[row, 0] < 0.3
        assert m.vb[row, 0] == 0.3
        assert 0.3 < m.vc[row, 0] <= 1.5


class TestIsMoreGeneral:
    def test_reflexive_on_rectangles(self):
        r = rule_of([(1, 1, 0.1, 0.9)], 0)
        assert is_more_general(r, r, 0.01)

    def test_rectangle_subsumes_contained_fuzzy(self):
        sub = rule_of([(1, 1, 0, 1)], 0)
        tos = rule_of([(2, 2, 0.2, 0.8)], 0)
        assert is_more_general(sub, tos, 0.01)

    def test_kurtosis_condition_blocks(self):
        sub = rule_of([(2, 2, 0, 1)], 0)       # kurtosis 15/7
        tos = rule_of([(1.5, 1.5, 0.1, 0.9)], 0)  # kurtosis 2.0
        assert not is_more_general(sub, tos, 0.01)

    def test_interval_condition_clips_to_unit_range(self):
        sub = rule_of([(1, 1, 0.0, 1.0)], 0)
        tos = rule_of([(1, 1, -0.5, 1.5)], 0)
        assert is_more_general(sub, tos, 0.01)

    def test_mode_condition_applies_only_when_both_fuzzy(self):
        sub = rule_of([(1.2, 1.2, 0, 1)], 0)
        tos = rule_of([(3, 2, 0.2, 0.8)], 0)   # different mode
        assert not is_more_general(sub, tos, 0.01)
        sub_rect = rule_of([(1, 1, 0, 1)], 0)
        assert is_more_general(sub_rect, tos, 0.01)

    def test_matches_engine_row_implementation(self):
        rng = np.random.default_rng(7)
        rules = []
        for _ in range(60):
            lo = rng.uniform(-0.2, 0.5)
            up = lo + rng.uniform(0.1, 1.0)
            a = 1.0 if rng.random() < 0.5 else rng.uniform(1, 5)
            b = 1.0 if rng.random() < 0.5 else rng.uniform(1, 5)
            rules.append(rule_of([(a, b, lo, up)], 0, n_classes=2))
        m = load(model(n_dims=1), rules)
        rows = m.active_rows()
        for i in range(0, 60, 7):
            mask = m._more_general_than_rows(int(rows[i]), rows)
            for j, row in enumerate(rows):
                assert mask[j] == is_more_general(rules[i], rules[j], 0.01)


class TestSubsumption:
    def _population(self):
        general = rule_of([(1, 1, 0, 1), (1, 1, 0, 1)], 0,
                          exp=60.0, fitness=0.995)
        narrow = rule_of([(1, 1, 0.3, 0.6), (1, 1, 0.2, 0.7)], 0)
        other = rule_of([(1, 1, 0.1, 0.9), (1, 1, 0.1, 0.9)], 0)
        return [general, narrow, other]

    def test_absorbs_and_conserves_micro_count(self):
        m = load(model(), self._population())
        before = m.n_micro
        rows = m.active_rows()
        surviving = m.correct_set_subsumption(rows)
        assert m.n_micro == before
        assert m.n_macro == 1
        assert surviving.size == 1
        assert m.num[surviving[0]] == 3

    def test_requires_experience(self):
        rules = self._population()
        rules[0].exp = 10.0
        m = load(model(), rules)
        m.correct_set_subsumption(m.active_rows())
        assert m.n_macro == 3

    def test_requires_fitness_above_f0(self):
        rules = self._population()
        rules[0].fitness = 0.98
        m = load(model(), rules)
        m.correct_set_subsumption(m.active_rows())
        assert m.n_macro == 3

    def test_tie_broken_by_numerosity(self):
        a = rule_of([(1, 1, 0, 1)], 0, exp=60.0, fitness=1.0, num=1)
        b = rule_of([(1, 1, -0.1, 1.1)], 0, exp=60.0, fitness=1.0, num=5)
        c = rule_of([(1, 1, 0.4, 0.6)], 0)
        m = load(model(n_dims=1), [a, b, c])
        rows = m.active_rows()
        surviving = m.correct_set_subsumption(rows)
        kept = [m.num[r] for r in surviving]
        # b (num=5) absorbs both others
        assert m.n_macro == 1 and max(kept) == 7


class TestCrispify:
    def test_eligible_rule_loses_a_fuzzy_dimension(self):
        r = rule_of([(2, 3, 0.1, 0.9), (1, 1, 0, 1)], 0, exp=60.0, fitness=0.995)
        m = load(model(seed=9), [r])
        row = m.active_rows()[0]
        m.crispify(np.array([row]))
        assert not m.fuzzy_any[row]
        assert m.exp_[row] == 0.0 and m.cm[row].sum() == 0.0 and m.fit[row] == 0.0
        assert (m.lo[row, 0], m.up[row, 0]) == (0.1, 0.9)  # interval unchanged

    def test_all_rectangular_rule_untouched(self):
        r = rule_of([(1, 1, 0.1, 0.9)], 0, exp=60.0, fitness=0.995)
        m = load(model(n_dims=1), [r])
        row = m.active_rows()[0]
        m.crispify(np.array([row]))
        assert m.exp_[row] == 60.0

    def test_ineligible_rule_untouched(self):
        r = rule_of([(2, 3, 0.1, 0.9)], 0, exp=60.0, fitness=0.5)
        m = load(model(n_dims=1), [r])
        row = m.active_rows()[0]
        m.crispify(np.array([row]))
        assert m.fuzzy_any[row] and m.exp_[row] == 60.0


class TestDeletion:
    def test_no_deletion_at_capacity(self):
        m = model(n_max=3)
        m.load_rules([rule_of([(1, 1, 0, 1), (1, 1, 0, 1)], 0, num=3)])
        assert m.delete_to_capacity() == []
        assert m.n_micro == 3

    def test_deletes_down_to_capacity(self):
        m = model(n_max=5, seed=13)
        m.load_rules([
            rule_of([(1, 1, 0, 1), (1, 1, 0, 1)], 0, num=4, cs=2.0),
            rule_of([(1, 1, 0.1, 0.9), (1, 1, 0, 1)], 1, num=4, cs=2.0),
        ])
        m.delete_to_capacity()
        assert m.n_micro == 5
        assert m.num[m.active_rows()].sum() == 5

    def test_low_fitness_experienced_rule_preferred(self):
        hits = 0
        for seed in range(200):
            m = model(n_max=2, seed=seed, n_dims=1)
            m.load_rules([
                rule_of([(1, 1, 0, 1)], 0, num=1, cs=1.0, exp=60.0, fitness=0.001),
                rule_of([(1, 1, 0, 1)], 1, num=1, cs=1.0, exp=60.0, fitness=0.9),
                rule_of([(1, 1, 0.2, 0.8)], 0, num=1, cs=1.0, exp=60.0, fitness=0.9),
            ])
            removed = m.delete_to_capacity()
            rows = {int(r) for r in removed}
            if 0 in rows:
                hits += 1
        # the amplified vote makes the weak rule the usual victim
        assert hits > 150


class TestInference:
    def _trained(self):
        m = model(n_dims=1)
        m.load_rules([
            rule_of([(1, 1, 0, 0.5)], 0, exp=20.0, fitness=0.9, num=2),
            rule_of([(1, 1, 0, 0.5)], 1, exp=20.0, fitness=0.3, num=1),
            rule_of([(1, 1, 0.5, 1)], 1, exp=20.0, fitness=0.8, num=1),
        ])
        return m

    def test_argmax_vote(self):
        m = self._trained()
        assert m.infer(np.array([0.25])) == 0
        assert m.infer(np.array([0.75])) == 1

    def test_experience_filter(self):
        m = model(n_dims=1)
        m.load_rules([rule_of([(1, 1, 0, 1)], 1, exp=5.0, fitness=1.0)])
        m.fallback_class = 0
        assert m.infer(np.array([0.5])) == 0  # exp 5 < theta_exp 10

    def test_fallback_when_uncovered(self):
        m = self._trained()
        m.fallback_class = 1
        assert m.infer(np.array([-0.5])) == 1

    def test_tie_breaks_to_smallest_class(self):
        m = model(n_dims=1, n_classes=3)
        m.load_rules([
            rule_of([(1, 1, 0, 1)], 2, n_classes=3, exp=20.0, fitness=0.5),
            rule_of([(1, 1, 0, 1)], 1, n_classes=3, exp=20.0, fitness=0.5),
        ])
        assert m.infer(np.array([0.5])) == 1

    def test_negative_fitness_votes_literally(self):
        m = model(n_dims=1)
        m.load_rules([
            rule_of([(1, 1, 0, 1)], 0, exp=20.0, fitness=-0.5),
            rule_of([(1, 1, 0, 1)], 1, exp=20.0, fitness=0.1),
        ])
        assert m.infer(np.array([0.5])) == 1


def toy_problem(n=300, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.random((n, 2))
    y = (X[:, 0] >= 0.5).astype(np.int64)
    return X, y


class TestTraining:
    def test_learns_a_simple_threshold(self):
        m = model(seed=21, n_max=200)
        X, y = toy_problem()
        m.train(X, y, epochs=15)
        Xt, yt = toy_problem(seed=99)
        assert (m.predict(Xt) == yt).mean() > 0.9

    def test_capacity_invariant(self):
        m = model(seed=22, n_max=50)
        X, y = toy_problem()
        m.train(X, y, epochs=3)
        assert m.n_micro <= 50
        assert m.num[m.active_rows()].sum() == m.n_micro

    def test_deterministic_replay(self):
        X, y = toy_problem()
        out = []
        for _ in range(2):
            m = model(seed=33, n_max=100)
            trace = m.train(X, y, epochs=3)
            out.append((trace, [repr(r) for r in m.to_rules()]))
        assert out[0] == out[1]

    def test_no_special_function_calls_during_training(self):
        reset_special_function_calls()
        m = model(seed=23, n_max=100)
        X, y = toy_problem()
        m.train(X, y, epochs=2)
        m.predict(X)
        assert special_function_calls() == 0

    def test_frozen_rectangular_stays_crisp(self):
        m = model(rep="rect", seed=24, n_max=100)
        X, y = toy_problem()
        m.train(X, y, epochs=3)
        assert m.crisp_fraction() == 1.0

    def test_triangular_trains(self):
        m = model(rep="tri", seed=25, n_max=100)
        X, y = toy_problem()
        trace = m.train(X, y, epochs=3)
        assert m.n_micro <= 100 and len(trace) == 3

    def test_empty_dataset_rejected(self):
        m = model()
        with pytest.raises(ValueError):
            m.train(np.zeros((0, 2)), np.zeros(0, dtype=int))

    def test_trace_shape(self):
        m = model(seed=26, n_max=100)
        X, y = toy_problem(n=50)
        trace = m.train(X, y, epochs=4)
        assert len(trace) == 4
        for epoch, acc, macro, micro, crisp in trace:
            assert 0.0 <= acc <= 1.0 and micro <= 100 and 0.0 <= crisp <= 1.0


class TestGAInvariants:
    def test_mutation_never_breaks_parameter_bounds(self):
        m = model(seed=41, n_max=60, theta_ga=1.0, p_mut=0.5, s0=5.0)
        X, y = toy_problem(n=200, seed=41)
        m.train(X, y, epochs=4)
        rows = m.active_rows()
        assert (m.sa[rows] >= 1.0).all()
        assert (m.sb[rows] >= 1.0).all()
        assert (m.lo[rows] < m.up[rows]).all()

    def test_triangular_mutation_keeps_vertex_order(self):
        m = model(rep="tri", seed=42, n_max=60, theta_ga=1.0, p_mut=0.5)
        X, y = toy_problem(n=200, seed=42)
        m.train(X, y, epochs=4)
        rows = m.active_rows()
        assert (m.va[rows] < m.vb[rows]).all()
        assert (m.vb[rows] < m.vc[rows]).all()

    def test_ga_timestamp_trigger(self):
        m = model(n_dims=1, theta_ga=50.0)
        m.t = 40
        m.load_rules([rule_of([(1, 1, 0, 1)], 0, exp=20.0, fitness=0.9)])
        row = m.active_rows()[0]
        m.ga_ts[row] = 10
        before = m.n_macro
        # mean distance 30 < 50: the training loop would skip the GA
        num_c = m.num[[row]]
        ts_avg = float((m.ga_ts[[row]] * num_c).sum()) / float(num_c.sum())
        assert m.t - ts_avg <= m.cfg.theta_ga
        assert m.n_macro == before
