import numpy as np
import pytest

from synphi import (
    ArgumentError,
    CovarianceModel,
    DiscreteDistribution,
    DynamicalSystem,
    EstimatorConfig,
    TransitionModel,
    conditional_mi,
    delta_synergy,
    delta_synergy_closed_form,
    entropy,
    independent_twin,
    joint_past_future,
    make_system_x,
    make_system_y,
    measure_bundle,
    measure_bundle_gaussian,
    pair_bundle,
    past_future_structure,
    phi_wms,
    random_system,
    redundancy_mmi,
    single_source_mi,
    synergy_mmi,
    temporal_mi,
    uniform_distribution,
    with_stationary_input,
)

TOL = 1e-9


def jpf_x():
    return joint_past_future(make_system_x())


def jpf_y():
    return joint_past_future(make_system_y())


def persistent_copies():
    # two elements that both carry one persistent bit: ({0,0} or {1,1}) forever
    model = TransitionModel((2, 2), np.eye(4))
    inp = DiscreteDistribution((("a", 2), ("b", 2)), [0.5, 0.0, 0.0, 0.5])
    return DynamicalSystem(model, inp)


def memoryless_pair():
    rows = np.full((4, 4), 0.25)
    return DynamicalSystem(
        TransitionModel((2, 2), rows), uniform_distribution((("a", 2), ("b", 2)))
    )


class TestStructureParsing:
    def test_basic_split(self):
        st = past_future_structure(("a_t", "b_t", "a_t+1", "b_t+1"))
        assert st.bases == ("a", "b")
        assert st.lag == 1

    def test_underscored_base_names(self):
        st = past_future_structure(("left_ctx_t", "left_ctx_t+2"))
        assert st.bases == ("left_ctx",)
        assert st.lag == 2

    def test_missing_suffix_rejected(self):
        with pytest.raises(ArgumentError):
            past_future_structure(("a_t", "b"))

    def test_unpaired_elements_rejected(self):
        with pytest.raises(ArgumentError):
            past_future_structure(("a_t", "b_t+1"))

    def test_mixed_lags_rejected(self):
        with pytest.raises(ArgumentError):
            past_future_structure(("a_t", "b_t", "a_t+1", "b_t+2"))


class TestToyValues:
    def test_flip_system(self):
        jpf = jpf_x()
        assert temporal_mi(jpf) == pytest.approx(2.0, abs=TOL)
        assert phi_wms(jpf) == pytest.approx(0.0, abs=TOL)
        assert redundancy_mmi(jpf) == pytest.approx(0.0, abs=TOL)
        assert synergy_mmi(jpf) == pytest.approx(1.0, abs=TOL)

    def test_parity_system(self):
        jpf = jpf_y()
        assert temporal_mi(jpf) == pytest.approx(1.0, abs=TOL)
        assert phi_wms(jpf) == pytest.approx(1.0, abs=TOL)
        assert redundancy_mmi(jpf) == pytest.approx(0.0, abs=TOL)
        assert synergy_mmi(jpf) == pytest.approx(1.0, abs=TOL)

    def test_parity_twin_all_zero(self):
        jpf = joint_past_future(independent_twin(make_system_y()))
        assert temporal_mi(jpf) == pytest.approx(0.0, abs=TOL)
        assert phi_wms(jpf) == pytest.approx(0.0, abs=TOL)
        assert synergy_mmi(jpf) == pytest.approx(0.0, abs=TOL)

    def test_parity_marginal_pair_is_uniform(self):
        # no per-element autocorrelation: (y1_t, y1_t+1) is uniform over 4 states
        from synphi import marginalize

        pair = marginalize(jpf_y(), ("y1_t", "y1_t+1"))
        assert np.allclose(pair.probs, 0.25)

    def test_single_source_values(self):
        assert single_source_mi(jpf_x(), 0) == pytest.approx(1.0, abs=TOL)
        assert single_source_mi(jpf_y(), 0) == pytest.approx(0.0, abs=TOL)
        assert single_source_mi(jpf_y(), 1) == pytest.approx(0.0, abs=TOL)
        twin = joint_past_future(independent_twin(make_system_y()))
        assert single_source_mi(twin, 0) == pytest.approx(0.0, abs=TOL)

    def test_persistent_copies_negative_phi_and_full_redundancy(self):
        jpf = joint_past_future(persistent_copies())
        assert phi_wms(jpf) == pytest.approx(-1.0, abs=TOL)
        assert redundancy_mmi(jpf) == pytest.approx(1.0, abs=TOL)

    def test_memoryless_pair_has_no_synergy(self):
        assert synergy_mmi(joint_past_future(memoryless_pair())) == pytest.approx(
            0.0, abs=TOL
        )

    def test_profiles_collide_while_phi_separates(self):
        bx = measure_bundle(jpf_x())
        by = measure_bundle(jpf_y())
        assert (bx.redundancy_mmi, bx.synergy_mmi) == (by.redundancy_mmi, by.synergy_mmi)
        assert abs(bx.phi_wms - by.phi_wms) == 1.0


class TestMeasureBundle:
    def test_fields_match_individual_operations(self):
        for seed in range(10):
            jpf = joint_past_future(random_system((2, 2), seed=seed, concentration=0.6))
            b = measure_bundle(jpf)
            assert b.temporal_mi == temporal_mi(jpf)
            assert b.phi_wms == phi_wms(jpf)
            assert b.redundancy_mmi == redundancy_mmi(jpf)
            assert b.synergy_mmi == synergy_mmi(jpf)
            assert b.single_source_mi == tuple(
                single_source_mi(jpf, i) for i in range(2)
            )

    def test_bundle_internal_invariants(self):
        for seed in range(50):
            jpf = joint_past_future(random_system((2, 2), seed=seed, concentration=0.4))
            b = measure_bundle(jpf)
            assert b.synergy_mmi == pytest.approx(
                b.temporal_mi - max(b.single_source_mi), abs=TOL
            )
            assert 0.0 <= b.synergy_mmi <= b.temporal_mi + TOL
            assert b.phi_wms <= b.temporal_mi + TOL
            pair_mis = [b.redundancy_mmi] + list(b.self_mi)
            assert b.redundancy_mmi <= min(pair_mis) + TOL

    def test_argmax_ties_take_lowest_index(self):
        assert measure_bundle(jpf_x()).argmax_source == 0

    def test_record_field_names(self):
        record = measure_bundle(jpf_x()).to_record()
        assert set(record) == {
            "tmi", "phi_wms", "red_mmi", "syn_mmi",
            "src_mi_1", "src_mi_2", "self_mi_1", "self_mi_2", "argmax_source",
        }

    def test_single_element_rejected(self):
        model = TransitionModel((2,), np.array([[0.5, 0.5], [0.5, 0.5]]))
        system = DynamicalSystem(model, uniform_distribution((("a", 2),)))
        with pytest.raises(ArgumentError):
            redundancy_mmi(joint_past_future(system))
        with pytest.raises(ArgumentError):
            synergy_mmi(joint_past_future(system))


class TestDeltaSynergy:
    def test_flip_system_unchanged_by_disintegration(self):
        assert delta_synergy(make_system_x()) == pytest.approx(0.0, abs=TOL)

    def test_parity_system_loses_its_bit(self):
        assert delta_synergy(make_system_y()) == pytest.approx(-1.0, abs=TOL)

    def test_closed_form_matches_toys(self):
        assert delta_synergy_closed_form(jpf_x()) == pytest.approx(0.0, abs=TOL)
        assert delta_synergy_closed_form(jpf_y()) == pytest.approx(-1.0, abs=TOL)

    def test_closed_form_zero_for_memoryless_pair(self):
        assert delta_synergy_closed_form(
            joint_past_future(memoryless_pair())
        ) == pytest.approx(0.0, abs=TOL)

    def test_closed_form_identity_weaker_self_minus_synergy(self):
        # chain-rule equivalent: closed form == self MI of the non-argmax
        # source minus the synergy
        for seed in range(300):
            system = random_system((2, 2), seed=seed, concentration=0.5)
            jpf = joint_past_future(system)
            b = measure_bundle(jpf)
            weaker = b.self_mi[1 - b.argmax_source]
            assert delta_synergy_closed_form(jpf) == pytest.approx(
                weaker - b.synergy_mmi, abs=TOL
            )

    def test_closed_form_needs_two_elements(self):
        jpf = joint_past_future(random_system((2, 2, 2), seed=0, concentration=1.0))
        with pytest.raises(ArgumentError):
            delta_synergy_closed_form(jpf)

    def test_uniform_input_never_gains_synergy(self):
        # with product inputs the instantaneous coupling term vanishes, so
        # disintegration can only remove synergy
        for seed in range(100):
            system = random_system((2, 2), seed=seed, concentration=0.2)
            assert delta_synergy(system) <= TOL

    def test_sign_freedom_under_stationary_inputs(self):
        deltas = []
        for seed in range(300):
            system = with_stationary_input(
                random_system((2, 2), seed=seed, concentration=0.2)
            )
            deltas.append(delta_synergy(system))
        assert max(deltas) > 0.01
        assert min(deltas) < -0.01


@pytest.fixture(scope="module")
def systems():
    out = []
    for seed in range(200):
        conc = (0.1, 1.0, 10.0)[seed % 3]
        out.append(random_system((2, 2), seed=seed, concentration=conc))
    return out


class TestIdentitySuites:
    def test_chain_rule_decomposition(self, systems):
        # I(X_t; X_t+1) = I(X1_t; X_t+1) + I(X2_t; X_t+1 | X1_t)
        for system in systems:
            jpf = joint_past_future(system)
            st = past_future_structure(jpf.names)
            total = temporal_mi(jpf)
            part = single_source_mi(jpf, 0) + conditional_mi(
                jpf, (st.past[1],), st.future, (st.past[0],)
            )
            assert total == pytest.approx(part, abs=TOL)

    def test_factorisation_on_product_systems(self, systems):
        # a product system's temporal MI splits over single sources
        for system in systems:
            twin = independent_twin(system)
            jpf = joint_past_future(twin)
            assert temporal_mi(jpf) == pytest.approx(
                single_source_mi(jpf, 0) + single_source_mi(jpf, 1), abs=TOL
            )

    def test_synergy_as_entropy_difference(self, systems):
        # tmi - max_i src_i = H(future | argmax past) - H(future | all past)
        for system in systems:
            jpf = joint_past_future(system)
            b = measure_bundle(jpf)
            st = past_future_structure(jpf.names)
            a = st.past[b.argmax_source]
            h_given_best = entropy(jpf, st.future + (a,)) - entropy(jpf, (a,))
            h_given_all = entropy(jpf) - entropy(jpf, st.past)
            assert b.temporal_mi - max(b.single_source_mi) == pytest.approx(
                h_given_best - h_given_all, abs=TOL
            )

    def test_synergy_as_conditional_mi(self, systems):
        # synergy equals the non-argmax source's conditional MI on the future
        for system in systems:
            jpf = joint_past_future(system)
            b = measure_bundle(jpf)
            st = past_future_structure(jpf.names)
            other = st.past[1 - b.argmax_source]
            best = st.past[b.argmax_source]
            assert b.synergy_mmi == pytest.approx(
                conditional_mi(jpf, (other,), st.future, (best,)), abs=TOL
            )

    def test_twin_has_zero_integration(self, systems):
        for system in systems:
            twin = independent_twin(system)
            assert phi_wms(joint_past_future(twin)) == pytest.approx(0.0, abs=TOL)


class TestGaussianBundle:
    def cov(self, phi=0.6, rho=0.5):
        same = np.array([[1.0, rho], [rho, 1.0]])
        lag = np.full((2, 2), rho * phi)
        sigma = np.block([[same, lag], [lag.T, same]])
        return CovarianceModel(("a_t", "b_t", "a_t+1", "b_t+1"), sigma)

    def test_matches_direct_gaussian_calls(self):
        from synphi import gaussian_mi

        cov = self.cov()
        b = measure_bundle_gaussian(cov)
        assert b.temporal_mi == gaussian_mi(cov, ("a_t", "b_t"), ("a_t+1", "b_t+1"))
        assert b.self_mi[0] == gaussian_mi(cov, ("a_t",), ("a_t+1",))
        assert b.single_source_mi[1] == gaussian_mi(cov, ("b_t",), ("a_t+1", "b_t+1"))

    def test_closed_form_identity_holds_for_gaussian(self):
        cov = self.cov()
        b = measure_bundle_gaussian(cov)
        weaker = b.self_mi[1 - b.argmax_source]
        assert delta_synergy_closed_form(cov) == pytest.approx(
            weaker - b.synergy_mmi, abs=TOL
        )


class TestPairBundle:
    def test_discrete_requires_bins(self):
        with pytest.raises(ArgumentError):
            EstimatorConfig(kind="discrete")

    def test_unknown_kind_rejected(self):
        with pytest.raises(ArgumentError):
            EstimatorConfig(kind="copula")

    def test_tags(self):
        assert EstimatorConfig("gaussian").tag == "gaussian"
        assert EstimatorConfig("discrete", bins=4).tag == "discrete(4)"

    def test_gaussian_pair_bundle_on_known_covariance(self, rng):
        # estimated bundle approaches the exact covariance bundle
        n = 60_000
        z = rng.standard_normal(n + 1)
        a = z[:-1]
        b_ch = 0.8 * z[:-1] + 0.6 * rng.standard_normal(n)
        est = pair_bundle(a, b_ch, EstimatorConfig("gaussian"), names=("a", "b"))
        assert est.temporal_mi < 0.02  # white channels carry no lagged information
        assert abs(est.synergy_mmi) < 0.02

    def test_discrete_pair_bundle_equals_manual_route(self, system_y):
        from synphi import empirical_joint, simulate

        series = simulate(system_y, 5_000, seed=1)
        cfg = EstimatorConfig("discrete", bins=2)
        via_pair = pair_bundle(series[0], series[1], cfg, names=("y1", "y2"))
        manual = measure_bundle(empirical_joint(series, 1, names=("y1", "y2")))
        assert via_pair == manual
