import numpy as np
import pytest

from qvl import (
    DomainError,
    OptimizerConfig,
    alpha_from_measures,
    correlation_tensor,
    density,
    flatten,
    flattening_spectra,
    gamma_r,
    gram_cubic,
    make_state,
    measure_set,
    mermin_bound_check,
    random_params,
    single_measure_slice,
)
from qvl.verify import canonical_tensor_entries, first_axis_gram_entries

from helpers import PAULI, kron3


class TestCorrelationTensor:
    def test_product_state_single_entry(self, product_state):
        tensor = correlation_tensor(density(make_state(product_state)))
        expected = np.zeros((3, 3, 3))
        expected[2, 2, 2] = 1.0
        assert np.max(np.abs(tensor - expected)) < 1e-14

    def test_xxx_and_zzz_forms(self, corpus):
        for p in corpus[:40]:
            tensor = correlation_tensor(density(make_state(p)))
            assert tensor[0, 0, 0] == pytest.approx(2 * p.lambda0 * p.lambda4, abs=1e-12)
            assert tensor[2, 2, 2] == pytest.approx(
                1 - 2 * p.lambda1**2 - 2 * p.lambda4**2, abs=1e-12
            )

    def test_full_closed_form_table(self, corpus):
        for p in corpus[:60]:
            tensor = correlation_tensor(density(make_state(p)))
            assert np.max(np.abs(tensor - canonical_tensor_entries(p))) < 1e-12

    def test_matches_explicit_traces(self):
        rho = density(make_state(random_params(5)))
        tensor = correlation_tensor(rho)
        for i in range(3):
            for j in range(3):
                for k in range(3):
                    direct = np.trace(rho @ kron3(PAULI[i], PAULI[j], PAULI[k])).real
                    assert tensor[i, j, k] == pytest.approx(direct, abs=1e-12)

    def test_entries_bounded(self, corpus):
        for p in corpus[:40]:
            tensor = correlation_tensor(density(make_state(p)))
            assert np.max(np.abs(tensor)) <= 1 + 1e-10

    def test_wrong_shape_rejected(self):
        with pytest.raises(DomainError):
            correlation_tensor(np.eye(4) / 4)


class TestFlatten:
    def test_ghz_first_axis_x_row(self, ghz):
        tensor = correlation_tensor(density(make_state(ghz)))
        f1 = flatten(tensor, 1)
        # x row carries +1 at columns (x,x) and -1 at (y,y) only
        assert f1[0, 0] == pytest.approx(1.0)
        assert f1[0, 4] == pytest.approx(-1.0)
        assert np.count_nonzero(np.abs(f1[0]) > 1e-12) == 2

    def test_zero_tensor(self):
        assert np.all(flatten(np.zeros((3, 3, 3)), 2) == 0)

    @pytest.mark.parametrize("axis,transpose", [(1, (0, 1, 2)), (2, (1, 0, 2)), (3, (2, 0, 1))])
    def test_rows_are_axis_slices(self, axis, transpose):
        tensor = correlation_tensor(density(make_state(random_params(9))))
        f = flatten(tensor, axis)
        reference = tensor.transpose(transpose)
        for row in range(3):
            assert np.array_equal(f[row], reference[row].ravel())

    def test_bad_axis_rejected(self):
        with pytest.raises(DomainError):
            flatten(np.zeros((3, 3, 3)), 0)


class TestGramCubic:
    def test_ghz_first_axis_roots(self, ghz):
        f1 = flatten(correlation_tensor(density(make_state(ghz))), 1)
        spec = gram_cubic(f1)
        assert spec.alpha1 == pytest.approx(-4.0, abs=1e-12)
        # double root at 2: coefficient-based roots keep ~sqrt(eps) accuracy
        assert np.sort(spec.roots_descending)[::-1] == pytest.approx(
            [2.0, 2.0, 0.0], abs=1e-7
        )

    def test_product_state_roots(self, product_state):
        f1 = flatten(correlation_tensor(density(make_state(product_state))), 1)
        spec = gram_cubic(f1)
        assert np.sort(spec.roots_descending)[::-1] == pytest.approx(
            [1.0, 0.0, 0.0], abs=1e-9
        )

    def test_degenerate_spectrum_triple_root(self):
        spec = gram_cubic(np.zeros((3, 9)))
        assert spec.theta == 0.0
        assert spec.roots_descending == (0.0, 0.0, 0.0)

    def test_matches_eigensolver_on_random_grams(self):
        rng = np.random.default_rng(11)
        for _ in range(400):
            f = rng.uniform(-1.0, 1.0, (3, 9)) / 3.0
            spec = gram_cubic(f)
            roots = np.sort(spec.roots_descending)
            direct = np.sort(np.linalg.eigvalsh(f @ f.T))
            assert np.max(np.abs(roots - direct)) < 1e-9

    def test_matches_eigensolver_on_state_flattenings(self, corpus):
        # near-degenerate Gram spectra limit coefficient-based roots to ~1e-8
        for p in corpus[:60]:
            tensor = correlation_tensor(density(make_state(p)))
            for axis in (1, 2, 3):
                f = flatten(tensor, axis)
                roots = np.sort(gram_cubic(f).roots_descending)
                direct = np.sort(np.linalg.eigvalsh(f @ f.T))
                assert np.max(np.abs(roots - direct)) < 1e-7

    def test_invariants(self, corpus):
        for p in corpus[:40]:
            tensor = correlation_tensor(density(make_state(p)))
            for axis in (1, 2, 3):
                f = flatten(tensor, axis)
                spec = gram_cubic(f)
                assert spec.discriminant <= 1e-10
                assert spec.x1 >= spec.x3 >= spec.x2 >= -1e-8
                assert 0.0 <= spec.theta <= np.pi / 3 + 1e-12
                m = f @ f.T
                assert spec.x1 + spec.x2 + spec.x3 == pytest.approx(np.trace(m), abs=1e-9)
                assert spec.x1 * spec.x2 * spec.x3 == pytest.approx(
                    np.linalg.det(m), abs=1e-9
                )
                for root in spec.roots_descending:
                    residual = (
                        root**3 + spec.alpha1 * root**2 + spec.alpha2 * root + spec.alpha3
                    )
                    assert abs(residual) < 1e-8

    def test_wrong_shape_rejected(self):
        with pytest.raises(DomainError):
            gram_cubic(np.zeros((3, 3)))


class TestGammaR:
    def test_ghz(self, ghz):
        assert gamma_r(ghz) == pytest.approx(4.0, abs=1e-9)

    def test_product_state(self, product_state):
        assert gamma_r(product_state) == pytest.approx(2.0, abs=1e-9)

    def test_three_tangle_slice_closed_form(self):
        # on the E4 slice the Gram spectrum is {2v, 2v, 1-v}, so the bound is
        # 2*sqrt(1+v) below v = 1/3 and 4*sqrt(v) above it
        for v in np.linspace(0.0, 1.0, 21):
            expected = 2 * np.sqrt(1 + v) if v < 1 / 3 else 4 * np.sqrt(v)
            assert gamma_r(single_measure_slice(4, v)) == pytest.approx(
                expected, abs=1e-7
            )

    def test_nondecreasing_on_three_tangle_slice(self):
        values = [gamma_r(single_measure_slice(4, v)) for v in np.linspace(0, 1, 51)]
        assert np.min(np.diff(values)) > -1e-8


class TestAlphaFromMeasures:
    def test_ghz(self, ghz):
        a1, a2, a3 = alpha_from_measures(measure_set(ghz), 1)
        assert a1 == pytest.approx(-4.0)
        assert a2 == pytest.approx(4.0)
        assert a3 == pytest.approx(0.0, abs=1e-12)

    def test_product_state(self, product_state):
        assert alpha_from_measures(measure_set(product_state), 1) == pytest.approx(
            (-1.0, 0.0, 0.0)
        )

    def test_bad_axis_rejected(self, ghz):
        with pytest.raises(DomainError):
            alpha_from_measures(measure_set(ghz), 4)

    def test_matches_characteristic_coefficients(self, corpus):
        for p in corpus[:80]:
            ms = measure_set(p)
            for axis, spec in zip((1, 2, 3), flattening_spectra(p)):
                a1, a2, a3 = alpha_from_measures(ms, axis)
                assert a1 == pytest.approx(spec.alpha1, abs=1e-9)
                assert a2 == pytest.approx(spec.alpha2, abs=1e-9)
                assert a3 == pytest.approx(spec.alpha3, abs=1e-9)

    def test_leading_coefficient_axis_independent(self, corpus):
        for p in corpus[:80]:
            specs = flattening_spectra(p)
            alpha1s = [s.alpha1 for s in specs]
            assert max(alpha1s) - min(alpha1s) < 1e-10
            ms = measure_set(p)
            assert -alpha1s[0] == pytest.approx(1 + ms.CT2, abs=1e-10)

    def test_second_coefficient_nonnegative(self, corpus):
        for p in corpus:
            for spec in flattening_spectra(p):
                assert spec.alpha2 >= -1e-10


class TestGramClosedForms:
    def test_first_axis_entries(self, corpus):
        for p in corpus[:60]:
            f1 = flatten(correlation_tensor(density(make_state(p))), 1)
            assert np.max(np.abs(f1 @ f1.T - first_axis_gram_entries(p))) < 1e-10


class TestMerminBoundCheck:
    def test_ghz_endpoint(self, warm_jit, ghz):
        gamma, bound, holds = mermin_bound_check(ghz, OptimizerConfig(restarts=16, seed=3))
        assert gamma == pytest.approx(4.0, abs=1e-6)
        assert bound == pytest.approx(4.0, abs=1e-9)
        assert holds

    def test_product_endpoint(self, warm_jit, product_state):
        gamma, bound, holds = mermin_bound_check(
            product_state, OptimizerConfig(restarts=16, seed=3)
        )
        assert gamma == pytest.approx(2.0, abs=1e-6)
        assert bound == pytest.approx(2.0, abs=1e-9)
        assert holds

    def test_random_states_bounded(self, warm_jit):
        config = OptimizerConfig(restarts=16, seed=0)
        for seed in range(8):
            gamma, bound, holds = mermin_bound_check(random_params(seed), config)
            assert holds, f"seed {seed}: gamma {gamma} exceeds bound {bound}"
