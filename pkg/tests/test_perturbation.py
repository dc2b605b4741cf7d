import numpy as np
import pytest

from ptlind import (
    DegenerateAtEvaluationPoint,
    LindbladModel,
    ValidationError,
    build_superoperator,
    degeneracy_report,
    dissipator_superoperator,
    eig_biortho,
    find_gamma_pt,
    heuristic_gamma_pt,
    population_matrix,
    sector_restrict,
    velocity_check,
)
from ptlind.xxz import XXZParams, sector_basis, xxz_model

from conftest import single_qubit


class TestPopulationMatrix:
    def test_single_qubit_matrix(self):
        rep = population_matrix(single_qubit(omega=1.0, gamma=0.1))
        # energy order is ascending: (ground, excited)
        assert np.allclose(rep.energies, [-0.5, 0.5])
        assert np.abs(rep.v_matrix - np.array([[1.0, 2.0], [0.0, -1.0]])).max() <= 1e-12
        assert rep.reality_defect <= 1e-12
        assert rep.symmetry_defect == pytest.approx(2.0)  # one-sided decay is not symmetric
        xi = sorted(rep.xi.real)
        assert np.allclose(xi, [-1.0, 1.0], atol=1e-12)

    @pytest.mark.parametrize("n,mu", [(2, 0.0), (2, 0.5), (3, 0.5), (4, 1.0)])
    def test_xxz_real_and_symmetric(self, n, mu):
        rep = population_matrix(xxz_model(XXZParams(n, 0.5, mu, 0.1)))
        assert rep.symmetry_defect <= 1e-12
        assert rep.reality_defect <= 1e-12

    def test_column_sums_and_offdiagonal_sign(self):
        rep = population_matrix(xxz_model(XXZParams(3, 0.5, 0.7, 0.1)))
        n = rep.v_matrix.shape[0]
        assert np.abs(rep.v_matrix.sum(axis=0) - 1.0).max() <= 1e-10
        off = rep.v_matrix - np.diag(np.diag(rep.v_matrix))
        assert off.min() >= -1e-12

    def test_xi_contains_steady_direction_and_is_real(self):
        rep = population_matrix(xxz_model(XXZParams(3, 0.5, 0.5, 0.1)))
        assert np.min(np.abs(rep.xi - 1.0)) <= 1e-9
        if rep.symmetry_defect <= 1e-10:
            assert np.abs(rep.xi.imag).max() <= 1e-9

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_first_order_rates_match_full_spectrum(self, n):
        gamma = 1e-4
        rep = population_matrix(xxz_model(XXZParams(n, 0.5, 1.0, gamma)))
        sup = build_superoperator(xxz_model(XXZParams(n, 0.5, 1.0, gamma)))
        dec = eig_biortho(sector_restrict(sup, sector_basis(n, 0)))
        scale = max(1.0, dec.spectral_radius)
        real_modes = np.sort(
            [lam.real for lam in dec.eigenvalues if abs(lam.imag) <= 1e-10 * scale]
        )
        assert real_modes.size == 2**n
        predicted = np.sort(rep.xi.real)
        assert np.abs((real_modes + gamma) / gamma - predicted).max() <= 1e-2


class TestVelocityCheck:
    def test_xxz_finite_difference_agreement(self):
        model = xxz_model(XXZParams(3, 0.5, 1.0, 0.01))
        rep = velocity_check(model, dgamma=1e-5, sector=sector_basis(3, 0))
        assert rep.max_fd_discrepancy <= 1e-5
        assert rep.max_h_im_velocity is not None
        assert rep.max_h_im_velocity <= 1e-8
        # every vertical-line mode of the three-site chain is two-fold
        # degenerate (mirror blocks of the conserved magnetization), so the
        # on-line velocity claim is vacuous there
        assert rep.max_v_re_velocity is None

    def test_vertical_line_confinement_where_modes_are_simple(self):
        model = xxz_model(XXZParams(2, 0.5, 1.0, 0.01))
        rep = velocity_check(model, dgamma=1e-5, sector=sector_basis(2, 0))
        assert rep.n_on_v > 0
        assert rep.max_v_re_velocity <= 1e-8

    def test_steady_state_velocity_vanishes(self):
        for gamma in (0.01, 0.3):
            model = xxz_model(XXZParams(2, 0.5, 0.7, gamma))
            rep = velocity_check(model, dgamma=1e-6, sector=sector_basis(2, 0))
            k0 = min(rep.entries, key=lambda e: abs(e[1]))
            assert abs(k0[2]) <= 1e-10

    def test_single_qubit_fast_mode_velocity(self):
        rep = velocity_check(single_qubit(gamma=0.1), dgamma=1e-6)
        fast = min(rep.entries, key=lambda e: abs(e[1] + 0.2))
        assert abs(fast[2] - (-2.0)) <= 1e-9

    def test_fully_degenerate_model_rejected(self):
        model = LindbladModel(np.zeros((2, 2)), (np.zeros((2, 2)),), 0.5)
        with pytest.raises(DegenerateAtEvaluationPoint):
            velocity_check(model, dgamma=1e-4)


class TestDegeneracyReport:
    def test_xxz_two_sites(self):
        h = xxz_model(XXZParams(2, 0.5, 0.0, 0.0)).hamiltonian
        rep = degeneracy_report(h)
        assert np.allclose(np.sort(rep.energies), [-2.5, 0.5, 0.5, 1.5])
        assert len(rep.degenerate_pairs) == 1

    def test_clean_spectrum(self):
        rep = degeneracy_report(np.diag([0.0, 1.0, 3.0]), tol=1e-9)
        assert rep.degenerate_pairs == ()
        assert rep.degenerate_gap_pairs == ()

    def test_equispaced_gap_degeneracy(self):
        rep = degeneracy_report(np.diag([0.0, 1.0, 2.0]), tol=1e-9)
        assert rep.degenerate_pairs == ()
        assert ((0, 1), (1, 2)) in rep.degenerate_gap_pairs

    def test_block_restriction(self):
        # the two degenerate levels carry different conserved labels
        rep = degeneracy_report(np.diag([0.0, 1.0, 1.0]), tol=1e-9, blocks=[0, 0, 1])
        assert rep.degenerate_pairs == ()

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValidationError):
            degeneracy_report(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestHeuristicThreshold:
    def _estimate(self, n):
        model = xxz_model(XXZParams(n, 0.5, 1.0, 1.0))
        return heuristic_gamma_pt(dissipator_superoperator(model), model.hamiltonian)

    def test_order_of_magnitude_against_bisection(self):
        est = self._estimate(4)
        measured = find_gamma_pt(4, 0.5, 1.0, 0.02, 0.2, rel_precision=0.05).gamma_pt
        ratio = est / measured
        assert 1e-2 <= ratio <= 1e2

    def test_doubling_energies_quadruples_estimate(self):
        model = xxz_model(XXZParams(3, 0.5, 1.0, 1.0))
        dis = dissipator_superoperator(model)
        base = heuristic_gamma_pt(dis, model.hamiltonian)
        doubled = heuristic_gamma_pt(dis, 2.0 * model.hamiltonian)
        assert doubled / base == pytest.approx(4.0, rel=1e-9)

    def test_monotone_decrease_with_length(self):
        estimates = [self._estimate(n) for n in (2, 3, 4)]
        assert estimates[0] > estimates[1] > estimates[2]

    def test_zero_span_rejected(self):
        model = single_qubit(gamma=0.1)
        dis = dissipator_superoperator(model)
        with pytest.raises(ValidationError):
            heuristic_gamma_pt(dis, np.eye(2))


def test_traceless_dissipator_shift_matches_population_matrix():
    # V with the identity shift equals V of the bare dissipator plus I
    model = xxz_model(XXZParams(2, 0.5, 0.5, 0.1))
    rep = population_matrix(model)
    dis = dissipator_superoperator(model).matrix
    energies, psi = np.linalg.eigh(model.hamiltonian)
    d_vecs = np.column_stack(
        [np.outer(psi[:, j], psi[:, j].conj()).reshape(-1) for j in range(4)]
    )
    v_bare = (d_vecs.conj().T @ dis @ d_vecs).real
    assert np.abs(rep.v_matrix - (v_bare + np.eye(4))).max() < 1e-12
