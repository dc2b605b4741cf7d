import numpy as np
import pytest

from ptlind import (
    LindbladModel,
    NotUnitary,
    build_superoperator,
    check_inversion,
    check_pt,
    check_pt_rows,
    parity_from_pair,
    sector_restrict,
    xxz_parity,
)
from ptlind.operators import SIGMA_PLUS, SIGMA_X, dagger, site_operator, site_reversal
from ptlind.xxz import (
    XXZParams,
    ladder_vectorization_map,
    row_superoperators,
    sector_basis,
    xxz_model,
)

from conftest import random_hermitian, single_qubit


def sigma_z_string(n):
    out = np.eye(2**n, dtype=complex)
    for j in range(1, n + 1):
        out = out @ site_operator("z", j, n)
    return out


class TestParityFromPair:
    def test_identity_pair(self):
        p = parity_from_pair(np.eye(3), np.eye(3))
        assert np.array_equal(p.matrix, np.eye(9))

    def test_sigma_x_pair(self):
        p = parity_from_pair(SIGMA_X, SIGMA_X)
        assert np.linalg.norm(p.matrix @ p.matrix - np.eye(4)) < 1e-14
        assert np.linalg.norm(dagger(p.matrix) @ p.matrix - np.eye(4)) < 1e-14

    def test_raising_operator_rejected(self):
        with pytest.raises(NotUnitary):
            parity_from_pair(SIGMA_PLUS, SIGMA_PLUS)

    def test_unitary_involution_properties(self):
        p = xxz_parity(3)
        m = p.matrix
        eye = np.eye(m.shape[0])
        assert np.linalg.norm(dagger(m) @ m - eye) < 1e-12
        assert np.linalg.norm(dagger(m) - m) < 1e-12  # P^dag = P^-1 = P


class TestXXZParity:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_applied_to_identity_gives_z_string(self, n):
        p = xxz_parity(n)
        out = p.apply(np.eye(2**n, dtype=complex))
        assert np.abs(out - sigma_z_string(n)).max() < 1e-14

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_squares_to_identity(self, n):
        p = xxz_parity(n)
        assert np.linalg.norm(p.matrix @ p.matrix - np.eye(4**n)) < 1e-14

    @pytest.mark.parametrize("n", [2, 3])
    def test_ladder_construction_matches_operator_map(self, n):
        # independent route: build (R prod sz) (x) R on the two-copy space and
        # convert through the spin-flip identification of |psi><phi|
        r = site_reversal(n)
        ladder_form = np.kron(r @ sigma_z_string(n), r)
        pi = ladder_vectorization_map(n)
        converted = pi @ ladder_form @ pi
        assert np.abs(converted - xxz_parity(n).matrix).max() < 1e-14

    def test_commutes_with_sector_restriction(self):
        # the parity maps the zero-magnetization block to itself
        p = xxz_parity(3)
        labels = sector_basis(3, 0)
        restricted = sector_restrict(p.as_superoperator(), labels, tol=1e-12)
        assert np.linalg.norm(restricted.matrix @ restricted.matrix - np.eye(20)) < 1e-12


class TestCheckPT:
    def test_xxz_family_point(self):
        sup = build_superoperator(xxz_model(XXZParams(3, 0.5, 1.0, 0.3)))
        rep = check_pt(sup, xxz_parity(3))
        assert rep.pt_residual <= 1e-12
        assert rep.gamma_bar == pytest.approx(0.3, rel=1e-12)

    def test_closed_system_with_identity_parity(self, rng):
        h = random_hermitian(rng, 4)
        sup = build_superoperator(LindbladModel(h, (np.zeros((4, 4)),), 0.0))
        rep = check_pt(sup, parity_from_pair(np.eye(4), np.eye(4)))
        assert rep.pt_residual <= 1e-14

    def test_one_sided_decay_breaks_it(self):
        sup = build_superoperator(single_qubit(gamma=0.1))
        rep = check_pt(sup, parity_from_pair(SIGMA_X, SIGMA_X))
        assert rep.pt_residual > 0.1

    def test_sector_restricted_check(self):
        sup = build_superoperator(xxz_model(XXZParams(3, 0.5, 0.5, 0.2)))
        sub = sector_restrict(sup, sector_basis(3, 0))
        rep = check_pt(sub, xxz_parity(3))
        assert rep.pt_residual <= 1e-12


class TestCheckPTRows:
    def test_each_row_is_symmetric(self):
        residuals = check_pt_rows(XXZParams(2, 0.5, 1.0, 0.4))
        assert len(residuals) == 3
        assert max(residuals) <= 1e-12

    def test_rows_sum_to_full_generator(self):
        params = XXZParams(3, 0.7, 0.3, 0.9)
        rows = row_superoperators(params)
        total = sum(r.matrix for r in rows)
        direct = build_superoperator(xxz_model(params)).matrix
        assert np.abs(total - direct).max() < 1e-13

    def test_unbiased_driving_rows_are_parity_images(self):
        # at mu = 0 the two jump rows map onto each other under the parity
        params = XXZParams(2, 0.5, 0.0, 0.4)
        residuals = check_pt_rows(params)
        assert max(residuals) <= 1e-12
        row1, row2, row3 = row_superoperators(params)
        p = xxz_parity(2).matrix
        jump3 = row3.matrix + params.gamma * np.eye(16)
        assert np.abs(p @ row2.matrix @ p + jump3).max() < 1e-13


class TestCheckInversion:
    @pytest.mark.parametrize("t", [0.1, 0.25, 1.0])
    def test_xxz_propagator_inversion(self, t):
        sup = build_superoperator(xxz_model(XXZParams(2, 0.5, 1.0, 0.3)))
        assert check_inversion(sup, xxz_parity(2), t) <= 1e-9

    def test_zero_time(self):
        sup = build_superoperator(xxz_model(XXZParams(2, 0.5, 1.0, 0.3)))
        assert check_inversion(sup, xxz_parity(2), 0.0) <= 1e-13

    def test_fails_without_symmetry(self):
        sup = build_superoperator(single_qubit(gamma=0.4))
        err = check_inversion(sup, parity_from_pair(SIGMA_X, SIGMA_X), 0.5)
        assert err > 1e-2
