import numpy as np
import pytest

from noisescramble import (
    AnsatzSpec,
    DegenerateStateError,
    DensityMatrix,
    InvalidObservableError,
    InvalidStateError,
    PoleError,
    ShapeError,
    arrowhead_transform,
    basis_statevector,
    bias_bound,
    build_sel_circuit,
    build_white_noise_state,
    commutator_norm,
    commutator_norm_from_variance,
    compute_spectral_report,
    dominant_eigenvalue_gap,
    eigendecompose,
    eigenvalue_uniformity,
    fidelity,
    run_circuit,
    run_ideal,
    secular_residual,
    trace_distance,
    variance,
    white_noise_distance_identity,
)

from .conftest import random_density_matrix, random_statevector, random_traceless_hermitian

E0 = np.array([1.0, 0.0], dtype=complex)


def example_mixture():
    """rho = 0.5|0><0| + 0.5|+><+| against the ideal state |0>."""
    plus = np.array([1, 1], dtype=complex) / np.sqrt(2)
    rho = 0.5 * np.outer(E0, E0) + 0.5 * np.outer(plus, plus)
    return DensityMatrix(1, rho)


def noisy_sel_state(seed, n_qubits=3, layers=2, eps=0.1):
    prog = build_sel_circuit(AnsatzSpec("SEL", n_qubits, layers, seed=seed)).with_noise(eps)
    rho = run_circuit(prog, DensityMatrix.basis_state(n_qubits))
    psi = run_ideal(prog, basis_statevector(n_qubits))
    return rho, psi


class TestEigendecompose:
    def test_maximally_mixed(self):
        dec = eigendecompose(DensityMatrix.maximally_mixed(2))
        assert np.allclose(dec.eigenvalues, 0.25)

    def test_white_noise_closed_form(self):
        wn = build_white_noise_state(E0, 0.5)
        dec = eigendecompose(wn.data)
        assert np.allclose(dec.eigenvalues, [0.75, 0.25], atol=1e-14)

    def test_reconstruction(self, rng):
        rho = random_density_matrix(rng, 8)
        dec = eigendecompose(rho)
        assert np.abs(dec.reconstruct() - rho).max() < 1e-8
        assert abs(dec.eigenvalues.sum() - 1.0) < 1e-9
        assert np.all(np.diff(dec.eigenvalues) <= 1e-15)

    def test_orthonormal_eigenvectors(self, rng):
        dec = eigendecompose(random_density_matrix(rng, 8))
        v = dec.eigenvectors
        assert np.abs(v.conj().T @ v - np.eye(8)).max() < 1e-10

    def test_non_hermitian_rejected(self):
        m = np.array([[0.5, 0.5], [0.0, 0.5]], dtype=complex)
        with pytest.raises(InvalidStateError):
            eigendecompose(m)

    def test_degenerate_tie_broken_by_ideal_overlap(self, rng):
        # within a degenerate block, eigenvectors come out sorted by their
        # overlap with the ideal state, largest first
        psi = random_statevector(rng, 4)
        rho = np.eye(4, dtype=complex) / 4
        dec = eigendecompose(rho, psi)
        overlaps = np.abs(dec.eigenvectors.conj().T @ psi) ** 2
        assert np.all(np.diff(overlaps) <= 1e-12)


class TestUniformity:
    def test_white_noise_is_zero(self, rng):
        psi = random_statevector(rng, 8)
        wn = build_white_noise_state(psi, 0.63)
        assert eigenvalue_uniformity(eigendecompose(wn.data)) < 1e-12

    def test_hand_value(self):
        # d=4, spectrum (0.7, 0.3, 0, 0): direct evaluation gives 2/3
        w = eigenvalue_uniformity(np.array([0.7, 0.3, 0.0, 0.0]))
        assert abs(w - 2.0 / 3.0) < 1e-12

    def test_range(self, rng):
        for _ in range(20):
            rho = random_density_matrix(rng, 8, rank=int(rng.integers(2, 9)))
            w = eigenvalue_uniformity(eigendecompose(rho))
            assert 0.0 <= w <= 1.0

    def test_pure_state_rejected(self):
        with pytest.raises(DegenerateStateError):
            eigenvalue_uniformity(np.array([1.0, 0.0]))

    def test_zero_iff_uniform(self, rng):
        # forward: exactly uniform non-dominant spectrum -> 0
        lam = np.array([0.6] + [0.4 / 7] * 7)
        assert eigenvalue_uniformity(lam) < 1e-14
        # reverse: any deviation gives a strictly positive value
        lam2 = np.array([0.6] + [0.4 / 7] * 7)
        lam2[1] += 0.01
        lam2[2] -= 0.01
        assert eigenvalue_uniformity(lam2) > 1e-4

    def test_full_dim_variant(self):
        lam = np.array([0.7, 0.3, 0.0, 0.0])
        w_default = eigenvalue_uniformity(lam)
        w_full = eigenvalue_uniformity(lam, full_dim_reference=True)
        assert abs(w_full - 0.625) < 1e-12  # reference 1/4 instead of 1/3
        assert w_full != w_default


class TestTraceDistance:
    def test_identical_states(self, rng):
        rho = random_density_matrix(rng, 4)
        assert trace_distance(rho, rho) == 0.0

    def test_orthogonal_pure_states(self):
        assert abs(trace_distance(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) - 2.0) < 1e-14

    def test_hand_value(self):
        assert abs(trace_distance(np.diag([0.75, 0.25]), np.eye(2) / 2) - 0.5) < 1e-14

    def test_symmetry(self, rng):
        a, b = random_density_matrix(rng, 4), random_density_matrix(rng, 4)
        assert abs(trace_distance(a, b) - trace_distance(b, a)) < 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(ShapeError):
            trace_distance(np.eye(2) / 2, np.eye(4) / 4)


class TestCommutatorNorm:
    def test_white_noise_commutes(self, rng):
        psi = random_statevector(rng, 8)
        wn = build_white_noise_state(psi, 0.4)
        absolute, _ = commutator_norm(wn.data, psi)
        assert absolute < 1e-10

    def test_hand_example(self):
        rho = example_mixture()
        absolute, relative = commutator_norm(rho, E0)
        assert abs(absolute - 0.5) < 1e-12
        assert abs(relative - (2.0 + np.sqrt(2.0))) < 1e-10
        assert abs(variance(rho, E0) - 0.0625) < 1e-12

    def test_dual_route_agreement(self, rng):
        for seed in range(10):
            rho, psi = noisy_sel_state(seed)
            a, _ = commutator_norm(rho, psi)
            b = commutator_norm_from_variance(rho, psi)
            assert abs(a - b) / max(a, b) < 1e-8

    def test_pure_state_relative_rejected(self):
        with pytest.raises(DegenerateStateError):
            commutator_norm(DensityMatrix.basis_state(1).data, E0)


class TestWhiteNoiseState:
    def test_eta_one_is_pure(self, rng):
        psi = random_statevector(rng, 4)
        wn = build_white_noise_state(psi, 1.0)
        assert np.abs(wn.data - np.outer(psi, psi.conj())).max() < 1e-14

    def test_eta_zero_is_maximally_mixed(self, rng):
        psi = random_statevector(rng, 4)
        wn = build_white_noise_state(psi, 0.0)
        assert np.abs(wn.data - np.eye(4) / 4).max() < 1e-14

    def test_hand_value(self):
        wn = build_white_noise_state(E0, 0.5)
        assert np.allclose(wn.data, np.diag([0.75, 0.25]))

    def test_spectrum_closed_form(self, rng):
        psi = random_statevector(rng, 16)
        eta = 0.37
        wn = build_white_noise_state(psi, eta)
        lam = np.linalg.eigvalsh(wn.data)
        expected = np.array([(1 - eta) / 16] * 15 + [eta + (1 - eta) / 16])
        assert np.abs(lam - expected).max() < 1e-12

    def test_fidelity_relation(self, rng):
        psi = random_statevector(rng, 8)
        wn = build_white_noise_state(psi, 0.81)
        assert abs(fidelity(wn.data, psi) - wn.expected_fidelity) < 1e-12

    def test_unnormalised_rejected(self):
        with pytest.raises(InvalidStateError):
            build_white_noise_state(np.array([1.0, 1.0]), 0.5)


class TestBiasBound:
    def test_white_noise_bias_vanishes(self, rng):
        psi = random_statevector(rng, 4)
        wn = build_white_noise_state(psi, 0.6)
        obs = random_traceless_hermitian(rng, 4)
        bias, bound = bias_bound(obs, wn.data, psi, 0.6)
        assert abs(bias) < 1e-10

    def test_hand_example(self):
        obs = np.diag([1.0, -1.0]).astype(complex)
        rho = np.diag([0.75, 0.25]).astype(complex)
        bias, bound = bias_bound(obs, rho, E0, 0.5)
        assert abs(bias) < 1e-12
        assert abs(bound) < 1e-12

    def test_soundness_on_random_draws(self, rng):
        for _ in range(100):
            dim = 4
            rho = random_density_matrix(rng, dim)
            psi = random_statevector(rng, dim)
            obs = random_traceless_hermitian(rng, dim)
            eta = float(rng.uniform(0.05, 1.0))
            bias, bound = bias_bound(obs, rho, psi, eta)
            assert abs(bias) <= bound + 1e-10

    def test_non_traceless_rejected(self, rng):
        psi = random_statevector(rng, 2)
        with pytest.raises(InvalidObservableError):
            bias_bound(np.eye(2, dtype=complex), np.eye(2) / 2, psi, 0.5)


class TestArrowhead:
    def test_white_noise_border_vanishes(self, rng):
        psi = random_statevector(rng, 8)
        eta = 0.55
        wn = build_white_noise_state(psi, eta)
        form = arrowhead_transform(wn.data, psi)
        assert np.abs(form.offdiag).max() < 1e-10
        assert np.allclose(form.diag, (1 - eta) / 8, atol=1e-12)

    def test_hand_example(self):
        rho = example_mixture()
        form = arrowhead_transform(rho, E0)
        assert abs(form.corner - 0.75) < 1e-12
        assert np.allclose(form.offdiag, [0.25], atol=1e-12)
        # border magnitude equals the sup-norm of the commutator, sqrt(Var)
        assert abs(np.sqrt((form.offdiag**2).sum()) - np.sqrt(variance(rho, E0))) < 1e-12

    def test_transform_reproduces_arrowhead(self, rng):
        rho, psi = noisy_sel_state(3)
        form = arrowhead_transform(rho, psi)
        rotated = form.transform @ rho.data @ form.transform.conj().T
        assert np.abs(rotated - form.arrowhead_matrix()).max() < 1e-10

    def test_corner_is_fidelity(self, rng):
        rho, psi = noisy_sel_state(4)
        form = arrowhead_transform(rho, psi)
        assert abs(form.corner - fidelity(rho, psi)) < 1e-10

    def test_spectrum_preserved(self, rng):
        rho, psi = noisy_sel_state(5)
        form = arrowhead_transform(rho, psi)
        lam_arrow = np.linalg.eigvalsh(form.arrowhead_matrix())
        lam_rho = np.linalg.eigvalsh(rho.data)
        assert np.abs(np.sort(lam_arrow) - np.sort(lam_rho)).max() < 1e-10

    def test_border_sum_is_variance(self, rng):
        for seed in range(5):
            rho, psi = noisy_sel_state(seed)
            form = arrowhead_transform(rho, psi)
            assert abs((form.offdiag**2).sum() - variance(rho, psi)) < 1e-10


class TestSecularResidual:
    def test_white_noise_dominant_root(self, rng):
        psi = random_statevector(rng, 4)
        wn = build_white_noise_state(psi, 0.52)
        form = arrowhead_transform(wn.data, psi)
        lam1 = 0.52 + 0.48 / 4
        assert abs(secular_residual(form, lam1)) < 1e-10

    def test_hand_example_root(self):
        rho = example_mixture()
        form = arrowhead_transform(rho, E0)
        lam1 = (1 + np.sqrt(0.5)) / 2
        assert abs(secular_residual(form, lam1)) < 1e-10

    def test_nonroot_at_corner(self):
        rho = example_mixture()
        form = arrowhead_transform(rho, E0)
        assert abs(secular_residual(form, form.corner)) > 1e-3

    def test_every_eigenvalue_is_a_root(self, rng):
        for seed in range(5):
            rho, psi = noisy_sel_state(seed, layers=3, eps=0.2)
            form = arrowhead_transform(rho, psi)
            for lam in eigendecompose(rho, psi).eigenvalues:
                assert abs(secular_residual(form, lam)) < 1e-8

    def test_pole_rejected(self):
        rho = example_mixture()
        form = arrowhead_transform(rho, E0)
        with pytest.raises(PoleError):
            secular_residual(form, float(form.diag[0]))


class TestDominantEigenvalueGap:
    def test_white_noise_gap_zero(self, rng):
        psi = random_statevector(rng, 8)
        wn = build_white_noise_state(psi, 0.7)
        result = dominant_eigenvalue_gap(wn.data, psi)
        assert result.gap < 1e-12
        assert result.bound_applicable

    def test_hand_example_bound_inapplicable(self):
        rho = example_mixture()
        result = dominant_eigenvalue_gap(rho, E0)
        lam1 = (1 + np.sqrt(0.5)) / 2
        assert abs(result.gap - (lam1 - 0.75)) < 1e-12
        assert abs(result.bound - 0.0625 / (2 * lam1 - 1)) < 1e-12
        # here the largest arrowhead diagonal exceeds 1 - lambda_1
        assert not result.bound_applicable

    def test_low_dominance_signalled(self):
        rho = DensityMatrix.maximally_mixed(1)
        result = dominant_eigenvalue_gap(rho, E0)
        assert np.isnan(result.bound)
        assert not result.bound_applicable
        assert result.gap >= 0.0

    def test_bound_holds_on_noisy_circuits(self):
        for seed in range(10):
            rho, psi = noisy_sel_state(seed, n_qubits=3, layers=4, eps=1e-3)
            result = dominant_eigenvalue_gap(rho, psi)
            if result.bound_applicable:
                assert result.gap <= result.bound + 1e-12


class TestWhiteNoiseDistanceIdentity:
    def test_maximally_mixed_error(self, rng):
        psi = random_statevector(rng, 4)
        lhs, rhs = white_noise_distance_identity(psi, 0.5, np.eye(4) / 4)
        assert lhs < 1e-12 and rhs < 1e-12

    def test_hand_example(self):
        err = np.diag([0.0, 1.0]).astype(complex)
        lhs, rhs = white_noise_distance_identity(E0, 0.5, err)
        assert abs(lhs - 0.25) < 1e-12
        assert abs(rhs - 0.25) < 1e-12

    def test_exactness_on_random_draws(self, rng):
        for _ in range(50):
            psi = random_statevector(rng, 8)
            err = random_density_matrix(rng, 8, rank=int(rng.integers(1, 9)))
            eta = float(rng.uniform(0.0, 1.0))
            lhs, rhs = white_noise_distance_identity(psi, eta, err)
            assert abs(lhs - rhs) < 1e-9

    def test_statement_of_uniformity_bound(self, rng):
        # synthetic spectra where the ideal state is exactly the dominant
        # eigenvector: half trace distance and (1 - lam1) W differ by at
        # most (1 - lam1)/d
        for _ in range(20):
            d = 8
            basis, _ = np.linalg.qr(
                rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            )
            lam = np.sort(rng.uniform(0, 1, size=d))[::-1]
            lam[0] += 1.0
            lam /= lam.sum()
            rho = (basis * lam) @ basis.conj().T
            psi = basis[:, 0]
            lam1 = lam[0]
            wn = build_white_noise_state(psi, lam1)
            half_dist = 0.5 * trace_distance(rho, wn.data)
            w = eigenvalue_uniformity(lam)
            assert abs(half_dist - (1 - lam1) * w) <= (1 - lam1) / d + 1e-12


class TestSpectralReport:
    def test_fields_consistent(self):
        rho, psi = noisy_sel_state(6, eps=0.05)
        report = compute_spectral_report(rho, psi, eta_estimate=0.9)
        assert 0.0 <= report.fidelity <= 1.0
        assert 0.0 <= report.uniformity <= 1.0
        assert report.commutator_rel == pytest.approx(
            report.commutator_abs / (1.0 - report.lambda1)
        )
        assert report.error_overlap == pytest.approx(
            (report.fidelity - 0.9) / 0.1
        )
        assert report.degenerate_reason is None

    def test_noiseless_reports_degenerate(self):
        rho, psi = noisy_sel_state(7, eps=0.0)
        report = compute_spectral_report(rho, psi)
        assert report.uniformity is None
        assert report.commutator_rel is None
        assert report.degenerate_reason == "noiseless"
        assert report.lambda1 == pytest.approx(1.0, abs=1e-10)

    def test_fidelity_law_small_error_rates(self):
        # for moderate total error the no-error weight dominates fidelity
        deviations = []
        for seed in range(10):
            prog = build_sel_circuit(AnsatzSpec("SEL", 4, 6, seed=100 + seed))
            prog = prog.with_noise(0.002)
            rho = run_circuit(prog, DensityMatrix.basis_state(4))
            psi = run_ideal(prog, basis_statevector(4))
            xi = 0.002 * prog.gate_count
            deviations.append(fidelity(rho, psi) - np.exp(-xi))
        assert abs(np.mean(deviations)) <= 0.02
