import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oscsync import (
    BathParams,
    CovarianceMatrix,
    DegenerateState,
    DomainError,
    InitialStateSpec,
    SystemParams,
    UnphysicalState,
    build_generator,
    diagonalize,
    dissipation_coefficients,
    entropy,
    gaussian_discord,
    information_series,
    lab_variance_series,
    log_negativity,
    make_initial,
    min_symplectic_eigenvalue,
    mutual_information,
    sample_trajectory,
    symplectic_spectrum,
    to_lab_covariance,
)
from oscsync.dynamics import IDX_PP, IDX_XX

# Frozen arbitrary-precision references for the two-mode squeezed state r=2
COSH_2 = 3.7621956910836314596
F_COSH_2 = 1.6198220928977022644
TWO_F_COSH_2 = 3.2396441857954045287
EXP_M2 = 0.13533528323661269189
COTH_005 = 20.016663889550099248


def _tms_sigma(r):
    ch, sh = math.cosh(r), math.sinh(r)
    sigma = np.block(
        [
            [ch * np.eye(2), sh * np.diag([1.0, -1.0])],
            [sh * np.diag([1.0, -1.0]), ch * np.eye(2)],
        ]
    )
    return CovarianceMatrix(sigma=sigma, means=np.zeros(4))


class TestInitialStates:
    def test_vacuum_roundtrip(self, fig_system):
        basis = diagonalize(fig_system)
        state = make_initial(InitialStateSpec.vacuum(), fig_system, basis)
        cov = to_lab_covariance(state, basis, fig_system)
        assert np.allclose(cov.sigma, np.eye(4), atol=1e-12)
        nu = symplectic_spectrum(cov).nu
        assert nu[0] == pytest.approx(1.0, abs=1e-10)
        assert nu[1] == pytest.approx(1.0, abs=1e-10)

    def test_squeezed_roundtrip(self, fig_system):
        basis = diagonalize(fig_system)
        spec = InitialStateSpec.separable_squeezed(2.0, 4.0)
        state = make_initial(spec, fig_system, basis)
        cov = to_lab_covariance(state, basis, fig_system)
        expect = np.diag(
            [math.exp(-4.0), math.exp(4.0), math.exp(-8.0), math.exp(8.0)]
        )
        assert np.allclose(cov.sigma, expect, rtol=1e-10)
        assert mutual_information(cov) == pytest.approx(0.0, abs=1e-9)
        assert gaussian_discord(cov) == pytest.approx(0.0, abs=1e-9)
        assert log_negativity(cov) == pytest.approx(0.0, abs=1e-9)

    def test_tms_roundtrip(self, fig_system):
        basis = diagonalize(fig_system)
        state = make_initial(
            InitialStateSpec.two_mode_squeezed(2.0), fig_system, basis
        )
        cov = to_lab_covariance(state, basis, fig_system)
        assert np.allclose(cov.sigma, _tms_sigma(2.0).sigma, rtol=1e-10)

    def test_tms_zero_is_vacuum(self, fig_system):
        basis = diagonalize(fig_system)
        a = make_initial(InitialStateSpec.two_mode_squeezed(0.0), fig_system, basis)
        b = make_initial(InitialStateSpec.vacuum(), fig_system, basis)
        assert np.allclose(a.second_moments, b.second_moments, atol=1e-14)

    def test_uncoupled_mode_moments(self):
        sys_p = SystemParams(1.0, 1.3, 0.0)
        basis = diagonalize(sys_p)
        state = make_initial(InitialStateSpec.vacuum(), sys_p, basis)
        r = state.second_moments
        assert r[IDX_XX[0, 0]] == pytest.approx(0.5, rel=1e-12)
        assert r[IDX_XX[1, 1]] == pytest.approx(1.0 / 2.6, rel=1e-12)
        assert r[IDX_PP[1, 1]] == pytest.approx(0.65, rel=1e-12)

    def test_parse(self):
        assert InitialStateSpec.parse("vacuum").kind == "vacuum"
        spec = InitialStateSpec.parse("tms:1.5")
        assert spec.kind == "tms" and spec.r == 1.5
        spec = InitialStateSpec.parse("sq:2:4")
        assert spec.kind == "sq" and spec.r1 == 2.0 and spec.r2 == 4.0
        for bad in ("tms", "sq:1", "sq:1:2:3", "foo", "tms:11", "sq:2:-10.5"):
            with pytest.raises(DomainError):
                InitialStateSpec.parse(bad)


class TestEntropyFunction:
    def test_anchor_values(self):
        assert entropy(1.0) == 0.0
        assert entropy(COSH_2) == pytest.approx(F_COSH_2, rel=1e-13)

    def test_monotone_and_smooth_at_one(self):
        vals = [entropy(nu) for nu in (1.0 + 1e-8, 1.1, 1.5, 3.0, 10.0)]
        assert all(np.isfinite(vals))
        assert all(b > a for a, b in zip(vals, vals[1:]))

    def test_clamp_window_and_guard(self):
        assert entropy(1.0 - 1e-7) == 0.0
        assert entropy(1.0 - 9e-7) == 0.0
        with pytest.raises(UnphysicalState):
            entropy(1.0 - 1e-5)
        with pytest.raises(UnphysicalState):
            entropy(0.5)


class TestTwoModeSqueezed:
    def test_pure_state_identities(self):
        cov = _tms_sigma(2.0)
        spec = symplectic_spectrum(cov)
        assert spec.nu[0] == pytest.approx(1.0, abs=1e-9)
        assert spec.nu[1] == pytest.approx(1.0, abs=1e-9)
        assert spec.reduced[0] == pytest.approx(COSH_2, rel=1e-12)
        assert spec.reduced[1] == pytest.approx(COSH_2, rel=1e-12)
        assert abs(np.linalg.det(cov.sigma) - 1.0) < 1e-9
        assert mutual_information(cov) == pytest.approx(TWO_F_COSH_2, rel=1e-10)
        assert gaussian_discord(cov) == pytest.approx(F_COSH_2, rel=1e-10)
        assert log_negativity(cov) == pytest.approx(2.0, rel=1e-10)
        flip = np.diag([1.0, 1.0, 1.0, -1.0])
        ev = np.linalg.eigvals(
            1j
            * np.array(
                [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]
            )
            @ (flip @ cov.sigma @ flip)
        )
        assert np.min(np.abs(ev)) == pytest.approx(EXP_M2, rel=1e-10)

    def test_symmetric_state_measured_either_party(self):
        cov = _tms_sigma(1.3)
        assert gaussian_discord(cov, measured=1) == pytest.approx(
            gaussian_discord(cov, measured=2), rel=1e-9
        )
        with pytest.raises(DomainError):
            gaussian_discord(cov, measured=3)


class TestDiscord:
    def test_thermal_product_zero(self):
        cov = CovarianceMatrix(sigma=COTH_005 * np.eye(4), means=np.zeros(4))
        nu = symplectic_spectrum(cov).nu
        assert nu[0] == pytest.approx(COTH_005, rel=1e-12)
        assert mutual_information(cov) == pytest.approx(0.0, abs=1e-10)
        assert gaussian_discord(cov) == pytest.approx(0.0, abs=1e-10)

    def test_pure_measured_mode_degenerate(self):
        sigma = np.eye(4)
        sigma[0, 2] = sigma[2, 0] = 0.1
        sigma[1, 3] = sigma[3, 1] = -0.1
        cov = CovarianceMatrix(sigma=sigma, means=np.zeros(4))
        with pytest.raises(DegenerateState):
            gaussian_discord(cov)
        # vacuum x vacuum (B pure, no correlations) is fine and has none
        assert gaussian_discord(
            CovarianceMatrix(sigma=np.eye(4), means=np.zeros(4))
        ) == 0.0

    def test_asymmetric_state_party_dependence(self):
        cov = _tms_sigma(1.0)
        noisy = cov.sigma.copy()
        noisy[0, 0] += 0.8
        noisy[1, 1] += 0.8
        cov2 = CovarianceMatrix(sigma=noisy, means=np.zeros(4))
        d1 = gaussian_discord(cov2, measured=1)
        d2 = gaussian_discord(cov2, measured=2)
        assert d1 >= 0.0 and d2 >= 0.0
        assert d1 != pytest.approx(d2, rel=1e-3)

    def test_branch_continuity_under_added_noise(self):
        # sweep a family that crosses the measurement-branch boundary
        base = _tms_sigma(1.0).sigma
        xs = np.linspace(0.0, 2.0, 1001)
        vals = np.array(
            [
                gaussian_discord(
                    CovarianceMatrix(sigma=base + x * np.eye(4), means=np.zeros(4))
                )
                for x in xs
            ]
        )
        assert np.all(np.isfinite(vals))
        assert np.max(np.abs(np.diff(vals))) < 0.02

    @settings(deadline=None, max_examples=60)
    @given(st.floats(0.0, 2 * math.pi), st.floats(0.0, 2 * math.pi))
    def test_local_rotation_invariance(self, phi1, phi2):
        def rot(phi):
            return np.array(
                [[math.cos(phi), math.sin(phi)], [-math.sin(phi), math.cos(phi)]]
            )

        s = np.block(
            [
                [rot(phi1), np.zeros((2, 2))],
                [np.zeros((2, 2)), rot(phi2)],
            ]
        )
        base = _tms_sigma(1.2).sigma + 0.3 * np.eye(4)
        cov0 = CovarianceMatrix(sigma=base, means=np.zeros(4))
        cov1 = CovarianceMatrix(sigma=s @ base @ s.T, means=np.zeros(4))
        assert mutual_information(cov1) == pytest.approx(
            mutual_information(cov0), rel=1e-9, abs=1e-11
        )
        assert gaussian_discord(cov1) == pytest.approx(
            gaussian_discord(cov0), rel=1e-8, abs=1e-10
        )
        assert log_negativity(cov1) == pytest.approx(
            log_negativity(cov0), rel=1e-9, abs=1e-11
        )

    def test_mutual_info_bounds_discord(self):
        cov = CovarianceMatrix(
            sigma=_tms_sigma(1.0).sigma + 0.5 * np.eye(4), means=np.zeros(4)
        )
        i = mutual_information(cov)
        d = gaussian_discord(cov)
        assert i >= d >= 0.0


class TestTrajectoryMeasures:
    def test_lab_variances_at_start(self, fig_system):
        basis = diagonalize(fig_system)
        bath = BathParams()
        coeffs = dissipation_coefficients(fig_system, bath, basis)
        gen = build_generator(basis, coeffs)
        state = make_initial(
            InitialStateSpec.separable_squeezed(2.0, 4.0), fig_system, basis
        )
        traj = sample_trajectory(gen, state, 1.0, 0.1)
        x1, x2 = lab_variance_series(traj, basis, fig_system)
        assert x1[0] == pytest.approx(math.exp(-4.0), rel=1e-10)
        assert x2[0] == pytest.approx(math.exp(-8.0), rel=1e-10)

    def test_information_series_contents(self, fig_system):
        basis = diagonalize(fig_system)
        coeffs = dissipation_coefficients(fig_system, BathParams(), basis)
        gen = build_generator(basis, coeffs)
        state = make_initial(InitialStateSpec.vacuum(), fig_system, basis)
        traj = sample_trajectory(gen, state, 5.0, 0.5)
        info = information_series(traj, basis, fig_system)
        assert set(info) == {"mutualInfo", "discord", "logNegativity", "nuMin"}
        for v in info.values():
            assert v.shape == traj.times.shape
        assert np.all(info["nuMin"] >= 1.0 - 1e-6)
        assert np.all(info["mutualInfo"] >= info["discord"] - 1e-9)
        assert np.all(info["discord"] >= 0.0)

    def test_transient_positivity_guard(self, fig_system):
        # the unapproximated weak-coupling equations can transiently push a
        # strongly squeezed state below the uncertainty bound during the
        # first beat; the entropy guard must flag that instead of silently
        # clamping (the dip exceeds the 1e-6 rounding window)
        basis = diagonalize(fig_system)
        coeffs = dissipation_coefficients(fig_system, BathParams(), basis)
        gen = build_generator(basis, coeffs)
        state = make_initial(
            InitialStateSpec.separable_squeezed(2.0, 4.0), fig_system, basis
        )
        traj = sample_trajectory(gen, state, 6.0, 0.02)
        with pytest.raises(UnphysicalState):
            information_series(traj, basis, fig_system)

    def test_min_symplectic_eigenvalue_accessor(self):
        cov = _tms_sigma(0.7)
        assert min_symplectic_eigenvalue(cov) == pytest.approx(1.0, abs=1e-9)
