"""Mean-field branch enumeration, stability, and the drive sweep.

Root values are pinned against 60-digit polynomial solves frozen in
tests/data, and independently against numpy's companion-matrix roots.
The stability classifier is checked by integrating the classical
equation of motion with a throwaway RK4 stepper.
"""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kerrsteady.errors import InvalidParams, UnsupportedModel
from kerrsteady.meanfield import (
    bistable_window,
    classify_stability,
    photon_number_branches,
    sweep_drive,
)
from kerrsteady.model import ModelParams

ROOT_RTOL = 1e-10


def drive_family(omega):
    return ModelParams(delta_c=5.0, chi=-0.25, omega=omega, gamma=1.0)


def cubic_residual(n, p):
    return n * (4.0 * (p.delta_c + 2.0 * p.chi * n) ** 2 + p.gamma**2) - 4.0 * p.omega**2


def companion_roots(p):
    """Independent root oracle: numpy eigenvalues of the companion matrix."""
    coeffs = [
        16.0 * p.chi**2,
        16.0 * p.chi * p.delta_c,
        4.0 * p.delta_c**2 + p.gamma**2,
        -4.0 * p.omega**2,
    ]
    roots = np.roots(coeffs)
    return sorted(
        float(r.real) for r in roots if abs(r.imag) < 1e-8 * max(1.0, abs(r)) and r.real >= -1e-12
    )


def test_zero_drive_is_vacuum():
    branches = photon_number_branches(drive_family(0.0))
    assert len(branches) == 1
    b = branches[0]
    assert b.n == 0.0 and b.a0 == 0j


def test_chi_zero_lorentzian_limit():
    p = ModelParams(delta_c=0.0, chi=0.0, omega=1.0, gamma=2.0)
    branches = photon_number_branches(p)
    assert len(branches) == 1
    assert branches[0].n == pytest.approx(1.0, rel=1e-14)


def test_frozen_branch_values(refs):
    for key, expected in refs["cubic_roots"].items():
        branches = photon_number_branches(drive_family(float(key)))
        assert len(branches) == len(expected)
        for b, ref_n in zip(branches, expected):
            assert b.n == pytest.approx(ref_n, rel=ROOT_RTOL)


def test_branches_sorted_and_self_consistent(refs):
    for omega in (2.0, 4.0, 6.0, 8.0):
        p = drive_family(omega)
        branches = photon_number_branches(p)
        ns = [b.n for b in branches]
        assert ns == sorted(ns)
        for b in branches:
            assert abs(b.a0) ** 2 == pytest.approx(b.n, rel=1e-10)
            assert abs(cubic_residual(b.n, p)) <= 1e-9 * max(1.0, 4.0 * omega**2)


def test_two_photon_params_rejected():
    p = ModelParams(delta_c=1.0, chi=1.0, omega=1.0, gamma=1.0, lambda_2ph=0.5)
    with pytest.raises(UnsupportedModel):
        photon_number_branches(p)
    with pytest.raises(UnsupportedModel):
        photon_number_branches(
            ModelParams(delta_c=1.0, chi=1.0, omega=1.0, gamma=1.0, kappa=0.2)
        )


sampled_params = st.builds(
    ModelParams,
    delta_c=st.floats(min_value=-10.0, max_value=10.0),
    chi=st.floats(min_value=-2.0, max_value=2.0).filter(lambda c: abs(c) > 1e-3),
    omega=st.floats(min_value=0.0, max_value=10.0),
    gamma=st.floats(min_value=0.05, max_value=4.0),
)


class TestAgainstCompanionOracle:
    @given(p=sampled_params)
    def test_roots_match(self, p):
        got = [b.n for b in photon_number_branches(p)]
        want = companion_roots(p)
        assert len(got) == len(want)
        for g, w in zip(got, want):
            assert g == pytest.approx(w, rel=1e-9, abs=1e-12)

    @given(p=sampled_params)
    def test_residual_and_count_parity(self, p):
        branches = photon_number_branches(p)
        degenerate = any(b.degenerate for b in branches)
        if not degenerate:
            assert len(branches) in (1, 3)
        for b in branches:
            assert abs(cubic_residual(b.n, p)) <= 1e-9 * max(1.0, 4.0 * p.omega**2)

    @given(
        delta_c=st.floats(min_value=0.3, max_value=10.0),
        chi=st.floats(min_value=0.05, max_value=2.0),
        omega=st.floats(min_value=0.0, max_value=10.0),
        gamma=st.floats(min_value=0.05, max_value=4.0),
        sign=st.sampled_from([-1.0, 1.0]),
    )
    def test_matched_signs_never_bistable(self, delta_c, chi, omega, gamma, sign):
        p = ModelParams(
            delta_c=sign * delta_c, chi=sign * chi, omega=omega, gamma=gamma
        )
        assert len(photon_number_branches(p)) == 1


class TestStability:
    def test_vacuum_eigenvalues(self):
        p = ModelParams(delta_c=3.0, chi=-0.5, omega=0.0, gamma=0.8)
        b = classify_stability(photon_number_branches(p)[0], p)
        assert b.stable
        got = sorted(ev.imag for ev in b.eigenvalues)
        assert got == pytest.approx([-3.0, 3.0], rel=1e-12)
        for ev in b.eigenvalues:
            assert ev.real == pytest.approx(-0.4, rel=1e-12)

    def test_middle_branch_unstable_in_bistable_region(self):
        p = drive_family(4.0)
        branches = [classify_stability(b, p) for b in photon_number_branches(p)]
        assert [b.stable for b in branches] == [True, False, True]

    def test_single_branch_agrees_with_time_stepper(self):
        p = drive_family(0.8)
        (branch,) = photon_number_branches(p)
        branch = classify_stability(branch, p)
        assert branch.stable

        def rhs(a):
            return -(1j * (p.delta_c + 2.0 * p.chi * abs(a) ** 2) + p.gamma / 2.0) * a + p.omega

        a = branch.a0 * 1.05 + 0.01j
        dt = 0.01
        for _ in range(8000):
            k1 = rhs(a)
            k2 = rhs(a + 0.5 * dt * k1)
            k3 = rhs(a + 0.5 * dt * k2)
            k4 = rhs(a + dt * k3)
            a = a + dt * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0
        assert abs(a - branch.a0) < 1e-8


class TestSweep:
    def test_single_point_grid(self):
        rows = sweep_drive(drive_family(0.0), [0.0])
        assert len(rows) == 1
        omega, branches = rows[0]
        assert omega == 0.0 and len(branches) == 1 and branches[0].n == 0.0

    def test_statelessness_under_concatenation(self):
        p = drive_family(0.0)
        g1, g2 = [0.5, 1.0], [4.0, 7.0]
        joint = sweep_drive(p, g1 + g2)
        split = sweep_drive(p, g1) + sweep_drive(p, g2)
        for (om_a, br_a), (om_b, br_b) in zip(joint, split):
            assert om_a == om_b
            assert [b.n for b in br_a] == [b.n for b in br_b]

    def test_branch_count_profile(self):
        grid = np.arange(0.0, 8.0 + 1e-9, 0.05)
        counts = [len(br) for _, br in sweep_drive(drive_family(0.0), grid)]
        profile = [c for c, _ in __import__("itertools").groupby(counts)]
        assert profile == [1, 3, 1]

    def test_window_endpoints_match_frozen_folds(self, refs):
        grid = np.arange(0.0, 8.0 + 1e-9, 0.05)
        window = bistable_window(drive_family(0.0), grid)
        assert window is not None
        lo, hi = window
        folds = [f["omega"] for f in refs["fold_points"]]
        assert abs(lo - min(folds)) <= 0.05 + 1e-12
        assert abs(hi - max(folds)) <= 0.05 + 1e-12

    def test_invalid_grid_rejected(self):
        with pytest.raises(InvalidParams):
            sweep_drive(drive_family(0.0), [-1.0])
        with pytest.raises(InvalidParams):
            sweep_drive(drive_family(0.0), [float("nan")])
