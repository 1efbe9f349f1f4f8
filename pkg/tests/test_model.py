import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from starkspec.model import (
    Branch,
    DomainError,
    ModelParams,
    ParitySector,
    constants,
    g0_levels,
    normalization_pole_energy,
    pole_energies,
    pole_index,
    validate_params,
)

PLUS = ParitySector.PLUS
MINUS = ParitySector.MINUS


class TestValidateParams:
    def test_w_derivation(self):
        p = validate_params(0.4, 0.5, 0.4)
        assert p.w == pytest.approx(0.4 / math.sqrt(1.0 - 0.25), abs=1e-15)
        assert p.w == pytest.approx(0.4618802, abs=1e-7)

    def test_gamma_zero_reduces_to_g(self):
        assert validate_params(0.4, 0.0, 0.7).w == 0.7

    def test_gamma_boundary_rejected(self):
        with pytest.raises(DomainError):
            validate_params(0.4, 1.0, 0.3)
        with pytest.raises(DomainError):
            validate_params(0.4, -1.0, 0.3)

    def test_negative_couplings_rejected(self):
        with pytest.raises(DomainError):
            validate_params(0.4, 0.0, -0.1)
        with pytest.raises(DomainError):
            validate_params(-0.4, 0.0, 0.1)

    def test_negative_gamma_allowed(self):
        p = validate_params(0.4, -0.5, 0.4)
        assert p.w == validate_params(0.4, 0.5, 0.4).w


class TestConstants:
    def test_kbar2_example(self):
        p = validate_params(0.4, 0.5, 0.4)
        cs = constants(p, PLUS, 0.0)
        assert cs.kbar2 == pytest.approx(-0.5 * 0.4, abs=1e-15)

    def test_all_couplings_zero(self):
        p = validate_params(0.0, 0.0, 0.0)
        cs = constants(p, PLUS, 1.0)
        assert cs.k2 == 0.0
        assert cs.cbar2 == 0.0
        assert cs.k1 == 1.0

    def test_identity_at_arbitrary_energy(self):
        p = validate_params(0.4, 0.5, 0.4)
        for energy in (-2.3, 0.0, 0.7771, 5.5):
            assert constants(p, PLUS, energy).identity_residual() <= 1e-12

    @settings(max_examples=300, deadline=None)
    @given(
        delta=st.floats(0.0, 2.0),
        gamma=st.floats(-0.95, 0.95),
        g=st.floats(0.0, 1.6),
        energy=st.floats(-3.0, 8.0),
    )
    def test_identity_property(self, delta, gamma, g, energy):
        cs = constants(validate_params(delta, gamma, g), PLUS, energy)
        assert cs.identity_residual() <= 1e-12

    def test_minus_sector_equals_flipped_plus(self):
        p = validate_params(0.4, 0.5, 0.4)
        flipped = ModelParams(delta=-0.4, gamma=-0.5, g=0.4, w=p.w)
        for energy in (-1.0, 0.3, 2.25):
            assert constants(p, MINUS, energy) == constants(flipped, PLUS, energy)


class TestPoleEnergies:
    def test_first_pole_example(self):
        p = validate_params(0.4, 0.5, 0.4)
        n, e = pole_energies(p, PLUS, 1)[0]
        assert n == 1
        assert e == pytest.approx(0.39, abs=1e-14)
        assert e + p.g**2 == pytest.approx(0.55, abs=1e-14)

    def test_x_ladder_example(self):
        p = validate_params(0.4, 0.5, 0.4)
        xs = [e + p.g**2 for _, e in pole_energies(p, PLUS, 3)]
        assert xs == pytest.approx([0.55, 1.30, 2.05], abs=1e-12)

    def test_gamma_zero_gives_integer_x(self):
        p = validate_params(0.7, 0.0, 0.9)
        xs = [e + p.g**2 for _, e in pole_energies(p, PLUS, 5)]
        assert xs == pytest.approx([1, 2, 3, 4, 5], abs=1e-12)

    def test_strictly_increasing_affine(self):
        p = validate_params(1.1, -0.6, 0.8)
        energies = [e for _, e in pole_energies(p, MINUS, 8)]
        steps = np.diff(energies)
        assert np.all(steps > 0)
        assert steps == pytest.approx([1 - 0.36] * 7, abs=1e-12)

    def test_sector_shared_ladder(self):
        p = validate_params(0.4, 0.5, 0.4)
        assert pole_energies(p, PLUS, 4) == pole_energies(p, MINUS, 4)

    def test_pole_index_inverts_ladder(self):
        p = validate_params(0.4, 0.5, 0.4)
        for n, e in pole_energies(p, PLUS, 5):
            assert pole_index(p, PLUS, e) == pytest.approx(n, abs=1e-10)

    def test_n_max_validation(self):
        p = validate_params(0.4, 0.5, 0.4)
        with pytest.raises(ValueError):
            pole_energies(p, PLUS, 0)


class TestNormalizationPole:
    def test_gamma_zero_sits_at_minus_g_squared(self):
        p = validate_params(0.4, 0.0, 0.6)
        assert normalization_pole_energy(p, PLUS) == pytest.approx(-0.36, abs=1e-14)

    def test_k0_and_c0_vanish_there(self):
        p = validate_params(0.4, 0.95, 0.6)
        e_star = normalization_pole_energy(p, PLUS)
        cs = constants(p, PLUS, e_star)
        assert abs(cs.k0) < 1e-13
        assert abs(cs.c0) < 1e-13

    def test_sector_independent(self):
        p = validate_params(0.4, 0.5, 0.4)
        assert normalization_pole_energy(p, PLUS) == normalization_pole_energy(p, MINUS)


class TestGZeroLevels:
    def test_lowest_levels_example(self):
        p = validate_params(0.4, 0.5, 0.0)
        energies = [lv.energy for lv in g0_levels(p, 7)]
        assert energies == pytest.approx([-0.4, 0.1, 0.4, 0.6, 1.1, 1.6, 1.9], abs=1e-14)

    def test_lower_branch_accumulates_near_minus_delta(self):
        p = validate_params(0.4, 0.999, 0.0)
        lows = [lv for lv in g0_levels(p, 40) if lv.branch is Branch.LOWER_MINUS]
        assert len(lows) == 40
        assert max(lv.energy for lv in lows) < -0.4 + 40 * 0.001 + 1e-12

    def test_degenerate_harmonic_ladder(self):
        p = validate_params(0.0, 0.0, 0.0)
        energies = [lv.energy for lv in g0_levels(p, 6)]
        assert energies == pytest.approx([0, 0, 1, 1, 2, 2], abs=0)

    def test_parity_rule(self):
        p = validate_params(0.7, -0.3, 0.0)
        for lv in g0_levels(p, 30):
            assert lv.parity == (-1) ** lv.n * lv.branch.value

    def test_sorted_and_sized(self):
        p = validate_params(0.25, 0.8, 0.0)
        levels = g0_levels(p, 25)
        assert len(levels) == 25
        energies = [lv.energy for lv in levels]
        assert energies == sorted(energies)

    def test_count_validation(self):
        p = validate_params(0.4, 0.5, 0.0)
        with pytest.raises(ValueError):
            g0_levels(p, 0)
