import numpy as np
import pytest
from hypothesis import given, strategies as st

from flokit.fidelity import optimize_fidelity
from flokit.flo import circuit_state, random_flo_state
from flokit.fock import EVEN, ODD, PureState, basis_state, random_state
from flokit.magic4 import (a8, closed_extent, closed_fidelity, extent4, extract_rsa, fidelity4,
                           from_magic_coords, m_phi, magic_basis, orbit_invariant, to_even,
                           to_magic_coords)

phis = st.floats(0, 2 * np.pi, allow_nan=False)
seeds = st.integers(0, 2**31)


def pfaffian_form(psi):
    v = psi.amplitudes
    q = lambda b: v[int(b, 2)]
    return 2 * (q("0000") * q("1111") - q("0011") * q("1100") + q("0101") * q("1010")
                - q("1001") * q("0110"))


def test_basis_orthonormal_and_even():
    basis = magic_basis()
    G = np.array([[a.vdot(b) for b in basis] for a in basis])
    assert np.allclose(G, np.eye(8), atol=1e-15)
    assert all(b.parity_class == EVEN for b in basis)


def test_first_basis_vector_is_a8():
    assert np.allclose(magic_basis()[0].amplitudes, a8().amplitudes)
    z = to_magic_coords(a8())
    assert np.allclose(z, np.eye(8)[0])


@given(seeds)
def test_sum_of_squares_is_amplitude_quadratic_form(seed):
    psi = random_state(4, EVEN, np.random.default_rng(seed))
    z = to_magic_coords(psi)
    assert abs(np.sum(z * z) - pfaffian_form(psi)) < 1e-13


@given(seeds)
def test_coordinate_round_trip(seed):
    psi = random_state(4, EVEN, np.random.default_rng(seed))
    assert np.allclose(from_magic_coords(to_magic_coords(psi)).amplitudes, psi.amplitudes)


class TestClosedForms:
    def test_a8(self):
        assert closed_fidelity(a8()) == 0.5
        assert abs(closed_extent(a8()) - 2) < 1e-15

    @given(phis)
    def test_m_phi(self, phi):
        psi = m_phi(phi)
        assert abs(closed_extent(psi) - (1 + abs(np.sin(phi / 2)))) < 1e-12
        assert abs(closed_fidelity(psi) - 0.5 * (1 + abs(np.cos(phi / 2)))) < 1e-12

    def test_m_pi_is_on_a8_orbit(self):
        assert abs(closed_extent(m_phi(np.pi)) - 2) < 1e-12
        assert extract_rsa(m_phi(np.pi)).a < 1e-8

    @pytest.mark.parametrize("bits", ["0000", "0011", "1111", "0110"])
    def test_basis_states_are_flo(self, bits):
        psi = basis_state(bits)
        assert abs(closed_fidelity(psi) - 1) < 1e-15 and closed_extent(psi) == 1.0

    @given(seeds)
    def test_flo_states_have_zero_invariant(self, seed):
        psi = circuit_state(random_flo_state(4, EVEN, seed))
        assert orbit_invariant(psi) < 1e-12
        assert abs(closed_fidelity(psi) - 1) < 1e-12

    @pytest.mark.parametrize("seed", range(3))
    def test_fidelity_agrees_with_optimiser(self, seed, rng):
        psi = random_state(4, EVEN, np.random.default_rng(seed))
        assert abs(optimize_fidelity(psi).value - closed_fidelity(psi)) < 1e-8

    def test_rejects_odd_and_wrong_size(self):
        with pytest.raises(ValueError):
            closed_fidelity(basis_state("0001"))
        with pytest.raises(ValueError):
            closed_extent(basis_state("00"))

    @given(seeds)
    def test_extent_fidelity_relation(self, seed):
        # (2F - 1)^2 + (xi - 1)^2 = 1 on every orbit
        psi = random_state(4, EVEN, np.random.default_rng(seed))
        assert abs((2 * closed_fidelity(psi) - 1) ** 2 + (closed_extent(psi) - 1) ** 2 - 1) < 1e-12


class TestExtraction:
    @given(seeds)
    def test_reconstruction_and_ranges(self, seed):
        psi = random_state(4, EVEN, np.random.default_rng(seed))
        mc = extract_rsa(psi)
        assert 0 <= mc.a <= np.pi / 4 + 1e-12
        assert abs(mc.r @ mc.r - 1) < 1e-12 and abs(mc.s @ mc.s - 1) < 1e-12
        assert abs(mc.r @ mc.s) < 1e-12
        assert np.allclose(mc.reconstruct(), np.exp(1j * mc.gauge) * psi.amplitudes, atol=1e-12)
        assert abs(mc.orbit_invariant - orbit_invariant(psi)) < 1e-12

    def test_a8_degenerate_completion(self):
        mc = extract_rsa(a8())
        assert mc.s_degenerate and mc.a == 0
        assert np.allclose(mc.r, np.eye(8)[0]) and np.allclose(mc.s, np.eye(8)[1])

    def test_json_fields(self):
        doc = extract_rsa(m_phi(1.0)).to_json()
        assert set(doc) == {"a", "gauge", "r", "s", "fidelity", "extent", "orbit_invariant"}
        assert len(doc["r"]) == len(doc["s"]) == 8


class TestOrbitInvariance:
    @given(seeds, seeds)
    def test_flo_unitaries_preserve_invariant(self, s1, s2):
        psi = random_state(4, EVEN, np.random.default_rng(s1))
        u = random_flo_state(4, EVEN, s2)
        assert abs(orbit_invariant(u.apply(psi)) - orbit_invariant(psi)) < 1e-10


class TestOtherParities:
    def test_to_even_is_flo_and_involutive(self, rng):
        psi = random_state(4, ODD, rng)
        ev = to_even(psi)
        assert ev.parity_class == EVEN
        assert np.allclose(to_even(basis_state("1000")).amplitudes, basis_state("0000").amplitudes)

    def test_odd_closed_forms_match_optimiser(self):
        psi = random_state(4, ODD, np.random.default_rng(3))
        assert abs(fidelity4(psi) - optimize_fidelity(psi).value) < 1e-8
        assert extent4(psi) == closed_extent(to_even(psi))

    def test_mixed_fidelity_is_best_sector(self):
        v = np.sqrt(0.3) * a8().amplitudes + np.sqrt(0.7) * basis_state("0001").amplitudes
        assert abs(fidelity4(PureState(v)) - 0.7) < 1e-12


class TestWorkedExamples:
    def test_vacuum_coordinates(self):
        z = to_magic_coords(basis_state("0000"))
        assert np.allclose(z[:2], [1 / np.sqrt(2), -1j / np.sqrt(2)]) and np.allclose(z[2:], 0)
        assert abs(extract_rsa(basis_state("0000")).a - np.pi / 4) < 1e-12

    def test_m0_lives_on_first_four(self):
        assert np.allclose(to_magic_coords(m_phi(0.0))[4:], 0)

    def test_m_phi_amplitudes(self):
        assert np.allclose(m_phi(0).amplitudes[[0, 3, 12, 15]], 0.5)
        assert np.isclose(m_phi(np.pi).amplitudes[15], -0.5)

    @given(seeds)
    def test_ranges_and_flo_equivalence(self, seed):
        psi = random_state(4, EVEN, np.random.default_rng(seed))
        f, xi = closed_fidelity(psi), closed_extent(psi)
        assert 0.5 - 1e-12 <= f <= 1 and 1 <= xi <= 2 + 1e-12
        assert (abs(xi - 1) < 1e-9) == (abs(f - 1) < 1e-9)

    def test_m_pi_half_values(self):
        assert abs(closed_fidelity(m_phi(np.pi / 2)) - 0.853553) < 1e-6
        assert abs(closed_extent(m_phi(np.pi / 2)) - 1.707107) < 1e-6
