import numpy as np
import pytest
from hypothesis import given, strategies as st

from flokit.fidelity import (FidelityConfig, coordinate_update, optimize_fidelity, sector_seeds,
                             verify_fidelity_multiplicativity)
from flokit.flo import circuit_state, random_flo_state
from flokit.fock import EVEN, ODD, PureState, basis_state, random_state
from flokit.magic4 import a8, closed_fidelity, m_phi

complexes = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


@given(complexes, complexes)
def test_coordinate_update_beats_dense_scan(A, B):
    t = np.linspace(-np.pi, np.pi, 10_001)
    scan = np.max(np.abs(A * np.cos(t / 2) + B * np.sin(t / 2)) ** 2)
    th = coordinate_update(A, B)
    got = abs(A * np.cos(th / 2) + B * np.sin(th / 2)) ** 2
    assert got >= scan - 1e-9 * max(1.0, scan)
    assert abs(got - 0.5 * (abs(A) ** 2 + abs(B) ** 2 + np.hypot(abs(A) ** 2 - abs(B) ** 2,
                                                                2 * np.real(A * np.conj(B))))) < 1e-9


def test_coordinate_update_tie_is_zero():
    assert coordinate_update(0j, 0j) == 0.0


def test_config_validation():
    with pytest.raises(ValueError):
        FidelityConfig(sector="both-ways")
    with pytest.raises(ValueError):
        FidelityConfig(restarts=0)


def test_seeds_deterministic():
    assert sector_seeds(5, 4) == sector_seeds(5, 4)
    assert sector_seeds(5, 4) != sector_seeds(6, 4)


class TestOptimizer:
    def test_a8_half(self):
        res = optimize_fidelity(a8())
        assert abs(res.value - 0.5) < 1e-9
        assert res.sector == EVEN

    def test_m_half_pi(self):
        assert abs(optimize_fidelity(m_phi(np.pi / 2)).value - (2 + np.sqrt(2)) / 4) < 1e-9

    @pytest.mark.parametrize("n", [1, 2, 3, 5])
    def test_flo_states_reach_one(self, n):
        psi = circuit_state(random_flo_state(n, EVEN, n))
        assert abs(optimize_fidelity(psi, restarts=8).value - 1) < 1e-9

    def test_basis_state(self):
        assert abs(optimize_fidelity(basis_state("0011"), restarts=4).value - 1) < 1e-12

    @pytest.mark.parametrize("seed", range(3))
    def test_even4_matches_closed_form(self, seed):
        psi = random_state(4, EVEN, np.random.default_rng(seed))
        assert abs(optimize_fidelity(psi).value - closed_fidelity(psi)) < 1e-8

    def test_value_is_realised_by_witness(self, rng):
        psi = random_state(3, None, rng)
        res = optimize_fidelity(psi, restarts=4)
        assert abs(res.witness_state().overlap2(psi) - res.value) < 1e-12
        assert 0 < res.value <= 1 + 1e-12

    def test_odd_state_uses_odd_sector(self, rng):
        psi = random_state(4, ODD, rng)
        res = optimize_fidelity(psi, restarts=8)
        assert res.sector == ODD and res.witness.parity == ODD
        assert res.restarts_used == 8

    def test_mixed_state_best_sector(self):
        v = np.sqrt(0.2) * a8().amplitudes + np.sqrt(0.8) * basis_state("1000").amplitudes
        res = optimize_fidelity(PureState(v), restarts=8)
        assert abs(res.value - 0.8) < 1e-9 and res.sector == ODD

    def test_deterministic_per_seed(self, rng):
        psi = random_state(3, None, rng)
        a = optimize_fidelity(psi, restarts=4, seed=3)
        b = optimize_fidelity(psi, restarts=4, seed=3)
        assert a.value == b.value and a.witness == b.witness

    def test_trace_is_monotone(self, rng):
        res = optimize_fidelity(random_state(4, EVEN, rng), restarts=2)
        assert all(y >= x - 1e-12 for x, y in zip(res.trace, res.trace[1:]))
        assert res.converged

    def test_sweep_limit_respected(self, rng):
        res = optimize_fidelity(random_state(4, EVEN, rng), restarts=2, sweep_limit=1, tol=0.0)
        assert res.sweeps == 1 and not res.converged


class TestMultiplicativity:
    @pytest.mark.parametrize("parity", [EVEN, ODD])
    def test_small_n(self, parity):
        rep = verify_fidelity_multiplicativity(2, trials=2, seed=1, parity=parity,
                                               config=FidelityConfig(restarts=8))
        assert rep.max_gap < 1e-6

    def test_csv_layout(self):
        rep = verify_fidelity_multiplicativity(1, trials=1, config=FidelityConfig(restarts=4))
        lines = rep.to_csv().splitlines()
        assert lines[0] == "trial,n,F_single,F_product,gap,converged"
        assert len(lines) == 2

    def test_guards(self):
        with pytest.raises(ValueError):
            verify_fidelity_multiplicativity(5, 1)
        with pytest.raises(ValueError):
            verify_fidelity_multiplicativity(2, 1, parity="mixed")


class TestWorkedExamples:
    @pytest.mark.parametrize("A,B,expected", [(1, 0, 0.0), (0, 1, np.pi), (2**-0.5, 2**-0.5, np.pi / 2)])
    def test_coordinate_update_cases(self, A, B, expected):
        assert np.isclose(coordinate_update(complex(A), complex(B)), expected)

    def test_vacuum(self):
        assert optimize_fidelity(basis_state("0000"), restarts=4).value == pytest.approx(1)

    def test_product_with_a8_qubit(self):
        psi = basis_state("0")
        assert abs(optimize_fidelity(psi.kron(a8()), restarts=8).value - 0.5) < 1e-9

    def test_product_of_flo_state(self):
        psi = circuit_state(random_flo_state(4, EVEN, 2))
        assert abs(optimize_fidelity(psi.kron(a8()), restarts=8).value - 0.5) < 1e-9

    def test_odd_three_qubit_product(self):
        psi = random_state(3, ODD, np.random.default_rng(42))
        f1 = optimize_fidelity(psi).value
        f2 = optimize_fidelity(psi.kron(a8())).value
        assert abs(f2 - f1 / 2) < 1e-6

    def test_closed_form_agreement_many(self):
        rng = np.random.default_rng(200)
        worst = max(abs(optimize_fidelity(psi).value - closed_fidelity(psi))
                    for psi in (random_state(4, EVEN, rng) for _ in range(200)))
        assert worst < 1e-6

    def test_witness_augmentation(self, rng):
        psi = random_state(3, EVEN, rng)
        res = optimize_fidelity(psi, restarts=8)
        lifted = basis_state("0000").kron(res.witness_state())
        assert abs(lifted.overlap2(a8().kron(psi)) - res.value / 2) < 1e-12

    def test_cross_sector_overlap_is_zero(self, rng):
        psi = random_state(3, EVEN, rng)
        odd = circuit_state(random_flo_state(3, ODD, 1))
        assert psi.vdot(odd) == 0
