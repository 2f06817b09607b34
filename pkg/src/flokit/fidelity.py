"""Numerical FLO fidelity by Jacobi sweeps over Majorana-pair rotations.

For a fixed witness ``w`` and pair ``(i, j)`` the overlap after a rotation is
``A cos(t/2) + B sin(t/2)`` with ``A = <psi|w>`` and ``B = <psi|c_i c_j|w>``,
so each coordinate step has an exact maximiser.  All restarts of a sector are
advanced together as rows of one array.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace

import numpy as np

from .flo import FloCircuit, all_pairs, circuit_from_orthogonal, circuit_state, pair_action
from .flo import induced_orthogonal, random_flo_state
from .fock import EVEN, MIXED, ODD, PureState, parity_split, random_state
from .magic4 import a8

SECTORS = ("both", EVEN, ODD)


@dataclass(frozen=True)
class FidelityConfig:
    restarts: int = 32
    sweep_limit: int = 500
    tol: float = 1e-10
    seed: int = 0
    sector: str = "both"

    def __post_init__(self):
        if self.sector not in SECTORS:
            raise ValueError(f"sector must be one of {SECTORS}, got {self.sector!r}")
        if self.restarts < 1 or self.sweep_limit < 1:
            raise ValueError("restarts and sweep_limit must be positive")


@dataclass(frozen=True, eq=False)
class FidelityResult:
    value: float
    witness: FloCircuit
    restarts_used: int
    converged: bool
    sector: str
    sweeps: int = 0
    trace: tuple = field(default=(), repr=False)

    def witness_state(self) -> PureState:
        return circuit_state(self.witness)


def coordinate_update(A: complex, B: complex) -> float:
    """Angle maximising ``|A cos(t/2) + B sin(t/2)|**2``, in ``(-pi, pi]``.

    The maximiser ``(cos(t/2), sin(t/2))`` is the leading eigenvector of the
    Gram matrix ``[[|A|^2, Re(A B*)], [Re(A B*), |B|^2]]``; its half-angle is
    ``atan2(2 Re(A B*), |A|^2 - |B|^2) / 2``.  Exact ties give 0.
    """
    return float(_update_angles(np.asarray(A), np.asarray(B)))


def _update_angles(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    cross = 2 * np.real(A * np.conj(B))
    diff = np.abs(A) ** 2 - np.abs(B) ** 2
    return np.arctan2(cross, diff)


def sector_seeds(seed: int, count: int) -> list[int]:
    """Per-restart seeds, independent of evaluation order."""
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(count, dtype=np.uint32)]


def _ascend(psi: PureState, starts: list[FloCircuit], sweep_limit: int, tol: float):
    """Run every start to convergence; returns per-start (value, R, converged, sweeps, trace)."""
    n = psi.n
    pairs = all_pairs(n)
    actions = [pair_action(i, j, n) for i, j in pairs]
    psi_c = psi.amplitudes.conj()
    omega = np.array([circuit_state(c).amplitudes for c in starts])
    R = np.array([induced_orthogonal(c) for c in starts])
    ids = np.arange(len(starts))
    A = omega @ psi_c
    traces = [[float(abs(x) ** 2)] for x in A]
    results = {}
    for sweep in range(1, sweep_limit + 1):
        prev = np.abs(A) ** 2
        for (i, j), (src, ph) in zip(pairs, actions):
            w = omega[:, src] * ph
            B = w @ psi_c
            theta = _update_angles(A, B)
            c, s = np.cos(theta / 2), np.sin(theta / 2)
            omega = c[:, None] * omega + s[:, None] * w
            A = c * A + s * B
            ct, st = np.cos(theta)[:, None], np.sin(theta)[:, None]
            Ri, Rj = R[:, :, i].copy(), R[:, :, j]
            R[:, :, i] = ct * Ri + st * Rj
            R[:, :, j] = -st * Ri + ct * Rj
        omega /= np.linalg.norm(omega, axis=1, keepdims=True)
        A = omega @ psi_c
        val = np.abs(A) ** 2
        done = (val - prev < tol) | (sweep == sweep_limit)
        for k in range(len(ids)):
            traces[ids[k]].append(float(val[k]))
            if done[k]:
                results[ids[k]] = (float(val[k]), R[k].copy(), bool(val[k] - prev[k] < tol),
                                   sweep, tuple(traces[ids[k]]))
        keep = ~done
        if not keep.any():
            break
        omega, R, A, ids = omega[keep], R[keep], A[keep], ids[keep]
    return [results[k] for k in range(len(starts))]


def _reorthogonalize(R: np.ndarray) -> np.ndarray:
    u, _, vt = np.linalg.svd(R)
    return u @ vt


def optimize_fidelity(psi: PureState, config: FidelityConfig | None = None, **overrides) -> FidelityResult:
    """Maximise ``|<w|psi>|**2`` over FLO states ``w``.

    The reported value is recomputed from the returned witness circuit, so it
    is always an achieved lower bound on the FLO fidelity.  Sectors in which
    ``psi`` has no weight are not searched: their overlap with any FLO state
    of that parity is exactly zero.
    """
    config = replace(config or FidelityConfig(), **overrides)
    n = psi.n
    sectors = (EVEN, ODD) if config.sector == "both" else (config.sector,)
    seeds = sector_seeds(config.seed, 2 * config.restarts)
    a, psi_e, b, psi_o = parity_split(psi)
    weight = {EVEN: psi_e is not None, ODD: psi_o is not None}

    best = None
    used = 0
    for sector in sectors:
        offset = 0 if sector == EVEN else config.restarts
        if not weight[sector]:
            if best is None:
                start = random_flo_state(n, sector, seeds[offset])
                best = (abs(circuit_state(start).vdot(psi)) ** 2, start, True, sector, 0, ())
            continue
        starts = [random_flo_state(n, sector, s) for s in seeds[offset:offset + config.restarts]]
        used += len(starts)
        for val, R, conv, sweeps, trace in _ascend(psi, starts, config.sweep_limit, config.tol):
            if best is None or val > best[0]:
                best = (val, (R, starts[0].initial), conv, sector, sweeps, trace)

    val, wit, conv, sector, sweeps, trace = best
    if isinstance(wit, tuple):
        R, initial = wit
        wit = circuit_from_orthogonal(_reorthogonalize(R), initial)
    value = abs(circuit_state(wit).vdot(psi)) ** 2
    return FidelityResult(float(value), wit, used, conv, sector, sweeps, trace)


# --- multiplicativity harness -------------------------------------------------

@dataclass
class MultiplicativityReport:
    rows: list = field(default_factory=list)

    @property
    def max_gap(self) -> float:
        return max((r["gap"] for r in self.rows), default=0.0)

    @property
    def all_converged(self) -> bool:
        return all(r["converged"] for r in self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["trial", "n", "F_single", "F_product", "gap", "converged"])
        for r in self.rows:
            w.writerow([r["trial"], r["n"], f"{r['F_single']:.12g}", f"{r['F_product']:.12g}",
                        f"{r['gap']:.12g}", int(r["converged"])])
        return buf.getvalue()


def fidelity_product_trial(psi: PureState, config: FidelityConfig) -> dict:
    f1 = optimize_fidelity(psi, config)
    f2 = optimize_fidelity(psi.kron(a8()), config)
    return {"n": psi.n, "parity": psi.parity_class, "F_single": f1.value, "F_product": f2.value,
            "gap": abs(f2.value - f1.value / 2), "converged": f1.converged and f2.converged,
            "witness_single": f1, "witness_product": f2}


def verify_fidelity_multiplicativity(n: int, trials: int, seed: int = 0, parity: str = EVEN,
                                     config: FidelityConfig | None = None) -> MultiplicativityReport:
    """Compare ``F(psi (x) a_8)`` with ``F(psi) / 2`` on random fixed-parity states."""
    if n > 4:
        raise ValueError("harness supports n <= 4 (n + 4 qubits are optimised)")
    if parity == MIXED or parity not in (EVEN, ODD):
        raise ValueError("parity must be 'even' or 'odd'")
    config = config or FidelityConfig()
    report = MultiplicativityReport()
    rng = np.random.default_rng(seed)
    for t in range(trials):
        psi = random_state(n, parity, rng)
        row = fidelity_product_trial(psi, replace(config, seed=config.seed + t))
        row["trial"] = t
        report.rows.append(row)
    return report
