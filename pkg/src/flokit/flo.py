"""FLO unitaries as sequences of two-Majorana rotations.

A rotation ``(i, j, theta)`` is ``exp(theta/2 * c_i c_j) = cos(theta/2) + sin(theta/2) c_i c_j``.
It conjugates ``c_i -> cos(theta) c_i - sin(theta) c_j`` and
``c_j -> sin(theta) c_i + cos(theta) c_j``, i.e. a Givens rotation on the
Majorana index space.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .fock import EVEN, ODD, PureState, basis_state, majorana_op, pauli_action

ORTHO_TOL = 1e-10


@dataclass(frozen=True)
class MajoranaRotation:
    i: int
    j: int
    angle: float

    def __post_init__(self):
        if not 0 <= self.i < self.j:
            raise ValueError(f"rotation needs 0 <= i < j, got ({self.i}, {self.j})")

    def check(self, n: int):
        if self.j >= 2 * n:
            raise IndexError(f"Majorana pair ({self.i}, {self.j}) out of range for {n} qubits")

    def inverse(self) -> "MajoranaRotation":
        return MajoranaRotation(self.i, self.j, -self.angle)


@lru_cache(maxsize=None)
def pair_action(i: int, j: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gather map for ``c_i c_j``: ``(c_i c_j v)[k] = phases[k] * v[src[k]]``."""
    return pauli_action(majorana_op(i, n) * majorana_op(j, n))


def _rotate(amps: np.ndarray, i: int, j: int, angle: float, n: int) -> np.ndarray:
    src, ph = pair_action(i, j, n)
    return np.cos(angle / 2) * amps + np.sin(angle / 2) * (ph * amps[src])


def apply_rotation(rot: MajoranaRotation, psi: PureState) -> PureState:
    rot.check(psi.n)
    return PureState(_rotate(psi.amplitudes, rot.i, rot.j, rot.angle, psi.n),
                     normalized=psi.normalized)


def givens(m: int, i: int, j: int, angle: float) -> np.ndarray:
    g = np.eye(m)
    c, s = np.cos(angle), np.sin(angle)
    g[i, i] = g[j, j] = c
    g[i, j] = -s
    g[j, i] = s
    return g


@dataclass(frozen=True)
class FloCircuit:
    """Computational basis state ``initial`` followed by ``rotations`` in order."""

    n: int
    initial: str
    rotations: tuple = field(default=())

    def __post_init__(self):
        if len(self.initial) != self.n or set(self.initial) - {"0", "1"}:
            raise ValueError(f"initial bit-string {self.initial!r} does not match n={self.n}")
        rots = tuple(r if isinstance(r, MajoranaRotation) else MajoranaRotation(*r)
                     for r in self.rotations)
        for r in rots:
            r.check(self.n)
        object.__setattr__(self, "rotations", rots)

    @property
    def parity(self) -> str:
        return ODD if self.initial.count("1") % 2 else EVEN

    def apply(self, psi: PureState) -> PureState:
        """Apply the rotation sequence (not the initial state) to ``psi``."""
        amps = psi.amplitudes
        for r in self.rotations:
            amps = _rotate(amps, r.i, r.j, r.angle, self.n)
        return PureState(amps, normalized=psi.normalized)

    def apply_inverse(self, psi: PureState) -> PureState:
        amps = psi.amplitudes
        for r in reversed(self.rotations):
            amps = _rotate(amps, r.i, r.j, -r.angle, self.n)
        return PureState(amps, normalized=psi.normalized)

    def state(self) -> PureState:
        return circuit_state(self)

    def to_json(self) -> dict:
        return {"n": self.n, "initial": self.initial,
                "rotations": [[r.i, r.j, float(r.angle)] for r in self.rotations]}

    @classmethod
    def from_json(cls, data: dict | str) -> "FloCircuit":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["n"]), str(data["initial"]),
                   tuple(MajoranaRotation(int(i), int(j), float(a))
                         for i, j, a in data["rotations"]))


def circuit_state(circ: FloCircuit) -> PureState:
    return circ.apply(basis_state(circ.initial))


def induced_orthogonal(circ: FloCircuit) -> np.ndarray:
    """Matrix ``R`` with ``U c_k U^dag = sum_l R[k, l] c_l``; first rotation is leftmost."""
    m = 2 * circ.n
    R = np.eye(m)
    for r in circ.rotations:
        c, s = np.cos(r.angle), np.sin(r.angle)
        ci, cj = R[:, r.i].copy(), R[:, r.j].copy()
        R[:, r.i] = c * ci + s * cj
        R[:, r.j] = -s * ci + c * cj
    return R


def all_pairs(n: int) -> list[tuple[int, int]]:
    m = 2 * n
    return [(i, j) for i in range(m) for j in range(i + 1, m)]


def random_flo_state(n: int, parity: str = EVEN, seed: int = 0) -> FloCircuit:
    """One lexicographic sweep over all Majorana pairs with uniform angles."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if parity not in (EVEN, ODD):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    rng = np.random.default_rng(seed)
    pairs = all_pairs(n)
    angles = rng.uniform(0, 2 * np.pi, size=len(pairs))
    initial = ("1" if parity == ODD else "0") + "0" * (n - 1)
    return FloCircuit(n, initial, tuple(MajoranaRotation(i, j, float(a))
                                        for (i, j), a in zip(pairs, angles)))


def circuit_from_orthogonal(R: np.ndarray, initial: str | None = None,
                            atol: float = 1e-14) -> FloCircuit:
    """Givens elimination of a special orthogonal ``R`` into a rotation circuit.

    Row rotations reduce ``R`` to the identity, ``Q_m ... Q_1 R = I``; the
    circuit is then ``Q_1^T, ..., Q_m^T`` in application order.
    """
    R = np.array(R, dtype=float)
    m = R.shape[0]
    if R.shape != (m, m) or m % 2:
        raise ValueError(f"expected an even-dimensional square matrix, got {R.shape}")
    if np.max(np.abs(R @ R.T - np.eye(m))) > ORTHO_TOL:
        raise ValueError("matrix is not orthogonal")
    if np.linalg.det(R) < 0:
        raise ValueError("det(R) = -1; odd FLO elements are reached through the initial bit-string")
    n = m // 2
    W = R.copy()
    rots = []
    for k in range(m - 1):
        for l in range(k + 1, m):
            if abs(W[l, k]) > atol:
                rots.append(_eliminate(W, k, l, np.arctan2(-W[l, k], W[k, k])))
        if W[k, k] < 0:
            rots.append(_eliminate(W, k, _flip_partner(W, k), np.pi))
    return FloCircuit(n, initial or "0" * n, tuple(rots))


def _eliminate(W: np.ndarray, k: int, l: int, phi: float) -> MajoranaRotation:
    c, s = np.cos(phi), np.sin(phi)
    rk, rl = W[k].copy(), W[l].copy()
    W[k] = c * rk - s * rl
    W[l] = s * rk + c * rl
    return MajoranaRotation(k, l, float(-phi))


def _flip_partner(W: np.ndarray, k: int) -> int:
    """Row paired with a negative pivot for a pi rotation: the next negative diagonal."""
    m = W.shape[0]
    for l in range(k + 1, m):
        if W[l, l] < 0:
            return l
    return k + 1
