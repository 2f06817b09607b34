"""Magic-basis coordinates and closed forms for even 4-qubit states.

Every even 4-qubit state can be written, after a global phase, as
``sum_j (cos(a) r_j + i sin(a) s_j) eta_j`` with real orthonormal ``r, s``.
The orbit angle ``a`` is fixed by the FLO-invariant ``|sum_j z_j**2| = cos(2a)``
of the magic-basis coefficients ``z``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fock import EVEN, ODD, PureState, apply_pauli, basis_state, majorana_op, parity_split

DEGENERATE_TOL = 1e-10

_PAIRS = [("0000", "1111", +1), ("0011", "1100", -1), ("0101", "1010", +1), ("1001", "0110", -1)]


@lru_cache(maxsize=1)
def _basis_matrix() -> np.ndarray:
    cols = []
    for p, q, sign in _PAIRS:
        u, v = basis_state(p).amplitudes, basis_state(q).amplitudes
        cols.append((u + sign * v) / np.sqrt(2))
        cols.append(1j * (u - sign * v) / np.sqrt(2))
    E = np.array(cols).T
    E.flags.writeable = False
    return E


def magic_basis() -> list[PureState]:
    """The eight states eta_1..eta_8 (returned zero-indexed)."""
    return [PureState(col) for col in _basis_matrix().T]


def _check_even4(psi: PureState):
    if psi.n != 4:
        raise ValueError(f"expected a 4-qubit state, got n={psi.n}")
    if psi.parity_class != EVEN:
        raise ValueError(f"expected an even-parity state, got {psi.parity_class}")


def to_magic_coords(psi: PureState) -> np.ndarray:
    """Coefficients ``z_j = <eta_j|psi>``."""
    _check_even4(psi)
    return _basis_matrix().conj().T @ psi.amplitudes


def from_magic_coords(z) -> PureState:
    return PureState(_basis_matrix() @ np.asarray(z, dtype=complex))


def orbit_invariant(psi: PureState) -> float:
    """``|sum_j z_j**2|``: 0 on FLO states, 1 on the maximally magic orbit."""
    z = to_magic_coords(psi)
    return float(min(abs(np.sum(z * z)), 1.0))


def _conj_partner(r: np.ndarray) -> np.ndarray:
    # pairs (1,2), (3,4), ... rotated by 90 degrees: always a unit vector orthogonal to r
    out = np.empty_like(r)
    out[0::2] = -r[1::2]
    out[1::2] = r[0::2]
    return out


@dataclass(frozen=True, eq=False)
class MagicCoords:
    z: np.ndarray
    gauge: float
    a: float
    r: np.ndarray
    s: np.ndarray
    s_degenerate: bool = False

    @property
    def orbit_invariant(self) -> float:
        return float(np.cos(2 * self.a))

    @property
    def fidelity(self) -> float:
        return 0.5 * (1 + abs(np.sin(2 * self.a)))

    @property
    def extent(self) -> float:
        return 1 + abs(np.cos(2 * self.a))

    def reconstruct(self) -> np.ndarray:
        """``e^{i gauge} psi`` rebuilt from ``(a, r, s)``."""
        w = np.cos(self.a) * self.r + 1j * np.sin(self.a) * self.s
        return _basis_matrix() @ w

    def to_json(self) -> dict:
        return {"a": float(self.a), "gauge": float(self.gauge),
                "r": [float(x) for x in self.r], "s": [float(x) for x in self.s],
                "fidelity": self.fidelity, "extent": self.extent,
                "orbit_invariant": self.orbit_invariant}


def extract_rsa(psi: PureState) -> MagicCoords:
    """Gauge-fix so that ``sum z**2`` is real and non-negative, then read off ``(a, r, s)``.

    With that gauge the real and imaginary parts of ``z`` are orthogonal and
    the real part is the longer one, which lands ``a`` in ``[0, pi/4]``
    without a separate cos/sin swap.  At ``a = 0`` the vector ``s`` is
    arbitrary; an orthogonal completion is returned and ``s_degenerate`` set.
    """
    z = to_magic_coords(psi)
    q = np.sum(z * z)
    gauge = -np.angle(q) / 2 if abs(q) > 0 else 0.0
    zg = np.exp(1j * gauge) * z
    x, y = zg.real, zg.imag
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    a = float(np.arctan2(ny, nx))
    r = x / nx
    if a < DEGENERATE_TOL:
        s = _conj_partner(r)
        return MagicCoords(z, float(gauge), a, r, s, s_degenerate=True)
    s = y / ny
    # re-orthogonalise against rounding in the gauge fix
    s = s - (s @ r) * r
    s /= np.linalg.norm(s)
    return MagicCoords(z, float(gauge), a, r, s)


def m_phi(phi: float) -> PureState:
    amps = np.zeros(16, dtype=complex)
    amps[[0b0000, 0b0011, 0b1100]] = 0.5
    amps[0b1111] = 0.5 * np.exp(1j * phi)
    return PureState(amps)


def a8() -> PureState:
    amps = np.zeros(16, dtype=complex)
    amps[[0b0000, 0b1111]] = 1 / np.sqrt(2)
    return PureState(amps)


def to_even(psi: PureState) -> PureState:
    """Map an odd state to an even one with ``c_0 = X_0``, itself an FLO unitary."""
    if psi.parity_class == ODD:
        return apply_pauli(majorana_op(0, psi.n), psi)
    return psi


def closed_fidelity(psi: PureState) -> float:
    """FLO fidelity ``(1 + sqrt(1 - |sum z**2|**2)) / 2`` of an even 4-qubit state.

    With ``z = x + i y`` the square root equals ``2 |x ^ y|``, which is
    evaluated directly: near the maximally magic orbit ``1 - q**2`` would
    cancel catastrophically.
    """
    z = to_magic_coords(psi)
    x, y = z.real, z.imag
    wedge = np.outer(x, y) - np.outer(y, x)
    return float(0.5 * (1 + min(1.0, np.sqrt(2) * np.linalg.norm(wedge))))


def closed_extent(psi: PureState) -> float:
    """FLO extent ``1 + |sum z**2|`` of an even 4-qubit state."""
    return 1 + orbit_invariant(psi)


def fidelity4(psi: PureState) -> float:
    """Closed-form FLO fidelity of any 4-qubit state.

    Odd parts are mapped to even ones by ``c_0``.  Every FLO state has fixed
    parity, so a mixed state takes the larger weighted sector fidelity.
    """
    if psi.n != 4:
        raise ValueError(f"expected a 4-qubit state, got n={psi.n}")
    a, psi_e, b, psi_o = parity_split(psi)
    return max(abs(w) ** 2 * closed_fidelity(to_even(part))
               for w, part in ((a, psi_e), (b, psi_o)) if part is not None)


def extent4(psi: PureState) -> float:
    """Closed-form FLO extent of a fixed-parity 4-qubit state."""
    if psi.parity_class == ODD:
        psi = to_even(psi)
    return closed_extent(psi)
