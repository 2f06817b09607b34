"""Dense qubit states, Pauli strings and the Jordan-Wigner Majorana operators.

Bit-string convention: qubit 0 is the leftmost character of a bit-string and
the most significant bit of the amplitude index, so ``|q0 q1 ... q_{n-1}>``
sits at index ``int("q0q1...", 2)``.  Qubit ``k`` is fermionic mode ``k``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

import numpy as np

NORM_TOL = 1e-12
# amplitudes at or below this modulus do not count towards the parity class
SUPPORT_TOL = 1e-12

EVEN, ODD, MIXED = "even", "odd", "mixed"


def _popcount_parity(idx: np.ndarray) -> np.ndarray:
    return np.bitwise_count(idx) & 1


@lru_cache(maxsize=None)
def _weight_parity(n: int) -> np.ndarray:
    out = _popcount_parity(np.arange(2**n, dtype=np.int64)).astype(bool)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class PureState:
    """Immutable dense state vector on ``n`` qubits.

    ``normalized=False`` allows intermediate, unnormalised vectors; every
    public operation in the package expects the default.
    """

    amplitudes: np.ndarray
    normalized: bool = True
    n: int = field(init=False)
    parity_class: str = field(init=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        dim = amps.shape[0]
        n = dim.bit_length() - 1
        if dim < 2 or 2**n != dim:
            raise ValueError(f"amplitude vector length {dim} is not 2**n with n >= 1")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        if self.normalized:
            norm = np.linalg.norm(amps)
            if abs(norm - 1.0) > NORM_TOL:
                raise ValueError(f"state is not normalized (norm = {norm:.15g})")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "parity_class", _classify(amps, n))

    def __repr__(self):
        return f"PureState(n={self.n}, parity={self.parity_class})"

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def vdot(self, other: "PureState") -> complex:
        """Inner product ``<self|other>``."""
        if other.n != self.n:
            raise ValueError(f"qubit count mismatch: {self.n} vs {other.n}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def overlap2(self, other: "PureState") -> float:
        return abs(self.vdot(other)) ** 2

    def kron(self, other: "PureState") -> "PureState":
        """Tensor product with ``other`` occupying the highest-index qubits."""
        return PureState(np.kron(self.amplitudes, other.amplitudes),
                         normalized=self.normalized and other.normalized)

    def to_json(self) -> dict:
        return {"n": self.n,
                "amplitudes": [[float(a.real), float(a.imag)] for a in self.amplitudes]}

    @classmethod
    def from_json(cls, data: dict | str) -> "PureState":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            n = int(data["n"])
            pairs = np.asarray(data["amplitudes"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed state JSON: {exc}") from exc
        if pairs.shape != (2**n, 2):
            raise ValueError(f"expected {2**n} [re, im] pairs, got shape {pairs.shape}")
        return cls(pairs[:, 0] + 1j * pairs[:, 1])


def _classify(amps: np.ndarray, n: int) -> str:
    support = np.abs(amps) > SUPPORT_TOL
    odd_w = _weight_parity(n)
    has_even = bool(np.any(support & ~odd_w))
    has_odd = bool(np.any(support & odd_w))
    if has_even and has_odd:
        return MIXED
    return ODD if has_odd else EVEN


def basis_state(bits: str) -> PureState:
    if not bits or set(bits) - {"0", "1"}:
        raise ValueError(f"invalid bit-string {bits!r}")
    amps = np.zeros(2 ** len(bits), dtype=complex)
    amps[int(bits, 2)] = 1.0
    return PureState(amps)


def tensor(states: Iterable[PureState]) -> PureState:
    states = list(states)
    out = states[0]
    for s in states[1:]:
        out = out.kron(s)
    return out


def random_state(n: int, parity: str | None = None, rng=None) -> PureState:
    """Normalised complex Gaussian amplitudes, optionally confined to one parity sector."""
    rng = np.random.default_rng(rng)
    amps = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    if parity == EVEN:
        amps[_weight_parity(n)] = 0
    elif parity == ODD:
        amps[~_weight_parity(n)] = 0
    elif parity is not None:
        raise ValueError(f"unknown parity {parity!r}")
    return PureState(amps / np.linalg.norm(amps))


# --- Pauli strings -----------------------------------------------------------

# (left, right) -> (power of i, product letter)
_PRODUCT = {
    ("I", "I"): (0, "I"), ("I", "X"): (0, "X"), ("I", "Y"): (0, "Y"), ("I", "Z"): (0, "Z"),
    ("X", "I"): (0, "X"), ("X", "X"): (0, "I"), ("X", "Y"): (1, "Z"), ("X", "Z"): (3, "Y"),
    ("Y", "I"): (0, "Y"), ("Y", "X"): (3, "Z"), ("Y", "Y"): (0, "I"), ("Y", "Z"): (1, "X"),
    ("Z", "I"): (0, "Z"), ("Z", "X"): (1, "Y"), ("Z", "Y"): (3, "X"), ("Z", "Z"): (0, "I"),
}
_PHASES = (1, 1j, -1, -1j)
_PAULI_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class PauliString:
    """``i**power`` times a tensor product of single-qubit Paulis.

    The phase is tracked exactly as an element of {1, i, -1, -i}.
    """

    letters: str
    power: int = 0

    def __post_init__(self):
        if not self.letters or set(self.letters) - set("IXYZ"):
            raise ValueError(f"invalid Pauli letters {self.letters!r}")
        object.__setattr__(self, "power", self.power % 4)

    @property
    def n(self) -> int:
        return len(self.letters)

    @property
    def phase(self) -> complex:
        return _PHASES[self.power]

    def is_hermitian(self) -> bool:
        return self.power in (0, 2)

    def __mul__(self, other: "PauliString") -> "PauliString":
        if other.n != self.n:
            raise ValueError(f"qubit count mismatch: {self.n} vs {other.n}")
        power = self.power + other.power
        out = []
        for a, b in zip(self.letters, other.letters):
            k, c = _PRODUCT[a, b]
            power += k
            out.append(c)
        return PauliString("".join(out), power)

    def __neg__(self) -> "PauliString":
        return PauliString(self.letters, self.power + 2)

    def dagger(self) -> "PauliString":
        return PauliString(self.letters, -self.power)

    def masks(self) -> tuple[int, int]:
        """(flip mask, sign mask) over amplitude-index bits; qubit k is bit n-1-k."""
        flip = sign = 0
        for k, c in enumerate(self.letters):
            bit = 1 << (self.n - 1 - k)
            if c in "XY":
                flip |= bit
            if c in "YZ":
                sign |= bit
        return flip, sign

    def to_matrix(self) -> np.ndarray:
        m = np.array([[self.phase]], dtype=complex)
        for c in self.letters:
            m = np.kron(m, _PAULI_MATS[c])
        return m


def identity(n: int) -> PauliString:
    return PauliString("I" * n)


def pauli_sum(*terms: PauliString) -> dict[str, complex]:
    """Exact linear combination of Pauli strings; zero coefficients are dropped."""
    acc: dict[str, list[int]] = {}
    for t in terms:
        re_im = acc.setdefault(t.letters, [0, 0])
        dre, dim = ((1, 0), (0, 1), (-1, 0), (0, -1))[t.power]
        re_im[0] += dre
        re_im[1] += dim
    return {k: complex(*v) for k, v in acc.items() if v != [0, 0]}


def majorana_op(k: int, n: int) -> PauliString:
    """Jordan-Wigner Majorana ``c_k``: Z string on lower qubits, then X (even k) or Y (odd k)."""
    if not 0 <= k < 2 * n:
        raise IndexError(f"Majorana index {k} out of range for {n} qubits")
    j = k // 2
    return PauliString("Z" * j + ("X" if k % 2 == 0 else "Y") + "I" * (n - j - 1))


@lru_cache(maxsize=4096)
def _pauli_action(letters: str, power: int) -> tuple[np.ndarray, np.ndarray]:
    p = PauliString(letters, power)
    flip, sign = p.masks()
    idx = np.arange(2**p.n, dtype=np.int64)
    n_y = p.letters.count("Y")
    base = _PHASES[(p.power + n_y) % 4]
    phase = np.where(_popcount_parity(idx & sign) == 1, -base, base).astype(complex)
    # out[k] = phase[k ^ flip] * in[k ^ flip]
    src = idx ^ flip
    gathered = phase[src]
    src.flags.writeable = False
    gathered.flags.writeable = False
    return src, gathered


def pauli_action(p: PauliString) -> tuple[np.ndarray, np.ndarray]:
    """Index map and phases such that ``(P v)[k] = phases[k] * v[src[k]]``."""
    return _pauli_action(p.letters, p.power)


def apply_pauli(p: PauliString, psi: PureState) -> PureState:
    if p.n != psi.n:
        raise ValueError(f"Pauli string on {p.n} qubits applied to {psi.n}-qubit state")
    src, phases = pauli_action(p)
    return PureState(phases * psi.amplitudes[src], normalized=psi.normalized)


def parity_operator(n: int) -> PauliString:
    return PauliString("Z" * n)


def parity_split(psi: PureState):
    """Split ``psi = a*psi_e + b*psi_o`` into normalised even and odd parts.

    ``a`` and ``b`` are returned as non-negative reals (typed complex).  A
    component with no weight comes back as ``None`` with coefficient 0.
    """
    odd_w = _weight_parity(psi.n)
    parts = []
    for mask in (~odd_w, odd_w):
        v = np.where(mask, psi.amplitudes, 0)
        w = np.linalg.norm(v)
        if w <= SUPPORT_TOL:
            parts.extend([0j, None])
        else:
            parts.extend([complex(w), PureState(v / w)])
    return tuple(parts)
