"""Botero normal form of even FLO states and the Hoelder-chain audit behind fidelity multiplicativity."""

from __future__ import annotations

import csv
import io
import functools
from dataclasses import dataclass, field

import numpy as np

from .flo import FloCircuit, MajoranaRotation, random_flo_state
from .fock import EVEN, PureState, random_state
from .magic4 import a8, extract_rsa, fidelity4

# bit-string pairs (y, complement) grouped as in the magic basis
TAU_PAIRS = (("0000", "1111"), ("1100", "0011"), ("1010", "0101"), ("1001", "0110"))
SPECTRUM_TOL = 1e-8


class ResidualTooLarge(ValueError):
    """Schmidt spectrum is not of the product form ``prod cos^(1-y) sin^y``."""


@dataclass(frozen=True, eq=False)
class BoteroForm:
    cut: tuple
    thetas: np.ndarray
    local_a: FloCircuit | None = None
    local_b: FloCircuit | None = None

    def coefficients(self) -> np.ndarray:
        return t_multiset(self.thetas)


def t_theta(thetas, y: str) -> float:
    thetas = np.asarray(thetas, dtype=float)
    if len(y) != len(thetas):
        raise ValueError(f"bit-string {y!r} does not match {len(thetas)} angles")
    bits = np.array([int(c) for c in y])
    return float(np.prod(np.where(bits == 1, np.sin(thetas), np.cos(thetas))))


def t_multiset(thetas) -> np.ndarray:
    """All values ``t_theta(y)``, ``y`` in lexicographic order (first angle = leftmost bit)."""
    return functools.reduce(np.kron, ([np.cos(th), np.sin(th)] for th in np.asarray(thetas, float)),
                            np.ones(1))


def tau_vector(thetas) -> np.ndarray:
    thetas = np.asarray(thetas, dtype=float)
    if thetas.shape != (4,):
        raise ValueError("tau needs exactly four angles")
    return np.array([abs(t_theta(thetas, p)) + abs(t_theta(thetas, q)) for p, q in TAU_PAIRS])


def tau_norm2_closed(thetas) -> float:
    s = np.sin(2 * np.asarray(thetas, dtype=float))
    c = np.cos(2 * np.asarray(thetas, dtype=float))
    return float(0.5 * (1 + abs(np.prod(s)) + np.prod(c)))


def rho_vector(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if r.shape != (8,):
        raise ValueError("rho needs a real 8-vector")
    if abs(np.linalg.norm(r) - 1) > 1e-10:
        raise ValueError(f"r must be a unit vector (norm {np.linalg.norm(r):.15g})")
    return np.abs(r[0::2] + 1j * r[1::2]) / np.sqrt(2)


def _lift(circ: FloCircuit | None, offset: int) -> list[MajoranaRotation]:
    if circ is None:
        return []
    return [MajoranaRotation(r.i + 2 * offset, r.j + 2 * offset, r.angle) for r in circ.rotations]


def synthesize_botero(thetas, local_a: FloCircuit | None, local_b: FloCircuit | None,
                      cut: tuple[int, int]) -> PureState:
    """``(U_A (x) U_B) sum_y t(y) |y>_A |y 0...0>_B``.

    Local circuits act through even rotations, which embed into the global
    Majorana indices by an offset (the Jordan-Wigner strings cancel in pairs).
    """
    n_a, n_b = cut
    thetas = np.asarray(thetas, dtype=float)
    if len(thetas) != n_a or n_a > n_b:
        raise ValueError(f"need {n_a} angles and n_A <= n_B, got {len(thetas)} and cut {cut}")
    for circ, size in ((local_a, n_a), (local_b, n_b)):
        if circ is not None and circ.n != size:
            raise ValueError(f"local circuit on {circ.n} qubits does not fit block of {size}")
    n = n_a + n_b
    amps = np.zeros(2**n, dtype=complex)
    t = t_multiset(thetas)
    for y in range(2**n_a):
        amps[(y << n_b) | (y << (n_b - n_a))] = t[y]
    rots = _lift(local_a, 0) + _lift(local_b, n_a)
    return FloCircuit(n, "0" * n, tuple(rots)).apply(PureState(amps))


def schmidt_coefficients(psi: PureState, cut: tuple[int, int]) -> np.ndarray:
    n_a, n_b = cut
    if n_a + n_b != psi.n:
        raise ValueError(f"cut {cut} does not match {psi.n} qubits")
    return np.linalg.svd(psi.amplitudes.reshape(2**n_a, 2**n_b), compute_uv=False)


def extract_thetas(psi: PureState, cut: tuple[int, int]) -> np.ndarray:
    """Recover angles in ``[0, pi/4]`` (ascending) from the Schmidt spectrum.

    Ratios to the leading coefficient are products of ``tan(theta_i)``; the
    largest ratio not yet explained by the angles found so far is the next
    tangent.  Raises :class:`ResidualTooLarge` if the rebuilt spectrum misses.
    """
    n_a, n_b = cut
    if n_a > n_b:
        raise ValueError("cut must have n_A <= n_B")
    sv = np.sort(schmidt_coefficients(psi, cut))[::-1][:2**n_a]
    ratios = list(sv[1:] / sv[0])
    generated = [1.0]
    tans = []
    for _ in range(n_a):
        t = max(ratios)
        tans.append(t)
        new = [g * t for g in generated]
        for g in new:
            ratios.pop(int(np.argmin(np.abs(np.asarray(ratios) - g))))
        generated += new
    thetas = np.sort(np.arctan(np.clip(tans, 0.0, 1.0)))
    rebuilt = np.sort(np.abs(t_multiset(thetas)))[::-1]
    resid = float(np.max(np.abs(rebuilt - sv)))
    if resid > SPECTRUM_TOL:
        raise ResidualTooLarge(f"Schmidt spectrum mismatch {resid:.3g}")
    return thetas


# --- Hoelder chain --------------------------------------------------------------

@dataclass(frozen=True)
class ChainRow:
    raw: float
    triangle: float
    holder: float
    final_bound: float
    cap: float
    tau_rho: float
    ok: bool


def holder_chain(psi: PureState, thetas, u_a: FloCircuit | None, u_b: FloCircuit | None,
                 fidelity: float | None = None, slack: float = 1e-12) -> ChainRow:
    """Evaluate the inequality chain bounding ``|<a_8 psi| (U_A (x) U_B) sum_y t(y)|y>|y>|``.

    ``psi`` lives on the 4-qubit B block.  The links are: raw overlap, the
    triangle inequality, the (1, inf) Hoelder split, the Cauchy-Schwarz bound
    ``||tau|| ||rho|| max_y |<psi|U_B|y>|``, and the cap ``sqrt(F(psi)/2)``.
    """
    if psi.n != 4:
        raise ValueError("the audit works on a 4-qubit B block")
    thetas = np.asarray(thetas, dtype=float)
    t = t_multiset(thetas)
    ident = FloCircuit(4, "0000")
    u_a, u_b = u_a or ident, u_b or ident
    # <a8|U_A|y> = conj((U_A^dag a8)[y]),  <psi|U_B|y> = conj((U_B^dag psi)[y])
    wa = u_a.apply_inverse(a8()).amplitudes.conj()
    wb = u_b.apply_inverse(psi).amplitudes.conj()
    raw = abs(np.sum(t * wa * wb))
    first = np.abs(t * wa)
    triangle = float(np.sum(first * np.abs(wb)))
    m_b = float(np.max(np.abs(wb)))
    holder = float(np.sum(first)) * m_b
    r = extract_rsa(u_a.apply_inverse(a8())).r
    tau, rho = tau_vector(thetas), rho_vector(r)
    final = float(np.linalg.norm(tau) * np.linalg.norm(rho)) * m_b
    f = fidelity4(psi) if fidelity is None else fidelity
    cap = float(np.sqrt(f / 2))
    chain = [raw, triangle, holder, final, cap]
    ok = all(x <= y + slack for x, y in zip(chain, chain[1:]))
    return ChainRow(float(raw), triangle, holder, final, cap, float(tau @ rho), bool(ok))


@dataclass
class ChainAudit:
    rows: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["trial", "raw", "triangle", "holder", "final_bound", "cap", "ok"])
        for k, r in enumerate(self.rows):
            w.writerow([k] + [f"{x:.12g}" for x in (r.raw, r.triangle, r.holder, r.final_bound, r.cap)]
                       + [int(r.ok)])
        return buf.getvalue()


def holder_chain_audit(psi: PureState | None = None, n: int = 4, trials: int = 1,
                       seed: int = 0, parity: str = EVEN) -> ChainAudit:
    """Random ``(theta, U_A, U_B)`` audits of the chain for one or many fixed-parity states.

    States on fewer than four qubits are padded with ``|0>`` qubits (this
    keeps them FLO, so the cap uses fidelity 1).  With ``psi=None`` a fresh
    random state of parity ``parity`` is drawn per trial.
    """
    rng = np.random.default_rng(seed)
    audit = ChainAudit()
    for _ in range(trials):
        state = psi if psi is not None else random_state(n, parity, rng)
        fid = None
        if state.n < 4:
            state = state.kron(PureState(np.eye(2 ** (4 - state.n))[0]))
            fid = 1.0
        thetas = rng.uniform(0, 2 * np.pi, size=4)
        seeds = rng.integers(2**32, size=2)
        u_a = random_flo_state(4, EVEN, int(seeds[0]))
        u_b = random_flo_state(4, EVEN, int(seeds[1]))
        audit.rows.append(holder_chain(state, thetas, u_a, u_b, fid))
    return audit
