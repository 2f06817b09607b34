"""FLO extent: explicit decompositions (upper bounds) and dual witnesses (lower bounds)."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .fidelity import FidelityConfig, optimize_fidelity
from .flo import FloCircuit
from .fock import EVEN, ODD, PureState, apply_pauli, majorana_op, parity_split, tensor
from .magic4 import _basis_matrix, closed_extent, extract_rsa, to_even

FLO_TOL = 1e-10
# gap thresholds: closed-form paths vs paths that go through the optimiser
CLOSED_GAP_TOL = 1e-9
OPTIMIZER_GAP_TOL = 1e-6

CLOSED_FORM, OPTIMIZER, PRODUCT_RULE = "closed-form", "optimizer", "product-rule"


@dataclass(frozen=True, eq=False)
class Term:
    coefficient: complex
    state: PureState
    circuit: FloCircuit | None = None


@dataclass(frozen=True, eq=False)
class Decomposition:
    terms: tuple

    @property
    def l1_squared(self) -> float:
        return float(sum(abs(t.coefficient) for t in self.terms) ** 2)

    def vector(self) -> np.ndarray:
        return sum(t.coefficient * t.state.amplitudes for t in self.terms)

    def residual(self, target: PureState) -> float:
        return float(np.max(np.abs(self.vector() - target.amplitudes)))

    def kron(self, other: "Decomposition") -> "Decomposition":
        return Decomposition(tuple(Term(s.coefficient * o.coefficient, s.state.kron(o.state))
                                   for s, o in itertools.product(self.terms, other.terms)))

    def to_json(self) -> list:
        return [[float(t.coefficient.real), float(t.coefficient.imag), t.state.to_json()]
                for t in self.terms]


@dataclass(frozen=True, eq=False)
class Certificate:
    """Dual witness: ``lower_bound = |<witness|psi>|**2 / witness_fidelity``."""

    witness: PureState
    witness_fidelity: float
    lower_bound: float
    provenance: str = CLOSED_FORM
    meta: dict = field(default_factory=dict)


def dual_ratio(psi: PureState, omega: PureState, f_omega: float) -> float:
    if f_omega <= 0:
        raise ValueError("witness fidelity must be positive")
    return abs(omega.vdot(psi)) ** 2 / f_omega


def _magic_state(w: np.ndarray) -> PureState:
    v = _basis_matrix() @ w
    return PureState(v / np.linalg.norm(v))


def decompose_even4(psi: PureState) -> Decomposition:
    """Two FLO terms ``(r +- i s)/sqrt(2)`` in the magic basis with l1**2 = 1 + cos(2a)."""
    mc = extract_rsa(psi)
    if abs(mc.orbit_invariant) < FLO_TOL:
        return Decomposition((Term(1 + 0j, psi),))
    phase = np.exp(-1j * mc.gauge)
    ca, sa = np.cos(mc.a), np.sin(mc.a)
    plus = _magic_state((mc.r + 1j * mc.s) / np.sqrt(2))
    minus = _magic_state((mc.r - 1j * mc.s) / np.sqrt(2))
    return Decomposition((Term(phase * (ca + sa) / np.sqrt(2), plus),
                          Term(phase * (ca - sa) / np.sqrt(2), minus)))


def witness_even4(psi: PureState) -> Certificate:
    """Maximally magic witness ``e^{-i gauge} sum_j r_j eta_j`` of fidelity 1/2."""
    mc = extract_rsa(psi)
    if abs(mc.orbit_invariant) < FLO_TOL:
        return Certificate(psi, 1.0, 1.0, CLOSED_FORM, {"flo_input": True})
    w = PureState(np.exp(-1j * mc.gauge) * (_basis_matrix() @ mc.r))
    return Certificate(w, 0.5, dual_ratio(psi, w, 0.5), CLOSED_FORM)


def parity_split_extent(psi: PureState, xi_even: float, xi_odd: float) -> float:
    """``(|a| sqrt(xi_e) + |b| sqrt(xi_o))**2`` for ``psi = a psi_e + b psi_o``."""
    a, _, b, _ = parity_split(psi)
    return float((abs(a) * np.sqrt(xi_even) + abs(b) * np.sqrt(xi_odd)) ** 2)


def _check_even4(psi: PureState):
    if psi.n != 4 or psi.parity_class != EVEN:
        raise ValueError(f"expected an even 4-qubit state, got n={psi.n}, {psi.parity_class}")


@dataclass(frozen=True, eq=False)
class ProductBounds:
    lower: float
    upper: float
    per_factor: list
    decomposition: Decomposition
    witness: PureState
    witness_fidelity: float

    @property
    def gap(self) -> float:
        return self.upper - self.lower


def product_extent_bounds(factors: list[PureState]) -> ProductBounds:
    """Tensor the per-factor decompositions and witnesses of even 4-qubit factors.

    The lower bound divides by the product of witness fidelities, each witness
    being either a FLO state or on the a_8 orbit.
    """
    if not factors:
        raise ValueError("need at least one factor")
    for f in factors:
        _check_even4(f)
    decs = [decompose_even4(f) for f in factors]
    certs = [witness_even4(f) for f in factors]
    dec = decs[0]
    for d in decs[1:]:
        dec = dec.kron(d)
    upper = dec.l1_squared
    per_upper = [d.l1_squared for d in decs]
    if upper > np.prod(per_upper) * (1 + 1e-15):
        raise AssertionError("tensored decomposition is not submultiplicative")
    witness = tensor(c.witness for c in certs)
    f_w = float(np.prod([c.witness_fidelity for c in certs]))
    lower = dual_ratio(tensor(factors), witness, f_w)
    per = [{"upper": d.l1_squared, "lower": c.lower_bound, "extent": closed_extent(f)}
           for d, c, f in zip(decs, certs, factors)]
    return ProductBounds(lower, upper, per, dec, witness, f_w)


# --- general first factor -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Sector:
    """One parity component: weight, extent, decomposition and witness certificate."""

    parity: str
    weight: complex
    xi: float
    decomposition: Decomposition
    certificate: Certificate


def _component(part: PureState, config: FidelityConfig) -> tuple[float, Decomposition, Certificate]:
    """Extent, decomposition and certificate of a fixed-parity state on at most 4 qubits."""
    if part.n <= 3:
        # every fixed-parity state on at most three qubits is FLO
        res = optimize_fidelity(part, config)
        if res.value < 1 - 1e-9:
            raise RuntimeError(f"fixed-parity {part.n}-qubit state not recognised as FLO "
                               f"(fidelity {res.value:.12g})")
        return 1.0, Decomposition((Term(1 + 0j, part, res.witness),)), \
            Certificate(part, 1.0, 1.0, CLOSED_FORM)
    ev = to_even(part)
    dec, cert = decompose_even4(ev), witness_even4(ev)
    if part.parity_class == ODD:
        c0 = majorana_op(0, 4)
        dec = Decomposition(tuple(Term(t.coefficient, apply_pauli(c0, t.state)) for t in dec.terms))
        cert = Certificate(apply_pauli(c0, cert.witness), cert.witness_fidelity,
                           cert.lower_bound, cert.provenance, cert.meta)
    return closed_extent(ev), dec, cert


def sectors_of(psi: PureState, config: FidelityConfig | None = None) -> list[Sector]:
    if psi.n > 4:
        raise ValueError(f"sector data limited to 4 qubits, got {psi.n}")
    config = config or FidelityConfig()
    a, psi_e, b, psi_o = parity_split(psi)
    return [Sector(parity, w, *_component(part, config))
            for parity, w, part in ((EVEN, a, psi_e), (ODD, b, psi_o)) if part is not None]


@dataclass(frozen=True, eq=False)
class Bracket:
    lower: float
    upper: float
    predicted: float
    decomposition: Decomposition
    witness: PureState
    witness_fidelity: float
    provenance: str
    xi_even: float = 0.0
    xi_odd: float = 0.0
    xi_m: float = 1.0

    @property
    def gap(self) -> float:
        return self.upper - self.lower


def _assemble(target: PureState, sectors: list[Sector], config: FidelityConfig,
              witness_fidelity: str) -> tuple[Decomposition, PureState, float, float]:
    """Join sector decompositions, and sector witnesses weighted to equal ``|alpha|^2 F``.

    With those weights the witness fidelity is the common value of the
    weighted sector fidelities and the dual ratio reaches the parity-split
    formula.  ``witness_fidelity`` picks how F(witness) is obtained.
    """
    dec = Decomposition(tuple(Term(sec.weight * t.coefficient, t.state, t.circuit)
                              for sec in sectors for t in sec.decomposition.terms))
    if dec.residual(target) > 1e-10:
        raise AssertionError("assembled decomposition does not reproduce the target")
    parts = []
    for sec in sectors:
        cert = sec.certificate
        ov = cert.witness.vdot(target)
        parts.append((np.exp(1j * np.angle(ov)) / np.sqrt(cert.witness_fidelity), cert))
    vec = sum(c * cert.witness.amplitudes for c, cert in parts)
    norm2 = float(np.linalg.norm(vec) ** 2)
    omega = PureState(vec / np.sqrt(norm2))
    if witness_fidelity == OPTIMIZER:
        f_omega = optimize_fidelity(omega, config).value
    elif witness_fidelity in (PRODUCT_RULE, CLOSED_FORM):
        f_omega = max(abs(c) ** 2 * cert.witness_fidelity for c, cert in parts) / norm2
    else:
        raise ValueError(f"unknown witness fidelity source {witness_fidelity!r}")
    return dec, omega, f_omega, dual_ratio(target, omega, f_omega)


def extent_bracket(psi: PureState, config: FidelityConfig | None = None,
                   witness_fidelity: str = CLOSED_FORM) -> Bracket:
    """Certified extent of any state on at most 4 qubits via its parity split."""
    config = config or FidelityConfig()
    secs = sectors_of(psi, config)
    dec, omega, f_omega, lower = _assemble(psi, secs, config, witness_fidelity)
    xi = {EVEN: 0.0, ODD: 0.0} | {sec.parity: sec.xi for sec in secs}
    predicted = parity_split_extent(psi, xi[EVEN], xi[ODD])
    return Bracket(lower, dec.l1_squared, predicted, dec, omega, f_omega, witness_fidelity,
                   xi[EVEN], xi[ODD])


def extent_bracket_general(psi: PureState, M: PureState, config: FidelityConfig | None = None,
                           witness_fidelity: str = OPTIMIZER) -> Bracket:
    """Bracket ``xi(psi (x) M)`` for any ``psi`` on at most 4 qubits and even 4-qubit ``M``.

    ``predicted`` is the parity-split formula times ``xi(M)``.  ``upper`` is
    the l1**2 of an explicit decomposition of ``psi (x) M``; ``lower`` is the
    dual ratio of a witness assembled from sector witnesses tensored with the
    witness of ``M``, its FLO fidelity found by the optimiser
    (``"optimizer"``) or by the product rule (``"product-rule"``).
    """
    _check_even4(M)
    config = config or FidelityConfig()
    dec_m, cert_m = decompose_even4(M), witness_even4(M)
    xi_m = closed_extent(M)
    secs = []
    xi = {EVEN: 0.0, ODD: 0.0}
    for sec in sectors_of(psi, config):
        xi[sec.parity] = sec.xi
        cert = Certificate(sec.certificate.witness.kron(cert_m.witness),
                           sec.certificate.witness_fidelity * cert_m.witness_fidelity,
                           sec.xi * xi_m, PRODUCT_RULE)
        secs.append(Sector(sec.parity, sec.weight, sec.xi * xi_m, sec.decomposition.kron(dec_m), cert))
    dec, omega, f_omega, lower = _assemble(psi.kron(M), secs, config, witness_fidelity)
    predicted = parity_split_extent(psi, xi[EVEN], xi[ODD]) * xi_m
    return Bracket(lower, dec.l1_squared, predicted, dec, omega, f_omega, witness_fidelity,
                   xi[EVEN], xi[ODD], xi_m)
