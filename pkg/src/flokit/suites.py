"""Verification suites: one per multiplicativity/duality claim plus the identity checks.

Each suite returns a :class:`SuiteResult` holding CSV rows and a summary; the
CLI writes them out, the test-suite asserts on ``ok``.
"""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import extent as ext
from .fidelity import FidelityConfig, fidelity_product_trial, optimize_fidelity
from .flo import circuit_state, random_flo_state
from .fock import EVEN, ODD, PureState, random_state
from .magic4 import (_basis_matrix, a8, closed_extent, closed_fidelity, extract_rsa, fidelity4,
                     m_phi, orbit_invariant)
from .schmidt import (TAU_PAIRS, holder_chain, holder_chain_audit, rho_vector, schmidt_coefficients,
                      t_multiset, tau_norm2_closed, tau_vector, extract_thetas)

SUITES = ("lemma1", "lemma2-duality", "lemma3", "theorem1", "magic-identities", "tau-rho",
          "holder", "schmidt")

DEFAULT_TRIALS = {"lemma1": 20, "lemma2-duality": 200, "lemma3": 500, "theorem1": 5,
                  "magic-identities": 20, "tau-rho": 10_000, "holder": 1000, "schmidt": 100}
DEFAULT_TOL = {"lemma1": 1e-6, "lemma2-duality": 1e-8, "lemma3": 1e-9, "theorem1": 1e-9,
               "magic-identities": 1e-10, "tau-rho": 1e-12, "holder": 1e-12, "schmidt": 1e-9}


@dataclass(frozen=True)
class SuiteConfig:
    suite: str
    trials: int | None = None
    seed: int = 0
    tol: float | None = None
    n: int | None = None
    factors: int = 2
    restarts: int = 32
    out: str | None = None

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES)}")

    @property
    def n_trials(self) -> int:
        return DEFAULT_TRIALS[self.suite] if self.trials is None else self.trials

    @property
    def tolerance(self) -> float:
        return DEFAULT_TOL[self.suite] if self.tol is None else self.tol

    def fidelity_config(self, seed_offset: int = 0) -> FidelityConfig:
        return FidelityConfig(restarts=self.restarts, seed=self.seed + seed_offset)


@dataclass
class SuiteResult:
    suite: str
    header: list
    rows: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        for row in self.rows:
            w.writerow([_fmt(x) for x in row])
        return buf.getvalue()


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.12g}"
    return x


def workers() -> int:
    """Worker threads from ``FLO_KIT_THREADS`` (0 or unset = one per CPU)."""
    raw = os.environ.get("FLO_KIT_THREADS", "0")
    try:
        k = int(raw)
    except ValueError:
        raise ValueError(f"FLO_KIT_THREADS must be an integer, got {raw!r}") from None
    return k if k > 0 else (os.cpu_count() or 1)


def _map(fn, items):
    items = list(items)
    k = workers()
    if k == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=k) as pool:
        return list(pool.map(fn, items))


def _rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng([seed, *key])


def _check(res: SuiteResult, name: str, err: float, tol: float, samples: int):
    ok = bool(err <= tol)
    res.rows.append([name, samples, err, tol, ok])
    if not ok:
        res.failures.append(f"{name}: error {err:.3g} > {tol:.3g}")


# --- suites ------------------------------------------------------------------------

def suite_lemma1(cfg: SuiteConfig) -> SuiteResult:
    res = SuiteResult("lemma1", ["trial", "n", "F_single", "F_product", "gap", "converged"])
    ns = [cfg.n] if cfg.n is not None else [1, 2, 3, 4]
    jobs = [(n, par, t) for n in ns for par in (EVEN, ODD) for t in range(cfg.n_trials)]

    def run(job):
        n, par, t = job
        psi = random_state(n, par, _rng(cfg.seed, n, par == ODD, t))
        return fidelity_product_trial(psi, cfg.fidelity_config(t))

    for k, ((n, par, t), row) in enumerate(zip(jobs, _map(run, jobs))):
        res.rows.append([k, n, row["F_single"], row["F_product"], row["gap"], row["converged"]])
        if row["gap"] > cfg.tolerance:
            res.failures.append(f"n={n} {par} trial {t}: gap {row['gap']:.3g}")
    gaps = [r[4] for r in res.rows]
    res.summary = {"max_gap": max(gaps), "trials": len(jobs),
                   "all_converged": all(r[5] for r in res.rows)}
    return res


def suite_lemma2(cfg: SuiteConfig) -> SuiteResult:
    """Mixed-parity witnesses never beat the best fixed-parity one on fixed-parity states."""
    res = SuiteResult("lemma2-duality",
                      ["trial", "extent", "fixed_ratio", "mixed_random", "mixed_perturbed", "ok"])
    slack = cfg.tolerance
    for t in range(cfg.n_trials):
        rng = _rng(cfg.seed, t)
        psi = random_state(4, EVEN, rng)
        xi = closed_extent(psi)
        cert = ext.witness_even4(psi)
        omega = random_state(4, None, rng)
        r_rand = ext.dual_ratio(psi, omega, fidelity4(omega))
        beta = rng.uniform(0, np.pi / 2)
        odd = random_state(4, ODD, rng).amplitudes
        vec = np.cos(beta) * cert.witness.amplitudes + np.sin(beta) * np.exp(1j * rng.uniform(0, 7)) * odd
        pert = PureState(vec / np.linalg.norm(vec))
        r_pert = ext.dual_ratio(psi, pert, fidelity4(pert))
        ok = max(r_rand, r_pert) <= cert.lower_bound + slack and abs(cert.lower_bound - xi) <= 1e-9
        res.rows.append([t, xi, cert.lower_bound, r_rand, r_pert, ok])
        if not ok:
            res.failures.append(f"trial {t}: mixed witness ratio {max(r_rand, r_pert):.12g} > {xi:.12g}")
    res.summary = {"max_excess": max(max(r[3], r[4]) - r[2] for r in res.rows)}
    return res


def suite_lemma3(cfg: SuiteConfig) -> SuiteResult:
    res = SuiteResult("lemma3", ["trial", "l1_squared", "lower", "gap", "residual", "ok"])
    for t in range(cfg.n_trials):
        psi = random_state(4, EVEN, _rng(cfg.seed, t))
        dec = ext.decompose_even4(psi)
        cert = ext.witness_even4(psi)
        gap = dec.l1_squared - cert.lower_bound
        resid = dec.residual(psi)
        ok = abs(gap) <= cfg.tolerance and resid <= 1e-10
        res.rows.append([t, dec.l1_squared, cert.lower_bound, gap, resid, ok])
        if not ok:
            res.failures.append(f"trial {t}: gap {gap:.3g}, residual {resid:.3g}")
    res.summary = {"max_gap": max(abs(r[3]) for r in res.rows),
                   "max_residual": max(r[4] for r in res.rows)}
    return res


def suite_theorem1(cfg: SuiteConfig) -> SuiteResult:
    res = SuiteResult("theorem1", ["trial", "factors", "lower", "upper", "gap", "witness_F_rule",
                                   "witness_F_opt", "mixed_lower", "mixed_upper", "mixed_predicted",
                                   "ok"])
    k = cfg.factors
    if k < 1 or 4 * k > 12:
        raise ValueError("theorem1 supports 1 to 3 factors")

    def run(t):
        rng = _rng(cfg.seed, k, t)
        factors = [random_state(4, EVEN, rng) for _ in range(k)]
        pb = ext.product_extent_bounds(factors)
        f_opt = float("nan")
        if 4 * k <= 8:
            f_opt = optimize_fidelity(pb.witness, cfg.fidelity_config(t)).value
        psi = random_state(1 + t % 2, None, rng)
        br = ext.extent_bracket_general(psi, factors[0], cfg.fidelity_config(t))
        return pb, f_opt, br

    for t, (pb, f_opt, br) in enumerate(_map(run, range(cfg.n_trials))):
        fails = []
        if abs(pb.gap) > cfg.tolerance:
            fails.append(f"duality gap {pb.gap:.3g}")
        if not np.isnan(f_opt) and abs(f_opt - pb.witness_fidelity) > ext.OPTIMIZER_GAP_TOL:
            fails.append(f"witness fidelity {f_opt:.12g} vs product rule {pb.witness_fidelity:.12g}")
        spread = max(br.lower, br.upper, br.predicted) - min(br.lower, br.upper, br.predicted)
        if spread > ext.OPTIMIZER_GAP_TOL:
            fails.append(f"mixed-parity bracket spread {spread:.3g}")
        res.rows.append([t, k, pb.lower, pb.upper, pb.gap, pb.witness_fidelity, f_opt,
                         br.lower, br.upper, br.predicted, not fails])
        res.failures.extend(f"trial {t}: {f}" for f in fails)
    res.summary = {"max_gap": max(abs(r[4]) for r in res.rows), "factors": k}
    return res


def suite_magic(cfg: SuiteConfig) -> SuiteResult:
    res = SuiteResult("magic-identities", ["check", "samples", "max_error", "tol", "ok"])
    tol = cfg.tolerance
    E = _basis_matrix()
    _check(res, "magic_basis_orthonormal", float(np.max(np.abs(E.conj().T @ E - np.eye(8)))), 1e-15, 1)
    phis = 2 * np.pi * np.arange(64) / 64
    _check(res, "mphi_fidelity_closed", max(abs(closed_fidelity(m_phi(p)) - 0.5 * (1 + abs(np.cos(p / 2))))
                                            for p in phis), 1e-12, 64)
    _check(res, "mphi_extent_closed", max(abs(closed_extent(m_phi(p)) - 1 - abs(np.sin(p / 2)))
                                          for p in phis), 1e-12, 64)
    _check(res, "a8_fidelity", abs(closed_fidelity(a8()) - 0.5), 1e-15, 1)
    recon = 0.0
    rng = _rng(cfg.seed, 0)
    for _ in range(1000):
        psi = random_state(4, EVEN, rng)
        mc = extract_rsa(psi)
        recon = max(recon, float(np.max(np.abs(mc.reconstruct() - np.exp(1j * mc.gauge) * psi.amplitudes))))
    _check(res, "rsa_reconstruction", recon, tol, 1000)
    drift = 0.0
    for s in range(cfg.n_trials):
        psi = random_state(4, EVEN, _rng(cfg.seed, 1, s))
        q0 = orbit_invariant(psi)
        for c in range(200):
            u = random_flo_state(4, EVEN, seed=cfg.seed * 100_003 + s * 1000 + c)
            drift = max(drift, abs(orbit_invariant(u.apply(psi)) - q0))
    _check(res, "orbit_invariance", drift, tol, 200 * cfg.n_trials)
    flo_err = max(abs(closed_fidelity(circuit_state(random_flo_state(4, EVEN, s))) - 1) for s in range(100))
    _check(res, "flo_states_fidelity_one", flo_err, tol, 100)
    res.summary = {r[0]: r[2] for r in res.rows}
    return res


def suite_tau_rho(cfg: SuiteConfig) -> SuiteResult:
    res = SuiteResult("tau-rho", ["check", "samples", "max_error", "tol", "ok"])
    n = cfg.n_trials
    rng = _rng(cfg.seed, 0)
    th = rng.uniform(0, 2 * np.pi, size=(n, 4))
    err = max(abs(float(np.sum(tau_vector(x) ** 2)) - tau_norm2_closed(x)) for x in th)
    _check(res, "tau_norm_closed_form", err, cfg.tolerance, n)
    r = rng.normal(size=(n, 8))
    r /= np.linalg.norm(r, axis=1, keepdims=True)
    err = max(abs(float(np.sum(rho_vector(x) ** 2)) - 0.5) for x in r)
    _check(res, "rho_norm_half", err, cfg.tolerance, n)
    big = rng.uniform(0, 2 * np.pi, size=(10 * n, 4))
    excess = max(0.0, float(np.max(_tau_norm2_batch(big))) - 1.0)
    _check(res, "tau_norm_le_one", excess, cfg.tolerance, 10 * n)
    norm_err = max(abs(float(np.sum(t_multiset(x) ** 2)) - 1) for x in th[:1000])
    _check(res, "t_theta_normalisation", norm_err, cfg.tolerance, min(n, 1000))
    res.summary = {r[0]: r[2] for r in res.rows}
    return res


def _tau_norm2_batch(thetas: np.ndarray) -> np.ndarray:
    """Brute-force ``||tau||**2`` for many angle vectors at once."""
    c, s = np.cos(thetas), np.sin(thetas)
    tot = np.zeros(len(thetas))
    for p, q in TAU_PAIRS:
        tp = np.prod(np.where(np.array([int(b) for b in p]) == 1, s, c), axis=1)
        tq = np.prod(np.where(np.array([int(b) for b in q]) == 1, s, c), axis=1)
        tot += (np.abs(tp) + np.abs(tq)) ** 2
    return tot


def suite_holder(cfg: SuiteConfig) -> SuiteResult:
    res = SuiteResult("holder", ["trial", "raw", "triangle", "holder", "final_bound", "cap", "ok"])
    half = cfg.n_trials // 2
    rows = (holder_chain_audit(trials=cfg.n_trials - half, seed=cfg.seed, parity=EVEN).rows
            + holder_chain_audit(trials=half, seed=cfg.seed + 1, parity=ODD).rows)
    for k, r in enumerate(rows):
        res.rows.append([k, r.raw, r.triangle, r.holder, r.final_bound, r.cap, r.ok])
        if not r.ok:
            res.failures.append(f"audit {k}: chain not monotone")
    # equality case: FLO psi, theta = 0, U_A = I, U_B preparing psi
    u_b = random_flo_state(4, EVEN, cfg.seed)
    eq = holder_chain(circuit_state(u_b), np.zeros(4), None, u_b, fidelity=1.0)
    spread = max(eq.raw, eq.cap) - min(eq.raw, eq.triangle, eq.holder, eq.final_bound)
    if spread > 1e-12:
        res.failures.append(f"equality case spread {spread:.3g}")
    res.summary = {"audits": len(rows), "equality_spread": spread}
    return res


def suite_schmidt(cfg: SuiteConfig) -> SuiteResult:
    res = SuiteResult("schmidt", ["trial", "n", "residual", "ok"])
    k = 0
    for n in (4, 6):
        for t in range(cfg.n_trials):
            psi = circuit_state(random_flo_state(n, EVEN, seed=cfg.seed * 7919 + 1000 * n + t))
            cut = (n // 2, n - n // 2)
            thetas = extract_thetas(psi, cut)
            sv = np.sort(schmidt_coefficients(psi, cut))[::-1]
            resid = float(np.max(np.abs(np.sort(np.abs(t_multiset(thetas)))[::-1] - sv)))
            ok = resid <= cfg.tolerance
            res.rows.append([k, n, resid, ok])
            if not ok:
                res.failures.append(f"n={n} trial {t}: residual {resid:.3g}")
            k += 1
    res.summary = {"max_residual": max(r[2] for r in res.rows)}
    return res


_RUNNERS = {"lemma1": suite_lemma1, "lemma2-duality": suite_lemma2, "lemma3": suite_lemma3,
            "theorem1": suite_theorem1, "magic-identities": suite_magic, "tau-rho": suite_tau_rho,
            "holder": suite_holder, "schmidt": suite_schmidt}


def run_suite(cfg: SuiteConfig) -> SuiteResult:
    return _RUNNERS[cfg.suite](cfg)


# --- magic-state table -----------------------------------------------------------

TABLE_HEADER = ["phi", "extent_closed", "extent_lower", "extent_upper", "fidelity_closed",
                "fidelity_optimized"]


def mphi_table(grid: int, config: FidelityConfig | None = None) -> list[list[float]]:
    """Extent and fidelity columns for ``M_phi`` over ``phi = 2 pi k / grid``."""
    if grid < 2:
        raise ValueError("grid must be >= 2")
    config = config or FidelityConfig()

    def row(k):
        phi = 2 * np.pi * k / grid
        psi = m_phi(phi)
        return [phi, closed_extent(psi), ext.witness_even4(psi).lower_bound,
                ext.decompose_even4(psi).l1_squared, closed_fidelity(psi),
                optimize_fidelity(psi, replace(config, seed=config.seed + k)).value]

    return _map(row, range(grid))
