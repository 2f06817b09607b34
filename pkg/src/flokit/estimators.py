"""scikit-learn style wrappers: batches of state vectors in, feature columns out."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_states
from .extent import decompose_even4, witness_even4
from .fidelity import FidelityConfig, optimize_fidelity
from .fock import EVEN
from .magic4 import closed_extent, closed_fidelity, extract_rsa


class MagicOrbitTransformer(TransformerMixin, BaseEstimator):
    """Map even 4-qubit states to ``[a, orbit_invariant, fidelity, extent]``."""

    feature_names = ("a", "orbit_invariant", "fidelity", "extent")

    def fit(self, X, y=None):
        check_states(X, n_qubits=4, parity=EVEN)
        self.n_features_in_ = 16
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        out = []
        for psi in check_states(X, n_qubits=4, parity=EVEN):
            mc = extract_rsa(psi)
            out.append([mc.a, mc.orbit_invariant, closed_fidelity(psi), closed_extent(psi)])
        return np.array(out)

    def get_feature_names_out(self, input_features=None):
        return np.array(self.feature_names, dtype=object)


class FloFidelity(TransformerMixin, BaseEstimator):
    """Optimised FLO fidelity per sample.

    ``fit`` stores the full results (``fidelity_``, ``witnesses_``,
    ``converged_``); ``transform`` returns the fidelity column for new data.
    """

    def __init__(self, restarts=32, sweep_limit=500, tol=1e-10, seed=0, sector="both"):
        self.restarts = restarts
        self.sweep_limit = sweep_limit
        self.tol = tol
        self.seed = seed
        self.sector = sector

    def _config(self) -> FidelityConfig:
        return FidelityConfig(self.restarts, self.sweep_limit, self.tol, self.seed, self.sector)

    def _run(self, X):
        config = self._config()
        return [optimize_fidelity(psi, config) for psi in check_states(X, self.n_qubits_)]

    def fit(self, X, y=None):
        states = check_states(X)
        self.n_qubits_ = states[0].n
        self.n_features_in_ = 2**self.n_qubits_
        self.results_ = self._run(states)
        self.fidelity_ = np.array([r.value for r in self.results_])
        self.witnesses_ = [r.witness for r in self.results_]
        self.converged_ = np.array([r.converged for r in self.results_])
        return self

    def transform(self, X):
        check_is_fitted(self, "n_qubits_")
        return np.array([[r.value] for r in self._run(X)])

    def fit_transform(self, X, y=None, **fit_params):
        return self.fit(X).fidelity_[:, None]


class FloExtent(TransformerMixin, BaseEstimator):
    """Closed-form extent bracket ``[lower, upper]`` of even 4-qubit states."""

    def fit(self, X, y=None):
        states = check_states(X, n_qubits=4, parity=EVEN)
        self.n_features_in_ = 16
        self.decompositions_ = [decompose_even4(p) for p in states]
        self.certificates_ = [witness_even4(p) for p in states]
        self.extent_ = np.array([d.l1_squared for d in self.decompositions_])
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        states = check_states(X, n_qubits=4, parity=EVEN)
        return np.array([[witness_even4(p).lower_bound, decompose_even4(p).l1_squared]
                         for p in states])
