"""Input checks shared by the estimator wrappers."""

from __future__ import annotations

import numpy as np

from .fock import NORM_TOL, PureState


def check_states(X, n_qubits: int | None = None, parity: str | None = None) -> list[PureState]:
    """Coerce ``X`` to a list of normalised :class:`PureState`.

    Accepts a single state, a sequence of states, a 1-d amplitude vector or a
    2-d ``(n_samples, 2**n)`` complex array.
    """
    if isinstance(X, PureState):
        states = [X]
    elif isinstance(X, (list, tuple)) and X and all(isinstance(x, PureState) for x in X):
        states = list(X)
    else:
        arr = np.asarray(X, dtype=complex)
        if arr.ndim == 1:
            arr = arr[None, :]
        if arr.ndim != 2 or arr.shape[0] == 0:
            raise ValueError(f"expected a 2-d array of state vectors, got shape {arr.shape}")
        norms = np.linalg.norm(arr, axis=1)
        bad = np.flatnonzero(np.abs(norms - 1) > NORM_TOL)
        if bad.size:
            raise ValueError(f"sample {bad[0]} is not normalized (norm = {norms[bad[0]]:.15g})")
        states = [PureState(row) for row in arr]
    for k, s in enumerate(states):
        if n_qubits is not None and s.n != n_qubits:
            raise ValueError(f"sample {k} has {s.n} qubits, expected {n_qubits}")
        if parity is not None and s.parity_class != parity:
            raise ValueError(f"sample {k} has parity {s.parity_class}, expected {parity}")
    return states
