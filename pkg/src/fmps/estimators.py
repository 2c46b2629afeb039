"""scikit-learn transformers over rows of ``2**N`` amplitudes.

Each row of ``X`` is one sampled function (any nonzero scale); rows are
normalized internally. Both classes follow the usual estimator contract
(``get_params``/``set_params``, ``fit`` returns ``self``, ``clone``-able) so
they drop into pipelines and grid searches.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted, validate_data

from .entropy import DENSE_CAP, entropy_profile
from .exceptions import DimensionMismatch, ZeroFunction
from .mps import TruncationPolicy, from_state_vector, mps_inner, to_state_vector, truncate


def _check_width(n_features: int) -> int:
    n = int(n_features).bit_length() - 1
    if n_features < 2 or 2**n != n_features:
        raise DimensionMismatch(f"rows must hold 2**N >= 2 amplitudes, got {n_features} columns")
    return n


def _unit_rows(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    norms = np.linalg.norm(X, axis=1)
    if np.any(norms == 0):
        raise ZeroFunction("cannot normalize an all-zero row")
    return X / norms[:, None], norms


class MPSCompressor(TransformerMixin, BaseEstimator):
    """Replace each row by its rank-``chi_max`` matrix product state approximation.

    Parameters
    ----------
    chi_max : int, default=2
        Largest bond dimension kept.
    sv_threshold : float, default=0.0
        Schmidt values at or below this (on the unit-normalized row) are dropped.

    Attributes
    ----------
    n_qubits_ : int
    exact_bond_dims_ : ndarray of shape (n_qubits_ + 1,)
        Largest exact bond dimension per cut seen during ``fit``.
    """

    def __init__(self, chi_max=2, sv_threshold=0.0):
        self.chi_max = chi_max
        self.sv_threshold = sv_threshold

    def fit(self, X, y=None):
        X = validate_data(self, X, dtype=np.float64)
        self.n_qubits_ = _check_width(X.shape[1])
        units, _ = _unit_rows(X)
        dims = np.ones(self.n_qubits_ + 1, dtype=int)
        for row in units:
            dims = np.maximum(dims, from_state_vector(row).bond_dims)
        self.exact_bond_dims_ = dims
        return self

    def _approximate(self, X):
        check_is_fitted(self)
        X = validate_data(self, X, dtype=np.float64, reset=False)
        units, norms = _unit_rows(X)
        policy = TruncationPolicy(self.chi_max, self.sv_threshold)
        out = np.empty_like(X)
        fids = np.empty(X.shape[0])
        for i, row in enumerate(units):
            exact = from_state_vector(row)
            approx = truncate(exact, policy)
            overlap = mps_inner(exact, approx)
            out[i] = np.sign(overlap or 1.0) * norms[i] * to_state_vector(approx)
            fids[i] = abs(overlap)
        return out, fids

    def transform(self, X):
        """Rank-capped reconstruction of each row, at the row's original scale."""
        return self._approximate(X)[0]

    def score(self, X, y=None):
        """Mean overlap between unit rows and their approximations."""
        return float(np.mean(self._approximate(X)[1]))


class EntropyProfiler(TransformerMixin, BaseEstimator):
    """Map each row to its entanglement entropy (bits) at cuts ``1..N-1``."""

    def __init__(self, dense_cap=DENSE_CAP):
        self.dense_cap = dense_cap

    def fit(self, X, y=None):
        X = validate_data(self, X, dtype=np.float64)
        self.n_qubits_ = _check_width(X.shape[1])
        return self

    def transform(self, X):
        check_is_fitted(self)
        X = validate_data(self, X, dtype=np.float64, reset=False)
        units, _ = _unit_rows(X)
        return np.array([entropy_profile(row, self.dense_cap).entropies for row in units]).reshape(
            X.shape[0], self.n_qubits_ - 1
        )

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self)
        return np.array([f"entropy_cut{k}" for k in range(1, self.n_qubits_)], dtype=object)
