"""scikit-learn style wrapper around the closed-form chain tensor."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from ._validation import CriticalModeError
from .xy import PHI_COUPLINGS, chain_components

FEATURES = ("g_ll", "g_gg", "g_pp", "g_lg", "g_lp", "g_gp", "s_lg", "s_lp", "s_gp")


class XYChainGeometry(TransformerMixin, BaseEstimator):
    """Map rows ``(lambda, gamma, phi, t)`` to chain metric and curvature.

    Stateless apart from input checks; ``fit`` only records the input width.
    Output columns follow :data:`FEATURES`. Rows that hit a gapless mode come
    back as ``nan``.

    Parameters
    ----------
    n_spins : odd int
    rescale_by_n : bool
        Divide every entry by ``n_spins``.
    phi_coupling : {"exact", "double-angle"}
    """

    def __init__(self, n_spins=1001, rescale_by_n=True, phi_coupling="exact"):
        self.n_spins = n_spins
        self.rescale_by_n = rescale_by_n
        self.phi_coupling = phi_coupling

    def _check_params(self):
        n = self.n_spins
        if not isinstance(n, (int, np.integer)) or n < 3 or n % 2 == 0:
            raise ValueError(f"n_spins must be an odd integer >= 3, got {n!r}")
        if self.phi_coupling not in PHI_COUPLINGS:
            raise ValueError(f"phi_coupling must be one of {PHI_COUPLINGS}")

    def fit(self, X, y=None):
        self._check_params()
        X = check_array(X, dtype=float)
        if X.shape[1] != 4:
            raise ValueError(f"expected 4 columns (lambda, gamma, phi, t), got {X.shape[1]}")
        self.n_features_in_ = 4
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} columns, got {X.shape[1]}")
        scale = 1.0 / self.n_spins if self.rescale_by_n else 1.0
        out = np.full((X.shape[0], len(FEATURES)), np.nan)
        for i, (lam, gamma, _phi, t) in enumerate(X):
            try:
                ll, gg, pp, lg, lp, gp = chain_components(
                    lam, gamma, self.n_spins, [t], self.phi_coupling)[0] * scale
            except CriticalModeError:
                continue
            out[i] = (ll, gg, pp, lg, 0.0, 0.0, 0.0, lp, gp)
        return out

    def get_feature_names_out(self, input_features=None):
        return np.asarray(FEATURES, dtype=object)
