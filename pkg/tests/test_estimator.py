import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import make_pipeline

from oqgt.estimator import FEATURES, XYChainGeometry
from oqgt.xy import XYParams, chain_oqgt

X = np.array([[0.5, 1.0, 0.0, 3.0], [1.4, 0.7, 1.0, 0.0], [0.9, 1.2, 2.0, 7.5]])


def test_transform_matches_closed_form():
    out = XYChainGeometry(n_spins=11).fit_transform(X)
    assert out.shape == (3, 9)
    for row, (lam, gamma, phi, t) in zip(out, X):
        q = chain_oqgt(XYParams(lam, gamma, phi, t, 11)).Q / 11
        assert row[0] == pytest.approx(q[0, 0].real, rel=1e-14)
        assert row[7] == pytest.approx(q[0, 2].imag, rel=1e-14)
    assert np.all(out[1] == 0)


def test_params_and_clone():
    est = XYChainGeometry(n_spins=7, rescale_by_n=False)
    assert est.get_params() == {"n_spins": 7, "rescale_by_n": False, "phi_coupling": "exact"}
    assert clone(est).set_params(n_spins=9).n_spins == 9
    assert list(est.fit(X).get_feature_names_out()) == list(FEATURES)


def test_critical_rows_are_nan():
    crit = math.cos(2 * math.pi / 5)
    out = XYChainGeometry(n_spins=5).fit(X).transform([[crit, 0.0, 0.0, 1.0]])
    assert np.all(np.isnan(out))


def test_validation():
    with pytest.raises(ValueError):
        XYChainGeometry(n_spins=4).fit(X)
    with pytest.raises(ValueError):
        XYChainGeometry().fit(X[:, :3])
    with pytest.raises(ValueError):
        XYChainGeometry(phi_coupling="other").fit(X)
    from sklearn.exceptions import NotFittedError
    with pytest.raises(NotFittedError):
        XYChainGeometry().transform(X)


def test_in_pipeline():
    pipe = make_pipeline(XYChainGeometry(n_spins=21))
    assert pipe.fit_transform(X).shape == (3, 9)
