from fractions import Fraction as F

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from schmidtgame.analysis import moran_set_from_digits
from schmidtgame.estimators import BoxCountingDimension, LocalDimensionProxy, check_points


def cantor_like(digits="01" * 6):
    return [(iv.left,) for iv in moran_set_from_digits(digits, len(digits)).intervals()]


def test_params_roundtrip_and_clone():
    est = BoxCountingDimension(scales=[F(1, 2), F(1, 4)], count="lower")
    assert est.get_params() == {"scales": [F(1, 2), F(1, 4)], "fit_range": None, "count": "lower"}
    assert clone(est).get_params()["count"] == "lower"
    est.set_params(count="upper")
    assert est.count == "upper"


def test_box_counting_on_fine_grid_is_exactly_one():
    # closed sets of diameter 2^-k hold 4096/2^k + 1 grid points, so counts
    # stay powers of two while the scale is well above the spacing
    X = [[F(i, 4096)] for i in range(4096)]
    est = BoxCountingDimension(scales=[F(1, 2**k) for k in range(1, 7)], fit_range=(F(1, 2), F(1, 64))).fit(X)
    assert est.dimension_ == 1 and est.n_features_in_ == 1


def test_box_counting_moran():
    X = cantor_like()
    est = BoxCountingDimension(scales=[F(1, 2**k) for k in range(2, 13, 2)], fit_range=(F(1, 4), F(1, 4096))).fit(X)
    assert est.dimension_ == F(1, 2)
    assert est.lower_box_ <= est.dimension_ <= est.upper_box_


def test_string_inputs_and_float_refusal():
    assert check_points(["1/2", "1/4"]) == [(F(1, 2),), (F(1, 4),)]
    with pytest.raises((ValueError, TypeError)):
        check_points([[0.5]])
    with pytest.raises(ValueError):
        check_points([])
    with pytest.raises(ValueError):
        check_points([[F(0)], [F(0), F(1)]])


def test_local_proxy_fit_transform():
    X = cantor_like()
    proxy = LocalDimensionProxy()
    with pytest.raises(NotFittedError):
        proxy.transform(X)
    out = proxy.fit_transform(X)
    assert out.shape == (len(X), 2)
    assert np.all(out[:, 0] >= out[:, 1])
    assert proxy.lower_ <= out[:, 1].min() + 1e-12 and out[:, 0].max() <= proxy.assouad_ + 1e-12


def test_local_proxy_dimension_mismatch():
    proxy = LocalDimensionProxy().fit([[F(0)], [F(1)]])
    with pytest.raises(ValueError):
        proxy.transform([[F(0), F(0)]])
