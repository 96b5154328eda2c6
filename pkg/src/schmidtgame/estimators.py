"""scikit-learn style wrappers around the finite-scale dimension estimators.

Inputs are point sets given as rows of exact coordinates (Fractions, ints or
"p/q" strings). Floats are refused: the estimators are exact and a float's
binary value is rarely the number the caller had in mind.
"""

from __future__ import annotations

import numbers
from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .analysis import (
    BallCounter,
    covering_profile,
    dimension_slope,
    dyadic_scales,
    localized_ratio_extrema,
)
from .arenas import PointSet
from .rational import as_rational, log2


def check_points(X) -> list:
    """Validate ``X`` into a nonempty list of equal-length Fraction tuples."""
    if isinstance(X, PointSet):
        rows = list(X.points)
    else:
        rows = []
        for row in X:
            if isinstance(row, (Fraction, numbers.Integral, str)):
                row = (row,)
            rows.append(tuple(_exact(c) for c in row))
    if not rows:
        raise ValueError("expected at least one point")
    if len({len(r) for r in rows}) != 1:
        raise ValueError("all points must have the same number of coordinates")
    return rows


def _exact(c) -> Fraction:
    if isinstance(c, numbers.Integral) and not isinstance(c, bool):
        return Fraction(int(c))
    return as_rational(c)


def _default_scales(n_points: int) -> list:
    return dyadic_scales(1, max(2, n_points.bit_length() + 1))


class BoxCountingDimension(BaseEstimator):
    """Log-log slope of covering counts over dyadic (or given) scales.

    Parameters
    ----------
    scales : list of rationals, optional
        Covering scales; defaults to 2^-1 ... 2^-(bit length of n + 1).
    fit_range : (r_max, r_min), optional
        Restrict the fit to these scales; default is the middle half.
    count : {"upper", "lower"}
        Which side of the covering bracket to fit in dimension >= 2.

    Attributes
    ----------
    profile_ : CoveringProfile
    dimension_ : Fraction or float
        Exact when every scale and count is a power of two.
    lower_box_, upper_box_ : extreme per-scale quotients log N_r / -log r.
    """

    def __init__(self, scales=None, fit_range=None, count="upper"):
        self.scales = scales
        self.fit_range = fit_range
        self.count = count

    def fit(self, X, y=None):
        if self.count not in ("upper", "lower"):
            raise ValueError(f"count must be 'upper' or 'lower', got {self.count!r}")
        pts = check_points(X)
        scales = self.scales if self.scales is not None else _default_scales(len(pts))
        self.profile_ = covering_profile(pts, scales)
        self.report_ = dimension_slope(self.profile_, self.fit_range, use=self.count)
        self.dimension_ = self.report_.slope
        self.lower_box_ = self.report_.lower_box
        self.upper_box_ = self.report_.upper_box
        self.n_features_in_ = len(pts[0])
        return self


class LocalDimensionProxy(TransformerMixin, BaseEstimator):
    """Localized covering ratios log N_r(B(x,R)) / log(R/r).

    ``fit`` records the extreme ratios over sampled centers (Assouad and
    lower proxies). ``transform`` maps each row of ``X``, used as a center,
    to its (max, min) ratio over the scale pairs.
    """

    def __init__(self, pairs=None, max_centers=200, random_state=0):
        self.pairs = pairs
        self.max_centers = max_centers
        self.random_state = random_state

    def _pairs(self, n_points):
        if self.pairs is not None:
            return [(as_rational(R), as_rational(r)) for R, r in self.pairs]
        scales = _default_scales(n_points)
        return [(R, r) for i, R in enumerate(scales) for r in scales[i + 1 :]]

    def fit(self, X, y=None):
        pts = check_points(X)
        self.pairs_ = self._pairs(len(pts))
        self.report_ = localized_ratio_extrema(pts, self.pairs_, max_centers=self.max_centers, seed=self.random_state)
        self.assouad_ = self.report_.assouad
        self.lower_ = self.report_.lower
        self.points_ = pts
        self.n_features_in_ = len(pts[0])
        return self

    def transform(self, X):
        check_is_fitted(self, "report_")
        centers = check_points(X)
        if len(centers[0]) != self.n_features_in_:
            raise ValueError(f"X has {len(centers[0])} coordinates, fitted on {self.n_features_in_}")
        counter = BallCounter(self.points_)
        out = np.zeros((len(centers), 2))
        for i, x in enumerate(centers):
            hi_q = lo_q = None
            for R, r in self.pairs_:
                lo_n, hi_n = counter.count(x, R, r)
                if hi_n == 0:
                    continue
                scale = log2(R / r)
                q_hi, q_lo = log2(hi_n) / scale, log2(lo_n) / scale
                hi_q = q_hi if hi_q is None else max(hi_q, q_hi)
                lo_q = q_lo if lo_q is None else min(lo_q, q_lo)
            out[i] = (np.nan, np.nan) if hi_q is None else (hi_q, lo_q)
        return out
