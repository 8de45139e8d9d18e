"""Scikit-learn style estimators wrapping the surface configuration pipeline.

Both estimators share the supervised channel signature: ``X`` is the (K, N)
cascade matrix and ``y`` the length-K direct response.  After fitting,
``phases_`` holds the unit-modulus reflection coefficients, ``transform(X)``
returns the reflected component ``X @ phases_`` and ``score(X, y)`` the total
composite channel power, so the estimators compose with pipelines and
hyper-parameter search from the wider ecosystem.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .beamforming import (
    build_quadratic,
    composite_power,
    randomize_extract,
    sdr_solve,
    unconfigured_phases,
)
from .channel import FrequencyChannel
from .validation import check_channel_arrays, check_rng

DEFAULT_SUBSET_CAP = 256


class _SurfaceConfigMixin(TransformerMixin):
    """Shared transform/score plumbing for fitted phase profiles."""

    def transform(self, X):
        """Reflected channel component ``X @ phases_`` for a cascade matrix."""
        check_is_fitted(self, "phases_")
        cascade = np.asarray(X, dtype=np.complex128)
        if cascade.ndim != 2 or cascade.shape[1] != self.phases_.size:
            raise ValueError(
                f"X must be 2-D with {self.phases_.size} columns, got shape {cascade.shape}"
            )
        return cascade @ self.phases_

    def score(self, X, y):
        """Total composite channel power achieved by the fitted phases."""
        check_is_fitted(self, "phases_")
        cascade, direct = check_channel_arrays(X, y)
        return composite_power(direct, cascade, self.phases_)


class UnconfiguredSurface(_SurfaceConfigMixin, BaseEstimator):
    """Baseline passive metal sheet: every element reflects with zero phase.

    Contributes aperture gain only; fitting just records the element count.
    """

    def fit(self, X, y=None):
        if y is None:
            cascade = np.asarray(X, dtype=np.complex128)
            if cascade.ndim != 2:
                raise ValueError("X must be a 2-D cascade matrix")
        else:
            cascade, _ = check_channel_arrays(X, y)
        self.n_elements_ = cascade.shape[1]
        self.phases_ = unconfigured_phases(self.n_elements_)
        return self


class SdrBeamformer(_SurfaceConfigMixin, BaseEstimator):
    """Surface configuration via semidefinite relaxation.

    Fitting lifts the channel-power objective to a Hermitian quadratic form
    over a subcarrier subset, solves its relaxation with a low-rank projected
    gradient method, and extracts the phase profile through safeguarded
    Gaussian randomization plus coordinate ascent.

    Parameters
    ----------
    subset_size : int or None
        Subcarriers used to assemble the lift; None selects all of them up to
        a cap of 256, uniformly spaced beyond that.
    rank : int or None
        Gram-factor rank override; None uses ceil(sqrt(2*(N+1))).
    max_iter, tol, restarts
        Relaxation solver controls.
    num_samples : int
        Gaussian randomization candidates drawn during extraction.
    ascent_passes : int
        Cap on coordinate-ascent refinement passes.
    random_state : int, Generator or None
        Seeds both the solver restarts and the randomization draws.

    Attributes
    ----------
    phases_ : complex ndarray of shape (N,)
        Unit-modulus reflection coefficients.
    objective_ : float
        Full-band composite power achieved by ``phases_``.
    relaxation_objective_ : float
        Objective value of the relaxed problem (an upper bound on the
        restricted-subset objective of any unit-modulus profile).
    n_iter_ : int
        Solver iterations of the best restart.
    converged_ : bool
        Whether the best restart met the solver tolerance.
    degenerate_ : bool
        True when the cascade was identically zero and the unconfigured
        profile was returned without optimization.
    """

    def __init__(
        self,
        subset_size=None,
        rank=None,
        max_iter=5000,
        tol=1e-8,
        restarts=3,
        num_samples=1000,
        ascent_passes=50,
        random_state=None,
    ):
        self.subset_size = subset_size
        self.rank = rank
        self.max_iter = max_iter
        self.tol = tol
        self.restarts = restarts
        self.num_samples = num_samples
        self.ascent_passes = ascent_passes
        self.random_state = random_state

    def fit(self, X, y):
        cascade, direct = check_channel_arrays(X, y)
        freq = FrequencyChannel(direct=direct, cascade=cascade)
        n = freq.num_elements
        if not np.any(cascade):
            # nothing to optimize: flag it and fall back to the metal sheet
            self.phases_ = unconfigured_phases(n)
            self.degenerate_ = True
            self.objective_ = composite_power(direct, cascade, self.phases_)
            self.relaxation_objective_ = self.objective_
            self.n_iter_ = 0
            self.converged_ = True
            return self
        subset = self.subset_size
        if subset is None:
            subset = min(DEFAULT_SUBSET_CAP, freq.num_subcarriers)
        quad = build_quadratic(freq, subset)
        rng = check_rng(self.random_state)
        solver_rng, extract_rng = rng.spawn(2)
        solution = sdr_solve(
            quad,
            rank=self.rank,
            max_iter=self.max_iter,
            tol=self.tol,
            restarts=self.restarts,
            random_state=solver_rng,
        )
        self.phases_ = randomize_extract(
            solution,
            quad,
            freq,
            num_samples=self.num_samples,
            rng=extract_rng,
            ascent_passes=self.ascent_passes,
        )
        self.degenerate_ = False
        self.objective_ = composite_power(direct, cascade, self.phases_)
        self.relaxation_objective_ = solution.objective
        self.n_iter_ = solution.iterations
        self.converged_ = solution.converged
        return self
