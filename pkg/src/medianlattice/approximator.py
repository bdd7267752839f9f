"""Scikit-learn style front end for the median lattice algorithm.

The estimator keeps the familiar lifecycle -- construct with hyperparameters,
``fit``, then ``predict`` -- except that ``fit`` consumes a sampleable
function instead of a data matrix: the algorithm chooses its own sampling
nodes.  ``get_params`` / ``set_params`` / ``clone`` work as usual.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .algorithm import AlgorithmPlan, alias_free_majority, build_plan, evaluate, run
from .korobov import KorobovParams, WeightSequence
from .validation import check_points

__all__ = ["MedianLatticeApproximator"]


class MedianLatticeApproximator(BaseEstimator):
    """Approximate a 1-periodic function from lattice samples.

    Parameters
    ----------
    dimension : int
        Number of variables d.
    alpha : float
        Smoothness exponent of the target class, > 1/2.
    gamma : float or sequence of float
        Coordinate weights in (0, 1], non-increasing; a scalar is broadcast.
    tau : float
        Oversampling control; larger tau buys stronger failure guarantees at
        the price of a smaller index set for the same N.
    n_points : int
        Lattice size N (an odd prime).
    repetitions : int
        Number of independent lattice draws R (odd, > 1).
    use_shifts : bool
        Draw a uniform random shift per repetition.
    random_state : int or None
        Seed for the draws; None picks seed 0.
    real_output : bool
        Return the real part from ``predict`` (the natural choice for
        real-valued targets); otherwise complex values are returned.

    Attributes
    ----------
    plan_ : AlgorithmPlan
    approximant_ : Approximant
    n_evaluations_ : int
        Total function evaluations spent by ``fit`` (R * N).
    success_event_ : bool
        Whether the alias-free-majority diagnostic held for the drawn rules.

    Examples
    --------
    >>> import numpy as np
    >>> est = MedianLatticeApproximator(dimension=1, n_points=97, repetitions=3)
    >>> est = est.fit(lambda X: np.cos(2 * np.pi * X[:, 0]))
    >>> float(np.round(est.predict([[0.0]])[0], 6))
    1.0
    """

    def __init__(
        self,
        dimension: int = 1,
        alpha: float = 1.0,
        gamma=1.0,
        tau: float = 1.0,
        n_points: int = 101,
        repetitions: int = 5,
        use_shifts: bool = False,
        random_state=None,
        real_output: bool = True,
    ):
        self.dimension = dimension
        self.alpha = alpha
        self.gamma = gamma
        self.tau = tau
        self.n_points = n_points
        self.repetitions = repetitions
        self.use_shifts = use_shifts
        self.random_state = random_state
        self.real_output = real_output

    def _build_plan(self) -> AlgorithmPlan:
        gamma = self.gamma
        if np.isscalar(gamma):
            gamma = (float(gamma),) * int(self.dimension)
        params = KorobovParams(self.dimension, self.alpha, WeightSequence.explicit(gamma))
        return build_plan(params, self.tau, self.repetitions, self.n_points)

    def fit(self, f, y=None):
        """Run the algorithm against the callable ``f``.

        ``f`` receives an (n, d) array of points in [0, 1)^d and must return
        n values; objects with a ``sample_lattice`` hook are sampled through
        it.  ``y`` is accepted and ignored for API compatibility.
        """
        if not (callable(f) or hasattr(f, "sample_lattice")):
            raise TypeError("fit expects a callable (or an object with sample_lattice)")
        self.plan_ = self._build_plan()
        seed = 0 if self.random_state is None else int(self.random_state)
        self.approximant_ = run(f, self.plan_, seed, bool(self.use_shifts))
        self.n_evaluations_ = self.plan_.total_evaluations
        self.success_event_ = alias_free_majority(self.plan_, self.approximant_.rules)
        return self

    def predict(self, X) -> np.ndarray:
        """Evaluate the fitted approximant at points X (coordinates mod 1)."""
        if not hasattr(self, "approximant_"):
            raise NotFittedError("this MedianLatticeApproximator is not fitted yet")
        X = check_points(X, self.plan_.params.d)
        vals = evaluate(self.approximant_, X)
        return vals.real if self.real_output else vals
