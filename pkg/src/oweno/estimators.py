"""scikit-learn style wrappers around the kernels and the solver."""

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .kernels import DEFAULT_EPS, KernelKind, ReconstructionMode, reconstruct_many
from .problems import error_vs_exact, error_vs_reference, make_problem, reference_solution
from .solver import RunConfig, integrate
from .validation import check_cfl, check_eps, check_windows, parse_resolution


class WenoReconstructor(TransformerMixin, BaseEstimator):
    """Maps each row of stencil values to the reconstructed interface value.

    Rows are windows ordered left to right. ``side="right"`` reconstructs at
    the right edge of the central cell, ``side="left"`` at the left edge
    using the mirrored stencil.
    """

    def __init__(self, kernel="oweno3", mode="cell", eps=DEFAULT_EPS, side="right"):
        self.kernel = kernel
        self.mode = mode
        self.eps = eps
        self.side = side

    def fit(self, X, y=None):
        self.kind_ = KernelKind.coerce(self.kernel)
        self.mode_ = ReconstructionMode.coerce(self.mode)
        self.eps_ = check_eps(self.eps)
        if self.side not in ("left", "right"):
            raise ValueError(f"side must be 'left' or 'right', got {self.side!r}")
        X = check_windows(X, self.kind_)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "kind_")
        X = check_windows(X, self.kind_)
        values = reconstruct_many(self.kind_, X, self.eps_, self.mode_, self.side)
        return values[:, None]


class ConservationLawSolver(BaseEstimator):
    """Runs one benchmark to its final time.

    ``fit`` integrates; ``predict`` returns the final field and ``score``
    the negative L1 error against the exact or reference solution.
    """

    def __init__(self, problem="advection", scheme="oweno3", n=None, cfl=None,
                 t_final=None, eps=DEFAULT_EPS, splitting=None, reference_cache=None):
        self.problem = problem
        self.scheme = scheme
        self.n = n
        self.cfl = cfl
        self.t_final = t_final
        self.eps = eps
        self.splitting = splitting
        self.reference_cache = reference_cache

    def _spec(self):
        return make_problem(self.problem) if isinstance(self.problem, str) else self.problem

    def fit(self, X=None, y=None):
        spec = self._spec()
        n = None if self.n is None else parse_resolution(self.n)
        grid = spec.grid(n)
        config = RunConfig(
            kernel=self.scheme, cfl=check_cfl(self.cfl), t_final=self.t_final,
            eps=check_eps(self.eps), splitting=self.splitting,
        )
        result = integrate(spec, grid, config)
        self.spec_ = spec
        self.grid_ = grid
        self.solution_ = result.field
        self.t_ = result.t
        self.n_steps_ = result.steps
        self.walltime_ = result.walltime
        return self

    def predict(self, X=None):
        check_is_fitted(self, "solution_")
        return self.solution_

    def errors(self):
        check_is_fitted(self, "solution_")
        if self.spec_.exact is not None:
            return error_vs_exact(self.solution_, self.spec_, self.grid_, self.t_)
        ref = reference_solution(self.spec_, self.reference_cache)
        return error_vs_reference(self.solution_, ref, self.grid_)

    def score(self, X=None, y=None):
        return -self.errors().l1
