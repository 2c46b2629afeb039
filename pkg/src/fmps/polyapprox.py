"""Chebyshev interpolants and polynomial degree/accuracy formulas."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev

from .exceptions import DegreeCapExceeded, DimensionMismatch, InvalidTolerance, NonFinite, ZeroFunction
from .funcgrid import DEFAULT_GRID, DiscretizedState, Domain, FunctionSpec, grid_points

DEGREE_CAP = 64
# absorbs log-ratio round-off so exact integers are not pushed up by ceil
_CEIL_SLACK = 1e-9


def _ceil(value: float) -> int:
    nearest = round(value)
    if abs(value - nearest) <= _CEIL_SLACK:
        return int(nearest)
    return int(math.ceil(value))


@dataclass(frozen=True, eq=False)
class ChebyshevPoly:
    """Polynomial ``sum_j coeffs[j] T_j(u)`` with ``u`` the affine image of ``domain`` on [-1, 1]."""

    domain: Domain
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float).ravel()
        if coeffs.size == 0:
            raise ValueError("a polynomial needs at least one coefficient")
        if not np.all(np.isfinite(coeffs)):
            raise NonFinite("Chebyshev coefficients must be finite")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def to_unit(self, x) -> np.ndarray:
        d = self.domain
        return (2.0 * np.asarray(x, dtype=float) - (d.lo + d.hi)) / d.width

    def __call__(self, x) -> np.ndarray:
        return chebyshev.chebval(self.to_unit(x), self.coeffs)

    def as_numpy(self) -> chebyshev.Chebyshev:
        return chebyshev.Chebyshev(self.coeffs, domain=[self.domain.lo, self.domain.hi])


@dataclass(frozen=True)
class ApproxReport:
    degree: int
    linf_error: float
    grid_n: int


def chebyshev_nodes(n_nodes: int) -> np.ndarray:
    """Chebyshev-Gauss nodes ``cos(pi (k + 1/2) / n)`` on [-1, 1]."""
    k = np.arange(n_nodes)
    return np.cos(np.pi * (k + 0.5) / n_nodes)


def fit_chebyshev(spec, domain: Domain | None, degree: int) -> ChebyshevPoly:
    """Degree-``degree`` interpolant through ``degree + 1`` Chebyshev-Gauss nodes.

    ``spec`` may be a :class:`FunctionSpec` or any vectorized callable.
    """
    if degree < 0:
        raise ValueError(f"degree must be >= 0, got {degree}")
    if domain is None:
        domain = spec.default_domain()
    n = degree + 1
    theta = np.pi * (np.arange(n) + 0.5) / n
    x = domain.lo + 0.5 * (np.cos(theta) + 1.0) * domain.width
    fx = np.asarray(spec(x), dtype=float)
    if not np.all(np.isfinite(fx)):
        raise NonFinite(f"function evaluation failed at a Chebyshev node of [{domain.lo}, {domain.hi}]")
    # discrete cosine transform of the node values
    coeffs = (2.0 / n) * np.cos(np.outer(np.arange(n), theta)) @ fx
    coeffs[0] *= 0.5
    return ChebyshevPoly(domain, coeffs)


def _unit_grid_vector(values: np.ndarray, what: str) -> np.ndarray:
    norm = np.linalg.norm(values)
    if norm == 0.0:
        raise ZeroFunction(f"{what} vanishes on the grid")
    return values / norm


def linf_error(poly: ChebyshevPoly, target, n_qubits: int | None = None, *, grid: str = DEFAULT_GRID) -> float:
    """Max entrywise gap between the unit-normalized grid vectors of ``target`` and ``poly``.

    ``target`` is a :class:`FunctionSpec` (sampled on ``poly.domain``) or a
    :class:`DiscretizedState`, whose own grid and qubit count are used.
    """
    if isinstance(target, DiscretizedState):
        if n_qubits is not None and n_qubits != target.n_qubits:
            raise DimensionMismatch(f"state has N={target.n_qubits}, asked for N={n_qubits}")
        if target.domain != poly.domain:
            raise DimensionMismatch("polynomial and state live on different domains")
        f = target.values
        x = target.x
    else:
        if n_qubits is None:
            raise ValueError("n_qubits is required when comparing against a function spec")
        x = grid_points(poly.domain, n_qubits, grid)
        f = _unit_grid_vector(np.asarray(target(x), dtype=float), str(target))
    g = _unit_grid_vector(poly(x), "polynomial")
    return float(np.max(np.abs(f - g)))


def _log2_alpha(gamma: float, width: float) -> float:
    if gamma < 0 or width <= 0:
        raise ValueError("gamma must be >= 0 and width > 0")
    if gamma == 0:
        return math.inf
    return math.log2(1.0 + 2.0 / (gamma * width))


def required_degree_value(eps: float, gamma: float, width: float, offset: float = 0.0) -> float:
    """Unrounded ``log_alpha(1/eps) + offset`` with ``alpha = 1 + 2/(gamma*width)``."""
    if not 0.0 < eps < 1.0:
        raise InvalidTolerance(f"eps must lie in (0, 1), got {eps}")
    return math.log2(1.0 / eps) / _log2_alpha(gamma, width) + offset


def required_degree(eps: float, gamma: float, width: float, offset: float = 0.0) -> int:
    """Degree sufficient for sup-norm accuracy ``eps``, rounded up."""
    return _ceil(required_degree_value(eps, gamma, width, offset))


def degree_for_overlap_value(delta: float, n_qubits: int, gamma: float, width: float) -> float:
    """Unrounded degree giving overlap ``>= 1 - delta`` on a ``2**N`` grid."""
    if not 0.0 < delta < 1.0:
        raise InvalidTolerance(f"delta must lie in (0, 1), got {delta}")
    if n_qubits < 1:
        raise ValueError("n_qubits must be >= 1")
    return ((n_qubits - 1) - math.log2(delta)) / (2.0 * _log2_alpha(gamma, width))


def degree_for_overlap(delta: float, n_qubits: int, gamma: float, width: float) -> int:
    return _ceil(degree_for_overlap_value(delta, n_qubits, gamma, width))


def minimal_degree_search(
    spec: FunctionSpec,
    domain: Domain | None,
    eps: float,
    n_qubits: int,
    *,
    cap: int = DEGREE_CAP,
    grid: str = DEFAULT_GRID,
) -> ApproxReport:
    """Smallest degree whose Chebyshev interpolant meets ``eps`` on the grid.

    Scans degrees upward from 0 and raises :class:`DegreeCapExceeded` past ``cap``.
    """
    if not eps > 0:
        raise InvalidTolerance(f"eps must be positive, got {eps}")
    domain = domain or spec.default_domain()
    x = grid_points(domain, n_qubits, grid)
    f = _unit_grid_vector(np.asarray(spec(x), dtype=float), str(spec))
    for degree in range(cap + 1):
        poly = fit_chebyshev(spec, domain, degree)
        gx = poly(x)
        if not np.any(gx):
            continue
        err = float(np.max(np.abs(f - gx / np.linalg.norm(gx))))
        if err <= eps:
            return ApproxReport(degree, err, n_qubits)
    raise DegreeCapExceeded(f"no degree <= {cap} reaches eps={eps} for {spec}")
