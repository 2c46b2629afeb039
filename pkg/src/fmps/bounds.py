"""Closed-form bounds on smooth-function states and their empirical checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .entropy import EntropyProfile, entropy_profile, fidelity
from .exceptions import InvalidTolerance, OutOfRange
from .funcgrid import DEFAULT_GRID, Domain, FunctionSpec, as_vector, discretize, one_norm, uniform_state
from .mps import TruncationPolicy, from_state_vector, truncate
from .polyapprox import degree_for_overlap_value, minimal_degree_search

BOUND_SLACK = 1e-9


@dataclass(frozen=True)
class BoundReport:
    """A theoretical bound paired with the measured quantity it constrains.

    ``direction`` is ``"<="`` when ``measured`` must not exceed
    ``theoretical`` and ``">="`` for lower bounds. ``slack`` is positive when
    the bound holds with room to spare.
    """

    name: str
    theoretical: float
    measured: float
    direction: str = "<="
    params: dict = field(default_factory=dict)

    @property
    def slack(self) -> float:
        if self.direction == "<=":
            return self.theoretical - self.measured
        return self.measured - self.theoretical

    @property
    def satisfied(self) -> bool:
        return self.slack >= -BOUND_SLACK


# -- overlap / pointwise error ---------------------------------------------


def required_epsilon(delta: float, n_qubits: int) -> float:
    """Pointwise error that guarantees overlap ``>= 1 - delta``: ``sqrt(delta) 2**(-(N-1)/2)``."""
    if not 0.0 < delta < 1.0:
        raise OutOfRange(f"delta must lie in (0, 1), got {delta}")
    if n_qubits < 1:
        raise OutOfRange(f"n_qubits must be >= 1, got {n_qubits}")
    return math.sqrt(delta) * 2.0 ** (-(n_qubits - 1) / 2.0)


def lemma3_overlap_bound(eps: float, n_qubits: int) -> float:
    """Lower bound ``1 - eps**2 2**(N-1)`` on the overlap of unit states ``eps`` apart entrywise.

    May be negative, in which case it says nothing.
    """
    if eps < 0:
        raise OutOfRange(f"eps must be >= 0, got {eps}")
    return 1.0 - eps * eps * 2.0 ** (n_qubits - 1)


def verify_lemma3(state, trials: int, eps_target: float, rng_seed: int) -> BoundReport:
    """Random entrywise perturbations of ``state`` never beat the overlap bound.

    Each trial adds uniform noise in ``[-eps_target, eps_target]`` per entry,
    renormalizes, measures the realized sup-norm gap and compares the overlap
    with :func:`lemma3_overlap_bound` at that gap. The report holds the
    worst-case trial (smallest margin).
    """
    f = as_vector(state)
    n = int(f.size).bit_length() - 1
    rng = np.random.default_rng(rng_seed)
    worst_margin = math.inf
    worst = (1.0, 1.0, 0.0)
    violations = 0
    for _ in range(trials):
        g = f + rng.uniform(-eps_target, eps_target, size=f.size)
        g = g / np.linalg.norm(g)
        eps = float(np.max(np.abs(f - g)))
        overlap = float(f @ g)
        bound = lemma3_overlap_bound(eps, n)
        margin = overlap - bound
        if margin < -BOUND_SLACK:
            violations += 1
        if margin < worst_margin:
            worst_margin, worst = margin, (bound, overlap, eps)
    bound, overlap, eps = worst
    return BoundReport(
        "lemma3_overlap",
        theoretical=bound,
        measured=overlap,
        direction=">=",
        params={"N": n, "trials": trials, "eps_target": eps_target, "seed": rng_seed,
                "worst_eps": eps, "violations": violations},
    )


def verify_lemma2(n_qubits: int, trials: int, rng_seed: int) -> list[BoundReport]:
    """One-norm of unit states: uniform saturation and random-state compliance."""
    cap = 2.0 ** (n_qubits / 2.0)
    rng = np.random.default_rng(rng_seed)
    worst = 0.0
    for _ in range(trials):
        v = rng.standard_normal(2**n_qubits)
        worst = max(worst, one_norm(v / np.linalg.norm(v)))
    uniform = one_norm(uniform_state(n_qubits))
    return [
        BoundReport("lemma2_uniform_saturation", cap, uniform, "<=",
                    {"N": n_qubits, "gap": abs(cap - uniform)}),
        BoundReport("lemma2_random_states", cap, worst, "<=",
                    {"N": n_qubits, "trials": trials, "seed": rng_seed}),
    ]


# -- entropy bound ----------------------------------------------------------


def entropy_upper_bound(n_qubits: int, delta: float, gamma: float, width: float) -> float:
    """``log2(p + 1)`` for the unrounded degree ``p`` that reaches overlap ``1 - delta``."""
    try:
        p = degree_for_overlap_value(delta, n_qubits, gamma, width)
    except (InvalidTolerance, ValueError) as exc:
        raise OutOfRange(str(exc)) from exc
    return math.log2(p + 1.0)


def theorem1_bound(spec: FunctionSpec, domain: Domain | None, n_qubits: int, delta: float) -> float | None:
    """Entropy ceiling for ``spec`` using its derivative constants; None for non-smooth families.

    Polynomial families are capped at their exact degree, which needs no
    approximation at all.
    """
    domain = domain or spec.default_domain()
    bound = spec.derivative_bound(domain)
    if bound is None or not spec.is_smooth:
        return None
    _, gamma = bound
    try:
        p = degree_for_overlap_value(delta, n_qubits, gamma, domain.width)
    except (InvalidTolerance, ValueError) as exc:
        raise OutOfRange(str(exc)) from exc
    if spec.exact_degree is not None:
        p = min(p, float(spec.exact_degree))
    return math.log2(p + 1.0)


def check_theorem1(profile: EntropyProfile, bound: float, **params) -> BoundReport:
    return BoundReport("theorem1_entropy", bound, profile.s_max, "<=",
                       {"N": profile.n_qubits, "argmax_cut": profile.argmax_cut, **params})


# -- rank-2 approximation ---------------------------------------------------


@dataclass(frozen=True)
class Corollary2:
    trace_lower: float
    fidelity_upper: float
    A: float
    B: float


def corollary2_eval(n_qubits: int, delta: float = 0.01, C0: float = 1.0, C1: float = 0.0,
                    C2: float = 2.0) -> Corollary2:
    """Closed-form trace-distance lower bound and overlap upper bound for rank-2 approximants.

    ``trace_lower = 2 C0 log2(N - log2 delta + C1 - 2 log2 C2) / (N log2 C2)``
    and ``fidelity_upper = sqrt(1 - trace_lower**2)`` clamped to [0, 1].
    Equivalently ``fidelity_upper = sqrt(1 - A**2 (log2(N + B) / N)**2)``.
    The constants are free; the defaults are illustrative only.
    """
    if not 0.0 < delta <= 1.0:
        raise OutOfRange(f"delta must lie in (0, 1], got {delta}")
    if C2 <= 1.0:
        raise OutOfRange(f"C2 must exceed 1, got {C2}")
    B = -math.log2(delta) + C1 - 2.0 * math.log2(C2)
    arg = n_qubits + B
    if arg <= 0:
        raise OutOfRange(f"logarithm argument N + B = {arg} must be positive")
    A = 2.0 * C0 / math.log2(C2)
    trace_lower = A * math.log2(arg) / n_qubits
    fidelity_upper = math.sqrt(min(1.0, max(0.0, 1.0 - trace_lower * trace_lower)))
    return Corollary2(trace_lower, fidelity_upper, A, B)


@dataclass(frozen=True)
class TrendRow:
    n_qubits: int
    fidelity: float
    s_max: float
    discarded_weight: float


def rank_fidelity_trend(spec: FunctionSpec, domain: Domain | None, n_list, chi: int = 2,
                        dense_cap: int = 16, grid: str = DEFAULT_GRID) -> list[TrendRow]:
    """Overlap of the exact state with its rank-``chi`` truncation for each ``N``."""
    n_list = list(n_list)
    if n_list != sorted(n_list):
        raise ValueError("N values must be ascending")
    rows = []
    for n in n_list:
        state = discretize(spec, domain, n, grid=grid)
        exact = from_state_vector(state)
        approx = truncate(exact, TruncationPolicy(chi_max=chi))
        prof = entropy_profile(state if n <= dense_cap else exact)
        rows.append(TrendRow(n, fidelity(exact, approx), prof.s_max, approx.discarded_weight))
    return rows


def rank2_fidelity_trend(spec, domain, n_list, **kwargs) -> list[TrendRow]:
    return rank_fidelity_trend(spec, domain, n_list, chi=2, **kwargs)


def is_nondecreasing(values, tol: float = 0.0) -> bool:
    return all(b >= a - tol for a, b in zip(values, values[1:]))


# -- polynomial degree growth -----------------------------------------------


@dataclass(frozen=True)
class DegreeGrowth:
    """Minimal degrees against ``log2(1/eps)`` and their least-squares line."""

    eps: tuple[float, ...]
    degrees: tuple[int, ...]
    slope: float
    intercept: float
    predicted_slope: float

    @property
    def residuals(self) -> np.ndarray:
        x = np.log2(1.0 / np.asarray(self.eps))
        return np.asarray(self.degrees) - (self.slope * x + self.intercept)

    @property
    def slope_ratio(self) -> float:
        return self.predicted_slope / self.slope if self.slope > 0 else math.inf


def degree_growth(spec: FunctionSpec, domain: Domain | None, eps_list, n_qubits: int,
                  grid: str = DEFAULT_GRID) -> DegreeGrowth:
    """Fit minimal Chebyshev degree against ``log2(1/eps)``.

    ``predicted_slope`` is ``1 / log2(1 + 2/(gamma_f |D|))`` from the spec's
    derivative constants.
    """
    domain = domain or spec.default_domain()
    eps = tuple(float(e) for e in eps_list)
    degrees = tuple(minimal_degree_search(spec, domain, e, n_qubits, grid=grid).degree for e in eps)
    x = np.log2(1.0 / np.asarray(eps))
    slope, intercept = np.polyfit(x, np.asarray(degrees, dtype=float), 1)
    bound = spec.derivative_bound(domain)
    if bound is None or bound[1] == 0:
        predicted = 0.0
    else:
        predicted = 1.0 / math.log2(1.0 + 2.0 / (bound[1] * domain.width))
    return DegreeGrowth(eps, degrees, float(slope), float(intercept), predicted)
