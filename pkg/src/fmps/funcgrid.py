"""Function specifications and their unit-normalized dyadic discretizations.

A function is described by a :class:`FunctionSpec` (a family name plus named
parameters) and sampled on ``2**N`` equidistant points of a :class:`Domain`.
Sample ``i`` is addressed by the bitstring of ``i`` in big-endian order, so
qubit 0 is the most significant bit and a cut after ``k`` qubits separates
coarse from fine spatial scales.

String grammar
--------------
Specs are parsed from strings of the form::

    family[:key=val[,key=val]...][@lo:hi]

``family`` is one of :data:`FAMILIES`. Keys are family parameters plus two
reserved keys, ``gamma`` and ``cf``, overriding the derivative-growth
constants. The optional ``@lo:hi`` suffix attaches a domain; without it the
family's default domain applies. Examples::

    gaussian:mu=0,sigma=1@-4:4
    sine:freq=3
    polynomial:c0=1,c2=-0.5@-1:1
    step:at=0.25

Derivative-growth constants
---------------------------
Each smooth family has default constants ``(C_f, gamma_f)`` with
``||f^(n)||_inf <= C_f * gamma_f**n * n!`` on the domain:

* gaussian ``exp(-(x-mu)^2 / (2 sigma^2))``: ``f^(n)`` is ``sigma**-n`` times
  a Hermite function, and Cramer's inequality bounds
  ``|He_n(t)| exp(-t^2/4) <= 1.086435 sqrt(n!)``, so ``gamma_f = 1/sigma`` and
  ``C_f = 1.086435``.
* sine ``amp * sin(freq x + phase)``: ``|f^(n)| <= |amp| |freq|**n``, so
  ``gamma_f = |freq|``, ``C_f = |amp|``.
* exponential ``exp(rate x)``: ``|f^(n)| <= |rate|**n max_D exp(rate x)``.
* polynomial families (polynomial, linear-ramp, constant): derivatives vanish
  past the degree; ``gamma_f = 1`` (0 for constants) and
  ``C_f = max_n ||f^(n)||_inf / n!`` on the domain.
* lognormal is smooth but not analytic at 0; its default
  ``gamma_f = 1 / (sigma * mode)`` is a scale heuristic, not a proven bound.
* step has no derivative bound and serves as a non-smooth control.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .exceptions import DimensionMismatch, NonFinite, ZeroFunction

FAMILIES = (
    "gaussian",
    "sine",
    "exponential",
    "lognormal",
    "polynomial",
    "linear-ramp",
    "constant",
    "step",
)
SMOOTH_FAMILIES = FAMILIES[:-1]
GRIDS = ("dyadic", "inclusive", "midpoint")
DEFAULT_GRID = "dyadic"
NORM_TOL = 1e-12

CRAMER_CONSTANT = 1.086435

_DEFAULT_PARAMS = {
    "gaussian": {"mu": 0.0, "sigma": 1.0},
    "sine": {"amp": 1.0, "freq": 1.0, "phase": 0.0},
    "exponential": {"rate": 1.0},
    "lognormal": {"mu": 0.0, "sigma": 0.5},
    "polynomial": {"c0": 1.0, "c1": 1.0, "c2": 1.0, "c3": 1.0},
    "linear-ramp": {"slope": 1.0, "intercept": 0.0},
    "constant": {"value": 1.0},
    "step": {"at": 0.3, "low": 0.0, "high": 1.0},
}


@dataclass(frozen=True)
class Domain:
    """Closed interval ``[lo, hi]`` with ``lo < hi``."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ValueError(f"domain endpoints must be finite, got [{lo}, {hi}]")
        if not lo < hi:
            raise ValueError(f"domain needs lo < hi, got [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)


def grid_offsets(n_qubits: int, grid: str = DEFAULT_GRID) -> tuple[float, float]:
    """Return ``(t0, h)`` such that sample ``i`` sits at ``t = t0 + i*h`` in [0, 1].

    ``dyadic`` is the half-open grid ``t = 0.b1 b2 ... bN`` (binary fraction),
    ``inclusive`` hits both endpoints and ``midpoint`` uses cell centres.
    """
    if n_qubits < 1:
        raise ValueError("n_qubits must be >= 1")
    size = 2**n_qubits
    if grid == "dyadic":
        return 0.0, 1.0 / size
    if grid == "inclusive":
        return 0.0, 1.0 / (size - 1)
    if grid == "midpoint":
        return 0.5 / size, 1.0 / size
    raise ValueError(f"unknown grid {grid!r}; expected one of {GRIDS}")


def grid_points(domain: Domain, n_qubits: int, grid: str = DEFAULT_GRID) -> np.ndarray:
    t0, h = grid_offsets(n_qubits, grid)
    t = t0 + np.arange(2**n_qubits) * h
    return domain.lo + t * domain.width


def _fmt(value: float) -> str:
    return f"{value:g}" if float(value) == float(f"{value:g}") else repr(float(value))


@dataclass(frozen=True)
class FunctionSpec:
    """A named smooth (or control) function family with parameters.

    Parameters
    ----------
    family : str
        One of :data:`FAMILIES`.
    params : mapping of str to float
        Family parameters; missing keys take the family defaults.
    deriv_scale, deriv_const : float, optional
        Overrides for ``gamma_f`` and ``C_f``.
    domain : Domain, optional
        Domain attached by the string grammar; :meth:`default_domain` is used
        when absent.
    """

    family: str
    params: Mapping[str, float] = field(default_factory=dict)
    deriv_scale: float | None = None
    deriv_const: float | None = None
    domain: Domain | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        merged = dict(_DEFAULT_PARAMS[self.family])
        if self.family == "polynomial" and self.params:
            merged = {}
        for key, value in self.params.items():
            if self.family == "polynomial":
                if not (key.startswith("c") and key[1:].isdigit()):
                    raise ValueError(f"polynomial coefficients are named c0, c1, ...; got {key!r}")
            elif key not in merged:
                raise ValueError(f"family {self.family!r} has no parameter {key!r}")
            merged[key] = float(value)
        object.__setattr__(self, "params", merged)
        for name in ("deriv_scale", "deriv_const"):
            value = getattr(self, name)
            if value is not None:
                if not value >= 0:
                    raise ValueError(f"{name} must be nonnegative, got {value}")
                object.__setattr__(self, name, float(value))
        p = self.params
        if self.family in ("gaussian", "lognormal") and not p["sigma"] > 0:
            raise ValueError("sigma must be positive")

    # -- parsing -----------------------------------------------------------

    @classmethod
    def parse(cls, text: str) -> "FunctionSpec":
        """Parse ``family[:key=val,...][@lo:hi]``."""
        text = text.strip()
        domain = None
        if "@" in text:
            text, _, dom = text.partition("@")
            lo, sep, hi = dom.rpartition(":")
            if not sep:
                raise ValueError(f"domain suffix must look like @lo:hi, got @{dom}")
            domain = Domain(float(lo), float(hi))
        family, _, rest = text.partition(":")
        params: dict[str, float] = {}
        overrides: dict[str, float] = {}
        for item in filter(None, (s.strip() for s in rest.split(","))):
            key, sep, value = item.partition("=")
            if not sep:
                raise ValueError(f"expected key=value, got {item!r}")
            key = key.strip()
            target = overrides if key in ("gamma", "cf") else params
            target[key] = float(value)
        return cls(
            family.strip(),
            params,
            deriv_scale=overrides.get("gamma"),
            deriv_const=overrides.get("cf"),
            domain=domain,
        )

    def to_string(self) -> str:
        parts = [f"{k}={_fmt(v)}" for k, v in self.params.items()]
        if self.deriv_scale is not None:
            parts.append(f"gamma={_fmt(self.deriv_scale)}")
        if self.deriv_const is not None:
            parts.append(f"cf={_fmt(self.deriv_const)}")
        out = self.family + (":" + ",".join(parts) if parts else "")
        if self.domain is not None:
            out += f"@{_fmt(self.domain.lo)}:{_fmt(self.domain.hi)}"
        return out

    def __str__(self) -> str:
        return self.to_string()

    # -- evaluation --------------------------------------------------------

    def _poly_coeffs(self) -> np.ndarray:
        """Monomial coefficients (lowest first) for polynomial-type families."""
        p = self.params
        if self.family == "constant":
            return np.array([p["value"]])
        if self.family == "linear-ramp":
            return np.array([p["intercept"], p["slope"]])
        if self.family == "polynomial":
            deg = max(int(k[1:]) for k in p) if p else 0
            coeffs = np.zeros(deg + 1)
            for key, value in p.items():
                coeffs[int(key[1:])] = value
            return coeffs
        raise TypeError(f"{self.family} is not a polynomial family")

    @property
    def is_polynomial(self) -> bool:
        return self.family in ("polynomial", "linear-ramp", "constant")

    @property
    def is_smooth(self) -> bool:
        return self.family in SMOOTH_FAMILIES

    @property
    def exact_degree(self) -> int | None:
        """Polynomial degree for polynomial families, else None."""
        if not self.is_polynomial:
            return None
        coeffs = self._poly_coeffs()
        nz = np.flatnonzero(coeffs)
        return int(nz[-1]) if nz.size else 0

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        p = self.params
        fam = self.family
        with np.errstate(all="ignore"):
            if fam == "gaussian":
                return np.exp(-((x - p["mu"]) ** 2) / (2.0 * p["sigma"] ** 2))
            if fam == "sine":
                return p["amp"] * np.sin(p["freq"] * x + p["phase"])
            if fam == "exponential":
                return np.exp(p["rate"] * x)
            if fam == "lognormal":
                safe = np.where(x > 0, x, 1.0)
                val = np.exp(-((np.log(safe) - p["mu"]) ** 2) / (2.0 * p["sigma"] ** 2)) / (
                    safe * p["sigma"] * math.sqrt(2.0 * math.pi)
                )
                return np.where(x > 0, val, 0.0)
            if fam == "step":
                return np.where(x >= p["at"], p["high"], p["low"]) + 0.0 * x
            return np.polynomial.polynomial.polyval(x, self._poly_coeffs()) + 0.0 * x

    # -- domains and derivative bounds -------------------------------------

    def default_domain(self) -> Domain:
        if self.domain is not None:
            return self.domain
        p = self.params
        fam = self.family
        if fam == "gaussian":
            return Domain(p["mu"] - 4 * p["sigma"], p["mu"] + 4 * p["sigma"])
        if fam == "sine":
            return Domain(0.0, 2 * math.pi)
        if fam == "lognormal":
            return Domain(0.0, math.exp(p["mu"] + 4 * p["sigma"]))
        if fam == "polynomial":
            return Domain(-1.0, 1.0)
        return Domain(0.0, 1.0)

    def derivative_bound(self, domain: Domain | None = None) -> tuple[float, float] | None:
        """Return ``(C_f, gamma_f)`` for this function on ``domain``.

        Returns None for the step family, which has no such bound. User
        overrides take precedence over the family defaults.
        """
        if self.family == "step" and self.deriv_scale is None:
            return None
        domain = domain or self.default_domain()
        c_f, gamma = self._default_bound(domain) if self.family != "step" else (1.0, 0.0)
        if self.deriv_scale is not None:
            gamma = self.deriv_scale
        if self.deriv_const is not None:
            c_f = self.deriv_const
        return c_f, gamma

    def _default_bound(self, domain: Domain) -> tuple[float, float]:
        p = self.params
        fam = self.family
        if fam == "gaussian":
            return CRAMER_CONSTANT, 1.0 / p["sigma"]
        if fam == "sine":
            return abs(p["amp"]), abs(p["freq"])
        if fam == "exponential":
            return math.exp(max(p["rate"] * domain.lo, p["rate"] * domain.hi)), abs(p["rate"])
        if fam == "lognormal":
            mode = math.exp(p["mu"] - p["sigma"] ** 2)
            return float(self(mode)), 1.0 / (p["sigma"] * mode)
        coeffs = self._poly_coeffs()
        xs = np.linspace(domain.lo, domain.hi, 257)
        c_f = 0.0
        deriv = np.polynomial.Polynomial(coeffs)
        for n in range(len(coeffs)):
            c_f = max(c_f, float(np.max(np.abs(deriv(xs)))) / math.factorial(n))
            deriv = deriv.deriv()
        gamma = 0.0 if self.exact_degree == 0 else 1.0
        return c_f, gamma


@dataclass(frozen=True, eq=False)
class DiscretizedState:
    """Unit-norm vector of ``2**n_qubits`` samples of a function."""

    n_qubits: int
    domain: Domain
    values: np.ndarray
    grid: str = DEFAULT_GRID

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.shape[0] != 2**self.n_qubits:
            raise DimensionMismatch(
                f"expected {2**self.n_qubits} values for N={self.n_qubits}, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise NonFinite("state contains NaN or infinite entries")
        norm = np.linalg.norm(values)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not unit-normalized (norm={norm!r})")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_values(cls, values, domain: Domain | None = None, grid: str = DEFAULT_GRID):
        """Normalize an arbitrary length-``2**N`` vector into a state."""
        values = np.asarray(values, dtype=float)
        n = _n_qubits_for(values.shape[0])
        if not np.all(np.isfinite(values)):
            raise NonFinite("values contain NaN or infinite entries")
        norm = np.linalg.norm(values)
        if norm == 0.0:
            raise ZeroFunction("cannot normalize an all-zero vector")
        return cls(n, domain or Domain(0.0, 1.0), values / norm, grid)

    @property
    def x(self) -> np.ndarray:
        return grid_points(self.domain, self.n_qubits, self.grid)

    def __len__(self) -> int:
        return self.values.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)


def _n_qubits_for(length: int) -> int:
    n = int(length).bit_length() - 1
    if length < 2 or 2**n != length:
        raise DimensionMismatch(f"length must be a power of two >= 2, got {length}")
    return n


def discretize(
    spec: FunctionSpec,
    domain: Domain | None,
    n_qubits: int,
    *,
    grid: str = DEFAULT_GRID,
) -> DiscretizedState:
    """Sample ``spec`` on ``2**n_qubits`` equidistant points and normalize.

    ``domain=None`` uses the spec's own (or default) domain.
    """
    if n_qubits < 1:
        raise ValueError(f"n_qubits must be >= 1, got {n_qubits}")
    domain = domain or spec.default_domain()
    samples = np.asarray(spec(grid_points(domain, n_qubits, grid)), dtype=float)
    if not np.all(np.isfinite(samples)):
        raise NonFinite(f"{spec} produced non-finite samples on [{domain.lo}, {domain.hi}]")
    norm = np.linalg.norm(samples)
    if norm == 0.0:
        raise ZeroFunction(f"{spec} is identically zero on the grid")
    return DiscretizedState(n_qubits, domain, samples / norm, grid)


def uniform_state(n_qubits: int, domain: Domain | None = None) -> DiscretizedState:
    return DiscretizedState.from_values(np.ones(2**n_qubits), domain)


def basis_state(n_qubits: int, index: int, domain: Domain | None = None) -> DiscretizedState:
    values = np.zeros(2**n_qubits)
    values[index] = 1.0
    return DiscretizedState(n_qubits, domain or Domain(0.0, 1.0), values)


def as_vector(state) -> np.ndarray:
    """Return the amplitude vector of a state or array-like."""
    if isinstance(state, DiscretizedState):
        return state.values
    return np.asarray(state, dtype=float).ravel()


def one_norm(state) -> float:
    """Sum of absolute amplitudes; at most ``2**(N/2)`` for unit states."""
    return float(np.sum(np.abs(as_vector(state))))


def inner(a, b) -> float:
    va, vb = as_vector(a), as_vector(b)
    if va.shape != vb.shape:
        raise DimensionMismatch(f"cannot take inner product of shapes {va.shape} and {vb.shape}")
    return float(va @ vb)
