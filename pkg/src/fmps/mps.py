"""Open-boundary matrix product states over qubits.

Cores are real arrays indexed ``(left_bond, physical, right_bond)`` with the
physical index of size 2. Site 0 is the most significant bit of the grid
index, matching :mod:`fmps.funcgrid`. Bond ``k`` (``1 <= k <= N-1``) sits
between sites ``k-1`` and ``k`` and is the Schmidt cut after ``k`` qubits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import CapExceeded, DegreeCapExceeded, DimensionMismatch, InvalidCut, NonFinite
from .funcgrid import DEFAULT_GRID, DiscretizedState, Domain, as_vector, grid_offsets
from .polyapprox import DEGREE_CAP, ChebyshevPoly

CANONICAL_FORMS = ("none", "left", "right")
RANK_THRESHOLD = 1e-12
CONTRACTION_CAP = 24


@dataclass(frozen=True, eq=False)
class MatrixProductState:
    """Chain of order-3 cores.

    ``discarded_weight`` carries the summed squared singular values dropped
    by :func:`truncate` (0 for exact states).
    """

    cores: tuple
    canonical: str = "none"
    discarded_weight: float = 0.0

    def __post_init__(self):
        cores = tuple(np.array(c, dtype=float) for c in self.cores)
        if not cores:
            raise ValueError("an MPS needs at least one core")
        if self.canonical not in CANONICAL_FORMS:
            raise ValueError(f"canonical must be one of {CANONICAL_FORMS}, got {self.canonical!r}")
        left = 1
        for i, core in enumerate(cores):
            if core.ndim != 3 or core.shape[1] != 2:
                raise DimensionMismatch(f"core {i} must have shape (l, 2, r), got {core.shape}")
            if core.shape[0] != left:
                raise DimensionMismatch(f"core {i} left bond {core.shape[0]} != previous right bond {left}")
            if not np.all(np.isfinite(core)):
                raise NonFinite(f"core {i} has non-finite entries")
            left = core.shape[2]
            core.setflags(write=False)
        if left != 1:
            raise DimensionMismatch(f"last core must close with bond 1, got {left}")
        object.__setattr__(self, "cores", cores)

    @property
    def n_qubits(self) -> int:
        return len(self.cores)

    @property
    def bond_dims(self) -> list[int]:
        return [1] + [c.shape[2] for c in self.cores]

    @property
    def max_bond(self) -> int:
        return max(self.bond_dims)

    def norm(self) -> float:
        return math.sqrt(max(mps_inner(self, self), 0.0))

    def is_left_canonical(self, tol: float = 1e-10) -> bool:
        for core in self.cores:
            m = core.reshape(-1, core.shape[2])
            if not np.allclose(m.T @ m, np.eye(m.shape[1]), atol=tol, rtol=0):
                return False
        return True

    def is_right_canonical(self, tol: float = 1e-10) -> bool:
        for core in self.cores:
            m = core.reshape(core.shape[0], -1)
            if not np.allclose(m @ m.T, np.eye(m.shape[0]), atol=tol, rtol=0):
                return False
        return True

    def scaled(self, factor: float) -> "MatrixProductState":
        cores = list(self.cores)
        cores[0] = cores[0] * factor
        return MatrixProductState(tuple(cores), "none", self.discarded_weight)


@dataclass(frozen=True)
class TruncationPolicy:
    """Bond cap ``chi_max`` (None = unlimited) and absolute singular-value floor."""

    chi_max: int | None = None
    sv_threshold: float = 0.0

    def __post_init__(self):
        if self.chi_max is not None and self.chi_max < 1:
            raise ValueError(f"chi_max must be >= 1, got {self.chi_max}")
        if self.sv_threshold < 0:
            raise ValueError(f"sv_threshold must be >= 0, got {self.sv_threshold}")

    def keep(self, s: np.ndarray) -> int:
        k = int(np.count_nonzero(s > self.sv_threshold)) if self.sv_threshold > 0 else s.size
        if self.chi_max is not None:
            k = min(k, self.chi_max)
        return max(k, 1)


def _svd(m: np.ndarray):
    try:
        return np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NonFinite(f"SVD failed: {exc}") from exc


def from_state_vector(state, sv_threshold: float = RANK_THRESHOLD) -> MatrixProductState:
    """Exact left-canonical MPS of a state vector by successive SVDs.

    Singular values at or below ``sv_threshold`` times the largest one are
    dropped, so each bond dimension is the numerical rank of that unfolding.
    """
    vec = as_vector(state)
    n = int(vec.size).bit_length() - 1
    if vec.size < 2 or 2**n != vec.size:
        raise DimensionMismatch(f"state length must be a power of two >= 2, got {vec.size}")
    if not np.all(np.isfinite(vec)):
        raise NonFinite("state has non-finite entries")
    cores = []
    rest = vec.reshape(1, -1)
    rank = 1
    for _ in range(n - 1):
        u, s, vt = _svd(rest.reshape(rank * 2, -1))
        keep = max(1, int(np.count_nonzero(s > sv_threshold * s[0]))) if s[0] > 0 else 1
        cores.append(u[:, :keep].reshape(rank, 2, keep))
        rest = s[:keep, None] * vt[:keep]
        rank = keep
    cores.append(rest.reshape(rank, 2, 1))
    return MatrixProductState(tuple(cores), "left")


def to_state_vector(mps: MatrixProductState, cap: int = CONTRACTION_CAP) -> np.ndarray:
    """Contract to the dense length-``2**N`` amplitude vector."""
    if mps.n_qubits > cap:
        raise CapExceeded(f"refusing to contract N={mps.n_qubits} > cap {cap}")
    out = np.ones((1, 1))
    for core in mps.cores:
        out = np.tensordot(out, core, axes=(1, 0)).reshape(-1, core.shape[2])
    return out.ravel()


def left_canonicalize(mps: MatrixProductState) -> MatrixProductState:
    """QR sweep to left-canonical form; the norm ends up in the last core."""
    if mps.canonical == "left":
        return mps
    cores = list(mps.cores)
    for i in range(len(cores) - 1):
        l, _, r = cores[i].shape
        q, rmat = np.linalg.qr(cores[i].reshape(l * 2, r))
        cores[i] = q.reshape(l, 2, -1)
        cores[i + 1] = np.tensordot(rmat, cores[i + 1], axes=(1, 0))
    return MatrixProductState(tuple(cores), "left", mps.discarded_weight)


def _right_sweep(mps: MatrixProductState, policy: TruncationPolicy | None):
    """Right-to-left SVD sweep from left-canonical form.

    Yields the Schmidt values at every bond (optionally truncated) and the
    resulting right-canonical cores with the norm left in core 0.
    """
    cores = list(left_canonicalize(mps).cores)
    spectra = [None] * len(cores)
    discarded = 0.0
    for j in range(len(cores) - 1, 0, -1):
        l, _, r = cores[j].shape
        u, s, vt = _svd(cores[j].reshape(l, 2 * r))
        keep = policy.keep(s) if policy is not None else s.size
        discarded += float(np.sum(s[keep:] ** 2))
        spectra[j] = s[:keep] if policy is not None else s
        cores[j] = vt[:keep].reshape(keep, 2, r)
        cores[j - 1] = np.tensordot(cores[j - 1], u[:, :keep] * s[:keep], axes=(2, 0))
    return cores, spectra[1:], discarded


def bond_spectra(mps: MatrixProductState) -> list[np.ndarray]:
    """Schmidt coefficients at every cut ``k = 1..N-1``, each normalized to unit weight."""
    cores, spectra, _ = _right_sweep(mps, None)
    out = []
    for s in spectra:
        s = np.sort(np.abs(s))[::-1]
        out.append(s / np.linalg.norm(s))
    return out


def truncate(mps: MatrixProductState, policy: TruncationPolicy) -> MatrixProductState:
    """Rank-capped approximation by one right-to-left SVD sweep.

    The result is right-canonical and unit-normalized; ``discarded_weight``
    records the squared singular values dropped during the sweep.
    """
    norm = mps.norm()
    if norm == 0.0:
        raise ValueError("cannot truncate a zero-norm MPS")
    cores, _, discarded = _right_sweep(mps.scaled(1.0 / norm), policy)
    first = cores[0]
    cores[0] = first / np.linalg.norm(first)
    return MatrixProductState(tuple(cores), "right", discarded)


def mps_inner(a: MatrixProductState, b: MatrixProductState) -> float:
    """Overlap by transfer-matrix contraction, O(N chi^3)."""
    if a.n_qubits != b.n_qubits:
        raise DimensionMismatch(f"MPS lengths differ: {a.n_qubits} vs {b.n_qubits}")
    env = np.ones((1, 1))
    for ca, cb in zip(a.cores, b.cores):
        # env[a', b'] -> sum over left bonds and physical index
        env = np.einsum("ab,apc,bpd->cd", env, ca, cb, optimize=True)
    return float(env[0, 0])


def product_state(bits) -> MatrixProductState:
    cores = []
    for bit in bits:
        core = np.zeros((1, 2, 1))
        core[0, int(bit), 0] = 1.0
        cores.append(core)
    return MatrixProductState(tuple(cores), "left")


def random_mps(n_qubits: int, chi: int, rng: np.random.Generator) -> MatrixProductState:
    """Unit-norm MPS with Gaussian random cores and bond dimension up to ``chi``."""
    dims = [1] + [min(chi, 2**k, 2 ** (n_qubits - k)) for k in range(1, n_qubits)] + [1]
    cores = tuple(rng.standard_normal((dims[i], 2, dims[i + 1])) for i in range(n_qubits))
    mps = MatrixProductState(cores)
    return mps.scaled(1.0 / mps.norm())


def schmidt_spectrum(obj, cut: int) -> np.ndarray:
    """Descending Schmidt coefficients across the cut after ``cut`` qubits.

    Dense inputs use the SVD of the ``2**cut x 2**(N-cut)`` reshaping; an MPS
    uses the bond matrix of its mixed-canonical form.
    """
    if isinstance(obj, MatrixProductState):
        n = obj.n_qubits
        if not 1 <= cut <= n - 1:
            raise InvalidCut(f"cut must lie in [1, {n - 1}], got {cut}")
        return bond_spectra(obj)[cut - 1]
    vec = as_vector(obj)
    n = int(vec.size).bit_length() - 1
    if not 1 <= cut <= n - 1:
        raise InvalidCut(f"cut must lie in [1, {n - 1}], got {cut}")
    s = np.linalg.svd(vec.reshape(2**cut, -1), compute_uv=False)
    return s / np.linalg.norm(s)


def poly_to_mps(
    poly: ChebyshevPoly,
    n_qubits: int,
    domain: Domain | None = None,
    *,
    grid: str = DEFAULT_GRID,
) -> MatrixProductState:
    """Explicit bond-dimension ``p+1`` MPS of a degree-``p`` polynomial on the grid.

    The grid coordinate is written as ``t = t0 + sum_k b_k w_k`` over the
    bits ``b_k``. Each core maps the powers ``1, s, ..., s**p`` of the running
    prefix ``s`` to the powers of ``s + b_k w_k`` by the binomial theorem, and
    the last core contracts them with the monomial coefficients in ``t``.
    The result is unit-normalized.
    """
    p = poly.degree
    if p > DEGREE_CAP:
        raise DegreeCapExceeded(f"degree {p} exceeds cap {DEGREE_CAP}")
    if n_qubits < 1:
        raise ValueError("n_qubits must be >= 1")
    domain = domain or poly.domain
    # monomial coefficients in t, where x = domain.lo + t * domain.width
    coef = poly.as_numpy().convert(
        kind=np.polynomial.Polynomial, domain=[domain.lo, domain.hi], window=[0.0, 1.0]
    ).coef
    a = np.zeros(p + 1)
    a[: coef.size] = coef[: p + 1]
    t0, h = grid_offsets(n_qubits, grid)
    weights = [h * 2 ** (n_qubits - 1 - k) for k in range(n_qubits)]

    binom = np.zeros((p + 1, p + 1))
    for m in range(p + 1):
        for j in range(m + 1):
            binom[j, m] = math.comb(m, j)
    powers = np.arange(p + 1)
    # shift[j, m] = C(m, j) * c**(m - j) maps powers of s to powers of s + c
    def shift(c: float) -> np.ndarray:
        exps = powers[None, :] - powers[:, None]
        with np.errstate(invalid="ignore"):
            out = binom * np.where(exps >= 0, float(c) ** np.clip(exps, 0, None), 0.0)
        return out

    cores = []
    for k in range(n_qubits):
        core = np.stack([shift(0.0), shift(weights[k])], axis=1)  # (p+1, 2, p+1)
        if k == 0:
            start = t0 ** powers.astype(float)  # powers of the initial offset
            core = np.tensordot(start[None, :], core, axes=(1, 0))
        if k == n_qubits - 1:
            core = np.tensordot(core, a, axes=(2, 0))[..., None]
        cores.append(core)
    mps = MatrixProductState(tuple(cores))
    norm = mps.norm()
    if norm == 0.0:
        raise ValueError("polynomial vanishes on the grid")
    return mps.scaled(1.0 / norm)
