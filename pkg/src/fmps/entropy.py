"""Bipartite entanglement entropy, trace distance and fidelity of pure states.

All logarithms are base 2, so entropies are in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import CapExceeded, DimensionMismatch, NotNormalized, OutOfRange
from .funcgrid import as_vector
from .mps import RANK_THRESHOLD, MatrixProductState, bond_spectra, mps_inner, to_state_vector

DENSE_CAP = 20
FANNES_SLACK = 1e-9


def von_neumann(spectrum) -> float:
    """``-sum s**2 log2 s**2`` over Schmidt coefficients ``s`` (0 log 0 = 0)."""
    s = np.asarray(spectrum, dtype=float)
    weights = s * s
    total = float(weights.sum())
    if abs(total - 1.0) > 1e-8:
        raise NotNormalized(f"squared Schmidt coefficients sum to {total}, expected 1")
    # same cutoff as the numerical rank: s <= 1e-12 * s_max counts as zero
    weights = weights[weights > (RANK_THRESHOLD**2) * weights.max(initial=0.0)]
    return max(0.0, float(-np.sum(weights * np.log2(weights))))


def _numerical_rank(s: np.ndarray) -> int:
    return int(np.count_nonzero(s > RANK_THRESHOLD * s[0])) if s.size and s[0] > 0 else 0


@dataclass(frozen=True)
class EntropyProfile:
    """Entropy at every contiguous cut ``k = 1..N-1``.

    ``ranks[i]`` is the numerical Schmidt rank at ``cuts[i]``.
    """

    n_qubits: int
    cuts: tuple[int, ...]
    entropies: tuple[float, ...]
    ranks: tuple[int, ...]

    @property
    def s_max(self) -> float:
        return max(self.entropies, default=0.0)

    @property
    def argmax_cut(self) -> int:
        if not self.entropies:
            return 0
        return self.cuts[int(np.argmax(self.entropies))]  # first maximum wins ties

    def at(self, cut: int) -> float:
        return self.entropies[self.cuts.index(cut)]

    @property
    def per_cut(self) -> list[tuple[int, float, int]]:
        return list(zip(self.cuts, self.entropies, self.ranks))


def dense_spectra(vec: np.ndarray) -> list[np.ndarray]:
    n = int(vec.size).bit_length() - 1
    out = []
    for k in range(1, n):
        s = np.linalg.svd(vec.reshape(2**k, -1), compute_uv=False)
        out.append(s / np.linalg.norm(s))
    return out


def entropy_profile(obj, dense_cap: int = DENSE_CAP) -> EntropyProfile:
    """Entropy at each cut of a dense state (SVD per cut) or an MPS (canonical bonds)."""
    if isinstance(obj, MatrixProductState):
        n = obj.n_qubits
        spectra = bond_spectra(obj) if n > 1 else []
    else:
        vec = as_vector(obj)
        n = int(vec.size).bit_length() - 1
        if 2**n != vec.size:
            raise DimensionMismatch(f"state length must be a power of two, got {vec.size}")
        if n > dense_cap:
            raise CapExceeded(f"dense entropy profile limited to N <= {dense_cap}, got {n}")
        spectra = dense_spectra(vec)
    entropies = tuple(von_neumann(s) for s in spectra)
    ranks = tuple(_numerical_rank(s) for s in spectra)
    return EntropyProfile(n, tuple(range(1, n)), entropies, ranks)


def _overlap(f, g) -> float:
    if isinstance(f, MatrixProductState) and isinstance(g, MatrixProductState):
        return mps_inner(f, g)
    vf = to_state_vector(f) if isinstance(f, MatrixProductState) else as_vector(f)
    vg = to_state_vector(g) if isinstance(g, MatrixProductState) else as_vector(g)
    if vf.shape != vg.shape:
        raise DimensionMismatch(f"state shapes differ: {vf.shape} vs {vg.shape}")
    return float(vf @ vg)


def fidelity(f, g) -> float:
    """Absolute overlap ``|<f, g>|`` of two unit states."""
    return min(1.0, abs(_overlap(f, g)))


def trace_distance_pure(f, g) -> float:
    """Trace distance ``sqrt(1 - <f,g>**2)`` between two unit pure states."""
    ov = _overlap(f, g)
    return math.sqrt(max(0.0, 1.0 - ov * ov))


def reduced_density_matrix(state, cut: int) -> np.ndarray:
    """Reduced density matrix on the smaller side of the cut after ``cut`` qubits."""
    vec = to_state_vector(state) if isinstance(state, MatrixProductState) else as_vector(state)
    n = int(vec.size).bit_length() - 1
    m = vec.reshape(2**cut, 2 ** (n - cut))
    return m @ m.T if cut <= n - cut else m.T @ m


def reduced_trace_distance(f, g, cut: int) -> float:
    """Trace distance between the reduced states of ``f`` and ``g`` on the smaller side."""
    diff = reduced_density_matrix(f, cut) - reduced_density_matrix(g, cut)
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh(diff))))


def binary_entropy(t: float) -> float:
    if t <= 0.0 or t >= 1.0:
        return 0.0
    return -t * math.log2(t) - (1.0 - t) * math.log2(1.0 - t)


def fannes_audenaert_rhs(t: float, n_qubits: int) -> float:
    """``t log2(2**n - 1) + H2(t)``: the entropy-continuity bound in dimension ``2**n``."""
    if not -1e-12 <= t <= 1.0 + 1e-12:
        raise OutOfRange(f"trace distance must lie in [0, 1], got {t}")
    if n_qubits < 1:
        raise OutOfRange(f"n_qubits must be >= 1, got {n_qubits}")
    t = min(max(t, 0.0), 1.0)
    return t * math.log2(2.0**n_qubits - 1.0) + binary_entropy(t)


@dataclass(frozen=True)
class FannesCheck:
    """One entropy-continuity check at a cut.

    ``rhs`` uses the reduced Hilbert space of the smaller side; ``rhs_full``
    is the looser bound with the full system size, kept for comparison.
    ``signed_gap`` is ``S_f - S_g`` (not assumed positive). ``slack`` is
    measured against ``rhs + FANNES_SLACK`` so round-off on exact pairs does
    not read as a violation.
    """

    cut: int
    lhs: float
    rhs: float
    rhs_full: float
    signed_gap: float
    trace_distance: float

    @property
    def slack(self) -> float:
        return self.rhs + FANNES_SLACK - self.lhs

    @property
    def satisfied(self) -> bool:
        return self.slack >= 0.0


def check_fannes(
    f_profile: EntropyProfile,
    g_profile: EntropyProfile,
    trace_distance: float,
    n_qubits: int,
    cut: int,
) -> FannesCheck:
    """Check ``|S_f - S_g| <= T log2(2**m - 1) + H2(T)`` with ``m = min(cut, N - cut)``.

    The inequality is sharp for the reduced states, so ``trace_distance``
    should be their trace distance (see :func:`reduced_trace_distance`). The
    global pure-state distance upper-bounds it but the right-hand side is
    not monotone in ``T`` once ``T > 1 - 2**-m``.
    """
    if f_profile.n_qubits != g_profile.n_qubits:
        raise DimensionMismatch("profiles come from different system sizes")
    gap = f_profile.at(cut) - g_profile.at(cut)
    m = min(cut, n_qubits - cut)
    return FannesCheck(
        cut=cut,
        lhs=abs(gap),
        rhs=fannes_audenaert_rhs(trace_distance, m),
        rhs_full=fannes_audenaert_rhs(trace_distance, n_qubits),
        signed_gap=gap,
        trace_distance=trace_distance,
    )


def fannes_checks(f, g, dense_cap: int = DENSE_CAP) -> list[FannesCheck]:
    """Check every cut of a pair of states using reduced trace distances."""
    vf = to_state_vector(f) if isinstance(f, MatrixProductState) else as_vector(f)
    vg = to_state_vector(g) if isinstance(g, MatrixProductState) else as_vector(g)
    pf = entropy_profile(vf, dense_cap)
    pg = entropy_profile(vg, dense_cap)
    n = pf.n_qubits
    return [check_fannes(pf, pg, reduced_trace_distance(vf, vg, k), n, k) for k in range(1, n)]

