"""Adaptive concatenation of syndrome-conditioned channel ensembles.

The state between levels is a :class:`ChannelEnsemble`: a probability-weighted
collection of one-qubit Pauli channels, one weight per (deduplicated) syndrome
history.  One concatenation level assigns an independently drawn entry to each
of the n qubit slots of the code block, pushes every assignment through the
per-syndrome level map, and flattens the results into the next ensemble.

Assignments are enumerated in slot order: which qubit receives which entry
matters, because a stabilizer code treats its qubits asymmetrically (only
permutations in the code's automorphism group leave the level map alone).
Deduplicating the entries of each child ensemble first is what keeps exact
level-2 enumeration tractable.  Each entry is canonicalized by applying its
optimal logical recovery (the class of maximal probability moved to the
identity slot) before deduplication; entropy is unaffected and deduplication
improves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import HAD4, KLEIN, LETTERS, ChannelError, PauliProbVec, apply_logical_pauli
from .codes import StabilizerCode
from .levelmap import _coset_map_batch

__all__ = [
    "DEDUP_TOL",
    "PRUNE_FLOOR",
    "DEFAULT_BUDGET",
    "BudgetExceeded",
    "ChannelEnsemble",
    "optimize_recovery",
    "exact_level",
    "exact_level_entropy",
    "concatenate_exact",
    "ensemble_entropy",
]

DEDUP_TOL = 1e-10
PRUNE_FLOOR = 1e-15
DEFAULT_BUDGET = 10 ** 7

#: Assignments are pushed through the level map in batches of this many.
_CHUNK = 4096

#: Recovery tie-break order: I first, then X, Z, Y.
_TIE_ORDER = np.array([0, 1, 3, 2], dtype=np.int64)


class BudgetExceeded(RuntimeError):
    """Exact enumeration would exceed the combination budget; use Monte Carlo."""

    def __init__(self, combinations: int, budget: int):
        super().__init__(
            f"exact level needs {combinations} combinations, over the budget "
            f"of {budget}; use the Monte Carlo path")
        self.combinations = combinations
        self.budget = budget


@dataclass(frozen=True)
class ChannelEnsemble:
    """Weighted, deduplicated collection of normalized one-qubit channels."""

    weights: np.ndarray
    channels: np.ndarray
    dedup_tolerance: float = DEDUP_TOL

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        c = np.asarray(self.channels, dtype=np.float64)
        if w.ndim != 1 or c.shape != (w.size, 4):
            raise ChannelError(f"ensemble shape mismatch: {w.shape} vs {c.shape}")
        if w.size == 0 or np.any(w <= 0.0):
            raise ChannelError("ensemble weights must be positive")
        if abs(w.sum() - 1.0) > 1e-9:
            raise ChannelError(f"ensemble weights sum to {w.sum()}, not 1")
        if np.any(c < 0.0) or np.abs(c.sum(axis=1) - 1.0).max() > 1e-9:
            raise ChannelError("ensemble channels must be normalized")
        w.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "channels", c)

    @classmethod
    def singleton(cls, p: PauliProbVec) -> "ChannelEnsemble":
        return cls(np.array([1.0]), p.as_array()[None, :] / p.weight())

    @property
    def size(self) -> int:
        return self.weights.size

    def entries(self) -> list[tuple[float, PauliProbVec]]:
        return [(float(w), PauliProbVec.from_array(c))
                for w, c in zip(self.weights, self.channels)]

    def average_channel(self) -> PauliProbVec:
        """Weighted mean channel; what a syndrome-blind observer would see."""
        return PauliProbVec.from_array(self.weights @ self.channels)


def optimize_recovery(q: PauliProbVec) -> tuple[str, PauliProbVec]:
    """Best extra logical recovery for a channel and the channel after it.

    Picks the class of maximal probability (ties broken in the order
    I, X, Z, Y) and relabels errors so that class becomes the identity.
    """
    if q.weight() <= 0.0:
        raise ChannelError("cannot optimize a zero-weight quasi-channel")
    arr = q.as_array()
    best = max(_TIE_ORDER, key=lambda s: arr[s])
    letter = LETTERS[best]
    return letter, apply_logical_pauli(q, letter)


def _optimize_rows(rows: np.ndarray) -> np.ndarray:
    """Vectorized optimize_recovery over normalized channel rows."""
    sigma = _TIE_ORDER[np.argmax(rows[:, _TIE_ORDER], axis=1)]
    return rows[np.arange(rows.shape[0])[:, None], KLEIN[sigma]]


def _merge_close(weights: np.ndarray, channels: np.ndarray, tol: float):
    """Merge channel rows within tol in max-norm (weighted mean channel).

    Scans rows by decreasing weight so smaller entries merge into larger.
    """
    order = np.argsort(-weights, kind="stable")
    kept_rows = np.empty_like(channels)
    target = np.empty(weights.size, dtype=np.int64)
    kept = 0
    for i in order:
        hits = np.flatnonzero(
            np.abs(kept_rows[:kept] - channels[i]).max(axis=1) < tol)
        if hits.size:
            target[i] = hits[0]
            continue
        target[i] = kept
        kept_rows[kept] = channels[i]
        kept += 1
    out_w = np.zeros(kept)
    out_c = np.zeros((kept, 4))
    np.add.at(out_w, target, weights)
    np.add.at(out_c, target, weights[:, None] * channels)
    out_c /= out_w[:, None]
    return out_w, out_c


class _Accumulator:
    """Streaming dedup of (weight, channel) rows on a quantization grid."""

    #: Buffered rows are compacted once they exceed this count.
    _COMPACT_AT = 1 << 21

    #: finish() skips the pairwise boundary merge above this survivor count.
    _MERGE_CAP = 4096

    def __init__(self, tol: float):
        self.tol = tol
        self._keys: list[np.ndarray] = [np.empty((0, 4), dtype=np.int64)]
        self._wc: list[np.ndarray] = [np.empty((0, 5))]
        self._pending = 0

    def add(self, weights: np.ndarray, rows: np.ndarray):
        self._keys.append(np.round(rows / self.tol).astype(np.int64))
        self._wc.append(np.column_stack([weights, weights[:, None] * rows]))
        self._pending += weights.size
        if self._pending >= self._COMPACT_AT:
            self._compact()

    def _compact(self):
        keys = np.concatenate(self._keys)
        wc = np.concatenate(self._wc)
        uniq, inverse = np.unique(keys, axis=0, return_inverse=True)
        out = np.empty((uniq.shape[0], 5))
        for j in range(5):
            out[:, j] = np.bincount(inverse, weights=wc[:, j],
                                    minlength=uniq.shape[0])
        self._keys, self._wc, self._pending = [uniq], [out], uniq.shape[0]

    def finish(self, prune_floor: float) -> tuple[np.ndarray, np.ndarray]:
        self._compact()
        wc = self._wc[0]
        keep = wc[:, 0] >= prune_floor
        if not np.any(keep):
            raise ChannelError("all ensemble mass pruned; lower the prune floor")
        w = wc[keep, 0]
        c = wc[keep, 1:] / w[:, None]
        # Second pass with the true tolerance catches grid-boundary splits.
        if w.size <= self._MERGE_CAP:
            w, c = _merge_close(w, c, self.tol)
        # Pruned mass is redistributed by renormalizing the kept weights.
        w /= w.sum()
        c /= c.sum(axis=1, keepdims=True)
        return w, c


def count_combinations(children: list[ChannelEnsemble]) -> int:
    """Number of coset-map evaluations exact_level would perform."""
    return math.prod(ens.size for ens in children)


def _as_children(code: StabilizerCode, child_ensembles) -> list[ChannelEnsemble]:
    """One child ensemble per qubit slot; a single ensemble serves all."""
    if isinstance(child_ensembles, ChannelEnsemble):
        return [child_ensembles] * code.n
    children = list(child_ensembles)
    if len(children) != code.n:
        raise ChannelError(f"need {code.n} child ensembles, got {len(children)}")
    return children


def _assignment_chunks(code: StabilizerCode, children: list[ChannelEnsemble]):
    """Yield (assignment weights, per-slot diagonals) over ordered assignments.

    Assignment t picks entry (t // stride[i]) % size[i] for slot i, so a flat
    counter enumerates the mixed-radix product of entry choices.
    """
    sizes = np.array([ens.size for ens in children], dtype=np.int64)
    strides = np.ones(code.n, dtype=np.int64)
    for i in range(code.n - 2, -1, -1):
        strides[i] = strides[i + 1] * sizes[i + 1]
    child_diags = [ens.channels @ HAD4.T for ens in children]

    total = int(sizes.prod())
    for start in range(0, total, _CHUNK):
        t = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        assign_w = np.ones(t.size)
        diags = np.empty((t.size, code.n, 4))
        for i, ens in enumerate(children):
            idx = (t // strides[i]) % sizes[i]
            assign_w *= ens.weights[idx]
            diags[:, i, :] = child_diags[i][idx]
        yield assign_w, diags


def exact_level(
    code: StabilizerCode,
    child_ensembles,
    *,
    budget: int = DEFAULT_BUDGET,
    dedup_tolerance: float = DEDUP_TOL,
    prune_floor: float = PRUNE_FLOOR,
) -> ChannelEnsemble:
    """One exact concatenation level on n child ensembles.

    Accepts a single ensemble (shared by all n slots) or a sequence of n.
    Enumerates every ordered assignment of one entry per slot; slot order
    matters because qubit permutations are generally not code automorphisms.
    Raises :class:`BudgetExceeded` if the enumeration would need more than
    ``budget`` level-map evaluations.
    """
    children = _as_children(code, child_ensembles)
    combinations = count_combinations(children)
    if combinations > budget:
        raise BudgetExceeded(combinations, budget)

    acc = _Accumulator(dedup_tolerance)
    for assign_w, diags in _assignment_chunks(code, children):
        p = _coset_map_batch(code, diags)
        syn_w = p.sum(axis=2)
        flat_w = (assign_w[:, None] * syn_w).reshape(-1)
        rows = p.reshape(-1, 4)
        keep = flat_w > 0.0
        rows = rows[keep] / syn_w.reshape(-1)[keep][:, None]
        acc.add(flat_w[keep], _optimize_rows(rows))

    weights, channels = acc.finish(prune_floor)
    return ChannelEnsemble(weights, channels, dedup_tolerance=dedup_tolerance)


def exact_level_entropy(
    code: StabilizerCode,
    child_ensembles,
    *,
    budget: int = DEFAULT_BUDGET,
) -> float:
    """Mean conditional entropy of exact_level's output, streamed.

    Equals ensemble_entropy(exact_level(...)) but skips flattening and
    deduplication: entropy needs only the joint (assignment, syndrome)
    weights and conditional rows, and is invariant under the per-entry
    recovery relabeling.
    """
    children = _as_children(code, child_ensembles)
    combinations = count_combinations(children)
    if combinations > budget:
        raise BudgetExceeded(combinations, budget)

    total = 0.0
    for assign_w, diags in _assignment_chunks(code, children):
        p = _coset_map_batch(code, diags)
        syn_w = p.sum(axis=2)
        rows = p / np.maximum(syn_w, 1e-300)[:, :, None]
        h = (-rows * np.log2(np.where(rows > 0.0, rows, 1.0))).sum(axis=2)
        total += float((assign_w[:, None] * syn_w * h).sum())
    return total


def concatenate_exact(
    code: StabilizerCode,
    noise: PauliProbVec,
    levels: int,
    *,
    budget: int = DEFAULT_BUDGET,
    dedup_tolerance: float = DEDUP_TOL,
    prune_floor: float = PRUNE_FLOOR,
) -> ChannelEnsemble:
    """Ensemble after the given number of exact concatenation levels.

    Level 0 is the raw physical channel as a singleton ensemble.
    """
    if levels < 0:
        raise ChannelError("levels must be >= 0")
    ens = ChannelEnsemble.singleton(noise)
    for _ in range(levels):
        ens = exact_level(code, ens, budget=budget,
                          dedup_tolerance=dedup_tolerance, prune_floor=prune_floor)
    return ens


def ensemble_entropy(e: ChannelEnsemble) -> float:
    """Mean conditional Shannon entropy (bits) of the ensemble's channels."""
    c = e.channels
    h = np.zeros_like(c)
    pos = c > 0.0
    h[pos] = -c[pos] * np.log2(c[pos])
    return float(e.weights @ h.sum(axis=1))
