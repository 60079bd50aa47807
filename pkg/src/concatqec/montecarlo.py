"""Monte Carlo sampling of deep concatenation levels.

Each sample draws one syndrome history through the full block tree: every
bottom block samples a syndrome of the level map of the base noise, every
higher node applies the level map to its children's conditional channels and
samples a syndrome in turn, and the channel surviving at the root is
optimized and scored.  Entropy averaged over samples estimates the exact
ensemble entropy, which is infeasible to enumerate for deep levels.

Bottom blocks all see the same base noise, so their level map is computed
once and sampled categorically.  Higher nodes memoize level maps keyed by the
ordered tuple of child channel identities; the order matters because qubit
permutations are generally not code automorphisms.  Samples are split across
independent streams seeded by (seed, stream); results are deterministic for a
fixed stream count regardless of thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channels import HAD4, ChannelError, PauliProbVec
from .codes import StabilizerCode
from .ensemble import _optimize_rows
from .levelmap import _coset_map_batch, coset_map_probs

__all__ = ["MCEstimate", "mc_concatenate"]

#: Per-chunk cap on (samples x tree width) cells, to bound memory.
_MAX_CELLS = 1 << 22

#: Channel identities are assigned on this rounding grid.
_ID_DECIMALS = 12


@dataclass(frozen=True)
class MCEstimate:
    """Sample mean and standard error of the root channel's entropy.

    ``mean_infidelity`` is the average of 1 - p_I after root optimization.
    Estimates are reproducible given (seed, samples, streams).
    """

    mean_entropy: float
    std_error: float
    samples: int
    mean_infidelity: float
    seed: int


class _Registry:
    """Channel rows keyed by rounded value; stable integer identities."""

    def __init__(self):
        self._ids: dict[bytes, int] = {}
        self._rows: list[np.ndarray] = []
        self._matrix: np.ndarray | None = None

    def register(self, row: np.ndarray) -> int:
        key = np.round(row, _ID_DECIMALS).tobytes()
        slot = self._ids.get(key)
        if slot is None:
            slot = len(self._rows)
            self._ids[key] = slot
            self._rows.append(np.array(row))
            self._matrix = None
        return slot

    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            self._matrix = np.stack(self._rows)
        return self._matrix


def _entropy_rows(rows: np.ndarray) -> np.ndarray:
    h = np.zeros_like(rows)
    pos = rows > 0.0
    h[pos] = -rows[pos] * np.log2(rows[pos])
    return h.sum(axis=1)


class _StreamWorker:
    """One independent sampling stream with its own memo and registry."""

    def __init__(self, code: StabilizerCode, base_noise: PauliProbVec,
                 levels: int):
        self.code = code
        self.levels = levels
        self.registry = _Registry()
        self.memo: dict[bytes, tuple[np.ndarray, np.ndarray]] = {}

        p1 = coset_map_probs(code, base_noise)
        w1 = p1.sum(axis=1)
        rows1 = np.where(w1[:, None] > 0.0, p1 / np.maximum(w1, 1e-300)[:, None],
                         np.array([1.0, 0.0, 0.0, 0.0]))
        self.cum1 = np.cumsum(w1)
        self.cum1[-1] = 1.0
        self.ids1 = np.array([self.registry.register(r) for r in rows1])

    def _node_maps(self, uniq_keys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Cumulative syndrome weights and child row ids for unique key rows."""
        n_syn = self.code.n_syndromes
        cums = np.empty((uniq_keys.shape[0], n_syn))
        idtabs = np.empty((uniq_keys.shape[0], n_syn), dtype=np.int64)
        missing = [k for k, key in enumerate(uniq_keys)
                   if key.tobytes() not in self.memo]
        if missing:
            rows = self.registry.matrix()
            diags = rows[uniq_keys[missing]] @ HAD4.T
            p = _coset_map_batch(self.code, diags)
            w = p.sum(axis=2)
            cond = np.where(w[:, :, None] > 0.0,
                            p / np.maximum(w, 1e-300)[:, :, None],
                            np.array([1.0, 0.0, 0.0, 0.0]))
            for pos, k in enumerate(missing):
                cum = np.cumsum(w[pos])
                cum[-1] = 1.0
                ids = np.array([self.registry.register(r) for r in cond[pos]])
                self.memo[uniq_keys[k].tobytes()] = (cum, ids)
        for k, key in enumerate(uniq_keys):
            cums[k], idtabs[k] = self.memo[key.tobytes()]
        return cums, idtabs

    def run(self, n_samples: int, rng: np.random.Generator):
        n = self.code.n
        width0 = n ** (self.levels - 1)
        chunk = max(1, _MAX_CELLS // max(width0, 1))
        ent = np.empty(n_samples)
        inf = np.empty(n_samples)
        done = 0
        while done < n_samples:
            s = min(chunk, n_samples - done)
            u = rng.random((s, width0))
            ids = self.ids1[np.searchsorted(self.cum1, u, side="right")]
            width = width0
            for _ in range(self.levels - 1):
                width //= n
                nodes = ids.reshape(s * width, n)
                uniq, inverse = np.unique(nodes, axis=0, return_inverse=True)
                cums, idtabs = self._node_maps(uniq)
                u = rng.random(nodes.shape[0])
                beta = (cums[inverse] <= u[:, None]).sum(axis=1)
                ids = idtabs[inverse, beta].reshape(s, width)
            rows = _optimize_rows(self.registry.matrix()[ids[:, 0]])
            ent[done:done + s] = _entropy_rows(rows)
            inf[done:done + s] = 1.0 - rows[:, 0]
            done += s
        return ent, inf


def mc_concatenate(
    code: StabilizerCode,
    base_noise: PauliProbVec,
    levels: int,
    samples: int,
    seed: int = 0,
    *,
    streams: int = 8,
    threads: int = 1,
) -> MCEstimate:
    """Monte Carlo estimate of the level-``levels`` ensemble entropy."""
    if levels < 1:
        raise ChannelError("levels must be >= 1")
    if samples < 1:
        raise ChannelError("samples must be >= 1")
    if not isinstance(seed, (int, np.integer)) or seed < 0:
        raise ChannelError("seed must be a nonnegative integer")
    streams = min(max(1, streams), samples)

    counts = [samples // streams + (1 if s < samples % streams else 0)
              for s in range(streams)]

    def run_one(s: int):
        worker = _StreamWorker(code, base_noise, levels)
        rng = np.random.default_rng([seed, s])
        return worker.run(counts[s], rng)

    if threads > 1 and streams > 1:
        with ThreadPoolExecutor(max_workers=min(threads, streams)) as pool:
            results = list(pool.map(run_one, range(streams)))
    else:
        results = [run_one(s) for s in range(streams)]

    ent = np.concatenate([r[0] for r in results])
    inf = np.concatenate([r[1] for r in results])
    se = float(ent.std(ddof=1) / np.sqrt(samples)) if samples > 1 else float("inf")
    return MCEstimate(
        mean_entropy=float(ent.mean()),
        std_error=se,
        samples=samples,
        mean_infidelity=float(inf.mean()),
        seed=int(seed),
    )
