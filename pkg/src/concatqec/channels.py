"""One-qubit Pauli channels, quasi-channels and their representations.

Two equivalent pictures are used throughout:

* probability form: a 4-vector ``(p_I, p_X, p_Y, p_Z)`` of Pauli error
  probabilities (a quasi-channel when the total weight is below 1);
* diagonal form: the diagonal ``[p, x, y, z]`` of the channel's superoperator
  in the Pauli basis.

The two are exchanged by the involutive 4-point transform ``HAD4`` (rows are
the commutation signs of I, X, Y, Z against each other).  General one-qubit
superoperators (possibly non-diagonal) are supported as a construction
convenience and as the small-n oracle; the production pipeline runs entirely
on probability vectors.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "CLAMP_TOL",
    "LETTERS",
    "KLEIN",
    "HAD4",
    "PauliProbVec",
    "DiagonalQuasiChannel",
    "OneQubitSuperop",
    "PauliBasisState",
    "diag_to_probs",
    "probs_to_diag",
    "entropy",
    "quasi_entropy_contribution",
    "apply_logical_pauli",
    "noise_family",
    "NOISE_FAMILIES",
    "superop_of_kraus",
]

#: Numerical tolerance for clamping tiny negative probabilities and for
#: channel deduplication.  Enumerations are sums/products of machine floats
#: with no deep cancellation, so 1e-12 leaves a wide safety margin.
CLAMP_TOL = 1e-12

LETTERS = "IXYZ"
_LETTER_INDEX = {c: i for i, c in enumerate(LETTERS)}

#: Klein-group multiplication table on letter indices (I,X,Y,Z = 0..3).
KLEIN = np.array(
    [[0, 1, 2, 3],
     [1, 0, 3, 2],
     [2, 3, 0, 1],
     [3, 2, 1, 0]], dtype=np.int64)

#: 4-point transform between probability and diagonal form;
#: HAD4[a][b] = commutation sign of letters a and b.  HAD4 @ HAD4 = 4*I.
HAD4 = np.array(
    [[1, 1, 1, 1],
     [1, 1, -1, -1],
     [1, -1, 1, -1],
     [1, -1, -1, 1]], dtype=np.float64)

# single-qubit matrices, used only for Kraus-form construction
_SIGMA = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class ChannelError(ValueError):
    """Non-physical channel data (negative probability, zero weight, ...)."""


def _clamped(values, tol: float = CLAMP_TOL) -> np.ndarray:
    v = np.asarray(values, dtype=np.float64)
    if np.any(v < -tol):
        raise ChannelError(f"negative probability beyond tolerance: {v}")
    return np.where(v < 0.0, 0.0, v)


@dataclass(frozen=True)
class PauliProbVec:
    """Pauli error probabilities (p_I, p_X, p_Y, p_Z) of a (quasi-)channel."""

    p_i: float
    p_x: float
    p_y: float
    p_z: float

    def __post_init__(self):
        v = _clamped([self.p_i, self.p_x, self.p_y, self.p_z])
        for name, val in zip(("p_i", "p_x", "p_y", "p_z"), v):
            object.__setattr__(self, name, float(val))

    @classmethod
    def from_array(cls, arr) -> "PauliProbVec":
        return cls(*np.asarray(arr, dtype=np.float64))

    def as_array(self) -> np.ndarray:
        return np.array([self.p_i, self.p_x, self.p_y, self.p_z])

    def weight(self) -> float:
        return self.p_i + self.p_x + self.p_y + self.p_z

    def normalized(self) -> "PauliProbVec":
        w = self.weight()
        if w <= 0.0:
            raise ChannelError("cannot normalize a zero-weight quasi-channel")
        return PauliProbVec(self.p_i / w, self.p_x / w, self.p_y / w, self.p_z / w)


@dataclass(frozen=True)
class DiagonalQuasiChannel:
    """Superoperator diagonal [p, x, y, z] of a Pauli (quasi-)channel."""

    d: tuple[float, float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(float(v) for v in self.d))
        if len(self.d) != 4:
            raise ChannelError("diagonal must have exactly 4 entries")

    def as_array(self) -> np.ndarray:
        return np.array(self.d)


def diag_to_probs(d: DiagonalQuasiChannel) -> PauliProbVec:
    """Pauli probabilities of a diagonal quasi-channel.

    Raises if any resulting component is negative beyond tolerance, which
    signals a diagonal that is not a Pauli (quasi-)channel.
    """
    p = HAD4 @ d.as_array() / 4.0
    return PauliProbVec.from_array(_clamped(p))


def probs_to_diag(p: PauliProbVec) -> DiagonalQuasiChannel:
    """Exact inverse of :func:`diag_to_probs`."""
    return DiagonalQuasiChannel(tuple(HAD4 @ p.as_array()))


def _h(q: np.ndarray) -> np.ndarray:
    """Elementwise -q*log2(q) with h(0) = 0."""
    q = np.asarray(q, dtype=np.float64)
    out = np.zeros_like(q)
    pos = q > 0.0
    out[pos] = -q[pos] * np.log2(q[pos])
    return out


def entropy(p: PauliProbVec) -> float:
    """Shannon entropy (bits) of the normalized error distribution, in [0, 2]."""
    w = p.weight()
    if w <= 0.0:
        raise ChannelError("entropy undefined for zero-weight quasi-channel")
    return float(_h(p.as_array() / w).sum())


def quasi_entropy_contribution(p: PauliProbVec) -> float:
    """Entropy contribution -h(w) + sum_s h(p_s) of a quasi-channel.

    Identically equals ``weight * entropy`` of the normalized channel.
    """
    w = p.weight()
    if w <= 0.0:
        raise ChannelError("entropy undefined for zero-weight quasi-channel")
    return float(_h(p.as_array()).sum() - _h(np.array([w])).sum())


def apply_logical_pauli(p: PauliProbVec, s: str) -> PauliProbVec:
    """Compose a Pauli channel with the Pauli ``s``: error labels multiply by s.

    Weight and entropy are unchanged; applying the same letter twice is the
    identity.
    """
    si = _LETTER_INDEX[s]
    arr = p.as_array()
    return PauliProbVec.from_array(arr[KLEIN[si]])


def _depolarizing(p: float) -> np.ndarray:
    return np.array([1.0 - 3.0 * p, p, p, p])


def _indep_flips(p: float) -> np.ndarray:
    # independent bit flip and phase flip, each with probability p
    return np.array([(1.0 - p) ** 2, p * (1.0 - p), p * p, p * (1.0 - p)])


def _phase_flip(p: float) -> np.ndarray:
    return np.array([1.0 - p, 0.0, 0.0, p])


def _two_axis(p: float) -> np.ndarray:
    return np.array([1.0 - 2.0 * p, p, 0.0, p])


#: name -> (constructor, largest parameter with all probabilities in [0,1],
#: upper bracket end used by threshold searches).  The bracket cap for the
#: two-axis family is below its 0.5 domain cap because its entropy is only
#: monotone up to ~0.35.
NOISE_FAMILIES: dict[str, tuple] = {
    "depolarizing": (_depolarizing, 1.0 / 3.0, 1.0 / 3.0),
    "indep-flips": (_indep_flips, 1.0, 0.5),
    "phase-flip": (_phase_flip, 1.0, 0.5),
    "two-axis": (_two_axis, 0.5, 0.3),
}


def noise_family(name: str, p: float) -> PauliProbVec:
    """Construct a named one-parameter noise channel.

    Families: ``depolarizing`` (p,p,p), ``indep-flips`` (p-p^2, p^2, p-p^2),
    ``phase-flip`` (0,0,p), ``two-axis`` (p,0,p).
    """
    if name not in NOISE_FAMILIES:
        raise ChannelError(f"unknown noise family {name!r}; known: {sorted(NOISE_FAMILIES)}")
    ctor, cap, _ = NOISE_FAMILIES[name]
    if not 0.0 <= p <= cap:
        raise ChannelError(f"{name} parameter {p} outside valid range [0, {cap}]")
    return PauliProbVec.from_array(ctor(p))


@dataclass(frozen=True)
class OneQubitSuperop:
    """Real 4x4 one-qubit superoperator in the Pauli basis {I,X,Y,Z}."""

    m: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=np.float64)
        if m.shape != (4, 4):
            raise ChannelError("superoperator must be 4x4")
        object.__setattr__(self, "m", m)

    def is_trace_preserving(self, tol: float = 1e-9) -> bool:
        return bool(np.allclose(self.m[0], [1.0, 0.0, 0.0, 0.0], atol=tol))

    def diagonal(self) -> DiagonalQuasiChannel:
        return DiagonalQuasiChannel(tuple(np.diag(self.m)))

    @classmethod
    def identity(cls) -> "OneQubitSuperop":
        return cls(np.eye(4))

    @classmethod
    def from_probs(cls, p: PauliProbVec) -> "OneQubitSuperop":
        return cls(np.diag(HAD4 @ p.as_array()))


@dataclass(frozen=True)
class PauliBasisState:
    """Pauli-expansion coefficients c of a density operator, c[0] = trace."""

    n: int
    c: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=np.float64)
        if c.shape != (4 ** self.n,):
            raise ChannelError(f"coefficient vector must have length 4^{self.n}")
        object.__setattr__(self, "c", c)

    @classmethod
    def from_density(cls, rho: np.ndarray) -> "PauliBasisState":
        rho = np.asarray(rho, dtype=complex)
        n = int(np.log2(rho.shape[0]))
        if rho.shape != (2 ** n, 2 ** n):
            raise ChannelError("density matrix must be 2^n x 2^n")
        c = np.empty(4 ** n)
        for idx in range(4 ** n):
            c[idx] = np.real(np.trace(_pauli_matrix(n, idx) @ rho))
        return cls(n, c)

    def to_density(self) -> np.ndarray:
        dim = 2 ** self.n
        rho = np.zeros((dim, dim), dtype=complex)
        for idx in range(4 ** self.n):
            rho += self.c[idx] * _pauli_matrix(self.n, idx)
        return rho / dim


def _pauli_matrix(n: int, idx: int) -> np.ndarray:
    """Tensor-product Pauli matrix for a base-4 letter index (qubit 0 = MSD)."""
    m = np.array([[1.0 + 0j]])
    for j in range(n):
        letter = (idx // 4 ** (n - 1 - j)) % 4
        m = np.kron(m, _SIGMA[LETTERS[letter]])
    return m


def superop_of_kraus(kraus: list[np.ndarray], *, tol: float = 1e-9) -> OneQubitSuperop:
    """Pauli-basis superoperator of a one-qubit channel given by Kraus operators.

    For Pauli Kraus sets the result is diagonal with commutation-sign entries.
    A set that is not trace preserving produces a quasi-channel and a warning;
    a set that does not preserve Hermiticity (complex entries in the Pauli
    basis) is rejected.
    """
    ops = [np.asarray(a, dtype=complex) for a in kraus]
    if any(a.shape != (2, 2) for a in ops):
        raise ChannelError("Kraus operators must be 2x2")
    total = sum(a.conj().T @ a for a in ops)
    if not np.allclose(total, np.eye(2), atol=tol):
        warnings.warn("Kraus set is not trace preserving; returning a quasi-channel",
                      stacklevel=2)
    m = np.zeros((4, 4), dtype=complex)
    basis = [_SIGMA[c] for c in LETTERS]
    for col, tau in enumerate(basis):
        out = sum(a @ tau @ a.conj().T for a in ops)
        for row, sigma in enumerate(basis):
            m[row, col] = 0.5 * np.trace(sigma @ out)
    if np.abs(m.imag).max() > tol:
        raise ChannelError("Kraus set does not preserve Hermiticity")
    return OneQubitSuperop(m.real)
