import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from concatqec import (
    BudgetExceeded,
    ChannelEnsemble,
    ChannelError,
    PauliProbVec,
    apply_logical_pauli,
    concatenate_exact,
    coset_map_probs,
    ensemble_entropy,
    exact_level,
    exact_level_entropy,
    optimize_recovery,
)
from concatqec.ensemble import count_combinations


@st.composite
def prob_vecs(draw):
    raw = draw(st.lists(st.floats(0.0, 1.0), min_size=4, max_size=4))
    total = sum(raw)
    if total <= 0.0:
        raw = [1.0, 0.0, 0.0, 0.0]
        total = 1.0
    return PauliProbVec.from_array(np.array(raw) / total)


def bit_flip(x):
    return PauliProbVec.from_array(np.array([(1 + x) / 2, (1 - x) / 2, 0, 0]))


def row_entropy(row):
    row = np.asarray(row, dtype=float)
    pos = row[row > 0]
    return float(-(pos * np.log2(pos)).sum())


# ---------------------------------------------------------------- recovery

def test_optimize_recovery_identity_dominant():
    q = PauliProbVec.from_array(np.array([0.7, 0.1, 0.1, 0.1]))
    letter, out = optimize_recovery(q)
    assert letter == "I"
    assert np.allclose(out.as_array(), q.as_array())


def test_optimize_recovery_tie_prefers_identity():
    q = PauliProbVec.from_array(np.array([0.3, 0.3, 0.1, 0.3]))
    letter, out = optimize_recovery(q)
    assert letter == "I"
    assert np.allclose(out.as_array(), q.as_array())


def test_optimize_recovery_tie_prefers_x_over_z():
    q = PauliProbVec.from_array(np.array([0.1, 0.4, 0.1, 0.4]))
    letter, _ = optimize_recovery(q)
    assert letter == "X"


def test_optimize_recovery_tie_prefers_z_over_y():
    q = PauliProbVec.from_array(np.array([0.1, 0.1, 0.4, 0.4]))
    letter, _ = optimize_recovery(q)
    assert letter == "Z"


def test_optimize_recovery_zero_weight_rejected():
    with pytest.raises(ChannelError):
        optimize_recovery(PauliProbVec.from_array(np.zeros(4)))


@given(prob_vecs())
def test_optimize_recovery_moves_max_to_identity(q):
    letter, out = optimize_recovery(q)
    arr = out.as_array()
    assert arr[0] == pytest.approx(q.as_array().max())
    assert np.allclose(arr, apply_logical_pauli(q, letter).as_array())
    # a second pass has nothing left to do
    letter2, out2 = optimize_recovery(out)
    assert letter2 == "I"
    assert np.allclose(out2.as_array(), arr)


def test_optimize_recovery_quasi_channel_swap():
    # an X-dominant quasi-channel gets its I and X (and Y and Z) entries
    # swapped; the overall weight stays put
    q = PauliProbVec.from_array(0.125 * np.array([0.2, 0.5, 0.1, 0.2]))
    letter, out = optimize_recovery(q)
    assert letter == "X"
    assert np.allclose(out.as_array(), 0.125 * np.array([0.5, 0.2, 0.2, 0.1]))


# ---------------------------------------------------------------- ensembles

def test_singleton_normalizes_quasi_channel():
    e = ChannelEnsemble.singleton(
        PauliProbVec.from_array(np.array([0.3, 0.1, 0.0, 0.0])))
    assert e.size == 1
    assert np.allclose(e.weights, [1.0])
    assert np.allclose(e.channels, [[0.75, 0.25, 0.0, 0.0]])


def test_ensemble_validation():
    ok = np.array([[1.0, 0.0, 0.0, 0.0]])
    with pytest.raises(ChannelError):
        ChannelEnsemble(np.array([0.5]), ok)  # weights must sum to 1
    with pytest.raises(ChannelError):
        ChannelEnsemble(np.array([1.0]), np.array([[0.5, 0.2, 0.2, 0.2]]))
    with pytest.raises(ChannelError):
        ChannelEnsemble(np.array([1.0]), np.array([[1.1, -0.1, 0.0, 0.0]]))
    with pytest.raises(ChannelError):
        ChannelEnsemble(np.array([0.5, 0.5]), ok)  # shape mismatch
    with pytest.raises(ChannelError):
        ChannelEnsemble(np.array([]), np.empty((0, 4)))


def test_ensemble_average_and_entries():
    e = ChannelEnsemble(np.array([0.25, 0.75]),
                        np.array([[1.0, 0.0, 0.0, 0.0],
                                  [0.0, 1.0, 0.0, 0.0]]))
    assert np.allclose(e.average_channel().as_array(), [0.25, 0.75, 0.0, 0.0])
    entries = e.entries()
    assert entries[0][0] == 0.25
    assert np.allclose(entries[1][1].as_array(), [0.0, 1.0, 0.0, 0.0])


def test_ensemble_entropy_known_mixture():
    e = ChannelEnsemble(np.array([0.5, 0.5]),
                        np.array([[1.0, 0.0, 0.0, 0.0],
                                  [0.5, 0.5, 0.0, 0.0]]))
    assert ensemble_entropy(e) == pytest.approx(0.5, abs=1e-12)


# ---------------------------------------------------------------- exact level

def test_exact_level_matches_per_syndrome_channels(codes):
    # with one singleton per slot there is a single assignment, so the
    # output is exactly the optimized per-syndrome conditional channels
    bf2 = codes["bitflip2"]
    noises = [PauliProbVec.from_array(np.array([0.85, 0.05, 0.06, 0.04])),
              PauliProbVec.from_array(np.array([0.7, 0.2, 0.04, 0.06]))]
    rows = coset_map_probs(bf2, noises)
    ens = exact_level(bf2, [ChannelEnsemble.singleton(q) for q in noises])
    assert ens.size == bf2.n_syndromes
    for beta in range(bf2.n_syndromes):
        w = rows[beta].sum()
        _, cond = optimize_recovery(PauliProbVec.from_array(rows[beta] / w))
        i = np.flatnonzero(np.abs(ens.weights - w) < 1e-12)
        assert i.size == 1
        assert np.allclose(ens.channels[i[0]], cond.as_array(), atol=1e-12)


def test_exact_level_entropy_matches_syndrome_sum(codes):
    code = codes["five-qubit"]
    q = PauliProbVec.from_array(np.array([0.9, 0.05, 0.03, 0.02]))
    rows = coset_map_probs(code, [q] * code.n)
    want = sum(row.sum() * row_entropy(row / row.sum()) for row in rows)
    got = exact_level_entropy(code, ChannelEnsemble.singleton(q))
    assert got == pytest.approx(want, abs=1e-12)


@given(prob_vecs())
def test_exact_level_output_is_normalized(codes, q):
    ens = exact_level(codes["rep3"], ChannelEnsemble.singleton(q))
    assert ens.weights.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(ens.channels.sum(axis=1), 1.0, atol=1e-12)
    assert np.all(ens.channels[:, 0] >= ens.channels.max(axis=1) - 1e-12)


def test_exact_level_single_vs_list_children(codes):
    code = codes["rep3"]
    base = exact_level(code, ChannelEnsemble.singleton(bit_flip(0.63)))
    a = exact_level(code, base)
    b = exact_level(code, [base] * code.n)
    assert np.array_equal(a.weights, b.weights)
    assert np.array_equal(a.channels, b.channels)


def test_exact_level_entropy_agrees_with_flattened(codes):
    code = codes["rep3"]
    base = exact_level(
        code, ChannelEnsemble.singleton(
            PauliProbVec.from_array(np.array([0.8, 0.1, 0.06, 0.04]))))
    direct = exact_level_entropy(code, base)
    flattened = ensemble_entropy(exact_level(code, base))
    assert direct == pytest.approx(flattened, abs=1e-8)


def test_budget_exceeded(codes):
    code = codes["rep3"]
    base = exact_level(code, ChannelEnsemble.singleton(bit_flip(0.4)))
    assert base.size > 1
    with pytest.raises(BudgetExceeded) as info:
        exact_level(code, base, budget=base.size ** code.n - 1)
    assert info.value.combinations == base.size ** code.n
    assert count_combinations([base] * code.n) == base.size ** code.n
    with pytest.raises(BudgetExceeded):
        exact_level_entropy(code, base, budget=1)


def test_wrong_child_count_rejected(codes):
    with pytest.raises(ChannelError):
        exact_level(codes["rep3"],
                    [ChannelEnsemble.singleton(bit_flip(0.5))] * 2)


def test_prune_floor_cannot_eat_everything(codes):
    with pytest.raises(ChannelError):
        exact_level(codes["bitflip2"], ChannelEnsemble.singleton(bit_flip(0.5)),
                    prune_floor=2.0)


# ------------------------------------------------------------- concatenation

def test_concatenate_exact_level_zero_is_singleton(codes):
    q = PauliProbVec.from_array(np.array([0.6, 0.2, 0.1, 0.1]))
    ens = concatenate_exact(codes["five-qubit"], q, 0)
    assert ens.size == 1
    assert np.allclose(ens.channels[0], q.as_array())


def test_concatenate_exact_one_level(codes):
    code = codes["rep3"]
    q = PauliProbVec.from_array(np.array([0.75, 0.15, 0.04, 0.06]))
    a = concatenate_exact(code, q, 1)
    b = exact_level(code, ChannelEnsemble.singleton(q))
    assert np.array_equal(a.weights, b.weights)
    assert np.array_equal(a.channels, b.channels)


def test_concatenate_exact_rejects_negative_levels(codes):
    with pytest.raises(ChannelError):
        concatenate_exact(codes["rep3"], bit_flip(0.5), -1)


def test_two_level_bitflip_average_channel(codes):
    # composing the bit-flip-preserving map with itself keeps the family
    # and squares into 3x/2 - x^3/2 on the X/Y diagonal entries
    x = 0.62
    ens = concatenate_exact(codes["bitflip2"], bit_flip(x), 2)
    avg = ens.average_channel().as_array()
    y = (3 * x - x ** 3) / 2
    want = np.array([(1 + y) / 2, (1 - y) / 2, 0.0, 0.0])
    assert np.allclose(avg, want, atol=1e-12)
