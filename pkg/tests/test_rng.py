import pytest

from spdenoise.rng import Rng, rng_new, splitmix64


def test_splitmix64_reference_vector():
    # published first output of SplitMix64 from state 0
    _, out = splitmix64(0)
    assert out == 0xE220A8397B1DCDAF


def test_xoshiro_hand_computed_outputs():
    rng = Rng.from_state([1, 2, 3, 4])
    # rotl(2 * 5, 7) * 9
    assert rng.next_u64() == 11520
    # after one step s[1] == 0
    assert rng.next_u64() == 0


def test_same_seed_same_stream():
    a, b = rng_new(42), rng_new(42)
    assert [a.next_u64() for _ in range(1000)] == [b.next_u64() for _ in range(1000)]


def test_different_seeds_differ():
    assert rng_new(1).next_u64() != rng_new(2).next_u64()


def test_uniform_below_one_is_zero():
    rng = rng_new(9)
    assert all(rng.uniform_below(1) == 0 for _ in range(100))


@pytest.mark.parametrize("n", [2, 3, 7, 1000, 2**63 + 5])
def test_uniform_below_in_range(n):
    rng = rng_new(n)
    assert all(0 <= rng.uniform_below(n) < n for _ in range(500))


def test_uniform_below_rejects_nonpositive():
    with pytest.raises(ValueError):
        rng_new(0).uniform_below(0)


def test_uniform_below_roughly_uniform():
    rng = rng_new(123)
    counts = [0] * 6
    for _ in range(60000):
        counts[rng.uniform_below(6)] += 1
    # chi-square with 5 dof; 20.5 is the 0.999 quantile
    chi2 = sum((c - 10000) ** 2 / 10000 for c in counts)
    assert chi2 < 20.5


def test_random_float_range():
    rng = rng_new(5)
    xs = [rng.random() for _ in range(1000)]
    assert min(xs) >= 0.0 and max(xs) < 1.0


def test_sample_without_replacement_distinct():
    picks = rng_new(3).sample_without_replacement(100, 60)
    assert len(picks) == len(set(picks)) == 60
    assert all(0 <= p < 100 for p in picks)
    assert sorted(rng_new(4).sample_without_replacement(50, 50)) == list(range(50))


def test_split_gives_independent_deterministic_streams():
    a, b = rng_new(8), rng_new(8)
    ca, cb = a.split(), b.split()
    assert ca.next_u64() == cb.next_u64()
    assert ca.next_u64() != a.next_u64()


def test_from_state_rejects_zero_state():
    with pytest.raises(ValueError):
        Rng.from_state([0, 0, 0, 0])
