import numpy as np
import pytest

from shortdot import validate_params


def test_no_padding_case():
    p = validate_params(6, 5, 3, 12)
    assert (p.P, p.K, p.M, p.N, p.N_raw) == (6, 5, 3, 12, 12)
    assert p.s == 8  # (12/6)*(6-5+3)


def test_padding_to_next_multiple():
    # 785 pads to 800; s = (800/20)*(20-18+10)
    p = validate_params(20, 18, 10, 785)
    assert p.N == 800
    assert p.N_raw == 785
    assert p.s == 480


@pytest.mark.parametrize(
    "P,K,M,N_raw",
    [
        (4, 3, 5, 8),   # M > K
        (4, 5, 2, 8),   # K > P
        (0, 1, 1, 4),
        (4, 0, 0, 4),
        (4, 3, 2, 0),
    ],
)
def test_rejects_invalid(P, K, M, N_raw):
    with pytest.raises(ValueError):
        validate_params(P, K, M, N_raw)


def test_accepts_numpy_integers():
    p = validate_params(np.int64(6), np.int64(5), np.int64(3), np.int64(12))
    assert (p.P, p.K, p.M, p.N) == (6, 5, 3, 12)
    assert type(p.P) is int


def test_invariants_on_random_valid_tuples():
    rng = np.random.default_rng(0)
    for _ in range(200):
        P = int(rng.integers(1, 30))
        K = int(rng.integers(1, P + 1))
        M = int(rng.integers(1, K + 1))
        N_raw = int(rng.integers(1, 500))
        p = validate_params(P, K, M, N_raw)
        assert p.N % P == 0
        assert 0 <= p.N - p.N_raw < P
        assert p.N * M / P <= p.s <= p.N
