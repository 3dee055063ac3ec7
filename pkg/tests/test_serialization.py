import numpy as np

from shortdot import (
    build_generator,
    decode,
    encode,
    load_matrix,
    load_transform,
    run_workers,
    save_matrix,
    save_transform,
    validate_params,
    zero_support,
)


def test_matrix_round_trip_is_exact(tmp_path):
    rng = np.random.default_rng(0)
    mat = rng.standard_normal((3, 7)) * 10.0 ** rng.integers(-8, 8, size=(3, 7))
    path = tmp_path / "m.csv"
    save_matrix(path, mat)
    np.testing.assert_array_equal(load_matrix(path), mat)


def test_vector_loads_as_2d(tmp_path):
    path = tmp_path / "v.csv"
    save_matrix(path, np.arange(4.0))
    assert load_matrix(path).shape == (1, 4)


def test_transform_round_trip_vandermonde(tmp_path):
    rng = np.random.default_rng(1)
    p = validate_params(6, 5, 3, 14)  # pads to 18
    gen = build_generator(p)
    A = rng.standard_normal((3, 14))
    code = encode(A, gen, p)
    out = save_transform(code, tmp_path / "code")

    text = (out / "params.txt").read_text()
    for key in ("P=6", "K=5", "M=3", "N=18", "N_raw=14", "kind=vandermonde"):
        assert key in text

    loaded = load_transform(out)
    np.testing.assert_array_equal(loaded.F, code.F)
    assert loaded.params == code.params
    assert loaded.supports == code.supports
    assert loaded.zero_tolerance == code.zero_tolerance
    np.testing.assert_array_equal(loaded.generator.entries, gen.entries)

    x = rng.standard_normal(14)
    outs = run_workers(loaded, x)
    got = decode(outs[:5], loaded.generator, loaded.params)
    truth = A @ x
    assert np.linalg.norm(got - truth) <= 1e-8 * np.linalg.norm(truth)


def test_transform_round_trip_gaussian(tmp_path):
    rng = np.random.default_rng(2)
    p = validate_params(5, 4, 2, 10)
    gen = build_generator(p, kind="gaussian", seed=9)
    code = encode(rng.standard_normal((2, 10)), gen, p)
    loaded = load_transform(save_transform(code, tmp_path / "g"))
    assert loaded.generator.kind == "gaussian"
    assert loaded.generator.seed == 9
    np.testing.assert_array_equal(loaded.generator.entries, gen.entries)
    np.testing.assert_array_equal(loaded.F, code.F)


def test_supports_file_is_one_based(tmp_path):
    rng = np.random.default_rng(3)
    p = validate_params(4, 3, 1, 8)
    code = encode(rng.standard_normal((1, 8)), build_generator(p), p)
    out = save_transform(code, tmp_path / "s")
    lines = (out / "supports.txt").read_text().splitlines()
    assert len(lines) == 4
    for i, line in enumerate(lines, start=1):
        indices = [int(tok) for tok in line.split()]
        assert min(indices) >= 1 and max(indices) <= p.N
        assert all(i not in zero_support(j, p) for j in indices)
