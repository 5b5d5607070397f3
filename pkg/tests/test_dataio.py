"""CSV ingestion/serialization, polynomial features, split + normalization."""
import io

import numpy as np
import pytest

from stve import (
    CsvFormatError,
    RegressionDataset,
    quadratic_features,
    read_csv,
    split_and_normalize,
    split_dataset,
    write_csv,
)

from conftest import make_dataset


def read_text(text):
    return read_csv(io.StringIO(text))


# ---------------------------------------------------------------------------
# read_csv


def test_empty_y_cell_becomes_missing():
    dataset = read_text("t,y,u_1\n1,1.5,0.1\n2,,0.2\n3,-0.5,0.3\n")
    assert np.array_equal(dataset.observed, [True, False, True])
    assert np.isnan(dataset.y[1])
    np.testing.assert_array_equal(dataset.y[[0, 2]], [1.5, -0.5])


def test_header_infers_dimension():
    dataset = read_text("t,y,u_1,u_2\n1,1.0,0.1,0.2\n2,2.0,0.3,0.4\n")
    assert dataset.dim == 2
    assert dataset.horizon == 2
    np.testing.assert_array_equal(dataset.u, [[0.1, 0.2], [0.3, 0.4]])


def test_t_column_optional():
    dataset = read_text("y,u_1\n1.0,0.1\n2.0,0.2\n")
    assert np.array_equal(dataset.time_index, [1, 2])


def test_t_gaps_preserved_as_labels():
    dataset = read_text("t,y,u_1\n1,1.0,0.1\n2,2.0,0.2\n4,4.0,0.4\n")
    assert np.array_equal(dataset.time_index, [1, 2, 4])


def test_nan_token_accepted_as_missing():
    dataset = read_text("t,y,u_1\n1,nan,0.1\n2,NaN,0.2\n3,1.0,0.3\n4,2.0,0.4\n")
    assert np.array_equal(dataset.observed, [False, False, True, True])


def test_comment_lines_skipped():
    dataset = read_text("# run manifest\nt,y,u_1\n1,1.0,0.1\n2,2.0,0.2\n")
    assert dataset.horizon == 2


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("", "empty input"),
        ("t,y,u_1\n", "no data rows"),
        ("time,y,u_1\n1,1.0,0.1\n", "header"),
        ("t,y,u_1\n1,1.0\n", "3 cells"),
        ("t,y,u_1\n1,abc,0.1\n2,1.0,0.2\n", "y value"),
        ("t,y,u_1\n1,1.0,\n2,1.0,0.2\n", "u_1"),
        ("t,y,u_1\nx,1.0,0.1\n", "t value"),
        ("t,y,u_1\n2,1.0,0.1\n1,2.0,0.2\n", "increasing"),
        ("t,y,u_1\n0,1.0,0.1\n", "1-based"),
        ("t,y,u_1\n1,1.0,oops\n", "u_1"),
    ],
)
def test_malformed_input_raises(text, fragment):
    with pytest.raises(CsvFormatError, match=fragment):
        read_text(text)


def test_errors_carry_line_numbers():
    with pytest.raises(CsvFormatError, match="line 3"):
        read_text("t,y,u_1\n1,1.0,0.1\n2,bad,0.2\n")


def test_missing_u_is_never_imputed():
    # a blank u cell is an error, not a zero
    with pytest.raises(CsvFormatError, match="u_2"):
        read_text("t,y,u_1,u_2\n1,1.0,0.1,\n")


# ---------------------------------------------------------------------------
# write_csv round trip


def test_round_trip_identity(rng):
    dataset = make_dataset(rng, T=17, n=3, missing=(2, 9))
    buffer = io.StringIO()
    write_csv(dataset, buffer)
    back = read_csv(io.StringIO(buffer.getvalue()))
    assert np.array_equal(back.u, dataset.u)
    assert np.array_equal(back.observed, dataset.observed)
    assert np.array_equal(back.time_index, dataset.time_index)
    np.testing.assert_array_equal(back.y[back.observed], dataset.y[dataset.observed])


def test_round_trip_preserves_noncontiguous_labels(rng):
    base = make_dataset(rng, T=8, n=2)
    keep = np.array([0, 1, 3, 6])
    dataset = RegressionDataset(
        u=base.u[keep],
        y=base.y[keep],
        observed=base.observed[keep],
        time_index=base.time_index[keep],
    )
    buffer = io.StringIO()
    write_csv(dataset, buffer)
    back = read_csv(io.StringIO(buffer.getvalue()))
    assert np.array_equal(back.time_index, [1, 2, 4, 7])
    assert np.array_equal(back.u, dataset.u)


def test_comment_round_trip(rng):
    dataset = make_dataset(rng, T=5, n=1)
    buffer = io.StringIO()
    write_csv(dataset, buffer, comment="config digest abc123")
    text = buffer.getvalue()
    assert text.startswith("# config digest abc123\n")
    back = read_csv(io.StringIO(text))
    assert back.horizon == 5


def test_missing_rows_written_as_empty_cells(rng):
    dataset = make_dataset(rng, T=3, n=1, missing=(2,))
    buffer = io.StringIO()
    write_csv(dataset, buffer)
    row = buffer.getvalue().splitlines()[2]
    assert row.split(",")[1] == ""


# ---------------------------------------------------------------------------
# quadratic features


def test_quadratic_feature_rows():
    features = quadratic_features(np.array([0.0, 2.0, -1.0]))
    np.testing.assert_array_equal(
        features, [[1.0, 0.0, 0.0], [1.0, 2.0, 4.0], [1.0, -1.0, 1.0]]
    )
    assert np.linalg.norm(features[0]) == 1.0


def test_quadratic_feature_norms(rng):
    series = rng.uniform(-np.sqrt(2.0), np.sqrt(2.0), size=200)
    features = quadratic_features(series)
    norms = np.linalg.norm(features, axis=1)
    assert np.all(norms >= 1.0)  # constant coordinate floors the norm
    assert np.all(norms < 5.0)  # bounded series keeps the rows small


def test_quadratic_feature_validation():
    with pytest.raises(ValueError, match="non-empty"):
        quadratic_features(np.array([]))
    with pytest.raises(ValueError, match="finite"):
        quadratic_features(np.array([1.0, np.inf]))


# ---------------------------------------------------------------------------
# splitting and normalization


def test_split_keeps_time_labels(rng):
    dataset = make_dataset(rng, T=10, n=2)
    train, test = split_dataset(dataset, 6)
    assert np.array_equal(train.time_index, np.arange(1, 7))
    assert np.array_equal(test.time_index, np.arange(7, 11))
    assert np.array_equal(np.vstack([train.u, test.u]), dataset.u)


@pytest.mark.parametrize("cut", [0, 10, -1])
def test_split_bounds_validated(rng, cut):
    dataset = make_dataset(rng, T=10, n=2)
    with pytest.raises(ValueError, match="splits"):
        split_dataset(dataset, cut)


def test_even_split_gives_equal_halves(rng):
    dataset = make_dataset(rng, T=20, n=2)
    train, test, _params = split_and_normalize(dataset, train_fraction=0.5)
    assert train.horizon == 10
    assert test.horizon == 10


def test_normalized_train_response_is_standardized(rng):
    dataset = make_dataset(rng, T=40, n=2, missing=(3, 17))
    train, _test, params = split_and_normalize(dataset, train_fraction=0.5)
    observed = train.y[train.observed]
    assert abs(observed.mean()) < 1e-12
    assert abs(observed.std() - 1.0) < 1e-12
    assert params.y_std > 0.0


def test_test_split_uses_train_parameters(rng):
    # shift the second half: its normalized mean stays far from zero
    u = rng.normal(size=(40, 2))
    y = rng.normal(size=40)
    y[20:] += 10.0
    dataset = make_dataset(rng, T=40, n=2, y=y, u=u)
    _train, test, params = split_and_normalize(dataset, train_fraction=0.5)
    assert test.y[test.observed].mean() > 3.0
    np.testing.assert_allclose(
        params.denormalize_y(test.y[test.observed]), y[20:], rtol=0, atol=1e-12
    )


def test_constant_feature_column_untouched(rng):
    series = rng.normal(size=30)
    u = quadratic_features(series)
    dataset = make_dataset(rng, T=30, n=3, u=u)
    train, test, _params = split_and_normalize(dataset, train_fraction=0.5)
    assert np.all(train.u[:, 0] == 1.0)
    assert np.all(test.u[:, 0] == 1.0)
    # non-constant columns are standardized on the train split
    assert abs(train.u[:, 1].mean()) < 1e-12
    assert abs(train.u[:, 1].std() - 1.0) < 1e-12


def test_normalization_invertible(rng):
    dataset = make_dataset(rng, T=24, n=2)
    _train, _test, params = split_and_normalize(dataset, train_fraction=0.5)
    values = rng.normal(size=11) * 7.0 + 3.0
    np.testing.assert_allclose(
        params.denormalize_y(params.normalize_y(values)), values, rtol=0, atol=1e-12
    )


def test_missingness_preserved_through_normalization(rng):
    dataset = make_dataset(rng, T=30, n=2, missing=(4, 21))
    train, test, _params = split_and_normalize(dataset, train_fraction=0.5)
    assert int(train.observed.sum()) + int(test.observed.sum()) == 28
    assert not train.observed[3]
    assert not test.observed[5]  # label 21 sits at offset 5 of the test half


@pytest.mark.parametrize("fraction", [0.0, 1.0, -0.2])
def test_bad_train_fraction(rng, fraction):
    dataset = make_dataset(rng, T=10, n=1)
    with pytest.raises(ValueError, match="train_fraction"):
        split_and_normalize(dataset, train_fraction=fraction)


def test_tiny_split_rejected(rng):
    dataset = make_dataset(rng, T=10, n=1)
    with pytest.raises(ValueError, match="2 rows"):
        split_and_normalize(dataset, train_fraction=0.05)


def test_sparse_split_rejected(rng):
    dataset = make_dataset(rng, T=12, n=1, missing=(1, 2, 3, 4, 5))
    with pytest.raises(ValueError, match="observed"):
        split_and_normalize(dataset, train_fraction=0.5)


def test_constant_response_rejected(rng):
    u = rng.normal(size=(12, 1))
    dataset = make_dataset(rng, T=12, n=1, y=np.full(12, 4.0), u=u)
    with pytest.raises(ValueError, match="variance"):
        split_and_normalize(dataset, train_fraction=0.5)
