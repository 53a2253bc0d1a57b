import numpy as np
import pytest

from teleguard.vision import integral_image, rect_sum

from oracles import naive_rect_sum


def test_all_ones_corner():
    ii = integral_image(np.ones((3, 3), np.uint8))
    assert ii[3, 3] == 9
    assert ii[0, :].sum() == 0 and ii[:, 0].sum() == 0


def test_single_pixel_table():
    ii = integral_image(np.array([[255]], np.uint8))
    assert np.array_equal(ii, np.array([[0, 0], [0, 255]], np.uint64))


def test_monotone_along_rows_and_columns():
    rng = np.random.default_rng(3)
    ii = integral_image(rng.integers(0, 256, size=(20, 30), dtype=np.uint8))
    assert (np.diff(ii.astype(np.int64), axis=0) >= 0).all()
    assert (np.diff(ii.astype(np.int64), axis=1) >= 0).all()


def test_zero_area_rect():
    ii = integral_image(np.full((4, 4), 9, np.uint8))
    assert rect_sum(ii, 2, 2, 0, 2) == 0
    assert rect_sum(ii, 1, 1, 2, 0) == 0


def test_full_image_rect_is_total():
    rng = np.random.default_rng(4)
    img = rng.integers(0, 256, size=(16, 9), dtype=np.uint8)
    ii = integral_image(img)
    assert rect_sum(ii, 0, 0, 9, 16) == int(img.sum())


def test_random_rects_match_bruteforce_exactly():
    rng = np.random.default_rng(5)
    img = rng.integers(0, 256, size=(64, 64), dtype=np.uint8)
    ii = integral_image(img)
    pixels = img.tolist()
    for _ in range(1000):
        x = int(rng.integers(0, 64))
        y = int(rng.integers(0, 64))
        w = int(rng.integers(0, 64 - x + 1))
        h = int(rng.integers(0, 64 - y + 1))
        assert rect_sum(ii, x, y, w, h) == naive_rect_sum(pixels, x, y, w, h)


@pytest.mark.parametrize("rect", [(-1, 0, 2, 2), (0, -1, 2, 2), (3, 0, 2, 2), (0, 3, 1, 2)])
def test_out_of_bounds_rect_rejected(rect):
    ii = integral_image(np.zeros((4, 4), np.uint8))
    with pytest.raises(ValueError):
        rect_sum(ii, *rect)
