import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symmlab import (
    Annulus,
    Difference,
    Disk,
    HalfDisk,
    RasterSet,
    Rect,
    Union,
    asymmetry,
    load_pbm,
    make_grid,
    measure,
    rasterize,
    rearrange_star,
    save_pbm,
    symm_diff_measure,
)
from symmlab.errors import (
    DimensionMismatch,
    GridMismatch,
    IoFailure,
    MalformedHeader,
    MalformedShape,
    NonPositiveWindow,
    OddOrTinyResolution,
)
from symmlab.oracle import closed_form_asymmetry_centered_disk, exact_asymmetry_disk

# Frozen from the nested polar quadrature in symmlab.oracle.
J_OFFCENTER_UNIT_DISK = 1.6298211191620062


class TestGrid:
    @pytest.mark.parametrize("L, n, h", [(2, 16, 0.25), (2, 512, 0.0078125), (1, 16, 0.125)])
    def test_spacing(self, L, n, h):
        assert make_grid(L, n).spacing == h

    @pytest.mark.parametrize("L", [0, -1.0, float("nan")])
    def test_nonpositive_window(self, L):
        with pytest.raises(NonPositiveWindow):
            make_grid(L, 512)

    @pytest.mark.parametrize("n", [15, 17, 8, 0, 513])
    def test_bad_resolution(self, n):
        with pytest.raises(OddOrTinyResolution):
            make_grid(2, n)

    def test_cell_centers(self, g64):
        h = g64.spacing
        assert g64.spacing * g64.resolution == 2 * g64.half_width
        for i, j in [(0, 0), (5, 17), (63, 63)]:
            cx, cy = g64.center(i, j)
            assert cx == pytest.approx(-2 + (i + 0.5) * h, abs=1e-15)
            assert cy == pytest.approx(-2 + (j + 0.5) * h, abs=1e-15)
            k = g64.index(i, j)
            assert (g64.x[k], g64.y[k]) == (cx, cy)
        pts = set(zip(g64.x.tolist(), g64.y.tolist()))
        assert len(pts) == g64.size

    def test_centers_symmetric(self, g64):
        img_x = g64.x.reshape(64, 64)
        assert np.array_equal(img_x, -img_x[:, ::-1])


class TestRasterize:
    def test_disk_area(self, g512):
        assert abs(measure(rasterize(g512, Disk((0, 0), 1))) - math.pi) < 0.05

    def test_unit_square_exact(self, g512):
        s = rasterize(g512, Rect((0, 0), (1, 1)))
        assert s.popcount == 128 * 128
        assert measure(s) == 1.0

    def test_empty_union(self, g64):
        assert measure(rasterize(g64, Union(()))) == 0

    def test_difference_uses_strict_interior(self, g64):
        h = g64.spacing
        big = Rect((-1, -1), (1, 1))
        # subtrahend edge passes through a row of centers: those centers stay
        hole = Rect((-1, -h / 2), (1, 1))
        out = rasterize(g64, Difference(big, hole))
        assert out.popcount > 0
        assert np.all(g64.y[out.cells] <= -h / 2 + 1e-12)

    def test_annulus_is_disk_difference(self, g256):
        a = rasterize(g256, Annulus((0, 0), 0.5, 1.0))
        d = rasterize(g256, Disk((0, 0), 1.0)) - rasterize(g256, Disk((0, 0), 0.5))
        assert a == d

    def test_half_disks_partition_disk(self, g256):
        up, down = rasterize(g256, HalfDisk(1, 1)), rasterize(g256, HalfDisk(1, -1))
        assert (up & down).popcount == 0
        assert (up | down) == rasterize(g256, Disk((0, 0), 1))
        assert up.popcount == down.popcount

    @pytest.mark.parametrize(
        "bad",
        [
            lambda: Disk((0, 0), 0),
            lambda: Disk((0, 0), -1),
            lambda: Rect((1, 0), (0, 1)),
            lambda: Annulus((0, 0), 1, 0.5),
            lambda: HalfDisk(1, 0),
            lambda: Union((1, 2)),
            lambda: Disk((0,), 1),
        ],
    )
    def test_malformed(self, bad):
        with pytest.raises(MalformedShape):
            bad()

    def test_deterministic(self, g256):
        assert rasterize(g256, Disk((0.1, 0.2), 0.7)) == rasterize(g256, Disk((0.1, 0.2), 0.7))


class TestMeasures:
    def test_empty_and_full(self, g64):
        assert measure(RasterSet.empty(g64)) == 0
        assert measure(RasterSet.full(g64)) == 16.0

    def test_symm_diff_examples(self, g512):
        a = rasterize(g512, Disk((0, 0), 1))
        assert symm_diff_measure(a, a) == 0
        assert symm_diff_measure(a, RasterSet.empty(g512)) == measure(a)
        b = rasterize(g512, Disk((0, 0), math.sqrt(2)))
        # pi (r2^2 - r1^2) = pi
        assert abs(symm_diff_measure(a, b) - math.pi) < 0.1

    def test_grid_mismatch(self, g64, g256):
        with pytest.raises(GridMismatch):
            symm_diff_measure(RasterSet.empty(g64), RasterSet.empty(g256))

    def test_raster_set_is_immutable(self, g64):
        s = RasterSet.empty(g64)
        with pytest.raises(ValueError):
            s.cells[0] = True
        with pytest.raises(AttributeError):
            s.grid = None


class TestStar:
    def test_idempotent_and_empty(self, g256):
        x = rasterize(g256, Rect((0, 0), (1, 1)))
        st_ = rearrange_star(x)
        assert rearrange_star(st_) == st_
        assert st_.popcount == x.popcount
        assert rearrange_star(RasterSet.empty(g256)).popcount == 0

    def test_translated_disk(self, g512):
        star = rearrange_star(rasterize(g512, Disk((1, 0), 1)))
        assert symm_diff_measure(star, rasterize(g512, Disk((0, 0), 1))) <= 16 * g512.spacing

    @pytest.mark.parametrize("r", [0.25, 0.5, 1.0])
    def test_centered_disk_is_its_own_star(self, g256, r):
        d = rasterize(g256, Disk((0, 0), r))
        assert rearrange_star(d) == d


class TestAsymmetry:
    def test_empty(self, g64):
        assert asymmetry(RasterSet.empty(g64)) == 0

    def test_unit_disk(self, g512):
        j = asymmetry(rasterize(g512, Disk((0, 0), 1)))
        assert abs(j - math.pi * (1 - math.log(2))) < 0.01

    def test_off_center_is_larger(self, g512):
        j0 = asymmetry(rasterize(g512, Disk((0, 0), 1)))
        j1 = asymmetry(rasterize(g512, Disk((1, 0), 1)))
        assert j1 > j0
        assert abs(j1 - J_OFFCENTER_UNIT_DISK) < 8 * g512.spacing

    def test_oracle_values_frozen(self):
        assert exact_asymmetry_disk((1, 0), 1) == pytest.approx(J_OFFCENTER_UNIT_DISK, abs=1e-9)
        assert closed_form_asymmetry_centered_disk(1) == pytest.approx(0.9640065632861909, abs=1e-12)

    def test_bounded_by_measure(self, g256, corpus):
        for s in corpus:
            x = rasterize(g256, s)
            assert 0 <= asymmetry(x) <= measure(x)


# Property tests on random bitmaps over a small grid

GRID = make_grid(1.0, 32)
bitmaps = st.integers(0, 2**32 - 1).map(
    lambda seed: RasterSet(GRID, np.random.default_rng(seed).random(GRID.size) < 0.3)
)


@settings(max_examples=60, deadline=None)
@given(bitmaps, bitmaps)
def test_symm_diff_identity(a, b):
    inter = (a & b).popcount
    assert (a ^ b).popcount == a.popcount + b.popcount - 2 * inter
    assert symm_diff_measure(a, b) == symm_diff_measure(b, a)
    assert (symm_diff_measure(a, b) == 0) == (a == b)


@settings(max_examples=60, deadline=None)
@given(bitmaps, bitmaps)
def test_star_properties(a, b):
    sa, sb = rearrange_star(a), rearrange_star(b)
    assert sa.popcount == a.popcount
    assert rearrange_star(sa) == sa
    assert symm_diff_measure(sa, sb) <= symm_diff_measure(a, b)
    assert asymmetry(sa) <= asymmetry(a)


@settings(max_examples=60, deadline=None)
@given(bitmaps, bitmaps)
def test_asymmetry_monotone_under_inclusion(a, b):
    assert asymmetry(a & b) <= asymmetry(a) <= asymmetry(a | b)


class TestPbm:
    def test_round_trip(self, tmp_path, g256):
        x = rasterize(g256, Union((HalfDisk(1, 1), Rect((0.2, -1.5), (0.4, -0.1)))))
        p = tmp_path / "x.pbm"
        save_pbm(x, p)
        assert load_pbm(g256, p) == x

    def test_orientation(self, tmp_path, g64):
        # only the top-left cell: i = 0, j = n - 1
        x = RasterSet.from_indices(g64, [g64.index(0, 63)])
        p = tmp_path / "corner.pbm"
        save_pbm(x, p)
        lines = p.read_text().splitlines()
        assert lines[0] == "P1"
        assert lines[1] == "64 64"
        assert lines[2].split()[0] == "1"
        assert sum(line.count("1") for line in lines[2:]) == 1

    def test_dimension_mismatch(self, tmp_path, g512):
        p = tmp_path / "small.pbm"
        save_pbm(RasterSet.empty(make_grid(2, 256)), p)
        with pytest.raises(DimensionMismatch):
            load_pbm(g512, p)

    def test_binary_pbm_rejected(self, tmp_path, g64):
        p = tmp_path / "bin.pbm"
        p.write_bytes(b"P4\n64 64\n" + bytes(64 * 8))
        with pytest.raises(MalformedHeader):
            load_pbm(g64, p)

    def test_comments_and_packed_digits(self, tmp_path):
        g = make_grid(1, 16)
        p = tmp_path / "c.pbm"
        rows = ["0" * 16] * 15 + ["1" + "0" * 15]
        p.write_text("P1\n# a comment\n16 16\n" + "\n".join(rows) + "\n")
        x = load_pbm(g, p)
        assert x.popcount == 1 and x.cells[g.index(0, 0)]

    def test_truncated_data(self, tmp_path, g64):
        p = tmp_path / "t.pbm"
        p.write_text("P1\n64 64\n0 1 0\n")
        with pytest.raises(MalformedHeader):
            load_pbm(g64, p)

    def test_io_failure(self, tmp_path, g64):
        with pytest.raises(IoFailure):
            load_pbm(g64, tmp_path / "missing.pbm")
        with pytest.raises(IoFailure):
            save_pbm(RasterSet.empty(g64), tmp_path / "no" / "such" / "dir.pbm")
