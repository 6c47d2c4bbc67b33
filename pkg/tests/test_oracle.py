import math

import numpy as np
import pytest

from symmlab import AxisParam, Disk, cap_symmetrize, HalfDisk, Rect, Union, asymmetry, measure, polarize, rasterize, steiner
from symmlab import SteinerParam, Annulus, Difference, RasterSet
from symmlab.errors import StraddlingUnsupported, UnsupportedComposite
from symmlab.oracle import (
    closed_form_asymmetry_centered_disk,
    exact_asymmetry_disk,
    exact_cap_disk,
    exact_measure,
    exact_perimeter,
    exact_polarize_disk,
    steiner_1d_oracle,
)


class TestExactMeasure:
    def test_primitives(self):
        assert exact_measure(Disk((3, 1), 1)) == pytest.approx(math.pi)
        assert exact_measure(Annulus((0, 0), 0.5, 1)) == pytest.approx(0.75 * math.pi)
        assert exact_measure(HalfDisk(1, 1)) == pytest.approx(math.pi / 2)
        assert exact_measure(Rect((0, 0), (2, 0.5))) == 1.0

    def test_disjoint_union(self):
        u = Union((Disk((-1, 0), 0.4), Disk((1, 0), 0.3)))
        assert exact_measure(u) == pytest.approx(math.pi * (0.16 + 0.09))

    def test_overlapping_union_rejected(self):
        with pytest.raises(UnsupportedComposite):
            exact_measure(Union((Disk((0, 0), 1), Disk((0.5, 0), 1))))
        with pytest.raises(UnsupportedComposite):
            exact_measure(Difference(Disk((0, 0), 1), Disk((0, 0), 0.5)))


class TestAsymmetryQuadrature:
    def test_matches_closed_form(self):
        assert exact_asymmetry_disk((0, 0), 1) == pytest.approx(math.pi * (1 - math.log(2)), abs=1e-6)
        for r in (0.3, 1.7):
            assert exact_asymmetry_disk((0, 0), r) == pytest.approx(closed_form_asymmetry_centered_disk(r), abs=1e-6)

    def test_small_radius_limit(self):
        assert exact_asymmetry_disk((0, 0), 1e-3) < 1e-9

    def test_off_center_larger(self):
        assert exact_asymmetry_disk((1, 0), 1) > exact_asymmetry_disk((0, 0), 1)


class TestPolarizeDisk:
    e1 = AxisParam(0.0, 0.0, "polar")

    def test_inside_unchanged(self):
        d = Disk((-2, 0), 0.5)
        assert exact_polarize_disk(d, self.e1) == d

    def test_reflected(self):
        out = exact_polarize_disk(Disk((2, 0), 0.5), self.e1)
        assert out.center == pytest.approx((-2, 0))
        assert out.radius == 0.5

    def test_straddling(self):
        with pytest.raises(StraddlingUnsupported):
            exact_polarize_disk(Disk((0, 0), 1), self.e1)


class TestExactCap:
    def test_concentric_disk_fixed(self):
        inside = exact_cap_disk(Disk((0.3, 0.4), 0.5), AxisParam(math.atan2(0.4, 0.3), 0.5, "cap"))
        assert inside(np.array([0.3, 0.75, 0.85]), np.array([0.4, 0.4, 0.4])).tolist() == [True, True, False]

    def test_arc_turns_toward_minus_e(self):
        inside = exact_cap_disk(Disk((0.5, 0), 0.2), AxisParam(0.0, 0.0, "cap"))
        assert inside(np.array([-0.5, 0.5, 0.0]), np.array([0.0, 0.0, 0.5])).tolist() == [True, False, False]

    def test_area_preserved(self, g256):
        d = Disk((0.4, -0.3), 0.45)
        m = exact_cap_disk(d, AxisParam(2.0, 0.3, "cap"))(g256.x, g256.y)
        assert abs(m.sum() * g256.cell_area - exact_measure(d)) <= 4 * g256.spacing * exact_perimeter(d)


class TestSteinerColumnOracle:
    def test_examples(self):
        assert steiner_1d_oracle([4], 8) == [(2, 6)]
        assert steiner_1d_oracle([0], 8) == [(4, 4)]
        assert steiner_1d_oracle([3], 8) == [(3, 6)]

    def test_random_profile_matches_raster(self, g64):
        import numpy as np

        rng = np.random.default_rng(7)
        n = g64.resolution
        img = np.zeros((n, n), dtype=bool)
        cols = rng.choice(np.arange(8, 56), size=16, replace=False)
        for i in cols:
            img[rng.random(n) < rng.random(), i] = True
        x = RasterSet(g64, img)
        out = steiner(x, SteinerParam(math.pi / 2)).image
        intervals = steiner_1d_oracle(img.sum(axis=0).tolist(), n)
        for i, (lo, hi) in enumerate(intervals):
            expect = np.zeros(n, dtype=bool)
            expect[lo:hi] = True
            assert np.array_equal(out[:, i], expect), i
        # theta = 0 works on rows
        out0 = steiner(x, SteinerParam(0.0)).image
        for j, (lo, hi) in enumerate(steiner_1d_oracle(img.sum(axis=1).tolist(), n)):
            expect = np.zeros(n, dtype=bool)
            expect[lo:hi] = True
            assert np.array_equal(out0[j, :], expect), j


class TestRasterAgainstOracle:
    @pytest.mark.parametrize("n", [256, 512])
    @pytest.mark.parametrize(
        "shape",
        [
            Disk((0.3, -0.2), 0.7),
            Rect((0, 0), (1, 1)),
            Annulus((0, 0), 0.5, 1),
            HalfDisk(1, 1),
            Union((Disk((-0.6, 0), 0.4), Disk((0.7, 0.3), 0.3))),
        ],
    )
    def test_measure_within_perimeter_band(self, n, shape):
        from symmlab import make_grid

        g = make_grid(2, n)
        err = abs(measure(rasterize(g, shape)) - exact_measure(shape))
        assert err <= 4 * g.spacing * exact_perimeter(shape)

    @pytest.mark.parametrize("center, r", [((0, 0), 1), ((1, 0), 1), ((-0.3, 0.4), 0.5)])
    def test_disk_asymmetry(self, g256, center, r):
        got = asymmetry(rasterize(g256, Disk(center, r)))
        assert abs(got - exact_asymmetry_disk(center, r)) <= 8 * g256.spacing

    @pytest.mark.parametrize(
        "disk, axis",
        [
            (Disk((2 - 0.5, 0), 0.4), AxisParam(0.0, 0.0, "polar")),
            (Disk((-1, 0.5), 0.4), AxisParam(0.0, 0.2, "polar")),
            (Disk((0.5, 1.2), 0.3), AxisParam(math.pi / 3, 0.1, "polar")),
            (Disk((-0.8, -0.8), 0.5), AxisParam(1.2, 0.0, "polar")),
        ],
    )
    def test_polarize_disk(self, g256, disk, axis):
        got = polarize(rasterize(g256, disk), axis)
        want = rasterize(g256, exact_polarize_disk(disk, axis))
        from symmlab import symm_diff_measure

        assert symm_diff_measure(got, want) <= 16 * g256.spacing

    @pytest.mark.parametrize(
        "disk, axis",
        [
            (Disk((0.5, 0.3), 0.4), AxisParam(0.7, 0.2, "cap")),
            (Disk((0.6, 0.1), 0.5), AxisParam(0.0, 0.0, "cap")),
            (Disk((0.2, 0.9), 0.3), AxisParam(4.0, 0.03, "cap")),
            (Disk((0.0, 0.0), 0.6), AxisParam(1.0, 0.8, "cap")),
        ],
    )
    def test_cap_disk(self, g256, disk, axis):
        from symmlab import symm_diff_measure

        got = cap_symmetrize(rasterize(g256, disk), axis)
        want = RasterSet(g256, exact_cap_disk(disk, axis)(g256.x, g256.y))
        assert symm_diff_measure(got, want) <= 16 * g256.spacing
