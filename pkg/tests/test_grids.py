import math

import numpy as np
import pytest

from autoconv import families
from autoconv.grids import (
    GridFunction,
    GridSpec,
    Spectrum,
    convolve,
    dft,
    from_csv,
    from_json,
    idft,
    integrate,
    moment,
    restrict,
    sample,
    to_csv,
    to_json,
)


def spec1(L=16.0, N=2**12):
    return GridSpec(dim=1, extent=L, points_per_axis=N)


@pytest.fixture(scope="module")
def gauss():
    return sample(spec1(), families.gaussian_density())


class TestGridSpec:
    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(dim=4, extent=1.0, points_per_axis=16),
            dict(dim=1, extent=0.0, points_per_axis=16),
            dict(dim=1, extent=1.0, points_per_axis=24),
            dict(dim=1, extent=1.0, points_per_axis=4),
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            GridSpec(**kwargs)

    def test_nodes_contain_origin(self):
        spec = spec1(N=64)
        nodes = spec.axis_nodes()
        assert nodes[32] == 0.0
        assert nodes[0] == -spec.extent
        assert spec.spacing * spec.points_per_axis == 2.0 * spec.extent

    def test_frequencies(self):
        spec = spec1(L=8.0, N=16)
        k = spec.axis_frequencies()
        assert k[8] == 0.0
        assert k[9] - k[8] == pytest.approx(1.0 / 16.0, rel=1e-15)


class TestSample:
    def test_zero(self):
        g = sample(spec1(), lambda x: np.zeros_like(x))
        assert not g.values.any()

    def test_poisson_value_at_origin(self):
        spec = GridSpec(dim=1, extent=64.0, points_per_axis=2**12)
        g = sample(spec, families.poisson(families.PoissonParams(a=0.5, t=1.0)))
        assert g.values[spec.points_per_axis // 2] == pytest.approx(
            1.0 / (2.0 * math.pi), rel=1e-12
        )

    def test_gaussian_mass(self, gauss):
        mass = integrate(gauss)
        assert 1.0 - 1e-6 <= mass <= 1.0 + 1e-12

    def test_nonfinite_rejected(self):
        with np.errstate(divide="ignore"):
            with pytest.raises(ValueError, match="node"):
                sample(spec1(), lambda x: 1.0 / x)

    def test_values_immutable(self, gauss):
        with pytest.raises(ValueError):
            gauss.values[0] = 1.0


class TestIntegrateAndMoment:
    def test_zero(self):
        assert integrate(sample(spec1(), lambda x: np.zeros_like(x))) == 0.0

    def test_poisson_windowed_mass(self):
        spec = GridSpec(dim=1, extent=100.0, points_per_axis=2**14)
        g = sample(spec, families.poisson(families.PoissonParams(a=0.5, t=1.0)))
        # Exact windowed integral of the kernel: (a/pi) 2 arctan(L/t).
        oracle = (0.5 / math.pi) * 2.0 * math.atan(100.0)
        assert integrate(g) == pytest.approx(oracle, abs=1e-6)
        assert integrate(g) == pytest.approx(0.5, rel=0.01)

    def test_indicator_mass(self):
        spec = spec1()
        g = sample(spec, lambda x: np.where(np.abs(x) <= 1.0, 0.125, 0.0))
        assert integrate(g) == pytest.approx(0.25, abs=spec.spacing)

    def test_moment_order_zero_is_integrate(self, gauss):
        assert moment(gauss, 0.0) == pytest.approx(integrate(gauss), rel=1e-14)

    def test_indicator_first_moment(self):
        spec = spec1()
        g = sample(spec, lambda x: np.where(np.abs(x) <= 1.0, 0.5, 0.0))
        # integral of |x|/2 over [-1, 1] is 1/2
        assert moment(g, 1.0) == pytest.approx(0.5, abs=spec.spacing)

    def test_poisson_moment_increment_log_law(self):
        kernel = families.poisson(families.PoissonParams(a=0.5, t=1.0))
        inner = sample(GridSpec(dim=1, extent=200.0, points_per_axis=2**14), kernel)
        outer = sample(GridSpec(dim=1, extent=400.0, points_per_axis=2**15), kernel)
        increment = moment(outer, 1.0) - moment(inner, 1.0)
        assert increment == pytest.approx(math.log(2.0) / math.pi, rel=0.01)

    def test_negative_order_rejected(self, gauss):
        with pytest.raises(ValueError):
            moment(gauss, -1.0)


class TestConvolve:
    def test_spec_mismatch(self, gauss):
        other = sample(spec1(N=2**11), families.gaussian_density())
        with pytest.raises(ValueError):
            convolve(gauss, other)

    def test_gaussian_semigroup(self, gauss):
        got = convolve(gauss, gauss)
        target = sample(gauss.spec, families.gaussian_density(sigma=math.sqrt(2.0)))
        assert np.abs(got.values - target.values).max() <= 1e-6

    def test_delta_identity(self, gauss):
        spec = gauss.spec
        column = np.zeros(spec.shape)
        column[spec.points_per_axis // 2] = 1.0 / spec.spacing
        delta = GridFunction(spec=spec, values=column)
        got = convolve(delta, gauss)
        assert np.abs(got.values - gauss.values).max() <= 1e-6

    def test_poisson_semigroup(self):
        spec = GridSpec(dim=1, extent=100.0, points_per_axis=2**14)
        f = sample(spec, families.poisson(families.PoissonParams(a=0.5, t=1.0)))
        target = sample(spec, families.poisson(families.PoissonParams(a=0.25, t=2.0)))
        got = convolve(f, f)
        sel = np.abs(spec.axis_nodes()) <= 50.0
        rel = np.abs(got.values[sel] - target.values[sel]) / target.values[sel]
        assert rel.max() <= 0.02

    def test_commutativity(self):
        spec = spec1(N=2**10)
        g1 = sample(spec, families.gaussian_density())
        g2 = sample(spec, lambda x: np.where(np.abs(x - 1.0) <= 0.5, 1.0, 0.0))
        a = convolve(g1, g2)
        b = convolve(g2, g1)
        assert np.abs(a.values - b.values).max() <= 1e-12

    def test_mass_multiplicativity(self):
        spec = spec1()
        g1 = sample(spec, families.gaussian_density())
        g2 = sample(spec, lambda x: 0.3 * np.exp(-((x - 2.0) ** 2)))
        product = integrate(g1) * integrate(g2)
        assert integrate(convolve(g1, g2)) == pytest.approx(product, rel=1e-6)

    def test_first_moments_add(self):
        spec = spec1(N=2**11)
        w = sample(spec, lambda x: np.exp(-((x - 1.0) ** 2) / 2.0))
        w = GridFunction(spec=spec, values=w.values / integrate(w))
        nodes = spec.axis_nodes()
        mean = float(np.sum(nodes * w.values)) * spec.spacing
        conv = convolve(w, w)
        mean2 = float(np.sum(nodes * conv.values)) * spec.spacing
        assert mean2 == pytest.approx(2.0 * mean, abs=1e-9)

    def test_two_dimensional_mass(self):
        spec = GridSpec(dim=2, extent=8.0, points_per_axis=64)
        g = sample(spec, families.gaussian_density())
        conv = convolve(g, g)
        assert integrate(conv) == pytest.approx(integrate(g) ** 2, rel=1e-6)

    def test_three_dimensional_gaussian_semigroup(self):
        spec = GridSpec(dim=3, extent=8.0, points_per_axis=32)
        g = sample(spec, families.gaussian_density())
        got = convolve(g, g)
        target = sample(spec, families.gaussian_density(sigma=math.sqrt(2.0)))
        assert integrate(g) == pytest.approx(1.0, abs=1e-6)
        assert np.abs(got.values - target.values).max() <= 1e-6


class TestTransforms:
    def test_gaussian_transform(self, gauss):
        spectrum = dft(gauss)
        k = gauss.spec.axis_frequencies()
        sel = np.abs(k) <= 2.0
        target = np.exp(-2.0 * math.pi**2 * k[sel] ** 2)
        assert np.abs(spectrum.values[sel] - target).max() <= 1e-8

    def test_zero_transform(self):
        g = sample(spec1(), lambda x: np.zeros_like(x))
        assert not dft(g).values.any()

    def test_poisson_transform(self):
        spec = GridSpec(dim=1, extent=100.0, points_per_axis=2**14)
        g = sample(spec, families.poisson(families.PoissonParams(a=0.5, t=1.0)))
        spectrum = dft(g)
        k = spec.axis_frequencies()
        sel = (np.abs(k) >= 0.25) & (np.abs(k) <= 2.0)
        target = 0.5 * np.exp(-2.0 * math.pi * np.abs(k[sel]))
        assert np.abs(spectrum.values[sel] - target).max() <= 1e-3

    def test_conjugate_symmetry(self, gauss):
        vals = dft(gauss).values
        n = gauss.spec.points_per_axis
        m = np.arange(1, n // 2)
        mirrored = vals[n // 2 - m]
        direct = vals[n // 2 + m]
        scale = np.abs(vals).max()
        assert np.abs(mirrored - np.conj(direct)).max() <= 1e-10 * scale

    def test_round_trip(self, gauss):
        back = idft(dft(gauss))
        scale = np.abs(gauss.values).max()
        assert np.abs(back.values - gauss.values).max() <= 1e-10 * scale

    def test_parseval(self, gauss):
        spec = gauss.spec
        lhs = spec.cell_volume * float(np.sum(gauss.values**2))
        rhs = float(np.sum(np.abs(dft(gauss).values) ** 2)) / (2.0 * spec.extent)
        assert lhs == pytest.approx(rhs, rel=1e-9)

    def test_idft_rejects_asymmetric_spectrum(self):
        spec = spec1(N=16)
        values = np.zeros(16, dtype=complex)
        values[9] = 1.0  # lone positive-frequency spike
        with pytest.raises(ValueError, match="allow_complex"):
            idft(Spectrum(spec=spec, values=values))
        out = idft(Spectrum(spec=spec, values=values), allow_complex=True)
        assert np.iscomplexobj(out)


class TestRestrict:
    def test_central_window(self):
        spec = spec1(L=32.0, N=2**10)
        g = sample(spec, families.gaussian_density())
        small = restrict(g, 8.0)
        assert small.spec.extent == 8.0
        assert small.spec.points_per_axis == 2**8
        inner = sample(small.spec, families.gaussian_density())
        np.testing.assert_array_equal(small.values, inner.values)

    def test_bad_extent(self):
        g = sample(spec1(), families.gaussian_density())
        with pytest.raises(ValueError):
            restrict(g, 5.0)


class TestSerialization:
    def test_csv_round_trip(self, tmp_path, gauss):
        path = tmp_path / "g.csv"
        to_csv(gauss, path)
        back = from_csv(path)
        assert back.spec == gauss.spec
        np.testing.assert_array_equal(back.values, gauss.values)

    def test_json_round_trip(self, tmp_path, gauss):
        path = tmp_path / "g.json"
        to_json(gauss, path)
        back = from_json(path)
        assert back.spec == gauss.spec
        np.testing.assert_array_equal(back.values, gauss.values)

    def test_csv_round_trip_2d(self, tmp_path):
        spec = GridSpec(dim=2, extent=4.0, points_per_axis=16)
        g = sample(spec, families.gaussian_density())
        path = tmp_path / "g2.csv"
        to_csv(g, path)
        back = from_csv(path)
        assert back.spec == spec
        np.testing.assert_array_equal(back.values, g.values)

    def test_csv_round_trip_3d(self, tmp_path):
        spec = GridSpec(dim=3, extent=2.0, points_per_axis=8)
        g = sample(spec, families.gaussian_density())
        path = tmp_path / "g3.csv"
        to_csv(g, path)
        back = from_csv(path)
        assert back.spec == spec
        np.testing.assert_array_equal(back.values, g.values)
