import numpy as np
import pytest

from kinex.depairing import (
    DEFAULT_C_GAMMA_TABLE,
    CGammaTable,
    DepairingModel,
    c_from_gamma,
    gamma_from_c,
    idep_at_temperature,
    lk_ratio,
    small_signal_coefficient,
)
from kinex.errors import ConfigError, DepairingExceededError, DomainError, RangeError

from oracles import bisect_root, second_derivative_at_zero


def model(kind, c=0.3, i_dep0=30.0, t_c=10.0):
    return DepairingModel(kind=kind, c_coeff=c, i_dep0=i_dep0, t_c=t_c)


class TestLkRatio:
    def test_quadratic_direct(self):
        assert lk_ratio(model("quadratic", c=0.3), 0.5) == pytest.approx(1.075, abs=1e-12)

    def test_gl_endpoint_against_bisection(self):
        # oracle: root of q(1-q^2) = i * 2/(3 sqrt 3) at i = 1 by bisection;
        # the root is tangent there, limiting the oracle itself to ~1e-7
        drive = 2.0 / (3.0 * np.sqrt(3.0))
        q = bisect_root(lambda x: x * (1 - x * x) - drive, 0.0, 1.0 / np.sqrt(3.0) + 1e-7)
        assert q == pytest.approx(1.0 / np.sqrt(3.0), abs=1e-7)
        assert lk_ratio(model("gl_parametric"), 1.0) == pytest.approx(1.0 / (1.0 - q * q), rel=1e-6)
        assert lk_ratio(model("gl_parametric"), 1.0) == pytest.approx(1.5, rel=1e-9)

    def test_gl_interior_against_bisection(self):
        m = model("gl_parametric")
        for i in (0.2, 0.5, 0.85):
            drive = i * 2.0 / (3.0 * np.sqrt(3.0))
            q = bisect_root(lambda x: x * (1 - x * x) - drive, 0.0, 1.0 / np.sqrt(3.0))
            assert lk_ratio(m, i) == pytest.approx(1.0 / (1.0 - q * q), rel=1e-10)

    @pytest.mark.parametrize("kind", ["quadratic", "gl_parametric", "divergent"])
    def test_zero_bias_normalization(self, kind):
        assert lk_ratio(model(kind), 0.0) == 1.0

    @pytest.mark.parametrize("kind", ["quadratic", "gl_parametric", "divergent"])
    def test_strictly_increasing_and_at_least_one(self, kind):
        rng = np.random.default_rng(11)
        grid = np.sort(rng.uniform(0.0, 0.999, size=60))
        vals = lk_ratio(model(kind), grid)
        assert np.all(vals >= 1.0)
        assert np.all(np.diff(vals) > 0)

    def test_domain_errors(self):
        with pytest.raises(DepairingExceededError):
            lk_ratio(model("divergent"), 1.0)
        with pytest.raises(DepairingExceededError):
            lk_ratio(model("gl_parametric"), 1.0 + 1e-9)
        with pytest.raises(DomainError):
            lk_ratio(model("quadratic"), -0.1)
        # quadratic has no upper limit
        assert lk_ratio(model("quadratic"), 2.0) == pytest.approx(1.0 + 0.3 * 4.0)

    def test_gl_quadratic_regime(self):
        m = model("gl_parametric")
        for i in np.linspace(0.01, 0.3, 12):
            assert abs(lk_ratio(m, i) - (1.0 + 4.0 / 27.0 * i * i)) < 5e-3


class TestSmallSignalCoefficient:
    def test_quadratic_is_definition(self):
        assert small_signal_coefficient(model("quadratic", c=0.30)) == pytest.approx(0.30, rel=1e-9)

    def test_gl_series_value(self):
        # oracle: numeric differentiation of the closure
        numeric = second_derivative_at_zero(lambda i: lk_ratio(model("gl_parametric"), i))
        assert numeric == pytest.approx(4.0 / 27.0, abs=1e-6)
        assert small_signal_coefficient(model("gl_parametric")) == pytest.approx(4.0 / 27.0, abs=1e-4)

    def test_divergent_expansion(self):
        numeric = second_derivative_at_zero(lambda i: lk_ratio(model("divergent"), i))
        assert numeric == pytest.approx(1.0, abs=1e-5)
        assert small_signal_coefficient(model("divergent")) == pytest.approx(1.0, abs=1e-4)


class TestIdepAtTemperature:
    def test_zero_temperature(self):
        assert idep_at_temperature(model("quadratic"), 0.0) == 30.0

    def test_vanishes_at_tc(self):
        assert idep_at_temperature(model("quadratic"), 10.0 * (1 - 1e-9)) == pytest.approx(
            0.0, abs=1e-8
        )

    def test_half_tc_value(self):
        assert idep_at_temperature(model("quadratic"), 5.0) == pytest.approx(
            30.0 * 0.75**1.5, rel=1e-12
        )
        assert idep_at_temperature(model("quadratic"), 5.0) == pytest.approx(19.49, abs=5e-3)

    def test_strictly_decreasing(self):
        m = model("gl_parametric")
        ts = np.linspace(0.0, 9.9, 30)
        vals = [idep_at_temperature(m, t) for t in ts]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            idep_at_temperature(model("quadratic"), 10.0)
        with pytest.raises(DomainError):
            idep_at_temperature(model("quadratic"), -1.0)


class TestCGammaMap:
    def test_clean_limit_anchor(self):
        assert c_from_gamma(0.0) == 0.4
        assert gamma_from_c(0.4) == 0.0

    def test_midpoint_interpolation(self):
        # midway between (0.05, 0.30) and (0.20, 0.12)
        assert c_from_gamma(0.125) == pytest.approx(0.21, rel=1e-12)

    def test_clamped_at_ends(self):
        assert c_from_gamma(2.0) == 0.05

    def test_inverse_of_known_row(self):
        assert gamma_from_c(0.12) == pytest.approx(0.20, rel=1e-12)

    def test_inverse_by_bisection_oracle(self):
        g_oracle = bisect_root(lambda g: c_from_gamma(g) - 0.12, 0.0, 0.5)
        assert gamma_from_c(0.12) == pytest.approx(g_oracle, abs=1e-10)
        assert gamma_from_c(0.12) > 0.0

    def test_round_trip_identity(self):
        for c in (0.05, 0.12, 0.30, 0.35, 0.4):
            assert c_from_gamma(gamma_from_c(c)) == pytest.approx(c, abs=1e-12)
        for g in (0.0, 0.03, 0.1, 0.33, 0.5):
            assert gamma_from_c(c_from_gamma(g)) == pytest.approx(g, abs=1e-12)

    def test_out_of_range_rejected(self):
        with pytest.raises(RangeError):
            gamma_from_c(0.45)
        with pytest.raises(RangeError):
            gamma_from_c(0.01)

    def test_non_monotone_table_rejected(self):
        with pytest.raises(ConfigError):
            CGammaTable([(0.0, 0.4), (0.1, 0.41), (0.2, 0.1)])
        with pytest.raises(ConfigError):
            CGammaTable([(0.1, 0.4), (0.2, 0.3)])
        with pytest.raises(ConfigError):
            CGammaTable([(0.0, 0.4)])

    def test_default_table_span(self):
        assert DEFAULT_C_GAMMA_TABLE.c_range == (0.05, 0.4)


class TestModelValidation:
    def test_unknown_kind(self):
        with pytest.raises(ConfigError):
            DepairingModel(kind="cubic", c_coeff=0.3, i_dep0=30.0, t_c=10.0)

    def test_nonpositive_fields(self):
        with pytest.raises(DomainError):
            DepairingModel(kind="quadratic", c_coeff=0.0, i_dep0=30.0, t_c=10.0)
        with pytest.raises(DomainError):
            DepairingModel(kind="quadratic", c_coeff=0.3, i_dep0=-1.0, t_c=10.0)
