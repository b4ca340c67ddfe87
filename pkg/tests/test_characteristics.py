import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from laxo import flux, initial_data as idata
from laxo.characteristics import CharacteristicAnalyzer, F_l, phi_l
from laxo.errors import BracketError
from laxo.variational_core import Problem


@pytest.fixture(scope="module")
def sin_analyzer():
    return CharacteristicAnalyzer(Problem(flux.burgers(), idata.sin_wave()))


@pytest.fixture(scope="module")
def riemann_down_analyzer():
    return CharacteristicAnalyzer(Problem(flux.burgers(), idata.step(1.0, 0.0)))


def test_phi_l_examples():
    assert phi_l(idata.sin_wave(), np.pi, 0.0, 0.0) == pytest.approx(-2.0)
    assert phi_l(idata.sin_wave(), 0.0, 0.3, 0.7) == 0.0
    d = idata.step(1.0, 0.0)
    assert phi_l(d, -2.0, 0.0, 0.5) == pytest.approx(-1.0)   # int of (1-0.5)
    assert phi_l(d, 2.0, 0.0, 0.5) == pytest.approx(-1.0)


def test_F_l_burgers_closed_form():
    b = flux.burgers()
    for l, t in ((0.3, 2.0), (-0.7, 0.5), (1.1, 3.0)):
        assert F_l(b, l, t, 0.0) == pytest.approx(-l * l / (2 * t), abs=1e-12)
    assert F_l(b, 0.0, 1.0, 0.4) == 0.0


def test_F_l_quadrature_oracle():
    # independent check of the closed form against dense quadrature
    fl = flux.power2n(2)
    c, l, t = 0.3, -0.4, 1.7
    u = fl.invert_deriv(fl.deriv(c) - l / t)
    s = np.linspace(c, u, 200001)
    oracle = -t * np.trapezoid((s - c) * fl.second(s), s)
    assert F_l(fl, l, t, c) == pytest.approx(oracle, abs=1e-10)


def test_F_l_bracket_error():
    with pytest.raises(BracketError):
        F_l(flux.exponential(1.0), 10.0, 1e-3, 0.0)   # f' > 0 everywhere


def test_spectrum_pure_shock(riemann_down_analyzer):
    sp = riemann_down_analyzer.char_spectrum(0.0)
    assert sp.kind == "empty"
    assert (sp.a, sp.b) == (1.0, 0.0)
    assert riemann_down_analyzer.classify_initial_wave(0.0) == "S"


def test_spectrum_rarefaction():
    ca = CharacteristicAnalyzer(Problem(flux.burgers(), idata.step(-1.0, 1.0)))
    sp = ca.char_spectrum(0.0)
    assert sp.kind == "closed_interval"
    assert sp.includes_a and sp.includes_b
    assert (sp.a, sp.b) == (-1.0, 1.0)
    assert ca.classify_initial_wave(0.0) == "R"


def test_spectrum_singleton(sin_analyzer):
    sp = sin_analyzer.char_spectrum(0.0)
    assert sp.kind == "singleton"
    assert sp.a == pytest.approx(0.0) and sp.b == pytest.approx(0.0)
    assert sin_analyzer.classify_initial_wave(0.0) == "characteristic"


def test_spectrum_srs_with_root_data():
    # sqrt-steep decrease on both sides of an up-jump: gamma = 1/2 gives
    # gamma (1 + alpha) = 1/2 < 1 with C < 0, so both endpoints drop out
    d = idata.InitialData(
        [idata.Piece(-1.0, 0.0, "power",
                     {"a": -1.0, "g": 0.5, "x_ref": 0.0, "b": -1.0}),
         idata.Piece(0.0, 1.0, "power",
                     {"a": -1.0, "g": 0.5, "x_ref": 0.0, "b": 1.0})],
        left_tail=0.0, right_tail=0.0)
    ca = CharacteristicAnalyzer(Problem(flux.burgers(), d))
    sp = ca.char_spectrum(0.0)
    assert sp.kind == "open_interval"
    assert (sp.a, sp.b) == (-1.0, 1.0)
    assert ca.classify_initial_wave(0.0) == "S+R+S"


def test_spectrum_one_sided_exclusion():
    # down-steep only on the right of the up-jump -> R+S
    d = idata.InitialData(
        [idata.Piece(-1.0, 0.0, "const", {"c": -1.0}),
         idata.Piece(0.0, 1.0, "power",
                     {"a": -1.0, "g": 0.5, "x_ref": 0.0, "b": 1.0})],
        left_tail=-1.0, right_tail=0.0)
    ca = CharacteristicAnalyzer(Problem(flux.burgers(), d))
    sp = ca.char_spectrum(0.0)
    assert sp.kind == "half_open_right"
    assert sp.includes_a and not sp.includes_b
    assert ca.classify_initial_wave(0.0) == "R+S"


def test_linear_sides_keep_endpoints():
    # gamma = 1 with alpha = 0 sits exactly on the threshold
    # gamma(1+alpha) = 1, which keeps both endpoints
    d = idata.InitialData(
        [idata.Piece(-1.0, 0.0, "poly", {"coeffs": [-1.0, -1.0]}),
         idata.Piece(0.0, 1.0, "poly", {"coeffs": [1.0, -1.0]})],
        left_tail=0.0, right_tail=0.0)
    ca = CharacteristicAnalyzer(Problem(flux.burgers(), d))
    assert ca.char_spectrum(0.0).kind == "closed_interval"
    assert ca.classify_initial_wave(0.0) == "R"


def test_lifespan_upper(sin_analyzer):
    assert sin_analyzer.lifespan_upper(0.0, 0.0) == (1.0, 1.0)
    # phi' = -2 at the crest of -2 sin x scaled: use poly data
    d = idata.InitialData([idata.Piece(-1.0, 1.0, "poly", {"coeffs": [0.0, -2.0]})],
                          left_tail=2.0, right_tail=-2.0)
    ca = CharacteristicAnalyzer(Problem(flux.burgers(), d))
    assert ca.lifespan_upper(0.0, 0.0) == (0.5, 0.5)


def test_lifespan_upper_degenerate_flux():
    # f = u^4/4 with cube-root data: gamma (1+alpha) = 1, t_p = 1
    d = idata.InitialData(
        [idata.Piece(-1.0, 1.0, "power", {"a": -1.0, "g": 1.0 / 3.0, "x_ref": 0.0})],
        left_tail=1.0, right_tail=-1.0)
    ca = CharacteristicAnalyzer(Problem(flux.power2n(2), d))
    assert ca.lifespan_upper(0.0, 0.0) == (1.0, 1.0)


def test_lifespan_upper_infinite_sides(riemann_down_analyzer):
    # constant data on both sides of the queried characteristic
    assert riemann_down_analyzer.lifespan_upper(-1.0, 1.0) == (np.inf, np.inf)


def test_lifespan_exact_symmetric_compression(sin_analyzer):
    t = sin_analyzer.lifespan_exact(0.0, 0.0)
    assert t == pytest.approx(1.0, abs=1e-4)


def test_lifespan_exact_collision(riemann_down_analyzer):
    # x = -1 + t meets the shock x = t/2 at t = 2
    t = riemann_down_analyzer.lifespan_exact(-1.0, 1.0)
    assert t == pytest.approx(2.0, abs=1e-6)


def test_lifespan_exact_immortal():
    const = Problem(flux.burgers(),
                    idata.InitialData([], left_tail=0.5, right_tail=0.5,
                                      window=(0.0, 0.0)))
    ca = CharacteristicAnalyzer(const)
    assert ca.lifespan_exact(0.0, 0.5) == np.inf


def test_t_star_below_t_p(sin_analyzer):
    ls = sin_analyzer.lifespans(np.pi / 2, -1.0)
    assert ls.t_star <= ls.t_p + 1e-6


def test_classify_termination(sin_analyzer, riemann_down_analyzer):
    tc = sin_analyzer.classify_termination(0.0, 0.0)
    assert tc.kind == "continuous_shock_generation"
    assert tc.x_star == pytest.approx(0.0, abs=1e-9)
    assert tc.t_star == pytest.approx(1.0, abs=1e-4)

    tc = riemann_down_analyzer.classify_termination(-1.0, 1.0)
    assert tc.kind == "collision_with_shock"
    assert tc.x_star == pytest.approx(1.0, abs=1e-6)
    assert tc.t_star == pytest.approx(2.0, abs=1e-6)

    const = Problem(flux.burgers(),
                    idata.InitialData([], left_tail=0.5, right_tail=0.5,
                                      window=(0.0, 0.0)))
    assert CharacteristicAnalyzer(const).classify_termination(0.0, 0.5).kind \
        == "immortal"


def test_classify_termination_focusing_point():
    # phi = 1 - x on [0, 1]: every interior characteristic survives to the
    # focal point (1, 1) where the full interval [0, 1] maximizes
    d = idata.InitialData([idata.Piece(0.0, 1.0, "poly", {"coeffs": [1.0, -1.0]})],
                          left_tail=1.0, right_tail=0.0)
    ca = CharacteristicAnalyzer(Problem(flux.burgers(), d))
    tc = ca.classify_termination(0.5, 0.5)
    assert tc.kind == "discontinuous_or_shock_point"
    assert tc.x_star == pytest.approx(1.0, abs=1e-6)
    assert tc.t_star == pytest.approx(1.0, abs=1e-6)


@settings(max_examples=30, deadline=None)
@given(st.floats(-3.0, 3.0))
def test_interior_characteristic_carries_value(x0):
    # pre-breakdown the sine solution rides its characteristics
    ca = _SIN_CA
    c = ca.data.phi(x0)
    t = 0.5
    s = ca.problem.solve(x0 + t * c, t)
    assert s.u_plus == pytest.approx(c, abs=1e-7)


_SIN_CA = CharacteristicAnalyzer(Problem(flux.burgers(), idata.sin_wave()))


def test_spectrum_membership_sandwich():
    # reported set always sits between the open and closed Dini interval
    for d in (idata.step(-1.0, 1.0), idata.step(1.0, 0.0), idata.sin_wave()):
        ca = CharacteristicAnalyzer(Problem(flux.burgers(), d))
        sp = ca.char_spectrum(0.0)
        if sp.kind != "empty":
            assert sp.a <= sp.b
