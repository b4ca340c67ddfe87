import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from laxo import flux
from laxo.errors import BracketError, FitError


@pytest.fixture(scope="module")
def quartic():
    return flux.power2n(2)


def test_normalization_and_eval():
    for fl in (flux.burgers(), flux.power2n(2), flux.exponential(1.0)):
        assert fl.eval(0.0) == pytest.approx(0.0, abs=1e-15)
    assert flux.burgers().eval(2.0) == pytest.approx(2.0)
    assert flux.power2n(2).eval(1.0) == pytest.approx(0.25)
    assert flux.exponential(1.0).eval(1.0) == pytest.approx(np.e - 1.0)


def test_invert_deriv_examples(quartic):
    assert flux.burgers().invert_deriv(0.5, (-2, 2)) == pytest.approx(0.5, abs=1e-10)
    assert quartic.invert_deriv(1.0, (0, 2)) == pytest.approx(1.0, abs=1e-10)
    assert flux.exponential(1.0).invert_deriv(2.0) == pytest.approx(np.log(2.0), abs=1e-10)


def test_invert_deriv_bracket_error():
    with pytest.raises(BracketError):
        flux.exponential(1.0).invert_deriv(-0.5)  # e^u is never negative


def test_invert_deriv_vectorized(quartic):
    v = np.array([-1.0, 0.0, 0.125, 1.0])
    u = quartic.invert_deriv(v, (-2, 2))
    assert np.allclose(quartic.deriv(u), v, atol=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.floats(-8.0, 8.0))
def test_invert_roundtrip_burgers(v):
    fl = flux.burgers()
    assert fl.deriv(fl.invert_deriv(v)) == pytest.approx(v, abs=1e-10)


@settings(max_examples=100, deadline=None)
@given(st.floats(-3.0, 3.0))
def test_invert_roundtrip_quartic(v):
    fl = flux.power2n(2)
    u = fl.invert_deriv(v, (-2, 2))
    assert fl.deriv(u) == pytest.approx(v, abs=1e-9)


def test_rho_examples(quartic):
    b = flux.burgers()
    assert b.rho(1.0, 0.0) == pytest.approx(0.5, abs=1e-10)
    assert b.rho(0.3, 0.3) == 0.3
    # int_0^1 3 s^3 ds / int_0^1 3 s^2 ds = (3/4) / 1
    assert quartic.rho(1.0, 0.0) == pytest.approx(0.75, abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.floats(-2.0, 2.0), st.floats(-2.0, 2.0))
def test_rho_symmetry_and_bounds(u, v):
    fl = flux.power2n(2)
    if abs(u - v) < 1e-6:
        return
    r1, r2 = fl.rho(u, v), fl.rho(v, u)
    assert r1 == pytest.approx(r2, abs=1e-8)
    assert min(u, v) - 1e-9 <= r1 <= max(u, v) + 1e-9


def test_rho_closed_form_oracle(quartic):
    # exact identity: int_v^u s f'' ds = u f'(u) - v f'(v) - (f(u) - f(v))
    rng = np.random.default_rng(7)
    for fl in (flux.burgers(), quartic, flux.exponential(0.7)):
        for _ in range(20):
            u, v = rng.uniform(-1.5, 1.5, 2)
            if abs(u - v) < 1e-3:
                continue
            num = u * fl.deriv(u) - v * fl.deriv(v) - (fl.eval(u) - fl.eval(v))
            den = fl.deriv(u) - fl.deriv(v)
            assert fl.rho(u, v) == pytest.approx(num / den, abs=1e-8)


def test_fit_degeneracy_builtin(quartic):
    d = flux.burgers().fit_degeneracy(0.0)
    assert (d.alpha, d.N) == (0.0, 1.0)
    d = quartic.fit_degeneracy(0.0, "left")
    assert (d.alpha, d.N) == (2.0, 3.0)
    d = flux.exponential(1.0).fit_degeneracy(0.0)
    assert d.alpha == 0.0 and d.N == pytest.approx(1.0)
    d = quartic.fit_degeneracy(0.5)
    assert d.alpha == 0.0 and d.N == pytest.approx(3 * 0.25)


def test_fit_degeneracy_custom_numeric():
    fl = flux.custom(lambda u: np.abs(u) ** 4 / 4.0,
                     lambda u: np.sign(u) * np.abs(u) ** 3,
                     lambda u: 3.0 * np.abs(u) ** 2)
    d = fl.fit_degeneracy(0.0, "right")
    assert d.alpha == pytest.approx(2.0, rel=1e-3)
    assert d.N == pytest.approx(3.0, rel=1e-2)


def test_fit_degeneracy_flat_raises():
    fl = flux.custom(lambda u: np.zeros_like(np.asarray(u, dtype=float)),
                     lambda u: np.zeros_like(np.asarray(u, dtype=float)),
                     lambda u: np.zeros_like(np.asarray(u, dtype=float)))
    with pytest.raises(FitError):
        fl.fit_degeneracy(0.0, "right")


def test_rho_expansion_ratio(quartic):
    # (rho(u,c)-c)/(u-c) -> (1+alpha)/(2+alpha) as u->c
    for fl, alpha in ((flux.burgers(), 0.0), (quartic, 2.0)):
        target = (1 + alpha) / (2 + alpha)
        for du in (1e-2, 1e-3, 1e-4):
            got = (fl.rho(du, 0.0) - 0.0) / du
            assert got == pytest.approx(target, rel=0.05)


def test_deriv_expansion_consistency(quartic):
    # |f'(u)-f'(c)| ~ N/(1+alpha) |u-c|^{1+alpha}
    for fl in (flux.burgers(), quartic):
        d = fl.fit_degeneracy(0.0, "right")
        for du in (1e-2, 1e-3, 1e-4):
            pred = d.N / (1 + d.alpha) * du ** (1 + d.alpha)
            assert abs(fl.deriv(du) - fl.deriv(0.0)) == pytest.approx(pred, rel=0.05)


def test_second_nonnegative_and_deriv_monotone(quartic):
    u = np.linspace(-3, 3, 301)
    for fl in (flux.burgers(), quartic, flux.exponential(0.5)):
        assert np.all(fl.second(u) >= 0)
        assert np.all(np.diff(fl.deriv(u)) > 0)


def test_descriptor_roundtrip():
    for fl in (flux.burgers(), flux.power2n(3), flux.exponential(2.0)):
        d = flux.to_descriptor(fl)
        fl2 = flux.from_descriptor(d)
        assert fl2.kind == fl.kind
        assert fl2.eval(0.7) == pytest.approx(fl.eval(0.7))
