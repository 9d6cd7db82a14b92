import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spherekernel.measure import (
    Atom,
    MeasureSpec,
    Polynomial,
    SpecError,
    WeightSpec,
    counterexample_spec,
    herglotz_F,
    lebesgue,
    normalize,
    preset,
    schur_G,
    spec_from_json,
    spec_to_json,
    total_mass,
)


def test_total_mass_examples():
    assert total_mass(counterexample_spec()) == pytest.approx(1.0, abs=1e-15)
    assert total_mass(lebesgue(2)) == 1.0
    half = MeasureSpec(2, WeightSpec(0.5, Polynomial.constant(2)), (Atom((1.0, 0.0), 0.5),))
    assert total_mass(half) == pytest.approx(1.0, abs=1e-15)


def test_normalize_examples():
    s = normalize(MeasureSpec(2, WeightSpec(1.0, Polynomial.monomial((1, 0)))))
    assert s.weight.scale == pytest.approx(2.0, abs=1e-14)
    ce = counterexample_spec()
    assert normalize(ce).weight.scale == pytest.approx(ce.weight.scale, abs=1e-15)
    assert normalize(MeasureSpec(2, WeightSpec(4.0, Polynomial.constant(2)))).weight.scale == pytest.approx(1.0)


def test_normalize_zero_measure():
    with pytest.raises(SpecError):
        normalize(MeasureSpec(2, WeightSpec(0.0, Polynomial.constant(2))))


def test_non_square_exponent_mass_by_quadrature():
    # int |z1|^4 dsigma on C^2 is 2! 2! / 3! ... = 1/3
    s = MeasureSpec(2, WeightSpec(1.0, Polynomial.monomial((1, 0)), exponent=4.0))
    assert total_mass(s) == pytest.approx(1 / 3, abs=1e-12)
    assert total_mass(normalize(s)) == pytest.approx(1.0, abs=1e-12)


def test_atom_validation_and_reprojection():
    with pytest.raises(SpecError):
        Atom((1.0, 0.1), 1.0)
    with pytest.raises(SpecError):
        Atom((1.0, 0.0), 0.0)
    a = Atom((1.0 + 2e-13, 0.0), 1.0)
    assert abs(a.point[0]) == 1.0
    with pytest.raises(SpecError):
        MeasureSpec(2, WeightSpec(0.0, Polynomial.constant(2)), (Atom((1.0, 0.0), 0.5), Atom((1.0, 0.0), 0.5)))


def test_herglotz_examples():
    atoms = (Atom((1.0, 0.0), 0.25), Atom((0.0, 1j), 0.75))
    assert herglotz_F(atoms, (0, 0)) == pytest.approx(1.0)
    one = (Atom((1.0, 0.0), 1.0),)
    r = 0.999
    assert herglotz_F(one, (r, 0)) == pytest.approx((1 + r) / (1 - r))
    assert herglotz_F(one, (0, 0.5)) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        herglotz_F(one, (1.0, 0))


def test_schur_examples():
    one = (Atom((1.0, 0.0), 1.0),)
    assert schur_G(one, (0, 0)) == 0
    vals = [abs(1 - schur_G(one, (1 - 10.0**-k, 0))) for k in range(1, 8)]
    assert vals == sorted(vals, reverse=True) and vals[-1] < 1e-6


_points = st.tuples(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))


@settings(max_examples=1000, deadline=None)
@given(_points, st.floats(0.0, 0.999))
def test_herglotz_and_schur_bounds(raw, radius):
    v = np.array([raw[0] + 1j * raw[1], raw[2] + 1j * raw[3]])
    nv = np.linalg.norm(v)
    if nv < 1e-9:
        return
    z = radius * v / nv
    atoms = (Atom((1.0, 0.0), 0.3), Atom((np.exp(0.4j) / np.sqrt(2), 1j / np.sqrt(2)), 0.7))
    assert herglotz_F(atoms, z).real > -1e-14
    assert abs(schur_G(atoms, z)) <= np.linalg.norm(z) + 1e-12
    assert abs(schur_G(atoms, z)) < 1


def test_json_roundtrip(tmp_path):
    s = preset("atom-demo")
    data = spec_to_json(s)
    assert set(data) == {"d", "weight", "atoms"}
    assert spec_from_json(json.loads(json.dumps(data))) == s
    bad = {"d": 2, "weight": {"scale": 1, "g": [{"index": [1], "re": 1}]}}
    with pytest.raises(SpecError):
        spec_from_json(bad)


def test_presets_are_probability_measures():
    for name in ("lebesgue", "counterexample", "stable-demo", "circle-demo", "atom-demo", "shifted-disc"):
        assert total_mass(preset(name)) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(SpecError):
        preset("nope")


def test_polynomial_evaluation():
    g = Polynomial.from_dict(2, {(0, 0): 1, (1, 0): 0.3, (0, 1): -0.2})
    assert g((0.5, 0.5j)) == pytest.approx(1 + 0.15 - 0.1j)
    pts = np.array([[0, 0], [1, 0]], dtype=complex)
    assert np.allclose(g(pts), [1, 1.3])
