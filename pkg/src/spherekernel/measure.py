"""Measures s|g|^p dsigma + sum rho_k delta_{zeta_k} on the unit sphere of C^d."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

import numpy as np

from .multiindex import MultiIndex, as_index

SPHERE_TOL = 1e-12


class SpecError(ValueError):
    """A measure description is malformed or violates an invariant."""


@dataclass(frozen=True)
class Polynomial:
    """Polynomial sum_b c_b z^b in d complex variables, stored as sorted terms."""

    d: int
    terms: tuple[tuple[MultiIndex, complex], ...]

    @classmethod
    def from_dict(cls, d: int, coeffs: Mapping) -> "Polynomial":
        merged: dict[MultiIndex, complex] = {}
        for idx, c in coeffs.items():
            a = as_index(idx)
            if a.d != d:
                raise SpecError(f"term {a.to_list()} does not have {d} entries")
            merged[a] = merged.get(a, 0j) + complex(c)
        terms = tuple(sorted(((a, c) for a, c in merged.items() if c != 0)))
        return cls(d, terms)

    @classmethod
    def constant(cls, d: int, c: complex = 1.0) -> "Polynomial":
        return cls.from_dict(d, {(0,) * d: c})

    @classmethod
    def monomial(cls, a, c: complex = 1.0) -> "Polynomial":
        a = as_index(a)
        return cls.from_dict(a.d, {a: c})

    def coefficient(self, a) -> complex:
        a = as_index(a)
        for b, c in self.terms:
            if b == a:
                return c
        return 0j

    @property
    def degree(self) -> int:
        return max((a.length for a, _ in self.terms), default=0)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def scaled(self, factor: complex) -> "Polynomial":
        return Polynomial.from_dict(self.d, {a: c * factor for a, c in self.terms})

    def __call__(self, z) -> np.ndarray | complex:
        """Evaluate at one point (shape (d,)) or a stack of points (shape (..., d))."""
        z = np.asarray(z, dtype=complex)
        if z.shape[-1] != self.d:
            raise ValueError(f"expected points with {self.d} coordinates")
        out = np.zeros(z.shape[:-1], dtype=complex)
        for a, c in self.terms:
            term = np.full(z.shape[:-1], c, dtype=complex)
            for j, e in enumerate(a.entries):
                if e:
                    term = term * z[..., j] ** e
            out = out + term
        return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class Atom:
    """Point mass `mass` at a point of the unit sphere."""

    point: tuple[complex, ...]
    mass: float

    def __post_init__(self):
        p = np.asarray(self.point, dtype=complex).ravel()
        if p.size == 0:
            raise SpecError("atom point is empty")
        nrm2 = float(np.vdot(p, p).real)
        if abs(nrm2 - 1.0) > SPHERE_TOL:
            raise SpecError(f"atom point is off the sphere: |zeta|^2 = {nrm2!r}")
        if not self.mass > 0:
            raise SpecError(f"atom mass must be positive, got {self.mass!r}")
        # re-project so moment sums see an exact unit vector
        p = p / np.sqrt(nrm2)
        object.__setattr__(self, "point", tuple(complex(x) for x in p))
        object.__setattr__(self, "mass", float(self.mass))

    @property
    def d(self) -> int:
        return len(self.point)


@dataclass(frozen=True)
class WeightSpec:
    """w(zeta) = scale * |g(zeta)|^exponent."""

    scale: float
    g: Polynomial
    exponent: float = 2.0

    def __post_init__(self):
        if not self.scale >= 0:
            raise SpecError(f"scale must be nonnegative, got {self.scale!r}")
        if not self.exponent >= 1:
            raise SpecError(f"exponent must be at least 1, got {self.exponent!r}")
        object.__setattr__(self, "scale", float(self.scale))
        object.__setattr__(self, "exponent", float(self.exponent))

    def __call__(self, z) -> np.ndarray:
        return self.scale * np.abs(self.g(z)) ** self.exponent

    @property
    def is_zero(self) -> bool:
        return self.scale == 0 or not self.g.terms


@dataclass(frozen=True)
class MeasureSpec:
    d: int
    weight: WeightSpec
    atoms: tuple[Atom, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.d < 1:
            raise SpecError("dimension must be at least 1")
        if self.weight.g.d != self.d:
            raise SpecError("weight polynomial has the wrong number of variables")
        atoms = tuple(self.atoms)
        for a in atoms:
            if a.d != self.d:
                raise SpecError("atom point has the wrong number of coordinates")
        for k, a in enumerate(atoms):
            for b in atoms[:k]:
                if np.allclose(a.point, b.point, rtol=0, atol=1e-14):
                    raise SpecError("atoms must sit at distinct points")
        object.__setattr__(self, "atoms", atoms)

    @property
    def exact_moments(self) -> bool:
        """Closed-form moments need a squared modulus."""
        return self.weight.exponent == 2.0

    def without_atoms(self) -> "MeasureSpec":
        return replace(self, atoms=())

    def atoms_only(self) -> "MeasureSpec":
        return replace(self, weight=replace(self.weight, scale=0.0))


def total_mass(spec: MeasureSpec) -> float:
    """mu(sphere), from the exact moment engine when p = 2 and by quadrature otherwise."""
    from .moments import moment, quadrature_moment

    zero = MultiIndex.zero(spec.d)
    if spec.exact_moments:
        return float(moment(spec, zero, zero).real)
    return float(quadrature_moment(spec, zero, zero).real)


def normalize(spec: MeasureSpec) -> MeasureSpec:
    """Rescale to a probability measure."""
    m = total_mass(spec)
    if not m > 0:
        raise SpecError("cannot normalize the zero measure")
    if m == 1.0:
        return spec
    weight = replace(spec.weight, scale=spec.weight.scale / m)
    atoms = tuple(Atom(a.point, a.mass / m) for a in spec.atoms)
    return MeasureSpec(spec.d, weight, atoms)


def _check_interior(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex).ravel()
    if not float(np.vdot(z, z).real) < 1.0:
        raise ValueError("z must lie in the open unit ball")
    return z


def herglotz_F(atoms: Iterable[Atom], z) -> complex:
    """sum_k rho_k (1 + <z, zeta_k>) / (1 - <z, zeta_k>), with <z, zeta> = sum z_j conj(zeta_j)."""
    z = _check_interior(z)
    total = 0j
    for a in atoms:
        ip = complex(np.sum(z * np.conj(np.asarray(a.point))))
        total += a.mass * (1 + ip) / (1 - ip)
    return total


def schur_G(atoms: Iterable[Atom], z) -> complex:
    """Cayley transform G = (F - 1) / (F + 1), so that F = (1 + G) / (1 - G)."""
    F = herglotz_F(atoms, z)
    return (F - 1) / (F + 1)


# serialization


def polynomial_to_json(g: Polynomial) -> list[dict]:
    return [{"index": a.to_list(), "re": c.real, "im": c.imag} for a, c in g.terms]


def spec_to_json(spec: MeasureSpec) -> dict:
    return {
        "d": spec.d,
        "weight": {
            "scale": spec.weight.scale,
            "exponent": spec.weight.exponent,
            "g": polynomial_to_json(spec.weight.g),
        },
        "atoms": [
            {"point": [[x.real, x.imag] for x in a.point], "mass": a.mass} for a in spec.atoms
        ],
    }


def spec_from_json(data: Mapping) -> MeasureSpec:
    try:
        d = int(data["d"])
        w = data.get("weight", {"scale": 0.0, "g": []})
        coeffs: dict[tuple, complex] = {}
        for term in w.get("g", []):
            key = tuple(int(e) for e in term["index"])
            coeffs[key] = coeffs.get(key, 0j) + complex(float(term.get("re", 0.0)), float(term.get("im", 0.0)))
        g = Polynomial.from_dict(d, coeffs)
        weight = WeightSpec(float(w.get("scale", 1.0)), g, float(w.get("exponent", 2.0)))
        atoms = tuple(
            Atom(tuple(complex(float(re), float(im)) for re, im in a["point"]), float(a["mass"]))
            for a in data.get("atoms", [])
        )
    except SpecError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"malformed measure spec: {exc}") from exc
    return MeasureSpec(d, weight, atoms)


def load_spec(path) -> MeasureSpec:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecError(f"{path}: {exc}") from exc
    return spec_from_json(data)


# presets


def lebesgue(d: int = 2) -> MeasureSpec:
    return MeasureSpec(d, WeightSpec(1.0, Polynomial.constant(d)))


def counterexample_spec() -> MeasureSpec:
    """2|z1|^2 dsigma on the sphere of C^2."""
    return MeasureSpec(2, WeightSpec(2.0, Polynomial.monomial((1, 0))))


def stable_demo_spec() -> MeasureSpec:
    g = Polynomial.from_dict(2, {(0, 0): 1.0, (1, 0): 0.3, (0, 1): -0.2})
    return normalize(MeasureSpec(2, WeightSpec(1.0, g)))


def circle_demo_spec() -> MeasureSpec:
    """(4/5)|1 - z/2|^2 on the unit circle."""
    g = Polynomial.from_dict(1, {(0,): 1.0, (1,): -0.5})
    return MeasureSpec(1, WeightSpec(0.8, g))


def atom_demo_spec() -> MeasureSpec:
    """Half of sigma plus half a point mass at (1, 0)."""
    return MeasureSpec(2, WeightSpec(0.5, Polynomial.constant(2)), (Atom((1.0, 0.0), 0.5),))


def shifted_disc_spec() -> MeasureSpec:
    """|(2 + z1)/3|^2 dsigma rescaled to unit mass (scale becomes 2)."""
    g = Polynomial.from_dict(2, {(0, 0): 2.0 / 3.0, (1, 0): 1.0 / 3.0})
    return normalize(MeasureSpec(2, WeightSpec(1.0, g)))


PRESETS = {
    "lebesgue": lebesgue,
    "counterexample": counterexample_spec,
    "stable-demo": stable_demo_spec,
    "circle-demo": circle_demo_spec,
    "atom-demo": atom_demo_spec,
    "shifted-disc": shifted_disc_spec,
}


def preset(name: str) -> MeasureSpec:
    try:
        return PRESETS[name]()
    except KeyError:
        raise SpecError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
