"""Model containers: mixing measures, canonical pairs, triplets and Levy specs.

A model is the pair (b, mu) of an independence weight b in [0, 1] and a
finitely supported mixing measure mu over unit-mean families; it determines
the stable tail dependence function

    l(t) = b * sum_k t_k + (1 - b) * sum_i w_i * l_{F_i}(t).

The triplet (b, c, mu) drops the normalization b + c = 1 and instead
describes an arbitrary non-decreasing additive path process; a Levy spec
(drift, finite-atom jump measure) is an alternative parametrization whose
mixture equivalent consists of two-point families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .families import Dirac1, TwoPoint, UnitMeanCdf

__all__ = ["MixingMeasure", "CanonicalModel", "IdtTriplet", "LevySpec"]

_WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class MixingMeasure:
    """Finitely supported probability measure on the unit-mean families."""

    components: tuple[tuple[float, UnitMeanCdf], ...]

    def __init__(self, components: Sequence[tuple[float, UnitMeanCdf]]):
        components = tuple((float(w), F) for w, F in components)
        if not components:
            raise ValueError("mixing measure needs at least one component")
        for w, F in components:
            if not (w > 0.0 and math.isfinite(w)):
                raise ValueError(f"component weight must be positive, got {w}")
            if not isinstance(F, UnitMeanCdf):
                raise ValueError(f"component cdf must be unit-mean, got {F!r}")
        total = math.fsum(w for w, _ in components)
        if abs(total - 1.0) > _WEIGHT_TOL:
            raise ValueError(f"weights sum to {total!r}, expected 1 within {_WEIGHT_TOL}")
        object.__setattr__(self, "components", components)

    @classmethod
    def point(cls, F: UnitMeanCdf) -> "MixingMeasure":
        """Degenerate measure concentrated on a single family."""
        return cls([(1.0, F)])

    def __iter__(self):
        return iter(self.components)


@dataclass(frozen=True)
class CanonicalModel:
    """The canonical pair (b, mu); mu may be omitted only in the pure independence case b = 1."""

    b: float
    mu: MixingMeasure | None = None

    def __post_init__(self):
        b = float(self.b)
        if not 0.0 <= b <= 1.0:
            raise ValueError(f"b must lie in [0, 1], got {b}")
        if self.mu is None and b != 1.0:
            raise ValueError("mu is required when b < 1")
        if self.mu is not None and not isinstance(self.mu, MixingMeasure):
            raise ValueError("mu must be a MixingMeasure")
        object.__setattr__(self, "b", b)

    def to_triplet(self) -> "IdtTriplet":
        return IdtTriplet(self.b, 1.0 - self.b, self.mu)


@dataclass(frozen=True)
class IdtTriplet:
    """Triplet (b, c, mu): drift b >= 0, intensity c > 0, mixing measure mu.

    c = 0 (with mu omitted) is admitted as the degenerate pure-drift path.
    When b + c = 1 the triplet is the canonical pair in disguise.
    """

    b: float
    c: float
    mu: MixingMeasure | None = None

    def __post_init__(self):
        b, c = float(self.b), float(self.c)
        if not (b >= 0.0 and math.isfinite(b)):
            raise ValueError(f"drift b must be finite and >= 0, got {b}")
        if not (c >= 0.0 and math.isfinite(c)):
            raise ValueError(f"intensity c must be finite and >= 0, got {c}")
        if c > 0.0 and self.mu is None:
            raise ValueError("mu is required when c > 0")
        if self.mu is not None and not isinstance(self.mu, MixingMeasure):
            raise ValueError("mu must be a MixingMeasure")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    def is_normalized(self, tol: float = 1e-12) -> bool:
        return abs(self.b + self.c - 1.0) <= tol

    def to_canonical(self) -> CanonicalModel:
        if not self.is_normalized():
            raise ValueError(
                f"triplet with b + c = {self.b + self.c!r} is not normalized to 1"
            )
        return CanonicalModel(self.b, self.mu if self.c > 0.0 else None)


@dataclass(frozen=True)
class LevySpec:
    """Drift plus finite-atom jump measure of a non-decreasing additive process.

    ``atoms`` lists (jump size, rate) pairs; a jump size of +inf is allowed
    and corresponds to a killing atom (its mixture image is the point mass
    at one).
    """

    drift: float
    atoms: tuple[tuple[float, float], ...] = ()

    def __init__(self, drift: float, atoms: Sequence[tuple[float, float]] = ()):
        drift = float(drift)
        atoms = tuple((float(t), float(r)) for t, r in atoms)
        if not (drift >= 0.0 and math.isfinite(drift)):
            raise ValueError(f"drift must be finite and >= 0, got {drift}")
        for theta, rate in atoms:
            if not theta > 0.0:
                raise ValueError(f"jump size must be positive, got {theta}")
            if not (rate > 0.0 and math.isfinite(rate)):
                raise ValueError(f"jump rate must be positive and finite, got {rate}")
        if not atoms and drift == 0.0:
            raise ValueError("spec needs a positive drift or at least one atom")
        object.__setattr__(self, "drift", drift)
        object.__setattr__(self, "atoms", atoms)

    def jump_intensity(self) -> float:
        """c = sum_i rate_i * (1 - e^(-theta_i)), the total mixture intensity."""
        return math.fsum(-rate * math.expm1(-theta) for theta, rate in self.atoms)

    def to_triplet(self) -> IdtTriplet:
        """Equivalent (drift, intensity, two-point mixture) triplet."""
        c = self.jump_intensity()
        if c == 0.0:
            return IdtTriplet(self.drift, 0.0, None)
        components = []
        for theta, rate in self.atoms:
            weight = -rate * math.expm1(-theta) / c
            F = Dirac1() if math.isinf(theta) else TwoPoint(theta)
            components.append((weight, F))
        return IdtTriplet(self.drift, c, MixingMeasure(components))

    def to_canonical(self) -> CanonicalModel:
        """Canonical pair; requires the normalization drift + intensity = 1."""
        return self.to_triplet().to_canonical()
