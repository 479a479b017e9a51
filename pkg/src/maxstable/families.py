"""Distribution functions of non-negative random variables with unit mean.

These families are the extremal building blocks of the library: every model
mixes them, every evaluator integrates against them and every sampler draws
from them.  Each family exposes the same surface:

* ``cdf(x, left=...)``  -- F(x), or the left limit F(x-) for atomic families,
* ``tail_integral(a)``  -- int_a^oo (1 - F(u)) du  (equals 1 at a = 0),
* ``power_tail_integral(a, z)`` -- int_a^oo (1 - F(u)^z) du,
* ``quantile(p)``       -- generalized inverse inf{x : F(x) >= p},
* ``sample(rng)``       -- inverse-transform sampling,
* ``sample_size_biased(rng)`` -- draw from t -> int_0^t s dF(s).

Closed forms are used wherever the family admits one; the generic fallbacks
go through adaptive Gauss-Kronrod quadrature and monotone bisection.  All
objects are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy import special

from ._quad import tail_quad

__all__ = [
    "Cdf",
    "UnitMeanCdf",
    "Dirac1",
    "Frechet",
    "TwoPoint",
    "UnitExponential",
    "Discrete",
    "Tilted",
    "Rescaled",
    "PointMass",
    "Exponential",
    "DiscreteCdf",
    "tilt",
    "rescale_to_unit_mean",
]

#: construction-time tolerance on the unit-mean constraint
UNIT_MEAN_TOL = 1e-9

_EULER_GAMMA = float(np.euler_gamma)


def _maybe_scalar(arr, scalar_in):
    if scalar_in:
        return float(arr)
    return arr


class Cdf:
    """Distribution function of a non-negative random variable with finite positive mean."""

    def cdf(self, x, left: bool = False):
        """Evaluate F(x); with ``left=True`` the left limit F(x-) instead."""
        raise NotImplementedError

    def log_cdf(self, x, left: bool = False):
        """log F(x), full relative precision where F is close to one."""
        with np.errstate(divide="ignore"):
            return np.log(self.cdf(x, left=left))

    def quantile(self, p):
        """Generalized inverse inf{x : F(x) >= p}; p = 0 maps to the support infimum."""
        raise NotImplementedError

    def tail_integral(self, a):
        """int_a^oo (1 - F(u)) du.  Vectorized over ``a``."""
        a_arr = np.asarray(a, dtype=float)
        if a_arr.ndim == 0:
            return self.power_tail_integral(float(a_arr), 1.0)
        out = np.array([self.power_tail_integral(v, 1.0) for v in a_arr.ravel()])
        return out.reshape(a_arr.shape)

    def power_tail_integral(self, a: float, z: float) -> float:
        """int_a^oo (1 - F(u)^z) du for z > 0 (quadrature fallback)."""
        upper = self.support_upper()
        if a >= upper:
            return 0.0

        def integrand(u: float) -> float:
            return -math.expm1(z * float(self.log_cdf(u)))

        atoms = self.atom_values()
        breaks = () if atoms is None else atoms[0]
        scale = upper if math.isfinite(upper) else float(self.quantile(0.99)) + 1.0
        return tail_quad(integrand, a, scale, upper=upper, breakpoints=breaks)

    def mean(self) -> float:
        return float(self.tail_integral(0.0))

    def support_lower(self) -> float:
        """inf{u : F(u) > 0}."""
        return 0.0

    def support_upper(self) -> float:
        """sup of the support; inf for unbounded families."""
        return math.inf

    def atom_values(self):
        """(values, weights) for purely atomic families, else None."""
        return None

    def sample(self, rng, size=None):
        """Inverse-transform sample(s) from F."""
        u = rng.random() if size is None else rng.random(size)
        return self.quantile(u)

    def sample_size_biased(self, rng, size=None):
        """Sample from the size-biased distribution t -> int_0^t s dF(s) / mean."""
        if size is None:
            return self._size_biased_inverse(1.0 - rng.random())
        u = 1.0 - rng.random(size)
        return np.array([self._size_biased_inverse(v) for v in np.ravel(u)]).reshape(
            np.shape(u)
        )

    # -- internals ------------------------------------------------------

    def _size_biased_cdf(self, t: float) -> float:
        # int_0^t s dF(s) / mean == (mean - tail(t) - t (1 - F(t))) / mean
        m = self.mean()
        return (m - float(self.tail_integral(t)) - t * (1.0 - float(self.cdf(t)))) / m

    def _size_biased_inverse(self, u: float) -> float:
        hi = max(float(self.quantile(0.9)), 1.0)
        upper = self.support_upper()
        for _ in range(200):
            if self._size_biased_cdf(hi) >= u or hi >= upper:
                break
            hi *= 2.0
        hi = min(hi, upper)
        lo = 0.0
        for _ in range(120):
            mid = 0.5 * (lo + hi)
            if self._size_biased_cdf(mid) >= u:
                hi = mid
            else:
                lo = mid
        return hi

    def _key(self):
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Cdf) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        kind, *params = self._key()
        inner = ", ".join(repr(p) for p in params)
        return f"{type(self).__name__}({inner})"


class UnitMeanCdf(Cdf):
    """Marker base class for families whose mean is exactly one."""


class Dirac1(UnitMeanCdf):
    """Point mass at 1: the comonotone atom."""

    def cdf(self, x, left: bool = False):
        x_arr = np.asarray(x, dtype=float)
        out = (x_arr > 1.0) if left else (x_arr >= 1.0)
        return _maybe_scalar(out.astype(float), x_arr.ndim == 0)

    def quantile(self, p):
        p_arr = np.asarray(p, dtype=float)
        return _maybe_scalar(np.ones_like(p_arr), p_arr.ndim == 0)

    def tail_integral(self, a):
        a_arr = np.asarray(a, dtype=float)
        out = np.clip(1.0 - a_arr, 0.0, None)
        return _maybe_scalar(out, a_arr.ndim == 0)

    def power_tail_integral(self, a: float, z: float) -> float:
        return max(0.0, 1.0 - a)

    def support_lower(self) -> float:
        return 1.0

    def support_upper(self) -> float:
        return 1.0

    def atom_values(self):
        return np.array([1.0]), np.array([1.0])

    def sample_size_biased(self, rng, size=None):
        return 1.0 if size is None else np.ones(size)

    def _key(self):
        return ("dirac1",)


class Frechet(UnitMeanCdf):
    """F(x) = exp(-c x^(-1/alpha)) with c = Gamma(1-alpha)^(-1/alpha), alpha in (0, 1).

    The unique scaling of the heavy-tailed Frechet law with unit mean; its
    stable tail dependence function is the logistic model (Sigma t^(1/alpha))^alpha.
    """

    def __init__(self, alpha: float):
        alpha = float(alpha)
        if not 0.0 < alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
        self.alpha = alpha
        self.c = float(special.gamma(1.0 - alpha) ** (-1.0 / alpha))

    def cdf(self, x, left: bool = False):
        x_arr = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            out = np.exp(-self.c * x_arr ** (-1.0 / self.alpha))
        return _maybe_scalar(out, x_arr.ndim == 0)

    def log_cdf(self, x, left: bool = False):
        x_arr = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            out = -self.c * x_arr ** (-1.0 / self.alpha)
        return _maybe_scalar(out, x_arr.ndim == 0)

    def quantile(self, p):
        p_arr = np.asarray(p, dtype=float)
        with np.errstate(divide="ignore"):
            out = np.where(
                p_arr <= 0.0, 0.0, (self.c / -np.log(p_arr)) ** self.alpha
            )
        return _maybe_scalar(out, p_arr.ndim == 0)

    def tail_integral(self, a):
        a_arr = np.asarray(a, dtype=float)
        out = _frechet_tail(self.c, self.alpha, a_arr)
        return _maybe_scalar(out, a_arr.ndim == 0)

    def power_tail_integral(self, a: float, z: float) -> float:
        # F^z is the same Frechet shape with constant z*c
        return float(_frechet_tail(z * self.c, self.alpha, np.asarray(a, dtype=float)))

    def sample_size_biased(self, rng, size=None):
        # size-biased cdf is gammaincc(1-alpha, c t^(-1/alpha)); invert exactly
        u = rng.random() if size is None else rng.random(size)
        u = np.maximum(u, np.ldexp(1.0, -53))
        v = special.gammainccinv(1.0 - self.alpha, u)
        out = (self.c / v) ** self.alpha
        return float(out) if size is None else out

    def _key(self):
        return ("frechet", self.alpha)


def _frechet_tail(c: float, alpha: float, a):
    """int_a^oo (1 - exp(-c u^(-1/alpha))) du via incomplete gamma."""
    with np.errstate(divide="ignore"):
        v = c * a ** (-1.0 / alpha)
    lower = special.gammainc(1.0 - alpha, v) * special.gamma(1.0 - alpha)
    with np.errstate(invalid="ignore", divide="ignore"):
        corr = v ** (-alpha) * -np.expm1(-v)
    # v = inf (a = 0) and v = 0 (a = inf) both contribute no correction
    corr = np.where(np.isfinite(corr), corr, 0.0)
    return c**alpha * (lower - corr)


class TwoPoint(UnitMeanCdf):
    """Mass e^(-theta) at 0 and mass 1 - e^(-theta) at q = 1/(1 - e^(-theta)).

    The jump distribution of a compound Poisson subordinator with constant
    jump size theta, normalized to unit mean.
    """

    def __init__(self, theta: float):
        theta = float(theta)
        if not (theta > 0.0 and math.isfinite(theta)):
            raise ValueError(f"theta must be positive and finite, got {theta}")
        self.theta = theta
        self.p0 = math.exp(-theta)
        self.q = 1.0 / -math.expm1(-theta)

    def cdf(self, x, left: bool = False):
        x_arr = np.asarray(x, dtype=float)
        if left:
            out = np.where(x_arr > self.q, 1.0, np.where(x_arr > 0.0, self.p0, 0.0))
        else:
            out = np.where(x_arr >= self.q, 1.0, self.p0)
        return _maybe_scalar(out, x_arr.ndim == 0)

    def quantile(self, p):
        p_arr = np.asarray(p, dtype=float)
        out = np.where(p_arr <= self.p0, 0.0, self.q)
        return _maybe_scalar(out, p_arr.ndim == 0)

    def tail_integral(self, a):
        a_arr = np.asarray(a, dtype=float)
        out = (1.0 - self.p0) * np.clip(self.q - a_arr, 0.0, None)
        return _maybe_scalar(out, a_arr.ndim == 0)

    def power_tail_integral(self, a: float, z: float) -> float:
        return -math.expm1(-z * self.theta) * max(0.0, self.q - a)

    def support_upper(self) -> float:
        return self.q

    def atom_values(self):
        return np.array([0.0, self.q]), np.array([self.p0, 1.0 - self.p0])

    def sample_size_biased(self, rng, size=None):
        # value-weighted masses kill the atom at zero: q * (1 - p0) == 1
        return self.q if size is None else np.full(size, self.q)

    def _key(self):
        return ("two_point", self.theta)


class UnitExponential(UnitMeanCdf):
    """F(x) = 1 - e^(-x)."""

    def cdf(self, x, left: bool = False):
        x_arr = np.asarray(x, dtype=float)
        return _maybe_scalar(-np.expm1(-x_arr), x_arr.ndim == 0)

    def log_cdf(self, x, left: bool = False):
        x_arr = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(
                x_arr > 0.5,
                np.log1p(-np.exp(-x_arr)),
                np.log(-np.expm1(-x_arr)),
            )
        return _maybe_scalar(out, x_arr.ndim == 0)

    def quantile(self, p):
        p_arr = np.asarray(p, dtype=float)
        with np.errstate(divide="ignore"):
            out = -np.log1p(-p_arr)
        return _maybe_scalar(out, p_arr.ndim == 0)

    def tail_integral(self, a):
        a_arr = np.asarray(a, dtype=float)
        return _maybe_scalar(np.exp(-a_arr), a_arr.ndim == 0)

    def power_tail_integral(self, a: float, z: float) -> float:
        if a <= 0.0:
            # int_0^oo (1 - (1-e^-v)^z) dv == digamma(z+1) + gamma
            return float(special.digamma(z + 1.0)) + _EULER_GAMMA
        w0 = math.exp(-a)
        if w0 <= 0.5:
            # int_0^w0 (1 - (1-w)^z) / w dw as an alternating binomial series
            total = 0.0
            term_w = w0
            for k in range(1, 200):
                term = (-1.0) ** (k + 1) * special.binom(z, k) * term_w / k
                total += term
                term_w *= w0
                if abs(term) < 1e-17:
                    break
            return total
        return super().power_tail_integral(a, z)

    def sample_size_biased(self, rng, size=None):
        out = rng.gamma(2.0, size=size)
        return float(out) if size is None else out

    def _key(self):
        return ("unit_exponential",)


class _DiscreteBase(Cdf):
    """Shared machinery for finitely supported distributions."""

    def __init__(self, atoms: Sequence[tuple[float, float]]):
        if len(atoms) == 0:
            raise ValueError("atoms must be non-empty")
        values = np.asarray([a[0] for a in atoms], dtype=float)
        weights = np.asarray([a[1] for a in atoms], dtype=float)
        if not np.all(np.isfinite(values)) or np.any(values < 0.0):
            raise ValueError("atom values must be finite and non-negative")
        if not np.all(np.isfinite(weights)) or np.any(weights <= 0.0):
            raise ValueError("atom weights must be finite and positive")
        order = np.argsort(values, kind="stable")
        values, weights = values[order], weights[order]
        # merge duplicate locations, then normalize the weights
        uniq, inverse = np.unique(values, return_inverse=True)
        merged = np.zeros_like(uniq)
        np.add.at(merged, inverse, weights)
        self.values = uniq
        self.weights = merged / merged.sum()
        self.cum = np.cumsum(self.weights)
        self.cum[-1] = 1.0

    def cdf(self, x, left: bool = False):
        x_arr = np.asarray(x, dtype=float)
        side = "left" if left else "right"
        idx = np.searchsorted(self.values, x_arr, side=side)
        padded = np.concatenate([[0.0], self.cum])
        return _maybe_scalar(padded[idx], x_arr.ndim == 0)

    def quantile(self, p):
        p_arr = np.asarray(p, dtype=float)
        idx = np.searchsorted(self.cum, p_arr, side="left")
        idx = np.minimum(idx, len(self.values) - 1)
        return _maybe_scalar(self.values[idx], p_arr.ndim == 0)

    def tail_integral(self, a):
        a_arr = np.asarray(a, dtype=float)
        gaps = np.clip(self.values - a_arr[..., None], 0.0, None)
        return _maybe_scalar(gaps @ self.weights, a_arr.ndim == 0)

    def power_tail_integral(self, a: float, z: float) -> float:
        lo = np.concatenate([[0.0], self.values[:-1]])
        hi = self.values
        levels = np.concatenate([[0.0], self.cum[:-1]])
        lengths = np.clip(hi - np.maximum(a, lo), 0.0, None)
        return float(lengths @ (1.0 - levels**z))

    def support_lower(self) -> float:
        return float(self.values[0])

    def support_upper(self) -> float:
        return float(self.values[-1])

    def atom_values(self):
        return self.values, self.weights

    def sample_size_biased(self, rng, size=None):
        probs = self.values * self.weights
        cum = np.cumsum(probs / probs.sum())
        u = rng.random() if size is None else rng.random(size)
        idx = np.minimum(np.searchsorted(cum, u, side="left"), len(cum) - 1)
        out = self.values[idx]
        return float(out) if size is None else out

    def _key(self):
        return (
            "discrete",
            tuple(self.values.tolist()),
            tuple(self.weights.tolist()),
        )

    def __repr__(self):
        atoms = list(zip(self.values.tolist(), self.weights.tolist()))
        return f"{type(self).__name__}({atoms!r})"


class DiscreteCdf(_DiscreteBase):
    """Finitely supported distribution with arbitrary (finite, positive) mean."""

    def __init__(self, atoms: Sequence[tuple[float, float]]):
        super().__init__(atoms)
        if float(self.values @ self.weights) <= 0.0:
            raise ValueError("distribution must have positive mean")


class Discrete(_DiscreteBase, UnitMeanCdf):
    """Finitely supported distribution constrained to unit mean.

    Weights are normalized; the mean is checked, not silently rescaled
    (use :func:`rescale_to_unit_mean` for intentional rescaling).
    """

    def __init__(self, atoms: Sequence[tuple[float, float]]):
        super().__init__(atoms)
        m = float(self.values @ self.weights)
        if abs(m - 1.0) > UNIT_MEAN_TOL:
            raise ValueError(f"atoms have mean {m!r}, expected 1 within {UNIT_MEAN_TOL}")


class Tilted(UnitMeanCdf):
    """The power-tilted family F_z(x) = F(x * psi)^z with psi = int_0^oo (1 - F^z).

    The normalizing constant makes F_z unit-mean for every z > 0.  Prefer the
    :func:`tilt` factory, which collapses to exact closed forms where they
    exist and only falls back to this generic wrapper.
    """

    def __init__(self, base: UnitMeanCdf, z: float):
        z = float(z)
        if not (z > 0.0 and math.isfinite(z)):
            raise ValueError(f"z must be positive and finite, got {z}")
        if not isinstance(base, UnitMeanCdf):
            raise ValueError("base must be a unit-mean family")
        self.base = base
        self.z = z
        self.psi = float(base.power_tail_integral(0.0, z))

    def cdf(self, x, left: bool = False):
        x_arr = np.asarray(x, dtype=float)
        out = np.asarray(self.base.cdf(x_arr * self.psi, left=left)) ** self.z
        return _maybe_scalar(out, x_arr.ndim == 0)

    def log_cdf(self, x, left: bool = False):
        x_arr = np.asarray(x, dtype=float)
        out = self.z * np.asarray(self.base.log_cdf(x_arr * self.psi, left=left))
        return _maybe_scalar(out, x_arr.ndim == 0)

    def quantile(self, p):
        p_arr = np.asarray(p, dtype=float)
        out = np.asarray(self.base.quantile(p_arr ** (1.0 / self.z))) / self.psi
        return _maybe_scalar(out, p_arr.ndim == 0)

    def tail_integral(self, a):
        a_arr = np.asarray(a, dtype=float)
        if a_arr.ndim == 0:
            return self.base.power_tail_integral(float(a_arr) * self.psi,
                                                 self.z) / self.psi
        flat = [
            self.base.power_tail_integral(v * self.psi, self.z) / self.psi
            for v in a_arr.ravel()
        ]
        return np.array(flat).reshape(a_arr.shape)

    def power_tail_integral(self, a: float, z: float) -> float:
        return self.base.power_tail_integral(a * self.psi, self.z * z) / self.psi

    def support_lower(self) -> float:
        return self.base.support_lower() / self.psi

    def support_upper(self) -> float:
        return self.base.support_upper() / self.psi

    def atom_values(self):
        base_atoms = self.base.atom_values()
        if base_atoms is None:
            return None
        values, _ = base_atoms
        cum = np.asarray(self.base.cdf(values)) ** self.z
        weights = np.diff(np.concatenate([[0.0], cum]))
        return values / self.psi, weights

    def _key(self):
        return ("tilted", self.base._key(), self.z)


class Rescaled(UnitMeanCdf):
    """F(t) = G(M t) for a finite-mean base G with mean M: time-rescaling to unit mean."""

    def __init__(self, base: Cdf):
        m = base.mean()
        if not (0.0 < m < math.inf):
            raise ValueError(f"base mean must be finite and positive, got {m!r}")
        self.base = base
        self.scale = m

    def cdf(self, x, left: bool = False):
        x_arr = np.asarray(x, dtype=float)
        out = np.asarray(self.base.cdf(x_arr * self.scale, left=left))
        return _maybe_scalar(out, x_arr.ndim == 0)

    def log_cdf(self, x, left: bool = False):
        x_arr = np.asarray(x, dtype=float)
        out = np.asarray(self.base.log_cdf(x_arr * self.scale, left=left))
        return _maybe_scalar(out, x_arr.ndim == 0)

    def quantile(self, p):
        p_arr = np.asarray(p, dtype=float)
        out = np.asarray(self.base.quantile(p_arr)) / self.scale
        return _maybe_scalar(out, p_arr.ndim == 0)

    def tail_integral(self, a):
        a_arr = np.asarray(a, dtype=float)
        out = np.asarray(self.base.tail_integral(a_arr * self.scale)) / self.scale
        return _maybe_scalar(out, a_arr.ndim == 0)

    def power_tail_integral(self, a: float, z: float) -> float:
        return self.base.power_tail_integral(a * self.scale, z) / self.scale

    def support_lower(self) -> float:
        return self.base.support_lower() / self.scale

    def support_upper(self) -> float:
        return self.base.support_upper() / self.scale

    def atom_values(self):
        base_atoms = self.base.atom_values()
        if base_atoms is None:
            return None
        values, weights = base_atoms
        return values / self.scale, weights

    def sample_size_biased(self, rng, size=None):
        return self.base.sample_size_biased(rng, size) / self.scale

    def _key(self):
        return ("rescaled", self.base._key())


class PointMass(Cdf):
    """Point mass at an arbitrary positive location (finite-mean descriptor)."""

    def __init__(self, location: float):
        location = float(location)
        if not (location > 0.0 and math.isfinite(location)):
            raise ValueError(f"location must be positive and finite, got {location}")
        self.location = location

    def cdf(self, x, left: bool = False):
        x_arr = np.asarray(x, dtype=float)
        out = (x_arr > self.location) if left else (x_arr >= self.location)
        return _maybe_scalar(out.astype(float), x_arr.ndim == 0)

    def quantile(self, p):
        p_arr = np.asarray(p, dtype=float)
        return _maybe_scalar(np.full_like(p_arr, self.location), p_arr.ndim == 0)

    def tail_integral(self, a):
        a_arr = np.asarray(a, dtype=float)
        out = np.clip(self.location - a_arr, 0.0, None)
        return _maybe_scalar(out, a_arr.ndim == 0)

    def power_tail_integral(self, a: float, z: float) -> float:
        return max(0.0, self.location - a)

    def support_lower(self) -> float:
        return self.location

    def support_upper(self) -> float:
        return self.location

    def atom_values(self):
        return np.array([self.location]), np.array([1.0])

    def sample_size_biased(self, rng, size=None):
        return self.location if size is None else np.full(size, self.location)

    def _key(self):
        return ("point_mass", self.location)


class Exponential(Cdf):
    """Exponential distribution with arbitrary positive mean (finite-mean descriptor)."""

    def __init__(self, mean: float):
        mean = float(mean)
        if not (mean > 0.0 and math.isfinite(mean)):
            raise ValueError(f"mean must be positive and finite, got {mean}")
        self.mean_value = mean

    def cdf(self, x, left: bool = False):
        x_arr = np.asarray(x, dtype=float)
        return _maybe_scalar(-np.expm1(-x_arr / self.mean_value), x_arr.ndim == 0)

    def log_cdf(self, x, left: bool = False):
        x_arr = np.asarray(x, dtype=float)
        out = UnitExponential().log_cdf(x_arr / self.mean_value)
        return _maybe_scalar(np.asarray(out), x_arr.ndim == 0)

    def quantile(self, p):
        p_arr = np.asarray(p, dtype=float)
        with np.errstate(divide="ignore"):
            out = -self.mean_value * np.log1p(-p_arr)
        return _maybe_scalar(out, p_arr.ndim == 0)

    def tail_integral(self, a):
        a_arr = np.asarray(a, dtype=float)
        out = self.mean_value * np.exp(-a_arr / self.mean_value)
        return _maybe_scalar(out, a_arr.ndim == 0)

    def power_tail_integral(self, a: float, z: float) -> float:
        return self.mean_value * UnitExponential().power_tail_integral(
            a / self.mean_value, z
        )

    def sample_size_biased(self, rng, size=None):
        out = self.mean_value * rng.gamma(2.0, size=size)
        return float(out) if size is None else out

    def _key(self):
        return ("exponential", self.mean_value)


def tilt(F: UnitMeanCdf, z: float) -> UnitMeanCdf:
    """Return the power-tilted family F_z(x) = F(x psi)^z, again unit-mean.

    Exact closed forms: the point mass and the Frechet family are fixed
    points, a two-point family maps to TwoPoint(z * theta), and discrete
    families stay discrete.  Repeated tilts collapse multiplicatively.
    """
    z = float(z)
    if not (z > 0.0 and math.isfinite(z)):
        raise ValueError(f"z must be positive and finite, got {z}")
    if z == 1.0:
        return F
    if isinstance(F, (Dirac1, Frechet)):
        return F
    if isinstance(F, TwoPoint):
        return TwoPoint(z * F.theta)
    if isinstance(F, Discrete):
        psi = F.power_tail_integral(0.0, z)
        cum = F.cum**z
        weights = np.diff(np.concatenate([[0.0], cum]))
        return Discrete(list(zip((F.values / psi).tolist(), weights.tolist())))
    if isinstance(F, Tilted):
        return tilt(F.base, F.z * z)
    return Tilted(F, z)


def rescale_to_unit_mean(G: Cdf) -> UnitMeanCdf:
    """Map a finite-mean cdf G to F(t) = G(M_G t), which has unit mean.

    Recognizes bases with exact images: point masses become :class:`Dirac1`,
    exponentials become :class:`UnitExponential` and discrete laws stay
    discrete with rescaled atom locations.
    """
    if isinstance(G, UnitMeanCdf):
        return G
    if isinstance(G, PointMass):
        return Dirac1()
    if isinstance(G, Exponential):
        return UnitExponential()
    if isinstance(G, _DiscreteBase):
        m = float(G.values @ G.weights)
        if m <= 0.0:
            raise ValueError("base mean must be positive")
        return Discrete(list(zip((G.values / m).tolist(), G.weights.tolist())))
    return Rescaled(G)
