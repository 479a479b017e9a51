"""Samplers: min-stable sequences, simplex vectors, additive paths, first passage.

All samplers take an explicit numpy Generator and are deterministic given
its state.  The two Poisson-series constructions are truncated with
certified bounds:

* the triangular minimum construction stops once the expected number of
  future arrivals that could still lower any running coordinate minimum is
  below ``tol`` (by Markov's inequality this bounds the probability that a
  returned coordinate exceeds its untruncated value);
* the additive-path series stops once the expected omitted increment over
  the requested horizon is below ``tol``, using the envelope
  -log F(u-) <= 2 (1 - F(u-)) valid above the median; families with bounded
  support terminate exactly, and atoms below the support infimum pin the
  path to +oo from the corresponding time onward.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ResourceError
from .families import Frechet, UnitMeanCdf
from .models import CanonicalModel, IdtTriplet, MixingMeasure

__all__ = [
    "PickandsSample",
    "IdtPath",
    "sample_minstable",
    "sample_minstable_batch",
    "sample_pickands",
    "sample_pickands_batch",
    "sample_idt_path",
    "sample_conditional_iid",
    "sample_conditional_iid_batch",
]

#: hard cap on Poisson arrivals per sample / per path
MAX_ARRIVALS = 10**7
#: hard cap on first-passage bracket doublings
MAX_DOUBLINGS = 10**6
#: arrivals drawn per vectorized block in the batch minimum construction
_BLOCK = 16
_PICKANDS_MAX_RESAMPLES = 100
_BISECT_RTOL = 1e-10


@dataclass(frozen=True)
class PickandsSample:
    """A point of the unit simplex carrying the dependence of one d-margin."""

    coords: np.ndarray

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float)
        if coords.ndim != 1 or coords.size < 1:
            raise ValueError("coords must be a non-empty vector")
        if np.any(coords < 0.0) or abs(float(coords.sum()) - 1.0) > 1e-12:
            raise ValueError("coords must be non-negative and sum to 1")
        object.__setattr__(self, "coords", coords)


def _mixture_arrays(mu: MixingMeasure):
    weights = np.array([w for w, _ in mu], dtype=float)
    families = [F for _, F in mu]
    return weights, families


def _mixture_tail(weights, families, a):
    """Expected tail mass sum_i w_i int_a^oo (1 - F_i) du, vectorized over a."""
    total = weights[0] * np.asarray(families[0].tail_integral(a))
    for w, F in zip(weights[1:], families[1:]):
        total = total + w * np.asarray(F.tail_integral(a))
    return total


# ---------------------------------------------------------------------------
# minimum construction over a triangular Poisson array
# ---------------------------------------------------------------------------


def sample_minstable(model: CanonicalModel, d: int, rng, tol: float = 1e-3):
    """One realization of (Y_1, ..., Y_d) with survival exp(-l(t)).

    ``tol`` bounds the probability that any returned coordinate exceeds its
    value in the untruncated construction.
    """
    return sample_minstable_batch(model, d, 1, rng, tol)[0]


def sample_minstable_batch(model: CanonicalModel, d: int, n: int, rng,
                           tol: float = 1e-3) -> np.ndarray:
    """n independent realizations, shape (n, d).  See sample_minstable."""
    d, n = int(d), int(n)
    if d < 1:
        raise ValueError(f"d must be at least 1, got {d}")
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    if model.b == 1.0:
        return rng.exponential(size=(n, d))
    extremal = _extremal_minimum_batch(model.mu, d, n, rng, tol)
    if model.b == 0.0:
        return extremal
    independent = rng.exponential(size=(n, d))
    return np.minimum(independent / model.b, extremal / (1.0 - model.b))


def _extremal_minimum_batch(mu: MixingMeasure, d: int, n: int, rng,
                            tol: float) -> np.ndarray:
    weights, families = _mixture_arrays(mu)
    if len(families) == 1 and isinstance(families[0], Frechet):
        # the product prod_k F(u/m_k) is again a Frechet cdf, so the
        # arrivals that lower some minimum can be generated directly:
        # the construction becomes exact and needs no truncation
        return _extremal_minimum_frechet(families[0], d, n, rng)
    cum_weights = np.cumsum(weights)
    single = len(families) == 1

    gamma = np.zeros(n)
    minima = np.full((n, d), np.inf)
    active = np.arange(n)
    arrivals = 0

    while active.size:
        if arrivals > MAX_ARRIVALS:
            raise ResourceError(
                f"minimum construction exceeded {MAX_ARRIVALS} arrivals",
                achieved_bound=float(np.max(_minimum_stop_bound(
                    weights, families, gamma[active], minima[active]))),
            )
        na = active.size
        increments = rng.exponential(size=(na, _BLOCK))
        arrival_times = gamma[active, None] + np.cumsum(increments, axis=1)
        u = rng.random((na, _BLOCK, d))
        if single:
            x = np.asarray(families[0].quantile(u))
        else:
            comp = np.searchsorted(cum_weights, rng.random((na, _BLOCK)),
                                   side="left")
            x = np.empty((na, _BLOCK, d))
            for ci, F in enumerate(families):
                mask = comp == ci
                if np.any(mask):
                    x[mask] = F.quantile(u[mask])
        with np.errstate(divide="ignore"):
            candidate = (arrival_times[:, :, None] / x).min(axis=1)
        minima[active] = np.minimum(minima[active], candidate)
        gamma[active] = arrival_times[:, -1]
        arrivals += _BLOCK

        bound = _minimum_stop_bound(weights, families, gamma[active],
                                    minima[active])
        active = active[bound > tol]
    return minima


def _minimum_stop_bound(weights, families, gamma, minima):
    # expected number of future arrivals that can lower some coordinate:
    # sum_k sum_i w_i m_k tail_i(gamma / m_k)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = gamma[:, None] / minima
        terms = minima * _mixture_tail(weights, families, ratio)
        terms = np.where(np.isnan(terms), np.inf, terms)
    return terms.sum(axis=1)


def _extremal_minimum_frechet(F: Frechet, d: int, n: int, rng) -> np.ndarray:
    """Exact minimum construction for a pure Frechet mixture via thinning.

    Conditional on the running minima m, future arrivals lower a coordinate
    with rate 1 - prod_k F(u/m_k) = 1 - F(u/M), M = (sum_k m_k^(1/a))^a, in
    the arrival variable u.  The thinned event times are drawn by inverting
    the integrated rate; marks are drawn conditioned on at least one
    coordinate exceedance via the first-exceeding-coordinate decomposition.
    """
    inv_alpha = 1.0 / F.alpha

    # the first arrival updates every coordinate
    gamma = rng.exponential(size=n)
    x = np.asarray(F.quantile(rng.random((n, d))))
    with np.errstate(divide="ignore"):
        minima = gamma[:, None] / x

    active = np.arange(n)
    while active.size:
        m_act = minima[active]
        g_act = gamma[active]
        bad = ~np.all(np.isfinite(m_act), axis=1)
        if np.any(bad):
            # measure-zero guard (a quantile hit 0): take one plain arrival
            rows = active[bad]
            gamma[rows] += rng.exponential(size=rows.size)
            x = np.asarray(F.quantile(rng.random((rows.size, d))))
            with np.errstate(divide="ignore"):
                minima[rows] = np.minimum(minima[rows],
                                          gamma[rows, None] / x)
            continue

        scale = np.sum(m_act ** inv_alpha, axis=1) ** F.alpha
        remaining = scale * F.tail_integral(g_act / scale)
        budget = rng.exponential(size=active.size)
        alive = budget < remaining
        if not np.any(alive):
            break
        rows = active[alive]
        target = F.tail_integral(g_act[alive] / scale[alive]) \
            - budget[alive] / scale[alive]
        s = scale[alive] * _frechet_tail_inverse(F, g_act[alive] / scale[alive],
                                                 target)
        gamma[rows] = s
        minima[rows] = _conditional_exceedance_update(F, minima[rows], s, rng)
        active = rows
    return minima


def _frechet_tail_inverse(F: Frechet, a0, target):
    """Solve tail_integral(a) = target for a >= a0 by monotone Newton.

    The tail integral is convex and decreasing, so the iterates increase
    monotonically towards the root.
    """
    a = np.array(a0, dtype=float)
    for _ in range(60):
        resid = F.tail_integral(a) - target
        slope = -np.expm1(np.asarray(F.log_cdf(a)))  # 1 - F(a) = -tail'
        with np.errstate(invalid="ignore", divide="ignore"):
            step = np.where(slope > 0.0, resid / slope, 0.0)
        a = a + step
        if np.all(step <= 1e-13 * a):
            break
    return a


def _conditional_exceedance_update(F: Frechet, minima, s, rng):
    """Redraw marks at event time s conditioned on some coordinate exceeding
    its threshold a_k = s / m_k, then update the running minima."""
    m, d = minima.shape
    thresholds = s[:, None] / minima
    cdf_at = np.asarray(F.cdf(thresholds))
    survival_at = -np.expm1(np.asarray(F.log_cdf(thresholds)))
    # P(first exceeding coordinate is k) ~ prod_{j<k} F(a_j) * (1 - F(a_k))
    prefix = np.cumprod(cdf_at, axis=1)
    shifted = np.concatenate([np.ones((m, 1)), prefix[:, :-1]], axis=1)
    probs = shifted * survival_at
    total = probs.sum(axis=1, keepdims=True)
    first = (np.cumsum(probs, axis=1) < rng.random((m, 1)) * total).sum(axis=1)
    first = np.minimum(first, d - 1)

    u = rng.random((m, d))
    cols = np.arange(d)
    before = cols[None, :] < first[:, None]
    at = cols[None, :] == first[:, None]
    # truncated below-threshold draws for j < K, free draws after
    p = np.where(before, u * cdf_at, u)
    with np.errstate(divide="ignore"):
        x = np.asarray(F.quantile(p))
        # the exceedance at K in survival space (exact where F(a_K) ~ 1)
        over = (F.c / -np.log1p(-survival_at * (1.0 - u))) ** F.alpha
        x = np.where(at, over, x)
        updated = np.minimum(minima, s[:, None] / x)
    # degenerate event (all survivals underflow): leave the row unchanged
    return np.where(total > 0.0, updated, minima)


# ---------------------------------------------------------------------------
# Pickands simplex sampler
# ---------------------------------------------------------------------------


def sample_pickands(model: CanonicalModel, d: int, rng) -> PickandsSample:
    """One draw of the simplex vector of the d-margin of the model.

    With probability b return a uniformly random vertex; otherwise draw a
    family F from the mixture, one size-biased value for a uniformly chosen
    slot and iid F-values for the rest, then normalize to the simplex.
    """
    coords, _ = sample_pickands_batch(model, d, 1, rng)
    return PickandsSample(coords[0])


def sample_pickands_batch(model: CanonicalModel, d: int, n: int, rng):
    """(samples, n_resampled): n simplex rows, shape (n, d), plus the count
    of rows redrawn because their raw coordinates summed to zero."""
    d, n = int(d), int(n)
    if d < 1:
        raise ValueError(f"d must be at least 1, got {d}")
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    picked = rng.integers(0, d, size=n)
    if model.b == 1.0:
        vertex = np.ones(n, dtype=bool)
    elif model.b == 0.0:
        vertex = np.zeros(n, dtype=bool)
    else:
        vertex = rng.random(n) < model.b

    w = np.zeros((n, d))
    rows_v = np.nonzero(vertex)[0]
    w[rows_v, picked[rows_v]] = 1.0

    rows = np.nonzero(~vertex)[0]
    resampled = 0
    attempts = 0
    while rows.size:
        if attempts > _PICKANDS_MAX_RESAMPLES:
            raise ResourceError(
                f"simplex sampler hit {_PICKANDS_MAX_RESAMPLES} resample attempts",
                achieved_bound=float(rows.size),
            )
        w[rows] = _pickands_raw(model.mu, d, rows.size, picked[rows], rng)
        bad = w[rows].sum(axis=1) <= 0.0
        rows = rows[bad]
        resampled += int(bad.sum())
        attempts += 1

    return w / w.sum(axis=1, keepdims=True), resampled


def _pickands_raw(mu: MixingMeasure, d, m, picked, rng):
    weights, families = _mixture_arrays(mu)
    if len(families) == 1:
        comp = np.zeros(m, dtype=int)
    else:
        comp = np.searchsorted(np.cumsum(weights), rng.random(m), side="left")
    out = np.empty((m, d))
    biased = np.empty(m)
    u = rng.random((m, d))
    for ci, F in enumerate(families):
        mask = comp == ci
        if np.any(mask):
            out[mask] = F.quantile(u[mask])
            biased[mask] = F.sample_size_biased(rng, size=int(mask.sum()))
    out[np.arange(m), picked] = biased
    return out


# ---------------------------------------------------------------------------
# additive-path (LePage series) sampler and first passage
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IdtPath:
    """One truncated realization of a non-decreasing additive path.

    ``atoms`` lists the Poisson arrivals (gamma, F) kept before the stopping
    rule fired; the arrivals are drawn at rate ``intensity``, so evaluation
    needs no further scaling:

        H(t) = drift * t + sum_k -log F_k((gamma_k / t)-).

    H is non-decreasing, starts at H(0) = 0, and may equal +oo.
    ``truncation_bound`` is the certified bound on the expected omitted
    increment over [0, horizon].
    """

    drift: float
    intensity: float
    atoms: tuple[tuple[float, UnitMeanCdf], ...]
    horizon: float
    truncation_bound: float

    def value(self, t: float) -> float:
        return float(self.values(np.asarray([t]))[0])

    def values(self, ts) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        if np.any(ts < 0.0) or np.any(ts > self.horizon * (1.0 + 1e-12)):
            raise ValueError("evaluation points must lie in [0, horizon]")
        out = self.drift * ts
        if not self.atoms:
            return out
        jumps = np.zeros_like(ts)
        with np.errstate(divide="ignore"):
            for gamma, F in self.atoms:
                ratio = np.divide(gamma, ts, out=np.full_like(ts, np.inf),
                                  where=ts > 0.0)
                jumps = jumps - np.asarray(F.log_cdf(ratio, left=True))
        return out + jumps


class _PathBuilder:
    """Mutable Poisson-series state with lazy, certified extension."""

    def __init__(self, triplet: IdtTriplet, rng):
        self.drift = triplet.b
        self.intensity = triplet.c
        self.rng = rng
        self.gammas: list[float] = []
        self.comp_idx: list[int] = []
        self.pin_time = math.inf
        self.bound = math.inf
        if triplet.c > 0.0:
            self.weights, self.families = _mixture_arrays(triplet.mu)
            self.cum_weights = np.cumsum(self.weights)
            self.median_max = max(float(F.quantile(0.5)) for F in self.families)
            self.lowers = [F.support_lower() for F in self.families]
        else:
            self.weights, self.families = np.ones(1), []
            self.bound = 0.0
        self._grouped = None

    def certified(self, horizon: float, tol: float) -> bool:
        if self.intensity == 0.0:
            self.bound = 0.0
            return True
        eff = min(horizon, self.pin_time)
        last = self.gammas[-1] if self.gammas else 0.0
        if last < eff * self.median_max:
            return False
        bound = float(
            2.0 * self.intensity * eff
            * _mixture_tail(self.weights, self.families, last / eff)
        )
        if bound <= tol:
            self.bound = bound
            return True
        return False

    def extend_to(self, horizon: float, tol: float) -> None:
        while not self.certified(horizon, tol):
            if len(self.gammas) >= MAX_ARRIVALS:
                raise ResourceError(
                    f"path series exceeded {MAX_ARRIVALS} arrivals",
                    achieved_bound=self.bound,
                )
            # arrivals carry the triplet's intensity as their Poisson rate
            gamma = (self.gammas[-1] if self.gammas else 0.0) + float(
                self.rng.exponential()
            ) / self.intensity
            if len(self.families) == 1:
                ci = 0
            else:
                ci = int(np.searchsorted(self.cum_weights, self.rng.random(),
                                         side="left"))
            self.gammas.append(gamma)
            self.comp_idx.append(ci)
            lower = self.lowers[ci]
            if lower > 0.0:
                self.pin_time = min(self.pin_time, gamma / lower)
            self._grouped = None

    def _groups(self):
        if self._grouped is None:
            gammas = np.asarray(self.gammas)
            comp = np.asarray(self.comp_idx, dtype=int)
            self._grouped = [
                (F, gammas[comp == ci]) for ci, F in enumerate(self.families)
                if np.any(comp == ci)
            ]
        return self._grouped

    def value(self, t: float) -> float:
        total = self.drift * t
        if t <= 0.0 or self.intensity == 0.0:
            return total
        if t >= self.pin_time:
            return math.inf
        with np.errstate(divide="ignore"):
            for F, gammas in self._groups():
                total += float(
                    -np.asarray(F.log_cdf(gammas / t, left=True)).sum()
                )
        return total

    def snapshot(self, horizon: float) -> IdtPath:
        atoms = tuple(
            (float(g), self.families[ci])
            for g, ci in zip(self.gammas, self.comp_idx)
        )
        return IdtPath(self.drift, self.intensity, atoms, horizon, self.bound)


def sample_idt_path(triplet: IdtTriplet, horizon: float, rng,
                    tol: float = 1e-3) -> IdtPath:
    """Sample one additive path, truncated with certified remainder <= tol
    (in expectation) over [0, horizon]."""
    horizon = float(horizon)
    if not horizon > 0.0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    builder = _PathBuilder(triplet, rng)
    builder.extend_to(horizon, tol)
    return builder.snapshot(horizon)


def sample_conditional_iid(triplet: IdtTriplet, d: int, rng,
                           tol: float = 1e-3) -> np.ndarray:
    """One vector (Y_1, ..., Y_d) of first-passage times Y_k = inf{t : H_t > eta_k}.

    Requires the normalization b + c = 1 so the margins are unit exponential;
    in distribution the output matches sample_minstable of the corresponding
    canonical model.
    """
    return sample_conditional_iid_batch(triplet, d, 1, rng, tol)[0]


def sample_conditional_iid_batch(triplet: IdtTriplet, d: int, n: int, rng,
                                 tol: float = 1e-3) -> np.ndarray:
    """n first-passage vectors, shape (n, d).  See sample_conditional_iid."""
    d, n = int(d), int(n)
    if d < 1:
        raise ValueError(f"d must be at least 1, got {d}")
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    if not triplet.is_normalized(1e-9):
        raise ValueError("first-passage sampling requires b + c = 1")
    if triplet.c == 0.0:
        return rng.exponential(size=(n, d))

    jump = _single_jump_structure(triplet)
    if jump is not None:
        location, size = jump
        out = np.empty((n, d))
        for i in range(n):
            out[i] = _passage_single_jump(triplet.b, triplet.c, location, size,
                                          d, rng)
        return out

    out = np.empty((n, d))
    for i in range(n):
        builder = _PathBuilder(triplet, rng)
        etas = rng.exponential(size=d)
        out[i] = [_first_passage(builder, eta, tol) for eta in etas]
    return out


def _single_jump_structure(triplet: IdtTriplet):
    """(location, jump size) when every path atom produces one jump at
    gamma / location of deterministic size (possibly +oo), else None."""
    if len(triplet.mu.components) != 1:
        return None
    F = triplet.mu.components[0][1]
    atoms = F.atom_values()
    if atoms is None:
        return None
    values, _ = atoms
    positive = values[values > 0.0]
    if positive.size != 1:
        return None
    location = float(positive[0])
    below = float(F.cdf(location, left=True))
    size = math.inf if below == 0.0 else -math.log(below)
    return location, size


def _passage_single_jump(drift, intensity, location, size, d, rng):
    """Exact first passage for drift plus equally sized jumps at gamma_i/location,
    the gammas arriving at rate ``intensity``."""
    etas = rng.exponential(size=d)
    if math.isinf(size):
        pin = rng.exponential() / (intensity * location)
        if drift > 0.0:
            return np.minimum(etas / drift, pin)
        return np.full(d, pin)
    if drift == 0.0:
        # level after m jumps is m*size; passage at the m-th jump time
        needed = np.floor(etas / size).astype(int) + 1
        top = int(needed.max())
        if top > MAX_ARRIVALS:
            raise ResourceError(
                f"first passage needs {top} arrivals (cap {MAX_ARRIVALS})",
                achieved_bound=float(top),
            )
        gammas = np.cumsum(rng.exponential(size=top)) / intensity
        return gammas[needed - 1] / location

    out = np.full(d, np.nan)
    remaining = sorted(range(d), key=etas.__getitem__)
    pos = 0
    gamma = 0.0
    level = 0.0
    t_prev = 0.0
    for _ in range(MAX_ARRIVALS):
        if pos >= d:
            break
        gamma += float(rng.exponential()) / intensity
        t_jump = gamma / location
        # passages inside the drift segment [t_prev, t_jump)
        while pos < d:
            k = remaining[pos]
            t_star = (etas[k] - level) / drift
            if t_star >= t_jump:
                break
            out[k] = max(t_star, t_prev)
            pos += 1
        level += size
        # passages exactly at the jump location
        while pos < d and drift * t_jump + level > etas[remaining[pos]]:
            out[remaining[pos]] = t_jump
            pos += 1
        t_prev = t_jump
    else:
        raise ResourceError(
            f"first passage exceeded {MAX_ARRIVALS} arrivals", achieved_bound=np.nan
        )
    return out


def _first_passage(builder: _PathBuilder, eta: float, tol: float) -> float:
    t_hi = 1.0
    builder.extend_to(t_hi, tol)
    doublings = 0
    while builder.value(t_hi) <= eta:
        doublings += 1
        if doublings > MAX_DOUBLINGS or math.isinf(t_hi):
            raise ResourceError(
                f"no passage after {doublings} horizon doublings",
                achieved_bound=builder.bound,
            )
        t_hi *= 2.0
        builder.extend_to(t_hi, tol)
    lo = 0.0
    hi = t_hi
    for _ in range(200):
        if hi - lo <= _BISECT_RTOL * hi:
            break
        mid = 0.5 * (lo + hi)
        if builder.value(mid) > eta:
            hi = mid
        else:
            lo = mid
    return hi
