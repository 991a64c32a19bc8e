"""Summands and integrands: the left-hand side of every identity.

Two families live here.  The discrete family (``master_phi``, ``weight_w``,
``f_limit``) is evaluated on points of the shifted integer lattice, where
gamma factors routinely sit at poles and zeros; finite values are obtained
either directly (when every factor is regular) or as directional limits
with Richardson extrapolation.  The continuous family (``weight_g``,
``omega``, ``h_func``) is made of products of powers and symmetrized
rational functions evaluated on batches of interior quadrature points.

All continuous evaluators accept arrays of shape (npoints, k1) / (npoints,
k2) and return a vector of values; symmetrization is an explicit sum over
both permutation groups (capped at 40320 terms per evaluation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np
from scipy.special import gammaln, gammasgn

from .errors import (
    DomainError,
    InadmissibleTripleError,
    LimitDisagreementError,
    NearSingularError,
    PoleError,
)
from .params import ParamSet

NEAR_SINGULAR_TOL = 1e-9
SYM_TERM_CAP = 40320


# ---------------------------------------------------------------------------
# lattice points
# ---------------------------------------------------------------------------

def lattice_shift(k: int, gamma: float) -> np.ndarray:
    """Shift vector (k-1, k-2, ..., 0) * gamma prepended to integer parts."""
    return gamma * np.arange(k - 1, -1, -1, dtype=float)


def integer_parts_in_cone(nu, nv, k1: int, k2: int) -> bool:
    """Cone membership of integer parts: both blocks weakly decreasing and
    nonnegative, with nv[b] >= nu[b + k1 - k2] interleaving."""
    nu = list(nu)
    nv = list(nv)
    if any(nu[i] < nu[i + 1] for i in range(k1 - 1)) or (k1 and nu[-1] < 0):
        return False
    if any(nv[i] < nv[i + 1] for i in range(k2 - 1)) or (k2 and nv[-1] < 0):
        return False
    return all(nv[b] >= nu[b + k1 - k2] for b in range(k2))


@dataclass(frozen=True)
class LatticePoint:
    """A point of the gamma-shifted integer lattice.

    ``nu``/``nv`` are the integer parts; real coordinates carry the
    (k-1, ..., 0)*gamma shift on top of them.
    """

    nu: tuple
    nv: tuple
    gamma: float

    @property
    def k1(self) -> int:
        return len(self.nu)

    @property
    def k2(self) -> int:
        return len(self.nv)

    @property
    def u(self) -> np.ndarray:
        return np.asarray(self.nu, dtype=float) + lattice_shift(self.k1, self.gamma)

    @property
    def v(self) -> np.ndarray:
        return np.asarray(self.nv, dtype=float) + lattice_shift(self.k2, self.gamma)

    @property
    def in_cone(self) -> bool:
        return integer_parts_in_cone(self.nu, self.nv, self.k1, self.k2)


@dataclass(frozen=True)
class ContinuousPoint:
    t: tuple
    s: tuple


# ---------------------------------------------------------------------------
# master function (sign, log) evaluation on real coordinates
# ---------------------------------------------------------------------------

def _sign_log_gamma(x, pole_tol: float = 1e-12):
    """(sign, log|Gamma|) elementwise; raises when an argument is at a pole."""
    x = np.asarray(x, dtype=float)
    near = (x < 0.5) & (np.abs(x - np.round(x)) <= pole_tol)
    if np.any(near):
        raise PoleError(f"gamma pole at argument {x[near].flat[0]!r}")
    return gammasgn(x), gammaln(x)


def _sign_log_recip_gamma(x, zero_tol: float):
    """(sign, log) of 1/Gamma(x); arguments within zero_tol of a nonpositive
    integer give an exact zero (sign 0)."""
    x = np.asarray(x, dtype=float)
    zero = (x < 0.5) & (np.abs(x - np.round(x)) <= zero_tol)
    safe = np.where(zero, 1.0, x)
    sign = np.where(zero, 0.0, gammasgn(safe))
    logm = np.where(zero, 0.0, -gammaln(safe))
    return sign, logm


def _sign_log_value(x):
    """(sign, log|x|) of a plain factor; log of 0 is guarded by the caller."""
    x = np.asarray(x, dtype=float)
    sign = np.sign(x)
    with np.errstate(divide="ignore"):
        logm = np.where(sign == 0.0, 0.0, np.log(np.abs(np.where(sign == 0.0, 1.0, x))))
    return sign, logm


def phi_sign_log(u: np.ndarray, v: np.ndarray, p: ParamSet, zero_tol: float = 1e-12):
    """Master-product value on real (u, v) batches as (sign, logmag) arrays.

    Reciprocal gamma factors at nonpositive integers contribute exact
    zeros; numerator gammas at poles raise :class:`PoleError`.
    """
    u = np.atleast_2d(np.asarray(u, dtype=float))
    v = np.atleast_2d(np.asarray(v, dtype=float))
    n = u.shape[0]
    k1, k2 = u.shape[1], v.shape[1]
    a, g = p.alpha, p.gamma
    sign = np.ones(n)
    logm = np.zeros(n)

    def accumulate(s, l):
        nonlocal sign, logm
        sign = sign * s
        logm = logm + l

    if k1:
        logm = logm + math.log(p.z1) * u.sum(axis=1)
        s1, l1 = _sign_log_gamma(u + a)
        accumulate(s1.prod(axis=1), l1.sum(axis=1))
        s2, l2 = _sign_log_recip_gamma(u + 1.0, zero_tol)
        accumulate(s2.prod(axis=1), l2.sum(axis=1))
    if k2:
        logm = logm + math.log(p.z2) * v.sum(axis=1)
    if k1 and k2:
        dvu = v[:, None, :] - u[:, :, None]  # (n, k1, k2)
        s3, l3 = _sign_log_gamma(dvu - g + 1.0)
        accumulate(s3.reshape(n, -1).prod(axis=1), l3.reshape(n, -1).sum(axis=1))
        s4, l4 = _sign_log_recip_gamma(dvu + 1.0, zero_tol)
        accumulate(s4.reshape(n, -1).prod(axis=1), l4.reshape(n, -1).sum(axis=1))
    for block, kk in ((u, k1), (v, k2)):
        for i in range(kk):
            for j in range(i + 1, kk):
                d = block[:, i] - block[:, j]
                s5, l5 = _sign_log_value(d)
                accumulate(s5, l5)
                s6, l6 = _sign_log_gamma(d + g)
                accumulate(s6, l6)
                s7, l7 = _sign_log_recip_gamma(d - g + 1.0, zero_tol)
                accumulate(s7, l7)
    return sign, logm


def master_phi(pt, p: ParamSet):
    """Master product at one point, as a LogSigned value."""
    from .logreal import LogSigned

    if isinstance(pt, LatticePoint):
        u, v = pt.u, pt.v
    else:
        u, v = pt
    sign, logm = phi_sign_log(np.asarray(u, float)[None, :], np.asarray(v, float)[None, :], p)
    return LogSigned(int(sign[0]), float(logm[0]))


# ---------------------------------------------------------------------------
# discrete weight function w
# ---------------------------------------------------------------------------

def _check_sym_cap(k1: int, k2: int):
    if math.factorial(k1) * math.factorial(k2) > SYM_TERM_CAP:
        raise DomainError(f"symmetrization over S_{k1} x S_{k2} exceeds the term cap")


def weight_w(u: np.ndarray, v: np.ndarray, gamma: float,
             near_tol: float = NEAR_SINGULAR_TOL) -> np.ndarray:
    """Symmetrized discrete weight on real (u, v) batches.

    Simple poles sit on the hyperplanes v_b - u_a = gamma; evaluation
    closer than ``near_tol`` to any denominator zero raises
    :class:`NearSingularError`.
    """
    u = np.atleast_2d(np.asarray(u, dtype=float))
    v = np.atleast_2d(np.asarray(v, dtype=float))
    n, k1, k2 = u.shape[0], u.shape[1], v.shape[1]
    _check_sym_cap(k1, k2)
    kk = k1 - k2
    dvu = v[:, None, :] - u[:, :, None] - gamma
    dev = [np.abs(dvu).min() if k1 and k2 else np.inf]
    for block, kdim in ((u, k1), (v, k2)):
        for i in range(kdim):
            for j in range(i + 1, kdim):
                dev.append(np.abs(block[:, i] - block[:, j]).min())
    if min(dev) < near_tol:
        raise NearSingularError("weight evaluated too close to a pole hyperplane")

    total = np.zeros(n)
    for sigma in permutations(range(k1)):
        us = u[:, sigma]
        tfac = np.ones(n)
        for i in range(k1):
            for j in range(i + 1, k1):
                d = us[:, i] - us[:, j]
                tfac = tfac * (d - gamma) / d
        for tau in permutations(range(k2)):
            vs = v[:, tau]
            term = tfac.copy()
            for b in range(k2):
                term = term / (vs[:, b] - us[:, b + kk] - gamma)
            for b in range(k2):
                for aa in range(b + 1, k2):
                    d = vs[:, b] - us[:, aa + kk]
                    term = term * d / (d - gamma)
            for i in range(k2):
                for j in range(i + 1, k2):
                    d = vs[:, i] - vs[:, j]
                    term = term * (d - gamma) / d
            total = total + term
    return total / (math.factorial(k1) * math.factorial(k2))


def f_off_lattice(u: np.ndarray, v: np.ndarray, p: ParamSet,
                  include_weight: bool = True) -> np.ndarray:
    """F = Phi * w on real points away from the singular hyperplanes."""
    u = np.atleast_2d(np.asarray(u, dtype=float))
    v = np.atleast_2d(np.asarray(v, dtype=float))
    sign, logm = phi_sign_log(u, v, p)
    vals = sign * np.exp(logm)
    if include_weight and v.shape[1] > 0:
        vals = vals * weight_w(u, v, p.gamma, near_tol=1e-13)
    return vals


# ---------------------------------------------------------------------------
# lattice evaluation: direct where regular, directional limit otherwise
# ---------------------------------------------------------------------------

def _lattice_gamma_args(pt: LatticePoint, p: ParamSet):
    """All gamma/denominator arguments at a lattice point, with flags.

    Yields tuples (value, kind) where kind is 'num' for a numerator gamma,
    'recip' for a reciprocal gamma and 'wden' for a weight denominator.
    """
    u, v = pt.u, pt.v
    k1, k2 = pt.k1, pt.k2
    for i in range(k1):
        yield u[i] + p.alpha, "num"
        yield u[i] + 1.0, "recip"
    for i in range(k1):
        for j in range(k2):
            yield v[j] - u[i] - p.gamma + 1.0, "num"
            yield v[j] - u[i] + 1.0, "recip"
            yield v[j] - u[i] - p.gamma, "wden"
    for block, kdim in ((u, k1), (v, k2)):
        for i in range(kdim):
            for j in range(i + 1, kdim):
                d = block[i] - block[j]
                yield d + p.gamma, "num"
                yield d - p.gamma + 1.0, "recip"
                yield d, "wden"


def lattice_point_is_regular(pt: LatticePoint, p: ParamSet,
                             tol: float = NEAR_SINGULAR_TOL) -> bool:
    """True when F can be evaluated at pt as a plain product.

    Regularity fails when a numerator gamma argument sits at a nonpositive
    integer (a pole of the master product) or a weight denominator
    vanishes; reciprocal gammas at nonpositive integers are harmless zeros.
    """
    for val, kind in _lattice_gamma_args(pt, p):
        if kind == "num":
            if val < 0.5 and abs(val - round(val)) <= tol:
                return False
        elif kind == "wden":
            if abs(val) <= tol:
                return False
    return True


def _draw_direction(rng, pt: LatticePoint, p: ParamSet, attempts: int = 32):
    """Direction along which no singular linear form stays degenerate."""
    k1, k2 = pt.k1, pt.k2
    for _ in range(attempts):
        d = rng.uniform(-1.0, 1.0, size=k1 + k2)
        norm = np.abs(d).max()
        if norm < 1e-3:
            continue
        d = d / norm
        du, dv = d[:k1], d[k1:]
        ok = True
        # forms vanishing at pt must move at a healthy rate along d
        for (val, kind), rate in zip(_lattice_gamma_args(pt, p),
                                     _direction_rates(du, dv, k1, k2)):
            if abs(val - round(val)) <= NEAR_SINGULAR_TOL or abs(val) <= NEAR_SINGULAR_TOL:
                if abs(rate) < 0.05:
                    ok = False
                    break
        if ok:
            return du, dv
    raise LimitDisagreementError("could not find a generic probe direction")


def _direction_rates(du, dv, k1, k2):
    """Rates of change of the arguments yielded by _lattice_gamma_args."""
    for i in range(k1):
        yield du[i]
        yield du[i]
    for i in range(k1):
        for j in range(k2):
            yield dv[j] - du[i]
            yield dv[j] - du[i]
            yield dv[j] - du[i]
    for block, kdim in ((du, k1), (dv, k2)):
        for i in range(kdim):
            for j in range(i + 1, kdim):
                yield block[i] - block[j]
                yield block[i] - block[j]
                yield block[i] - block[j]


def _neville_at_zero(xs, ys) -> float:
    """Polynomial extrapolation of (xs, ys) to x = 0."""
    xs = list(map(float, xs))
    ys = list(map(float, ys))
    n = len(xs)
    tab = ys[:]
    for level in range(1, n):
        for i in range(n - level):
            tab[i] = (xs[i + level] * tab[i] - xs[i] * tab[i + 1]) / (xs[i + level] - xs[i])
    return tab[0]


def _directional_value(pt: LatticePoint, p: ParamSet, du, dv, eps_list,
                       include_weight: bool) -> float:
    u0, v0 = pt.u, pt.v
    uu = np.stack([u0 + e * du for e in eps_list])
    vv = np.stack([v0 + e * dv for e in eps_list])
    vals = f_off_lattice(uu, vv, p, include_weight=include_weight)
    return _neville_at_zero(eps_list, vals)


def f_limit(pt: LatticePoint, p: ParamSet, *, seed: int = 7919,
            rel_tol: float = 1e-6, force_probe: bool = False,
            include_weight: bool = True, return_pair: bool = False):
    """Value of F at a lattice point.

    Regular points are evaluated as a plain product.  At singular points
    the value is the straight-line limit: probe at eps in {1e-2, 1e-3,
    1e-4} (scaled by min(1, |gamma|)) along a random generic direction,
    extrapolate to zero, and repeat with a second independent direction.
    The two extrapolations must agree to ``rel_tol``.
    """
    if not force_probe and lattice_point_is_regular(pt, p):
        u, v = pt.u[None, :], pt.v[None, :]
        sign, logm = phi_sign_log(u, v, p, zero_tol=NEAR_SINGULAR_TOL)
        val = float(sign[0] * np.exp(logm[0]))
        if include_weight and val != 0.0 and pt.k2 > 0:
            val *= float(weight_w(u, v, p.gamma)[0])
        return (val, val) if return_pair else val

    scale = min(1.0, abs(p.gamma))
    eps_list = [1e-2 * scale, 1e-3 * scale, 1e-4 * scale]
    rng = np.random.default_rng(seed)
    results = []
    attempts = 0
    while len(results) < 2 and attempts < 10:
        attempts += 1
        du, dv = _draw_direction(rng, pt, p)
        try:
            results.append(_directional_value(pt, p, du, dv, eps_list, include_weight))
        except (PoleError, NearSingularError):
            continue
    if len(results) < 2:
        raise LimitDisagreementError("probe evaluations kept hitting singular hyperplanes")
    a, b = results
    scale_ref = max(abs(a), abs(b))
    if scale_ref > 0 and abs(a - b) > rel_tol * scale_ref and scale_ref > 1e-300:
        # tiny values (support region) are allowed to disagree in relative terms
        if scale_ref > 1e-10:
            raise LimitDisagreementError(
                f"directional limits disagree: {a!r} vs {b!r} at {pt!r}")
    val = 0.5 * (a + b)
    return (a, b) if return_pair else val


# ---------------------------------------------------------------------------
# continuous weights
# ---------------------------------------------------------------------------

def weight_g(t: np.ndarray, s: np.ndarray, form: str = "shifted",
             near_tol: float = NEAR_SINGULAR_TOL) -> np.ndarray:
    """Symmetrized rational weight with simple poles at t_a = s_b.

    ``form='shifted'`` uses partners t_{b+k1-k2}; ``form='plain'`` uses
    t_b.  The two agree identically; both are kept so the equality can be
    tested.
    """
    t = np.atleast_2d(np.asarray(t, dtype=float))
    s = np.atleast_2d(np.asarray(s, dtype=float))
    n, k1, k2 = t.shape[0], t.shape[1], s.shape[1]
    _check_sym_cap(k1, k2)
    if k2 == 0:
        return np.ones(n)
    offset = (k1 - k2) if form == "shifted" else 0
    if np.abs(t[:, None, :] - s[:, :, None]).min() < near_tol:
        raise NearSingularError("weight evaluated too close to t = s")
    total = np.zeros(n)
    for sigma in permutations(range(k1)):
        ts = t[:, sigma]
        for tau in permutations(range(k2)):
            ss = s[:, tau]
            term = np.ones(n)
            for b in range(k2):
                term = term / (ss[:, b] - ts[:, b + offset])
            total = total + term
    return total / (math.factorial(k1) * math.factorial(k2))


def omega(t: np.ndarray, s: np.ndarray, p: ParamSet,
          near_tol: float = NEAR_SINGULAR_TOL) -> np.ndarray:
    """Power-product master density on the open unit box.

    Coincidence factors are taken on absolute values; inside any ordered
    domain the orderings fix all signs, so no branch ambiguity arises.
    """
    t = np.atleast_2d(np.asarray(t, dtype=float))
    s = np.atleast_2d(np.asarray(s, dtype=float))
    n, k1, k2 = t.shape[0], t.shape[1], s.shape[1]
    if (k1 and (t.min() <= 0.0 or t.max() >= 1.0)) or (k2 and (s.min() <= 0.0 or s.max() >= 1.0)):
        raise DomainError("omega requires all coordinates strictly inside (0,1)")
    a, b1, b2, g = p.alpha, p.beta1, p.beta2, p.gamma
    logv = np.zeros(n)
    if k1:
        logv += (a - 1.0) * np.log(t).sum(axis=1) + (b1 - 1.0) * np.log1p(-t).sum(axis=1)
    if k2:
        logv += (b2 - 1.0) * np.log1p(-s).sum(axis=1)
    if k1 and k2:
        d = np.abs(t[:, :, None] - s[:, None, :])
        if d.min() < near_tol:
            raise NearSingularError("omega evaluated too close to t = s")
        logv += (-g) * np.log(d).reshape(n, -1).sum(axis=1)
    for block, kdim in ((t, k1), (s, k2)):
        for i in range(kdim):
            for j in range(i + 1, kdim):
                d = np.abs(block[:, i] - block[:, j])
                if d.min() < near_tol:
                    raise NearSingularError("omega evaluated too close to a coincidence")
                logv += (2.0 * g) * np.log(d)
    return np.exp(logv)


def is_admissible(l1: int, l2: int, m: int, k1: int, k2: int) -> bool:
    """Index bounds under which the end-point integrals are defined."""
    return (0 <= l1 and 0 <= l2 and 0 <= m
            and l1 <= k1 - k2 + l2 and l2 <= k2 and m <= min(l1, l2))


def _h_core(l1, l2, m, t, s, k1, k2, twisted, near_tol):
    t = np.atleast_2d(np.asarray(t, dtype=float))
    s = np.atleast_2d(np.asarray(s, dtype=float))
    n = t.shape[0]
    _check_sym_cap(k1, k2)
    if not is_admissible(l1, l2, m, k1, k2):
        raise InadmissibleTripleError(f"triple ({l1},{l2},{m}) is not admissible for ({k1},{k2})")
    if k1 and k2 and np.abs(t[:, None, :] - s[:, :, None]).min() < near_tol:
        raise NearSingularError("h evaluated too close to t = s")
    kk = k1 - k2
    total = np.zeros(n)
    for sigma in permutations(range(k1)):
        ts = t[:, sigma]
        base = np.ones(n)
        for aa in range(l1):
            base = base * ts[:, aa]
        for aa in range(l1, k1):
            base = base * (1.0 - ts[:, aa])
        for tau in permutations(range(k2)):
            ss = s[:, tau]
            term = base.copy()
            for b in range(m):
                numer = (1.0 - ts[:, b]) if twisted else (1.0 - ss[:, b])
                term = term * numer / (ss[:, b] - ts[:, b])
            for b in range(l2, k2):
                term = term * (1.0 - ss[:, b]) / (ss[:, b] - ts[:, b + kk])
            total = total + term
    return total / (math.factorial(k1) * math.factorial(k2))


def h_func(l1: int, l2: int, m: int, t, s, k1: int, k2: int,
           near_tol: float = NEAR_SINGULAR_TOL) -> np.ndarray:
    """Doubly symmetrized end-point weight."""
    return _h_core(l1, l2, m, t, s, k1, k2, twisted=False, near_tol=near_tol)


def h_tilde_func(l1: int, l2: int, m: int, t, s, k1: int, k2: int,
                 near_tol: float = NEAR_SINGULAR_TOL) -> np.ndarray:
    """Twisted variant: the m-block numerators carry 1-t instead of 1-s."""
    return _h_core(l1, l2, m, t, s, k1, k2, twisted=True, near_tol=near_tol)


def h_pole_count(l1: int, l2: int, m: int, k2: int) -> int:
    """Number of simple-pole factors in each symmetrization term."""
    return m + (k2 - l2)


# ---------------------------------------------------------------------------
# assembled integrands
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Integrand:
    """A vectorized integrand with the facts quadrature needs about it.

    ``pole_count`` is the number of rational pole factors per
    symmetrization term (0 when the rational weight is absent);
    ``interval`` is '01' or '0inf'.  ``kind``/``indices`` describe the
    rational-weight structure so the deterministic engine can evaluate
    the integrand from stable gap quantities instead of raw coordinates:
    'plain' (no weight), 'g', 'h', 'ht', 'moment' (symmetrized
    t1..tl * (1-t_{l+1})..(1-t_k)) or 'moment_plain' (t1..tl only).
    """

    fn: object
    k1: int
    k2: int
    interval: str
    pole_count: int
    alpha: float
    gamma: float
    beta1: float
    beta2: float
    exp_rates: tuple | None = None
    kind: str = "plain"
    indices: tuple = ()

    def __call__(self, t, s):
        return self.fn(t, s)


def assembled_integrand(which: str, p: ParamSet, indices=None,
                        near_tol: float = 0.0) -> Integrand:
    """Build the full integrand for one identity.

    ``which`` is one of 'selb', 'exp', 'exp3', 'selb3', 'selb30',
    'aomoto', 'J', 'Jt'.  For 'aomoto' ``indices`` is the moment index l
    (optionally the pair (l, 'original')); for 'J'/'Jt' it is the triple
    (l1, l2, m).
    """
    k1, k2 = p.k1, p.k2
    a, b1, b2, g = p.alpha, p.beta1, p.beta2, p.gamma

    def pair_powers(t, s):
        n = t.shape[0]
        logv = np.zeros(n)
        if k1 and k2:
            d = np.abs(t[:, :, None] - s[:, None, :])
            logv += (-g) * np.log(d).reshape(n, -1).sum(axis=1)
        for block, kdim in ((t, k1), (s, k2)):
            for i in range(kdim):
                for j in range(i + 1, kdim):
                    logv += (2.0 * g) * np.log(np.abs(block[:, i] - block[:, j]))
        return logv

    if which == "selb":
        if k2 != 0:
            raise DomainError("'selb' requires k2 = 0")

        def fn(t, s):
            t = np.atleast_2d(t)
            logv = (a - 1.0) * np.log(t).sum(axis=1) + (b1 - 1.0) * np.log1p(-t).sum(axis=1)
            return np.exp(logv + pair_powers(t, np.zeros((t.shape[0], 0))))

        return Integrand(fn, k1, 0, "01", 0, a, g, b1, b2, kind="plain")

    if which == "exp":
        if k2 != 0:
            raise DomainError("'exp' requires k2 = 0")

        def fn(t, s):
            t = np.atleast_2d(t)
            logv = (a - 1.0) * np.log(t).sum(axis=1) - t.sum(axis=1)
            return np.exp(logv + pair_powers(t, np.zeros((t.shape[0], 0))))

        return Integrand(fn, k1, 0, "0inf", 0, a, g, b1, b2, exp_rates=(1.0, 1.0), kind="plain")

    if which == "exp3":

        def fn(t, s):
            t, s = np.atleast_2d(t), np.atleast_2d(s)
            logv = (a - 1.0) * np.log(t).sum(axis=1) - b1 * t.sum(axis=1)
            if k2:
                logv = logv - b2 * s.sum(axis=1)
            vals = np.exp(logv + pair_powers(t, s))
            if k2:
                vals = vals * weight_g(t, s, near_tol=near_tol)
            return vals

        return Integrand(fn, k1, k2, "0inf", k2, a, g, b1, b2, exp_rates=(b1, b2), kind="g" if k2 else "plain")

    if which == "selb3":

        def fn(t, s):
            vals = omega(t, s, p, near_tol=near_tol)
            if k2:
                vals = vals * weight_g(np.atleast_2d(t), np.atleast_2d(s), near_tol=near_tol)
            return vals

        return Integrand(fn, k1, k2, "01", k2, a, g, b1, b2, kind="g" if k2 else "plain")

    if which == "selb30":

        def fn(t, s):
            return omega(t, s, p, near_tol=near_tol)

        return Integrand(fn, k1, k2, "01", 0, a, g, b1, b2, kind="plain")

    if which == "aomoto":
        if k2 != 0:
            raise DomainError("'aomoto' requires k2 = 0")
        if isinstance(indices, tuple):
            ell, flavor = indices
        else:
            ell, flavor = indices, "two-sided"

        def fn(t, s):
            t = np.atleast_2d(t)
            n = t.shape[0]
            logv = (a - 1.0) * np.log(t).sum(axis=1) + (b1 - 1.0) * np.log1p(-t).sum(axis=1)
            base = np.exp(logv + pair_powers(t, np.zeros((n, 0))))
            total = np.zeros(n)
            for sigma in permutations(range(k1)):
                ts = t[:, sigma]
                term = np.ones(n)
                for aa in range(ell):
                    term = term * ts[:, aa]
                if flavor == "two-sided":
                    for aa in range(ell, k1):
                        term = term * (1.0 - ts[:, aa])
                total = total + term
            return base * total / math.factorial(k1)

        return Integrand(fn, k1, 0, "01", 0, a, g, b1, b2,
                         kind="moment" if flavor == "two-sided" else "moment_plain",
                         indices=(ell,))

    if which in ("J", "Jt"):
        l1, l2, m = indices
        hf = h_tilde_func if which == "Jt" else h_func

        def fn(t, s):
            return omega(t, s, p, near_tol=near_tol) * hf(l1, l2, m, t, s, k1, k2, near_tol=near_tol)

        return Integrand(fn, k1, k2, "01", h_pole_count(l1, l2, m, k2), a, g, b1, b2,
                         kind="ht" if which == "Jt" else "h", indices=(l1, l2, m))

    raise DomainError(f"unknown integrand {which!r}")
