"""Verification registry: one entry per identity.

Each entry binds a validity predicate, a left-hand-side engine, a
right-hand-side closed form and a tolerance policy, and running it
produces a :class:`VerificationRecord`.  For single-valued identities
``lhs``/``rhs`` are the two sides; for aggregate checks (relation
residuals, support tests, ...) ``lhs`` is the measured quantity, ``rhs``
its reference, and ``rel_dev`` the normalized deviation the tolerance
applies to.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import closed_forms as cf
from .chains import gamma_chain, unit_chain
from .errors import InvalidParamsError, NotConvergedError
from .integrands import LatticePoint, assembled_integrand, f_limit
from .lattice import (
    cone_integer_parts,
    eps_limit_ratio,
    lattice_values,
    pde_residual,
    sum_discrete,
)
from .logreal import gamma_ratio
from .params import ParamSet
from .quadrature import QuadSpec, integrate_chain
from .recursions import jjl_shift_check, solve_both, verify_relations

MC_FLOOR = 1e-3


@dataclass(frozen=True)
class Budget:
    """Resource knobs shared by all engines."""

    series_rel_tol: float = 1e-10
    max_bound: int | None = None
    nodes: int = 0               # 0 = per-dimension default
    samples: int = 400_000
    step: float = 1e-4           # finite-difference step
    eps: float = 1e-3            # rescaling parameter of the limit link
    points: int = 50             # random points for support/limit checks
    smooth_order: int = 4

    def scaled(self, factor: float) -> "Budget":
        return Budget(self.series_rel_tol, self.max_bound, self.nodes,
                      max(1000, int(self.samples * factor)), self.step,
                      self.eps, self.points, self.smooth_order)


@dataclass(frozen=True)
class VerificationRecord:
    identity_id: str
    params: ParamSet
    lhs: float
    lhs_err: float
    rhs: float
    rel_dev: float
    tolerance: float
    passed: bool
    seed: int
    runtime_ms: int
    note: str = ""

    def as_dict(self) -> dict:
        d = {
            "identity_id": self.identity_id,
            "params": self.params.as_dict(),
            "lhs": self.lhs,
            "lhs_err": self.lhs_err,
            "rhs": self.rhs,
            "rel_dev": self.rel_dev,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "seed": self.seed,
            "runtime_ms": self.runtime_ms,
            "note": self.note,
        }
        return d


# ---------------------------------------------------------------------------
# validity predicates
# ---------------------------------------------------------------------------

def _need(cond: bool, msg: str):
    if not cond:
        raise InvalidParamsError(msg)


def _selberg_gamma_ok(k: int, a: float, b: float, g: float) -> bool:
    if k <= 1:
        return True
    lim = min(1.0 / k, a / (k - 1), b / (k - 1))
    return g > -lim


def _v_selb(p: ParamSet):
    _need(p.k2 == 0, "k2 must be 0 (set k via --k)")
    _need(p.alpha > 0 and p.beta > 0, "need alpha > 0 and beta > 0")
    _need(abs(p.gamma) > 1e-9, "gamma = 0 hits the gamma-function pole in the value")
    _need(_selberg_gamma_ok(p.k, p.alpha, p.beta, p.gamma),
          "gamma below the convergence threshold -min(1/k, alpha/(k-1), beta/(k-1))")


def _v_exp(p: ParamSet):
    _need(p.k2 == 0, "k2 must be 0 (set k via --k)")
    _need(p.alpha > 0, "need alpha > 0")
    _need(abs(p.gamma) > 1e-9, "gamma = 0 hits the gamma-function pole in the value")
    _need(p.k <= 1 or p.gamma > -min(1.0 / p.k, p.alpha / (p.k - 1)),
          "gamma below the convergence threshold")


def _v_dexp(p: ParamSet):
    _need(p.k2 == 0, "k2 must be 0 (set k via --k)")
    _need(0.0 < p.z < 1.0, "need z in (0,1)")
    _need(abs(p.gamma) > 1e-9 and p.alpha > 0, "need generic gamma and alpha > 0")


def _v_dexp3(p: ParamSet):
    _need(0.0 < p.z1 < 1.0 and 0.0 < p.z2 < 1.0, "need z1, z2 in (0,1)")
    _need(-0.5 < p.gamma < 0.0, "need gamma in (-0.5, 0)")
    _need(p.alpha > 0, "need alpha > 0")


def _v_sl3_cont(p: ParamSet):
    _need(p.alpha > 0 and p.beta1 > 0 and p.beta2 > 0, "need alpha, beta1, beta2 > 0")
    _need(-0.5 < p.gamma < 0.0, "need gamma in (-0.5, 0); working range is [-0.3, -0.02]")


def _v_aomoto(p: ParamSet):
    _v_selb(p)
    _need(p.k <= 6, "need k <= 6 for the symmetrized moment factor")


def _v_recursion(p: ParamSet):
    _v_sl3_cont(p)
    _need(p.k1 + p.k2 <= 8, "need k1 + k2 <= 8")


def _v_open(p: ParamSet):
    return None


def _v_decomp(p: ParamSet):
    _need(p.k1 + p.k2 <= 4, "quadrature decomposition check needs k1 + k2 <= 4")


# ---------------------------------------------------------------------------
# engines: return (lhs, lhs_err, rhs, tolerance, note)
# ---------------------------------------------------------------------------

def _det_or_mc(p: ParamSet, budget: Budget, seed: int, tol_det: float) -> QuadSpec:
    if p.k1 + p.k2 <= 3:
        return QuadSpec("deterministic", budget.nodes, budget.samples, seed,
                        budget.smooth_order)
    return QuadSpec("monte_carlo", budget.nodes, budget.samples, seed,
                    budget.smooth_order)


def _quad_engine(which: str, rhs_fn, scheme: str | None = None):
    def engine(p: ParamSet, budget: Budget, seed: int, tol: float | None):
        ig = assembled_integrand(which, p)
        if scheme == "monte_carlo":
            spec = QuadSpec("monte_carlo", budget.nodes, budget.samples, seed,
                            budget.smooth_order)
        elif scheme == "deterministic":
            spec = QuadSpec("deterministic", budget.nodes, budget.samples, seed,
                            budget.smooth_order)
        else:
            spec = _det_or_mc(p, budget, seed, tol)
        chain = gamma_chain(p.k1, p.k2, p.gamma)
        lhs, err = integrate_chain(ig, chain, spec, p)
        rhs = rhs_fn(p).to_float()
        if spec.scheme == "monte_carlo":
            tolerance = tol if tol is not None else max(3.0 * err / abs(rhs), MC_FLOOR)
        else:
            tolerance = tol if tol is not None else 1e-6
        return lhs, err, rhs, tolerance, spec.scheme
    return engine


def _series_engine(which: str, rhs_fn):
    def engine(p: ParamSet, budget: Budget, seed: int, tol: float | None):
        res = sum_discrete(which, p, rel_tol=budget.series_rel_tol,
                           max_bound=budget.max_bound, seed=seed)
        if not res.converged:
            raise NotConvergedError(
                f"series truncation at bound {res.bound} missed the target tail")
        rhs = rhs_fn(p).to_float()
        err = abs(res.last_shell)
        return res.partial_sum, err, rhs, (tol if tol is not None else 1e-8), \
            f"bound={res.bound}"
    return engine


def _aomoto_engine(p: ParamSet, budget: Budget, seed: int, tol: float | None):
    k = p.k
    spec = QuadSpec("deterministic", budget.nodes, budget.samples, seed,
                    budget.smooth_order)
    chain = gamma_chain(k, 0, p.gamma)
    worst = (0.0, 0.0, 1.0)
    for ell in range(k + 1):
        ig = assembled_integrand("aomoto", p, indices=ell)
        lhs, err = integrate_chain(ig, chain, spec, p)
        rhs = cf.aomoto_rhs(k, ell, p).to_float()
        dev = abs(lhs - rhs) / abs(rhs)
        if dev >= worst[0]:
            worst = (dev, lhs, rhs, err)
    dev, lhs, rhs, err = worst
    return lhs, err, rhs, (tol if tol is not None else 1e-4), f"worst over l=0..{k}"


def _jjj_engine(p: ParamSet, budget: Budget, seed: int, tol: float | None):
    tab, tabt = solve_both(p)
    res = verify_relations(tab, p) + verify_relations(tabt, p)
    nonpivot = [r for _, r, pivot in res if not pivot]
    checked = nonpivot if nonpivot else [r for _, r, _ in res]
    worst = max(checked)
    return worst, 0.0, 0.0, (tol if tol is not None else 1e-10), \
        f"{len(res)} relations, {len(nonpivot)} over-determined"


def _jjl_engine(p: ParamSet, budget: Budget, seed: int, tol: float | None):
    worst = max(jjl_shift_check(p, l) for l in range(p.k2 + 1))
    return worst, 0.0, 0.0, (tol if tol is not None else 1e-8), \
        f"all l = 0..{p.k2}"


def _j0k_engine(p: ParamSet, budget: Budget, seed: int, tol: float | None):
    tab, tabt = solve_both(p)
    devs = []
    pairs = [
        (tab.value((0, p.k2, 0)), cf.j_closed_form("J0k20", p)),
        (tab.value((p.k1, p.k2, 0)), cf.j_closed_form("Jk1k20", p)),
    ]
    for m in range(p.k2 + 1):
        pairs.append((tabt.value((p.k1, p.k2, m)), cf.j_closed_form("Jtk1k2m", p, m=m)))
    for got, want in pairs:
        devs.append(abs((got / want).to_float() - 1.0))
    shifted = cf.j_closed_form("J0k20", p.with_(beta1=p.beta1 - 1.0))
    devs.append(abs((shifted / cf.sl3_selberg0_rhs(p)).to_float() - 1.0))
    return max(devs), 0.0, 0.0, (tol if tol is not None else 1e-8), \
        "table corners vs product forms"


def _chain_decomp_engine(p: ParamSet, budget: Budget, seed: int, tol: float | None):
    rng = np.random.default_rng(seed)
    k1, k2 = p.k1, p.k2
    chain = unit_chain(k1, k2)
    spec = QuadSpec("deterministic", budget.nodes or 24, budget.samples, seed,
                    budget.smooth_order)
    n_mc = max(budget.samples, 100_000)
    box = rng.uniform(size=(n_mc, k1 + k2))
    bt, bs = box[:, :k1], box[:, k1:]
    inside = np.ones(n_mc, dtype=bool)
    for i in range(k1 - 1):
        inside &= bt[:, i] >= bt[:, i + 1]
    for i in range(k2 - 1):
        inside &= bs[:, i] >= bs[:, i + 1]
    for b in range(k2):
        inside &= bs[:, b] >= bt[:, b + k1 - k2]
    from .integrands import Integrand

    worst = None
    for _ in range(20):
        degs_t = rng.integers(0, 4, size=k1)
        degs_s = rng.integers(0, 4, size=k2)

        def poly(t, s, dt=degs_t, ds=degs_s):
            t = np.atleast_2d(t)
            s = np.atleast_2d(s)
            out = np.ones(t.shape[0])
            for i in range(t.shape[1]):
                out = out * t[:, i] ** dt[i]
            for i in range(s.shape[1]):
                out = out * s[:, i] ** ds[i]
            return out

        ig = Integrand(poly, k1, k2, "01", 0, 1.0, 0.0, 1.0, 1.0, kind="callable")
        det, _ = integrate_chain(ig, chain, spec, p)
        vals = np.where(inside, poly(box[:, :k1], box[:, k1:]), 0.0)
        mc = float(np.mean(vals))
        sigma = float(np.std(vals, ddof=1) / math.sqrt(n_mc))
        dev = abs(det - mc)
        margin = dev / (3.0 * sigma) if sigma > 0 else math.inf
        if worst is None or margin > worst[0]:
            worst = (margin, det, mc, sigma)
    margin, det, mc, sigma = worst
    tolerance = tol if tol is not None else max(3.0 * sigma / abs(mc), MC_FLOOR)
    return det, sigma, mc, tolerance, "worst of 20 random monomials"


def _fval_support_engine(p: ParamSet, budget: Budget, seed: int, tol: float | None):
    rng = np.random.default_rng(seed)
    k1, k2 = p.k1, p.k2
    cone = [(nu, nv) for nu, nv in cone_integer_parts(k1, k2, 6)]
    NU = np.array([nu for nu, _ in cone], float)
    NV = np.array([nv for _, nv in cone], float).reshape(len(cone), k2)
    in_vals = lattice_values(NU, NV, p, seed=seed)
    med = float(np.median(np.abs(in_vals[np.abs(in_vals) > 0])))
    npts = budget.points
    off = []
    while len(off) < npts:
        nu = tuple(int(x) for x in rng.integers(-4, 8, size=k1))
        nv = tuple(int(x) for x in rng.integers(-4, 8, size=k2))
        pt = LatticePoint(nu, nv, p.gamma)
        if not pt.in_cone:
            off.append((nu, nv))
    worst = 0.0
    for nu, nv in off:
        val = f_limit(LatticePoint(nu, nv, p.gamma), p, seed=seed)
        worst = max(worst, abs(val))
    return worst / med, 0.0, 0.0, (tol if tol is not None else 1e-8), \
        f"max off-cone {worst:.2e} vs median in-cone {med:.2e}, {npts} points"


def _pde_engine(p: ParamSet, budget: Budget, seed: int, tol: float | None):
    r1, r2 = pde_residual(p, step=budget.step, use_closed_form=False,
                          second_eq_denominator="z2",
                          rel_tol=budget.series_rel_tol,
                          max_bound=budget.max_bound, seed=seed)
    note = "second-equation denominator resolved to z2"
    if p.k2 >= 2:
        c1, alt = pde_residual(p, step=budget.step, use_closed_form=True,
                               second_eq_denominator="z1")
        note += f" (closed-form check: z1 variant residual {alt:.1e})"
    return max(r1, r2), 0.0, 0.0, (tol if tol is not None else 1e-6), note


def _stirling_engine(p: ParamSet, budget: Budget, seed: int, tol: float | None):
    x, c, d = 1000.0, 0.3, 0.0
    lhs = gamma_ratio(x, c, d).to_float()
    rhs = x ** (c - d)
    return lhs, 0.0, rhs, (tol if tol is not None else 1e-3), f"x={x}, c={c}, d={d}"


def _eps_link_engine(p: ParamSet, budget: Budget, seed: int, tol: float | None):
    ratio = eps_limit_ratio(p, budget.eps)
    return ratio, 0.0, 1.0, (tol if tol is not None else 5e-2), f"eps={budget.eps}"


def _limit_direction_engine(p: ParamSet, budget: Budget, seed: int, tol: float | None):
    rng = np.random.default_rng(seed)
    pts = [(nu, nv) for nu, nv in cone_integer_parts(p.k1, p.k2, 5)]
    rng.shuffle(pts)
    worst = 0.0
    for nu, nv in pts[:min(budget.points, 20)]:
        a, b = f_limit(LatticePoint(nu, nv, p.gamma), p, seed=seed,
                       force_probe=True, return_pair=True)
        scale = max(abs(a), abs(b))
        if scale > 1e-12:
            worst = max(worst, abs(a - b) / scale)
    return worst, 0.0, 0.0, (tol if tol is not None else 1e-6), \
        "max two-direction disagreement"


@dataclass(frozen=True)
class IdentityEntry:
    identity_id: str
    description: str
    predicate: str
    validate: object
    engine: object
    aggregate: bool  # rel_dev is the measured quantity itself


REGISTRY: dict[str, IdentityEntry] = {}


def _register(identity_id, description, predicate, validate, engine, aggregate=False):
    REGISTRY[identity_id] = IdentityEntry(identity_id, description, predicate,
                                          validate, engine, aggregate)


_register("selb", "k-dimensional beta-type integral over the ordered simplex "
          "vs gamma product", "alpha>0, beta>0, gamma above -min(1/k, alpha/(k-1), "
          "beta/(k-1)), gamma != 0", _v_selb,
          _quad_engine("selb", cf.selberg_rhs, "deterministic"))
_register("exp", "exponential-weight integral on the half-line vs gamma product",
          "alpha>0, gamma above convergence threshold, gamma != 0", _v_exp,
          _quad_engine("exp", cf.exp_selberg_rhs, "monte_carlo"))
_register("dexp", "one-block lattice-cone series vs gamma product",
          "alpha>0, z in (0,1), generic gamma", _v_dexp,
          _series_engine("dexp", cf.discrete_exp_rhs))
_register("dexp3", "two-block lattice-cone series vs gamma product",
          "alpha>0, z1,z2 in (0,1), gamma in (-0.5,0)", _v_dexp3,
          _series_engine("dexp3", cf.sl3_discrete_rhs))
_register("exp3", "two-block half-line chain integral vs gamma product",
          "alpha,beta1,beta2>0, gamma in (-0.5,0)", _v_sl3_cont,
          _quad_engine("exp3", cf.sl3_exp_rhs, "monte_carlo"))
_register("selb3", "two-block [0,1] chain integral with rational weight vs "
          "gamma product", "alpha,beta1,beta2>0, gamma in (-0.5,0)", _v_sl3_cont,
          _quad_engine("selb3", cf.sl3_selberg_rhs))
_register("selb30", "two-block [0,1] chain integral without rational weight vs "
          "gamma product", "alpha,beta1,beta2>0, gamma in (-0.5,0)", _v_sl3_cont,
          _quad_engine("selb30", cf.sl3_selberg0_rhs))
_register("aomoto", "moment integrals of the beta-type density vs shifted "
          "product forms", "as selb, k <= 6", _v_aomoto, _aomoto_engine)
_register("jjj_relations", "recursion-relation residuals of the solved "
          "end-point integral tables", "as selb3, k1+k2 <= 8", _v_recursion,
          _jjj_engine, aggregate=True)
_register("jjl_shift", "parameter-shift identity between table corners",
          "as selb3", _v_recursion, _jjl_engine, aggregate=True)
_register("j0k", "boundary closed forms of the recursion tables",
          "as selb3", _v_recursion, _j0k_engine, aggregate=True)
_register("chain_decomp", "domain decomposition of the interleaved cone on "
          "smooth test functions", "k1 >= k2 >= 0, k1+k2 <= 4", _v_decomp,
          _chain_decomp_engine)
_register("fval_support", "summand support: off-cone lattice values vanish",
          "as dexp3", _v_dexp3, _fval_support_engine, aggregate=True)
_register("pde_residual", "first-order system residuals of the truncated "
          "series in z1, z2", "as dexp3", _v_dexp3, _pde_engine, aggregate=True)
_register("stirling_ratio", "large-argument gamma ratio vs plain power",
          "none", _v_open, _stirling_engine)
_register("eps_limit_link", "rescaled discrete closed form approaches the "
          "continuous one", "as exp3", _v_sl3_cont, _eps_link_engine)
_register("limit_direction", "direction independence of lattice limit values",
          "as dexp3", _v_dexp3, _limit_direction_engine, aggregate=True)


def identity_ids() -> list[str]:
    return list(REGISTRY)


def run_identity(identity_id: str, p: ParamSet, budget: Budget | None = None,
                 seed: int = 20070920, tol: float | None = None) -> VerificationRecord:
    """Run one identity check and produce its record."""
    if identity_id not in REGISTRY:
        raise InvalidParamsError(f"unknown identity {identity_id!r}")
    entry = REGISTRY[identity_id]
    entry.validate(p)
    budget = budget or Budget()
    t0 = time.perf_counter()
    lhs, lhs_err, rhs, tolerance, note = entry.engine(p, budget, seed, tol)
    runtime_ms = int(1000 * (time.perf_counter() - t0))
    if entry.aggregate or rhs == 0.0:
        rel_dev = lhs if rhs == 0.0 else abs(lhs - rhs) / abs(rhs)
        err_rel = lhs_err
    else:
        rel_dev = abs(lhs - rhs) / abs(rhs)
        err_rel = lhs_err / abs(rhs)
    if 3.0 * err_rel <= tolerance * (1.0 + 1e-9):
        passed = rel_dev <= tolerance
    else:
        passed = False
        note = (note + "; " if note else "") + "insufficient precision"
    return VerificationRecord(identity_id, p, lhs, lhs_err, rhs, rel_dev,
                              tolerance, passed, seed, runtime_ms, note)


def run_grid(identity_id: str, grid, budget: Budget | None = None,
             seed: int = 20070920, tol: float | None = None) -> list[VerificationRecord]:
    """Run one identity over a list of parameter points."""
    records = []
    for i, p in enumerate(grid):
        records.append(run_identity(identity_id, p, budget=budget,
                                    seed=seed + i, tol=tol))
    return records
