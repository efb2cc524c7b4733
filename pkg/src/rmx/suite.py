"""Named, seeded residual checks over random parameter draws.

Draw ``d`` of suite ``s`` uses ``numpy.random.default_rng([seed, s, d])``, so
every report can be regenerated from its seed and index alone, and draws
can run concurrently without changing the results.
"""
from __future__ import annotations

import cmath
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Mapping, Optional

import numpy as np

from .errors import ConvergenceViolation, DomainError, PoleError
from .qproducts import ScalarParams, kappa
from .theta import DEFAULT_CONTROL
from .trig import (DegenerateParams, ordinary_path_sample, r_dy, r_q, reference_n2,
                   scaling_path_sample, scaling_phase)
from .twist import mt2_residual, twist_residual
from .znmatrix import (crossing_residual, s_full, sbar_sum, swap21, unitarity_residual,
                       ybe_residual)

log = logging.getLogger(__name__)

SUITES = ("ybe", "unitarity", "crossing", "mt2", "twist",
          "scaling_convergence", "ordinary_convergence", "goldens")

DEFAULT_TOLERANCES = {
    "ybe": 1e-9,
    "unitarity": 1e-8,
    "crossing": 1e-7,
    "mt2": 1e-9,
    "twist": 1e-10,
    "scaling_convergence": 1e-8,
    "ordinary_convergence": 1e-6,
    "goldens": 1e-12,
}

MAX_RETRIES = 10
# draws whose matrices exceed this max-norm sit too close to a pole
NEAR_POLE = 1e3


@dataclass
class CheckReport:
    check_name: str
    parameter_draw: dict
    residual: float
    tolerance: float
    passed: bool
    wall_time: float
    seed: int
    draw: int = 0
    retries: int = 0
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return _jsonable(asdict(self))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _c(rng, re, im):
    return complex(rng.uniform(*re), rng.uniform(*im))


def _v(rng, radius=0.5):
    r = radius * math.sqrt(rng.uniform())
    return cmath.rect(r, rng.uniform(0, 2 * math.pi))


def _w(rng):
    return _c(rng, (-0.3, 0.3), (0.2, 0.6))


def _tau(rng):
    return _c(rng, (-0.5, 0.5), (1.0, 3.0))


def _xi(rng):
    return rng.uniform(1.2, 3.0)


def _hbar(rng):
    return rng.uniform(0.5, 2.0)


def _beta(rng):
    return rng.uniform(-0.8, 0.8)


def _tame(f):
    """Wrap a matrix-valued function with the near-pole rejection guard."""
    def g(*args):
        R = f(*args)
        big = np.max(np.abs(R))
        if not np.isfinite(big) or big > NEAR_POLE:
            raise PoleError(f"matrix norm {big:.3e} exceeds near-pole bound")
        return R
    return g


# each check draws its parameters and returns (draw record, residual, details)

def _check_ybe(rng, n):
    w, tau, xi = _w(rng), _tau(rng), _xi(rng)
    v1, v2, v3 = _v(rng), _v(rng), _v(rng)
    beta = [_beta(rng) for _ in range(3)]
    hbar = _hbar(rng)
    sp = ScalarParams(n=n, w=w, tau=tau, xi=xi)
    kinds = {
        "sbar": (_tame(lambda u: sbar_sum(u * w, w, tau, n)), (v1, v2, v3)),
        "s_full": (_tame(lambda u: s_full(u, sp)), (v1, v2, v3)),
        "r_dy": (_tame(lambda b: r_dy(DegenerateParams(n, b, xi, hbar, False))), beta),
        "r_q": (_tame(lambda b: r_q(DegenerateParams(n, b, xi, hbar, False))), beta),
    }
    details = {k: ybe_residual(f, *u, n) for k, (f, u) in kinds.items()}
    draw = dict(n=n, w=w, tau=tau, xi=xi, hbar=hbar, v=[v1, v2, v3], beta=beta)
    return draw, max(details.values()), details


def _check_unitarity(rng, n):
    w, tau, xi, v = _w(rng), _tau(rng), _xi(rng), _v(rng)
    beta, hbar = _beta(rng), _hbar(rng)
    sp = ScalarParams(n=n, w=w, tau=tau, xi=xi)
    s_res = unitarity_residual(_tame(lambda u: s_full(u, sp)), v, n)
    dy = _tame(lambda b: r_dy(DegenerateParams(n, b, xi, hbar, True)))
    dy_res = unitarity_residual(dy, beta, n)
    draw = dict(n=n, w=w, tau=tau, xi=xi, v=v, beta=beta, hbar=hbar)
    return draw, max(s_res, dy_res), {"s_full": s_res, "r_dy": dy_res}


def _check_crossing(rng, n):
    w, xi, v = _w(rng), _xi(rng), _v(rng)
    sp = ScalarParams.on_shell(n, w, xi)
    res = crossing_residual(_tame(lambda u: s_full(u, sp)), v, n, n)
    return dict(n=n, w=w, tau=sp.tau, xi=xi, v=v), res, {}


def _check_mt2(rng, n):
    z, w, tau = 0.4 * _v(rng), _w(rng), _tau(rng)
    for pt in ((z, w, tau), (z / tau, w / tau, -1 / tau)):
        _tame(lambda: sbar_sum(*pt, n))()
    return dict(n=n, z=z, w=w, tau=tau), mt2_residual(z, w, tau, n), {}


def _check_twist(rng, n):
    p = DegenerateParams(n, _beta(rng), _xi(rng), _hbar(rng), include_kappa=False)
    _tame(lambda: r_dy(p))()
    _tame(lambda: r_q(p))()
    draw = dict(n=n, beta=p.beta, xi=p.xi, hbar=p.hbar)
    return draw, twist_residual(p), {}


_RANDOM_CHECKS: Dict[str, tuple] = {
    "ybe": (_check_ybe, lambda n: 20 if n == 2 else 5),
    "unitarity": (_check_unitarity, lambda n: 10),
    "crossing": (_check_crossing, lambda n: 10),
    "mt2": (_check_mt2, lambda n: 30),
    "twist": (_check_twist, lambda n: 30),
}

GOLDEN_BETAS = np.linspace(-0.8, 0.8, 20)
CONVERGENCE_PARAMS = dict(beta=0.3, xi=1.5, hbar=1.0)


def _run_draw(name, check, n, seed, index, tol):
    t0 = time.perf_counter()
    sid = SUITES.index(name)
    rng = np.random.default_rng([seed, sid, index])
    for attempt in range(MAX_RETRIES + 1):
        try:
            draw, residual, details = check(rng, n)
            break
        except PoleError as exc:
            log.info("%s draw %d hit a pole (%s); redrawing", name, index, exc)
    else:
        raise PoleError(f"{name} draw {index}: {MAX_RETRIES} redraws all hit poles")
    if attempt:
        log.info("%s draw %d needed %d redraws", name, index, attempt)
    return CheckReport(check_name=name, parameter_draw=draw, residual=residual,
                       tolerance=tol, passed=bool(residual <= tol),
                       wall_time=time.perf_counter() - t0, seed=seed, draw=index,
                       retries=attempt, details=details)


def _goldens(n, seed, tol):
    if n != 2:
        raise DomainError("goldens are defined only for n = 2")
    out = []
    for index, beta in enumerate(GOLDEN_BETAS):
        t0 = time.perf_counter()
        p = DegenerateParams(2, float(beta), 1.5, 1.0, include_kappa=True)
        e8 = float(np.max(np.abs(r_dy(p) - reference_n2("eight_vertex", p))))
        e6 = float(np.max(np.abs(r_q(p) - reference_n2("six_vertex", p))))
        res = max(e8, e6)
        out.append(CheckReport("goldens", dict(n=2, beta=float(beta), xi=1.5, hbar=1.0), res, tol,
                               bool(res <= tol), time.perf_counter() - t0, seed, index,
                               details={"eight_vertex": e8, "six_vertex": e6}))
    return out


def _strictly_decreasing(xs):
    return all(b < a for a, b in zip(xs, xs[1:]))


def convergence_table(kind: str, p: DegenerateParams, steps: int) -> List[dict]:
    """Distance of the bare elliptic matrix to its kappa-free limit along a path.

    ``scaling``: ``w = 0.5i * 2^-k``; rows also carry ``scalar_free_error``,
    the distance after dividing out :func:`rmx.trig.scaling_phase`.
    ``ordinary``: ``tau = 5i * 2^k``.
    """
    if steps < 2:
        raise DomainError(f"a convergence table needs at least 2 steps, got {steps}")
    q = DegenerateParams(p.n, p.beta, p.xi, p.hbar, include_kappa=False)
    rows = []
    if kind == "scaling":
        target = r_dy(q)
        path = [0.5j * 2.0 ** -k for k in range(steps)]
        for k, (w, S) in enumerate(scaling_path_sample(q, path)):
            rows.append(dict(step=k, point=w,
                             error=float(np.max(np.abs(S - target))),
                             scalar_free_error=float(np.max(np.abs(S / scaling_phase(q, w) - target)))))
    elif kind == "ordinary":
        target = r_q(q)
        path = [5j * 2.0 ** k for k in range(steps)]
        for k, (tau, S) in enumerate(ordinary_path_sample(q, path)):
            rows.append(dict(step=k, point=tau, error=float(np.max(np.abs(S - target)))))
    else:
        raise DomainError(f"unknown scan kind {kind!r}")
    errors = [r["error"] for r in rows]
    if not _strictly_decreasing(errors):
        raise ConvergenceViolation(f"{kind} errors not strictly decreasing: {errors}")
    return rows


def _convergence(name, n, seed, tol):
    t0 = time.perf_counter()
    kind, steps = ("scaling", 4) if name == "scaling_convergence" else ("ordinary", 3)
    p = DegenerateParams(n, include_kappa=False, **CONVERGENCE_PARAMS)
    details = {}
    try:
        rows = convergence_table(kind, p, steps)
        residual = rows[-1]["scalar_free_error" if kind == "scaling" else "error"]
        monotone = True
        if kind == "scaling":
            monotone = _strictly_decreasing([r["scalar_free_error"] for r in rows])
            details["bare_final_error"] = rows[-1]["error"]
        details["rows"] = rows
    except ConvergenceViolation as exc:
        residual, monotone = math.inf, False
        details["violation"] = str(exc)
    return [CheckReport(name, dict(n=n, **CONVERGENCE_PARAMS, steps=steps), residual, tol,
                        bool(monotone and residual <= tol), time.perf_counter() - t0, seed,
                        details=details)]


def run_suite(suite: str, n: int, seed: int = 0,
              tol_overrides: Optional[Mapping[str, float]] = None,
              workers: int = 1) -> List[CheckReport]:
    """Run one suite (or ``"all"``) and return its reports in draw order.

    ``all`` skips ``goldens`` when ``n != 2``. Runtime of ``ybe`` grows like
    n^6 per draw from the n^3 x n^3 products.
    """
    if int(n) != n or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n}")
    tols = dict(DEFAULT_TOLERANCES)
    for k, v in (tol_overrides or {}).items():
        if k not in tols:
            raise DomainError(f"unknown tolerance name {k!r}")
        tols[k] = float(v)
    if suite == "all":
        names = [s for s in SUITES if s != "goldens" or n == 2]
    elif suite in SUITES:
        names = [suite]
    else:
        raise DomainError(f"unknown suite {suite!r}")
    reports: List[CheckReport] = []
    for name in names:
        tol = tols[name]
        if name == "goldens":
            reports += _goldens(n, seed, tol)
        elif name in ("scaling_convergence", "ordinary_convergence"):
            reports += _convergence(name, n, seed, tol)
        else:
            check, count = _RANDOM_CHECKS[name]
            jobs = range(count(n))
            if workers > 1:
                with ThreadPoolExecutor(max_workers=workers) as ex:
                    reports += list(ex.map(lambda d: _run_draw(name, check, n, seed, d, tol), jobs))
            else:
                reports += [_run_draw(name, check, n, seed, d, tol) for d in jobs]
    return reports
