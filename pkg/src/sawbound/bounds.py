"""From a sub-ballisticity rate to an upper bound on the number of walks.

The chain is

    phi  ->  Phi(eps) = inf_{eps <= t <= 1} phi(t) / t
         ->  psi(eps) = sup{lam >= 1 : eps <= 1 - exp(-Phi(1/lam) / (lam - 1))}
         ->  Psi(n)   = inf_eps  2 / (1 - (1 - eps)**psi(eps)) - (n + 1) log(1 - eps)

and then ``c_n <= exp(Psi(n) - 2) * mu_c**(n + 1)``. Every step is realised
conservatively: ``psi`` returns a certified member of its defining set and
``Psi`` is minimised over a finite set of ``eps``, so each number produced is
still a valid bound.
"""

from __future__ import annotations

import bisect
import functools
import json
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, NamedTuple, Optional, Sequence, Union

import numpy as np

from . import interval as iv
from .census import Census
from .interval import EvalValue

Number = Union[float, Fraction]

PSI_LAMBDA_CAP = 2.0 ** 60
PSI_BISECTION_STEPS = 80
LINEAR_GRID = tuple(k / 1024 for k in range(1, 1024))
# the optimal eps for large n sits far below 1/1024, so add a geometric tail
GEOMETRIC_GRID = tuple(2.0 ** (-j / 8) for j in range(81, 8 * 60 + 1))
REFINE_ROUNDS = 3
REFINE_POINTS = 16
# subtracted from empirical rates so their self-certificate survives outward rounding
EMPIRICAL_MARGIN = 1e-12


class DomainError(ValueError):
    """A tabulated rate function was queried below its validity range."""


class InsufficientDataError(ValueError):
    pass


@dataclass(frozen=True)
class PhiModel:
    """A nondecreasing rate function on (0, 1].

    ``kind`` is ``"zero"``, ``"power_law"`` (``C * eps**nu``) or
    ``"tabulated"``. A tabulated model is the step function that takes the
    value of the largest breakpoint ``<= eps``; it is undefined below its
    first breakpoint.
    """

    kind: str
    C: float = 0.0
    nu: float = 0.0
    breakpoints: tuple[tuple[Fraction, float], ...] = ()

    def __post_init__(self):
        if self.kind == "zero":
            return
        if self.kind == "power_law":
            if not (self.C > 0 and math.isfinite(self.C)):
                raise ValueError("power law needs C > 0")
            if not self.nu > 1:
                raise ValueError("power law needs nu > 1")
            return
        if self.kind != "tabulated":
            raise ValueError(f"unknown phi kind {self.kind!r}")
        pts = tuple((Fraction(e), float(p)) for e, p in self.breakpoints)
        if not pts:
            raise ValueError("tabulated phi needs at least one breakpoint")
        eps = [e for e, _ in pts]
        vals = [p for _, p in pts]
        if any(not 0 < e <= 1 for e in eps):
            raise ValueError("breakpoints must lie in (0, 1]")
        if any(a >= b for a, b in zip(eps, eps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(p < 0 or math.isnan(p) for p in vals):
            raise ValueError("phi values must be nonnegative")
        if any(a > b for a, b in zip(vals, vals[1:])):
            raise ValueError("tabulated phi must be nondecreasing (see monotonize_phi)")
        object.__setattr__(self, "breakpoints", pts)

    def __hash__(self):
        # models are cache keys in the psi search; hashing Fractions is slow
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.kind, self.C, self.nu, self.breakpoints))
            object.__setattr__(self, "_hash", h)
        return h

    @classmethod
    def zero(cls) -> PhiModel:
        return cls("zero")

    @classmethod
    def power_law(cls, C: float, nu: float) -> PhiModel:
        return cls("power_law", C=float(C), nu=float(nu))

    @classmethod
    def tabulated(cls, breakpoints: Iterable[tuple[Number, float]]) -> PhiModel:
        return cls("tabulated", breakpoints=tuple(breakpoints))

    @property
    def eps_min(self) -> Number:
        return self.breakpoints[0][0] if self.kind == "tabulated" else 0.0

    def _index(self, eps) -> int:
        keys = [e for e, _ in self.breakpoints]
        i = bisect.bisect_right(keys, eps) - 1
        if i < 0:
            raise DomainError(f"tabulated phi is undefined at eps={eps} < {keys[0]}")
        return i

    def __call__(self, eps: Number) -> float:
        if not 0 < eps <= 1:
            raise DomainError(f"phi is defined on (0, 1], got {eps}")
        if self.kind == "zero":
            return 0.0
        if self.kind == "power_law":
            return self.C * float(eps) ** self.nu
        return self.breakpoints[self._index(eps)][1]

    def enclose(self, eps: Number) -> EvalValue:
        """Enclosure of ``phi(eps)``."""
        if self.kind == "power_law":
            if not 0 < eps <= 1:
                raise DomainError(f"phi is defined on (0, 1], got {eps}")
            return iv.power(EvalValue.exact(eps), self.nu) * self.C
        # stored floats are exact binary rationals
        return EvalValue.exact(Fraction(self(eps)))


# --- serialisation ----------------------------------------------------------


def phi_to_dict(phi: PhiModel) -> dict:
    if phi.kind == "zero":
        return {"kind": "zero"}
    if phi.kind == "power_law":
        return {"kind": "power_law", "C": repr(phi.C), "nu": repr(phi.nu)}
    return {"kind": "tabulated",
            "breakpoints": [[str(e), repr(p)] for e, p in phi.breakpoints]}


def phi_from_dict(doc: dict) -> PhiModel:
    kind = doc.get("kind")
    if kind == "zero":
        return PhiModel.zero()
    if kind == "power_law":
        return PhiModel.power_law(float(doc["C"]), float(doc["nu"]))
    if kind == "tabulated":
        return PhiModel.tabulated((Fraction(e), float(p)) for e, p in doc["breakpoints"])
    raise ValueError(f"unknown phi kind {kind!r}")


def save_phi(phi: PhiModel, path) -> None:
    Path(path).write_text(json.dumps(phi_to_dict(phi), indent=1) + "\n", encoding="utf-8")


def load_phi(path) -> PhiModel:
    return phi_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


# --- phi -> Phi -> psi ------------------------------------------------------


def monotonize_phi(raw: Union[PhiModel, Sequence[tuple[Number, float]]]) -> PhiModel:
    """Replace ``raw`` by ``eps -> sup{raw(t) : t <= eps}``.

    ``raw`` is a model or a table of ``(eps, value)`` pairs in any order. The
    result is nondecreasing and dominated by ``raw`` wherever ``raw`` is.
    """
    if isinstance(raw, PhiModel):
        if raw.kind != "tabulated":
            return raw
        pairs = list(raw.breakpoints)
    else:
        pairs = sorted((Fraction(e), float(p)) for e, p in raw)
    if not pairs:
        raise ValueError("empty table")
    if all(p == 0 for _, p in pairs):
        return PhiModel.zero()
    out, best = [], 0.0
    for e, p in pairs:
        if p < 0:
            raise ValueError("phi values must be nonnegative")
        best = max(best, p)
        if out and out[-1][0] == e:
            out[-1] = (e, best)
        else:
            out.append((e, best))
    return PhiModel.tabulated(out)


def _capital_phi_enclosure(phi: PhiModel, eps: Number) -> EvalValue:
    if not 0 < eps <= 1:
        raise DomainError(f"Phi is defined on (0, 1], got {eps}")
    if phi.kind == "zero":
        return EvalValue.exact(0)
    if phi.kind == "power_law":
        # t**(nu-1) is increasing, so the infimum sits at t = eps
        return iv.power(EvalValue.exact(eps), phi.nu - 1) * phi.C
    i = phi._index(eps)
    pts = phi.breakpoints
    # phi is constant on [e_i, e_{i+1}) so phi(t)/t decreases towards the right end
    cands = [EvalValue.exact(pts[j][1]) / pts[j + 1][0] for j in range(i, len(pts) - 1)]
    cands.append(EvalValue.exact(pts[-1][1]))
    return EvalValue(min(c.lower for c in cands), min(c.upper for c in cands))


def capital_phi(phi: PhiModel, eps: Number) -> float:
    """``inf_{eps <= t <= 1} phi(t) / t``."""
    if phi.kind == "power_law":
        return phi.C * float(eps) ** (phi.nu - 1)
    enc = _capital_phi_enclosure(phi, eps)
    return float(enc.upper) if enc.is_exact else float(enc.lower)


def _dn(x: float, k: int) -> float:
    for _ in range(k):
        x = math.nextafter(x, -math.inf)
    return x


def _up(x: float, k: int) -> float:
    for _ in range(k):
        x = math.nextafter(x, math.inf)
    return x


@functools.lru_cache(maxsize=64)
def _segment_ratios(phi: PhiModel) -> tuple[list[float], list[float]]:
    """Breakpoints rounded up, and suffix minima of lower bounds on ``phi_j / e_{j+1}``."""
    pts = phi.breakpoints
    lows = [float((EvalValue.exact(pts[j][1]) / pts[j + 1][0]).lower) for j in range(len(pts) - 1)]
    lows.append(pts[-1][1])
    for j in range(len(lows) - 2, -1, -1):
        lows[j] = min(lows[j], lows[j + 1])
    return [iv.up(e) for e, _ in pts], lows


def _capital_phi_lower(phi: PhiModel, inv_lam: float, lam: float) -> float:
    """Lower bound on ``Phi(inv_lam)``; below a table's range it is 0, which
    only ever shrinks psi."""
    if phi.kind == "power_law":
        # Phi(1/lam) = C * lam**(1 - nu)
        return _dn(phi.C * _dn(lam ** (1.0 - phi.nu), 2), 1)
    keys, lows = _segment_ratios(phi)
    # keys are rounded up, so a hit is always a true breakpoint <= inv_lam
    i = bisect.bisect_right(keys, inv_lam) - 1
    return lows[i] if i >= 0 else 0.0


def _g_lower(phi: PhiModel, lam: float) -> float:
    """Lower bound on ``1 - exp(-Phi(1/lam) / (lam - 1))`` for ``lam > 1``."""
    inv_lam = _dn(1.0 / lam, 1)
    big_phi = _capital_phi_lower(phi, inv_lam, lam)
    x = _dn(big_phi / _up(lam - 1.0, 1), 1)
    return max(0.0, _dn(-math.expm1(-x), iv.pad_ulps()))


def _psi_cap(phi: PhiModel) -> float:
    if phi.kind == "tabulated":
        return min(PSI_LAMBDA_CAP, iv.down(1 / Fraction(phi.eps_min)))
    return PSI_LAMBDA_CAP


@functools.lru_cache(maxsize=1 << 16)
def _psi_cached(phi: PhiModel, eps: float, ulps: int) -> float:
    if phi.kind == "zero" or _capital_phi_enclosure(phi, 1).upper == 0:
        return 1.0
    cap = _psi_cap(phi)
    if cap <= 1:
        return 1.0
    lo, hi = 1.0, min(2.0, cap)
    while _g_lower(phi, hi) >= eps:
        lo = hi
        if hi >= cap:
            return lo
        hi = min(2 * hi, cap)
    for _ in range(PSI_BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _g_lower(phi, mid) >= eps:
            lo = mid
        else:
            hi = mid
    return lo


def psi(phi: PhiModel, eps: float) -> float:
    """A certified member of ``{lam >= 1 : eps <= g(lam)}``, close to its supremum.

    ``g(lam) = 1 - exp(-Phi(1/lam) / (lam - 1))`` is nonincreasing, so the set
    is an interval starting at 1; ``lam = 1`` is always admitted, which makes
    the zero rate return exactly 1.
    """
    eps = float(eps)
    if not 0 < eps < 1:
        raise ValueError(f"psi needs 0 < eps < 1, got {eps}")
    return _psi_cached(phi, eps, iv.pad_ulps())


def bridge_genfun_upper(phi: PhiModel, eps: float) -> float:
    """Upper bound ``1 / (1 - (1 - eps)**psi(eps))`` on ``B((1 - eps) z_c)``."""
    lam = psi(phi, eps)
    if lam == 1.0:
        return 1.0 / eps
    return -1.0 / math.expm1(lam * math.log1p(-eps))


def bridge_genfun_upper_enclosure(phi: PhiModel, eps: float) -> EvalValue:
    lam = psi(phi, eps)
    if lam == 1.0:
        return 1 / EvalValue.exact(eps)
    return 1 / -iv.expm1(iv.log1m(eps) * lam)


def xi_lower_from_phi(phi: PhiModel, eps: float, lam: float) -> float:
    """``min(-lam log(1 - eps), -log(1 - eps) + Phi(1/lam))``, a lower bound on
    the height rate of bridges at ``(1 - eps) z_c``."""
    if not 0 < eps < 1:
        raise ValueError("need 0 < eps < 1")
    if lam < 1:
        raise ValueError("need lam >= 1")
    step = -math.log1p(-eps)
    return min(lam * step, step + capital_phi(phi, 1 / lam))


# --- Psi and the bounds on c_n ----------------------------------------------


def _objective(lam: float, eps: float, n: int) -> float:
    lg = math.log1p(-eps)
    if lam == 1.0:
        first = 2.0 / eps
    else:
        first = -2.0 / math.expm1(lam * lg)
    return first - (n + 1) * lg


def objective_enclosure(phi: PhiModel, eps: float, n: int) -> EvalValue:
    """Enclosure of ``2 / (1 - (1 - eps)**psi(eps)) - (n + 1) log(1 - eps)``."""
    return 2 * bridge_genfun_upper_enclosure(phi, eps) - iv.log1m(eps) * (n + 1)


def _base_grid(n: int) -> list[float]:
    pts = set(LINEAR_GRID) | set(GEOMETRIC_GRID)
    if n > 2:
        pts.add(math.sqrt(2 / n))
    return sorted(pts)


def big_psi(phi: PhiModel, n: int) -> tuple[float, float]:
    """Grid minimum of the ``Psi(n)`` objective and the ``eps`` achieving it.

    The grid is ``k/1024`` plus a geometric sequence down to ``2**-60`` plus
    ``sqrt(2/n)``, followed by a few rounds of local refinement around the
    best point. No unimodality is assumed: any ``eps`` yields a valid bound,
    so the minimum found is never below the true infimum.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    grid = _base_grid(n)
    vals = [_objective(psi(phi, e), e, n) for e in grid]
    i = int(np.argmin(vals))
    best_val, best_eps = vals[i], grid[i]
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    for _ in range(REFINE_ROUNDS):
        pts = np.linspace(lo, hi, REFINE_POINTS + 2)[1:-1]
        local = [(float(_objective(psi(phi, float(e)), float(e), n)), float(e)) for e in pts]
        v, e = min(local)
        k = int(np.searchsorted(pts, e))
        if v < best_val:
            best_val, best_eps = v, e
        lo = float(pts[k - 1]) if k > 0 else lo
        hi = float(pts[k + 1]) if k + 1 < len(pts) else hi
    return best_val, best_eps


def hw_explicit_log_bound(n: int) -> float:
    """``sqrt(2n) - 2 - (n + 1) log(1 - sqrt(2/n))``.

    With ``eps = sqrt(2/n)`` in the classical argument this gives
    ``c_n <= exp(result) * mu_c**(n + 1)``.
    """
    if n <= 2:
        raise ValueError("the explicit bound needs n > 2")
    return math.sqrt(2 * n) - 2 - (n + 1) * math.log1p(-math.sqrt(2 / n))


def hw_explicit_enclosure(n: int) -> EvalValue:
    if n <= 2:
        raise ValueError("the explicit bound needs n > 2")
    return iv.sqrt(2 * n) - 2 - iv.log1m(iv.sqrt(Fraction(2, n))) * (n + 1)


@dataclass(frozen=True)
class BoundRow:
    n: int
    hw_log: float
    quant_log: float
    eps_classic: Optional[float]
    eps_quant: float
    mu_high_used: Optional[float] = None


def quant_log_bound(phi: PhiModel, n: int, mu_high: Optional[float] = None) -> BoundRow:
    value, eps = big_psi(phi, n)
    if n > 2:
        hw, eps_c = hw_explicit_log_bound(n), math.sqrt(2 / n)
    else:
        hw, eps_c = math.inf, None
    return BoundRow(n=n, hw_log=hw, quant_log=value - 2, eps_classic=eps_c,
                    eps_quant=eps, mu_high_used=mu_high)


def corollary_alpha(nu: float) -> tuple[float, float]:
    """Optimal scale ``eps = n**-alpha`` and the resulting exponent of ``n`` for
    ``phi = C eps**nu``."""
    if not nu > 1:
        raise ValueError("nu must exceed 1")
    if math.isinf(nu):
        return 0.5, 0.5
    return nu / (2 * nu - 1), (nu - 1) / (2 * nu - 1)


# --- empirical rate -----------------------------------------------------------


def empirical_rates(census: Census, n_min: int = 1) -> dict[tuple[int, int], float]:
    """``-(1/n) log(A(n, m) / b_n)`` for all ``1 <= m <= n``, ``n_min <= n <= N``, rounded down.

    ``A(n, m)`` counts length-``n`` bridges reaching height ``>= m``. Pairs
    with ``A = 0`` get ``inf``.
    """
    out = {}
    for n in range(max(1, n_min), census.N + 1):
        bn = census.b[n]
        for m in range(1, n + 1):
            a = census.reach(n, m)
            if a == 0:
                out[(n, m)] = math.inf
            elif a == bn:
                out[(n, m)] = 0.0
            else:
                r = float((iv.log(Fraction(bn, a)) / n).lower)
                out[(n, m)] = max(0.0, r - EMPIRICAL_MARGIN * max(1.0, r))
    return out


def phi_empirical(census: Census, n_min: int = 1) -> PhiModel:
    """Tabulated rate certified on the census: at ``eps`` it is the smallest
    empirical rate over pairs with ``m / n >= eps``.

    With the default ``n_min = 1`` the pair ``(1, 1)`` has ``A = b_1`` and
    forces the table to be identically zero. A larger ``n_min`` drops short
    walks and gives a rate certified only for lengths ``n >= n_min``.
    """
    if census.N < 1:
        raise ValueError("phi_empirical needs N >= 1")
    if not 1 <= n_min <= census.N:
        raise ValueError(f"n_min must lie in 1..{census.N}")
    rates = empirical_rates(census, n_min)
    by_ratio: dict[Fraction, float] = {}
    for (n, m), r in rates.items():
        key = Fraction(m, n)
        by_ratio[key] = min(by_ratio.get(key, math.inf), r)
    keys = sorted(by_ratio)
    table = []
    best = math.inf
    for key in reversed(keys):
        best = min(best, by_ratio[key])
        table.append((key, best))
    table.reverse()
    return PhiModel.tabulated(table)


class PowerLawFit(NamedTuple):
    C: float
    nu: float
    residual: float
    note: str = "extrapolation, not a certificate"


def fit_power_law(phi: PhiModel) -> PowerLawFit:
    """Least-squares fit of ``log phi`` against ``log eps`` over positive breakpoints."""
    if phi.kind != "tabulated":
        raise ValueError("fit_power_law needs a tabulated model")
    pts = [(float(e), p) for e, p in phi.breakpoints if p > 0 and math.isfinite(p)]
    if len(pts) < 3:
        raise InsufficientDataError(f"need at least 3 positive breakpoints, got {len(pts)}")
    x = np.log([e for e, _ in pts])
    y = np.log([p for _, p in pts])
    A = np.vstack([x, np.ones_like(x)]).T
    (nu, logc), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = float(np.sqrt(np.mean((A @ np.array([nu, logc]) - y) ** 2)))
    if nu <= 1:
        warnings.warn(f"fitted nu = {nu:.4g} <= 1; such exponents cannot occur for a valid rate",
                      RuntimeWarning, stacklevel=2)
    return PowerLawFit(float(math.exp(logc)), float(nu), resid)
