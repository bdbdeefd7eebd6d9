"""Inequality harness.

Each check compares two enclosures and returns a three-valued
:class:`Verdict`. Whenever one side involves the unknown critical point, the
check uses a weaker statement that still has to hold: ``z_c`` is replaced by
``1/mu_high`` (a lower bound) or ``1/mu_low`` (an upper bound), and infinite
series by their partial sums (lower bounds) or by partial sums plus a
geometric tail (upper bounds).
"""

from __future__ import annotations

import datetime as _dt
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Optional

from . import __version__
from . import interval as iv
from .bounds import (PhiModel, big_psi, bridge_genfun_upper_enclosure, hw_explicit_enclosure,
                     objective_enclosure, phi_empirical, phi_to_dict, psi)
from .census import Census, census_checksum, enumerate_census, oracle_census
from .genfun import (MuBracket, B_tail_exact, a_exact, chi_exact, exp_bridge_coeffs,
                     mu_bracket)
from .interval import EvalValue

HOLDS, FAILS, INCONCLUSIVE = "holds", "fails", "inconclusive"
DEFAULT_EPS_GRID = (0.05, 0.1, 0.25, 0.5, 0.75, 0.9)


@dataclass(frozen=True)
class Verdict:
    """Outcome of ``lhs <= rhs``; ``fails`` only if the enclosures are disjoint the wrong way."""

    status: str
    subject: str
    parameters: dict = field(default_factory=dict)
    lhs: Optional[EvalValue] = None
    rhs: Optional[EvalValue] = None
    message: str = ""
    check: str = ""


def _verdict(subject, lhs, rhs, **params) -> Verdict:
    lhs, rhs = EvalValue.of(lhs), EvalValue.of(rhs)
    return Verdict(iv.compare_le(lhs, rhs), subject, params, lhs, rhs)


def _aggregate(subject: str, cases: Iterable[tuple[dict, EvalValue, EvalValue]]) -> Verdict:
    """Fold many ``lhs <= rhs`` cases into one verdict.

    The evidence kept is the first failing case, else the first inconclusive
    one, else the tightest case (largest ``lhs / rhs``).
    """
    count = 0
    first = {FAILS: None, INCONCLUSIVE: None}
    tightest, tight_ratio = None, None
    for params, lhs, rhs in cases:
        lhs, rhs = EvalValue.of(lhs), EvalValue.of(rhs)
        count += 1
        status = iv.compare_le(lhs, rhs)
        if status != HOLDS:
            if first[status] is None:
                first[status] = (params, lhs, rhs)
            continue
        ratio = Fraction(lhs.upper) / Fraction(rhs.lower) if rhs.lower > 0 else math.inf
        if tight_ratio is None or ratio > tight_ratio:
            tightest, tight_ratio = (params, lhs, rhs), ratio
    for status in (FAILS, INCONCLUSIVE):
        if first[status] is not None:
            params, lhs, rhs = first[status]
            return Verdict(status, subject, {"cases": count, **params}, lhs, rhs)
    if tightest is None:
        return Verdict(HOLDS, subject, {"cases": 0}, message="vacuous")
    params, lhs, rhs = tightest
    return Verdict(HOLDS, subject, {"cases": count, **params}, lhs, rhs)


def _vacuous(subject: str, why: str) -> Verdict:
    return Verdict(HOLDS, subject, {"cases": 0}, message=why)


# --- individual checks ------------------------------------------------------


def check_census_invariants(census: Census) -> list[Verdict]:
    problems = census.problems()
    if problems:
        return [Verdict(FAILS, "census.invariants", {"violations": len(problems)},
                        message="; ".join(problems[:5]))]
    return [Verdict(HOLDS, "census.invariants", {"N": census.N})]


def check_census_recount(census: Census, max_n: Optional[int] = None, oracle_max_n: int = 6,
                         workers: int = 1) -> list[Verdict]:
    """Compare the census against a fresh enumeration and the brute-force oracle."""
    out = []
    n_re = census.N if max_n is None else min(census.N, max_n)
    fresh = enumerate_census(census.d, n_re, workers=workers)
    out.append(_equality_verdict("census.recount", census.truncated(n_re), fresh))
    n_or = min(census.N, oracle_max_n)
    out.append(_equality_verdict("census.oracle", census.truncated(n_or), oracle_census(census.d, n_or)))
    return out


def _equality_verdict(subject, got: Census, want: Census) -> Verdict:
    for name in ("c", "b"):
        for n, (x, y) in enumerate(zip(getattr(got, name), getattr(want, name))):
            if x != y:
                return Verdict(FAILS, subject, {"N": got.N, "field": name, "n": n},
                               EvalValue.exact(x), EvalValue.exact(y),
                               message=f"{name}[{n}] = {x}, expected {y}")
    if got.bridge_by_height != want.bridge_by_height:
        return Verdict(FAILS, subject, {"N": got.N, "field": "bridge_by_height"},
                       message="height-resolved bridge counts differ")
    return Verdict(HOLDS, subject, {"N": got.N})


def check_counting_laws(census: Census) -> list[Verdict]:
    """Exact checks of c_{n+m} <= c_n c_m, b_n b_m <= b_{n+m} and the
    height-resolved concatenation inequality."""
    N, c, b, bh = census.N, census.c, census.b, census.bridge_by_height

    def sub():
        for n in range(1, N + 1):
            for m in range(n, N + 1 - n):
                yield {"n": n, "m": m}, c[n + m], c[n] * c[m]

    def sup():
        for n in range(1, N + 1):
            for m in range(n, N + 1 - n):
                yield {"n": n, "m": m}, b[n] * b[m], b[n + m]

    def heights():
        # bridges to height h1 and h2 concatenate injectively into bridges to h1 + h2
        for h1 in range(1, N + 1):
            for h2 in range(h1, N + 1 - h1):
                for k in range(h1 + h2, N + 1):
                    conv = 0
                    for i in range(h1, k - h2 + 1):
                        conv += bh[i][h1] * bh[k - i][h2]
                    yield {"k": k, "h1": h1, "h2": h2}, conv, bh[k][h1 + h2]

    return [_aggregate("counting.submultiplicative_c", sub()),
            _aggregate("counting.supermultiplicative_b", sup()),
            _aggregate("counting.height_concatenation", heights())]


def check_lemma_xizc(census: Census, bracket: Optional[MuBracket], z=None) -> Verdict:
    """a_trunc(1/mu_high, n) <= 1 for 1 <= n <= N, exactly.

    Only ``z = 1/mu_high`` is accepted: it is below the critical point, where
    ``a(z; n) <= 1`` is guaranteed.
    """
    if bracket is None:
        return _vacuous("bridge_height.a_at_critical", "N < 1")
    z_low = bracket.z_low
    if z is not None and Fraction(z) != z_low:
        raise ValueError("this check is only valid at z = 1/mu_high")
    cases = (({"n": n, "z": float(z_low)}, a_exact(census, z_low, n), 1)
             for n in range(1, census.N + 1))
    return _aggregate("bridge_height.a_at_critical", cases)


def default_z_grid(bracket: MuBracket) -> list[Fraction]:
    top = math.ceil(bracket.mu_high)
    return [Fraction(k, 8 * top) for k in range(1, 8)]


def check_madras_slade(census: Census, bracket: Optional[MuBracket],
                       z_grid: Optional[Iterable] = None) -> list[Verdict]:
    """chi(z) <= exp(2 B(z) - 2) / z, coefficient-wise and at points of a z-grid."""
    out = []
    e = exp_bridge_coeffs(census)
    for n in range(census.N):
        out.append(_verdict("madras_slade.coefficient", census.c[n], e[n + 1], n=n))
    if bracket is None:
        out.append(_vacuous("madras_slade.evaluation", "N < 1"))
        return out
    zs = default_z_grid(bracket) if z_grid is None else [Fraction(z) for z in z_grid]
    for z in zs:
        if z <= 0:
            raise ValueError("z-grid points must be positive")
        b_up = B_tail_exact(census, z, bracket.mu_high)
        rhs = iv.exp(2 * EvalValue.exact(b_up) - 2) / z
        out.append(_verdict("madras_slade.evaluation", chi_exact(census, z), rhs, z=str(z)))
    return out


def check_hw_explicit(census: Census, bracket: Optional[MuBracket],
                      phi: Optional[PhiModel] = None) -> list[Verdict]:
    """c_n <= mu_high^(n+1) exp(hw(n)) for 3 <= n <= N; with ``phi`` also
    c_n <= mu_high^(n+1) exp(Psi(n) - 2) for 0 <= n <= N."""
    out = []
    if bracket is None:
        return [_vacuous("hammersley_welsh.explicit", "N < 1")]
    log_mu = iv.log(bracket.mu_high)
    for n in range(3, census.N + 1):
        rhs = iv.exp(hw_explicit_enclosure(n) + log_mu * (n + 1))
        out.append(_verdict("hammersley_welsh.explicit", census.c[n], rhs, n=n))
    if phi is not None:
        for n in range(census.N + 1):
            _, eps = big_psi(phi, n)
            rhs = iv.exp(objective_enclosure(phi, eps, n) - 2 + log_mu * (n + 1))
            out.append(_verdict("quantitative.psi_bound", census.c[n], rhs, n=n, eps=eps,
                                psi=psi(phi, eps)))
    return out


def check_dch_form(census: Census, phi: PhiModel, n_min: int = 1) -> Verdict:
    """A(n, m) <= b_n exp(-phi(m/n) n) for every 1 <= m <= n, n_min <= n <= N."""
    def cases():
        for n in range(max(1, n_min), census.N + 1):
            for m in range(1, n + 1):
                rate = phi.enclose(Fraction(m, n))
                rhs = iv.exp(-rate * n) * census.b[n]
                yield {"n": n, "m": m}, census.reach(n, m), rhs
    return _aggregate("sub_ballistic.rate_form", cases())


def bridge_genfun_lower_estimate(eps, z) -> EvalValue:
    """Enclosure of ``1 + log((1 - eps) z) / 2 + log(1 / eps) / 2``."""
    one_m = 1 - Fraction(eps)
    return 1 + iv.log(one_m * Fraction(z)) / 2 + iv.log(1 / Fraction(eps)) / 2


def check_remark_B_lower(census: Census, bracket: Optional[MuBracket], phi: PhiModel,
                         eps_grid: Optional[Iterable[float]] = None) -> list[Verdict]:
    """Lower bound on B((1 - eps) z_c) against the two available upper bounds.

    The tail bound at ``(1 - eps)/mu_low`` (which dominates ``(1 - eps) z_c``)
    is only usable when ``(1 - eps) mu_high / mu_low < 1``; otherwise the
    verdict is inconclusive.
    """
    if bracket is None:
        return [_vacuous("bridge_genfun.lower_estimate", "N < 1")]
    out = []
    for eps in (DEFAULT_EPS_GRID if eps_grid is None else eps_grid):
        eps = float(eps)
        if not 0 < eps < 1:
            raise ValueError("eps-grid points must lie in (0, 1)")
        z_up = (1 - Fraction(eps)) / Fraction(bracket.mu_low)
        if z_up * Fraction(bracket.mu_high) >= 1:
            out.append(Verdict(INCONCLUSIVE, "bridge_genfun.lower_estimate", {"eps": eps},
                               message="mu bracket too loose for the tail bound"))
            continue
        lower = bridge_genfun_lower_estimate(eps, bracket.z_low)
        tail = EvalValue.exact(B_tail_exact(census, z_up, bracket.mu_high))
        rem = bridge_genfun_upper_enclosure(phi, eps)
        upper = EvalValue(min(tail.lower, rem.lower), min(tail.upper, rem.upper))
        out.append(_verdict("bridge_genfun.lower_estimate", lower, upper, eps=eps))
    return out


# --- orchestration ------------------------------------------------------------


@dataclass(frozen=True)
class VerifyConfig:
    z_grid: Optional[tuple] = None
    eps_grid: tuple = DEFAULT_EPS_GRID
    pad_ulps: int = iv.DEFAULT_PAD_ULPS
    recount: bool = True
    recount_max_n: Optional[int] = None
    oracle_max_n: int = 6
    workers: int = 1
    # lengths below this are excluded from the rate-form check (see phi_empirical)
    phi_n_min: int = 1

    def __post_init__(self):
        if self.pad_ulps < 1:
            raise ValueError("pad_ulps must be >= 1")
        if self.oracle_max_n < 0:
            raise ValueError("oracle_max_n must be >= 0")
        if self.phi_n_min < 1:
            raise ValueError("phi_n_min must be >= 1")


@dataclass
class Report:
    census: dict
    bracket: Optional[MuBracket]
    phi: dict
    verdicts: list[Verdict]
    checks: list[str]
    timestamp: str
    version: str = __version__

    @property
    def counts(self) -> dict[str, int]:
        out = {HOLDS: 0, FAILS: 0, INCONCLUSIVE: 0}
        for v in self.verdicts:
            out[v.status] += 1
        return out

    @property
    def ok(self) -> bool:
        return self.counts[FAILS] == 0

    def to_dict(self) -> dict:
        return {
            "format_version": 1,
            "kind": "verification_report",
            "toolkit_version": self.version,
            "timestamp": self.timestamp,
            "census": self.census,
            "mu_bracket": None if self.bracket is None else {
                "mu_low": repr(self.bracket.mu_low), "mu_high": repr(self.bracket.mu_high),
                "n_low": self.bracket.n_low, "n_high": self.bracket.n_high, "N": self.bracket.N},
            "phi": self.phi,
            "checks": self.checks,
            "summary": self.counts,
            "verdicts": [_verdict_to_dict(v) for v in self.verdicts],
        }

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1) + "\n", encoding="utf-8")

    def render_table(self) -> str:
        rows = [("check", "subject", "status", "parameters", "lhs.upper", "rhs.lower")]
        for v in self.verdicts:
            params = " ".join(f"{k}={_short(x)}" for k, x in v.parameters.items())
            rows.append((v.check, v.subject, v.status, params,
                         "" if v.lhs is None else _short(v.lhs.upper),
                         "" if v.rhs is None else _short(v.rhs.lower)))
        widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
        lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
        c = self.counts
        lines.append(f"{c[HOLDS]} holds, {c[FAILS]} fails, {c[INCONCLUSIVE]} inconclusive")
        return "\n".join(lines)


def _num(x) -> str:
    if isinstance(x, float):
        return repr(x)
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else str(x)


def _short(x) -> str:
    if isinstance(x, float):
        return f"{x:.6g}"
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{float(x):.6g}"
    return str(x)


def _verdict_to_dict(v: Verdict) -> dict:
    enc = lambda e: None if e is None else {"lower": _num(e.lower), "upper": _num(e.upper)}
    return {"check": v.check, "subject": v.subject, "status": v.status,
            "parameters": {k: (x if isinstance(x, (int, str)) else _num(x)) for k, x in v.parameters.items()},
            "lhs": enc(v.lhs), "rhs": enc(v.rhs), "message": v.message}


def _registered(census, bracket, phi, config) -> list[tuple[str, Callable[[], list[Verdict]]]]:
    checks = [("census_invariants", lambda: check_census_invariants(census))]
    if config.recount:
        checks.append(("census_recount", lambda: check_census_recount(
            census, config.recount_max_n, config.oracle_max_n, config.workers)))
    checks += [
        ("counting_laws", lambda: check_counting_laws(census)),
        ("lemma_xizc", lambda: [check_lemma_xizc(census, bracket)]),
        ("madras_slade", lambda: check_madras_slade(census, bracket, config.z_grid)),
        ("hw_explicit", lambda: check_hw_explicit(census, bracket, phi)),
        ("dch_form", lambda: [check_dch_form(census, phi, config.phi_n_min)]),
        ("remark_B_lower", lambda: check_remark_B_lower(census, bracket, phi, config.eps_grid)),
    ]
    return checks


def run_all(census: Census, phi: Optional[PhiModel] = None,
            config: Optional[VerifyConfig] = None, timestamp: Optional[str] = None) -> Report:
    """Run every registered check. A check that raises becomes one
    inconclusive verdict carrying the error message."""
    config = config or VerifyConfig()
    phi = PhiModel.zero() if phi is None else phi
    with iv.padding(config.pad_ulps):
        bracket = mu_bracket(census) if census.N >= 1 else None
        verdicts, names = [], []
        for name, run in _registered(census, bracket, phi, config):
            names.append(name)
            try:
                produced = run()
            except Exception as exc:
                produced = [Verdict(INCONCLUSIVE, name, message=f"{type(exc).__name__}: {exc}")]
            verdicts.extend(Verdict(v.status, v.subject, v.parameters, v.lhs, v.rhs, v.message, name)
                            for v in produced)
    descriptor = {"dimension": census.d, "max_length": census.N, "checksum": census_checksum(census)}
    if timestamp is None:
        timestamp = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
    return Report(descriptor, bracket, phi_to_dict(phi), verdicts, names, timestamp)


def empirical_run(census: Census, config: Optional[VerifyConfig] = None) -> Report:
    """``run_all`` with the rate extracted from the census itself."""
    config = config or VerifyConfig()
    return run_all(census, phi_empirical(census, config.phi_n_min), config)
