"""Grid sweeps of the tail-sum and f_n shift inequalities (used by ``check-bounds``)."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import f_n_shift_bounds, tail_sum_bound

TAIL_K = (0.25, 0.5, 1.0, 2.0, 4.0)
TAIL_M = (0.0, 0.5, 1.0, 2.0)
TAIL_N = (2, 10, 1_000, 100_000)

SHIFT_D = (0.5, 1.0, 2.0)
SHIFT_K = (1e-3, 0.1, 0.5, 1.0, 2.0, 5.0)
SHIFT_LOG10_N = (1, 2, 3, 4, 6, 8, 12)
SHIFT_ALPHA_POINTS = 9


@dataclass
class SweepResult:
    name: str
    checked: int
    violations: list = field(default_factory=list)
    skipped: int = 0

    @property
    def passed(self) -> bool:
        return self.checked > 0 and not self.violations

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f", {self.skipped} outside domain" if self.skipped else ""
        return f"{status} {self.name}: {self.checked} points, {len(self.violations)} violations{extra}"


def tail_sum_sweep(ks=TAIL_K, ms=TAIL_M, Ns=TAIL_N) -> SweepResult:
    """exact + halfwidth <= bound for every admissible (k, m, N); N is lifted to e^(2m/k)."""
    res = SweepResult("tail-sum", 0)
    for k, m, N in itertools.product(ks, ms, Ns):
        N_eff = max(N, math.ceil(math.exp(2.0 * m / k)))
        if N_eff > 10 ** 12:
            res.skipped += 1
            continue
        out = tail_sum_bound(N_eff, k, m)
        res.checked += 1
        if not out.holds:
            res.violations.append((k, m, N_eff, out))
    return res


def shift_domain_ok(alpha: float, n: float, K: float, D: float) -> bool:
    """Region where the shift inequalities are provable: shift K/log n <= 1/4 and
    the upward shift stays inside [D, 2D]."""
    h = K / math.log(n)
    return h <= 0.25 and alpha + h <= 2.0 * D


def _shift_points(Ds, Ks, log10_ns, n_alpha):
    for D, K, e in itertools.product(Ds, Ks, log10_ns):
        for alpha in np.linspace(D, 2.0 * D, n_alpha):
            yield float(alpha), 10.0 ** e, K, D


def f_n_shift_sweep(Ds=SHIFT_D, Ks=SHIFT_K, log10_ns=SHIFT_LOG10_N,
                    n_alpha=SHIFT_ALPHA_POINTS) -> SweepResult:
    res = SweepResult("f_n-shift", 0)
    for alpha, n, K, D in _shift_points(Ds, Ks, log10_ns, n_alpha):
        if not shift_domain_ok(alpha, n, K, D):
            res.skipped += 1
            continue
        res.checked += 1
        if not f_n_shift_bounds(alpha, n, K, D):
            res.violations.append((alpha, n, K, D))
    return res


def f_n_shift_literal_violations(Ds=SHIFT_D, Ks=SHIFT_K, log10_ns=SHIFT_LOG10_N,
                                 n_alpha=SHIFT_ALPHA_POINTS):
    """(violations, checked) on the wider domain n >= e^(K/4) only; informational."""
    bad, total = [], 0
    for alpha, n, K, D in _shift_points(Ds, Ks, log10_ns, n_alpha):
        if n < math.exp(K / 4.0):
            continue
        total += 1
        if not f_n_shift_bounds(alpha, n, K, D):
            bad.append((alpha, n, K, D))
    return bad, total


def run_all_sweeps() -> list[SweepResult]:
    return [tail_sum_sweep(), f_n_shift_sweep()]
