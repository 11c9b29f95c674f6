"""Hopbound schedules ``n = beta_0 >= beta_1 >= ... >= beta_l`` for hopset hierarchies."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .graph import GraphError

# floor constant of the undirected recurrence: C_FLOOR * (k / eps)^k
C_FLOOR = 4
_ROUND_TOL = 1e-9


@dataclass
class BetaSchedule:
    n: int
    betas: list[int]                  # beta_1 .. beta_l (beta_0 = n implied)
    eps: list[Fraction]               # per-level eps_1 .. eps_l
    regime: str                       # directed-case1 | directed-case2 | undirected | custom
    exponents: list[float] = field(default_factory=list)  # log_n of unrounded beta_0..beta_l
    constants: dict = field(default_factory=dict)

    @property
    def levels(self) -> int:
        return len(self.betas)

    def beta(self, i: int) -> int:
        return self.n if i == 0 else self.betas[i - 1]

    @property
    def stretch(self) -> Fraction:
        t = Fraction(1)
        for e in self.eps:
            t *= 1 + e
        return t

    def as_dict(self) -> dict:
        return {"n": self.n, "regime": self.regime, "betas": self.betas,
                "eps": [str(e) for e in self.eps],
                "constants": {k: (str(v) if isinstance(v, Fraction) else v)
                              for k, v in self.constants.items()}}

    def check(self) -> None:
        prev = self.n
        for b in self.betas:
            if not (isinstance(b, int) and 1 <= b <= prev):
                raise GraphError(f"schedule not nonincreasing integers >= 1: {self.betas}")
            prev = b
        if len(self.eps) != len(self.betas):
            raise GraphError("one eps per level required")


def custom_schedule(n: int, betas, eps=0) -> BetaSchedule:
    betas = [int(b) for b in betas]
    s = BetaSchedule(n, betas, [Fraction(eps)] * len(betas), "custom")
    s.check()
    return s


def _round_beta(x: float) -> int:
    return max(1, math.ceil(x - _ROUND_TOL * max(1.0, x)))


def loglog_levels(n: int) -> int:
    if n < 4:
        return 1
    return max(1, math.ceil(math.log2(math.log2(n)) - _ROUND_TOL))


def _check_tradeoff(a: float, b: float) -> None:
    if not a > 1:
        raise GraphError("need a > 1")
    if not (0 <= b < min(1.0, 1.0 / (a - 1))):
        raise GraphError("need 0 <= b < min(1, 1/(a-1))")


def _finish(n, exps, eps, regime, constants):
    betas = []
    prev = n
    for x in exps[1:]:
        b = min(prev, n, _round_beta(n ** x))
        betas.append(b)
        prev = b
    s = BetaSchedule(n, betas, eps, regime, exps, constants)
    s.check()
    return s


def schedule_directed(n: int, p: int, a: float, b: float, eps=0) -> BetaSchedule:
    """Directed hierarchy balancing ``|H_i| * beta_{i-1}`` across levels.

    Case 1 (``p < n^(2-ab)``): ``l = ceil(log log n)`` levels with exponents
    ``(1-alpha) k^-i + alpha`` and ``alpha = log_n(n / p^(1/k))``.
    Case 2: ``2l`` levels, the first half decaying towards ``b`` at rate
    ``1/k``, the second half towards ``log_n (n^2/p)^(1/a)`` at rate ``1/a``.
    """
    _check_tradeoff(a, b)
    if n < 2 or p < 1:
        raise GraphError("need n >= 2 and p >= 1")
    eps = Fraction(eps)
    k = (2 - a * b) / (1 - b)
    ell = loglog_levels(n)
    ln = math.log(n)
    lp = math.log(p)
    if lp < (2 - a * b) * ln - _ROUND_TOL:
        alpha = 1 - lp / (k * ln)
        exps = [1.0] + [(1 - alpha) * (1 / k) ** i + alpha for i in range(1, ell + 1)]
        consts = {"k": k, "alpha": alpha, "D": n ** alpha, "a": a, "b": b, "l": ell, "p": p}
        return _finish(n, exps, [eps / (2 * ell)] * ell, "directed-case1", consts)
    alpha = max(0.0, (2 - lp / ln) / a)
    first = [(1 - b) * (1 / k) ** i + b for i in range(1, ell + 1)]
    second = [(b - alpha) * (1 / a) ** i + alpha for i in range(1, ell + 1)]
    consts = {"k": k, "alpha": alpha, "D1": n ** b, "D2": n ** alpha, "a": a, "b": b,
              "l": 2 * ell, "p": p}
    return _finish(n, [1.0] + first + second, [eps / (4 * ell)] * (2 * ell),
                   "directed-case2", consts)


def telescoping_residuals(s: BetaSchedule) -> list[float]:
    """``|log_n[(n/beta_i)^k beta_{i-1}] - log_n[(n/D)^k D]|`` per Case-1 level,
    evaluated on the unrounded exponents."""
    if s.regime != "directed-case1":
        raise GraphError("telescoping identity is stated for Case 1 schedules")
    k, alpha = s.constants["k"], s.constants["alpha"]
    target = k * (1 - alpha) + alpha
    x = s.exponents
    return [abs(k * (1 - x[i]) + x[i - 1] - target) for i in range(1, len(x))]


def undirected_max_k(n: int) -> int:
    if n < 4:
        return 0
    return math.floor(math.log2(math.log2(n)) - 1 + _ROUND_TOL)


def schedule_undirected(n: int, k: int, eps) -> BetaSchedule:
    """``beta_i = max(beta_{i-1}^(1 - 2^-(k+1)) / 2, C_FLOOR (k/eps)^k)``,
    stopping at the first level that reaches the floor."""
    eps = Fraction(eps)
    if not (0 < eps < 1):
        raise GraphError("eps must lie in (0, 1)")
    if not 1 <= k <= undirected_max_k(n):
        raise GraphError(f"k must lie in [1, log log n - 1] (= {undirected_max_k(n)} for n={n})")
    c = 1 - 2.0 ** (-k - 1)
    floor = C_FLOOR * (k / float(eps)) ** k
    vals = []
    cur = float(n)
    while True:
        nxt = max(0.5 * cur ** c, floor)
        vals.append(nxt)
        if nxt == floor or len(vals) > 10_000:
            break
        cur = nxt
    exps = [1.0] + [math.log(v) / math.log(n) for v in vals]
    consts = {"k": k, "c": c, "floor": floor, "l": len(vals)}
    return _finish(n, exps, [eps] * len(vals), "undirected", consts)
