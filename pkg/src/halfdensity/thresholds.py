"""Growth-rate conditions and the phase classifier for the f(ell) family.

Rate functions are linear combinations of terms

    c * ell^a * log(ell)^b * loglog(ell)^g

with logs base 2m-1 (m a parameter, default 2).  Divergence questions for
this family are decided symbolically by lexicographic comparison of the
exponent triples (a, b, g); arbitrary callables only get numeric-trace
heuristics, labeled indeterminate.

Three conditions are evaluated:

* star:      k - 2 ell f -> infinity        (exists a short trivial word)
* spade:     (ell-2) / ((2k+2)(2m-1)^(2k)) -> infinity   (block count grows)
* asterisk:  3000 K^2 log(K ell) + 10^4 ell/K - ell f -> -infinity
             (diagram count loses to fulfillability decay)

classify_phase encodes the headline decision table for
f = c0 * log^beta(ell) / ell^alpha: hyperbolic when f dominates
10^5 log^(1/3)/ell^(1/3), trivial when f is eventually below
log(ell)/(4 ell) - loglog(ell)/ell, unknown in between.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

VERDICT_DIVERGES = "diverges"
VERDICT_BOUNDED = "bounded"
VERDICT_TO_MINUS_INF = "converges-to-minus-infinity"
VERDICT_TO_ZERO = "converges-to-zero"
VERDICT_INDETERMINATE = "indeterminate"

OUTCOME_TRIVIAL = "trivial"
OUTCOME_HYPERBOLIC = "hyperbolic"
OUTCOME_UNKNOWN = "unknown"
OUTCOME_NOT_SMALL = "not-o1"

_ZERO_KEY = (Fraction(0), Fraction(0), Fraction(0))


def _fr(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class GrowthExpr:
    """Sum of terms coeff * ell^a * log^b * loglog^g, keyed by (a, b, g)."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {}
        if terms:
            for key, coeff in terms.items():
                if coeff == 0:
                    continue
                k = tuple(_fr(v) for v in key)
                self.terms[k] = self.terms.get(k, 0) + coeff
                if self.terms[k] == 0:
                    del self.terms[k]

    @classmethod
    def constant(cls, c) -> "GrowthExpr":
        return cls({_ZERO_KEY: c})

    @classmethod
    def monomial(cls, a, b, g, coeff) -> "GrowthExpr":
        return cls({(_fr(a), _fr(b), _fr(g)): coeff})

    def __eq__(self, other) -> bool:
        return isinstance(other, GrowthExpr) and self.terms == other.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "GrowthExpr(0)"
        parts = []
        for (a, b, g), c in sorted(self.terms.items(), reverse=True):
            factors = [str(c)]
            if a:
                factors.append(f"ell^{a}")
            if b:
                factors.append(f"log^{b}")
            if g:
                factors.append(f"loglog^{g}")
            parts.append("*".join(factors))
        return "GrowthExpr(" + " + ".join(parts) + ")"

    def __add__(self, other: "GrowthExpr") -> "GrowthExpr":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return GrowthExpr(out)

    def __sub__(self, other: "GrowthExpr") -> "GrowthExpr":
        return self + other.scale(-1)

    def scale(self, c) -> "GrowthExpr":
        return GrowthExpr({k: c * v for k, v in self.terms.items()})

    def __mul__(self, other: "GrowthExpr") -> "GrowthExpr":
        out: dict = {}
        for (a1, b1, g1), c1 in self.terms.items():
            for (a2, b2, g2), c2 in other.terms.items():
                k = (a1 + a2, b1 + b2, g1 + g2)
                out[k] = out.get(k, 0) + c1 * c2
        return GrowthExpr(out)

    def shift_ell(self, power) -> "GrowthExpr":
        """Multiply by ell^power."""
        p = _fr(power)
        return GrowthExpr({(a + p, b, g): c for (a, b, g), c in self.terms.items()})

    def leading_term(self):
        if not self.terms:
            return None
        key = max(self.terms)
        return key, self.terms[key]

    def limit_verdict(self) -> str:
        """diverges / bounded / converges-to-minus-infinity as ell grows."""
        lt = self.leading_term()
        if lt is None:
            return VERDICT_BOUNDED
        key, coeff = lt
        if key > _ZERO_KEY:
            return VERDICT_DIVERGES if coeff > 0 else VERDICT_TO_MINUS_INF
        return VERDICT_BOUNDED

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def evaluate(self, ell: int, m: int = 2) -> float:
        base = 2 * m - 1
        if ell < 2:
            raise ValueError("evaluation needs ell >= 2")
        L = math.log(ell, base)
        LL = math.log(L, base) if L > 0 else float("-inf")
        total = 0.0
        for (a, b, g), c in self.terms.items():
            t = float(c) * ell ** float(a)
            if b:
                t *= L ** float(b)
            if g:
                if LL < 0 and g != int(g):
                    raise ValueError(f"loglog^{g} undefined below ell = {base}")
                t *= LL ** float(g)
            total += t
        return total


@dataclass(frozen=True)
class RateFunction:
    """A named rate function, symbolic when possible.

    parametric holds (alpha, beta, coeff) for members of the family
    c0 * log^beta / ell^alpha; expr is the GrowthExpr form; fn is the
    fallback for explicitly tabulated or opaque functions.
    """

    label: str
    expr: Optional[GrowthExpr] = None
    parametric: Optional[tuple] = None
    fn: Optional[Callable] = field(default=None, compare=False)

    def evaluate(self, ell: int, m: int = 2) -> float:
        if self.expr is not None:
            return self.expr.evaluate(ell, m)
        if self.fn is not None:
            return float(self.fn(ell))
        raise ValueError(f"rate function {self.label} has no evaluable form")

    @property
    def symbolic(self) -> bool:
        return self.expr is not None


def family(alpha, beta, coeff=1) -> RateFunction:
    """f(ell) = coeff * log^beta(ell) / ell^alpha."""
    a, b = _fr(alpha), _fr(beta)
    return RateFunction(
        label=f"family(alpha={a}, beta={b}, c0={coeff})",
        expr=GrowthExpr.monomial(-a, b, 0, coeff),
        parametric=(a, b, coeff),
    )


def zero_rate() -> RateFunction:
    return RateFunction(label="zero", expr=GrowthExpr({}), parametric=None)


def constant_rate(value) -> RateFunction:
    return RateFunction(label=f"const({value})", expr=GrowthExpr.constant(value))


def trivial_threshold_f() -> RateFunction:
    """The trivial-side threshold log(ell)/(4 ell) - loglog(ell)/ell."""
    expr = GrowthExpr({(Fraction(-1), Fraction(1), Fraction(0)): Fraction(1, 4),
                       (Fraction(-1), Fraction(0), Fraction(1)): Fraction(-1)})
    return RateFunction(label="trivial-threshold", expr=expr)


def hyperbolic_threshold_f() -> RateFunction:
    """The hyperbolic-side threshold 10^5 log^(1/3)(ell)/ell^(1/3)."""
    return family(Fraction(1, 3), Fraction(1, 3), 10**5)


def threshold_head_k() -> RateFunction:
    """Head length k(ell) = (1/2) log(ell) - loglog(ell)."""
    expr = GrowthExpr({(Fraction(0), Fraction(1), Fraction(0)): Fraction(1, 2),
                       (Fraction(0), Fraction(0), Fraction(1)): Fraction(-1)})
    return RateFunction(label="threshold-k", expr=expr)


def hyperbolic_window_K(cprime=1) -> RateFunction:
    """Window scale K(ell) = c' ell^(1/3) / log^(1/3)(ell).

    This is the choice used for the hyperbolicity threshold.  The effective
    hyperbolicity constant uses delta_hyperbolic_window_K instead; the two disagree
    in the log exponent and are kept separate deliberately.
    """
    return family(Fraction(-1, 3), Fraction(-1, 3), cprime)


def delta_hyperbolic_window_K() -> RateFunction:
    """Window scale K(ell) = ell^(1/3) / log^(2/3)(ell), used for the
    delta = c ell^(5/3) hyperbolicity constant."""
    return family(Fraction(-1, 3), Fraction(-2, 3), 1)


# ---------------------------------------------------------------------------
# condition reports


@dataclass
class ConditionReport:
    condition: str
    verdict: str
    symbolic: Optional[GrowthExpr]
    trace: list
    detail: dict = field(default_factory=dict)


def heuristic_verdict(trace: list) -> str:
    """Monotone-window heuristic over the last three decades of a trace.

    Only a labeling aid for non-symbolic inputs; never authoritative.
    """
    if len(trace) < 2:
        return VERDICT_INDETERMINATE
    max_ell = trace[-1][0]
    window = [v for ell, v in trace if ell * 1000 >= max_ell]
    if len(window) < 3:
        window = [v for _, v in trace][-3:]
    diffs = [b - a for a, b in zip(window, window[1:])]
    span = window[-1] - window[0]
    mean = sum(abs(v) for v in window) / len(window)
    peak = max(abs(v) for _, v in trace)
    if all(d > 0 for d in diffs) and span > 0.05 and window[-1] > 0:
        return VERDICT_DIVERGES
    if all(d < 0 for d in diffs) and span < -0.05 and window[-1] < 0:
        return VERDICT_TO_MINUS_INF
    if all(d < 0 for d in diffs) and window[-1] > 0 and window[-1] < 0.5 * window[0]:
        return VERDICT_TO_ZERO
    if peak > 0 and abs(window[-1]) <= peak * 1e-6:
        return VERDICT_TO_ZERO
    if abs(span) <= 0.05 * max(1.0, mean):
        return VERDICT_BOUNDED
    return VERDICT_INDETERMINATE


def star_condition(k_fn: RateFunction, f: RateFunction, ell_grid: list,
                   m: int = 2) -> ConditionReport:
    """Does k(ell) - 2 ell f(ell) diverge?"""
    symbolic = None
    if k_fn.symbolic and f.symbolic:
        symbolic = k_fn.expr - f.expr.shift_ell(1).scale(2)
        verdict = symbolic.limit_verdict()
    else:
        verdict = VERDICT_INDETERMINATE
    trace = []
    for ell in ell_grid:
        val = k_fn.evaluate(ell, m) - 2 * ell * f.evaluate(ell, m)
        trace.append((ell, val))
    if verdict == VERDICT_INDETERMINATE:
        heur = heuristic_verdict(trace)
        return ConditionReport("star", verdict, symbolic, trace, {"heuristic": heur})
    return ConditionReport("star", verdict, symbolic, trace)


_EXPONENT_KEYS = {_ZERO_KEY, (Fraction(0), Fraction(1), Fraction(0)),
                  (Fraction(0), Fraction(0), Fraction(1))}


def _exp_base(expr: GrowthExpr, m: int):
    """(2m-1)^expr as a monomial, when expr uses only const/log/loglog terms.

    (2m-1)^(c log ell) = ell^c and (2m-1)^(c loglog ell) = log^c(ell), so the
    result is coeff * ell^a * log^b.  Returns None when not representable.
    """
    a = expr.terms.get((Fraction(0), Fraction(1), Fraction(0)), Fraction(0))
    b = expr.terms.get((Fraction(0), Fraction(0), Fraction(1)), Fraction(0))
    c0 = expr.terms.get(_ZERO_KEY, Fraction(0))
    if set(expr.terms) - _EXPONENT_KEYS:
        return None
    base = 2 * m - 1
    coeff = base ** c0 if (isinstance(c0, Fraction) and c0.denominator == 1) \
        else float(base) ** float(c0)
    return GrowthExpr.monomial(a, b, 0, coeff)


def spade_condition(k_fn: RateFunction, m: int, ell_grid: list) -> ConditionReport:
    """Does the block count b = (ell-2)/((2k+2)(2m-1)^(2k)) diverge?"""
    base = 2 * m - 1
    symbolic = None
    verdict = VERDICT_INDETERMINATE
    detail: dict = {}
    if k_fn.symbolic:
        two_k = k_fn.expr.scale(2)
        growing = [(key, c) for key, c in two_k.terms.items()
                   if key[0] > 0 and c > 0]
        expo = _exp_base(two_k, m)
        if expo is not None:
            numer = GrowthExpr({(Fraction(1), Fraction(0), Fraction(0)): 1,
                                _ZERO_KEY: -2})
            denom = (k_fn.expr.scale(2) + GrowthExpr.constant(2)) * expo
            nk, nc = numer.leading_term()
            dk, dc = denom.leading_term()
            ratio_key = tuple(x - y for x, y in zip(nk, dk))
            ratio_coeff = nc / dc if isinstance(nc, Fraction) and isinstance(dc, Fraction) \
                else float(nc) / float(dc)
            symbolic = GrowthExpr.monomial(*ratio_key, ratio_coeff)
            detail["leading"] = (ratio_key, ratio_coeff)
            if ratio_key > _ZERO_KEY:
                verdict = VERDICT_DIVERGES if ratio_coeff > 0 else VERDICT_TO_MINUS_INF
            elif ratio_key == _ZERO_KEY:
                verdict = VERDICT_BOUNDED
            else:
                verdict = VERDICT_TO_ZERO
        elif growing:
            # exponent has a positive power of ell: denominator outgrows
            # every polynomial, so the block count collapses to zero
            verdict = VERDICT_TO_ZERO

    trace = []
    ln_base = math.log(base)
    for ell in ell_grid:
        k_val = k_fn.evaluate(ell, m)
        log_b = math.log(max(ell - 2, 1)) - math.log(2 * k_val + 2) - 2 * k_val * ln_base
        trace.append((ell, math.exp(log_b) if log_b < 700 else float("inf")))
    if verdict == VERDICT_INDETERMINATE:
        detail["heuristic"] = heuristic_verdict(trace)
    return ConditionReport("spade", verdict, symbolic, trace, detail)


def asterisk_condition(K_fn: RateFunction, f: RateFunction, ell_grid: list,
                       m: int = 2) -> ConditionReport:
    """Does 3000 K^2 log(K ell) + 10^4 ell/K - ell f go to minus infinity?"""
    base = 2 * m - 1
    symbolic = None
    verdict = VERDICT_INDETERMINATE
    detail: dict = {}
    if K_fn.symbolic and f.symbolic and K_fn.expr.is_monomial():
        ((aK, bK, gK), cK), = K_fn.expr.terms.items()
        if cK > 0 and gK == 0:
            log_c = 0 if cK == 1 else math.log(float(cK), base)
            log_Kl = GrowthExpr({_ZERO_KEY: log_c,
                                 (Fraction(0), Fraction(1), Fraction(0)): aK + 1,
                                 (Fraction(0), Fraction(0), Fraction(1)): bK})
            K2 = GrowthExpr.monomial(2 * aK, 2 * bK, 0, cK * cK)
            t1 = (K2 * log_Kl).scale(3000)
            inv_c = 1 / cK if isinstance(cK, Fraction) else 1.0 / cK
            t2 = GrowthExpr.monomial(1 - aK, -bK, 0, inv_c).scale(10**4)
            t3 = f.expr.shift_ell(1)
            symbolic = t1 + t2 - t3
            verdict = symbolic.limit_verdict()
            detail["terms"] = {"diagram_count": t1, "window_loss": t2, "decay": t3}

    trace = []
    for ell in ell_grid:
        K_val = K_fn.evaluate(ell, m)
        if K_val <= 0:
            raise ValueError(f"K({ell}) = {K_val} must be positive")
        val = (3000 * K_val**2 * math.log(K_val * ell, base)
               + 10**4 * ell / K_val - ell * f.evaluate(ell, m))
        trace.append((ell, val))
    if verdict == VERDICT_INDETERMINATE:
        detail["heuristic"] = heuristic_verdict(trace)
    return ConditionReport("asterisk", verdict, symbolic, trace, detail)


# ---------------------------------------------------------------------------
# phase classification


@dataclass(frozen=True)
class PhaseVerdict:
    outcome: str
    clause: str


def _classify_expr(f_expr: GrowthExpr) -> PhaseVerdict:
    """Eventual-dominance comparison of f against the two threshold functions.

    Hyperbolic when f - f_hyp has positive leading coefficient (or the
    expressions coincide), trivial dually against f_triv; otherwise unknown.
    Leading-term comparison is exact rational arithmetic, so the corner
    (alpha, beta) = (1/3, 1/3) is decided by coeff >= 10^5, and f_(1,1) is
    trivial only when its coefficient stays below 1/4 (the loglog correction
    blocks coefficient 1/4 itself and above).
    """
    diff_h = f_expr - hyperbolic_threshold_f().expr
    if not diff_h.terms:
        return PhaseVerdict(OUTCOME_HYPERBOLIC, "f equals the hyperbolic threshold")
    key, lead = diff_h.leading_term()
    if lead > 0:
        return PhaseVerdict(
            OUTCOME_HYPERBOLIC,
            f"f eventually >= 10^5 log^(1/3)/ell^(1/3): leading term ell^{key[0]} "
            f"log^{key[1]} loglog^{key[2]} has coefficient {lead} > 0",
        )
    diff_t = trivial_threshold_f().expr - f_expr
    if not diff_t.terms:
        return PhaseVerdict(OUTCOME_TRIVIAL, "f equals the trivial threshold")
    key, lead = diff_t.leading_term()
    if lead > 0:
        return PhaseVerdict(
            OUTCOME_TRIVIAL,
            f"f eventually <= log/(4 ell) - loglog/ell: leading term ell^{key[0]} "
            f"log^{key[1]} loglog^{key[2]} has coefficient {lead} > 0",
        )
    return PhaseVerdict(OUTCOME_UNKNOWN, "between the two thresholds")


def classify_phase(alpha, beta, coeff) -> PhaseVerdict:
    """Classify f = coeff * log^beta(ell) / ell^alpha.

    Requires f to vanish: alpha > 0, or alpha = 0 with beta < 0 (coeff 0
    means f = 0 and is trivial by the classical density-one-half statement).
    """
    a, b = _fr(alpha), _fr(beta)
    if coeff < 0:
        raise ValueError("coefficient must be nonnegative")
    if coeff == 0:
        return PhaseVerdict(OUTCOME_TRIVIAL, "f = 0: classical model at density one-half")
    if not (a > 0 or (a == 0 and b < 0)):
        raise ValueError(f"f_(alpha={a}, beta={b}) is not o(1)")
    return _classify_expr(GrowthExpr.monomial(-a, b, 0, _fr(coeff)))


def classify_rate(rf: RateFunction) -> PhaseVerdict:
    """Classify any symbolic rate function, including the named thresholds."""
    if rf.expr is None:
        raise ValueError(f"rate function {rf.label} has no symbolic form")
    if not rf.expr.terms:
        return PhaseVerdict(OUTCOME_TRIVIAL, "f = 0: classical model at density one-half")
    if rf.parametric is not None:
        return classify_phase(*rf.parametric)
    lt = rf.expr.leading_term()
    if lt[0] >= _ZERO_KEY:
        raise ValueError(f"{rf.label} is not o(1)")
    return _classify_expr(rf.expr)


@dataclass(frozen=True)
class PhaseMapCell:
    alpha: Fraction
    beta: Fraction
    outcome: str
    clause: str


def phase_map(alphas, betas, coeff=1.0) -> list:
    """Classify every (alpha, beta) grid cell; non-vanishing cells are
    labeled not-o1 rather than raising."""
    rows = []
    for a in alphas:
        for b in betas:
            a_f, b_f = _fr(a), _fr(b)
            try:
                v = classify_phase(a_f, b_f, coeff)
                rows.append(PhaseMapCell(a_f, b_f, v.outcome, v.clause))
            except ValueError:
                rows.append(PhaseMapCell(a_f, b_f, OUTCOME_NOT_SMALL, "f not o(1)"))
    return rows


def grid_range(start, stop, step) -> list:
    """Inclusive rational grid start, start+step, ..., up to stop."""
    a, b, s = _fr(start), _fr(stop), _fr(step)
    if s <= 0:
        raise ValueError("step must be positive")
    out = []
    v = a
    while v <= b:
        out.append(v)
        v += s
    return out


# ---------------------------------------------------------------------------
# hyperbolicity constant


def delta_constant(kappa: float, N: int) -> float:
    """Thin-triangle constant delta = 120 kappa^2 N^3; requires kappa > 1/N."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if not kappa * N > 1:
        raise ValueError(f"need kappa > 1/N, got kappa={kappa}, N={N}")
    return 120.0 * kappa * kappa * N**3


def large_loop_area_threshold(kappa: float, N: int) -> float:
    """Loop area above which the linear isoperimetric hypothesis applies."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if not kappa * N > 1:
        raise ValueError(f"need kappa > 1/N, got kappa={kappa}, N={N}")
    return 18.0 * kappa * kappa * N * N


def delta_for_ell(ell: int, c2: float = 1.0) -> float:
    """delta with kappa = c2 ell^(-2/3) and N = ell, proportional to ell^(5/3)."""
    kappa = c2 * float(ell) ** (-2.0 / 3.0)
    return delta_constant(kappa, ell)
