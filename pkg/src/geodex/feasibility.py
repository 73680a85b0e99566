"""Divisibility scanners, spectral constraints and the k = 2 case engine.

Every check returns a :class:`~geodex.report.FeasibilityReport` whose
witnesses can be recomputed from the subject alone.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Iterable, Iterator

from .arithmetic import (
    PRIMALITY_TEST,
    X,
    FactoredSpectrum,
    IntPoly,
    cyclotomic,
    divisors,
    f_poly,
    is_probable_prime,
    moore_bound,
    moore_bound_mod,
    smallest_prime_factor,
    spectrum_trace,
)
from .automorphism import PermutationVector, m_stats
from .report import FeasibilityReport, Reason, ReasonKind, Subject, Verdict

QUAD_MINUS_ONE = IntPoly((2, 1, 1))  # 1 + x + x^2 = -1
QUAD_I = IntPoly((1, 0, 1))


def _type1_for_degree(args: tuple[int, tuple[int, ...]]) -> list[int]:
    d, ks = args
    return [k for k in ks if type1_divisible(d, k)]


def _vt_for_degree(args: tuple[int, tuple[int, ...]]) -> list[int]:
    d, ks = args
    return [k for k in ks if vt_divisible(d, k)]


def type1_divisible(d: int, k: int) -> bool:
    """(k+1) | d (M(d,k) + 1): arcs split into disjoint (k+1)-cycles."""
    m = k + 1
    return d * (moore_bound_mod(d, k, m) + 1) % m == 0


def vt_divisible(d: int, k: int) -> bool:
    """The Type I condition plus (k+t) | (M+1)(d^t - d^(t-1)) for 2 <= t <= k-1."""
    if not type1_divisible(d, k):
        return False
    for t in range(2, k):
        m = k + t
        order = moore_bound_mod(d, k, m) + 1
        if order * (pow(d, t, m) - pow(d, t - 1, m)) % m:
            return False
    return True


def _scan(fn, d_range: Iterable[int], k_range: Iterable[int], workers: int) -> Iterator[tuple[int, int]]:
    ds = sorted(set(d_range))
    ks = tuple(sorted(set(k_range)))
    if not ds or not ks:
        raise ValueError("scan ranges must be non-empty")
    jobs = [(d, ks) for d in ds]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for (d, _), hits in zip(jobs, pool.map(fn, jobs)):
                for k in hits:
                    yield d, k
    else:
        for job in jobs:
            for k in fn(job):
                yield job[0], k


def scan_type1_divisibility(
    d_range: Iterable[int], k_range: Iterable[int], workers: int = 1
) -> Iterator[tuple[int, int]]:
    """Stream every (d, k) with (k+1) | d(M(d,k)+1), sorted by d then k."""
    return _scan(_type1_for_degree, d_range, k_range, workers)


def scan_vt_feasible(
    d_range: Iterable[int], k_range: Iterable[int], workers: int = 1
) -> Iterator[tuple[int, int]]:
    """Stream every (d, k) passing the vertex-transitive cycle-count conditions."""
    return _scan(_vt_for_degree, d_range, k_range, workers)


def check_at_divisibility(d: int, k: int, eps: int) -> FeasibilityReport:
    """Arc-transitive divisibility conditions for excess ``eps`` (t runs to k)."""
    if not 1 <= eps < d:
        raise ValueError(f"need 1 <= eps < d, got eps={eps}, d={d}")
    order = moore_bound(d, k) + eps
    reasons = []
    if (d * order) % (k + 1):
        reasons.append(
            Reason(
                ReasonKind.DIVISIBILITY,
                "(k+1) | d(M+eps)",
                (("divisor", k + 1), ("remainder", d * order % (k + 1))),
            )
        )
    for t in range(2, k + 1):
        value = order * (d**t - d ** (t - 1))
        if value % (k + t):
            reasons.append(
                Reason(
                    ReasonKind.DIVISIBILITY,
                    "(k+t) | (M+eps)(d^t-d^(t-1))",
                    (("t", t), ("divisor", k + t), ("remainder", value % (k + t))),
                )
            )
    verdict = Verdict.INFEASIBLE if reasons else Verdict.FEASIBLE
    return FeasibilityReport(Subject(d, k, eps=eps), verdict, reasons)


def type2_forced(d: int, k: int) -> list[str]:
    """Which number-theoretic conditions force a Type II vertex."""
    if d < 3 or k < 2:
        raise ValueError("type2_forced needs d >= 3 and k >= 2")
    hits = []
    m = k + 1
    if d % 2 and k % 2:
        hits.append("i")
    if d % m in (1 % m, (m - 1) % m):
        hits.append("ii")
    if m % (d * d) == 0:
        hits.append("iii")
    if _odd_prime_witness(d, k) is not None:
        hits.append("iv")
    return hits


def _odd_prime_witness(d: int, k: int) -> int | None:
    # odd prime p with p | k+1 and p | d-2
    from math import gcd

    g = gcd(k + 1, d - 2)
    while g and g % 2 == 0:
        g //= 2
    return smallest_prime_factor(g) if g > 1 else None


def degree3_nonexistence(k: int) -> FeasibilityReport:
    """The three arithmetic conditions that together exclude a (3,k;+1)-digraph."""
    if k < 2:
        raise ValueError("k must be >= 2")
    moore = moore_bound(3, k)
    residue = k % 6
    half = (moore - k - 1) // 2
    remainder = half % (k + 2)
    prime = is_probable_prime(moore + 1)
    conditions = {
        "k_mod_6": residue in (3, 5),
        "type_a_divisibility_fails": remainder != 0,
        "order_prime": prime,
    }
    details = {
        "k_mod_6": residue,
        "type_a_remainder": remainder,
        "order": moore + 1,
        "order_prime": prime,
        "primality_test": PRIMALITY_TEST,
    }
    if all(conditions.values()):
        reasons = [
            Reason(ReasonKind.DIVISIBILITY, "Type B excluded: k = 3,5 mod 6", (("k_mod_6", residue),)),
            Reason(
                ReasonKind.DIVISIBILITY,
                "Type A excluded: (k+2) does not divide (M(3,k)-k-1)/2",
                (("divisor", k + 2), ("remainder", remainder)),
            ),
            Reason(
                ReasonKind.DIVISIBILITY,
                "outlier-regular excluded: M(3,k)+1 prime",
                (("order", moore + 1), ("test", PRIMALITY_TEST)),
            ),
        ]
        return FeasibilityReport(Subject(3, k), Verdict.INFEASIBLE, reasons, details=details)
    return FeasibilityReport(Subject(3, k), Verdict.FEASIBLE, details=details)


def two_outlier_regular_feasible(d: int, k: int) -> FeasibilityReport:
    """An all-transposition outlier map needs 2k = 1 + d + ... + d^(k-1)."""
    if d < 2 or k < 2:
        raise ValueError("need d, k >= 2")
    lhs, rhs = 2 * k, moore_bound(d, k - 1)
    pv = PermutationVector({2: (moore_bound(d, k) + 1) // 2}) if moore_bound(d, k) % 2 else None
    subject = Subject(d, k, pv=pv, case="2-outlier-regular")
    if lhs == rhs:
        return FeasibilityReport(subject, Verdict.FEASIBLE)
    return FeasibilityReport(
        subject,
        Verdict.INFEASIBLE,
        [Reason(ReasonKind.TRACE_MISMATCH, "2k = 1+d+...+d^(k-1)", (("2k", lhs), ("sum", rhs)))],
    )


def complement_charpoly(pv: PermutationVector) -> FactoredSpectrum:
    """Factored char poly of J - P for any permutation with cycle type ``pv``.

    n = pv.total; the all-ones eigenvalue n-1 replaces one -1 eigenvalue.
    Each j-cycle contributes x^j - 1 (j even) or x^j + 1 (j odd), split here
    into cyclotomic factors.
    """
    n = pv.total
    if n < 1:
        raise ValueError("empty permutation vector")
    mult: dict[int, int] = {}
    for j, m in pv.counts:
        for e in divisors(j):
            idx = e if j % 2 == 0 else 2 * e
            mult[idx] = mult.get(idx, 0) + m
    if mult.get(2, 0) < 1:
        raise ArithmeticError("no (x+1) factor available to cancel")
    mult[2] -= 1
    factors = [(X - (n - 1), 1)] + [(cyclotomic(i), mult[i]) for i in sorted(mult)]
    return FactoredSpectrum(factors)


def charpoly_JminusP(d: int, k: int, pv: PermutationVector) -> FactoredSpectrum:
    n = moore_bound(d, k) + 1
    if pv.total != n:
        raise ValueError(f"permutation vector covers {pv.total} vertices, need M({d},{k})+1 = {n}")
    if pv[1]:
        raise ValueError("outlier permutations have no fixed points")
    return complement_charpoly(pv)


def k2_order(d: int) -> int:
    return d * d + d + 2


def table1_divisors(d: int) -> list[int]:
    """Nontrivial divisors of the (d,2;+1) order d^2 + d + 2."""
    return divisors(k2_order(d))[1:]


def _half(value: int) -> Fraction:
    return Fraction(value, 2)


def k2_charpoly(d: int, pv: PermutationVector) -> FeasibilityReport:
    """Adjacency char poly of a (d,2;+1)-digraph with outlier cycle type ``pv``.

    Solves a1 + a2 = m''(1), a1 - a2 = d^2 - d + 1 - 2 m(4) for the
    multiplicities of the eigenvalues 0 and -1, then checks every factor
    exponent is a non-negative integer and that Tr(A) = Tr(A^2) = 0.
    """
    n = k2_order(d)
    if pv.total != n:
        raise ValueError(f"permutation vector covers {pv.total} vertices, need {n}")
    if pv[1]:
        raise ValueError("outlier permutations have no fixed points")
    subject = Subject(d, 2, pv=pv)
    _, even1, all1 = m_stats(pv, 1)
    m4 = m_stats(pv, 4)[2]
    rhs = d * d - d + 1 - 2 * m4
    a1, a2 = _half(even1 + rhs), _half(even1 - rhs)
    details = {"m''(1)": even1, "m(4)": m4}
    reasons = []
    if even1 % 2 == 0:
        reasons.append(Reason(ReasonKind.PARITY, "m''(1) must be odd", (("m''(1)", even1),)))
    if a1.denominator != 1 or a2.denominator != 1:
        reasons.append(
            Reason(ReasonKind.NON_INTEGRAL, "a1, a2 integral", (("a1", a1), ("a2", a2)))
        )
    if a1 < 0 or a2 < 0:
        reasons.append(Reason(ReasonKind.NEGATIVE, "a1, a2 >= 0", (("a1", a1), ("a2", a2))))

    exponents: list[tuple[str, int, Fraction]] = [("x^2+x+2", 2, _half(all1 - 1))]
    relevant = sorted({e for j in pv.lengths for e in divisors(j)})
    f_exp: dict[int, Fraction] = {}
    for j in relevant:
        odd_j, even_j, all_j = m_stats(pv, j)
        if j >= 3 and j % 2:
            f_exp[j] = f_exp.get(j, Fraction(0)) + _half(even_j)
            f_exp[2 * j] = f_exp.get(2 * j, Fraction(0)) + _half(odd_j)
        elif j >= 6 and j % 2 == 0:
            f_exp[j] = f_exp.get(j, Fraction(0)) + _half(all_j)
    bad = [(name, e) for name, _, e in exponents if e.denominator != 1 or e < 0]
    # exponent pieces are summed per factor but each must be integral alone
    for j in relevant:
        odd_j, even_j, all_j = m_stats(pv, j)
        if j >= 3 and j % 2:
            if even_j % 2:
                bad.append((f"F_{j},2 from m''({j})", _half(even_j)))
            if odd_j % 2:
                bad.append((f"F_{2 * j},2 from m'({j})", _half(odd_j)))
        elif j >= 6 and j % 2 == 0 and all_j % 2:
            bad.append((f"F_{j},2 from m({j})", _half(all_j)))
    for name, e in bad:
        reasons.append(Reason(ReasonKind.NON_INTEGRAL, f"exponent of {name}", (("exponent", e),)))
    if reasons:
        return FeasibilityReport(subject, Verdict.INFEASIBLE, reasons, details=details)

    factors = [
        (X - d, 1),
        (X, int(a1)),
        (X + 1, int(a2)),
        (QUAD_MINUS_ONE, int(exponents[0][2])),
        (QUAD_I, m4),
    ]
    factors += [(f_poly(j, 2), int(e)) for j, e in sorted(f_exp.items())]
    spectrum = FactoredSpectrum(factors)
    if spectrum.dimension != n:
        raise AssertionError(f"spectrum dimension {spectrum.dimension} != {n}")
    traces = {r: spectrum_trace(spectrum, r) for r in (1, 2, 3)}
    details.update({f"Tr(A^{r})": t for r, t in traces.items()})
    for r in (1, 2):
        if traces[r]:
            reasons.append(
                Reason(ReasonKind.TRACE_MISMATCH, f"Tr(A^{r}) = 0", ((f"Tr(A^{r})", traces[r]),))
            )
    verdict = Verdict.INFEASIBLE if reasons else Verdict.FEASIBLE
    return FeasibilityReport(
        subject, verdict, reasons, spectrum=spectrum, a=(int(a1), int(a2)), details=details
    )


def k2_type_counts(d: int, s: FactoredSpectrum) -> tuple[int, int]:
    """Solve d*alpha + (d-1)*beta = Tr(A^3), alpha + beta = n.

    A Type I vertex lies on d directed triangles, a Type II vertex on d-1.
    """
    n = k2_order(d)
    if s.dimension != n:
        raise ValueError(f"spectrum has dimension {s.dimension}, need {n}")
    beta = d * n - spectrum_trace(s, 3)
    return n - beta, beta


def k2_counting_closure(d: int, alpha: int, beta: int) -> Reason | None:
    """Arc count between Type I and Type II vertices of a (d,2;+1)-digraph.

    Type II vertices induce disjoint directed cycles, so each sends d-1 arcs
    to Type I vertices and receives d-1 from them. A Type I vertex v has its
    outlier among Type I vertices and so must reach every Type II vertex in
    two steps; with s out-neighbours of its own type it reaches at most
    2(d-s) + d*s of them. Returns the contradiction, or None if none arises.
    """
    internal = alpha * d - beta * (d - 1)

    def reach(s: int) -> int:
        return 2 * (d - s) + d * s

    s_min = next((s for s in range(d + 1) if reach(s) >= beta), None)
    if s_min is None or s_min * alpha > internal:
        witness = (
            ("type_i_internal_arcs", internal),
            ("required_min_out_degree", s_min if s_min is not None else d + 1),
            ("required_internal_arcs", s_min * alpha if s_min is not None else -1),
            ("reach_without_internal_arcs", reach(0)),
            ("reach_below_required", reach(s_min - 1) if s_min else reach(0)),
            ("type_ii_vertices", beta),
        )
        return Reason(ReasonKind.COUNTING_CLOSURE, "Type I vertices reach all Type II in 2 steps", witness)
    return None


def _k2_candidates(d: int) -> list[tuple[str, PermutationVector]]:
    n = k2_order(d)
    cases = []
    for w in table1_divisors(d):
        cases.append((f"outlier-regular omega={w}", PermutationVector({w: n // w})))
    for label, low in (("Type A", 4), ("Type B", 2)):
        rest = n - low
        for length in divisors(rest):
            if length > low and length % 2 == 0:
                cases.append((label, PermutationVector({low: 1, length: rest // length})))
    return cases


def k2_enumerate_cases(d: int) -> list[FeasibilityReport]:
    """Run every outlier-regular, Type A and Type B cycle type for (d,2;+1).

    Type A / Type B candidates have exactly two cycle lengths, both even.
    Spectrally feasible survivors get the Type I / Type II arc count.
    """
    n = k2_order(d)
    reports = []
    for label, pv in _k2_candidates(d):
        report = k2_charpoly(d, pv)
        report.subject = Subject(d, 2, pv=pv, case=label)
        if len(pv.counts) == 1 and pv.lengths[0] == n:
            size = d * n
            if size % 3:
                report.reasons.append(
                    Reason(
                        ReasonKind.DIVISIBILITY,
                        "vertex-transitive: 3 | d(M(d,2)+1)",
                        (("size", size), ("remainder", size % 3)),
                    )
                )
                report.verdict = Verdict.INFEASIBLE
        if report.feasible:
            alpha, beta = k2_type_counts(d, report.spectrum)
            report.alpha_beta = (alpha, beta)
            report.details["spectrally_feasible"] = True
            if alpha < 0 or beta < 0:
                report.reasons.append(
                    Reason(ReasonKind.NEGATIVE, "alpha, beta >= 0", (("alpha", alpha), ("beta", beta)))
                )
            else:
                closure = k2_counting_closure(d, alpha, beta)
                if closure is not None:
                    report.reasons.append(closure)
            if report.reasons:
                report.verdict = Verdict.INFEASIBLE
        reports.append(report)
    return reports
