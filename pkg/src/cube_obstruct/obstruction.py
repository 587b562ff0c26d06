"""Admissible primes and obstruction certificates for n = x^3 + y^3.

Two certificate kinds are produced:

* ``main``: p lies in the admissible set S (good ordinary reduction,
  p-part of Sha trivial, p not dividing #E_n(F_p)), so n is not a sum of
  two cubes in the cyclotomic Z_p-extension of Q.
* ``aux``: additionally L/Q is cyclic of degree p, ramified only at primes
  l not dividing 6pn with E_n(F_l)[p] = 0, so n is not a sum of two cubes
  in L.

Nothing here touches Selmer groups; the certificates record which
checkable hypotheses hold and the conclusion they license. The order of
Sha is never computed: it is an input, and without it condition (b) is
marked "assumed".
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .arithmetic import is_cube_free, is_prime, primes_up_to
from .curve_global import CurveEn, build_curve
from .curve_local import BadReductionError, count_points_naive, reduce_mod_p, trace_candidates
from .lseries import CubeSumVerdict, rational_cube_sum_verdict

log = logging.getLogger(__name__)

PASS, FAIL, ASSUMED = "pass", "fail", "assumed"
STRICT, RELAXED = "strict", "relaxed"
# the only hypothesis whose "assumed" status still licenses a conclusion
NONCRITICAL_ASSUMABLE = frozenset({"galois_group_cyclic_of_order_p"})
DEFAULT_HEIGHT = 100
DEFAULT_EPS = 1e-8
DEFAULT_Q_CEILING = 10 ** 7


class ObstructionInputError(ValueError):
    pass


class QNotPrimeError(ObstructionInputError):
    pass


class QCongruenceError(ObstructionInputError):
    """q is not 1 mod p, so Q(mu_q) has no cyclic subfield of degree p."""


# --- the admissible set S ------------------------------------------------------


@dataclass(frozen=True)
class AdmissibilityReport:
    n: int
    p: int
    good_reduction: bool
    ordinary: bool
    trace: int
    order_mod_p: int
    condition_c: bool
    sha_order_input: Optional[int]
    condition_b: Optional[bool]  # None: Sha not supplied, condition assumed

    @property
    def in_S(self) -> bool:
        # an unsupplied Sha order counts as satisfied; certificates mark it "assumed"
        return (
            self.p >= 5
            and self.good_reduction
            and self.ordinary
            and self.condition_b is not False
            and self.condition_c
        )


def _check_sha(p: int, sha_order: Optional[int]) -> Optional[bool]:
    if sha_order is None:
        return None
    if sha_order < 1:
        raise ObstructionInputError("the order of Sha must be a positive integer")
    return sha_order % p != 0


def report_from_trace(n: int, p: int, a_p: int, sha_order: Optional[int]) -> AdmissibilityReport:
    order = p + 1 - a_p
    ordinary = a_p % p != 0
    if ordinary != (p % 3 == 1):
        raise AssertionError(f"ordinarity at {p} disagrees with p mod 3 (a_p = {a_p})")
    return AdmissibilityReport(
        n=n, p=p, good_reduction=True, ordinary=ordinary, trace=a_p,
        order_mod_p=order, condition_c=order % p != 0,
        sha_order_input=sha_order, condition_b=_check_sha(p, sha_order),
    )


def check_prime_in_S(n: int, p: int, sha_order: Optional[int] = None) -> AdmissibilityReport:
    if p < 5 or not is_prime(p):
        raise ObstructionInputError(f"p = {p} must be a prime >= 5")
    if (6 * n) % p == 0:
        raise BadReductionError(f"{p} divides 6n = {6 * n}: not a good prime")
    curve = reduce_mod_p(n, p)
    return report_from_trace(n, p, curve.trace(), sha_order)


@dataclass(frozen=True)
class DensityStats:
    X: int
    prime_count: int  # pi(X), from the sieve
    good_count: int  # good primes 5 <= p <= X
    ordinary_count: int
    s_count: int

    @property
    def density(self) -> float:
        return self.s_count / self.prime_count

    @property
    def ordinary_density(self) -> float:
        return self.s_count / self.ordinary_count if self.ordinary_count else 0.0


def _traces_chunk(args: tuple[int, list[int]]) -> list[tuple[int, int]]:
    n, primes = args
    return [(p, reduce_mod_p(n, p).trace()) for p in primes]


def compute_traces(n: int, primes: Sequence[int], jobs: int = 1,
                   known: Optional[dict[int, int]] = None) -> dict[int, int]:
    """a_p for the given good primes, merged by prime regardless of worker order."""
    wanted = set(primes)
    known = {p: a for p, a in (known or {}).items() if p in wanted}
    for p, a in known.items():
        # a stale or foreign cache must not slip in: the trace is pinned down
        # to six values (or to 0) by p alone
        allowed = {0} if p % 3 == 2 else trace_candidates(p)
        if a not in allowed:
            raise ObstructionInputError(f"supplied a_{p} = {a} is impossible for this family")
    todo = [p for p in primes if p not in known]
    if jobs > 1 and len(todo) > 1000:
        size = -(-len(todo) // (4 * jobs))
        chunks = [(n, todo[i : i + size]) for i in range(0, len(todo), size)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for rows in pool.map(_traces_chunk, chunks):
                known.update(rows)
    else:
        known.update(_traces_chunk((n, todo)))
    return {p: known[p] for p in primes}


def enumerate_S(n: int, X: int, sha_order: Optional[int] = None, jobs: int = 1,
                known_traces: Optional[dict[int, int]] = None
                ) -> tuple[list[int], DensityStats, list[AdmissibilityReport]]:
    """Primes p <= X in S, density statistics, and the per-prime reports."""
    if X < 5:
        raise ObstructionInputError("X must be at least 5")
    curve = build_curve(n)
    all_primes = list(primes_up_to(X))
    good = [p for p in all_primes if p >= 5 and p not in curve.bad_primes]
    traces = compute_traces(n, good, jobs, known_traces)
    reports = [report_from_trace(n, p, traces[p], sha_order) for p in good]
    S = [r.p for r in reports if r.in_S]
    stats = DensityStats(
        X=X, prime_count=len(all_primes), good_count=len(good),
        ordinary_count=sum(r.ordinary for r in reports), s_count=len(S),
    )
    return S, stats, reports


# --- certificates ------------------------------------------------------------------


@dataclass
class Hypothesis:
    name: str
    status: str
    witness: dict

    def text(self) -> str:
        detail = self.witness.get("text")
        return f"{self.name}: {self.status}" + (f" ({detail})" if detail else "")


@dataclass
class ObstructionCertificate:
    theorem: str  # "main" | "aux"
    mode: str
    n: int
    curve: dict
    p: int
    hypotheses: list[Hypothesis]
    heuristic_inputs: dict
    sigma: list[int] = field(default_factory=list)
    q: Optional[int] = None
    conclusion: Optional[str] = None
    notes: list[str] = field(default_factory=list)

    @property
    def licensed(self) -> bool:
        return conclusion_licensed(self.hypotheses)

    def failed(self) -> list[Hypothesis]:
        return [h for h in self.hypotheses if h.status == FAIL]


def conclusion_licensed(hypotheses: Iterable[Hypothesis]) -> bool:
    return all(
        h.status == PASS or (h.status == ASSUMED and h.name in NONCRITICAL_ASSUMABLE)
        for h in hypotheses
    )


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


def _curve_summary(curve: CurveEn) -> dict:
    return {"b": curve.b, "conductor": curve.conductor, "bad_primes": sorted(curve.bad_primes)}


def _cube_sum_hypothesis(verdict: CubeSumVerdict) -> Hypothesis:
    if verdict.kind == "Yes":
        status, text = FAIL, f"witness {verdict.witness}"
    elif verdict.kind == "LikelyNo":
        status, text = PASS, f"no witness to height {verdict.search_height}; L(E_n,1) ~ {verdict.l1.value:.6f} != 0 (heuristic)"
    else:
        status, text = ASSUMED, "undecided: " + verdict.note
    return Hypothesis("n_not_rational_cube_sum", status, {
        "verdict": verdict.kind, "search_height": verdict.search_height, "eps": verdict.eps,
        "text": text,
    })


def _main_hypotheses(curve: CurveEn, p: int, sha_order: Optional[int],
                     verdict: CubeSumVerdict) -> list[Hypothesis]:
    n = curve.n
    hyps = [
        Hypothesis("n_cube_free", _status(is_cube_free(n)), {"n": n, "text": f"n = {n}"}),
        _cube_sum_hypothesis(verdict),
        Hypothesis("p_at_least_5", _status(p >= 5 and is_prime(p)), {"p": p, "text": f"{p} >= 5"}),
    ]
    good = (6 * n) % p != 0
    hyps.append(Hypothesis("good_reduction", _status(good), {
        "p": p, "six_n": 6 * n, "text": f"{p} {'∤' if good else '|'} {6 * n}",
    }))
    if not good:
        hyps.append(Hypothesis("ordinary_reduction", FAIL, {"p": p, "text": "not evaluated: bad prime"}))
        hyps.append(Hypothesis("p_not_dividing_order", FAIL, {"p": p, "text": "not evaluated: bad prime"}))
    else:
        rep = check_prime_in_S(n, p, sha_order)
        hyps.append(Hypothesis("ordinary_reduction", _status(rep.ordinary), {
            "p": p, "a_p": rep.trace, "text": f"a_{p} = {rep.trace} ≢ 0 (mod {p})" if rep.ordinary
            else f"a_{p} = {rep.trace} ≡ 0 (mod {p}), supersingular",
        }))
        hyps.append(Hypothesis("p_not_dividing_order", _status(rep.condition_c), {
            "p": p, "order": rep.order_mod_p,
            "text": f"#={rep.order_mod_p}, {p} {'∤' if rep.condition_c else '|'} {rep.order_mod_p}",
        }))
    sha_ok = _check_sha(p, sha_order)
    hyps.append(Hypothesis(
        "sha_p_part_trivial",
        ASSUMED if sha_ok is None else _status(sha_ok),
        {
            "p": p, "sha_order": sha_order,
            "source": "caller-supplied (--sha-order)" if sha_order is not None else "not supplied",
            "text": "order of Sha not supplied" if sha_order is None
            else f"|Sha| = {sha_order}, {p} {'∤' if sha_ok else '|'} {sha_order}",
        },
    ))
    return hyps


def _heuristic_inputs(sha_order: Optional[int], verdict: CubeSumVerdict) -> dict:
    return {"sha_order": sha_order, "cube_sum_verdict": verdict.as_dict()}


def check_theorem_main(n: int, p: int, sha_order: Optional[int] = None,
                       verdict: Optional[CubeSumVerdict] = None,
                       height: int = DEFAULT_HEIGHT, eps: float = DEFAULT_EPS,
                       mode: str = STRICT) -> ObstructionCertificate:
    curve = build_curve(n)
    if verdict is None:
        verdict = rational_cube_sum_verdict(n, height, eps)
    hyps = _main_hypotheses(curve, p, sha_order, verdict)
    cert = ObstructionCertificate(
        theorem="main", mode=mode, n=n, curve=_curve_summary(curve), p=p,
        hypotheses=hyps, heuristic_inputs=_heuristic_inputs(sha_order, verdict),
    )
    if cert.licensed:
        cert.conclusion = (
            f"{n} is not a sum of two cubes in the cyclotomic Z_{p}-extension Q_∞^({p}) of Q "
            f"(rank E_{n}(Q_∞^({p})) = 0)"
        )
    return cert


def _sigma_hypotheses(n: int, p: int, sigma: Sequence[int]) -> list[Hypothesis]:
    hyps = []
    six_pn = 6 * p * n
    for ell in sigma:
        ok = six_pn % ell != 0
        hyps.append(Hypothesis("ell_not_dividing_6pn", _status(ok), {
            "ell": ell, "six_pn": six_pn, "text": f"{ell} {'∤' if ok else '|'} {six_pn}",
        }))
        if not ok:
            hyps.append(Hypothesis("no_p_torsion", FAIL, {
                "ell": ell, "p": p, "text": f"not evaluated: {ell} divides 6pn",
            }))
            continue
        order = reduce_mod_p(n, ell).order()
        ok = order % p != 0
        hyps.append(Hypothesis("no_p_torsion", _status(ok), {
            "ell": ell, "p": p, "order": order,
            "text": f"#={order}, {p} {'∤' if ok else '|'} {order}",
        }))
    return hyps


def _fixed_aux_hypotheses(curve: CurveEn, p: int, mode: str, sha_order: Optional[int],
                          verdict: CubeSumVerdict) -> tuple[list[Hypothesis], list[str]]:
    """Hypotheses that do not depend on the field L."""
    hyps = _main_hypotheses(curve, p, sha_order, verdict)
    notes: list[str] = []
    if mode == STRICT:
        hyps.append(Hypothesis("p_gt_7", _status(p > 7), {
            "p": p, "text": f"{p} > 7" if p > 7 else
            f"{p} <= 7; the torsion step needs p > 7 (the n=3, p=7, q=29 example passes only in relaxed mode)",
        }))
    else:
        notes.append("relaxed mode: the p > 7 gate is not enforced; the conclusion is heuristic for p <= 7")
    return hyps, notes


def _validate_q(p: int, q: int) -> None:
    if not is_prime(q):
        raise QNotPrimeError(f"q = {q} is not prime")
    if q % p != 1:
        raise QCongruenceError(f"q = {q} is not 1 mod {p} ({q} = {q // p}*{p} + {q % p})")


def check_theorem_aux(n: int, p: int, q: Optional[int] = None,
                      sigma: Optional[Sequence[int]] = None, mode: str = STRICT,
                      sha_order: Optional[int] = None,
                      verdict: Optional[CubeSumVerdict] = None,
                      height: int = DEFAULT_HEIGHT, eps: float = DEFAULT_EPS) -> ObstructionCertificate:
    """Certificate that n is not x^3 + y^3 over a cyclic degree-p field L.

    With q, L is the degree-p subfield of Q(mu_q) and Sigma = {q}. With
    sigma, the caller asserts that a Z/pZ-extension ramified exactly at
    sigma exists; that hypothesis is then recorded as assumed.
    """
    if mode not in (STRICT, RELAXED):
        raise ObstructionInputError(f"unknown mode {mode!r}")
    if (q is None) == (sigma is None):
        raise ObstructionInputError("give exactly one of q or sigma")
    if p < 5 or not is_prime(p):
        raise ObstructionInputError(f"p = {p} must be a prime >= 5")
    curve = build_curve(n)
    if verdict is None:
        verdict = rational_cube_sum_verdict(n, height, eps)
    hyps, notes = _fixed_aux_hypotheses(curve, p, mode, sha_order, verdict)
    if q is not None:
        _validate_q(p, q)
        sigma = [q]
        hyps.append(Hypothesis("galois_group_cyclic_of_order_p", PASS, {
            "p": p, "q": q, "text": f"degree-{p} subfield of Q(μ_{q}); {q} ≡ 1 (mod {p})",
        }))
        field_text = f"L = the degree-{p} subfield of Q(μ_{q})"
    else:
        sigma = sorted(set(sigma))
        if not sigma or not all(is_prime(ell) for ell in sigma):
            raise ObstructionInputError("sigma must be a nonempty list of primes")
        hyps.append(Hypothesis("galois_group_cyclic_of_order_p", ASSUMED, {
            "p": p, "sigma": sigma, "text": "extension existence asserted by caller",
        }))
        field_text = f"L = a Z/{p}Z-extension of Q ramified exactly at {sigma}"
    hyps += _sigma_hypotheses(n, p, sigma)
    cert = ObstructionCertificate(
        theorem="aux", mode=mode, n=n, curve=_curve_summary(curve), p=p,
        hypotheses=hyps, heuristic_inputs=_heuristic_inputs(sha_order, verdict),
        sigma=list(sigma), q=q, notes=notes,
    )
    if cert.licensed:
        cert.conclusion = f"{n} cannot be represented as x³+y³ with x,y ∈ L, {field_text}"
    return cert


def find_admissible_q(n: int, p: int, count: int, mode: str = STRICT,
                      sha_order: Optional[int] = None,
                      q_ceiling: int = DEFAULT_Q_CEILING) -> list[int]:
    """The first `count` primes q = 1 (mod p) passing the q-dependent checks.

    p must lie in S. Certificates for the returned q still carry the
    q-independent hypotheses (Sha, cube-sum verdict) separately.
    """
    report = check_prime_in_S(n, p, sha_order)
    if not report.in_S:
        raise ObstructionInputError(f"p = {p} is not in S for n = {n}")
    if mode == STRICT and p <= 7:
        return []
    found: list[int] = []
    six_pn = 6 * p * n
    q = p + 1
    while len(found) < count and q <= q_ceiling:
        if is_prime(q) and six_pn % q and reduce_mod_p(n, q).order() % p:
            found.append(q)
        q += p
    if len(found) < count:
        log.warning("find_admissible_q: ceiling %d reached with %d of %d", q_ceiling, len(found), count)
    return found


# --- re-validation ---------------------------------------------------------------


def _recheck(h: dict, n: int, p: int) -> str:
    """Recompute a hypothesis status from its witness data alone."""
    w = h["witness"]
    name = h["name"]
    if name == "n_cube_free":
        return _status(is_cube_free(w["n"]))
    if name == "n_not_rational_cube_sum":
        verdict = rational_cube_sum_verdict(n, w["search_height"], w["eps"])
        return _cube_sum_hypothesis(verdict).status
    if name == "p_at_least_5":
        return _status(w["p"] >= 5 and is_prime(w["p"]))
    if name == "good_reduction":
        return _status(w["six_n"] % w["p"] != 0)
    if name == "ordinary_reduction":
        if "a_p" not in w:
            return FAIL
        a_p = w["p"] + 1 - count_points_naive(reduce_mod_p(n, w["p"]))
        if a_p != w["a_p"]:
            return "mismatch"
        return _status(a_p % w["p"] != 0)
    if name == "p_not_dividing_order":
        if "order" not in w:
            return FAIL
        order = count_points_naive(reduce_mod_p(n, w["p"]))
        if order != w["order"]:
            return "mismatch"
        return _status(order % w["p"] != 0)
    if name == "sha_p_part_trivial":
        ok = _check_sha(w["p"], w["sha_order"])
        return ASSUMED if ok is None else _status(ok)
    if name == "p_gt_7":
        return _status(w["p"] > 7)
    if name == "galois_group_cyclic_of_order_p":
        if "q" in w:
            return _status(is_prime(w["q"]) and w["q"] % w["p"] == 1)
        return ASSUMED
    if name == "ell_not_dividing_6pn":
        return _status(w["six_pn"] % w["ell"] != 0 and w["six_pn"] == 6 * p * n)
    if name == "no_p_torsion":
        if "order" not in w:
            return FAIL
        order = count_points_naive(reduce_mod_p(n, w["ell"]))
        if order != w["order"]:
            return "mismatch"
        return _status(order % w["p"] != 0)
    return "unknown"


def revalidate(doc: dict) -> list[str]:
    """Problems found when re-deriving a serialized certificate; empty means valid."""
    problems = []
    n, p = doc["n"], doc["p"]
    for h in doc["hypotheses"]:
        status = _recheck(h, n, p)
        if status != h["status"]:
            problems.append(f"{h['name']}: recorded {h['status']}, recomputed {status}")
    licensed = conclusion_licensed(Hypothesis(h["name"], h["status"], h["witness"]) for h in doc["hypotheses"])
    if licensed != ("conclusion" in doc):
        problems.append("conclusion presence does not match hypothesis statuses")
    if doc["theorem"] == "aux" and doc["mode"] == STRICT and p <= 7 and "conclusion" in doc:
        problems.append("strict aux certificate with p <= 7 carries a conclusion")
    return problems
