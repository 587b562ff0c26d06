import pytest
from hypothesis import given, settings, strategies as st

from cube_obstruct.arithmetic import is_cube_free, is_prime, primes_up_to
from cube_obstruct.curve_local import BadReductionError, count_points_naive, reduce_mod_p
from cube_obstruct.obstruction import (
    ASSUMED,
    FAIL,
    NONCRITICAL_ASSUMABLE,
    PASS,
    ObstructionInputError,
    QCongruenceError,
    QNotPrimeError,
    check_prime_in_S,
    check_theorem_aux,
    check_theorem_main,
    compute_traces,
    enumerate_S,
    find_admissible_q,
    revalidate,
)
from cube_obstruct.serialize import certificate_to_dict


def _by_name(cert):
    out = {}
    for h in cert.hypotheses:
        out.setdefault(h.name, []).append(h)
    return out


@pytest.mark.parametrize("p,in_S,ordinary", [(7, True, True), (11, False, False), (13, True, True)])
def test_check_prime_in_S_examples(p, in_S, ordinary):
    r = check_prime_in_S(3, p, 1)
    assert r.in_S is in_S
    assert r.ordinary is ordinary
    assert r.good_reduction


def test_check_prime_in_S_details():
    r = check_prime_in_S(3, 13, 1)
    assert r.order_mod_p == 12 and r.condition_c and r.condition_b
    r = check_prime_in_S(3, 7, 7)
    assert r.condition_b is False and not r.in_S
    r = check_prime_in_S(3, 7)
    assert r.condition_b is None and r.in_S


def test_check_prime_in_S_errors():
    with pytest.raises(BadReductionError):
        check_prime_in_S(5, 5, 1)
    with pytest.raises(ObstructionInputError):
        check_prime_in_S(3, 3, 1)
    with pytest.raises(ObstructionInputError):
        check_prime_in_S(3, 49, 1)
    with pytest.raises(ObstructionInputError):
        check_prime_in_S(3, 7, 0)


def test_anomalous_equivalence():
    # for p >= 7, p | #E(F_p) exactly when a_p = 1
    for n in (3, 5, 6, 7, 10, 12):
        for p in primes_up_to(3000):
            if p < 7 or (6 * n) % p == 0:
                continue
            r = check_prime_in_S(n, p, 1)
            assert (not r.condition_c) == (r.trace == 1)


def test_p5_uses_direct_divisibility():
    # a_5 = -4 would give 5 | 10 without being anomalous, so p = 5 cannot use
    # the a_p = 1 shortcut; for this family 5 is supersingular and #E = 6
    assert (5 + 1 - (-4)) % 5 == 0
    for n in range(3, 200):
        if is_cube_free(n) and n % 5:
            r = check_prime_in_S(n, 5, 1)
            assert r.trace == 0 and r.order_mod_p == 6 and r.condition_c
            assert not r.in_S


def test_enumerate_S_small():
    S, stats, reports = enumerate_S(3, 100, 1)
    assert 7 in S and 13 in S
    assert all(p % 3 == 1 for p in S)
    assert S == sorted(S)


@pytest.mark.parametrize("n", [3, 5, 10])
def test_enumerate_S_matches_per_prime_checks(n):
    S, stats, _ = enumerate_S(n, 3000, 1)
    expected = [p for p in primes_up_to(3000) if p >= 5 and (6 * n) % p and check_prime_in_S(n, p, 1).in_S]
    assert S == expected
    assert stats.s_count == len(S)


def test_density_n3():
    S, stats, _ = enumerate_S(3, 10**5, 1)
    assert abs(stats.density - 0.5) < 0.02
    assert stats.ordinary_density >= 0.99
    assert stats.prime_count == 9592


def test_parallel_scan_matches_serial():
    primes = [p for p in primes_up_to(20000) if p >= 5]
    assert compute_traces(3, primes, jobs=2) == compute_traces(3, primes, jobs=1)


def test_known_traces_are_checked():
    with pytest.raises(ObstructionInputError):
        compute_traces(3, [7], known={7: 3})
    assert compute_traces(3, [7, 13], known={7: 5}) == {7: 5, 13: 2}


def test_aux_relaxed_worked_example():
    cert = check_theorem_aux(3, 7, q=29, mode="relaxed", sha_order=1)
    assert cert.conclusion is not None
    assert "cannot be represented as x³+y³" in cert.conclusion
    assert all(h.status == PASS for h in cert.hypotheses)
    texts = [h.text() for h in cert.hypotheses]
    assert "ell_not_dividing_6pn: pass (29 ∤ 126)" in texts
    assert "no_p_torsion: pass (#=30, 7 ∤ 30)" in texts
    assert cert.sigma == [29] and cert.q == 29


def test_aux_strict_worked_example_fails_only_p_gt_7():
    cert = check_theorem_aux(3, 7, q=29, mode="strict", sha_order=1)
    assert cert.conclusion is None
    failed = [h.name for h in cert.hypotheses if h.status != PASS]
    assert failed == ["p_gt_7"]
    assert "relaxed" in _by_name(cert)["p_gt_7"][0].witness["text"]


def test_aux_strict_p13_q53():
    cert = check_theorem_aux(3, 13, q=53, mode="strict", sha_order=1)
    assert cert.conclusion is not None
    h = _by_name(cert)
    assert h["no_p_torsion"][0].witness["order"] == 54
    assert h["ell_not_dividing_6pn"][0].witness["six_pn"] == 234


def test_aux_q_errors():
    with pytest.raises(QCongruenceError):
        check_theorem_aux(3, 13, q=59, sha_order=1)
    with pytest.raises(QNotPrimeError):
        check_theorem_aux(3, 13, q=27, sha_order=1)
    with pytest.raises(ObstructionInputError):
        check_theorem_aux(3, 13, sha_order=1)
    with pytest.raises(ObstructionInputError):
        check_theorem_aux(3, 13, q=53, sigma=[53], sha_order=1)


def test_aux_failure_kinds_are_distinct():
    # ell | 6pn
    cert = check_theorem_aux(3, 13, sigma=[2], sha_order=1)
    assert _by_name(cert)["ell_not_dividing_6pn"][0].status == FAIL
    # p-torsion present: #E_3(F_l) divisible by 13 for some l
    ell = next(l for l in primes_up_to(5000) if l > 3 and reduce_mod_p(3, l).order() % 13 == 0)
    cert = check_theorem_aux(3, 13, sigma=[ell], sha_order=1)
    assert _by_name(cert)["no_p_torsion"][0].status == FAIL
    assert cert.conclusion is None
    # p not in S: 11 is supersingular for E_3
    cert = check_theorem_aux(3, 11, q=23, mode="relaxed", sha_order=1)
    assert _by_name(cert)["ordinary_reduction"][0].status == FAIL
    assert cert.conclusion is None


def test_sigma_mode_records_assumed_extension():
    cert = check_theorem_aux(3, 13, sigma=[53], sha_order=1)
    h = _by_name(cert)["galois_group_cyclic_of_order_p"][0]
    assert h.status == ASSUMED
    assert h.witness["text"] == "extension existence asserted by caller"
    assert "galois_group_cyclic_of_order_p" in NONCRITICAL_ASSUMABLE
    assert cert.conclusion is not None


def test_missing_sha_blocks_conclusion():
    cert = check_theorem_aux(3, 13, q=53)
    assert _by_name(cert)["sha_p_part_trivial"][0].status == ASSUMED
    assert cert.conclusion is None
    assert check_theorem_main(3, 13).conclusion is None


def test_main_certificate():
    cert = check_theorem_main(3, 7, sha_order=1)
    assert cert.conclusion is not None and "Z_7" in cert.conclusion
    assert check_theorem_main(6, 7, sha_order=1).conclusion is None  # 6 is a rational cube sum


@pytest.mark.parametrize("n,p,count,mode,expected", [
    (3, 7, 1, "relaxed", [29]),
    (3, 13, 1, "strict", [53]),
    (3, 7, 1, "strict", []),
])
def test_find_admissible_q(n, p, count, mode, expected):
    assert find_admissible_q(n, p, count, mode, sha_order=1) == expected


def test_find_admissible_q_outputs_pass():
    qs = find_admissible_q(3, 19, 5, "strict", sha_order=1)
    assert len(qs) == 5 and qs == sorted(qs)
    for q in qs:
        assert q % 19 == 1 and is_prime(q)
        assert check_theorem_aux(3, 19, q=q, sha_order=1).conclusion is not None


def test_find_admissible_q_ceiling():
    assert len(find_admissible_q(3, 13, 1000, "strict", sha_order=1, q_ceiling=500)) < 1000


def test_find_admissible_q_rejects_p_outside_S():
    with pytest.raises(ObstructionInputError):
        find_admissible_q(3, 11, 1)


def test_revalidate_detects_tampering():
    doc = certificate_to_dict(check_theorem_aux(3, 7, q=29, mode="relaxed", sha_order=1))
    assert revalidate(doc) == []
    for h in doc["hypotheses"]:
        if h["name"] == "no_p_torsion":
            h["witness"]["order"] = 31
    assert revalidate(doc)
    doc = certificate_to_dict(check_theorem_aux(3, 7, q=29, mode="strict", sha_order=1))
    doc["conclusion"] = "forged"
    assert revalidate(doc)


cube_free = st.integers(min_value=3, max_value=60).filter(is_cube_free)
small_primes = st.sampled_from([p for p in primes_up_to(60) if p >= 5])


@given(cube_free, small_primes, st.integers(min_value=0, max_value=30),
       st.sampled_from(["strict", "relaxed"]), st.sampled_from([None, 1, 2, 7, 11]))
@settings(max_examples=40, deadline=None)
def test_certificates_never_overclaim(n, p, k, mode, sha):
    q = next(q for q in range(p + 1 + k * p, 10**6, p) if is_prime(q))
    cert = check_theorem_aux(n, p, q=q, mode=mode, sha_order=sha)
    bad = [h for h in cert.hypotheses
           if h.status == FAIL or (h.status == ASSUMED and h.name not in NONCRITICAL_ASSUMABLE)]
    assert (cert.conclusion is None) == bool(bad)
    assert revalidate(certificate_to_dict(cert)) == []
    for h in cert.hypotheses:
        if h.name == "no_p_torsion" and "order" in h.witness:
            assert h.witness["order"] == count_points_naive(reduce_mod_p(n, h.witness["ell"]))
