"""Command-line interface: ``cube-obstruct <command> ...``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .arithmetic import ArithmeticInputError
from .cache import CacheError, cache_load, cache_store
from .curve_global import (
    CurveInputError,
    TorsionInconclusive,
    build_curve,
    local_data,
    rational_point_search,
    torsion_trivial_certificate,
)
from .curve_local import BadReductionError, reduce_mod_p
from .lseries import LSeriesInconclusive, rational_cube_sum_verdict
from .obstruction import (
    DEFAULT_EPS,
    DEFAULT_HEIGHT,
    ObstructionInputError,
    check_theorem_aux,
    check_theorem_main,
    enumerate_S,
    find_admissible_q,
)
from .serialize import dumps, emit_certificate


def _sha_note(sha):
    return f"|Sha| = {sha} (supplied)" if sha is not None else "|Sha| not supplied: condition (b) assumed"


def cmd_analyze(args) -> int:
    curve = build_curve(args.n)
    torsion = torsion_trivial_certificate(curve)
    verdict = rational_cube_sum_verdict(args.n, args.height, args.eps)
    S, _, _ = enumerate_S(args.n, 100, args.sha_order)
    doc = {
        "n": curve.n,
        "curve": {
            "b": curve.b,
            "conductor": curve.conductor,
            "bad_primes": sorted(curve.bad_primes),
            "local": {
                str(p): {"kodaira": ld.kodaira, "conductor_exponent": ld.conductor_exponent}
                for p in sorted(curve.bad_primes)
                for ld in [local_data(curve, p)]
            },
        },
        "torsion": {
            "trivial": True,
            "two_torsion": torsion.two_torsion,
            "three_torsion": torsion.three_torsion,
            "gcd_bound": torsion.gcd_bound,
            "gcd": torsion.gcd,
        },
        "cube_sum_verdict": verdict.as_dict(),
        "sha_order": args.sha_order,
        "admissible_primes_up_to_100": S,
    }
    if args.json:
        sys.stdout.write(dumps(doc))
        return 0
    print(f"E_{curve.n}: y^2 = x^3 + ({curve.b})")
    print(f"conductor        {curve.conductor}")
    print(f"bad primes       {sorted(curve.bad_primes)} (of this model)")
    for p, d in doc["curve"]["local"].items():
        print(f"  at {p:<4}         {d['kodaira']:<5} f = {d['conductor_exponent']}")
    print(f"torsion          trivial (gcd of #E(F_l), l <= {torsion.gcd_bound}: {torsion.gcd}; 2- and 3-torsion excluded)")
    line = f"cube sum         {verdict.kind}"
    if verdict.witness is not None:
        line += f" {verdict.witness}"
    if verdict.l1 is not None:
        line += f"  L(1) ~ {verdict.l1.value:.8f} +- {verdict.l1.error_bound:.1e}, w = {verdict.l1.root_number:+d}"
    print(line)
    if verdict.heuristic and verdict.note:
        print(f"                 {verdict.note}")
    print(f"S up to 100      {S}  [{_sha_note(args.sha_order)}]")
    return 0


def cmd_ap(args) -> int:
    build_curve(args.n)  # rejects n that do not define one of the curves E_n
    curve = reduce_mod_p(args.n, args.p)
    a = curve.trace()
    print(f"a_{args.p} = {a}")
    print(f"#E_{args.n}(F_{args.p}) = {curve.order()}")
    return 0


def _load_cache(path, n):
    if path is None or not Path(path).exists():
        return {}
    cache = cache_load(path)
    if cache.n is not None and cache.n != n:
        raise CacheError(f"{path} holds a_p for n = {cache.n}, not {n}")
    return cache.as_dict()


def _density_lines(stats, sha):
    return [
        f"X                    {stats.X}",
        f"pi(X)                {stats.prime_count}",
        f"good primes >= 5     {stats.good_count}",
        f"ordinary primes      {stats.ordinary_count}",
        f"|S|                  {stats.s_count}",
        f"|S| / pi(X)          {stats.density:.6f}",
        f"|S| / #ordinary      {stats.ordinary_density:.6f}",
        f"Sha                  {_sha_note(sha)}",
    ]


def cmd_scan(args) -> int:
    known = _load_cache(args.cache, args.n)
    S, stats, reports = enumerate_S(args.n, args.max, args.sha_order, jobs=args.jobs, known_traces=known)
    if args.cache:
        merged = dict(known)
        merged.update((r.p, r.trace) for r in reports)
        cache_store(args.cache, args.n, merged.items())
    b_col = lambda r: "assumed" if r.condition_b is None else ("yes" if r.condition_b else "no")
    print(f"{'p':>8} {'a_p':>6} {'#E(F_p)':>9} {'ordinary':>8} {'(b)':>7} {'(c)':>4} {'in_S':>5}")
    for r in reports:
        print(f"{r.p:>8} {r.trace:>6} {r.order_mod_p:>9} {'yes' if r.ordinary else 'no':>8} "
              f"{b_col(r):>7} {'yes' if r.condition_c else 'no':>4} {'yes' if r.in_S else 'no':>5}")
    print()
    print("\n".join(_density_lines(stats, args.sha_order)))
    return 0


def cmd_density(args) -> int:
    _, stats, _ = enumerate_S(args.n, args.max, args.sha_order)
    print(f"n                    {args.n}")
    print("\n".join(_density_lines(stats, args.sha_order)))
    return 0


def cmd_search(args) -> int:
    build_curve(args.n)
    w = rational_point_search(args.n, args.height)
    print("none" if w is None else str(w))
    return 0


def cmd_certify(args) -> int:
    if args.q is not None and args.sigma is not None:
        raise ObstructionInputError("give at most one of --q and --sigma")
    common = dict(sha_order=args.sha_order, height=args.height, eps=args.eps)
    if args.q is None and args.sigma is None:
        cert = check_theorem_main(args.n, args.p, mode=args.mode, **common)
    else:
        sigma = None if args.sigma is None else [int(x) for x in args.sigma.split(",") if x]
        cert = check_theorem_aux(args.n, args.p, q=args.q, sigma=sigma, mode=args.mode, **common)
    text = emit_certificate(cert, args.out)
    if args.json:
        sys.stdout.write(text)
    else:
        print(f"theorem {cert.theorem}  mode {cert.mode}  n = {cert.n}  p = {cert.p}"
              + (f"  sigma = {cert.sigma}" if cert.sigma else ""))
        for h in cert.hypotheses:
            print("  " + h.text())
        for note in cert.notes:
            print(f"  note: {note}")
        print("conclusion: " + (cert.conclusion or "none (not every hypothesis passed)"))
    return 0 if cert.conclusion is not None else 1


def cmd_find_q(args) -> int:
    qs = find_admissible_q(args.n, args.p, args.count, args.mode, args.sha_order)
    print(" ".join(map(str, qs)) if qs else "none")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cube-obstruct",
        description="Obstructions to n = x^3 + y^3 over cyclotomic Z_p-extensions and cyclic fields.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="curve summary, torsion certificate, cube-sum verdict")
    p.add_argument("n", type=int)
    p.add_argument("--sha-order", type=int)
    p.add_argument("--height", type=int, default=DEFAULT_HEIGHT)
    p.add_argument("--eps", type=float, default=DEFAULT_EPS)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("ap", help="trace of Frobenius and point count")
    p.add_argument("n", type=int)
    p.add_argument("p", type=int)
    p.set_defaults(func=cmd_ap)

    p = sub.add_parser("scan", help="S-membership table and density statistics")
    p.add_argument("n", type=int)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--sha-order", type=int)
    p.add_argument("--cache")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("certify", help="obstruction certificate")
    p.add_argument("n", type=int)
    p.add_argument("p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--sigma")
    p.add_argument("--mode", choices=("strict", "relaxed"), default="strict")
    p.add_argument("--sha-order", type=int)
    p.add_argument("--out")
    p.add_argument("--height", type=int, default=DEFAULT_HEIGHT)
    p.add_argument("--eps", type=float, default=DEFAULT_EPS)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("density", help="density report for S")
    p.add_argument("n", type=int)
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--sha-order", type=int)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("search", help="bounded-height search for n = x^3 + y^3 over Q")
    p.add_argument("n", type=int)
    p.add_argument("--height", type=int, required=True)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("find-q", help="primes q = 1 mod p giving admissible degree-p fields")
    p.add_argument("n", type=int)
    p.add_argument("p", type=int)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--mode", choices=("strict", "relaxed"), default="strict")
    p.add_argument("--sha-order", type=int)
    p.set_defaults(func=cmd_find_q)
    return parser


_USER_ERRORS = (
    ArithmeticInputError, CurveInputError, BadReductionError, ObstructionInputError,
    CacheError, TorsionInconclusive, LSeriesInconclusive, OSError,
)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _USER_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
