"""``solenoid-lab`` command line.

Exit codes: 0 success, 2 domain or usage error, 3 capability limit,
4 invariant violation (including a failed realizability check).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import conjugacy, dirichlet, intmat, mahler, orbits, zeta
from .arith import format_rational, map_parameter, prime_divisors
from .baer import (
    ENDOMORPHISM,
    _MODE_ALIASES,
    format_chi,
    infinite_height_set,
    localization,
    parse_chi,
    s_integers,
    same_type,
    validate_system,
)
from .errors import (
    CapabilityError,
    ConstructionError,
    DomainError,
    InconsistencyError,
    InvariantViolation,
    ReconstructionError,
    ValidationError,
)

EXIT_OK, EXIT_DOMAIN, EXIT_CAPABILITY, EXIT_INVARIANT = 0, 2, 3, 4


@dataclass
class CommandResult:
    status: int
    payload: str  # standard output
    message: str = ""  # standard error


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # values such as -3/2, -1,0,1 or -1,0;0,1 are data, not flags
        self._negative_number_matcher = re.compile(r"^-\d[\d/,;.|\s-]*$")

    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


# --- formatting helpers -----------------------------------------------------


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def _frac(x) -> str:
    return format_rational(Fraction(x))


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError as exc:
        raise DomainError(f"expected comma-separated integers, got {text!r}") from exc


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError as exc:
        raise DomainError(f"expected comma-separated numbers, got {text!r}") from exc


def _need_format(args, allowed):
    if args.format not in allowed:
        raise DomainError(f"{args.command} supports --format {'|'.join(allowed)}")


# --- system arguments ----------------------------------------------------------


def _add_system(p, r_required=True):
    p.add_argument("--r", required=r_required, help="map parameter a/b")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--s-set", help="finite set of inverted primes, e.g. 2,3")
    g.add_argument("--s-cofinite", help="invert every prime except these, e.g. 3,5")
    g.add_argument("--chi", help='characteristic sequence, e.g. "default=1;2:0"')
    p.add_argument("--mode", default="auto", choices=["auto", "endo"])


def _system(args):
    r = map_parameter(args.r)
    mode = _MODE_ALIASES[args.mode]
    if args.chi:
        chi = parse_chi(args.chi)
    elif args.s_cofinite is not None:
        chi = localization(_ints(args.s_cofinite))
    elif args.s_set is not None:
        chi = s_integers(_ints(args.s_set))
    else:
        # smallest ring on which the map is defined
        needed = prime_divisors(r.denominator)
        if mode != ENDOMORPHISM:
            needed += prime_divisors(r.numerator)
        chi = s_integers(needed)
    return validate_system(chi, r, mode)


def _upto(args, default=None) -> int:
    N = args.upto if args.upto is not None else args.n
    if N is None:
        N = default
    if N is None or N < 1:
        raise DomainError("give a positive --upto (or --n)")
    return N


# --- subcommands ------------------------------------------------------------------


def cmd_fixed_points(args):
    s = _system(args)
    N = _upto(args)
    F = [orbits.fixed_points(s, n) for n in range(1, N + 1)]
    if args.format == "json":
        return _json({"system": str(s), "F": [str(x) for x in F]})
    _need_format(args, ("json", "csv"))
    return _csv(["n", "F"], [(n, f) for n, f in enumerate(F, 1)])


def cmd_orbits(args):
    s = _system(args)
    N = _upto(args)
    prof = orbits.orbit_profile(s, N)
    if args.format == "json":
        return _json({
            "system": str(s),
            "F": [str(x) for x in prof.F],
            "O": [str(x) for x in prof.O],
            "pi": [str(x) for x in prof.pi],
        })
    _need_format(args, ("json", "csv"))
    return _csv(["n", "F", "O", "pi"], zip(range(1, N + 1), prof.F, prof.O, prof.pi))


def cmd_mertens(args):
    s = _system(args)
    N = _upto(args)
    M = orbits.mertens_sum(s, N)
    slope = dirichlet.mertens_slope(s, N) if N >= 1000 and s.prime_set.is_finite else None
    if args.format == "json":
        return _json({"N": N, "M": M, "slope": slope})
    _need_format(args, ("json", "csv"))
    return _csv(["N", "M", "slope"], [(N, repr(M), "" if slope is None else repr(slope))])


def cmd_pi(args):
    s = _system(args)
    N = _upto(args)
    pi = orbits.pi_sum(s, N)
    if args.format == "json":
        return _json({"N": N, "pi": str(pi)})
    _need_format(args, ("json", "csv"))
    return _csv(["N", "pi"], [(N, pi)])


def _rational_payload(rf):
    return {"num_coeffs": list(rf.num), "den_coeffs": list(rf.den), "text": str(rf)}


def cmd_zeta(args):
    if args.coeffs:
        series = zeta.zeta_series(_ints(args.coeffs))
        return _json({"coeffs": [_frac(c) for c in series.coeffs]})
    if args.r is not None and args.s_set is None and args.s_cofinite is None and args.chi is None:
        r = map_parameter(args.r)
        if r.denominator != 1:
            raise DomainError("without a prime set, zeta --r expects an integer circle map")
        return _json(_rational_payload(zeta.rational_zeta_integer_map(r.numerator)))
    s = _system(args)
    N = _upto(args)
    series = zeta.zeta_series([orbits.fixed_points(s, n) for n in range(1, N + 1)])
    return _json({"coeffs": [_frac(c) for c in series.coeffs]})


def cmd_toral_zeta(args):
    A = intmat.parse_matrix(args.matrix)
    N = args.upto if args.upto is not None else 4 * 2 ** len(A)
    rf = zeta.toral_zeta(A, max(N, 4 * 2 ** len(A)))
    out = _rational_payload(rf)
    out["F"] = [str(zeta.toral_fixed_points(A, n)) for n in range(1, N + 1)]
    return _json(out)


def cmd_realizable(args):
    v = zeta.realizable_as_map(_ints(args.coeffs))
    if v.ok:
        return _json({"ok": True})
    payload = _json({"ok": False, "fail_at": v.fail_at, "witness": str(v.witness), "reason": v.reason})
    return CommandResult(EXIT_INVARIANT, payload)


def cmd_mahler(args):
    coeffs = _ints(args.poly)
    m = mahler.mahler_measure(coeffs)
    monic = bool(coeffs) and coeffs[0] == 1
    cyc = mahler.is_cyclotomic_product(coeffs) if monic else None
    return _json({"poly": coeffs, "measure": m, "cyclotomic_product": cyc})


def cmd_entropy(args):
    if args.matrix:
        chk = mahler.toral_entropy_check(intmat.parse_matrix(args.matrix), _upto(args, 50))
        return _json({"mahler": chk.mahler, "growth": chk.growth, "gap": chk.gap})
    if args.r is None:
        raise DomainError("entropy needs --r or --matrix")
    e = mahler.abramov_entropy(args.r)
    return _json({"h": e.value, "exact_arg": e.exact_arg})


def cmd_lehmer_scan(args):
    found = mahler.lehmer_scan(args.max_degree, args.max_height, args.threshold, args.workers)
    if args.format == "json":
        return _json([{"poly": list(p), "measure": m} for p, m in found])
    _need_format(args, ("json", "csv"))
    return _csv(["polynomial", "measure"], [(" ".join(map(str, p)), repr(m)) for p, m in found])


def _decision_payload(dec):
    out = {"status": dec.status, "reason": dec.reason, "bound": dec.bound}
    if dec.witness is not None:
        out["witness"] = intmat.format_matrix(dec.witness)
        out["det"] = dec.det
        out["coords"] = list(dec.coords) if dec.coords is not None else None
    if dec.modulus is not None:
        out["modulus"] = dec.modulus
    return out


def cmd_conjugacy(args):
    A, B = intmat.parse_matrix(args.a), intmat.parse_matrix(args.b)
    primes = _ints(args.primes) if args.primes else []
    dec = conjugacy.conjugate_over_ring(A, B, primes, args.bound)
    out = _decision_payload(dec)
    lat = conjugacy.intertwiner_lattice(A, B)
    out["lattice_rank"] = lat.rank
    out["lattice_basis"] = [intmat.format_matrix(Q) for Q in lat.basis]
    if lat.rank == 2 and len(A) == 2:
        out["determinant_form"] = list(conjugacy.determinant_form(lat))
    return _json(out)


def cmd_poset(args):
    mats = [intmat.parse_matrix(t) for t in args.matrices.split("|") if t.strip()]
    P = conjugacy.poset_build(mats, _ints(args.primes) if args.primes else [], args.bound)
    if args.format in ("dot", None):
        return conjugacy.to_dot(P)
    _need_format(args, ("dot", "json"))
    return _json({
        "labels": P.labels,
        "levels": [[list(c) for c in lv] for lv in P.levels],
        "edges": [[list(a), list(b)] for a, b in P.edges],
        "unknown": [list(u) for u in P.unknown],
        "first_merge_level": P.first_merge_level(),
    })


def cmd_dirichlet(args):
    s = _system(args)
    N = _upto(args, 10**5)
    is_ref = s.r == 2 and s.prime_set.kind == "cofinite" and s.prime_set.primes == (3, 5)
    rows = []
    for sv in _floats(args.s):
        part = dirichlet.dirichlet_partial(s, sv, N)
        ref = dirichlet.dirichlet_reference_3_5(sv) if is_ref else None
        rows.append((sv, part.value, ref, part.tail_bound))
    if args.format == "json":
        return _json([{"s": a, "partial": b, "reference": c, "tail_bound": d} for a, b, c, d in rows])
    _need_format(args, ("json", "csv"))
    return _csv(["s", "partial", "reference", "tail_bound"],
                [(repr(a), repr(b), "" if c is None else repr(c), repr(d)) for a, b, c, d in rows])


def cmd_growth_construct(args):
    if args.theta:
        theta = _ints(args.theta)
    else:
        N = _upto(args, 12)
        theta = [2 ** (n * n) for n in range(2, N + 1)]
    g = dirichlet.growth_construction(theta, args.amend_prefix)
    return _json({
        "stages": list(g.stages()),
        "multiplicities": g.multiplicities,
        "theta": [str(t) for t in g.theta],
        "amended_theta": [str(t) for t in g.amended_theta],
        "F": [str(f) for f in g.F_product],
        "flags": g.flags,
    })


def cmd_boundary_scan(args):
    s = _system(args)
    rows = zeta.boundary_profile(s, _floats(args.radii), _floats(args.angles), _upto(args, 200))
    if args.format == "json":
        return _json([row.__dict__ for row in rows])
    _need_format(args, ("json", "csv"))
    return _csv(["radius", "angle", "re", "im", "magnitude"],
                [(repr(r.radius), repr(r.angle), repr(r.re), repr(r.im), repr(r.magnitude)) for r in rows])


def cmd_classify_type(args):
    chi = parse_chi(args.chi)
    out = {"chi": format_chi(chi), "infinite_height_set": str(infinite_height_set(chi))}
    if args.other:
        out["same_type"] = same_type(chi, parse_chi(args.other))
    if args.r:
        try:
            validate_system(chi, args.r, args.mode)
            out["valid"] = True
        except ValidationError as exc:
            out["valid"] = False
            out["failing_prime"] = exc.prime
    return _json(out)


# --- parser -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="solenoid-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, fmt="json", system=False, r_required=True, help=None):
        p = sub.add_parser(name, help=help)
        if system:
            _add_system(p, r_required)
        p.add_argument("--format", default=fmt, choices=["json", "csv", "dot"])
        p.add_argument("--n", type=int)
        p.add_argument("--upto", type=int)
        p.set_defaults(func=func)
        return p

    add("fixed-points", cmd_fixed_points, "csv", True, help="F(n) for n <= N")
    add("orbits", cmd_orbits, "csv", True, help="F, O and pi for n <= N")
    add("mertens", cmd_mertens, "csv", True, help="Mertens sum and slope")
    add("pi", cmd_pi, "json", True, help="number of closed orbits of length <= N")
    p = add("zeta", cmd_zeta, "json", True, r_required=False, help="zeta series or closed form")
    p.add_argument("--coeffs", help="fixed point counts F(1),...,F(N)")
    p = add("toral-zeta", cmd_toral_zeta, help="rational zeta function of a toral automorphism")
    p.add_argument("--matrix", required=True, help='rows separated by ";", e.g. "2,1;1,1"')
    p = add("realizable", cmd_realizable, help="can a sequence count periodic points of a map?")
    p.add_argument("--coeffs", required=True)
    p = add("mahler", cmd_mahler, help="logarithmic Mahler measure (coefficients leading first)")
    p.add_argument("--poly", required=True)
    p = add("entropy", cmd_entropy, help="entropy log max(|a|,|b|), or a toral check")
    p.add_argument("--r")
    p.add_argument("--matrix")
    p = add("lehmer-scan", cmd_lehmer_scan, "csv", help="small Mahler measures by exhaustive search")
    p.add_argument("--max-degree", type=int, required=True)
    p.add_argument("--max-height", type=int, default=1)
    p.add_argument("--threshold", type=float, required=True)
    p.add_argument("--workers", type=int)
    p = add("conjugacy", cmd_conjugacy, help="conjugacy of two integer matrices over Z[1/primes]")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--primes", default="")
    p.add_argument("--bound", type=int, default=100)
    p = add("poset", cmd_poset, "dot", help="conjugacy classes as more primes are inverted")
    p.add_argument("--matrices", required=True, help='matrices separated by "|"')
    p.add_argument("--primes", default="")
    p.add_argument("--bound", type=int, default=100)
    p = add("dirichlet", cmd_dirichlet, "csv", True, help="orbit Dirichlet series partial sums")
    p.add_argument("--s", default="3")
    p = add("growth-construct", cmd_growth_construct, help="prescribed growth from products of solenoids")
    p.add_argument("--theta", help="targets theta_2, theta_3, ... (default 2^(n^2))")
    p.add_argument("--amend-prefix", type=int, default=0)
    p = add("boundary-scan", cmd_boundary_scan, "csv", True, help="truncated log-zeta on circles")
    p.add_argument("--radii", default="0.25,0.5")
    p.add_argument("--angles", default="0")
    p = add("classify-type", cmd_classify_type, help="canonical form and type of a subgroup of Q")
    p.add_argument("--chi", required=True)
    p.add_argument("--other")
    p.add_argument("--r")
    p.add_argument("--mode", default="auto", choices=["auto", "endo"])
    return parser


def run(argv) -> CommandResult:
    try:
        args = build_parser().parse_args(list(argv))
    except _UsageError as exc:
        return CommandResult(EXIT_DOMAIN, "", str(exc))
    try:
        out = args.func(args)
    except (DomainError, ValueError, ZeroDivisionError) as exc:
        return CommandResult(EXIT_DOMAIN, "", f"error: {exc}\n")
    except (CapabilityError, ReconstructionError) as exc:
        return CommandResult(EXIT_CAPABILITY, "", f"error: {exc}\n")
    except (InvariantViolation, InconsistencyError, ConstructionError) as exc:
        return CommandResult(EXIT_INVARIANT, "", f"error: {exc}\n")
    if isinstance(out, CommandResult):
        return out
    return CommandResult(EXIT_OK, out)


def main(argv=None) -> int:
    res = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(res.payload)
    sys.stderr.write(res.message)
    return res.status


if __name__ == "__main__":
    sys.exit(main())
