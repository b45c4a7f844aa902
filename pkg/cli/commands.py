"""
Subcommand handlers.

Each handler takes the parsed argparse namespace and returns a CommandResult
holding the JSON payload, the text rendering and the exit code. Printing is
left to the entry point.
"""

from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Dict, List, Optional

from config.settings import CACHE_DIR, CACHE_MAX_AGE_HOURS, CONFIG_DIR, SCHEMA_VERSION
from models.catalog import MapCatalog, generate_expression
from models.points import PlaceSet
from models.rational_map import (
    RationalMap, bad_primes, descriptor, is_monic_integer_polynomial,
    rational_critical_points, reduce_mod_p
)
from models.reports import AnalysisReport, BoundFamily, BoundValue, VerificationReport
from services.bounds_service import BoundsService
from services.cache_service import get_cache_service
from services.dynamics_service import DynamicsService
from services.verify_service import VerifyService
from utils.errors import ParseError, PreconditionError
from utils.parsing import parse_int_list, parse_map, parse_point, parse_points, parse_primes
from cli import tables

LEMMAS = ('distance', 'ramified', 'ramified-cycle', 'tail', 'condition-count',
          'four-point', 'baron', 'injectivity', 'main-theorem')

FAMILIES = ('dfixed', 'period2', 'baron-cycle')


@dataclass
class CommandResult:
    payload: dict
    text: str
    exit_code: int = 0
    reports: List[VerificationReport] = field(default_factory=list)


def _exit_code(reports: List[VerificationReport]) -> int:
    return 1 if any(r.failed for r in reports) else 0


# ----------------------------------------------------------------------
# argument helpers
# ----------------------------------------------------------------------

def load_catalog() -> MapCatalog:
    return MapCatalog(CONFIG_DIR / "maps.json")


def resolve_map(text: str, catalog: Optional[MapCatalog] = None) -> RationalMap:
    """Parse a map expression; '@key' names a catalog entry."""
    stripped = text.strip()
    if stripped.startswith("@"):
        catalog = catalog or load_catalog()
        entry = catalog.get(stripped[1:])
        if entry is None:
            known = ", ".join(f"@{k}" for k in catalog.keys())
            raise ParseError(f"unknown catalog map '{stripped}' (known: {known})", text, 0)
        return entry.to_map()
    return parse_map(text)


def build_verify_service(args) -> VerifyService:
    cache_dir = getattr(args, 'cache_dir', None)
    cache_dir = Path(cache_dir) if cache_dir else CACHE_DIR
    cache = get_cache_service(cache_dir, CACHE_MAX_AGE_HOURS)
    dynamics = DynamicsService(period_cap=args.period_cap, cache=cache)
    return VerifyService(dynamics=dynamics, bounds=BoundsService())


def _places(args, *maps: RationalMap) -> PlaceSet:
    """--S when given, else the union of the maps' bad primes."""
    if getattr(args, 'S', None) is not None:
        return parse_primes(args.S)
    S = PlaceSet()
    for m in maps:
        S = S.union(bad_primes(m))
    return S


def _family(args) -> BoundFamily:
    return BoundFamily.parse(args.family)


def _required_point(args, name: str):
    text = getattr(args, name, None)
    if text is None:
        raise PreconditionError(f"--lemma {args.lemma} needs --{name}")
    return parse_point(text)


# ----------------------------------------------------------------------
# analyze
# ----------------------------------------------------------------------

def analyze_map(phi: RationalMap, verify: VerifyService, cap: int,
                family: BoundFamily = BoundFamily.EVERTSE) -> AnalysisReport:
    """Degree, reduction, critical and periodic points, bounds and checks for one map."""
    bad = bad_primes(phi, verify.budget)
    critical = rational_critical_points(phi, verify.budget) if phi.degree >= 2 else []
    periodic = verify.dynamics.periodic_points(phi, cap)
    monic = is_monic_integer_polynomial(phi)

    bounds: Dict[str, BoundValue] = {}
    verifications: List[VerificationReport] = []
    if phi.degree >= 2:
        bounds['kappa*d+lambda'] = verify.bounds.main_theorem_bound(phi.degree, bad.s, family)
        if len(bad) == 0:
            bounds['d+5'] = verify.bounds.everywhere_good_bound(phi.degree)
        if monic:
            bounds['d+1'] = verify.bounds.baron_bound(phi.degree)
        verifications.append(verify.verify_main_theorem(phi, S=bad, cap=cap, family=family))
    bounds['MS period'] = verify.bounds.ms_period_bound(len(bad))
    verifications.append(verify.check_periodic_distances(phi, bad, cap))
    if monic and phi.degree >= 2:
        verifications.append(verify.verify_baron(phi, cap))

    return AnalysisReport(
        map_descriptor=descriptor(phi),
        degree=phi.degree,
        bad_primes=list(bad),
        s_value=bad.s,
        critical_points=[(str(P), m) for P, m in critical],
        period_cap=cap,
        periodic_points=[(str(pp.point), pp.minimal_period) for pp in periodic],
        bounds=bounds,
        verifications=verifications,
    )


def cmd_analyze(args) -> CommandResult:
    phi = resolve_map(args.map)
    verify = build_verify_service(args)
    report = analyze_map(phi, verify, args.period_cap, _family(args))
    return CommandResult(report.to_dict(), tables.render_analysis(report),
                         1 if report.any_failed else 0, report.verifications)


# ----------------------------------------------------------------------
# bounds
# ----------------------------------------------------------------------

def cmd_bounds(args) -> CommandResult:
    family = _family(args)
    rows = BoundsService().bound_table(args.d, args.s, family)
    payload = {
        'schema': SCHEMA_VERSION,
        'd': args.d,
        's': args.s,
        'family': family.value,
        'bounds': {name: value.to_dict() for name, value in rows},
    }
    header = f"d = {args.d}, s = {args.s}, family = {family.value}"
    return CommandResult(payload, f"{header}\n{tables.render_bounds(rows)}")


# ----------------------------------------------------------------------
# generate
# ----------------------------------------------------------------------

def cmd_generate(args) -> CommandResult:
    ns = parse_int_list(args.ns) if args.ns else None
    expression = generate_expression(args.family, d=args.d, ns=ns, a=args.a, b=args.b)
    payload = {'schema': SCHEMA_VERSION, 'family': args.family, 'expression': expression}
    return CommandResult(payload, expression)


# ----------------------------------------------------------------------
# verify
# ----------------------------------------------------------------------

def _run_lemma(args, phi: RationalMap, verify: VerifyService) -> List[VerificationReport]:
    lemma = args.lemma
    cap = args.period_cap
    psi = resolve_map(args.psi) if getattr(args, 'psi', None) else None

    if lemma == 'baron':
        return [verify.verify_baron(phi, cap)]
    if lemma == 'injectivity':
        if args.p is None:
            raise PreconditionError("--lemma injectivity needs --p")
        return [verify.check_injectivity_mod_p(phi, args.p, cap)]
    if lemma == 'main-theorem':
        S = parse_primes(args.S) if args.S is not None else None
        return [verify.verify_main_theorem(phi, psi=psi, S=S, cap=cap, family=_family(args))]

    S = _places(args, phi) if psi is None else _places(args, phi, psi)
    if lemma == 'distance':
        if args.P is None and args.Q is None:
            return [verify.check_periodic_distances(phi, S, cap)]
        P, Q = _required_point(args, 'P'), _required_point(args, 'Q')
        return [verify.check_distance_preservation(phi, P, Q, S, psi=psi, cap=cap)]
    if lemma in ('ramified', 'ramified-cycle'):
        Q, P = _required_point(args, 'Q'), _required_point(args, 'P')
        return [verify.check_ramified_integrality(phi, Q, P, S, cycle_mode=lemma == 'ramified-cycle', cap=cap)]
    if lemma == 'tail':
        P, Q, R = _required_point(args, 'P'), _required_point(args, 'Q'), _required_point(args, 'R')
        return [verify.check_tail_integrality(phi, P, Q, R, S, cap)]
    if lemma == 'condition-count':
        if not args.A:
            raise PreconditionError("--lemma condition-count needs --A")
        return [verify.check_condition_count(phi, parse_points(args.A), S, cap)]
    if lemma == 'four-point':
        if not args.points:
            raise PreconditionError("--lemma four-point needs --points")
        target = parse_point(args.P) if args.P is not None else None
        return [verify.check_four_point_membership(phi, parse_points(args.points), S, cap, P=target)]
    raise ParseError(f"unknown lemma '{lemma}' (expected one of {', '.join(LEMMAS)})", lemma, 0)


def cmd_verify(args) -> CommandResult:
    phi = resolve_map(args.map)
    verify = build_verify_service(args)
    reports = _run_lemma(args, phi, verify)
    payload = {
        'schema': SCHEMA_VERSION,
        'map': descriptor(phi),
        'lemma': args.lemma,
        'reports': [r.to_dict() for r in reports],
    }
    text = "\n\n".join(tables.render_report(r) for r in reports)
    return CommandResult(payload, text, _exit_code(reports), reports)


# ----------------------------------------------------------------------
# census
# ----------------------------------------------------------------------

def cmd_census(args) -> CommandResult:
    phi = resolve_map(args.map)
    verify = build_verify_service(args)
    bad = bad_primes(phi, verify.budget)
    census = verify.dynamics.fp_cycle_census(phi, args.p, bad)
    reduced = reduce_mod_p(phi, args.p, bad)
    payload = {
        'schema': SCHEMA_VERSION,
        'map': descriptor(phi),
        'p': census.p,
        'periodic_count': census.periodic_count,
        'cycle_lengths': list(census.cycle_lengths),
        'periodic_residues': [str(x) for x in census.residues],
    }
    return CommandResult(payload, tables.render_census(census, reduced.table))


# ----------------------------------------------------------------------
# list
# ----------------------------------------------------------------------

def cmd_list(args) -> CommandResult:
    entries = load_catalog().list_all()
    payload = {
        'schema': SCHEMA_VERSION,
        'maps': {
            e.key: {
                'name': e.name,
                'expression': e.expression,
                'description': e.description,
                'expected_periodic': e.expected_periodic,
                'condition_set': list(e.condition_set),
            }
            for e in entries
        },
    }
    return CommandResult(payload, tables.render_table(tables.catalog_table(entries)))


# ----------------------------------------------------------------------
# semigroup
# ----------------------------------------------------------------------

def _parse_words(text: Optional[str], generator_count: int, max_length: int) -> List[List[int]]:
    """'0,1;1,0' style words, or every word up to max_length."""
    if text:
        return [parse_int_list(chunk) for chunk in text.split(";") if chunk.strip()]
    words = []
    for length in range(1, max_length + 1):
        words.extend(list(w) for w in product(range(generator_count), repeat=length))
    return words


def cmd_semigroup(args) -> CommandResult:
    catalog = load_catalog()
    generators = [resolve_map(text, catalog) for text in args.gen]
    verify = build_verify_service(args)
    words = _parse_words(args.words, len(generators), args.max_length)
    S = parse_primes(args.S) if args.S is not None else None
    report = verify.check_semigroup(generators, words, S=S, cap=args.period_cap, family=_family(args))
    payload = {'schema': SCHEMA_VERSION, 'reports': [report.to_dict()]}
    return CommandResult(payload, tables.render_report(report), _exit_code([report]), [report])


COMMANDS = {
    'analyze': cmd_analyze,
    'bounds': cmd_bounds,
    'generate': cmd_generate,
    'verify': cmd_verify,
    'census': cmd_census,
    'list': cmd_list,
    'semigroup': cmd_semigroup,
}
