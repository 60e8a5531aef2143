import argparse
import logging
import sys
from typing import Any, NoReturn

from shtukacrit import affweyl, criteria, newton, strata
from shtukacrit.brauer import validate_algebra
from shtukacrit.config import SCHEMA_VERSION
from shtukacrit.coweight import Coweight, balance
from shtukacrit.errors import ShtukaCritError
from shtukacrit.exactq import format_rational
from shtukacrit.isospace import classify_simple, degree_at, localize, pi_valuations
from shtukacrit.scenario import (
    ScenarioFile,
    dump_report,
    load_scenario,
    parse_affine_tuple,
    parse_isospace,
)

logger = logging.getLogger(__name__)


def _fail(message: str) -> None:
    print(f"Error: {message}", file=sys.stderr)
    sys.exit(1)


class _ArgumentParser(argparse.ArgumentParser):
    """Argument parser whose usage errors count as invalid input (exit 1)."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        print(f"Error: {message}", file=sys.stderr)
        sys.exit(1)


def _read(path: str) -> bytes:
    try:
        with open(path, "rb") as f:
            return f.read()
    except OSError as e:
        _fail(f"cannot read {path}: {e}")


def _emit(args: argparse.Namespace, result: dict[str, Any], lines: list[str]) -> None:
    """Write the report in the requested format to stdout or ``--out``."""
    if args.format == "json":
        text = dump_report(
            {"command": args.command, "schema_version": SCHEMA_VERSION, "result": result}
        )
    else:
        text = "\n".join(lines) + "\n"
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as f:
                f.write(text)
        except OSError as e:
            _fail(f"cannot write {args.out}: {e}")
    else:
        sys.stdout.write(text)


def _verdict_lines(verdict: criteria.Verdict) -> list[str]:
    data = verdict.to_dict()
    if not verdict.applicable:
        return [f"{verdict.criterion}: inapplicable ({verdict.explanation})"]
    status = "holds" if verdict.holds else "fails"
    lines = [f"{verdict.criterion}: {status}"]
    if verdict.explanation:
        lines.append(f"  {verdict.explanation}")
    for witness in data["witnesses"]:
        parts = ", ".join(f"{k}={v}" for k, v in sorted(witness.items()))
        lines.append(f"  witness: {parts}")
    return lines


def _coweight(text: str, d: int) -> Coweight:
    lam = Coweight.parse(text)
    if lam.d != d:
        raise ValueError(f"lambda {text!r} has length {lam.d}, expected d = {d}")
    return lam


def _run_verdict(args: argparse.Namespace, evaluate) -> None:
    try:
        scenario = load_scenario(args.scenario).scenario
        verdict = evaluate(scenario)
    except (ShtukaCritError, ValueError) as e:
        _fail(str(e))
    _emit(args, verdict.to_dict(), _verdict_lines(verdict))


def handle_validate(args: argparse.Namespace) -> None:
    """
    Handle the 'validate' command: check reciprocity and the index condition.

    Exits with status 1 when the algebra is not a division algebra of the
    stated index, after printing the report.

    Args:
        args: Parsed command line arguments containing the scenario path
    """
    try:
        scenario = load_scenario(args.scenario, strict=False).scenario
    except ShtukaCritError as e:
        _fail(str(e))
    report = validate_algebra(scenario.algebra)
    lines = ["algebra: ok" if report.ok else "algebra: invalid"]
    lines.extend(f"  violation: {v}" for v in report.violations)
    _emit(args, report.to_dict(), lines)
    if not report.ok:
        sys.exit(1)


def handle_nonempty(args: argparse.Namespace) -> None:
    """Handle the 'nonempty' command."""
    _run_verdict(args, criteria.check_nonempty)


def handle_basic(args: argparse.Namespace) -> None:
    """Handle the 'basic' command: the basic stratum and its special point."""
    _run_verdict(args, criteria.check_basic_stratum)


def handle_lau(args: argparse.Namespace) -> None:
    """Handle the 'lau' command."""
    _run_verdict(args, criteria.check_lau)


def handle_properness(args: argparse.Namespace) -> None:
    """Handle the 'properness' command, in either variant."""
    _run_verdict(
        args, lambda s: criteria.check_main(s, args.variant, exhaustive=args.exhaustive)
    )


def handle_quasicompact(args: argparse.Namespace) -> None:
    """Handle the 'quasicompact' command; ``--subset`` tests a single Y."""
    subset = args.subset.split(",") if args.subset else None
    _run_verdict(args, lambda s: criteria.check_quasicompact(s, subset))


def handle_irreducible(args: argparse.Namespace) -> None:
    """Handle the 'irreducible' command for the places listed in ``--subset``."""
    subset = [x for x in args.subset.split(",") if x]
    _run_verdict(args, lambda s: criteria.check_irreducibility(s, subset))


def handle_degeneration(args: argparse.Namespace) -> None:
    """Handle the 'degeneration' command."""
    if args.all_placements:
        _run_verdict(args, criteria.find_blocking_all_placements)
    else:
        _run_verdict(args, criteria.find_blocking)


_LISTED_VERDICTS = {
    "nonempty": lambda s, entry: criteria.check_nonempty(s),
    "basic": lambda s, entry: criteria.check_basic_stratum(s),
    "lau": lambda s, entry: criteria.check_lau(s),
    "properness": lambda s, entry: criteria.check_main(
        s, entry.get("variant", "theorem"), exhaustive=entry.get("exhaustive", False)
    ),
    "quasicompact": lambda s, entry: criteria.check_quasicompact(s, entry.get("subset")),
    "irreducible": lambda s, entry: criteria.check_irreducibility(s, entry["subset"]),
    "degeneration": lambda s, entry: (
        criteria.find_blocking_all_placements(s)
        if entry.get("all_placements", False)
        else criteria.find_blocking(s)
    ),
}


def _run_listed(scenario_file: ScenarioFile, entry: dict[str, Any]) -> tuple[dict[str, Any], list[str]]:
    """
    Evaluate one command listed in the scenario document.

    Failures of a single command are reported in its entry and do not stop
    the others.

    Returns:
        The JSON entry and its text lines
    """
    s = scenario_file.scenario
    name = entry["command"]
    lines = [f"command {name}:"]
    try:
        if name == "validate":
            report = validate_algebra(s.algebra)
            result = report.to_dict()
            lines.append("  algebra: ok" if report.ok else "  algebra: invalid")
        elif name == "strata":
            if entry["place"] not in s.algebra.places:
                raise ValueError(f"undeclared place '{entry['place']}'")
            place = s.algebra.place(entry["place"])
            kr = strata.kr_strata(s, place)
            basic_only = entry.get("basic_only", False)
            newton_data = strata.newton_strata(s, place, basic_only=basic_only)
            result = {"kr": kr.to_dict(), "newton": newton_data.to_dict()}
            lines.append(f"  {kr.count} KR strata, {len(newton_data.points)} Newton points")
        else:
            verdict = _LISTED_VERDICTS[name](s, entry)
            result = verdict.to_dict()
            lines.extend(f"  {line}" for line in _verdict_lines(verdict))
    except (ShtukaCritError, ValueError) as e:
        return {"command": name, "error": str(e)}, [*lines, f"  error: {e}"]
    return {"command": name, "result": result}, lines


def handle_report(args: argparse.Namespace) -> None:
    """
    Handle the 'report' command: every criterion on one scenario, then the
    commands the scenario lists.

    Args:
        args: Parsed command line arguments containing the scenario path
    """
    try:
        scenario_file = load_scenario(args.scenario, strict=False)
        report = criteria.full_report(scenario_file.scenario, scenario_file.placements)
    except (ShtukaCritError, ValueError) as e:
        _fail(str(e))
    lines = ["algebra: ok" if report.validation.ok else "algebra: invalid"]
    lines.extend(f"  violation: {v}" for v in report.validation.violations)
    for verdict in report.verdicts.values():
        lines.extend(_verdict_lines(verdict))
    for verdict in report.blocking:
        lines.extend(_verdict_lines(verdict))
    if report.component_count is not None:
        lines.append(f"components: {report.component_count}")
    listed = []
    if report.validation.ok:
        for entry in scenario_file.commands:
            data, entry_lines = _run_listed(scenario_file, entry)
            listed.append(data)
            lines.extend(entry_lines)
    _emit(args, dict(report.to_dict(), commands=listed), lines)


def handle_strata(args: argparse.Namespace) -> None:
    """Handle the 'strata' command: KR and Newton strata at one place."""
    try:
        scenario = load_scenario(args.scenario).scenario
        place = scenario.algebra.place(args.place)
        kr = strata.kr_strata(scenario, place)
        newton_data = strata.newton_strata(scenario, place, basic_only=args.basic_only)
    except KeyError:
        _fail(f"undeclared place '{args.place}'")
    except (ShtukaCritError, ValueError) as e:
        _fail(str(e))
    result = {"kr": kr.to_dict(), "newton": newton_data.to_dict()}
    lines = [
        f"place {place.id}: {kr.count} KR strata over {place.degree} geometric points",
        "basic KR stratum: " + " ".join(str(e) for e in kr.basic),
    ]
    for nu in result["newton"]["points"]:
        lines.append("newton: (" + ", ".join(nu) + ")")
    _emit(args, result, lines)


def handle_adm(args: argparse.Namespace) -> None:
    """Handle the 'adm' command: list Adm(λ) with lengths and Newton points."""
    try:
        lam = _coweight(args.lam, args.d)
    except ValueError as e:
        _fail(str(e))
    adm = affweyl.admissible_set(lam)
    rows = [
        {
            "element": e.to_dict(),
            "length": affweyl.length(e),
            "newton": affweyl.newton_point(e).to_list(),
        }
        for e in adm.sorted_elements()
    ]
    lines = [
        f"{row['length']:>3}  {e}  ({', '.join(row['newton'])})"
        for row, e in zip(rows, adm.sorted_elements())
    ]
    _emit(args, {"lambda": lam.to_list(), "size": len(adm), "elements": rows}, lines)


def handle_newton(args: argparse.Namespace) -> None:
    """Handle the 'newton' command: list B(GL_d, λ) with the basic point flagged."""
    try:
        lam = _coweight(args.lam, args.d)
    except ValueError as e:
        _fail(str(e))
    basic = newton.basic_point(lam)
    points = sorted(newton.b_set(lam), key=newton.NewtonPoint.sort_key)
    rows = [{"slopes": nu.to_list(), "basic": nu == basic} for nu in points]
    lines = [
        "(" + ", ".join(row["slopes"]) + ")" + ("  basic" if row["basic"] else "")
        for row in rows
    ]
    _emit(args, {"lambda": lam.to_list(), "points": rows}, lines)


def handle_balance(args: argparse.Namespace) -> None:
    """Handle the 'balance' command for weights (1^e, 0^(d-e))."""
    try:
        counts = [int(x) for x in args.deltas.split(",")]
        deltas = [(1,) * e + (0,) * (args.d - e) for e in counts]
        epsilons = balance(deltas)
    except (ShtukaCritError, ValueError) as e:
        _fail(str(e))
    lines = ["(" + ",".join(str(v) for v in eps) + ")" for eps in epsilons]
    _emit(args, {"deltas": counts, "epsilons": [list(eps) for eps in epsilons]}, lines)


def handle_isospace(args: argparse.Namespace) -> None:
    """Handle the 'isospace' command: classify a simple (D,φ)-space."""
    try:
        spec = parse_isospace(_read(args.file))
        report = classify_simple(spec)
        valuations = pi_valuations(spec)
        f_places = sorted(spec.extension.places_above)
        local = {
            x: {
                "degree": format_rational(degree_at(spec, x)),
                "pieces": [
                    {"slope": format_rational(slope), "dim": dim}
                    for slope, dim in localize(spec, x)
                ],
                "valuations": {
                    y.id: format_rational(valuations[y.id])
                    for y in spec.extension.places_over(x)
                },
            }
            for x in f_places
        }
    except (ShtukaCritError, ValueError) as e:
        _fail(str(e))
    result = dict(report.to_dict(), localizations=local)
    lines = [f"{k}: {v}" for k, v in sorted(report.to_dict().items())]
    for x, data in local.items():
        pieces = ", ".join(f"{p['slope']}^{p['dim']}" for p in data["pieces"])
        lines.append(f"{x}: degree {data['degree']}, slopes {pieces}")
    _emit(args, result, lines)


def handle_straight(args: argparse.Namespace) -> None:
    """Handle the 'straight' command for a tuple of affine Weyl elements."""
    try:
        elements = parse_affine_tuple(_read(args.tuple))
        straight = affweyl.is_straight(elements, args.delta)
        product = newton.shapiro_product(elements)
    except (ShtukaCritError, ValueError) as e:
        _fail(str(e))
    result = {"straight": straight, "newton": product.to_list()}
    lines = [f"straight: {straight}", "newton: (" + ", ".join(product.to_list()) + ")"]
    _emit(args, result, lines)


def handle_additivity(args: argparse.Namespace) -> None:
    """Handle the 'additivity' command: Adm(λ₁) ⋆ Adm(λ₂) against Adm(λ₁+λ₂)."""
    try:
        lam1 = _coweight(args.lambda1, args.d)
        lam2 = _coweight(args.lambda2, args.d)
    except ValueError as e:
        _fail(str(e))
    outcome = affweyl.check_adm_additivity(lam1, lam2)
    result = {
        "holds": outcome.holds,
        "left_size": outcome.left_size,
        "right_size": outcome.right_size,
        "only_left": [e.to_dict() for e in outcome.only_left],
        "only_right": [e.to_dict() for e in outcome.only_right],
    }
    lines = [f"additive: {outcome.holds} ({outcome.left_size} vs {outcome.right_size})"]
    _emit(args, result, lines)


def build_parser() -> argparse.ArgumentParser:
    """Assemble the argument parser with one subparser per command."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="text")
    common.add_argument("--out", help="Write the report to this file")
    common.add_argument("--verbose", "-v", action="store_true", help="Debug logging")

    with_scenario = argparse.ArgumentParser(add_help=False, parents=[common])
    with_scenario.add_argument("--scenario", required=True, help="Scenario JSON file")

    parser = _ArgumentParser(
        description="shtukacrit - criteria for moduli of shtukas with D-structure",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    subparsers = parser.add_subparsers(
        dest="command", required=True, help="Command to execute"
    )

    for name, handler, help_text in (
        ("validate", handle_validate, "Check the algebra of a scenario"),
        ("nonempty", handle_nonempty, "Non-emptiness"),
        ("basic", handle_basic, "Basic stratum and special point"),
        ("lau", handle_lau, "Lau's properness criterion"),
        ("report", handle_report, "Run every criterion"),
    ):
        sub = subparsers.add_parser(name, parents=[with_scenario], help=help_text)
        sub.set_defaults(func=handler)

    properness_parser = subparsers.add_parser(
        "properness", parents=[with_scenario], help="Main properness criterion"
    )
    properness_parser.add_argument("--variant", choices=criteria.VARIANTS, default="theorem")
    properness_parser.add_argument(
        "--exhaustive", action="store_true", help="Enumerate every subset Y"
    )
    properness_parser.set_defaults(func=handle_properness)

    quasicompact_parser = subparsers.add_parser(
        "quasicompact", parents=[with_scenario], help="Quasi-compactness"
    )
    quasicompact_parser.add_argument("--subset", help="Comma separated place ids")
    quasicompact_parser.set_defaults(func=handle_quasicompact)

    irreducible_parser = subparsers.add_parser(
        "irreducible", parents=[with_scenario], help="Irreducibility divisibility"
    )
    irreducible_parser.add_argument("--subset", required=True, help="Comma separated place ids")
    irreducible_parser.set_defaults(func=handle_irreducible)

    degeneration_parser = subparsers.add_parser(
        "degeneration", parents=[with_scenario], help="Blocking-witness search"
    )
    degeneration_parser.add_argument("--all-placements", action="store_true")
    degeneration_parser.set_defaults(func=handle_degeneration)

    strata_parser = subparsers.add_parser(
        "strata", parents=[with_scenario], help="Local strata at one place"
    )
    strata_parser.add_argument("--place", required=True, help="Place id")
    strata_parser.add_argument("--basic-only", action="store_true")
    strata_parser.set_defaults(func=handle_strata)

    for name, handler, help_text in (
        ("adm", handle_adm, "Admissible set Adm(λ)"),
        ("newton", handle_newton, "Newton points B(GL_d, λ)"),
    ):
        sub = subparsers.add_parser(name, parents=[common], help=help_text)
        sub.add_argument("--d", type=int, required=True)
        sub.add_argument("--lambda", dest="lam", required=True, help="e.g. 1,0,-1")
        sub.set_defaults(func=handler)

    additivity_parser = subparsers.add_parser(
        "additivity", parents=[common], help="Additivity of admissible sets"
    )
    additivity_parser.add_argument("--d", type=int, required=True)
    additivity_parser.add_argument("--lambda1", required=True)
    additivity_parser.add_argument("--lambda2", required=True)
    additivity_parser.set_defaults(func=handle_additivity)

    balance_parser = subparsers.add_parser(
        "balance", parents=[common], help="Balance 0/1 weights"
    )
    balance_parser.add_argument("--d", type=int, required=True)
    balance_parser.add_argument("--deltas", required=True, help="Ones counts, e.g. 2,2,2")
    balance_parser.set_defaults(func=handle_balance)

    isospace_parser = subparsers.add_parser(
        "isospace", parents=[common], help="Classify a simple (D,φ)-space"
    )
    isospace_parser.add_argument("--file", required=True)
    isospace_parser.set_defaults(func=handle_isospace)

    straight_parser = subparsers.add_parser(
        "straight", parents=[common], help="Straightness of an element tuple"
    )
    straight_parser.add_argument("--tuple", required=True, help="JSON list of elements")
    straight_parser.add_argument("--delta", type=int, default=1, help="Cyclic shift")
    straight_parser.set_defaults(func=handle_straight)

    return parser


def main(argv: list[str] | None = None) -> None:
    """
    Main entry point for the shtukacrit CLI.

    Exit status is 0 after a successful evaluation whatever the verdict, 1 for
    invalid input and 2 for internal errors.
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
    )
    try:
        args.func(args)
    except Exception:
        logger.exception("Internal error")
        sys.exit(2)


if __name__ == "__main__":
    main()
