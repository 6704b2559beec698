"""
Command-line front end: ``modcong expand|verify|hecke|cornacchia|cache``.

stdout carries only the report stream; loguru writes to stderr. Exit codes are
0 when every check passes, 1 when any check fails and 2 for usage or parameter
errors.
"""

import json
import os
import sys
from datetime import datetime
from pathlib import Path

import polars as pl
from loguru import logger

from modular_congruences.audit_writer import AuditWriter, Heading
from modular_congruences.utils.cache import (
    CACHE_ENV,
    cache_dir,
    clear_cache,
    load_or_build,
    read_cache,
    series_to_json,
    write_cache,
)
from modular_congruences.utils.congruence import (
    cornacchia,
    hecke_family,
    required_terms,
    verify_cor1,
    verify_cor2,
    verify_example,
    verify_intro_apery,
    verify_theorem1,
    verify_theorem2,
    verify_transfer_bridge,
)
from modular_congruences.utils.errors import (
    BadParameter,
    ModularCongruenceError,
    PrecisionExceeded,
)
from modular_congruences.utils.forms import FormSpec, verify_identity
from modular_congruences.utils.report import VerificationReport
from modular_congruences.utils.sequences import (
    A_k_table,
    B_C_tables,
    D3_table,
    SequenceTable,
    apery_B_table,
)
from modular_congruences.utils.series import PowerSeries, reduce_mod
from modular_congruences.utils.utils import (
    FAMILIES,
    calculate_runtime,
    create_audit,
    family_defaults,
    get_args,
    load_defaults,
)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
# families whose precision is a free parameter rather than a consequence of bounds
TERM_FAMILIES = ("transfer-bridge",)


def configure_logging(verbose: bool) -> None:
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if verbose else "WARNING")


def build_sequence(name: str, length: int, modulus: int | None = None) -> SequenceTable:
    """Tables by their CLI names A:<k>, B:<n>, C:<n>, D3 and aperyB."""
    head, _, index = name.partition(":")
    if head in ("A", "B", "C"):
        try:
            k = int(index)
        except ValueError as exc:
            raise BadParameter(f"{name} needs an integer index") from exc
        if head == "A":
            return A_k_table(k, length, modulus)
        b_table, c_table = B_C_tables(k, length, modulus)
        return b_table if head == "B" else c_table
    if name == "D3":
        return D3_table(length, modulus)
    if name == "aperyB":
        return apery_B_table(length, modulus)
    raise BadParameter(f"unknown sequence {name!r}")


def render_series(spec: FormSpec, series: PowerSeries, fmt: str) -> str:
    if fmt == "json":
        payload = series_to_json(spec, series)
        if series.modulus is not None:
            payload["modulus"] = str(series.modulus)
        return json.dumps(payload)
    if fmt == "csv":
        # cusp forms are listed from q^1
        start = 1 if series.coeffs[0] == 0 else 0
        return ",".join(str(c) for c in series.coeffs[start:])
    return series.to_text()


def render_table(table: SequenceTable, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(
            {
                "name": table.name,
                "offset": table.offset,
                "values": [str(v) for v in table.values],
            }
        )
    if fmt == "csv":
        return ",".join(str(v) for v in table.values)
    return "\n".join(
        f"{table.name}({table.offset + i}) = {v}" for i, v in enumerate(table.values)
    )


def render_reports(
    reports: list[VerificationReport], fmt: str, show_passing: bool
) -> str:
    if fmt == "json":
        payload = [report.to_dict() for report in reports]
        return json.dumps(payload[0] if len(payload) == 1 else payload, indent=2)
    if fmt == "csv":
        frame = pl.concat([report.to_frame() for report in reports])
        return frame.write_csv().rstrip("\n")
    return "\n".join(report.to_text(show_passing) for report in reports)


def _default_cache() -> Path | None:
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else None


def do_expand(args) -> int:
    if args.terms == "auto":
        raise BadParameter("expand needs an explicit --terms")
    if args.form:
        spec = FormSpec.parse(args.form)
        directory = Path(args.cache) if args.cache else _default_cache()
        series = load_or_build(directory, spec, args.terms)
        if args.mod is not None:
            series = reduce_mod(series, args.mod)
        print(render_series(spec, series, args.format))
    else:
        table = build_sequence(args.sequence, args.terms, args.mod)
        print(render_table(table, args.format))
    return EXIT_PASS


def family_params(args, config: dict, family: str, capped: bool = False) -> dict:
    params = family_defaults(config, family, capped)
    overrides = {
        "prime_min": args.prime_min,
        "prime_max": args.prime_max,
        "n": args.n,
        "m_max": args.m_max,
        "r_max": args.r_max,
    }
    params.update({k: v for k, v in overrides.items() if v is not None})
    if args.terms != "auto":
        if family.startswith("identity.") or family in TERM_FAMILIES:
            params["terms"] = args.terms
        elif args.terms < required_terms(family, params):
            raise PrecisionExceeded(
                f"{family} needs {required_terms(family, params)} terms, "
                f"{args.terms} given"
            )
    return params


def run_family(family: str, params: dict) -> list[VerificationReport]:
    logger.info(f"running {family} with {params}")
    ns = params.get("n") or [1]
    if family.startswith("identity."):
        return [verify_identity(family.split(".", 1)[1], params["terms"])]
    if family == "theorem1":
        return [verify_theorem1(n, params["prime_max"]) for n in ns]
    if family in ("theorem2a", "theorem2b"):
        return [verify_theorem2(family[-1], params["prime_max"])]
    if family == "theorem2c":
        return [verify_theorem2("c", params["prime_max"], n) for n in ns]
    if family.startswith("cor1."):
        return [
            verify_cor1(
                family.split(".", 1)[1],
                params["prime_max"],
                params.get("m_max", 1),
                params.get("r_max", 1),
                params.get("prime_min", 5),
            )
        ]
    if family == "cor2":
        return [verify_cor2(n, params["prime_max"]) for n in ns]
    if family == "example":
        return [verify_example(params["prime_max"])]
    if family == "intro-apery":
        return [
            verify_intro_apery(
                params["prime_max"],
                params.get("m_max", 1),
                params.get("r_max", 1),
                params.get("prime_min", 3),
            )
        ]
    if family == "transfer-bridge":
        return [verify_transfer_bridge(max(ns), params["terms"])]
    raise BadParameter(f"unknown family {family!r}")


def do_verify(args, config: dict) -> list[VerificationReport]:
    if args.family == "all":
        reports = []
        for family in FAMILIES:
            params = family_params(args, config, family, capped=True)
            reports.extend(run_family(family, params))
        return reports
    return run_family(args.family, family_params(args, config, args.family))


def do_cache(args) -> int:
    directory = cache_dir(args.dir)
    if args.action == "clear":
        removed = clear_cache(directory)
        print(f"removed {len(removed)} files from {directory}")
        return EXIT_PASS
    if not args.form:
        raise BadParameter(f"cache {args.action} needs --form")
    spec = FormSpec.parse(args.form)
    if args.action == "write":
        if not isinstance(args.terms, int):
            raise BadParameter("cache write needs an explicit --terms")
        print(write_cache(directory, spec, args.terms))
    else:
        terms = args.terms if isinstance(args.terms, int) else None
        print(read_cache(directory, spec, terms).to_text())
    return EXIT_PASS


def dispatch(args, audit: AuditWriter | None = None) -> int:
    if args.verb == "expand":
        return do_expand(args)
    if args.verb == "cornacchia":
        print(cornacchia(args.p))
        return EXIT_PASS
    if args.verb == "cache":
        return do_cache(args)

    if args.verb == "hecke":
        name = FormSpec.parse(args.form).name
        reports = [hecke_family(name, args.prime_max, args.range_)]
    else:
        reports = do_verify(args, load_defaults(args.config))
    print(render_reports(reports, args.format, args.show_passing))
    if audit is not None:
        title = f"{args.verb} {getattr(args, 'family', None) or args.form}"
        audit.add(Heading(title, "Heading 2"))
        audit.add(reports)
    return EXIT_PASS if all(report.passed for report in reports) else EXIT_FAIL


def run(argv: list[str]) -> int:
    try:
        args = get_args(argv)
    except SystemExit as exc:
        return EXIT_PASS if exc.code in (0, None) else EXIT_USAGE
    configure_logging(args.verbose)

    start_time = datetime.now()
    audit = create_audit(start_time, args.audit) if args.audit else None
    if audit is not None:
        audit.add_info("time", ("start time", start_time.strftime("%Y-%m-%d %H:%M")))

    try:
        code = dispatch(args, audit)
    except ModularCongruenceError as error:
        logger.error(f"{type(error).__name__}: {error}")
        if audit is not None:
            audit.add_important(f"{error}", True)
            audit.commit_audit()
        return EXIT_USAGE

    end_time = datetime.now()
    hours, minutes, seconds = calculate_runtime(end_time, start_time)
    if audit is not None:
        audit.add_info("time", ("end time", end_time.strftime("%Y-%m-%d %H:%M")))
        audit.add_info(
            "time",
            ("total time", f"{hours} hours {minutes} mins {int(seconds)} seconds"),
        )
        audit.commit_audit()
    logger.info(f"finished in {hours} hours {minutes} mins {int(seconds)} seconds")
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))
