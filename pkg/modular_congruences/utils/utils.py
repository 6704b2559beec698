import argparse
from datetime import datetime
from importlib import resources
from pathlib import Path

import yaml

from modular_congruences.audit_writer import AuditWriter
from modular_congruences.utils.errors import BadParameter

FAMILIES = (
    "identity.eq1",
    "identity.lemma2",
    "identity.lemma3",
    "identity.lemma4",
    "identity.lemma5",
    "identity.eisenstein",
    "identity.psi-eta",
    "identity.nu-eta",
    "identity.picard-fuchs",
    "identity.h1-shift",
    "identity.l-shift",
    "identity.theta-eta",
    "identity.one16l-eta",
    "theorem1",
    "theorem2a",
    "theorem2b",
    "theorem2c",
    "cor1.eq3",
    "cor1.eq4",
    "cor1.eq1",
    "cor1.eq2",
    "cor2",
    "example",
    "intro-apery",
    "transfer-bridge",
)
FORMATS = ("text", "json", "csv")


def _terms(value: str) -> int | str:
    if value == "auto":
        return value
    try:
        terms = int(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(
            f"expected an integer or auto, got {value}"
        ) from exc
    if terms < 1:
        raise argparse.ArgumentTypeError(f"terms must be positive, got {terms}")
    return terms


def get_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="modcong",
        description="Expand level-two modular forms and verify their congruences",
    )
    parser.add_argument(
        "-v", "--verbose", help="debug logging on stderr", action="store_true"
    )
    parser.add_argument(
        "-ap",
        "--audit",
        type=str,
        default=None,
        help="Directory to store the audit files",
    )
    parser.add_argument(
        "--config", type=str, default=None, help="YAML file overriding defaults.yaml"
    )
    verbs = parser.add_subparsers(dest="verb", required=True)

    expand = verbs.add_parser("expand", help="print a q-expansion or sequence table")
    target = expand.add_mutually_exclusive_group(required=True)
    target.add_argument(
        "--form",
        type=str,
        help="theta, lambda, one16l, f1, g1, psi, nu, h:<n>, f:<n>, eis1, apery-eta",
    )
    target.add_argument("--sequence", type=str, help="A:<k>, B:<n>, C:<n>, D3, aperyB")
    expand.add_argument("--terms", type=_terms, required=True)
    expand.add_argument("--mod", type=int, default=None)
    expand.add_argument("--format", choices=FORMATS, default="text")
    expand.add_argument(
        "--cache", type=str, default=None, help="reuse cached forms from this directory"
    )

    verify = verbs.add_parser("verify", help="run a verification family")
    verify.add_argument("family", choices=FAMILIES + ("all",))
    verify.add_argument("--prime-min", type=int, default=None)
    verify.add_argument("--prime-max", type=int, default=None)
    verify.add_argument("--n", type=int, nargs="+", default=None)
    verify.add_argument("--m-max", type=int, default=None)
    verify.add_argument("--r-max", type=int, default=None)
    verify.add_argument("--terms", type=_terms, default="auto")
    verify.add_argument("--format", choices=FORMATS, default="text")
    verify.add_argument("--show-passing", action="store_true", default=False)

    hecke = verbs.add_parser(
        "hecke", help="Hecke multiplicativity of a form's coefficients"
    )
    hecke.add_argument("--form", choices=("f1", "psi", "apery-eta"), default="f1")
    hecke.add_argument("--prime-max", type=int, required=True)
    hecke.add_argument("--range", type=int, required=True, dest="range_")
    hecke.add_argument("--format", choices=FORMATS, default="text")
    hecke.add_argument("--show-passing", action="store_true", default=False)

    cornacchia = verbs.add_parser("cornacchia", help="write a prime as x^2 + y^2")
    cornacchia.add_argument("p", type=int)

    cache = verbs.add_parser("cache", help="manage cached expansions")
    cache.add_argument("action", choices=("write", "read", "clear"))
    cache.add_argument("--dir", type=str, default=None)
    cache.add_argument("--form", type=str, default=None)
    cache.add_argument("--terms", type=_terms, default=None)

    return parser.parse_args(argv)


def calculate_runtime(end_time: datetime, start_time: datetime):
    total_seconds = (end_time - start_time).total_seconds()
    hours, remainder = divmod(total_seconds, 3600)
    minutes, seconds = divmod(remainder, 60)

    return hours, minutes, seconds


def create_audit(start_time: datetime, audit_path: str) -> AuditWriter:
    return AuditWriter(
        f"{audit_path}",
        f"modcongLog-{start_time.strftime('%d-%m-%Y')}",
        "Modular Congruences",
        include_excel=True,
    )


def load_defaults(path: str | None = None) -> dict:
    """
    Defaults from the packaged defaults.yaml, with the file at ``path`` layered on top.

    Returns:
        dict: ``{"all": {...}, "families": {family: {...}}}``
    """
    text = resources.files("modular_congruences").joinpath("defaults.yaml").read_text()
    config = yaml.safe_load(text)
    if path:
        try:
            override = yaml.safe_load(Path(path).read_text()) or {}
        except (OSError, yaml.YAMLError) as exc:
            raise BadParameter(f"cannot read config {path}: {exc}") from exc
        config.setdefault("all", {}).update(override.get("all", {}))
        for family, params in override.get("families", {}).items():
            config["families"].setdefault(family, {}).update(params)
    return config


def family_defaults(config: dict, family: str, capped: bool = False) -> dict:
    """
    Parameters for one family; identity.* share the ``identity`` entry. With
    ``capped`` the prime bound is limited by the ``all`` section.
    """
    key = "identity" if family.startswith("identity.") else family
    if key not in config["families"]:
        raise BadParameter(f"no defaults for family {family}")
    params = dict(config["families"][key])
    cap = config.get("all", {}).get("prime_max")
    if capped and cap and "prime_max" in params:
        params["prime_max"] = min(params["prime_max"], cap)
    return params
