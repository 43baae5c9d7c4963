"""Command-line front end.

    isom4 catalog verify  [--samples N] [--seed S] [--catalog PATH]
    isom4 catalog export  --out PATH [--weights a,b,c]
    isom4 stabilizer      --group G [--case K] [--param k=v,...]
    isom4 reproduce       [--weights a,b,c] [--format table|json|csv] [--out PATH]

Exit status: 0 success, 1 mismatch or failed check, 2 invalid input.
The default seed is 0 unless ISOM4_SEED is set; a ``--config`` JSON file
may carry any flag under its long name (``params`` may be a mapping).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .catalog import (
    GroupName,
    algebra,
    aut_family,
    check_weights,
    load_catalog,
    verify_aut_family,
    write_catalog,
)
from .exact import fmt
from .groupid import isom_descriptor
from .lie import (
    check_jacobi,
    derivations,
    is_nilpotent,
    is_solvable,
    is_type_R_sampled,
    is_unimodular,
)
from .metrics import MetricConstraintError, default_params, metric_matrix, normalize_params
from .reproduce import RENDERERS, reproduce
from .stabilizer import StabilizerError, stabilizer

EXIT_OK, EXIT_MISMATCH, EXIT_INVALID = 0, 1, 2
SEED_ENV = "ISOM4_SEED"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    group: GroupName | None = None
    case: "int | str" = 1
    params: dict[str, Fraction] = field(default_factory=dict)
    weights: tuple[Fraction, Fraction, Fraction] | None = None
    samples: int = 200
    trials: int = 200
    seed: int = 0
    format: str = "table"
    out: str | None = None
    catalog: str | None = None


def parse_params(text: "str | dict | None") -> dict[str, Fraction]:
    if not text:
        return {}
    if isinstance(text, dict):
        return normalize_params({k: str(v) for k, v in text.items()})
    out = {}
    for item in text.split(","):
        if not item.strip():
            continue
        if "=" not in item:
            raise ConfigError(f"parameter {item!r} is not of the form name=value")
        k, v = item.split("=", 1)
        try:
            out[k.strip()] = Fraction(v.strip())
        except ValueError:
            raise ConfigError(f"parameter {k.strip()} has non-rational value {v.strip()!r}") from None
    return normalize_params(out)


def parse_weights(text) -> tuple[Fraction, Fraction, Fraction] | None:
    if text is None:
        return None
    parts = text if isinstance(text, (list, tuple)) else str(text).split(",")
    try:
        return check_weights([Fraction(str(p).strip()) for p in parts])
    except ValueError as err:
        raise ConfigError(f"bad weights {text!r}: {err}") from None


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{SEED_ENV}={raw!r} is not an integer") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with default values for any flag")
    common.add_argument("--seed", type=int, help=f"RNG seed (default ${SEED_ENV} or 0)")
    common.add_argument("--format", choices=sorted(RENDERERS))
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--weights", help="SolMN4 weights a,b,c (distinct, nonzero, sum 0)")

    p = argparse.ArgumentParser(prog="isom4", description="Exact isometry groups of 4D unimodular Lie groups")
    sub = p.add_subparsers(dest="command", required=True)

    cat = sub.add_parser("catalog", help="catalog checks and export")
    cat_sub = cat.add_subparsers(dest="action", required=True)
    ver = cat_sub.add_parser("verify", parents=[common], help="run all consistency checks")
    ver.add_argument("--samples", type=int, help="samples per check (>= 1, default 200)")
    ver.add_argument("--catalog", help="check a catalog JSON file instead of the built-in one")
    cat_sub.add_parser("export", parents=[common], help="write the catalog as JSON")

    st = sub.add_parser("stabilizer", parents=[common], help="isometric automorphisms of one metric")
    st.add_argument("--group")
    st.add_argument("--case", help="metric case number (default 1)")
    st.add_argument("--param", help="comma-separated name=value list, e.g. alpha=2,mu=1/3")
    st.add_argument("--trials", type=int, help="randomized completeness trials (default 200)")

    rep = sub.add_parser("reproduce", parents=[common], help="re-derive the full result table")
    rep.add_argument("--param", help="override default parameters where a case admits them")
    rep.add_argument("--trials", type=int, help="randomized completeness trials (default 200)")
    return p


def resolve(ns: argparse.Namespace) -> RunConfig:
    """Merge defaults < config file < command-line flags."""
    file_cfg: dict = {}
    if getattr(ns, "config", None):
        try:
            file_cfg = json.loads(Path(ns.config).read_text())
        except (OSError, json.JSONDecodeError) as err:
            raise ConfigError(f"cannot read config {ns.config}: {err}") from None
        if not isinstance(file_cfg, dict):
            raise ConfigError("config file must hold a JSON object")

    def pick(name, default=None):
        v = getattr(ns, name, None)
        if v is not None:
            return v
        return file_cfg.get(name, default)

    command = ns.command if ns.command != "catalog" else f"catalog {ns.action}"
    cfg = RunConfig(command)
    group = pick("group")
    if group is not None:
        try:
            cfg.group = GroupName.parse(group)
        except ValueError as err:
            raise ConfigError(str(err)) from None
    case = pick("case", 1)
    cfg.case = case if case == "other" else _int(case, "case")
    cfg.params = parse_params(pick("param") or file_cfg.get("params"))
    cfg.weights = parse_weights(pick("weights"))
    cfg.samples = _int(pick("samples", 200), "samples")
    cfg.trials = _int(pick("trials", 200), "trials")
    seed = pick("seed")
    cfg.seed = default_seed() if seed is None else _int(seed, "seed")
    cfg.format = pick("format", "table")
    if cfg.format not in RENDERERS:
        raise ConfigError(f"format must be one of {sorted(RENDERERS)}")
    cfg.out = pick("out")
    cfg.catalog = pick("catalog")
    if cfg.samples < 1:
        raise ConfigError("--samples must be >= 1")
    if cfg.trials < 0:
        raise ConfigError("--trials must be >= 0")
    return cfg


def _int(v, name) -> int:
    try:
        return int(v)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be an integer, got {v!r}") from None


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_catalog_verify(cfg: RunConfig) -> int:
    if cfg.catalog:
        try:
            entries = load_catalog(cfg.catalog)
        except (OSError, ValueError, KeyError) as err:
            raise ConfigError(f"cannot load catalog {cfg.catalog}: {err}") from None
    else:
        entries = None
    results = []
    for name in GroupName:
        if entries is not None:
            if name not in entries:
                results.append((name, "present", False))
                continue
            g, fam = entries[name].algebra, entries[name].family
        else:
            g = algebra(name, cfg.weights if name is GroupName.SOLMN4 else None)
            fam = aut_family(name)
        jac = check_jacobi(g)
        results.append((name, "jacobi", jac))
        results.append((name, "unimodular", is_unimodular(g)))
        if name.nilpotent:
            results.append((name, "nilpotent", is_nilpotent(g)))
        else:
            results.append((name, "solvable, not nilpotent", is_solvable(g) and not is_nilpotent(g)))
        results.append((name, "type (R) sampled", bool(is_type_R_sampled(g, cfg.samples, cfg.seed))))
        if jac:
            fam_ok = verify_aut_family(name, cfg.samples, cfg.seed, target=g, family=fam)
            results.append((name, "aut family", fam_ok))
            results.append((name, "derivation dim", len(derivations(g)) == fam.parameter_count()))
    failed = [r for r in results if not r[2]]
    if cfg.format == "json":
        text = json.dumps(
            {
                "seed": cfg.seed,
                "samples": cfg.samples,
                "checks": [{"group": n.value, "check": c, "ok": ok} for n, c, ok in results],
                "failed": len(failed),
            },
            indent=2,
        ) + "\n"
    else:
        lines = [f"{n.value:<7} {c:<24} {'ok' if ok else 'FAIL'}" for n, c, ok in results]
        groups_ok = len({n for n, _, _ in results} - {n for n, _, _ in failed})
        lines.append(f"{groups_ok}/{len(GroupName)} groups pass (seed {cfg.seed}, samples {cfg.samples})")
        text = "\n".join(lines) + "\n"
    _emit(cfg, text)
    return EXIT_OK if not failed else EXIT_MISMATCH


def cmd_catalog_export(cfg: RunConfig) -> int:
    if not cfg.out:
        raise ConfigError("catalog export needs --out")
    write_catalog(cfg.out, cfg.weights)
    return EXIT_OK


def cmd_stabilizer(cfg: RunConfig) -> int:
    if cfg.group is None:
        raise ConfigError("--group is required")
    params = default_params(cfg.group, cfg.case)
    params.update(cfg.params)
    s = metric_matrix(cfg.group, cfg.case, params)
    g = algebra(cfg.group, cfg.weights if cfg.group is GroupName.SOLMN4 else None)
    st = stabilizer(g, aut_family(cfg.group), s, trials=cfg.trials, seed=cfg.seed)
    desc = isom_descriptor(cfg.group, st, cfg.case, g)
    if cfg.format == "json":
        data = {
            "params": {k: fmt(v) for k, v in sorted(params.items())},
            "metric": s.to_json(),
            "stabilizer": st.to_json(),
            "descriptor": desc.to_json(),
        }
        text = json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    else:
        t = desc.stabilizer
        lines = [
            f"group      {cfg.group.value}  case {cfg.case}",
            "params     " + ", ".join(f"{k}={fmt(v)}" for k, v in sorted(params.items())),
            "metric     " + "; ".join(" ".join(r) for r in s.to_json()),
            f"dim        {st.identity_component_dim}",
            f"order      {st.finite_order}",
            f"components {st.components}",
            f"type       {t.name} ({t.label})",
            "profile    " + ", ".join(f"{k}:{v}" for k, v in t.profile.items()),
            f"isometry   {desc.structure}",
            f"evidence   trials {st.evidence.trials}, hits {st.evidence.hits}, "
            f"violations {len(st.evidence.violations)}",
        ]
        lines += ["element    " + "; ".join(" ".join(r) for r in m.to_json()) for m in st.component_reps]
        text = "\n".join(lines) + "\n"
    _emit(cfg, text)
    return EXIT_OK if st.evidence.ok else EXIT_MISMATCH


def cmd_reproduce(cfg: RunConfig) -> int:
    rep = reproduce(weights=cfg.weights, trials=cfg.trials, seed=cfg.seed, params=cfg.params)
    _emit(cfg, RENDERERS[cfg.format](rep))
    return EXIT_OK if rep.ok else EXIT_MISMATCH


COMMANDS = {
    "catalog verify": cmd_catalog_verify,
    "catalog export": cmd_catalog_export,
    "stabilizer": cmd_stabilizer,
    "reproduce": cmd_reproduce,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        cfg = resolve(ns)
        return COMMANDS[cfg.command](cfg)
    except (ConfigError, MetricConstraintError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID
    except StabilizerError as err:
        print(f"stabilizer error: {err}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    raise SystemExit(main())
