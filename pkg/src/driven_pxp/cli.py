"""Command-line runner: `driven-pxp run|validate|list-scenarios`.

Exit codes: 0 success, 1 runtime failure, 2 usage/config error. The output
root comes from --output-root, else $DRIVEN_PXP_OUTPUT_ROOT, else ./runs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import traceback

from .config import ConfigError, SCENARIOS, load_config, validate_report

OUTPUT_ROOT_ENV = "DRIVEN_PXP_OUTPUT_ROOT"


def _apply_overrides(data: dict, overrides: list[str]) -> dict:
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, _, raw = item.partition("=")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        node = data
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
            if not isinstance(node, dict):
                raise ConfigError(f"--set path {key!r} crosses a non-object field")
        node[parts[-1]] = value
    return data


def _load_with_overrides(path: str, overrides: list[str]):
    from .config import config_from_dict

    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc
    if overrides:
        data = _apply_overrides(data, overrides)
    return config_from_dict(data)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="driven-pxp",
        description="Floquet-engineered Rydberg chain scenarios")
    sub = parser.add_subparsers(dest="command")

    run_p = sub.add_parser("run", help="run a scenario config")
    run_p.add_argument("config", help="JSON config file")
    run_p.add_argument("--output-root", default=None)
    run_p.add_argument("--set", dest="overrides", action="append", default=[],
                       metavar="KEY=VALUE",
                       help="override a config field (dotted path, JSON value)")

    val_p = sub.add_parser("validate", help="parse a config and report derived values")
    val_p.add_argument("config")
    val_p.add_argument("--set", dest="overrides", action="append", default=[])

    sub.add_parser("list-scenarios", help="print available scenario names")

    args = parser.parse_args(argv)
    if not args.command:
        parser.print_usage(sys.stderr)
        return 2

    if args.command == "list-scenarios":
        for name in SCENARIOS:
            print(name)
        return 0

    try:
        cfg = _load_with_overrides(args.config, getattr(args, "overrides", []))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    if args.command == "validate":
        print(json.dumps(validate_report(cfg), indent=1, sort_keys=True))
        return 0

    from .scenarios import run_scenario

    root = args.output_root or os.environ.get(OUTPUT_ROOT_ENV)
    try:
        out = run_scenario(cfg, output_root=root)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception:
        traceback.print_exc()
        print(f"scenario {cfg.scenario} failed; partial outputs flagged in the "
              "manifest", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
