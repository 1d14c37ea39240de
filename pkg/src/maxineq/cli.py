"""Command-line front door.

Subcommands (all driven by a JSON config; see docs/config_schema.md):

* ``verify-max-ineq``  - evaluate precondition, both bound sides and a
  verdict per (n, epsilon) case;
* ``check-conditions`` - run the series/growth/pair condition checkers
  and emit one report per condition plus a summary;
* ``slln-experiment``  - seeded trajectory experiment, CSV + JSON;
* ``oracle-compare``   - Monte Carlo interval calibration against the
  enumeration oracle.

Exit codes: 0 success (including precondition-unmet), 2 config error,
3 budget error, 4 inequality falsified.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import BudgetError, ConfigError, MaxineqError
from .max_inequality import (
    calibrate_constant,
    leq_with_slack,
    lhs_exceedance_exact,
    lhs_exceedance_mc,
    precondition_b,
    rhs_bound,
)
from .mcstats import mc_calibration
from .models import CopulaSequenceModel, FiniteJointModel, model_from_config
from .norming import scheme_from_config
from .reports import write_csv, write_json
from .slln import (
    check_corollary31_condition,
    check_covariance_conditions,
    check_growth_conditions,
    check_moment_inequality_family,
    check_pqd_series_condition,
    check_series_conditions,
    slln_trajectory,
)
from .transforms import TruncationBand

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BUDGET = 3
EXIT_FALSIFIED = 4

_SLUGS = {"b'": "bprime", "3.2": "3_2", "3.7": "3_7", "3.8": "3_8", "3.10": "3_10", "3.11": "3_11", "cor3.3": "cor3_3"}


def _slug(condition_id: str) -> str:
    return _SLUGS.get(condition_id, condition_id)


def _load_config(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"{path}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})"
        ) from exc
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return cfg


def _require(cfg: dict, key: str, kind=None):
    if key not in cfg:
        raise ConfigError(f"missing required config field '{key}'")
    value = cfg[key]
    if kind is not None and not isinstance(value, kind):
        raise ConfigError(f"config field '{key}' has wrong type {type(value).__name__}")
    return value


def _positive_numbers(cfg: dict, key: str):
    values = _require(cfg, key, list)
    if not values:
        raise ConfigError(f"config field '{key}' must be a nonempty list")
    out = []
    for v in values:
        if not isinstance(v, (int, float)) or v <= 0:
            raise ConfigError(f"config field '{key}' must hold positive numbers, got {v!r}")
        out.append(float(v))
    return out


# ---------------------------------------------------------------------------
# verify-max-ineq
# ---------------------------------------------------------------------------


def _run_verify(cfg: dict, out_dir: Path) -> int:
    model = model_from_config(_require(cfg, "model", dict))
    scheme = scheme_from_config(_require(cfg, "scheme", dict))
    r = _require(cfg, "r", int)
    if r < 2:
        raise ConfigError(f"r must be an integer >= 2, got {r}")
    n_values = [int(n) for n in _require(cfg, "n_values", list)]
    if not n_values or any(n < 0 for n in n_values):
        raise ConfigError("n_values must be a nonempty list of integers >= 0")
    epsilons = _positive_numbers(cfg, "epsilons")
    mode = cfg.get("mode", "exact")
    if mode not in ("exact", "mc"):
        raise ConfigError(f"mode must be 'exact' or 'mc', got {mode!r}")
    if mode == "exact" and not isinstance(model, FiniteJointModel):
        raise ConfigError("mode 'exact' needs an enumerable (finite_joint/finite_product) model")

    if "constant" in cfg:
        constant = float(cfg["constant"])
        constant_source = "override"
        calibration = None
    else:
        calibration = calibrate_constant(scheme, r, range(1, max(n_values) + 1))
        constant = calibration.value
        constant_source = "calibrated"

    cases = []
    falsified = 0
    for n in n_values:
        for eps in epsilons:
            pre = precondition_b(model, scheme, r, n, eps)
            rhs = rhs_bound(model, eps, scheme, r, n, constant)
            case = {
                "r": r,
                "n": n,
                "epsilon": eps,
                "precondition": pre.to_dict(),
                "rhs": rhs.to_dict(),
            }
            if mode == "exact":
                lhs = lhs_exceedance_exact(
                    model, eps, scheme, r, n, budget=cfg.get("budget")
                )
                case["lhs"] = {"kind": "exact", "probability": lhs}
                exceeds = not leq_with_slack(lhs, rhs.total)
            else:
                mc = lhs_exceedance_mc(
                    model,
                    eps,
                    scheme,
                    r,
                    n,
                    replicas=int(cfg.get("replicas", 1000)),
                    seed=int(cfg.get("seed", 0)),
                )
                case["lhs"] = {"kind": "mc", **mc.to_dict()}
                exceeds = mc.lower > rhs.total and not leq_with_slack(mc.lower, rhs.total)
            if not pre.satisfied:
                case["verdict"] = "precondition-unmet"
            elif exceeds:
                case["verdict"] = "falsified"
                falsified += 1
            else:
                case["verdict"] = "verified"
            cases.append(case)

    report = {
        "command": "verify-max-ineq",
        "constant": constant,
        "constant_source": constant_source,
        "cases": cases,
    }
    if calibration is not None:
        report["calibration"] = calibration.to_dict()
    write_json(out_dir / "verify_max_ineq.json", report)
    return EXIT_FALSIFIED if falsified else EXIT_OK


# ---------------------------------------------------------------------------
# check-conditions
# ---------------------------------------------------------------------------


def _run_conditions(cfg: dict, out_dir: Path) -> int:
    scheme = scheme_from_config(_require(cfg, "scheme", dict))
    r = _require(cfg, "r", int)
    if r < 2:
        raise ConfigError(f"r must be an integer >= 2, got {r}")
    envelope = None
    if "envelope" in cfg:
        from .distributions import marginal_from_config

        envelope = marginal_from_config(cfg["envelope"])
    model = model_from_config(cfg["model"]) if "model" in cfg else None

    reports = {}
    n_range = [int(n) for n in cfg.get("n_range", range(1, 13))]
    reports.update(
        check_growth_conditions(
            scheme,
            r,
            n_range,
            envelope=envelope,
            model=model if isinstance(model, FiniteJointModel) else None,
        )
    )
    cutoffs = [int(m) for m in cfg.get("cutoffs", (8, 16, 32, 64))]
    if envelope is not None:
        reports.update(check_series_conditions(envelope, scheme, r, cutoffs))
    if isinstance(model, CopulaSequenceModel):
        reports.update(check_covariance_conditions(model, scheme, r, cutoffs))
        p = float(cfg.get("p", getattr(scheme, "p", 0.0)))
        alpha = float(cfg.get("alpha", getattr(scheme, "alpha", 0.0)))
        pair_cutoffs = [int(m) for m in cfg.get("pair_cutoffs", (4, 8, 12, 16))]
        if p and alpha:
            reports["3.2"] = check_corollary31_condition(model, p, alpha, r, pair_cutoffs)
            if model.sign in ("pqd", "independent") and 1.0 < p < 2.0:
                series_cutoffs = [int(m) for m in cfg.get("series_cutoffs", (64, 256, 1024, 4096))]
                reports["cor3.3"] = check_pqd_series_condition(
                    model, p, alpha, series_cutoffs,
                    validation_seed=int(cfg.get("validation_seed", 0)),
                )
        if "moment_band" in cfg:
            band_cfg = cfg["moment_band"]
            band = TruncationBand(float(band_cfg["inner"]), float(band_cfg["outer"]))
            block_ranges = [tuple(b) for b in cfg.get("block_ranges", [[1, 4], [1, 8], [1, 16]])]
            reports.update(check_moment_inequality_family(model, band, block_ranges))

    if not reports:
        raise ConfigError("nothing to check: provide an envelope and/or a model")

    summary = {"command": "check-conditions", "conditions": {}}
    for cid, report in reports.items():
        write_json(out_dir / f"condition_{_slug(cid)}.json", report.to_dict())
        summary["conditions"][cid] = {
            "verdict": report.verdict,
            "finalValue": report.final_value,
            "trend": report.trend,
        }
    write_json(out_dir / "conditions_summary.json", summary)
    return EXIT_OK


# ---------------------------------------------------------------------------
# slln-experiment
# ---------------------------------------------------------------------------


def _run_slln(cfg: dict, out_dir: Path) -> int:
    model = model_from_config(_require(cfg, "model", dict))
    p = float(_require(cfg, "p", (int, float)))
    checkpoints = [int(n) for n in _require(cfg, "checkpoints", list)]
    seeds = _require(cfg, "seeds", list)
    if not seeds:
        raise ConfigError("config field 'seeds' must be a nonempty list")
    eps_ladder = [float(e) for e in cfg.get("eps_ladder", (0.1, 0.5, 1.0))]
    stats = slln_trajectory(model, p, checkpoints, [int(s) for s in seeds], eps_ladder)
    write_csv(out_dir / "trajectory.csv", stats.to_csv_rows())
    write_json(out_dir / "trajectory_summary.json", {"command": "slln-experiment", **stats.to_dict()})
    return EXIT_OK


# ---------------------------------------------------------------------------
# oracle-compare
# ---------------------------------------------------------------------------


def _run_oracle_compare(cfg: dict, out_dir) -> int:
    model = model_from_config(_require(cfg, "model", dict))
    if not isinstance(model, FiniteJointModel):
        raise ConfigError("oracle-compare needs an enumerable model")
    scheme = scheme_from_config(_require(cfg, "scheme", dict))
    r = _require(cfg, "r", int)
    n = _require(cfg, "n", int)
    epsilon = float(_require(cfg, "epsilon", (int, float)))
    replicas = int(cfg.get("replicas", 1000))
    seeds = [int(s) for s in _require(cfg, "seeds", list)]
    exact = lhs_exceedance_exact(model, epsilon, scheme, r, n, budget=cfg.get("budget"))

    def run_mc(seed):
        return lhs_exceedance_mc(model, epsilon, scheme, r, n, replicas=replicas, seed=seed)

    report = mc_calibration(exact, run_mc, seeds)
    payload = {"command": "oracle-compare", **report.to_dict()}
    if out_dir is None:
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        write_json(Path(out_dir) / "oracle_compare.json", payload)
    return EXIT_OK


# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maxineq",
        description="Verification workbench for maximal-inequality and strong-law machinery",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, needs_out in (
        ("verify-max-ineq", True),
        ("check-conditions", True),
        ("slln-experiment", True),
        ("oracle-compare", False),
    ):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON config file")
        p.add_argument("--out", required=needs_out, help="output directory")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _load_config(args.config)
        out = Path(args.out) if args.out else None
        if args.command == "verify-max-ineq":
            return _run_verify(cfg, out)
        if args.command == "check-conditions":
            return _run_conditions(cfg, out)
        if args.command == "slln-experiment":
            return _run_slln(cfg, out)
        return _run_oracle_compare(cfg, out)
    except BudgetError as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ConfigError, MaxineqError, KeyError, TypeError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
