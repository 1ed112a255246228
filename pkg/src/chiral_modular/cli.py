"""Command-line front end: verification suites, correlators, flow traces, algebra checks.

Subcommands
-----------
verify      run one identity check or the whole suite; JSON report
flow        trace orbits of the modified dilations; CSV rows (t, theta_in, theta_out)
correlator  evaluate one correlator from a JSON request document
algebra     sl(2) closure verdicts of the rescaled Virasoro triples

Exit codes: 0 all checks pass, 1 check failure or singular input,
2 usage/validation error.  Reports are byte-deterministic for a fixed seed:
keys are sorted, floats use shortest round-trip repr, and no timestamps are
embedded.  ``--config`` supplies the same settings as flags from a JSON file;
explicit flags win.  The environment variable ``CHIRAL_MODULAR_SEED`` is the
seed fallback (flag > config file > environment > 42).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

from chiral_modular.circle_geometry import CircleInterval, CirclePoint
from chiral_modular.correlators import CurrentAlgebraSpec
from chiral_modular.errors import (
    LocalizationError,
    OppositePointError,
    PathSingularityError,
    SingularConfigurationError,
)
from chiral_modular.kms_verifier import (
    CurrentKmsConfig,
    InvarianceConfig,
    KmsCheckSpec,
    KmsReport,
    ProductInvarianceConfig,
    VacuumKmsConfig,
    run_check,
    sample_invariance_spec,
    sample_omega_n_kms_spec,
    sample_product_invariance_spec,
    sample_vacuum_kms_spec,
)
from chiral_modular.moebius import MoebiusElement
from chiral_modular.moebius import dilation_n, fixpoints_of_dilation_n
from chiral_modular.states import (
    CurrentInsertion,
    OmegaN,
    OmegaNN,
    PrimaryInsertion,
    ProductOmega2,
    Vacuum,
    evaluate_state,
)
from chiral_modular.virasoro import (
    VirasoroElement,
    check_sl2,
    commutator,
    tilde_generators,
)

DEFAULT_SEED = 42
DEFAULT_TOLERANCE = 1e-8
SEED_ENV_VAR = "CHIRAL_MODULAR_SEED"

VERIFY_IDENTITIES = (
    "all",
    "vacuum-kms",
    "general-field-kms",
    "omega-n-kms",
    "omega-n-invariance",
    "product-invariance",
)


class UsageError(Exception):
    """Configuration/validation problem: exit code 2."""


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write_output(text: str, path: Optional[str]):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_config_file(path: Optional[str], allowed: set) -> dict:
    if not path:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    unknown = set(data) - allowed
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    return data


def _setting(flag_value, config: dict, key: str, default):
    if flag_value is not None:
        return flag_value
    if key in config:
        return config[key]
    return default


def _resolve_seed(flag_value, config: dict) -> int:
    if flag_value is not None:
        return int(flag_value)
    if "seed" in config:
        return int(config["seed"])
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{SEED_ENV_VAR} must be an integer, got {env!r}")
    return DEFAULT_SEED


def _parse_t_grid(value) -> tuple:
    if value is None:
        return (-2.0, -1.0, -0.3, 0.0, 0.5, 1.0, 2.0)
    if isinstance(value, (list, tuple)):
        items = [float(x) for x in value]
    else:
        try:
            items = [float(x) for x in str(value).split(",") if x.strip() != ""]
        except ValueError:
            raise UsageError(f"cannot parse t-grid {value!r}")
    if not items:
        raise UsageError("t-grid must contain at least one flow time")
    return tuple(items)


def _parse_algebra(name, level: float) -> CurrentAlgebraSpec:
    if name is None or name == "abelian":
        return CurrentAlgebraSpec.abelian(level=level)
    if name == "su2":
        return CurrentAlgebraSpec.su2(level=level)
    if isinstance(name, dict):
        unknown = set(name) - {"dim", "level", "f"}
        if unknown:
            raise UsageError(f"unknown algebra keys: {sorted(unknown)}")
        try:
            return CurrentAlgebraSpec(
                dim=int(name["dim"]),
                level=float(name.get("level", level)),
                f=name.get("f"),
            )
        except (KeyError, ValueError) as exc:
            raise UsageError(f"bad algebra table: {exc}")
    raise UsageError(f"unknown algebra {name!r} (use 'abelian', 'su2', or a table)")


# ---------------------------------------------------------------------------
# verify


def _parse_explicit_configuration(identity: str, entry: dict):
    """One explicit configuration object from a check-spec JSON document."""
    if not isinstance(entry, dict):
        raise UsageError("each configuration must be a JSON object")
    if identity in ("vacuum-kms", "general-field-kms"):
        allowed = {"theta1", "theta2", "delta", "delta_bar", "normalization",
                   "chiral_only"}
        unknown = set(entry) - allowed
        if unknown:
            raise UsageError(f"unknown configuration keys: {sorted(unknown)}")
        delta = float(entry["delta"])
        return VacuumKmsConfig(
            theta1=float(entry["theta1"]),
            theta2=float(entry["theta2"]),
            delta=delta,
            delta_bar=float(entry.get("delta_bar", delta)),
            normalization=float(entry.get("normalization", 1.0)),
            chiral_only=bool(entry.get("chiral_only", False)),
        )
    if identity == "omega-n-kms":
        unknown = set(entry) - {"thetas", "colors"}
        if unknown:
            raise UsageError(f"unknown configuration keys: {sorted(unknown)}")
        thetas = tuple(float(x) for x in entry["thetas"])
        colors = tuple(int(c) for c in entry.get("colors", [0] * len(thetas)))
        return CurrentKmsConfig(thetas, colors)
    if identity == "omega-n-invariance":
        unknown = set(entry) - {"thetas", "colors", "g"}
        if unknown:
            raise UsageError(f"unknown configuration keys: {sorted(unknown)}")
        thetas = tuple(float(x) for x in entry["thetas"])
        colors = tuple(int(c) for c in entry.get("colors", [0] * len(thetas)))
        gspec = entry.get("g")
        if gspec is None:
            g = MoebiusElement.identity()
        else:
            try:
                g = MoebiusElement(
                    complex(gspec["alpha"][0], gspec["alpha"][1]),
                    complex(gspec["beta"][0], gspec["beta"][1]),
                )
            except (KeyError, TypeError, IndexError, ValueError) as exc:
                raise UsageError(f"bad group element: {exc}")
        return InvarianceConfig(thetas, colors, g)
    unknown = set(entry) - {"thetas", "colors"}
    if unknown:
        raise UsageError(f"unknown configuration keys: {sorted(unknown)}")
    thetas = tuple(float(x) for x in entry["thetas"])
    colors = tuple(int(c) for c in entry.get("colors", [0] * len(thetas)))
    return ProductInvarianceConfig(thetas, colors)


def _suite_specs(seed, t_grid, tolerance, steps, algebra):
    return [
        ("vacuum-kms", sample_vacuum_kms_spec(
            seed, t_grid=t_grid, tolerance=tolerance, continuation_steps=steps)),
        ("omega-n-kms[n=2]", sample_omega_n_kms_spec(
            seed + 1, n=2, t_grid=t_grid, tolerance=tolerance,
            continuation_steps=steps, algebra=algebra)),
        ("omega-n-invariance[n=2]", sample_invariance_spec(
            seed + 2, n=2, tolerance=tolerance, algebra=algebra)),
        ("omega-n-invariance[n=3]", sample_invariance_spec(
            seed + 3, n=3, tolerance=tolerance, algebra=algebra)),
        ("omega-n-invariance[n=4]", sample_invariance_spec(
            seed + 4, n=4, tolerance=tolerance, algebra=algebra)),
        ("product-invariance", sample_product_invariance_spec(
            seed + 5, t_grid=t_grid, tolerance=tolerance, algebra=algebra)),
    ]


def cmd_verify(args) -> int:
    allowed = {
        "identity", "n", "t_grid", "configs", "configurations", "chiral_only",
        "tolerance", "seed", "continuation_steps", "algebra", "level", "jobs",
    }
    config = _load_config_file(args.config, allowed)
    identity = _setting(args.identity, config, "identity", "all")
    if identity not in VERIFY_IDENTITIES:
        raise UsageError(f"unknown identity {identity!r}")
    n = int(_setting(args.n, config, "n", 2))
    if n < 1:
        raise UsageError("n must be a positive integer")
    t_grid = _parse_t_grid(_setting(args.t_grid, config, "t_grid", None))
    tolerance = float(_setting(args.tolerance, config, "tolerance", DEFAULT_TOLERANCE))
    if tolerance <= 0:
        raise UsageError("tolerance must be positive")
    seed = _resolve_seed(args.seed, config)
    steps = int(_setting(None, config, "continuation_steps", 200))
    chiral_only = bool(_setting(args.chiral_only or None, config, "chiral_only", False))
    n_configs = _setting(args.configs, config, "configs", None)
    level = float(_setting(None, config, "level", 1.0))
    algebra = _parse_algebra(config.get("algebra"), level)
    jobs = int(_setting(args.jobs, config, "jobs", 1))
    if jobs < 1:
        raise UsageError("jobs must be a positive integer")

    if identity == "all":
        named = _suite_specs(seed, t_grid, tolerance, steps, algebra)
        control_spec = sample_vacuum_kms_spec(
            seed + 6, t_grid=t_grid, chiral_only=True, tolerance=tolerance,
            continuation_steps=steps)
        specs = [spec for _, spec in named] + [control_spec]
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                reports = list(pool.map(run_check, specs))
        else:
            reports = [run_check(spec) for spec in specs]
        control = reports.pop()
        control_satisfied = not control.passed
        verdict = "pass" if (
            all(r.passed for r in reports) and control_satisfied
        ) else "fail"
        doc = {
            "seed": seed,
            "tolerance": tolerance,
            "reports": [
                dict(r.to_json_dict(), name=name)
                for (name, _), r in zip(named, reports)
            ],
            "negative_control": {
                "name": "vacuum-kms[chiral-only]",
                "expected": "fail",
                "satisfied": control_satisfied,
                "report": control.to_json_dict(),
            },
            "verdict": verdict,
        }
        _write_output(_dump_json(doc), args.output)
        return 0 if verdict == "pass" else 1

    if "configurations" in config:
        entries = config["configurations"]
        if not isinstance(entries, list) or not entries:
            raise UsageError("'configurations' must be a nonempty list")
        spec = KmsCheckSpec(
            identity=identity,
            t_grid=t_grid,
            configurations=tuple(
                _parse_explicit_configuration(identity, e) for e in entries
            ),
            tolerance=tolerance,
            continuation_steps=steps,
            n=n,
            algebra=algebra,
        )
        report = run_check(spec)
        _write_output(_dump_json(report.to_json_dict()), args.output)
        return 0 if report.passed else 1

    kwargs = {"t_grid": t_grid, "tolerance": tolerance, "continuation_steps": steps}
    if identity in ("vacuum-kms", "general-field-kms"):
        if n_configs is not None:
            kwargs["configs_per_delta"] = int(n_configs)
        spec = sample_vacuum_kms_spec(
            seed, chiral_only=chiral_only, identity=identity, **kwargs
        )
    elif identity == "omega-n-kms":
        if n_configs is not None:
            kwargs["n_configs"] = int(n_configs)
        spec = sample_omega_n_kms_spec(seed, n=n, algebra=algebra, **kwargs)
    elif identity == "omega-n-invariance":
        spec = sample_invariance_spec(
            seed, n=n, tolerance=tolerance, algebra=algebra,
            **({"n_configs": int(n_configs)} if n_configs is not None else {}),
        )
    else:
        if n_configs is not None:
            kwargs["n_configs"] = int(n_configs)
        spec = sample_product_invariance_spec(seed, algebra=algebra, **kwargs)
    report = run_check(spec)
    _write_output(_dump_json(report.to_json_dict()), args.output)
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# flow


def cmd_flow(args) -> int:
    allowed = {"n", "theta", "t_min", "t_max", "steps", "fixpoints"}
    config = _load_config_file(args.config, allowed)
    n = int(_setting(args.n, config, "n", 1))
    if n < 1:
        raise UsageError("n must be a positive integer")
    theta_setting = _setting(args.theta, config, "theta", None)
    if theta_setting is None:
        thetas = [math.pi / 4.0]
    elif isinstance(theta_setting, (list, tuple)):
        thetas = [float(x) for x in theta_setting]
    else:
        try:
            thetas = [float(x) for x in str(theta_setting).split(",") if x.strip()]
        except ValueError:
            raise UsageError(f"cannot parse theta list {theta_setting!r}")
    if not thetas:
        raise UsageError("need at least one seed angle")
    t_min = float(_setting(args.t_min, config, "t_min", -2.0))
    t_max = float(_setting(args.t_max, config, "t_max", 2.0))
    steps = int(_setting(args.steps, config, "steps", 81))
    if steps < 2 or t_max <= t_min:
        raise UsageError("need steps >= 2 and t_max > t_min")
    with_fixpoints = bool(
        _setting(args.fixpoints or None, config, "fixpoints", False)
    )

    lines = [
        "# chiral-modular flow trace",
        f"# n={n}",
        "# columns: t,theta_in,theta_out",
    ]
    for theta in thetas:
        p = CirclePoint(theta)
        for k in range(steps):
            t = t_min + (t_max - t_min) * k / (steps - 1)
            q = dilation_n(n, t, p)
            lines.append(f"{t!r},{p.theta!r},{q.theta!r}")
    if with_fixpoints:
        for k, fp in enumerate(fixpoints_of_dilation_n(n)):
            lines.append(f"# fixpoint,{k},{fp.theta!r}")
    _write_output("\n".join(lines) + "\n", args.output)
    return 0


# ---------------------------------------------------------------------------
# correlator


def _parse_state(value):
    if value is None or value == "vacuum":
        return Vacuum()
    if isinstance(value, dict):
        if set(value) == {"omega_n"}:
            return OmegaN(int(value["omega_n"]))
        if set(value) == {"omega_nn"}:
            return OmegaNN(int(value["omega_nn"]))
        if set(value) == {"product_omega2"}:
            sub = value["product_omega2"]
            if not isinstance(sub, dict):
                raise UsageError("product_omega2 needs an object")
            if set(sub) == {"base"}:
                base = sub["base"]
                return ProductOmega2.from_base(
                    CircleInterval.from_angles(
                        float(base["start"]), float(base["length"])
                    )
                )
            if set(sub) == {"interval1", "interval2"}:
                i1, i2 = sub["interval1"], sub["interval2"]
                return ProductOmega2(
                    CircleInterval.from_angles(float(i1["start"]), float(i1["length"])),
                    CircleInterval.from_angles(float(i2["start"]), float(i2["length"])),
                )
            raise UsageError(
                "product_omega2 needs either {'base': {...}} or both intervals"
            )
    raise UsageError(f"cannot parse state {value!r}")


def cmd_correlator(args) -> int:
    allowed = {
        "state", "kind", "thetas", "colors", "algebra", "level",
        "delta", "delta_bar", "normalization", "eps_min",
    }
    config = _load_config_file(args.config, allowed)
    if not config:
        raise UsageError("correlator needs a JSON request document (--config)")
    state = _parse_state(config.get("state"))
    kind = config.get("kind", "current")
    if kind not in ("current", "primary"):
        raise UsageError(f"kind must be 'current' or 'primary', got {kind!r}")
    thetas = config.get("thetas")
    if not isinstance(thetas, list) or not thetas:
        raise UsageError("request needs a nonempty 'thetas' list (radians)")
    points = [CirclePoint(float(t)) for t in thetas]
    eps_min = float(config.get("eps_min", 1e-6))
    normalization = float(config.get("normalization", 1.0))

    if kind == "current":
        level = float(config.get("level", 1.0))
        algebra = _parse_algebra(config.get("algebra"), level)
        colors = config.get("colors", [0] * len(points))
        if len(colors) != len(points):
            raise UsageError("need one color per point")
        fields = [CurrentInsertion(int(c)) for c in colors]
        value = evaluate_state(
            state, fields, points, algebra=algebra,
            normalization=normalization, eps_min=eps_min,
        )
        meta = {
            "kind": "current",
            "colors": [int(c) for c in colors],
            "algebra": {"dim": algebra.dim, "level": algebra.level,
                        "abelian": algebra.is_abelian},
        }
    else:
        delta = config.get("delta")
        if delta is None:
            raise UsageError("primary request needs 'delta'")
        delta_bar = config.get("delta_bar", delta)
        fields = [
            PrimaryInsertion(float(delta), float(delta_bar)) for _ in points
        ]
        value = evaluate_state(
            state, fields, points, normalization=normalization, eps_min=eps_min,
        )
        meta = {
            "kind": "primary",
            "delta": float(delta),
            "delta_bar": float(delta_bar),
            "normalization": normalization,
        }
    meta["state"] = config.get("state", "vacuum")
    meta["thetas"] = [p.theta for p in points]
    doc = {"value": [value.real, value.imag], "metadata": meta}
    _write_output(_dump_json(doc), args.output)
    return 0


# ---------------------------------------------------------------------------
# algebra


def cmd_algebra(args) -> int:
    allowed = {"n_max", "mutate"}
    config = _load_config_file(args.config, allowed)
    n_max = int(_setting(args.n_max, config, "n_max", 10))
    if n_max < 1:
        raise UsageError("n-max must be a positive integer")
    mutate = _setting(args.mutate, config, "mutate", None)
    if mutate not in (None, "drop-central"):
        raise UsageError(f"unknown mutation {mutate!r}")

    verdicts = []
    all_ok = True
    for n in range(1, n_max + 1):
        if mutate == "drop-central":
            lower, middle, upper = tilde_generators(n)
            broken_middle = VirasoroElement(middle.modes)  # central term dropped
            diff = commutator(upper, lower) - broken_middle.scale(2)
            ok = diff.is_zero()
            verdicts.append({"n": n, "ok": ok, "witness": repr(diff)})
        else:
            ok, witnesses = check_sl2(n)
            entry = {"n": n, "ok": ok}
            if not ok:
                entry["witness"] = {
                    k: repr(w) for k, w in witnesses.items() if not w.is_zero()
                }
            verdicts.append(entry)
        all_ok = all_ok and ok
    doc = {
        "check": "sl2-closure" if mutate is None else f"sl2-closure[{mutate}]",
        "verdicts": verdicts,
        "all_ok": all_ok,
    }
    _write_output(_dump_json(doc), args.output)
    return 0 if all_ok else 1


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chiral-modular",
        description="Verification engine for circle flows, modified states and correlators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON file with the same settings as the flags")
        p.add_argument("--seed", type=int, help="random seed (default 42)")
        p.add_argument("--tolerance", type=float, help="residual tolerance (default 1e-8)")
        p.add_argument("--output", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), help="output format")
        p.add_argument("--jobs", type=int, help="parallel workers for suite checks")

    p = sub.add_parser("verify", help="run identity checks and emit a JSON report")
    common(p)
    p.add_argument("--identity", choices=VERIFY_IDENTITIES, help="which identity (default all)")
    p.add_argument("--n", type=int, help="covering order for omega-n checks (default 2)")
    p.add_argument("--t-grid", dest="t_grid", help="comma-separated flow times")
    p.add_argument("--configs", type=int, help="number of random configurations")
    p.add_argument("--chiral-only", dest="chiral_only", action="store_true",
                   help="drop the anti-chiral factor (monodromy negative control)")

    p = sub.add_parser("flow", help="trace modified-dilation orbits as CSV")
    common(p)
    p.add_argument("--n", type=int, help="covering order (default 1)")
    p.add_argument("--theta", help="comma-separated seed angles in radians")
    p.add_argument("--t-min", dest="t_min", type=float, help="first flow time (default -2)")
    p.add_argument("--t-max", dest="t_max", type=float, help="last flow time (default 2)")
    p.add_argument("--steps", type=int, help="number of grid rows (default 81)")
    p.add_argument("--fixpoints", action="store_true",
                   help="append the 2n fixpoints as comment rows")

    p = sub.add_parser("correlator", help="evaluate a correlator from a JSON request")
    common(p)

    p = sub.add_parser("algebra", help="sl(2) closure verdicts for the rescaled triples")
    common(p)
    p.add_argument("--n-max", dest="n_max", type=int, help="check n = 1..n_max (default 10)")
    p.add_argument("--mutate", choices=("drop-central",),
                   help="negative control: break the middle generator")

    return parser


_NUMERIC_VALUE_FLAGS = ("--t-grid", "--t-min", "--t-max", "--theta")


def _merge_negative_values(argv: list) -> list:
    """Join value flags with following tokens that look like negative numbers,
    so ``--t-grid -1,0.5,1.5`` parses as intended."""
    out = []
    skip = False
    for i, token in enumerate(argv):
        if skip:
            skip = False
            continue
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if (
            token in _NUMERIC_VALUE_FLAGS
            and nxt is not None
            and len(nxt) > 1
            and nxt[0] == "-"
            and (nxt[1].isdigit() or nxt[1] == ".")
        ):
            out.append(f"{token}={nxt}")
            skip = True
        else:
            out.append(token)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_merge_negative_values(list(argv)))
    if args.format == "csv" and args.command != "flow":
        print("error: csv output is only available for 'flow'", file=sys.stderr)
        return 2
    handlers = {
        "verify": cmd_verify,
        "flow": cmd_flow,
        "correlator": cmd_correlator,
        "algebra": cmd_algebra,
    }
    try:
        return handlers[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OppositePointError, SingularConfigurationError, LocalizationError,
            PathSingularityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
