"""Experiment runner: ``catstate {ms,rtm,chsh,doubleslit,cat,entropy} [options]``.

Every run writes one delimited table (CSV by default, JSON with
``--format json``). CSV output starts with a ``#`` line holding the fully
resolved configuration, then a header row, then data rows; some subcommands
append ``# key=value`` summary lines. Numbers carry 12 significant digits.

Exit status: 0 on success, 2 on configuration errors, 3 when a numerical
routine fails to converge.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field

import numpy as np

from . import bell, mstate, rtm, whichpath
from . import qlinalg as ql
from .sampling import derive_seed

SUBCOMMANDS = ("ms", "rtm", "chsh", "doubleslit", "cat", "entropy")
DEFAULT_SEED = 42
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

# options converted from degrees when --deg is given
ANGLE_KEYS = ("alpha", "phi", "phi_min", "phi_max", "phi_a", "grid_step")


class ConfigError(Exception):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass
class Report:
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    summary: dict = field(default_factory=dict)


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x) + 0.0:.12g}"
    return str(x)


def _jsonable(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(f"{float(x) + 0.0:.12g}")
    return x


def _validated(key: str, build, *args):
    try:
        return build(*args)
    except ValueError as exc:
        raise ConfigError(key, str(exc)) from None


def _superposition(cfg: dict, phi_key: str | None = "phi") -> mstate.SuperpositionParams:
    _validated("alpha", mstate.SuperpositionParams, cfg["alpha"], 0.0)
    if phi_key is None:
        return mstate.SuperpositionParams(cfg["alpha"], 0.0)
    return _validated(phi_key, mstate.SuperpositionParams, cfg["alpha"], cfg[phi_key])


def _positive_int(key: str, value: int) -> int:
    if value < 1:
        raise ConfigError(key, f"must be a positive integer, got {value}")
    return value


# -- subcommands -----------------------------------------------------------


def run_ms(cfg: dict) -> Report:
    params = _superposition(cfg)
    ms = mstate.build_ms(params)
    rho_s, rho_a = mstate.reduced_pair(params)
    rep = Report(["quantity", "value"])
    for label, amp in zip(ms.basis_labels, ms.amplitudes):
        rep.rows.append([f"amplitude[{label}].re", amp.real])
        rep.rows.append([f"amplitude[{label}].im", amp.imag])
    for name, rho in (("rho_S", rho_s), ("rho_A", rho_a)):
        for i in range(2):
            for j in range(2):
                rep.rows.append([f"{name}[{i + 1}{j + 1}].re", rho.matrix[i, j].real])
                rep.rows.append([f"{name}[{i + 1}{j + 1}].im", rho.matrix[i, j].imag])
    for name, rho in (("S", rho_s), ("A", rho_a)):
        w = mstate.coherence_witness(rho)
        rep.rows.append([f"witness_{name}.q", w.q])
        rep.rows.append([f"witness_{name}.p", w.p])
    p1, p2 = params.born_probabilities
    rep.rows.append(["born_p1", p1])
    rep.rows.append(["born_p2", p2])
    rep.rows.append(["degenerate", mstate.degeneracy_flag(rho_s, cfg["degeneracy_tol"])])
    return rep


def run_rtm(cfg: dict) -> Report:
    steps = _positive_int("steps", cfg["steps"])
    trials = _positive_int("trials", cfg["trials"])
    for key in ("phi_min", "phi_max", "phi_a"):
        if not math.isfinite(cfg[key]):
            raise ConfigError(key, "must be finite")
    phis = np.linspace(cfg["phi_min"], cfg["phi_max"], steps)
    rep = Report(["phi", "analytic_coincidence", "sampled_fraction", "marginal_S1", "marginal_A1"])
    for i, phi in enumerate(phis):
        c = _validated("alpha", rtm.RTMConfig, float(phi), cfg["phi_a"], cfg["alpha"])
        dist = rtm.joint_probs(rtm.rtm_state(c))
        counts = rtm.simulate_counts(c, trials, derive_seed(cfg["seed"], i))
        rep.rows.append(
            [float(phi), dist.coincidence, counts.coincidence_fraction, dist.marginal("S")[0], dist.marginal("A")[0]]
        )
    return rep


def run_chsh(cfg: dict) -> Report:
    params = _superposition(cfg)
    if cfg["state"] == "ms":
        rho = mstate.density(mstate.build_ms(params))
    else:
        rho = mstate.collapsed_mixture(params)
    if not cfg["grid_step"] > 0:
        raise ConfigError("grid_step", "must be positive")
    if cfg["refine_iters"] < 0:
        raise ConfigError("refine_iters", "must be nonnegative")
    res = bell.optimize_chsh(rho, cfg["grid_step"], cfg["refine_iters"])
    cols = ["S", "S_signed"]
    row = [res.value, res.signed]
    for name, m in zip(("a1", "a2", "b1", "b2"), res.settings.as_tuple()):
        cols += [f"{name}_theta", f"{name}_az"]
        row += [m.theta, m.az]
    return Report(cols, [row], {"classical_bound": 2.0, "tsirelson_bound": bell.TSIRELSON})


def run_doubleslit(cfg: dict) -> Report:
    overlap = _validated("overlap_re/overlap_im", whichpath.WhichPathOverlap, complex(cfg["overlap_re"], cfg["overlap_im"]))
    periods = _positive_int("periods", cfg["periods"])
    spp = _positive_int("samples_per_period", cfg["samples_per_period"])
    for key in ("slit_separation", "wavelength", "screen_distance"):
        if not (math.isfinite(cfg[key]) and cfg[key] > 0):
            raise ConfigError(key, "must be positive")
    geom = whichpath.SlitGeometry.central_fringes(
        cfg["slit_separation"], cfg["wavelength"], cfg["screen_distance"], periods, spp
    )
    intensity = whichpath.screen_intensity(geom, overlap)
    rep = Report(["x", "intensity"], [[x, i] for x, i in zip(geom.x_points, intensity)])
    rep.summary = {"visibility": whichpath.visibility(intensity), "overlap_abs": abs(overlap.c)}
    return rep


def run_cat(cfg: dict) -> Report:
    trials = _positive_int("trials", cfg["trials"])
    params = _superposition(cfg, phi_key=None)
    counts = mstate.sample_outcomes(params, trials, cfg["seed"])
    return Report(
        ["n_trials", "n_outcome1", "n_outcome2", "seed", "fraction_outcome1", "born_p1"],
        [[counts.n_trials, counts.n_outcome1, counts.n_outcome2, counts.seed, counts.fraction_outcome1,
          params.born_probabilities[0]]],
    )


def run_entropy(cfg: dict) -> Report:
    params = _superposition(cfg)
    rho = mstate.density(mstate.build_ms(params))
    rho_s, rho_a = mstate.reduced_pair(params)
    return Report(
        ["S_global", "S_reduced_S", "S_reduced_A", "binary_entropy", "S_collapsed_mixture"],
        [[
            ql.vn_entropy(rho),
            ql.vn_entropy(rho_s),
            ql.vn_entropy(rho_a),
            mstate.binary_entropy(params.born_probabilities[0]),
            ql.vn_entropy(mstate.collapsed_mixture(params)),
        ]],
    )


RUNNERS = {
    "ms": run_ms,
    "rtm": run_rtm,
    "chsh": run_chsh,
    "doubleslit": run_doubleslit,
    "cat": run_cat,
    "entropy": run_entropy,
}


# -- output ----------------------------------------------------------------


def render(subcommand: str, cfg: dict, rep: Report, fmt_name: str) -> str:
    resolved = {"subcommand": subcommand, **cfg}
    if fmt_name == "json":
        doc = {
            "config": {k: _jsonable(v) for k, v in resolved.items()},
            "columns": rep.columns,
            "rows": [[_jsonable(v) for v in row] for row in rep.rows],
            "summary": {k: _jsonable(v) for k, v in rep.summary.items()},
        }
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    lines = ["# " + " ".join(f"{k}={fmt(v)}" for k, v in resolved.items())]
    lines.append(",".join(rep.columns))
    lines.extend(",".join(fmt(v) for v in row) for row in rep.rows)
    lines.extend(f"# {k}={fmt(v)}" for k, v in rep.summary.items())
    return "\n".join(lines) + "\n"


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".catstate-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- argument parsing ------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="catstate", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="{" + ",".join(SUBCOMMANDS) + "}")

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("-o", "--output", default="-", help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--deg", action="store_true", help="read angle options in degrees")
        return p

    quarter = math.pi / 4

    p = add("ms", "measurement state, reduced operators, coherence witnesses")
    p.add_argument("--alpha", type=float, default=quarter)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--degeneracy-tol", type=float, default=1e-9)

    p = add("rtm", "two-photon coincidence curve with Monte Carlo counts")
    p.add_argument("--phi-min", type=float, default=0.0)
    p.add_argument("--phi-max", type=float, default=2 * math.pi)
    p.add_argument("--steps", type=int, default=8)
    p.add_argument("--phi-a", type=float, default=0.0, help="fixed phase on A's beam 2")
    p.add_argument("--alpha", type=float, default=quarter)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = add("chsh", "maximized CHSH value of the measurement state or the collapsed mixture")
    p.add_argument("--state", choices=("ms", "mixture"), default="ms")
    p.add_argument("--alpha", type=float, default=quarter)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--grid-step", type=float, default=bell.COARSE_STEP)
    p.add_argument("--refine-iters", type=int, default=bell.REFINE_ITERS)

    p = add("doubleslit", "screen pattern with a which-path detector of overlap c")
    p.add_argument("--overlap-re", type=float, default=1.0)
    p.add_argument("--overlap-im", type=float, default=0.0)
    p.add_argument("--slit-separation", type=float, default=1e-4)
    p.add_argument("--wavelength", type=float, default=5e-7)
    p.add_argument("--screen-distance", type=float, default=1.0)
    p.add_argument("--periods", type=int, default=3)
    p.add_argument("--samples-per-period", type=int, default=4096)

    p = add("cat", "Born-rule ensemble of outcomes")
    p.add_argument("--alpha", type=float, default=quarter)
    p.add_argument("--trials", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = add("entropy", "von Neumann entropies of the global and reduced states")
    p.add_argument("--alpha", type=float, default=quarter)
    p.add_argument("--phi", type=float, default=0.0)

    parser.subparsers = sub  # type: ignore[attr-defined]
    return parser


def _valid_keys(parser: argparse.ArgumentParser, subcommand: str | None) -> list[str]:
    choices = parser.subparsers.choices  # type: ignore[attr-defined]
    if subcommand not in choices:
        return list(SUBCOMMANDS)
    return sorted(
        s for a in choices[subcommand]._actions for s in a.option_strings if s.startswith("--") and s != "--help"
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args, extras = parser.parse_known_args(argv)
    except SystemExit as exc:  # argparse reports bad values/types with status 2
        return int(exc.code or 0)
    if extras:
        keys = _valid_keys(parser, args.subcommand)
        print(
            f"catstate {args.subcommand}: unknown option(s) {' '.join(extras)}; valid keys: {', '.join(keys)}",
            file=sys.stderr,
        )
        return EXIT_CONFIG

    cfg = {k: v for k, v in vars(args).items() if k not in ("subcommand", "output", "format", "deg")}
    if args.deg:
        for key in ANGLE_KEYS:
            if key in cfg:
                cfg[key] = math.radians(cfg[key])
    cfg["deg"] = args.deg
    cfg["format"] = args.format

    try:
        rep = RUNNERS[args.subcommand](cfg)
    except ConfigError as exc:
        print(f"catstate {args.subcommand}: invalid value for {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ql.ConvergenceError as exc:
        print(f"catstate {args.subcommand}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    text = render(args.subcommand, cfg, rep, args.format)
    if args.output == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        write_atomic(args.output, text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
