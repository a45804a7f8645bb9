"""Command-line scenario runner.

Subcommands ``reproduce``, ``trajectory``, ``theorem`` and ``cp-report``.
Exit codes: 0 checks passed, 1 a check failed, 2 bad configuration,
3 output could not be written.
"""
import argparse
import csv
import io
import json
import math
import re
import sys
from dataclasses import dataclass, fields
from typing import Optional, Tuple

import numpy as np

from .correlations import decompose, delta_rho, random_unitary, theorem_trial
from .cp import choi, correlated_embedding, induced_map, is_cp, kraus_from_choi, product_embedding
from .dynamics import AmplitudePair, cnot_hamiltonian, compare_cases, initial_state, propagator
from .linalg import I2, SIGMA_Z, partial_trace, tensor, trace_distance

EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3
SCENARIOS = ("reproduce", "trajectory", "theorem", "cp-report")
HALF_PI = math.pi / 2


class ConfigError(ValueError):
    pass


@dataclass
class ScenarioConfig:
    scenario: str = "reproduce"
    alpha_re: float = 1 / math.sqrt(2)
    alpha_im: float = 0.0
    beta_re: float = 1 / math.sqrt(2)
    beta_im: float = 0.0
    t_start: float = 0.0
    t_end: float = 2 * math.pi
    steps: int = 100
    seed: int = 0
    trials: int = 1000
    tol: float = 1e-10
    dims: Tuple[int, int] = (2, 2)
    output_path: Optional[str] = None

    def validate(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}")
        norm = self.alpha_re ** 2 + self.alpha_im ** 2 + self.beta_re ** 2 + self.beta_im ** 2
        if not math.isfinite(norm) or abs(norm - 1.0) > 1e-9:
            raise ConfigError(f"|alpha|^2 + |beta|^2 = {norm!r}; amplitudes must be normalized")
        if self.steps < 1:
            raise ConfigError("steps must be >= 1")
        if not (math.isfinite(self.t_start) and math.isfinite(self.t_end)):
            raise ConfigError("time bounds must be finite")
        if self.t_end < self.t_start:
            raise ConfigError("t_end must be >= t_start")
        if not self.tol > 0:
            raise ConfigError("tol must be > 0")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.seed < 0:
            raise ConfigError("seed must be a non-negative integer")
        if len(self.dims) != 2 or min(self.dims) < 2:
            raise ConfigError("dims must be two integers >= 2")
        return self

    @property
    def amps(self) -> AmplitudePair:
        return AmplitudePair(complex(self.alpha_re, self.alpha_im), complex(self.beta_re, self.beta_im))

    def grid(self):
        return np.linspace(self.t_start, self.t_end, self.steps + 1)


_TIME_RE = re.compile(
    r"^\s*(?P<coef>[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?)?\s*(?P<star>\*)?\s*"
    r"(?P<pi>pi)?\s*(/\s*(?P<den>\d+(\.\d*)?))?\s*$"
)


def parse_time(text) -> float:
    """Parse ``1.5``, ``pi``, ``pi/2``, ``3pi/4``, ``-2*pi`` and the like."""
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return float(text)
    s = str(text).strip()
    if s.startswith("-") and s[1:].lstrip().startswith("pi"):
        s = "-1" + s[1:]
    elif s.startswith("+") and s[1:].lstrip().startswith("pi"):
        s = s[1:]
    m = _TIME_RE.match(s)
    if not m or not (m.group("coef") or m.group("pi")) or (m.group("star") and not m.group("pi")):
        raise ConfigError(f"cannot parse time value {text!r}")
    value = float(m.group("coef")) if m.group("coef") else 1.0
    if m.group("pi"):
        value *= math.pi
    if m.group("den"):
        den = float(m.group("den"))
        if den == 0:
            raise ConfigError(f"division by zero in time value {text!r}")
        value /= den
    return value


def parse_dims(text) -> Tuple[int, int]:
    if isinstance(text, (list, tuple)):
        parts = list(text)
    else:
        parts = str(text).lower().split("x")
    try:
        d_a, d_b = (int(p) for p in parts)
    except (TypeError, ValueError):
        raise ConfigError(f"dims must look like 2x3, got {text!r}")
    return d_a, d_b


_FIELD_PARSERS = {
    "alpha_re": float, "alpha_im": float, "beta_re": float, "beta_im": float,
    "t_start": parse_time, "t_end": parse_time, "steps": int, "seed": int,
    "trials": int, "tol": float, "dims": parse_dims, "output_path": str, "scenario": str,
}


def build_config(scenario: str, file_values: dict, flag_values: dict) -> ScenarioConfig:
    """Defaults, then the JSON config file, then command-line flags."""
    known = {f.name for f in fields(ScenarioConfig)}
    merged = {}
    for source in (file_values, flag_values):
        for key, value in source.items():
            key = key.replace("-", "_")
            if key == "out":
                key = "output_path"
            if key not in known:
                raise ConfigError(f"unknown config key {key!r}")
            if value is None:
                continue
            try:
                merged[key] = _FIELD_PARSERS[key](value)
            except ConfigError:
                raise
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {key}: {value!r} ({exc})")
    merged["scenario"] = scenario
    return ScenarioConfig(**merged).validate()


def _matrix_json(m):
    m = np.asarray(m)
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def _plain(x: float) -> float:
    # avoid -0.0 so reruns and platforms print identically
    return float(x) + 0.0


# --------------------------------------------------------------------------- scenarios


def run_reproduce(cfg: ScenarioConfig):
    amps = cfg.amps
    h = cnot_hamiltonian()
    u = propagator(h, HALF_PI)
    pa2 = abs(amps.alpha) ** 2
    pb2 = abs(amps.beta) ** 2
    claim_classical = 0.5 * (I2 + SIGMA_Z)
    claim_entangled = 0.5 * (I2 + (pa2 - pb2) * SIGMA_Z)
    cases = {}
    lines = [f"reduced state of A at t = pi/2, alpha = {amps.alpha}, beta = {amps.beta}"]
    for kind in ("classical", "entangled"):
        rho0 = initial_state(kind, amps).matrix
        rho_a = _reduced(u, rho0)
        d1 = trace_distance(rho_a, claim_classical)
        d2 = trace_distance(rho_a, claim_entangled)
        cases[kind] = {
            "oracle": _matrix_json(rho_a),
            "distance_to_claim_classical": _plain(d1),
            "distance_to_claim_entangled": _plain(d2),
        }
        lines.append(f"  {kind:<10} oracle diag = {np.real(np.diag(rho_a)).round(12).tolist()}"
                     f"  D(., (I+Z)/2) = {d1:.3e}  D(., claimed) = {d2:.3e}")

    # alpha = 0: both preparations coincide, so must every later reduced state
    zero = AmplitudePair(0.0, 1.0)
    times = list(cfg.grid()) + [HALF_PI]
    alpha_zero_gap = max(row[1] for row in compare_cases(h, zero, times))

    case1_ok = cases["classical"]["distance_to_claim_classical"] < cfg.tol
    degenerate_ok = alpha_zero_gap < cfg.tol
    code = EXIT_OK if case1_ok and degenerate_ok else EXIT_FAILED
    lines.append(f"  alpha = 0 max distance between cases over grid: {alpha_zero_gap:.3e}")
    lines.append(f"  classical case matches (I+Z)/2: {case1_ok}; alpha = 0 identity: {degenerate_ok}")
    report = {
        "scenario": "reproduce",
        "alpha": [amps.alpha.real, amps.alpha.imag],
        "beta": [amps.beta.real, amps.beta.imag],
        "t": HALF_PI,
        "tol": cfg.tol,
        "claims": {
            "classical": _matrix_json(claim_classical),
            "entangled": _matrix_json(claim_entangled),
        },
        "cases": cases,
        "alpha_zero_max_distance": _plain(alpha_zero_gap),
        "classical_matches_claim": case1_ok,
        "alpha_zero_identity": degenerate_ok,
        "exit_code": code,
    }
    return code, "\n".join(lines) + "\n", report


def _reduced(u, rho0):
    return partial_trace(u @ rho0 @ u.conj().T, 2, 2, "B")


TRAJECTORY_HEADER = (
    ["t"]
    + [f"r{c}_{ij}_{part}" for c in (1, 2) for ij in ("00", "01", "10", "11") for part in ("re", "im")]
    + ["trace_distance", "joint_diag_gap", "joint_coherence_gap", "delta_rho_fro"]
)


def run_trajectory(cfg: ScenarioConfig):
    amps = cfg.amps
    h = cnot_hamiltonian()
    grid = cfg.grid()
    gaps = compare_cases(h, amps, grid)
    dec = decompose(initial_state("entangled", amps))
    rho1 = initial_state("classical", amps).matrix
    rho2 = initial_state("entangled", amps).matrix
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRAJECTORY_HEADER)
    worst_diag = 0.0
    for t, (_, dist, diag_gap, coh_gap) in zip(grid, gaps):
        u = propagator(h, t)
        row = [t]
        for rho0 in (rho1, rho2):
            for z in _reduced(u, rho0).ravel():
                row += [z.real, z.imag]
        row += [dist, diag_gap, coh_gap, np.linalg.norm(delta_rho(u, dec))]
        writer.writerow([f"{_plain(v):.17g}" for v in row])
        worst_diag = max(worst_diag, diag_gap)
    code = EXIT_OK if worst_diag < cfg.tol else EXIT_FAILED
    return code, buf.getvalue(), None


def run_theorem(cfg: ScenarioConfig):
    d_a, d_b = cfg.dims
    factorized, reference = [], []
    for k in range(cfg.trials):
        f, r = theorem_trial(cfg.seed + k, d_a, d_b)
        factorized.append(f)
        reference.append(r)
    worst = max(factorized)
    ref = np.array(reference)
    code = EXIT_OK if worst < cfg.tol else EXIT_FAILED
    summary = {
        "min": _plain(ref.min()), "median": _plain(np.median(ref)),
        "mean": _plain(ref.mean()), "max": _plain(ref.max()),
    }
    report = {
        "scenario": "theorem",
        "dims": [d_a, d_b],
        "trials": cfg.trials,
        "seed": cfg.seed,
        "tol": cfg.tol,
        "max_factorized_norm": _plain(worst),
        "reference_norm": summary,
        "passed": code == EXIT_OK,
        "exit_code": code,
    }
    text = (f"theorem trials: {cfg.trials} at dims {d_a}x{d_b}, seeds {cfg.seed}..{cfg.seed + cfg.trials - 1}\n"
            f"  max |delta_rho|_F under product dynamics: {worst:.3e} (tol {cfg.tol:g})\n"
            f"  coupling reference |delta_rho|_F: min {summary['min']:.4f} median {summary['median']:.4f}"
            f" max {summary['max']:.4f}\n")
    return code, text, report


def _cp_row(embedding, u, tol):
    c = choi(induced_map(embedding, u))
    ok, lowest = is_cp(c, tol)
    return {
        "choi_min_eigenvalue": _plain(lowest),
        "cp": ok,
        "kraus_count": len(kraus_from_choi(c, tol)) if ok else None,
    }


def run_cp_report(cfg: ScenarioConfig):
    amps = cfg.amps
    h = cnot_hamiltonian()
    rho_b = initial_state("classical", amps).reduced("B")
    embeddings = {"product": product_embedding(rho_b)}
    domain = {}
    for kind in ("classical", "entangled"):
        name = f"correlated_{kind}"
        embeddings[name] = correlated_embedding(decompose(initial_state(kind, amps)).corr_op, rho_b)
        domain[name] = [_plain(embeddings[name].min_eigenvalue(np.diag(v).astype(complex)))
                        for v in ([1, 0], [0, 1])]

    rows, ok = [], True
    for t in cfg.grid():
        u = propagator(h, t)
        row = {"t": _plain(t)}
        for name, emb in embeddings.items():
            row[name] = _cp_row(emb, u, cfg.tol)
        ok &= row["product"]["cp"]
        rows.append(row)

    rng = np.random.default_rng(cfg.seed)
    local = tensor(random_unitary(2, rng), random_unitary(2, rng))
    control = {name: _cp_row(emb, local, cfg.tol) for name, emb in embeddings.items()}
    ok &= all(r["cp"] and r["kraus_count"] == 1 for r in control.values())

    code = EXIT_OK if ok else EXIT_FAILED
    report = {
        "scenario": "cp-report",
        "alpha": [amps.alpha.real, amps.alpha.imag],
        "beta": [amps.beta.real, amps.beta.imag],
        "seed": cfg.seed,
        "tol": cfg.tol,
        "embedding_min_eigenvalue_on_basis_states": domain,
        "rows": rows,
        "factorizable_control": control,
        "exit_code": code,
    }
    lines = [f"CP report over {len(rows)} times (C-NOT dynamics)"]
    for name in embeddings:
        worst = min(r[name]["choi_min_eigenvalue"] for r in rows)
        n_bad = sum(not r[name]["cp"] for r in rows)
        lines.append(f"  {name:<22} min Choi eigenvalue {worst:+.6f}, non-CP at {n_bad} times")
    for name, r in control.items():
        lines.append(f"  control {name:<14} CP {r['cp']}, Kraus count {r['kraus_count']}")
    return code, "\n".join(lines) + "\n", report


RUNNERS = {
    "reproduce": run_reproduce,
    "trajectory": run_trajectory,
    "theorem": run_theorem,
    "cp-report": run_cp_report,
}


# --------------------------------------------------------------------------- entry point


def _common_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--alpha-re")
    p.add_argument("--alpha-im")
    p.add_argument("--beta-re")
    p.add_argument("--beta-im")
    p.add_argument("--t-start", help="number or multiple of pi, e.g. pi/2")
    p.add_argument("--t-end", help="number or multiple of pi, e.g. 2pi")
    p.add_argument("--steps")
    p.add_argument("--seed")
    p.add_argument("--trials")
    p.add_argument("--tol")
    p.add_argument("--dims", help="subsystem dims as dAxdB")
    p.add_argument("--config", help="JSON file with config values; flags override it")
    p.add_argument("--out", help="output path (JSON report or CSV)")
    return p


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reddyn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="scenario", required=True)
    common = _common_flags()
    sub.add_parser("reproduce", parents=[common], help="reduced states at t = pi/2 against the claimed values")
    sub.add_parser("trajectory", parents=[common], help="CSV of both reduced trajectories and gaps")
    sub.add_parser("theorem", parents=[common], help="seeded trials of the product-dynamics theorem")
    sub.add_parser("cp-report", parents=[common], help="Choi spectra of the induced reduced maps")
    return parser


def main(argv=None) -> int:
    # argparse itself exits with status 2 on malformed arguments
    args = make_parser().parse_args(argv)

    flags = {k: v for k, v in vars(args).items() if k not in ("scenario", "config")}
    try:
        file_values = {}
        if args.config:
            try:
                with open(args.config) as fh:
                    file_values = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot read config file {args.config}: {exc}")
            if not isinstance(file_values, dict):
                raise ConfigError("config file must hold a JSON object")
            file_values.pop("scenario", None)
        cfg = build_config(args.scenario, file_values, flags)
    except ConfigError as exc:
        print(f"reddyn: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    code, text, report = RUNNERS[cfg.scenario](cfg)
    if cfg.scenario == "trajectory":
        payload = text
        text = f"wrote {cfg.steps + 1} rows to {cfg.output_path}\n" if cfg.output_path else text
    else:
        payload = json.dumps(report, indent=2) + "\n"
    if cfg.output_path:
        try:
            with open(cfg.output_path, "w", newline="") as fh:
                fh.write(payload)
        except OSError as exc:
            print(f"reddyn: cannot write {cfg.output_path}: {exc}", file=sys.stderr)
            return EXIT_IO
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
