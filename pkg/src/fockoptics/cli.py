"""Scenario runner: ``fockoptics <scenario> [flags]``.

Every scenario emits rows holding its inputs, an analytic value, a numeric
value and their absolute deviation. Exit codes: 0 all rows within
tolerance, 1 invalid configuration, 2 a verification row failed.
"""
from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import os
import sys
from typing import Callable

import numpy as np

from . import detect, fock, network, ops, phase
from .errors import FockError

ENV_OUT_DIR = "FOCKOPTICS_OUT_DIR"
FORMATS = ("csv", "json")

DEFAULTS = {
    "nmax": None,
    "gamma": None,
    "gamma2": None,
    "phi": None,
    "phi2": None,
    "sweep": None,
    "format": "csv",
    "out": None,
    "omega": None,
    "volume": None,
    "tol": None,
    "n": None,
    "points": None,
    "gammasq": None,
    "state": None,
}


class ConfigError(Exception):
    pass


def parse_complex(text) -> complex:
    """``"re+imi"`` (``i`` or ``j``) or polar ``"r@theta"``."""
    if isinstance(text, (int, float)):
        z = complex(text)
    else:
        t = str(text).strip().replace(" ", "")
        try:
            if "@" in t:
                r, theta = t.split("@")
                z = cmath.rect(float(r), float(theta))
            else:
                z = complex(t.replace("i", "j"))
        except ValueError as exc:
            raise ConfigError(f"cannot parse complex value {text!r}") from exc
    if not cmath.isfinite(z):
        raise ConfigError(f"complex value {text!r} is not finite")
    return z


def parse_sweep(text):
    if isinstance(text, dict):
        parts = (text.get("start"), text.get("stop"), text.get("points"))
    else:
        parts = str(text).split(":")
    try:
        start, stop, points = float(parts[0]), float(parts[1]), int(parts[2])
    except (IndexError, TypeError, ValueError) as exc:
        raise ConfigError(f"sweep must be start:stop:points, got {text!r}") from exc
    if points < 2:
        raise ConfigError("a sweep needs at least 2 points")
    if not (math.isfinite(start) and math.isfinite(stop)):
        raise ConfigError("sweep bounds must be finite")
    return start, stop, points


def fmt_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}i"


class Ctx:
    """Resolved configuration with scenario-specific defaults."""

    def __init__(self, cfg: dict):
        self.cfg = cfg
        self.ms = fock.ModeScale(omega=cfg["omega"], volume=cfg["volume"]) if cfg["omega"] or cfg["volume"] else fock.ModeScale()

    def get(self, key, default):
        value = self.cfg[key]
        return default if value is None else value

    def complex(self, key, default) -> complex:
        value = self.cfg[key]
        return default if value is None else parse_complex(value)

    def real(self, key, default) -> float:
        value = float(self.get(key, default))
        if not math.isfinite(value):
            raise ConfigError(f"{key} must be finite")
        return value

    def integer(self, key, default, lo=0) -> int:
        value = self.get(key, default)
        if int(value) != value or value < lo:
            raise ConfigError(f"{key} must be an integer >= {lo}")
        return int(value)

    def sweep(self, default):
        start, stop, points = parse_sweep(self.cfg["sweep"]) if self.cfg["sweep"] is not None else default
        if self.cfg["points"] is not None:
            points = self.integer("points", 2, lo=2)
        return np.linspace(start, stop, points)

    def tol(self, base: float, power: float = 0.0) -> float:
        """Tolerance in mode units, rescaled to SI by ``scale^power``; ``--tol`` overrides."""
        if self.cfg["tol"] is not None:
            return float(self.cfg["tol"])
        return base * self.ms.scale**power

    def state(self, default="coherent", n_max=None):
        kind = self.get("state", default)
        if kind == "coherent":
            g = self.complex("gamma", 1.0 + 0.5j)
            return f"coherent({fmt_complex(g)})", fock.coherent_state(g, n_max if n_max else None)
        if kind == "number":
            n = self.integer("n", 3)
            return f"number({n})", fock.number_state(n, max(n_max or 0, self.integer("nmax", n + 4)))
        if kind == "vacuum":
            return "vacuum", fock.number_state(0, max(n_max or 0, self.integer("nmax", 8)))
        if kind == "superposition":
            size = max(n_max or 0, self.integer("nmax", 12))
            amps = np.zeros(size + 1, dtype=complex)
            amps[1], amps[3] = 1.0, 0.5j
            return "superposition(|1>+0.5i|3>)", fock.FockState.from_amplitudes(amps)
        raise ConfigError(f"unknown state {kind!r}")


def row(tol, analytic, numeric, **inputs):
    analytic, numeric = float(analytic), float(numeric)
    out = dict(inputs)
    out.update(analytic=analytic, numeric=numeric, deviation=abs(analytic - numeric), tol=float(tol))
    return out


def sc_coherent_stats(ctx: Ctx):
    gammas = [ctx.complex("gamma", 0)] if ctx.cfg["gamma"] is not None else [math.sqrt(x) for x in (0.25, 1, 4, 9, 16)]
    other = ctx.complex("gamma2", 0.5 - 0.5j)
    tol = ctx.tol(1e-9)
    rows = []
    for g in gammas:
        n_max = max(fock.auto_truncation(g), fock.auto_truncation(other), ctx.integer("nmax", 0))
        s = fock.coherent_state(g, n_max)
        num = ops.number(n_max)
        mean = abs(g) ** 2
        rows.append(row(tol, mean, ops.expect(num, s).real, gamma=fmt_complex(g), quantity="mean_n"))
        rows.append(row(tol, mean, ops.variance(num, s), gamma=fmt_complex(g), quantity="var_n"))
        overlap = abs(fock.inner(s, fock.coherent_state(other, n_max))) ** 2
        rows.append(row(tol, math.exp(-abs(g - other) ** 2), overlap, gamma=fmt_complex(g), quantity="overlap"))
    return rows


def sc_phase_dist(ctx: Ctx):
    label, s = ctx.state("coherent")
    grid = phase.PhaseGrid(ctx.integer("points", 64, lo=16))
    numeric = phase.phase_distribution(s, grid).density
    if label.startswith("coherent"):
        g = ctx.complex("gamma", 1.0 + 0.5j)
        analytic = phase.coherent_phase_density(abs(g), fock.principal_phase(g) if g else 0.0, grid.points)
    elif label.startswith("number") or label == "vacuum":
        analytic = np.full(grid.M, 1.0 / phase.TWO_PI)
    else:
        raise ConfigError("phase-dist supports coherent, number and vacuum states")
    tol = ctx.tol(1e-10)
    return [row(tol, a, v, state=label, phi=float(p)) for p, a, v in zip(grid.points, analytic, numeric)]


def sc_phase_variance(ctx: Ctx):
    if ctx.cfg["gammasq"] is not None:
        values = [ctx.real("gammasq", 0.0)]
    else:
        values = ctx.sweep((0.0, 5.0, 11))
    tol = ctx.tol(1e-6)
    rows = []
    for x in values:
        if x < 0:
            raise ConfigError("gammasq must be non-negative")
        r = math.sqrt(x)
        series = phase.phase_variance_series(r)
        _, quad = phase.phase_moments(fock.coherent_state(r))
        rows.append(row(tol, series, quad, gammasq=float(x), value=series))
    return rows


def sc_trig_estimators(ctx: Ctx):
    phi = ctx.real("phi", math.pi / 5)
    n_max = ctx.integer("nmax", 200, lo=2)
    g = ctx.complex("gamma", 1.5 * cmath.exp(1j * phi))
    n = ctx.integer("n", 3, lo=1)
    tol = ctx.tol(1e-10)
    rows = []
    raw = phase.trig_estimators(fock.phase_state(phi, n_max, "paper_raw"))
    closed = phase.raw_phase_state_estimates(phi, n_max)
    for q in ("cos", "sin", "cos2", "sin2", "mean_n"):
        rows.append(row(tol, getattr(closed, q), getattr(raw, q), state=f"phase_raw({n_max})", quantity=q))
    num = phase.trig_estimators(fock.number_state(n, n + 2))
    half = (n + 0.5) / (2 * n)
    for q, a in (("cos", 0.0), ("sin", 0.0), ("cos2", half), ("sin2", half)):
        rows.append(row(tol, a, getattr(num, q), state=f"number({n})", quantity=q))
    coh = phase.trig_estimators(fock.coherent_state(g))
    th, x = cmath.phase(g), abs(g) ** 2
    for q, a in (
        ("cos", math.cos(th)),
        ("sin", math.sin(th)),
        ("cos2", math.cos(th) ** 2 + 1 / (4 * x)),
        ("sin2", math.sin(th) ** 2 + 1 / (4 * x)),
    ):
        rows.append(row(tol, a, getattr(coh, q), state=f"coherent({fmt_complex(g)})", quantity=q))
    return rows


def sc_pathology(ctx: Ctx):
    n_max = ctx.integer("nmax", 24, lo=2)
    tol = ctx.tol(1e-10)
    e_plus, e_minus = phase.shift_ops(n_max)
    one = ops.identity(n_max)
    low = ops.lower_half(n_max)
    vac = np.zeros_like(one)
    vac[0, 0] = 1.0
    root_n = np.diag(np.sqrt(np.arange(n_max + 1.0))).astype(complex)
    a, ad, num = ops.annihilation(n_max), ops.creation(n_max), ops.number(n_max)

    def dev(x, y, sl=slice(None)):
        return float(np.max(np.abs(x[sl, sl] - y[sl, sl])))

    rows = [
        row(tol, 0.0, dev(e_plus @ e_minus, one, low), identity="E+E- = 1 (lower half)"),
        row(tol, 0.0, dev(e_minus @ e_plus, one - vac), identity="E-E+ = 1 - |0><0|"),
        row(tol, 0.0, dev(e_plus @ root_n, a), identity="a = E+ n^1/2"),
        row(tol, 0.0, dev(root_n @ e_minus, ad), identity="a+ = n^1/2 E-"),
        row(tol, 0.0, dev(root_n @ e_minus @ e_plus @ root_n, num), identity="a+a = n"),
        row(tol, 0.0, dev(e_plus @ num @ e_minus, num + one, low), identity="aa+ = n + 1 (lower half)"),
    ]
    amps = np.array([math.cos(0.7 * k) + 1j * math.sin(1.3 * k) for k in range(n_max + 1)])
    s = fock.FockState.from_amplitudes(amps)
    for rng in phase.PHASE_RANGES:
        res = phase.number_phase_residual(s, rng)
        rows.append(row(tol, 0.0, float(np.max(np.abs(res.applied - res.closed_form))), identity=f"[n,phi] residual ({rng})"))
    return rows


def sc_homodyne(ctx: Ctx):
    label, s = ctx.state("coherent")
    g2 = ctx.complex("gamma2", 3.0)
    phis = [ctx.real("phi2", 0.0)] if ctx.cfg["phi2"] is not None else ctx.sweep((-math.pi, math.pi, 9))
    rows = []
    for p in phis:
        r = detect.homodyne_noise(s, g2, float(p), ctx.ms)
        base = dict(state=label, gamma2=fmt_complex(g2), phi2=float(p))
        rows.append(row(ctx.tol(1e-8, 1), r.closed_mean, r.mean, quantity="mean", **base))
        rows.append(row(ctx.tol(1e-8, 2), r.closed_second_moment, r.second_moment, quantity="second_moment", **base))
        rows.append(row(ctx.tol(1e-8, 2), r.closed_final, r.second_moment, quantity="second_moment_quadrature_form", **base))
    return rows


def sc_quadrature(ctx: Ctx):
    n = ctx.integer("n", 2)
    g = ctx.complex("gamma", 1.0 + 0.5j)
    sc = ctx.ms.scale
    cases = [
        ("vacuum", fock.number_state(0, 12), 1.0),
        (f"coherent({fmt_complex(g)})", fock.coherent_state(g), 1.0),
        (f"number({n})", fock.number_state(n, 4 * n + 8), 2 * n + 1.0),
    ]
    rows = []
    for label, s, factor in cases:
        st = detect.quadrature_stats(s, ctx.ms)
        spread = math.sqrt(factor * sc)
        rows.append(row(ctx.tol(1e-8, 0.5), spread, st.delta_q, state=label, quantity="delta_q"))
        rows.append(row(ctx.tol(1e-8, 0.5), spread, st.delta_p, state=label, quantity="delta_p"))
        rows.append(row(ctx.tol(1e-8, 1), factor * sc, st.product, state=label, quantity="product"))
    return rows


def sc_mz_sweep(ctx: Ctx):
    n = ctx.integer("n", 4)
    phis = ctx.sweep((0.0, 2 * math.pi, 9))
    sc = ctx.ms.scale
    tol = ctx.tol(1e-10, 1)
    s = fock.number_state(n, n)
    rows = []
    for p in phis:
        g1 = detect.g1_mz(s, float(p), ctx.ms)
        closed3 = n * sc * math.sin(p / 2) ** 2
        out = row(tol, closed3, g1.port3, phi=float(p))
        out["port3"] = float(g1.port3)
        out["port4"] = float(g1.port4)
        out["port4_analytic"] = n * sc * math.cos(p / 2) ** 2
        out["deviation"] = max(out["deviation"], abs(out["port4"] - out["port4_analytic"]), abs(g1.port3 + g1.port4 - n * sc))
        rows.append(out)
    return rows


def sc_g2(ctx: Ctx):
    label, s = ctx.state("coherent")
    sc_ = network.SplitterCoeffs.fifty_fifty()
    r = detect.g2_splitter(s, sc_, ctx.ms)
    mean_n = ops.expect(ops.number(s.n_max), s).real
    if label.startswith("coherent"):
        expected = 1.0
    elif label.startswith("number") or label == "vacuum":
        k = int(round(mean_n))
        expected = (k - 1) / k if k else math.nan
    else:
        expected = r.g2
    rows = [row(ctx.tol(1e-10, 2), r.closed_form, r.correlation, state=label, quantity="correlation")]
    if not math.isnan(expected):
        rows.append(row(ctx.tol(1e-10), expected, r.g2, state=label, quantity="g2"))
    return rows


def sc_splitter(ctx: Ctx):
    n = ctx.integer("n", 4)
    refl = ctx.real("phi", 0.0)
    bs = network.SplitterCoeffs.fifty_fifty() if not refl else network.SplitterCoeffs.from_reflectance(math.sin(refl) ** 2)
    tol = ctx.tol(1e-10)
    rows = []
    got = network.entanglement_check(n, bs)
    want = network.entanglement_closed_form(n, bs)
    for q in got._fields:
        rows.append(row(tol, getattr(want, q), getattr(got, q), n=n, quantity=q))
    for n1 in range(n + 1):
        out = network.split_joint_number(n1, n - n1, bs)
        m = np.arange(n + 1)
        leak = float(np.sum(np.abs(out.amps) ** 2) - np.sum(np.abs(out.amps[m, n - m]) ** 2))
        rows.append(row(tol, 1.0, out.norm_sq, n=n, quantity=f"norm({n1},{n - n1})"))
        rows.append(row(tol, 0.0, leak, n=n, quantity=f"conservation({n1},{n - n1})"))
    hom = network.split_joint_number(1, 1, network.SplitterCoeffs.fifty_fifty()).amps[1, 1]
    rows.append(row(tol, 0.0, abs(hom), n=2, quantity="hong_ou_mandel"))
    g = ctx.complex("gamma", 1.0 + 0.5j)
    split = network.split_state(fock.coherent_state(g), bs)
    rows.append(row(tol, 1.0, fock.reduced_purity(split), n=0, quantity=f"purity(coherent {fmt_complex(g)})"))
    return rows


def sc_identities(ctx: Ctx):
    g = ctx.complex("gamma", 0.8 + 0.6j)
    n_max = ctx.integer("nmax", 60, lo=2)
    phi = ctx.real("phi", 0.9)
    rows = []
    cbh = ops.cbh_check(g, max(n_max, fock.auto_truncation(g)))
    rows.append(row(ctx.tol(1e-7), 0.0, cbh.max_deviation, identity="CBH", parameter=fmt_complex(g)))
    for n in (0, 1, 5, 12, 30):
        for power in (1, 2):
            bm = network.binomial_moment(n, 0.3, 0.7, power)
            rows.append(row(ctx.tol(1e-10), bm.closed_form, bm.brute_force, identity=f"B{power}", parameter=str(n)))
    cfg = network.MZConfig(network.SplitterCoeffs.fifty_fifty(), network.SplitterCoeffs.from_reflectance(0.3), phi)
    for name, value in network.mz_compound_table(cfg).residuals().items():
        rows.append(row(ctx.tol(1e-12), 0.0, value, identity=name, parameter=f"{phi:.17g}"))
    return rows


SCENARIOS: dict[str, Callable[[Ctx], list]] = {
    "coherent-stats": sc_coherent_stats,
    "phase-dist": sc_phase_dist,
    "phase-variance": sc_phase_variance,
    "trig-estimators": sc_trig_estimators,
    "pathology": sc_pathology,
    "homodyne": sc_homodyne,
    "quadrature": sc_quadrature,
    "mz-sweep": sc_mz_sweep,
    "g2": sc_g2,
    "splitter": sc_splitter,
    "identities": sc_identities,
}


def render(result: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result, indent=2, sort_keys=False) + "\n"
    rows = result["rows"]
    header = []
    for r in rows:
        header.extend(k for k in r if k not in header)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        writer.writerow([f"{r[k]:.17g}" if isinstance(r.get(k), float) else r.get(k, "") for k in header])
    return buf.getvalue()


def run(config: dict) -> tuple[int, str]:
    """Execute a resolved config; returns (exit code, rendered output)."""
    name = config.get("scenario")
    if name not in SCENARIOS:
        raise ConfigError(f"unknown scenario {name!r}; choose from {', '.join(SCENARIOS)}")
    if config["format"] not in FORMATS:
        raise ConfigError(f"format must be one of {FORMATS}")
    if config["tol"] is not None and not float(config["tol"]) >= 0:
        raise ConfigError("tol must be non-negative")
    try:
        rows = SCENARIOS[name](Ctx(config))
    except FockError as exc:
        raise ConfigError(str(exc)) from exc
    max_dev = max(r["deviation"] for r in rows)
    passed = all(r["deviation"] < r["tol"] for r in rows)
    shown = {k: v for k, v in config.items() if k != "out"}
    result = {"scenario": name, "config": shown, "rows": rows, "max_deviation": max_dev, "pass": passed}
    return (0 if passed else 2), render(result, config["format"])


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fockoptics", description="Run a verification scenario and emit CSV or JSON.")
    p.add_argument("scenario_pos", nargs="?", metavar="scenario", help=", ".join(SCENARIOS))
    p.add_argument("--scenario")
    p.add_argument("--config", help="JSON file with flag values")
    p.add_argument("--nmax", type=int)
    p.add_argument("--gamma")
    p.add_argument("--gamma2")
    p.add_argument("--phi", type=float)
    p.add_argument("--phi2", type=float)
    p.add_argument("--sweep", help="start:stop:points")
    p.add_argument("--format", choices=FORMATS)
    p.add_argument("--out")
    p.add_argument("--omega", type=float)
    p.add_argument("--volume", type=float)
    p.add_argument("--tol", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--points", type=int)
    p.add_argument("--gammasq", type=float)
    p.add_argument("--state", choices=("coherent", "number", "vacuum", "superposition"))
    return p


def resolve(args: argparse.Namespace, env=None) -> dict:
    """Merge defaults < environment < config file < flags."""
    env = os.environ if env is None else env
    cfg = dict(DEFAULTS)
    cfg["scenario"] = None
    out_dir = env.get(ENV_OUT_DIR)
    if args.config:
        try:
            with open(args.config) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config!r}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(loaded) - set(cfg)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(loaded)
    for key in DEFAULTS:
        value = getattr(args, key)
        if value is not None:
            cfg[key] = value
    if args.scenario_pos and args.scenario and args.scenario_pos != args.scenario:
        raise ConfigError("positional scenario and --scenario disagree")
    cfg["scenario"] = args.scenario_pos or args.scenario or cfg["scenario"]
    if cfg["out"] is None and out_dir and cfg["scenario"]:
        cfg["out"] = os.path.join(out_dir, f"{cfg['scenario']}.{cfg['format']}")
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        cfg = resolve(args)
        code, text = run(cfg)
    except ConfigError as exc:
        print(f"fockoptics: {exc}", file=sys.stderr)
        return 1
    if cfg["out"]:
        os.makedirs(os.path.dirname(os.path.abspath(cfg["out"])), exist_ok=True)
        with open(cfg["out"], "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code == 2:
        print("fockoptics: verification failed", file=sys.stderr)
    return code
