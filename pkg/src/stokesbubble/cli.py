"""Command-line driver: simulate from a JSON manifest, or run a verification suite."""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass, fields

import numpy as np

from . import dynamics, fourier, geometry, spectral, velocity
from .dynamics import SimConfig, SimulationError, fitted_rate, simulate, write_diagnostics
from .fourier import TrigSeries
from .geometry import InterfaceState

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


class ManifestError(ValueError):
    def __init__(self, path, msg):
        super().__init__(f"{path}: {msg}")
        self.path = path


# presets: (phi modes, gamma, R, config overrides)
PRESETS = {
    "circle": ({}, 1.0, 1.0, {"t_end": 1.0}),
    "mode2_small": ({2: 0.01}, 1.0, 1.0, {"t_end": 20.0}),
    "mode3_small": ({3: 0.005}, 1.0, 1.0, {"t_end": 20.0}),
    # F^{1,1} norm 0.056, just over the default smallness guard
    "multi_mode": ({2: 0.008, 3: 0.004}, 1.0, 1.0, {"t_end": 20.0, "smallness": 0.06}),
}


def preset_state(name, N=16):
    modes, gamma, R, _ = PRESETS[name]
    return InterfaceState(TrigSeries.from_modes(N, modes), gamma=gamma, R=R)


def preset_config(name, **kw):
    d = dict(PRESETS[name][3])
    d.update(kw)
    return SimConfig(**d)


@dataclass(frozen=True)
class RunManifest:
    config: SimConfig
    initial: InterfaceState
    seed: int = 0
    output_dir: str = "out"


_CONFIG_TYPES = {f.name: f.type for f in fields(SimConfig)}


def _num(d, key, path, positive=False, required=True, default=None):
    if key not in d:
        if required:
            raise ManifestError(f"{path}{key}", "missing required field")
        return default
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ManifestError(f"{path}{key}", f"expected a finite number, got {v!r}")
    if positive and not v > 0:
        raise ManifestError(f"{path}{key}", f"must be positive, got {v!r}")
    return float(v)


def _parse_config(d):
    if not isinstance(d, dict):
        raise ManifestError("config", "expected an object")
    kw = {}
    for key, v in d.items():
        if key not in _CONFIG_TYPES:
            raise ManifestError(f"config.{key}", "unknown field")
        typ = _CONFIG_TYPES[key]
        if typ == "int":
            if isinstance(v, bool) or not isinstance(v, int):
                raise ManifestError(f"config.{key}", f"expected an integer, got {v!r}")
        elif typ == "float":
            _num(d, key, "config.")
            v = float(v)
        elif typ == "bool":
            if not isinstance(v, bool):
                raise ManifestError(f"config.{key}", f"expected true/false, got {v!r}")
        elif typ == "str" and not isinstance(v, str):
            raise ManifestError(f"config.{key}", f"expected a string, got {v!r}")
        kw[key] = v
    return kw


def _parse_initial(d, N, constrained):
    if not isinstance(d, dict):
        raise ManifestError("initial", "expected an object")
    if "preset" in d:
        name = d["preset"]
        if name not in PRESETS:
            raise ManifestError("initial.preset", f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
        phi = TrigSeries.from_modes(N, PRESETS[name][0])
    elif "modes" in d:
        modes = {}
        for ks, v in d["modes"].items():
            try:
                k = int(ks)
            except ValueError:
                raise ManifestError(f"initial.modes.{ks}", "mode key must be an integer") from None
            if k < 0:
                raise ManifestError(f"initial.modes.{ks}", "give nonnegative modes; conjugates are implied")
            if abs(k) > N:
                raise ManifestError(f"initial.modes.{ks}", f"mode outside band N={N}")
            if not (isinstance(v, list) and len(v) == 2):
                raise ManifestError(f"initial.modes.{ks}", "expected [re, im]")
            if k == 0 and v[1] != 0:
                raise ManifestError(f"initial.modes.{ks}", "zero mode must be real")
            modes[k] = complex(float(v[0]), float(v[1]))
        phi = TrigSeries.from_modes(N, modes)
    elif "series" in d:
        try:
            phi = TrigSeries.from_json(d["series"]).resized(N)
        except (KeyError, ValueError, TypeError) as exc:
            raise ManifestError("initial.series", str(exc)) from None
    else:
        raise ManifestError("initial", "needs one of 'preset', 'modes' or 'series'")
    if abs(phi[0]) > 0:
        raise ManifestError("initial", "phi must have zero mean (coeff(0) = 0)")
    if constrained and (abs(phi[1]) > 0):
        raise ManifestError("initial", "constrained runs need coeff(+-1) = 0")
    return phi


def parse_manifest(raw):
    if not isinstance(raw, dict):
        raise ManifestError("$", "manifest must be a JSON object")
    preset = None
    init = raw.get("initial")
    if isinstance(init, dict) and "preset" in init:
        if init["preset"] not in PRESETS:
            raise ManifestError("initial.preset", f"unknown preset {init['preset']!r}; choose from {sorted(PRESETS)}")
        preset = PRESETS[init["preset"]]
    cfg_kw = dict(preset[3]) if preset else {}
    cfg_kw.update(_parse_config(raw.get("config", {})))
    try:
        config = SimConfig(**cfg_kw)
    except ValueError as exc:
        raise ManifestError("config", str(exc)) from None
    need = preset is None
    gamma = _num(raw, "gamma", "", positive=True, required=need, default=preset[1] if preset else None)
    R = _num(raw, "R", "", positive=True, required=need, default=preset[2] if preset else None)
    theta0 = _num(raw, "theta0", "", required=False, default=0.0)
    if init is None:
        raise ManifestError("initial", "missing required field")
    phi = _parse_initial(init, config.N, config.constrained)
    seed = raw.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise ManifestError("seed", "expected an integer")
    out = raw.get("output_dir", "out")
    if not isinstance(out, str):
        raise ManifestError("output_dir", "expected a string")
    return RunManifest(config, InterfaceState(phi, theta0=theta0, R=R, gamma=gamma), seed, out)


def load_manifest(path):
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ManifestError("$", f"malformed JSON ({exc})") from None
    except OSError as exc:
        raise ManifestError("$", f"cannot read {path}: {exc.strerror}") from None
    return parse_manifest(raw)


def _f17(x):
    return float(f"{x:.17g}")


def write_series(path, series):
    """JSON with 17 significant digits, enough to round-trip every double."""
    d = {"N": series.N, "real": series.real_flag,
         "re": [_f17(x) for x in series.coeff.real], "im": [_f17(x) for x in series.coeff.imag]}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(d, fh, indent=1)


def read_series(path):
    with open(path, encoding="utf-8") as fh:
        d = json.load(fh)
    return TrigSeries.from_json(d, real_flag=d.get("real", True))


# simulate

NOISE_FLOOR = 1e-13


def trajectory_checks(records, init, config, floor=NOISE_FLOOR):
    """Named pass/fail checks over a trajectory.

    Increases below ``floor`` (absolute) are roundoff, not growth.
    """
    n = np.array([r.norm_F11_unweighted for r in records])
    R = init.R
    out = {}
    out["growth_rows"] = int(np.sum(np.diff(n) > floor))
    out["monotone_decay"] = out["growth_rows"] == 0
    out["volume_residual_max"] = float(max(r.volume_residual for r in records))
    out["volume_ok"] = out["volume_residual_max"] <= 1e-8
    c_allow = max(records[0].closure_residual, config.tol_closure)
    out["closure_max"] = float(max(r.closure_residual for r in records))
    out["closure_ok"] = out["closure_max"] <= c_allow
    ok = True
    for r in records:
        b = geometry.length_bounds(r.norm_F01, R)
        if b is None or not b[0] <= r.L <= b[1]:
            ok = False
    out["length_bounds_ok"] = ok
    deficit = np.array([geometry.isoperimetric_deficit(r.L, r.volume) for r in records])
    out["deficit_nonincreasing"] = bool(np.all(np.diff(deficit) <= floor))
    out["max_residual"] = float(max(max(r.maxU, r.maxT) for r in records))
    return out


def _summary(records, init, config, status):
    rate = fitted_rate(records)
    return {
        "status": status,
        "records": len(records),
        "t_final": records[-1].t if records else 0.0,
        "fitted_rate": None if not math.isfinite(rate) else rate,
        "linear_rate_mode2": 2 * init.gamma / (4 * init.R),
        "invariants": trajectory_checks(records, init, config) if records else {},
    }


def _write_outputs(out, records, state, summary):
    os.makedirs(out, exist_ok=True)
    write_diagnostics(os.path.join(out, "diagnostics.csv"), records)
    final = {"t": state.t, "theta0": state.theta0, "R": state.R, "gamma": state.gamma,
             "phi": state.phi.to_json()}
    with open(os.path.join(out, "final_state.json"), "w", encoding="utf-8") as fh:
        json.dump(final, fh, indent=1)
    with open(os.path.join(out, "summary.json"), "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=1)


def cmd_simulate(manifest, out=None):
    out = out or manifest.output_dir
    try:
        records, state = simulate(manifest.initial, manifest.config)
    except SimulationError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        _write_outputs(out, exc.records, exc.state, _summary(exc.records, manifest.initial, manifest.config, "failed"))
        return EXIT_NUMERIC
    except (dynamics.SmallnessError, geometry.VolumeDegeneracyError, velocity.ResolutionError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    summary = _summary(records, manifest.initial, manifest.config, "ok")
    _write_outputs(out, records, state, summary)
    return EXIT_OK


# verify suites; each returns a list of row dicts with a boolean "pass"

def _suite_multiplier(seed, kmax):
    rows = []
    for r in spectral.verify_linearization(spectral.LinearizationConfig(kmax=kmax)):
        if r.k == 1:
            tol = 1e-6
        elif r.method == "pv_quadrature":
            tol = 1e-8
        else:
            tol = 1e-4 * abs(r.analytic)
        rows.append({"k": r.k, "analytic": r.analytic, "numeric": r.numeric, "abs_err": r.abs_err,
                     "method": r.method, "pass": r.abs_err <= tol})
    return rows


def _suite_kernels(seed, kmax):
    rows = []
    for k in range(2, kmax + 1):
        g = spectral.g_constants_quadrature(k)
        ga = spectral.g_constants_analytic(k)
        for name in g:
            err = abs(g[name] - ga[name])
            rows.append({"check": name, "k": k, "abs_err": err, "pass": err <= 1e-8})
        err = abs(spectral.J1_from_g(k, g) - spectral.J1_analytic(k))
        rows.append({"check": "J1_from_g", "k": k, "abs_err": err, "pass": err <= 1e-8})
    rng = np.random.default_rng(seed)
    H3, H4 = velocity.H34()
    C0 = velocity.kernel_constants(0)
    for _ in range(20):
        k = int(rng.integers(2, 4 * kmax))
        m1 = abs(velocity.u1_multiplier(k))
        rows.append({"check": "U1_mode_bound", "k": k, "value": m1, "bound": H3 + H4 * k, "pass": m1 <= H3 + H4 * k})
        k1, kj, kc = (int(x) for x in rng.integers(-4 * kmax, 4 * kmax + 1, size=3))
        v = abs(velocity.lemma_integral(k1, kj, kc))
        rows.append({"check": "lemma_C0", "k": [k1, kj, kc], "value": v, "bound": C0, "pass": v <= C0})
    return rows


def random_series(rng, N, scale=1.0, decay=0.0, real=True):
    k = np.arange(N + 1)
    half = (rng.standard_normal(N + 1) + 1j * rng.standard_normal(N + 1)) * scale * np.exp(-decay * k)
    half[0] = half[0].real
    if real:
        return TrigSeries.from_nonneg(half)
    full = (rng.standard_normal(2 * N + 1) + 1j * rng.standard_normal(2 * N + 1)) * scale
    return TrigSeries(N, full, False)


def norm_algebra_violations(rng, trials, nu=0.0):
    """Counts of violated product and embedding estimates over random trig polynomials."""
    w = fourier.NormWeight(nu0=nu, t=math.inf) if nu else fourier.UNWEIGHTED
    bad = {"product_F01": 0, "product_Fs1": 0, "embedding": 0}
    for i in range(trials):
        n = 2 + i % 3
        fs = [random_series(rng, int(rng.integers(1, 12))) for _ in range(n)]
        prod = fs[0]
        for f in fs[1:]:
            prod = fourier.product(prod, f, prod.N + f.N)
        n0 = [fourier.norm_F01(f, w) for f in fs]
        if fourier.norm_F01(prod, w) > math.prod(n0) * (1 + 1e-12):
            bad["product_F01"] += 1
        for s in (0.5, 1.0, 2.0):
            b = 1.0 if s <= 1 else n ** (s - 1)
            rhs = b * sum(fourier.norm_Fs1(fs[j], s, w) * math.prod(n0[:j] + n0[j + 1:]) for j in range(n))
            if fourier.norm_Fs1(prod, s, w) > rhs * (1 + 1e-12) + 1e-300:
                bad["product_Fs1"] += 1
        s1, s2 = sorted(rng.uniform(0.0, 3.0, size=2))
        s1 = max(s1, 1e-3)
        if fourier.norm_Fs1(fs[0], s1, w) > fourier.norm_Fs1(fs[0], max(s1, s2), w) * (1 + 1e-12):
            bad["embedding"] += 1
    return bad


def _suite_norms(seed, kmax):
    rng = np.random.default_rng(seed)
    rows = []
    for nu in (0.0, 0.1):
        bad = norm_algebra_violations(rng, 500, nu)
        for name, cnt in bad.items():
            rows.append({"check": name, "nu": nu, "violations": cnt, "pass": cnt == 0})
    return rows


def _suite_geometry(seed, kmax):
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(20):
        N = int(rng.integers(2, 10))
        half = np.zeros(N + 1, complex)
        half[2:] = rng.standard_normal(N - 1) + 1j * rng.standard_normal(N - 1)
        phi = TrigSeries.from_nonneg(half)
        phi = (0.05 * rng.uniform(0.1, 1.0) / fourier.norm_F01(phi)) * phi
        R = float(rng.uniform(0.5, 2.0))
        st = InterfaceState(phi, R=R)
        L = geometry.length(st, 256)
        lo, hi = geometry.length_bounds(fourier.norm_F01(phi), R)
        curve = geometry.reconstruct_curve(st, m=256, L=L)
        V = geometry.volume(curve, tol=math.inf)
        clos = geometry.closure_residual(st, 256)
        # the trapezoid volume is exact only for closed curves; compare against the open-curve residual
        rows.append({"check": "length_bounds", "R": R, "L": L, "lo": lo, "hi": hi, "pass": lo <= L <= hi})
        rows.append({"check": "isoperimetric", "deficit": L * L - 4 * math.pi * V, "pass": L * L >= 4 * math.pi * V})
        rows.append({"check": "closure_small", "closure": clos, "pass": clos <= 1e-2})
    for amp in (0.0, 0.01):
        st = InterfaceState(TrigSeries.from_modes(8, {2: amp} if amp else {}))
        L = geometry.length(st)
        V = geometry.volume(geometry.reconstruct_curve(st, m=128, L=L))
        err = abs(V - math.pi) / math.pi
        rows.append({"check": "volume_constraint", "amp": amp, "rel_err": err, "pass": err <= 1e-10})
    return rows


SUITES = {"multiplier": _suite_multiplier, "kernels": _suite_kernels,
          "norms": _suite_norms, "geometry": _suite_geometry}


def cmd_verify(what, seed=0, kmax=6, out="."):
    rows = SUITES[what](seed, kmax)
    ok = all(r["pass"] for r in rows)
    os.makedirs(out, exist_ok=True)
    with open(os.path.join(out, f"verify_{what}.json"), "w", encoding="utf-8") as fh:
        json.dump({"suite": what, "seed": seed, "kmax": kmax, "pass": ok, "rows": rows}, fh, indent=1, default=_jsonable)
    print(f"{what}: {sum(r['pass'] for r in rows)}/{len(rows)} rows pass")
    return EXIT_OK if ok else EXIT_VERIFY


def _jsonable(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, np.bool_):
        return bool(x)
    raise TypeError(type(x))


def build_parser():
    p = argparse.ArgumentParser(prog="stokesbubble", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)
    s = sub.add_parser("simulate", help="run a decay simulation from a JSON manifest")
    s.add_argument("--config", required=True, help="manifest JSON path")
    s.add_argument("--out", default=None, help="output directory (default: manifest output_dir)")
    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("what", choices=sorted(SUITES))
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--kmax", type=int, default=6)
    v.add_argument("--out", default=".", help="directory for the report JSON")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    if args.cmd == "simulate":
        try:
            manifest = load_manifest(args.config)
        except ManifestError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        t0 = time.perf_counter()
        code = cmd_simulate(manifest, args.out)
        print(f"simulate finished in {time.perf_counter() - t0:.1f}s (exit {code})")
        return code
    if args.kmax < 2:
        print("config error: --kmax must be >= 2", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return cmd_verify(args.what, args.seed, args.kmax, args.out)
    except (ArithmeticError, spectral.OracleFailure) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
