"""Drop-tower scenario: configuration, the three experiments and validation."""

from __future__ import annotations

import dataclasses
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import stats

from . import oracles
from .bogoliubov import PerturbativeBogoliubov, perturbative_bogoliubov, symplectic_defect
from .cavity import ModeBasis, coupling_matrices, kg_inner_product, mode_derivative, mode_function
from .clock import (ClockComparison, closed_form_classical_fraction, compare_clocks,
                    tidal_ratio_diagnostic)
from .errors import ConfigError
from .geodesics import CavityTrajectory, fall_coordinate_time, mirror_pair
from .spacetime import EARTH_RADIUS, SchwarzschildGeometry

EARTH_RS = SchwarzschildGeometry.earth().r_s
CSV_COLUMNS = ("t", "r1", "r2", "x1", "x2", "v1", "v2", "omega1", "theta_A", "theta_B_cl",
               "theta_B_qu", "F_cl", "F_qu", "F_tau", "method", "F_qu_error")
METHODS = ("direct", "filon", "levin", "asymptotic")
VALIDATION_SWING = 1.0e3


@dataclass(frozen=True)
class ScenarioConfig:
    r_surface: float = EARTH_RADIUS
    drop_height: float = 110.0
    L0: float = 1.0
    r_s: float = EARTH_RS
    n_max: int = 20
    p_max: int = 40
    samples: int = 20_000
    toy_scale: float | None = None
    duration: float | None = None
    nodes: int = 64
    method: str = "levin"
    coupling_mode: str = "instantaneous"
    workers: int = 1
    output: str | None = None
    lengths: tuple = (0.01, 0.1, 1.0)
    rs_values: tuple = (10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0, 100.0)
    window: tuple | None = None

    def __post_init__(self):
        def bad(msg):
            raise ConfigError(msg)
        for name in ("r_surface", "drop_height", "L0"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                bad(f"{name} must be a positive length")
        if not (self.r_s >= 0 and math.isfinite(self.r_s)):
            bad("r_s must be non-negative")
        if self.r_surface <= self.r_s:
            bad("r_surface must exceed r_s")
        if self.drop_height >= self.r_surface:
            bad("drop_height must be below r_surface")
        if self.n_max < 1 or self.p_max < self.n_max:
            bad("need 1 <= n_max <= p_max")
        if self.samples < 2 or self.nodes < 8:
            bad("samples >= 2 and nodes >= 8 required")
        if self.toy_scale is not None and not self.toy_scale > 0:
            bad("toy_scale must be positive")
        if self.duration is not None and not self.duration > 0:
            bad("duration must be positive")
        if self.method not in METHODS:
            bad(f"method must be one of {METHODS}")
        if self.coupling_mode not in ("instantaneous", "frozen"):
            bad("coupling_mode must be instantaneous or frozen")
        if self.workers < 1:
            bad("workers must be >= 1")
        if any(not (1e-7 <= L <= 10.0) for L in self.lengths):
            bad("lengths must lie in [1e-7, 10] m")
        if any(not (0.0 <= r < self.r_surface) for r in self.rs_values):
            bad("rs_values must lie below r_surface")

    # derived ---------------------------------------------------------------
    @property
    def r_A(self) -> float:
        return self.r_surface + self.drop_height

    @property
    def cavity_length(self) -> float:
        """Physical L0 after the toy rescaling."""
        return self.L0 * (self.toy_scale or 1.0)

    @property
    def geometry(self) -> SchwarzschildGeometry:
        return SchwarzschildGeometry(self.r_s)

    @property
    def engine_method(self) -> str:
        return "levin" if self.method == "filon" else self.method

    def fall_time(self) -> float:
        if self.duration is not None:
            return self.duration
        if self.r_s == 0.0:
            # no fall in flat space; compare over the Earth-scenario window
            return fall_coordinate_time(SchwarzschildGeometry(EARTH_RS), self.r_A, self.r_surface)
        return fall_coordinate_time(self.geometry, self.r_A, self.r_surface)

    def replace(self, **kw) -> "ScenarioConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return dataclasses.replace(self, **kw)

    def as_dict(self) -> dict:
        d = dataclasses.asdict(self)
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in d.items()}


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(ScenarioConfig)}
_ALIASES = {"rs": "r_s", "height": "drop_height", "length": "L0", "nmax": "n_max",
            "pmax": "p_max", "toy-scale": "toy_scale", "l0": "L0"}


def _parse_value(key: str, raw: str):
    typ = _FIELD_TYPES[key]
    raw = raw.strip()
    try:
        if key in ("lengths", "rs_values", "window"):
            vals = tuple(float(x) for x in raw.replace(",", " ").split())
            return vals
        if raw.lower() in ("none", ""):
            return None
        if "int" in typ:
            return int(raw)
        if "float" in typ:
            return float(raw)
        return raw
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r}") from exc


def parse_config_text(text: str) -> dict:
    """key = value lines; '#' starts a comment."""
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected key = value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = _ALIASES.get(key, key)
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {n}: unknown key {key!r}")
        out[key] = _parse_value(key, val)
    return out


def load_config(path=None, **overrides) -> ScenarioConfig:
    values = {}
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        values.update(parse_config_text(text))
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return ScenarioConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


# pipeline ------------------------------------------------------------------
def build_trajectory(config: ScenarioConfig) -> CavityTrajectory:
    T = config.fall_time()
    return mirror_pair(config.geometry, config.r_A, config.cavity_length, T,
                       samples=min(config.samples, 20_000))


def _coefficients(config, traj, couplings=None) -> PerturbativeBogoliubov:
    return perturbative_bogoliubov(traj, config.n_max, config.p_max,
                                   method=config.engine_method, nodes=config.nodes,
                                   couplings=couplings, coupling_mode=config.coupling_mode)


def _time_grid(config, T):
    if config.window is not None:
        a, b = config.window
        if not 0.0 <= a < b <= T:
            raise ConfigError("window must satisfy 0 <= start < end <= T")
        return np.linspace(a, b, config.samples)
    return np.linspace(0.0, T, config.samples)


@dataclass
class DropResult:
    config: ScenarioConfig
    trajectory: CavityTrajectory
    comparison: ClockComparison
    coefficients: PerturbativeBogoliubov | None
    closed_form_F_cl: float
    diagnostics: dict = field(default_factory=dict)

    def table(self) -> dict:
        tr, cc = self.trajectory, self.comparison
        r1, r2, x1, x2 = tr.positions(cc.t)
        s = tr.sample(cc.t)
        omega1 = tr.omega(1, cc.t)
        absA = np.abs(cc.theta_A)
        err = np.divide(cc.theta_B_qu_error, absA, out=np.zeros_like(absA), where=absA > 0)
        return {"t": cc.t, "r1": r1, "r2": r2, "x1": x1, "x2": x2, "v1": s.v1, "v2": s.v2,
                "omega1": omega1, "theta_A": cc.theta_A, "theta_B_cl": cc.theta_B_cl,
                "theta_B_qu": cc.theta_B_qu, "F_cl": cc.F_cl, "F_qu": cc.F_qu,
                "F_tau": cc.F_tau, "method": cc.method, "F_qu_error": err}


def _direct_comparison(config, traj, t):
    """Quantum part from the nested brute-force ODE (toy regime only)."""
    cc = compare_clocks(traj, None, t, nodes=config.nodes)
    res = oracles.nested_clock_mode(traj, config.p_max, coupling_mode=config.coupling_mode,
                                    t_eval=t)
    z1 = res["alpha1"] - res["beta1"]
    z2 = res["alpha2"] - res["beta2"]
    qu = -(z1.imag + z2.imag) + z1.real * z1.imag
    cc.theta_B_qu = qu
    pos = t > 0
    cc.F_qu = np.zeros_like(t)
    cc.F_qu[pos] = qu[pos] / cc.theta_A[pos]
    cc.theta_B_qu_error = float(1e-9 * np.max(np.abs(qu)))
    cc.method = "direct"
    return cc


def run_drop(config: ScenarioConfig, keep_series: bool = True) -> DropResult:
    traj = build_trajectory(config)
    T = traj.duration
    t = _time_grid(config, T) if keep_series else np.array([0.0, T])
    if config.method == "direct":
        cc = _direct_comparison(config, traj, t)
        co = None
    else:
        co = _coefficients(config, traj)
        cc = compare_clocks(traj, co, t, nodes=config.nodes)
        cc.method = config.method
    closed = closed_form_classical_fraction(config.geometry, config.r_A, config.cavity_length, T)
    tide = tidal_ratio_diagnostic(config.geometry, config.r_A, config.cavity_length, T,
                                  float(cc.F_cl[-1]), float(cc.F_tau[-1]))
    diag = {"T": T, "tidal_ratio": dataclasses.asdict(tide)}
    if co is not None:
        diag["error_estimates"] = {k: float(v) for k, v in co.error_estimates.items()}
    return DropResult(config, traj, cc, co, closed, diag)


# output ----------------------------------------------------------------------
def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    return repr(float(v))


def _header(config: ScenarioConfig, extra: dict | None = None) -> str:
    lines = ["# lightclock output"]
    for k, v in config.as_dict().items():
        if k in ("output", "workers"):
            continue
        lines.append(f"# {k} = {v}")
    for k, v in (extra or {}).items():
        lines.append(f"# {k} = {v}")
    return "\n".join(lines) + "\n"


def table_to_csv(table: dict, header: str = "") -> str:
    cols = list(table)
    n = max(len(np.atleast_1d(v)) for v in table.values() if not isinstance(v, str))
    buf = io.StringIO()
    buf.write(header)
    buf.write(",".join(cols) + "\n")
    arrays = {k: (v if isinstance(v, str) else np.atleast_1d(v)) for k, v in table.items()}
    for i in range(n):
        buf.write(",".join(_fmt(arrays[k] if isinstance(arrays[k], str) else arrays[k][i])
                           for k in cols) + "\n")
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


def write_outputs(path, table: dict, config: ScenarioConfig, extra: dict | None = None,
                  json_mirror: bool = False):
    """CSV with a '#' config header; optional JSON file alongside (same stem)."""
    path = Path(path)
    path.write_text(table_to_csv(table, _header(config, extra)))
    if json_mirror:
        doc = {"config": config.as_dict(), "meta": extra or {}, "columns": list(table),
               "data": {k: (v if isinstance(v, str) else np.atleast_1d(v)) for k, v in table.items()}}
        path.with_suffix(".json").write_text(json.dumps(_jsonable(doc), indent=1, sort_keys=True))


def _drop_meta(res: DropResult) -> dict:
    d = res.diagnostics
    extra = {"T": repr(d["T"]), "F_cl_closed_form": repr(res.closed_form_F_cl)}
    for k, v in d.get("error_estimates", {}).items():
        extra[f"error_{k}"] = repr(v)
    for k, v in d["tidal_ratio"].items():
        extra[f"tidal_{k}"] = repr(float(v))
    return extra


# sweeps --------------------------------------------------------------------------
def _map(fn, items, workers):
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def _length_point(args):
    config, L = args
    cfg = config.replace(L0=L)
    res = run_drop(cfg)
    cc = res.comparison
    sec = compare_clocks(res.trajectory, res.coefficients, cc.t, nodes=cfg.nodes, secular=True)
    osc = cc.F_qu - sec.F_qu
    err_abs = cc.theta_B_qu_error / abs(cc.theta_A[-1])
    # dominant angular frequency of the residual oscillation: 2 omega_1 + beat
    return {"L0": L, "t": cc.t, "F_qu": cc.F_qu, "F_qu_smoothed": sec.F_qu,
            "oscillation_amplitude": float(np.max(np.abs(osc))),
            "oscillation_frequency": float(2 * res.trajectory.omega(1, 0.0)),
            "F_qu_end": float(cc.F_qu[-1]), "error_bound": float(err_abs)}


@dataclass
class LengthSweep:
    lengths: list
    t: np.ndarray
    curves: list
    max_pairwise_deviation: float
    error_bound: float
    amplitudes: list
    frequencies: list

    @property
    def agree(self) -> bool:
        return self.max_pairwise_deviation <= self.error_bound

    def table(self) -> dict:
        tab = {"t": self.t}
        for c in self.curves:
            tab[f"F_qu[L0={c['L0']!r}]"] = c["F_qu"]
            tab[f"F_qu_smoothed[L0={c['L0']!r}]"] = c["F_qu_smoothed"]
        return tab

    def meta(self) -> dict:
        return {"max_pairwise_deviation": repr(self.max_pairwise_deviation),
                "error_bound": repr(self.error_bound), "agree": self.agree,
                "amplitudes": [repr(a) for a in self.amplitudes],
                "frequencies": [repr(f) for f in self.frequencies]}


def sweep_length(config: ScenarioConfig, lengths=None) -> LengthSweep:
    lengths = list(config.lengths if lengths is None else lengths)
    cfg = config.replace(lengths=tuple(lengths))
    pts = _map(_length_point, [(cfg, L) for L in lengths], cfg.workers)
    dev, bound = 0.0, 0.0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            dev = max(dev, float(np.max(np.abs(pts[i]["F_qu_smoothed"] - pts[j]["F_qu_smoothed"]))))
            bound = max(bound, pts[i]["error_bound"] + pts[j]["error_bound"])
    return LengthSweep(lengths, pts[0]["t"], pts, dev, bound,
                       [p["oscillation_amplitude"] for p in pts],
                       [p["oscillation_frequency"] for p in pts])


def _rs_point(args):
    config, rs = args
    res = run_drop(config.replace(r_s=rs), keep_series=False)
    e = res.comparison.end()
    err = res.comparison.theta_B_qu_error / abs(e["theta_A"]) if e["theta_A"] else 0.0
    return {"r_s": rs, "T": e["t"], "F_cl": e["F_cl"], "F_qu": e["F_qu"], "F_tau": e["F_tau"],
            "F_qu_error": err}


@dataclass
class Fit:
    slope: float
    intercept: float
    r_squared: float


@dataclass
class SchwarzschildSweep:
    rows: list
    fit_F_cl: Fit
    fit_F_qu: Fit

    def column(self, k):
        return np.array([r[k] for r in self.rows])

    @property
    def F_cl_magnitude_decreasing(self) -> bool:
        return bool(np.all(np.diff(np.abs(self.column("F_cl"))) < 0))

    @property
    def F_qu_magnitude_increasing(self) -> bool:
        return bool(np.all(np.diff(np.abs(self.column("F_qu"))) > 0))

    def table(self) -> dict:
        return {k: self.column(k) for k in ("r_s", "T", "F_cl", "F_qu", "F_tau", "F_qu_error")}

    def meta(self) -> dict:
        out = {}
        for name, f in (("F_cl", self.fit_F_cl), ("F_qu", self.fit_F_qu)):
            out[f"{name}_slope"] = repr(f.slope)
            out[f"{name}_intercept"] = repr(f.intercept)
            out[f"{name}_r_squared"] = repr(f.r_squared)
        out["F_cl_magnitude_decreasing"] = self.F_cl_magnitude_decreasing
        out["F_qu_magnitude_increasing"] = self.F_qu_magnitude_increasing
        return out


def _fit(x, y) -> Fit:
    if len(x) < 3:
        return Fit(float("nan"), float("nan"), float("nan"))
    lr = stats.linregress(x, y)
    return Fit(float(lr.slope), float(lr.intercept), float(lr.rvalue ** 2))


def sweep_schwarzschild(config: ScenarioConfig, rs_values=None) -> SchwarzschildSweep:
    rs_values = list(config.rs_values if rs_values is None else rs_values)
    if any(not 0 < r < config.r_surface for r in rs_values):
        raise ConfigError("r_s values must lie in (0, r_surface)")
    rows = _map(_rs_point, [(config, r) for r in rs_values], config.workers)
    x = np.array(rs_values)
    return SchwarzschildSweep(rows, _fit(x, np.array([r["F_cl"] for r in rows])),
                              _fit(x, np.array([r["F_qu"] for r in rows])))


# validation --------------------------------------------------------------------
@dataclass
class Check:
    name: str
    passed: bool
    value: float
    tolerance: float

    def __post_init__(self):
        self.passed = bool(self.passed)
        self.value = float(self.value)


@dataclass
class ValidationReport:
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {"passed": self.passed, "checks": [dataclasses.asdict(c) for c in self.checks]}


def toy_config(config: ScenarioConfig, swing: float = VALIDATION_SWING) -> ScenarioConfig:
    """Rescale so that omega_1(0) T is about ``swing`` unless toy_scale is already set."""
    if config.toy_scale is not None:
        return config
    T = config.fall_time()
    L_needed = math.pi * 299792458.0 * T / swing
    return config.replace(toy_scale=max(L_needed / config.L0, 1.0))


def _rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    scale = max(float(np.max(np.abs(b))), 1e-300)
    return float(np.max(np.abs(a - b)) / scale)


def validate(config: ScenarioConfig, fault: str | None = None, oracle_pmax: int = 8) -> ValidationReport:
    """Toy-regime oracle suite.  ``fault='coupling'`` corrupts the coupling matrix."""
    cfg = toy_config(config)
    checks = []
    traj = build_trajectory(cfg)
    N = cfg.n_max
    basis = ModeBasis(0.0, traj.length0, cfg.p_max)
    cm = coupling_matrices(basis)
    if fault == "coupling":
        A = cm.A.copy()
        A[1, 0, 1] += 0.05 / traj.length0
        cm = dataclasses.replace(cm, A=A)
    elif fault is not None:
        raise ConfigError(f"unknown fault {fault!r}")

    # coupling matrices vs inner-product quadrature
    small = coupling_matrices(ModeBasis(0.0, traj.length0, 4))
    Amax = max(np.max(np.abs(small.A)), 1e-300)
    dev = 0.0
    for j in (1, 2):
        for m in range(1, 5):
            dm = mode_derivative(basis, m, j)
            for n in range(1, 5):
                dev = max(dev, abs(kg_inner_product(dm, mode_function(basis, n), basis)
                                   - cm.A[j - 1, m - 1, n - 1]),
                          abs(kg_inner_product(dm, mode_function(basis, n, conjugate=True), basis)
                              + cm.B[j - 1, m - 1, n - 1]))
    checks.append(Check("coupling_vs_inner_product", dev / Amax <= 1e-9, dev / Amax, 1e-9))

    orth = 0.0
    for m in range(1, 5):
        for n in range(1, 5):
            val = kg_inner_product(mode_function(basis, m), mode_function(basis, n), basis)
            orth = max(orth, abs(val - (m == n)))
    checks.append(Check("mode_orthonormality", orth <= 1e-12, orth, 1e-12))

    co = perturbative_bogoliubov(traj, N, cfg.p_max, method=cfg.engine_method,
                                 nodes=cfg.nodes, couplings=cm, coupling_mode=cfg.coupling_mode)
    sd = symplectic_defect(co)
    checks.append(Check("symplectic_first_order", sd.first_order <= 1e-8, sd.first_order, 1e-8))
    checks.append(Check("symplectic_second_order", sd.second_order <= 1e-6, sd.second_order, 1e-6))

    if cfg.r_s == 0.0:
        cc = compare_clocks(traj, co, np.linspace(0, traj.duration, 101), nodes=cfg.nodes)
        flat = max(np.max(np.abs(cc.F_cl)), np.max(np.abs(cc.F_qu)), np.max(np.abs(cc.F_tau)),
                   np.max(np.abs(co.alpha1)), np.max(np.abs(co.beta1)),
                   np.max(np.abs(co.alpha2)), np.max(np.abs(co.beta2)))
        checks.append(Check("flat_spacetime_identity", flat <= 1e-14, float(flat), 1e-14))
        return ValidationReport(checks)

    # first order vs adaptive quadrature
    worst = 0.0
    for (m, n) in ((1, 2), (2, 1), (1, 3), (2, 3)):
        for kind, mat in (("alpha", co.alpha1), ("beta", co.beta1)):
            ref = oracles.direct_first_order(traj, m, n, kind, couplings=cm,
                                            coupling_mode=cfg.coupling_mode)
            worst = max(worst, abs(mat[m - 1, n - 1] - ref) / max(abs(ref), 1e-300))
    checks.append(Check("first_order_vs_quadrature", worst <= 1e-8, worst, 1e-8))

    # second-order (1,1) vs nested brute force, same truncation
    Pm = min(oracle_pmax, cfg.p_max)
    co_s = perturbative_bogoliubov(traj, min(N, Pm), Pm, method=cfg.engine_method,
                                   nodes=cfg.nodes, couplings=cm, coupling_mode=cfg.coupling_mode,
                                   keep_series=False)
    ref = oracles.nested_clock_mode(traj, Pm, couplings=cm, coupling_mode=cfg.coupling_mode)
    e2 = max(abs(co_s.alpha2[0, 0] - ref["alpha2"][-1]) / abs(ref["alpha2"][-1]),
             abs(co_s.beta2[0, 0] - ref["beta2"][-1]) / abs(ref["beta2"][-1]))
    checks.append(Check("second_order_vs_nested", e2 <= 1e-6, float(e2), 1e-6))

    # velocity scaling
    s1, s2 = 0.0, 0.0
    for eps in (0.5, 0.25):
        ce = perturbative_bogoliubov(traj.scaled(eps), N, cfg.p_max, method=cfg.engine_method,
                                     nodes=cfg.nodes, couplings=cm,
                                     coupling_mode=cfg.coupling_mode, keep_series=False)
        s1 = max(s1, _rel(ce.alpha1, eps * co.alpha1), _rel(ce.beta1, eps * co.beta1))
        s2 = max(s2, _rel(ce.alpha2, eps ** 2 * co.alpha2), _rel(ce.beta2, eps ** 2 * co.beta2))
    checks.append(Check("velocity_scaling_first_order", s1 <= 1e-8, s1, 1e-8))
    checks.append(Check("velocity_scaling_second_order", s2 <= 1e-6, s2, 1e-6))
    return ValidationReport(checks)
