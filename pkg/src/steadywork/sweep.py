"""Parameter grids, figure presets, CSV/JSON output and analytic-vs-Redfield checks."""

from __future__ import annotations

import configparser
import csv
import io
import itertools
import json
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .analytic import OrderingMode, analytic_steady_state, is_equilibrium
from .core import POSITIVITY_TOL, DensityMatrix, SystemParams, diagonalize_coupled_qubits
from .ergotropy import ergotropy, internal_energy
from .redfield import build_generator, residual, steady_state_nullspace
from .reservoir import ReservoirSpec, Statistics

AXIS_NAMES = ("T", "mu", "dT", "dmu", "Delta", "lambda", "omega", "J")
METHODS = ("analytic", "redfield", "both")
SCENARIOS = ("auto", "equilibrium", "nonequilibrium", "asymmetric")
ANCHORS = ("base", "mean")

CSV_COLUMNS = (
    "statistics", "ordering", "method", "omega1", "omega2", "lambda", "J",
    "T1", "T2", "mu1", "mu2", "p1", "p2", "p3", "p4", "re_rho23", "im_rho23",
    "purity", "internal_energy", "ergotropy", "trace_error", "residual",
    "discrepancy", "min_eigenvalue", "status",
)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Axis:
    name: str
    values: tuple[float, ...]

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ConfigError(f"unknown sweep axis {self.name!r}; choose from {', '.join(AXIS_NAMES)}")
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ConfigError(f"axis {self.name!r} has no values")
        if not all(math.isfinite(v) for v in vals):
            raise ConfigError(f"axis {self.name!r} has non-finite values")
        object.__setattr__(self, "values", vals)

    @classmethod
    def linspace(cls, name: str, lo: float, hi: float, steps: int) -> "Axis":
        steps = int(steps)
        if steps < 1:
            raise ConfigError(f"axis {name!r} needs at least one step, got {steps}")
        if steps == 1:
            return cls(name, (float(lo),))
        return cls(name, tuple(float(x) for x in np.linspace(lo, hi, steps)))


@dataclass(frozen=True)
class SweepConfig:
    """A grid over up to two axes around fixed base values.

    The reservoirs are (T1, T2) = (T, T + dT) with ``anchor='base'`` or
    (T - dT/2, T + dT/2) with ``anchor='mean'``; likewise for mu. The qubits
    are omega1 = omega + Delta/2, omega2 = omega - Delta/2.
    """

    statistics: Statistics
    omega: float = 10.0
    Delta: float = 0.0
    lam: float = 2.0
    J: float = 1.0
    T: float = 1.0
    dT: float = 0.0
    mu: float = 0.0
    dmu: float = 0.0
    anchor: str = "base"
    axes: tuple[Axis, ...] = ()
    method: str = "analytic"
    orderings: tuple[OrderingMode, ...] = (OrderingMode.PHYSICAL,)
    secular: bool = False
    scenario: str = "auto"
    tolerance: float = 1e-8
    name: str = "custom"

    def __post_init__(self):
        try:
            object.__setattr__(self, "statistics", Statistics(self.statistics))
            object.__setattr__(self, "orderings", tuple(OrderingMode(o) for o in self.orderings))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"scenario must be one of {SCENARIOS}, got {self.scenario!r}")
        if self.anchor not in ANCHORS:
            raise ConfigError(f"anchor must be one of {ANCHORS}, got {self.anchor!r}")
        if not self.orderings:
            raise ConfigError("at least one ordering mode is required")
        if len(self.axes) > 2:
            raise ConfigError(f"at most two sweep axes are supported, got {len(self.axes)}")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ConfigError(f"duplicate sweep axes: {names}")
        if not self.tolerance > 0:
            raise ConfigError(f"tolerance must be positive, got {self.tolerance}")
        if self.statistics is Statistics.BOSON:
            if self.mu != 0 or self.dmu != 0 or {"mu", "dmu"} & set(names):
                raise ConfigError("boson sweeps have zero chemical potential; drop mu/dmu")

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(a.values) for a in self.axes)

    @property
    def n_points(self) -> int:
        return math.prod(self.shape)

    @property
    def effective_orderings(self) -> tuple[OrderingMode | None, ...]:
        return (None,) if self.method == "redfield" else self.orderings

    def resolved_scenario(self) -> str:
        if self.scenario != "auto":
            return self.scenario
        names = {a.name for a in self.axes}
        if "Delta" in names or self.Delta != 0:
            return "asymmetric"
        if {"dT", "dmu"} & names or self.dT != 0 or self.dmu != 0:
            return "nonequilibrium"
        return "equilibrium"

    def grid(self) -> list[dict[str, float]]:
        """Grid points in row-major order (first axis outermost)."""
        base = {
            "T": self.T, "mu": self.mu, "dT": self.dT, "dmu": self.dmu,
            "Delta": self.Delta, "lambda": self.lam, "omega": self.omega, "J": self.J,
        }
        points = []
        for combo in itertools.product(*(a.values for a in self.axes)):
            p = dict(base)
            p.update({a.name: v for a, v in zip(self.axes, combo)})
            points.append(p)
        return points

    def point_inputs(self, p: dict[str, float]):
        """(system, reservoir1, reservoir2) for one grid point; ValueError if invalid."""
        q = _point_params(self, p)
        system = diagonalize_coupled_qubits(SystemParams(q["omega1"], q["omega2"], q["lam"]))
        r1 = ReservoirSpec(self.statistics, q["T1"], q["mu1"], q["J"])
        r2 = ReservoirSpec(self.statistics, q["T2"], q["mu2"], q["J"])
        return system, r1, r2


def validate_config(config: SweepConfig) -> None:
    """Raise ConfigError if no grid point is physically valid."""
    errors = []
    for p in config.grid():
        try:
            config.point_inputs(p)
            return
        except ValueError as exc:
            errors.append(str(exc))
    raise ConfigError(f"no valid grid point in config {config.name!r}: {errors[0]}")


@dataclass
class SweepRow:
    statistics: str
    ordering: str
    method: str
    omega1: float
    omega2: float
    lam: float
    J: float
    T1: float
    T2: float
    mu1: float
    mu2: float
    p1: float = math.nan
    p2: float = math.nan
    p3: float = math.nan
    p4: float = math.nan
    re_rho23: float = math.nan
    im_rho23: float = math.nan
    purity: float = math.nan
    internal_energy: float = math.nan
    ergotropy: float = math.nan
    trace_error: float = math.nan
    residual: float | None = None
    discrepancy: float | None = None
    min_eigenvalue: float = math.nan
    status: str = "ok"

    @property
    def ok(self) -> bool:
        return not self.status.startswith("error")

    @property
    def abs_rho23(self) -> float:
        return math.hypot(self.re_rho23, self.im_rho23)

    @property
    def populations(self) -> tuple[float, float, float, float]:
        return (self.p1, self.p2, self.p3, self.p4)

    def as_record(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return {k: d[k] for k in CSV_COLUMNS}


@dataclass
class PointResult:
    row: SweepRow
    analytic: DensityMatrix | None = None
    numeric: DensityMatrix | None = None
    nonsecular_vs_secular: float | None = None
    system: object = field(default=None, repr=False)


def _point_params(config: SweepConfig, p: dict[str, float]) -> dict:
    if config.anchor == "base":
        T1, T2, mu1, mu2 = p["T"], p["T"] + p["dT"], p["mu"], p["mu"] + p["dmu"]
    else:
        T1, T2 = p["T"] - 0.5 * p["dT"], p["T"] + 0.5 * p["dT"]
        mu1, mu2 = p["mu"] - 0.5 * p["dmu"], p["mu"] + 0.5 * p["dmu"]
    return dict(
        omega1=p["omega"] + 0.5 * p["Delta"], omega2=p["omega"] - 0.5 * p["Delta"],
        lam=p["lambda"], J=p["J"], T1=T1, T2=T2, mu1=mu1, mu2=mu2,
    )


def _fill_state(row: SweepRow, rho: DensityMatrix, system) -> None:
    row.p1, row.p2, row.p3, row.p4 = (float(x) for x in rho.populations)
    row.re_rho23 = float(rho.entries[1, 2].real)
    row.im_rho23 = float(rho.entries[1, 2].imag)
    row.purity = rho.purity
    row.internal_energy = internal_energy(rho, system)
    row.ergotropy = ergotropy(rho, system)
    row.trace_error = rho.trace_error
    row.min_eigenvalue = rho.min_eigenvalue
    if row.min_eigenvalue < -POSITIVITY_TOL:
        row.status = "nonpositive"


def evaluate_point(
    config: SweepConfig,
    p: dict[str, float],
    ordering: OrderingMode | None,
    method: str | None = None,
    with_secular_shift: bool = False,
) -> PointResult:
    method = method or config.method
    row = SweepRow(
        statistics=config.statistics.value,
        ordering=ordering.value if ordering is not None else "none",
        method=method,
        **_point_params(config, p),
    )
    result = PointResult(row)
    try:
        system, r1, r2 = config.point_inputs(p)
        result.system = system
        if method in ("analytic", "both"):
            result.analytic = analytic_steady_state(
                system, r1, r2, ordering or OrderingMode.PHYSICAL, config.resolved_scenario()
            )
        if method in ("redfield", "both"):
            gen = build_generator(system, r1, r2, secular=config.secular)
            result.numeric = steady_state_nullspace(gen)
            row.residual = residual(gen, result.numeric)
            if with_secular_shift:
                other = steady_state_nullspace(build_generator(system, r1, r2, not config.secular))
                result.nonsecular_vs_secular = float(np.max(np.abs(other.entries - result.numeric.entries)))
        shown = result.analytic if result.analytic is not None else result.numeric
        _fill_state(row, shown, system)
        if result.analytic is not None and result.numeric is not None:
            row.discrepancy = float(np.max(np.abs(result.analytic.entries - result.numeric.entries)))
    except (ValueError, RuntimeError) as exc:
        row.status = f"error: {exc}"
        row.residual = None
        row.discrepancy = None
    return result


def run_sweep(config: SweepConfig) -> list[SweepRow]:
    """One row per (ordering, grid point); grid points in row-major axis order."""
    validate_config(config)
    rows = []
    for ordering in config.effective_orderings:
        for p in config.grid():
            rows.append(evaluate_point(config, p, ordering).row)
    return rows


# ---------------------------------------------------------------- output


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    x = float(v)
    if math.isnan(x):
        return "nan"
    if x == 0.0:
        x = 0.0  # drop the sign of -0.0
    return format(x, ".12g")


def rows_to_csv(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        rec = row.as_record()
        writer.writerow([format_value(rec[k]) for k in CSV_COLUMNS])
    return buf.getvalue()


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def rows_to_json(rows: Iterable[SweepRow]) -> str:
    recs = [{k: _json_value(v) for k, v in row.as_record().items()} for row in rows]
    return json.dumps(recs, indent=1, sort_keys=False) + "\n"


def write_rows(rows: Sequence[SweepRow], path, fmt: str = "csv") -> None:
    text = rows_to_csv(rows) if fmt == "csv" else rows_to_json(rows)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


# ---------------------------------------------------------------- presets

PRESET_NOTES = {
    "fig3": "equilibrium bosons, omega1=omega2=10, J=1; T in [0.5, 20] (40 steps) for lambda in (2, 4, 6). "
            "T range and lambda family are implementation choices.",
    "fig4": "equilibrium fermions, omega1=omega2=10, J=1, T=1.5; mu in [0, 20] (81 steps) for lambda in (2, 4, 6). "
            "mu range and lambda family are implementation choices.",
    "fig5": "non-equilibrium bosons, omega=10, lambda=2, J=1; dT = T2 - T1 in [0, 8] (81 steps) for base T1 in (1, 2, 3). "
            "dT range and T1 family are implementation choices.",
    "fig6": "non-equilibrium fermions, omega=10, J=1, T1=T2=1; dmu = mu2 - mu1 in [0, 16] (161 steps) for base mu1 in "
            "(2, 6, 12, 16). lambda=2 (not given in the caption), the dmu range and mu1 family are implementation choices.",
    "fig7a": "detuned qubits with bosons, mean omega=10, lambda=6, J=1, mean T=3; dT in [-4, 4] (17 steps) x "
             "Delta in [-6, 6] (25 steps). Ranges are implementation choices.",
    "fig7b": "detuned qubits with fermions, mean omega=10, lambda=6, J=1, T=1.5, mean mu=4; dmu in [-6, 6] (25 steps) x "
             "Delta in [-6, 6] (25 steps). Ranges are implementation choices.",
}

FIGURES = tuple(PRESET_NOTES)

_BOTH_MODES = (OrderingMode.PHYSICAL, OrderingMode.PAPER_LITERAL)
_LITERAL = (OrderingMode.PAPER_LITERAL,)


def figure_preset(name: str) -> SweepConfig:
    if name == "fig3":
        return SweepConfig(
            Statistics.BOSON, omega=10.0, J=1.0, name=name, orderings=_LITERAL,
            axes=(Axis("lambda", (2.0, 4.0, 6.0)), Axis.linspace("T", 0.5, 20.0, 40)),
        )
    if name == "fig4":
        return SweepConfig(
            Statistics.FERMION, omega=10.0, J=1.0, T=1.5, name=name, orderings=_LITERAL,
            axes=(Axis("lambda", (2.0, 4.0, 6.0)), Axis.linspace("mu", 0.0, 20.0, 81)),
        )
    if name == "fig5":
        return SweepConfig(
            Statistics.BOSON, omega=10.0, lam=2.0, J=1.0, name=name, orderings=_BOTH_MODES,
            axes=(Axis("T", (1.0, 2.0, 3.0)), Axis.linspace("dT", 0.0, 8.0, 81)),
        )
    if name == "fig6":
        return SweepConfig(
            Statistics.FERMION, omega=10.0, lam=2.0, J=1.0, T=1.0, name=name, orderings=_BOTH_MODES,
            axes=(Axis("mu", (2.0, 6.0, 12.0, 16.0)), Axis.linspace("dmu", 0.0, 16.0, 161)),
        )
    if name == "fig7a":
        return SweepConfig(
            Statistics.BOSON, omega=10.0, lam=6.0, J=1.0, T=3.0, anchor="mean", name=name,
            orderings=_BOTH_MODES,
            axes=(Axis.linspace("dT", -4.0, 4.0, 17), Axis.linspace("Delta", -6.0, 6.0, 25)),
        )
    if name == "fig7b":
        return SweepConfig(
            Statistics.FERMION, omega=10.0, lam=6.0, J=1.0, T=1.5, mu=4.0, anchor="mean", name=name,
            orderings=_BOTH_MODES,
            axes=(Axis.linspace("dmu", -6.0, 6.0, 25), Axis.linspace("Delta", -6.0, 6.0, 25)),
        )
    raise ConfigError(f"unknown figure preset {name!r}; choose from {', '.join(FIGURES)}")


# ---------------------------------------------------------------- config files

_SECTIONS = ("system", "reservoir1", "reservoir2", "sweep", "output")


def parse_axis(text: str) -> Axis:
    """``"dT 0 8 81"`` (name lo hi steps) or ``"T: 1, 2, 3"`` (explicit values)."""
    text = text.strip()
    if ":" in text:
        name, _, rest = text.partition(":")
        vals = [float(v) for v in rest.replace(",", " ").split()]
        return Axis(name.strip(), tuple(vals))
    parts = text.split()
    if len(parts) != 4:
        raise ConfigError(f"cannot parse axis {text!r}; use 'name lo hi steps' or 'name: v1, v2, ...'")
    name, lo, hi, steps = parts
    try:
        return Axis.linspace(name, float(lo), float(hi), int(steps))
    except ValueError as exc:
        raise ConfigError(f"cannot parse axis {text!r}: {exc}") from None


def parse_orderings(text: str) -> tuple[OrderingMode, ...]:
    text = text.strip()
    if text == "both":
        return _BOTH_MODES
    try:
        return tuple(OrderingMode(t.strip()) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def read_ini(text: str = "", overrides: dict[tuple[str, str], str] | None = None) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str  # keys are case-sensitive (Delta vs delta)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file: {exc}") from None
    unknown = set(parser.sections()) - set(_SECTIONS)
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    for sec in _SECTIONS:
        if not parser.has_section(sec):
            parser.add_section(sec)
    for (sec, key), value in (overrides or {}).items():
        if value is not None:
            parser.set(sec, key, str(value))
    return parser


def _float(parser, sec, key, default=None):
    if parser.has_option(sec, key):
        raw = parser.get(sec, key)
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"[{sec}] {key} = {raw!r} is not a number") from None
    return default


def config_from_ini(parser: configparser.ConfigParser) -> SweepConfig:
    known = {
        "system": {"statistics", "omega1", "omega2", "omega", "Delta", "lambda", "J"},
        "reservoir1": {"T", "mu", "J"},
        "reservoir2": {"T", "mu", "J"},
        "sweep": {"axis1", "axis2", "anchor", "scenario", "method", "ordering", "secular", "tolerance", "name"},
        "output": {"out", "format"},
    }
    for sec, keys in known.items():
        extra = set(parser.options(sec)) - keys
        if extra:
            raise ConfigError(f"unknown keys in [{sec}]: {sorted(extra)}")

    if not parser.has_option("system", "statistics"):
        raise ConfigError("[system] statistics (boson|fermion) is required")
    statistics = parser.get("system", "statistics").strip()

    w1 = _float(parser, "system", "omega1")
    w2 = _float(parser, "system", "omega2")
    if (w1 is None) != (w2 is None):
        raise ConfigError("give both omega1 and omega2, or omega and Delta")
    if w1 is not None:
        omega, Delta = 0.5 * (w1 + w2), w1 - w2
    else:
        omega = _float(parser, "system", "omega", 10.0)
        Delta = _float(parser, "system", "Delta", 0.0)

    J = _float(parser, "system", "J")
    J1 = _float(parser, "reservoir1", "J", J if J is not None else 1.0)
    J2 = _float(parser, "reservoir2", "J", J1)
    if J1 != J2:
        raise ConfigError(f"sweeps use a balanced spectral density; got J1={J1}, J2={J2}")

    anchor = parser.get("sweep", "anchor", fallback="base").strip()
    T1 = _float(parser, "reservoir1", "T", 1.0)
    T2 = _float(parser, "reservoir2", "T", T1)
    mu1 = _float(parser, "reservoir1", "mu", 0.0)
    mu2 = _float(parser, "reservoir2", "mu", mu1)
    if anchor == "mean":
        T, mu = 0.5 * (T1 + T2), 0.5 * (mu1 + mu2)
    else:
        T, mu = T1, mu1

    axes = tuple(
        parse_axis(parser.get("sweep", k)) for k in ("axis1", "axis2") if parser.has_option("sweep", k)
    )
    secular_raw = parser.get("sweep", "secular", fallback="false").strip().lower()
    if secular_raw not in ("true", "false", "1", "0", "yes", "no", "on", "off"):
        raise ConfigError(f"[sweep] secular = {secular_raw!r} is not a boolean")
    return SweepConfig(
        statistics=statistics,
        omega=omega,
        Delta=Delta,
        lam=_float(parser, "system", "lambda", 2.0),
        J=J1,
        T=T,
        dT=T2 - T1,
        mu=mu,
        dmu=mu2 - mu1,
        anchor=anchor,
        axes=axes,
        method=parser.get("sweep", "method", fallback="analytic").strip(),
        orderings=parse_orderings(parser.get("sweep", "ordering", fallback="physical")),
        secular=secular_raw in ("true", "1", "yes", "on"),
        scenario=parser.get("sweep", "scenario", fallback="auto").strip(),
        tolerance=_float(parser, "sweep", "tolerance", 1e-8),
        name=parser.get("sweep", "name", fallback="custom").strip(),
    )


def load_config(path, overrides: dict[tuple[str, str], str] | None = None) -> SweepConfig:
    with open(path, encoding="utf-8") as fh:
        return config_from_ini(read_ini(fh.read(), overrides))


# ---------------------------------------------------------------- discrepancy report


@dataclass
class DiscrepancyReport:
    tolerance: float
    rows: list[dict]
    max_abs_drho: float
    mean_abs_drho: float
    max_ergotropy_delta: float
    physical_breaches: int
    literal_breaches: int
    errors: int

    @property
    def exit_code(self) -> int:
        """0 clean; 1 physical-mode breach or failed point; 2 paper-literal breaches only."""
        if self.physical_breaches or self.errors:
            return 1
        if self.literal_breaches:
            return 2
        return 0

    def summary(self) -> dict:
        return {
            "tolerance": self.tolerance,
            "points": len(self.rows),
            "max_abs_drho": self.max_abs_drho,
            "mean_abs_drho": self.mean_abs_drho,
            "max_ergotropy_delta": self.max_ergotropy_delta,
            "physical_breaches": self.physical_breaches,
            "paper_literal_breaches": self.literal_breaches,
            "errors": self.errors,
            "exit_code": self.exit_code,
            "verdict": {0: "ok", 1: "bug", 2: "mode mismatch"}[self.exit_code],
        }

    def to_json(self, include_rows: bool = True) -> str:
        out = {"summary": self.summary()}
        if include_rows:
            out["rows"] = self.rows
        else:
            out["breaches"] = [r for r in self.rows if r.get("breach") or r.get("status", "").startswith("error")]
        return json.dumps(out, indent=1, default=_json_value) + "\n"


def compare_analytic_numeric(config: SweepConfig, tolerance: float | None = None) -> DiscrepancyReport:
    """Evaluate every grid point both ways and summarize the disagreement."""
    tol = config.tolerance if tolerance is None else tolerance
    config = replace(config, method="both")
    validate_config(config)
    rows, drhos, dergs = [], [], []
    phys = lit = errs = 0
    for ordering in config.orderings:
        for p in config.grid():
            res = evaluate_point(config, p, ordering, with_secular_shift=True)
            rec = {k: v for k, v in res.row.as_record().items() if k in CSV_COLUMNS[:11]}
            rec["status"] = res.row.status
            if not res.row.ok:
                errs += 1
                rows.append(rec)
                continue
            drho = res.row.discrepancy
            derg = abs(ergotropy(res.analytic, res.system) - ergotropy(res.numeric, res.system))
            _, r1, r2 = config.point_inputs(p)
            breach = drho > tol
            rec.update(
                max_abs_drho=drho,
                ergotropy_delta=derg,
                residual=res.row.residual,
                secular_shift=res.nonsecular_vs_secular,
                equilibrium=is_equilibrium(r1, r2),
                breach=breach,
            )
            rows.append(rec)
            drhos.append(drho)
            dergs.append(derg)
            if breach:
                if ordering is OrderingMode.PHYSICAL:
                    phys += 1
                else:
                    lit += 1
    return DiscrepancyReport(
        tolerance=tol,
        rows=rows,
        max_abs_drho=float(max(drhos)) if drhos else math.nan,
        mean_abs_drho=float(np.mean(drhos)) if drhos else math.nan,
        max_ergotropy_delta=float(max(dergs)) if dergs else math.nan,
        physical_breaches=phys,
        literal_breaches=lit,
        errors=errs,
    )
