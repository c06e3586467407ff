"""Qualitative checks of the target figure trends against computed sweeps.

Each check runs a figure preset analytically in one ordering mode and
reports pass/fail with the numbers that decided it.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, replace

import numpy as np

from .analytic import OrderingMode
from .sweep import SweepConfig, figure_preset, run_sweep

# first differences smaller than this count as flat
FLAT_TOL = 1e-12
# a curve has saturated when its last step is below this fraction of its total rise
SATURATION_FRACTION = 1e-3


@dataclass
class TrendCheck:
    trend: str
    mode: str
    curve: str
    passed: bool
    detail: str


def _curves(config: SweepConfig, mode: OrderingMode, field: str = "ergotropy"):
    cfg = replace(config, orderings=(mode,), method="analytic")
    rows = run_sweep(cfg)
    bad = [r.status for r in rows if not r.ok]
    if bad:
        raise RuntimeError(f"{config.name}: {len(bad)} failed points, first: {bad[0]}")
    values = np.array([getattr(r, field) for r in rows]).reshape(cfg.shape)
    return cfg, values


def check_fig3(mode: OrderingMode) -> list[TrendCheck]:
    """Ergotropy at the lowest T beats the highest T; internal energy never rises with T."""
    cfg, erg = _curves(figure_preset("fig3"), mode)
    _, energy = _curves(figure_preset("fig3"), mode, "internal_energy")
    out = []
    for lam, e, u in zip(cfg.axes[0].values, erg, energy):
        rise = float(np.max(np.diff(u)))
        ok = bool(e[0] > e[-1] and rise <= FLAT_TOL)
        out.append(TrendCheck(
            "fig3", mode.value, f"lambda={lam:g}", ok,
            f"E(T={cfg.axes[1].values[0]:g})={e[0]:.6g}, E(T={cfg.axes[1].values[-1]:g})={e[-1]:.6g}, "
            f"largest U increase={rise:.3g}",
        ))
    return out


def check_fig5(mode: OrderingMode) -> list[TrendCheck]:
    """Ergotropy falls as the temperature difference grows."""
    cfg, erg = _curves(figure_preset("fig5"), mode)
    out = []
    for T1, e in zip(cfg.axes[0].values, erg):
        rise = float(np.max(np.diff(e)))
        ok = bool(e[0] > e[-1] and rise <= FLAT_TOL)
        out.append(TrendCheck(
            "fig5", mode.value, f"T1={T1:g}", ok,
            f"E(dT=0)={e[0]:.6g}, E(dT={cfg.axes[1].values[-1]:g})={e[-1]:.6g}, largest step up={rise:.3g}",
        ))
    return out


def check_fig6(mode: OrderingMode) -> list[TrendCheck]:
    """Non-monotonic in dmu for mu1 < omega; non-decreasing and saturating for mu1 > omega."""
    cfg, erg = _curves(figure_preset("fig6"), mode)
    omega = cfg.omega
    out = []
    for mu1, e in zip(cfg.axes[0].values, erg):
        d = np.diff(e)
        n_down, n_up = int(np.sum(d < -FLAT_TOL)), int(np.sum(d > FLAT_TOL))
        if mu1 < omega:
            ok = n_down > 0 and n_up > 0
            detail = f"{n_down} falling / {n_up} rising steps; wants both"
        else:
            total = float(e.max() - e.min())
            last = float(abs(d[-1]))
            ok = n_down == 0 and last <= SATURATION_FRACTION * total
            detail = (f"{n_down} falling steps (wants 0); last step {last:.3g} vs "
                      f"{SATURATION_FRACTION:g} x total rise {total:.3g}")
        out.append(TrendCheck("fig6", mode.value, f"mu1={mu1:g}", bool(ok), detail))
    return out


def check_fig7(name: str, mode: OrderingMode) -> list[TrendCheck]:
    """The symmetric, equilibrium grid centre holds the grid maximum."""
    cfg, erg = _curves(figure_preset(name), mode)
    i = cfg.axes[0].values.index(0.0)
    j = cfg.axes[1].values.index(0.0)
    centre, top = float(erg[i, j]), float(erg.max())
    k = np.unravel_index(int(np.argmax(erg)), erg.shape)
    where = f"{cfg.axes[0].name}={cfg.axes[0].values[k[0]]:g}, Delta={cfg.axes[1].values[k[1]]:g}"
    return [TrendCheck(
        name, mode.value, "centre", centre >= top - FLAT_TOL,
        f"centre={centre:.6g}, grid max={top:.6g} at {where}",
    )]


def run_trend_checks(modes=(OrderingMode.PHYSICAL, OrderingMode.PAPER_LITERAL)) -> list[TrendCheck]:
    checks = []
    for mode in modes:
        mode = OrderingMode(mode)
        checks += check_fig3(mode)
        checks += check_fig5(mode)
        checks += check_fig6(mode)
        checks += check_fig7("fig7a", mode)
        checks += check_fig7("fig7b", mode)
    return checks


def summarize(checks: list[TrendCheck]) -> dict[str, dict]:
    """Per trend: which modes reproduce every curve, and whether any mode does."""
    out: dict[str, dict] = {}
    for c in checks:
        entry = out.setdefault(c.trend, {"modes": {}})
        entry["modes"][c.mode] = entry["modes"].get(c.mode, True) and c.passed
    for entry in out.values():
        entry["reproduced"] = any(entry["modes"].values())
    return out


def report_json(checks: list[TrendCheck]) -> str:
    return json.dumps(
        {"summary": summarize(checks), "checks": [asdict(c) for c in checks]}, indent=1
    ) + "\n"
