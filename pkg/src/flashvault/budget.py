"""Area/power budget planner: programming power, engine count, node scaling."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .errors import ConfigurationError


@lru_cache(maxsize=1)
def _shipped():
    return json.loads(resources.files("flashvault").joinpath("data", "engine_area_power.json").read_text())


def load_table(path=None) -> dict:
    if path is None:
        return _shipped()
    return json.loads(Path(path).read_text())


@dataclass(frozen=True)
class DieGeometry:
    M: float
    D6: float
    D7: float

    @property
    def P(self) -> float:
        return self.D6 - self.D7

    @property
    def available(self) -> float:
        a = self.M - self.P
        if a < 0:
            raise ConfigurationError(f"peripheral area {self.P:.2f} exceeds array area {self.M:.2f}")
        return a

    @classmethod
    def default(cls) -> "DieGeometry":
        d = load_table()["die"]
        return cls(d["M_mm2"], d["D6_mm2"], d["D7_mm2"])


@dataclass(frozen=True)
class ComponentBudget:
    area_um2: float
    power_mw: float
    name: str = ""

    def __post_init__(self):
        if self.area_um2 < 0 or self.power_mw < 0:
            raise ConfigurationError("area and power must be non-negative")

    @property
    def area_mm2(self) -> float:
        return self.area_um2 / 1e6


@dataclass(frozen=True)
class PowerParams:
    I_program: float = 13.8      # mA
    V_max: float = 3.6           # V
    efficiency_gain: float = 0.0

    def __post_init__(self):
        if self.I_program <= 0 or self.V_max <= 0:
            raise ConfigurationError("programming current and voltage must be positive")
        if not 0 <= self.efficiency_gain < 1:
            raise ConfigurationError("efficiency gain must be a fraction in [0, 1)")


def program_power(params: PowerParams) -> float:
    """I x V in mW, less the efficiency gain.  Rounded to 0.01 mW like the source figures."""
    p = params.I_program * params.V_max * (1 - params.efficiency_gain)
    return round(p, 2)


def max_engines(A_budget: float, P_budget: float, A_engine: float, P_engine: float) -> int:
    if A_engine <= 0 or P_engine <= 0:
        raise ConfigurationError("engine area and power must be positive")
    # tiny epsilon guards floors of exact quotients against float error
    eps = 1e-9
    return max(0, min(math.floor(A_budget / A_engine + eps), math.floor(P_budget / P_engine + eps)))


def binding_constraint(A_budget, P_budget, A_engine, P_engine) -> str:
    a = A_budget / A_engine
    p = P_budget / P_engine
    return "area" if a < p else "power" if p < a else "both"


def engine_profile(name: str = "text", table: dict | None = None) -> ComponentBudget:
    """``text``: 0.18 mm2 / 18.87 mW; ``table_total``: 20.71 mW; ``rows``: sum of engine rows."""
    t = table or load_table()
    if name == "rows":
        rows = [r for r in t["top"]["rows"] if r["engine"]]
        return ComponentBudget(sum(r["area_um2"] for r in rows), sum(r["power_mw"] for r in rows), "rows")
    if name not in t["profiles"]:
        raise ConfigurationError(f"unknown engine profile {name!r}; have {sorted(t['profiles'])} and 'rows'")
    p = t["profiles"][name]
    return ComponentBudget(p["area_mm2"] * 1e6, p["power_mw"], name)


def scale_node(budget: ComponentBudget, factors, table: dict | None = None) -> ComponentBudget:
    """Scale by float (area, power) factors, or by a node pair: ``"65->14"`` or ``(65, 14)``."""
    if isinstance(factors, tuple) and len(factors) == 2 and all(isinstance(v, int) for v in factors):
        factors = f"{factors[0]}->{factors[1]}"
    if isinstance(factors, str):
        t = table or load_table()
        if factors not in t["scaling"]:
            raise ConfigurationError(f"no scaling factors for node pair {factors!r}")
        f = t["scaling"][factors]
        fa, fp = f["area"], f["power"]
    else:
        fa, fp = factors
        if fa <= 0 or fp <= 0:
            raise ConfigurationError("scale factors must be positive")
    return ComponentBudget(budget.area_um2 * fa, budget.power_mw * fp, budget.name)


@dataclass(frozen=True)
class BudgetReport:
    available_mm2: float
    power_budget_mw: float
    engine: ComponentBudget
    n_engines: int
    binding: str


def plan(profile: str = "text", geometry: DieGeometry | None = None,
         power: PowerParams | None = None) -> BudgetReport:
    t = load_table()
    geometry = geometry or DieGeometry.default()
    if power is None:
        pw = t["power"]
        power = PowerParams(pw["I_program_ma"], pw["V_max_v"], pw["efficiency_gain"])
    p_budget = program_power(power)
    eng = engine_profile(profile, t)
    a = round(geometry.available, 6)
    n = max_engines(a, p_budget, eng.area_mm2, eng.power_mw)
    return BudgetReport(a, p_budget, eng, n, binding_constraint(a, p_budget, eng.area_mm2, eng.power_mw))
