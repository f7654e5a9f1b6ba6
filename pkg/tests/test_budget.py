import pytest

from flashvault.budget import (ComponentBudget, DieGeometry, PowerParams, binding_constraint, engine_profile,
                               load_table, max_engines, plan, program_power, scale_node)
from flashvault.errors import ConfigurationError


def test_program_power():
    assert program_power(PowerParams(13.8, 3.6)) == 49.68
    assert program_power(PowerParams(13.8, 3.6, 0.16)) == 41.73
    # independent arithmetic
    assert abs(program_power(PowerParams(10, 2.5, 0.5)) - 12.5) < 1e-9


@pytest.mark.parametrize("kw", [dict(I_program=0), dict(V_max=-1), dict(efficiency_gain=1.0),
                                dict(efficiency_gain=-0.1)])
def test_power_params_validation(kw):
    with pytest.raises(ConfigurationError):
        PowerParams(**kw)


def test_max_engines_floors():
    assert max_engines(20.6, 41.73, 0.18, 18.87) == 2
    assert max_engines(1.0, 100, 0.25, 1) == 4          # exact quotient
    assert max_engines(0.3, 0.6, 0.1, 0.2) == 3          # float quotients just under 3
    assert max_engines(0.1, 100, 0.2, 1) == 0
    with pytest.raises(ConfigurationError):
        max_engines(1, 1, 0, 1)


def test_binding_constraint():
    assert binding_constraint(20.6, 41.73, 0.18, 18.87) == "power"
    assert binding_constraint(0.2, 1000, 0.18, 18.87) == "area"
    assert binding_constraint(1, 1, 1, 1) == "both"


def test_die_geometry():
    g = DieGeometry.default()
    assert abs(g.available - 20.6) < 1e-9
    with pytest.raises(ConfigurationError):
        DieGeometry(1.0, 10.0, 2.0).available


def test_engine_profiles():
    t = load_table()
    rows = [r for r in t["top"]["rows"] if r["engine"]]
    area = sum(r["area_um2"] for r in rows)
    power = sum(r["power_mw"] for r in rows)
    assert abs(area - 184397.74) < 1e-6 and abs(power - 18.94) < 1e-9
    prof = engine_profile("rows")
    assert prof.area_um2 == pytest.approx(area) and prof.power_mw == pytest.approx(power)
    assert engine_profile("text").power_mw == 18.87
    assert engine_profile("table_total").power_mw == 20.71
    with pytest.raises(ConfigurationError):
        engine_profile("nope")


def test_plan_profiles_all_give_two_engines():
    for prof in ("text", "table_total", "rows"):
        r = plan(prof)
        assert r.n_engines == 2 and r.binding == "power"
        assert r.power_budget_mw == 41.73


def test_scale_node():
    b = ComponentBudget(1e6, 10.0)
    s = scale_node(b, "65->14")
    assert s.area_um2 == pytest.approx(1e6 * (14 / 65) ** 2)
    assert s.power_mw == pytest.approx(10 * 14 / 65)
    assert scale_node(b, (65, 14)) == s
    assert scale_node(b, "14->14") == b
    assert scale_node(b, (0.5, 0.25)) == ComponentBudget(5e5, 2.5)
    with pytest.raises(ConfigurationError):
        scale_node(b, (65, 7))
    with pytest.raises(ConfigurationError):
        scale_node(b, "28->7")
    with pytest.raises(ConfigurationError):
        ComponentBudget(-1, 0)
