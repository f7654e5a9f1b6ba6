"""Scenario runner: latency breakdown tables for the crypto placements.

Each scenario kind produces one CSV with a fixed column order and fixed
number formatting, so equal inputs give byte-identical files.  Plots are
written next to the CSV when matplotlib is installed.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .ace.schemes import SCHEMES
from .bce.engine import CIPHERS, canonical_id
from .budget import engine_profile, load_table, plan, program_power, PowerParams
from .calibration import Calibration
from .errors import FlashVaultError, InvalidRequestError
from .sim import CATEGORIES, PLACEMENTS, IoRequest, Simulator, SsdConfig
from .ace.schemes import scheme_id

log = logging.getLogger(__name__)

KB = 1024
MB = 1024 * 1024
KINDS = ("bulk_cipher", "secure_boot", "tamper_log", "ftl_overhead")
BOOT_BOUND_MS = 100.0
LOG_BOUNDS_MS = (2.0, 15.0)      # embedded, general purpose
SCHEME_ORDER = ("RSA", "ECDSA", "DILITHIUM", "FALCON", "SPHINCSPLUS")
CIPHER_ORDER = ("TDES", "HIGHT", "IDEA", "SERPENT", "SM4", "CAMELLIA", "AES")

ROW_FIELDS = ["scenario", "op", "algorithm", "size_bytes", "placement", "state"] + \
    [f"{c}_us" for c in CATEGORIES] + ["total_ms", "bound_ms", "bound_met"]


@dataclass
class Scenario:
    kind: str
    algorithms: tuple = ()
    sizes: tuple = ()
    placements: tuple = PLACEMENTS
    bounds: tuple = ()
    ops: tuple = ("program", "read")
    steady_state: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidRequestError(f"scenario kind must be one of {KINDS}")
        if not self.algorithms:
            raise InvalidRequestError("scenario needs at least one algorithm")
        if not self.sizes or any(s <= 0 for s in self.sizes):
            raise InvalidRequestError("scenario sizes must be positive")
        if any(b <= 0 for b in self.bounds):
            raise InvalidRequestError("bounds must be positive")
        if not self.placements:
            raise InvalidRequestError("scenario needs at least one placement")


@dataclass
class ReportRow:
    scenario: str
    algorithm: str
    size: int
    placement: str
    breakdown: dict
    total_ms: float
    bounds: tuple = ()
    op: str = ""
    state: str = "fresh"
    bound_met: tuple = field(init=False)

    def __post_init__(self):
        self.bound_met = tuple(self.total_ms <= b for b in self.bounds)

    def as_csv(self) -> list:
        return [self.scenario, self.op, self.algorithm, self.size, self.placement, self.state] + \
            [f"{self.breakdown[c]:.4f}" for c in CATEGORIES] + \
            [f"{self.total_ms:.6f}", ";".join(f"{b:g}" for b in self.bounds),
             ";".join("true" if m else "false" for m in self.bound_met)]

    def components_sum_ms(self) -> float:
        return sum(self.breakdown.values()) / 1000


def default_scenario(kind: str, placements=PLACEMENTS, steady_state=False) -> Scenario:
    if kind == "bulk_cipher":
        return Scenario(kind, CIPHER_ORDER, (4 * KB, 256 * KB), tuple(placements), (), steady_state=steady_state)
    if kind == "secure_boot":
        return Scenario(kind, SCHEME_ORDER, (10 * MB, 15 * MB), tuple(placements), (BOOT_BOUND_MS,),
                        steady_state=steady_state)
    if kind == "tamper_log":
        return Scenario(kind, SCHEME_ORDER, (1 * KB, 10 * KB), tuple(placements), LOG_BOUNDS_MS,
                        steady_state=steady_state)
    if kind == "ftl_overhead":
        return Scenario(kind, CIPHER_ORDER + SCHEME_ORDER, (256 * KB, 15 * MB, 10 * KB), ("FV",))
    raise InvalidRequestError(f"unknown scenario kind {kind!r}")


# -- simulator setup ----------------------------------------------------------

class Bench:
    """Holds the calibration and lazily built fresh/steady simulators."""

    def __init__(self, calibration: Calibration | None = None, seed: int = 0,
                 fill_fraction: float = 0.9, overwrite_ops: int | None = None):
        self.cal = calibration or Calibration.default()
        self.config = SsdConfig.from_calibration(self.cal)
        self.seed = seed
        self.fill = fill_fraction
        self.overwrite_ops = overwrite_ops
        self._sims = {}

    def sim(self, steady: bool) -> Simulator:
        key = "steady" if steady else "fresh"
        if key not in self._sims:
            s = Simulator(self.config, self.cal, seed=self.seed)
            if steady:
                s.make_steady_state(self.fill, self.overwrite_ops, self.seed)
            else:
                s.make_fresh_state(self.fill)
            self._sims[key] = s
        return self._sims[key]

    def lba(self, salt: int = 0) -> int:
        """Request address for a scenario: aligned to 64 pages inside the filled area."""
        rng = np.random.default_rng([self.seed, salt])
        filled = int(self.config.logical_pages * self.fill)
        return int(rng.integers(0, filled // 64 - 8)) * 64

    # -- single cells ---------------------------------------------------------
    def run_bulk(self, op, cipher, size, placement, steady=False) -> ReportRow:
        sim = self.sim(steady)
        with sim.isolated():
            b = sim.submit_io(IoRequest(op, self.lba(1), int(size), cipher, placement))
        return ReportRow("bulk_cipher", canonical_id(cipher), int(size), placement, b.components(),
                         b.total_ms, op=op, state=_state(steady))

    def run_secure_boot(self, image_bytes, scheme, placement, steady=False) -> ReportRow:
        if image_bytes <= 0:
            raise InvalidRequestError("boot image must be non-empty")
        sim = self.sim(steady)
        with sim.isolated():
            b = sim.secure_boot(int(image_bytes), scheme, placement)
        return ReportRow("secure_boot", scheme_id(scheme), int(image_bytes), placement, b.components(),
                         b.total_ms, (BOOT_BOUND_MS,), op="verify", state=_state(steady))

    def run_tamper_log(self, entry_bytes, scheme, placement, steady=False) -> ReportRow:
        sim = self.sim(steady)
        with sim.isolated():
            b = sim.tamper_log(int(entry_bytes), scheme, placement, lba=self.lba(2))
        return ReportRow("tamper_log", scheme_id(scheme), int(entry_bytes), placement, b.components(),
                         b.total_ms, LOG_BOUNDS_MS, op="sign", state=_state(steady))

    # -- whole scenarios --------------------------------------------------------
    def rows(self, sc: Scenario) -> list:
        out = []
        if sc.kind == "bulk_cipher":
            for op in sc.ops:
                for size in sc.sizes:
                    for alg in sc.algorithms:
                        for p in sc.placements:
                            out.append(self.run_bulk(op, alg, size, p, sc.steady_state))
        elif sc.kind == "secure_boot":
            for size in sc.sizes:
                for alg in sc.algorithms:
                    for p in sc.placements:
                        out.append(self.run_secure_boot(size, alg, p, sc.steady_state))
        elif sc.kind == "tamper_log":
            for size in sc.sizes:
                for alg in sc.algorithms:
                    for p in sc.placements:
                        out.append(self.run_tamper_log(size, alg, p, sc.steady_state))
        else:
            raise InvalidRequestError("use ftl_overhead() for the overhead table")
        return out

    def ftl_overhead(self, placement="FV") -> list:
        """Fresh vs steady-state latency for the steady-state table cells."""
        cells = []
        for op in ("program", "read"):
            for c in CIPHER_ORDER:
                cells.append(("block_cipher", op, 256 * KB, c))
        for s in SCHEME_ORDER:
            cells.append(("pkc_pqc", "verify", 15 * MB, s))
        for s in SCHEME_ORDER:
            cells.append(("pkc_pqc", "sign", 10 * KB, s))
        out = []
        for group, op, size, alg in cells:
            pair = []
            for steady in (False, True):
                if op in ("program", "read"):
                    r = self.run_bulk(op, alg, size, placement, steady)
                elif op == "verify":
                    r = self.run_secure_boot(size, alg, placement, steady)
                else:
                    r = self.run_tamper_log(size, alg, placement, steady)
                pair.append(r.total_ms)
            out.append({"scheme": group, "operation": op, "size_bytes": size, "algorithm": alg,
                        "fresh_ms": pair[0], "steady_ms": pair[1],
                        "overhead_pct": (pair[1] / pair[0] - 1) * 100})
        return out


def _state(steady):
    return "steady" if steady else "fresh"


def overhead_summary(rows) -> dict:
    """Average overhead per operation over the table cells."""
    out = {}
    for op in ("program", "read", "verify", "sign"):
        v = [r["overhead_pct"] for r in rows if r["operation"] == op]
        if v:
            out[op] = float(np.mean(v))
    return out


# -- CSV / plots ---------------------------------------------------------------

def rows_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ROW_FIELDS)
    for r in rows:
        w.writerow(r.as_csv())
    return buf.getvalue()


OVERHEAD_FIELDS = ["scheme", "operation", "size_bytes", "algorithm", "fresh_ms", "steady_ms", "overhead_pct"]


def overhead_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(OVERHEAD_FIELDS)
    for r in rows:
        w.writerow([r["scheme"], r["operation"], r["size_bytes"], r["algorithm"],
                    f"{r['fresh_ms']:.6f}", f"{r['steady_ms']:.6f}", f"{r['overhead_pct']:.3f}"])
    return buf.getvalue()


def overhead_table(rows) -> str:
    """Text table: one line per (scheme, operation), 'ALG (latency ms; overhead %)' entries."""
    lines = [f"{'Scheme':<14}{'Operation':<10}{'Input':>10}  Algorithms (steady latency ms; overhead %)"]
    seen = []
    for r in rows:
        key = (r["scheme"], r["operation"], r["size_bytes"])
        if key not in seen:
            seen.append(key)
    for scheme, op, size in seen:
        cells = [r for r in rows if (r["scheme"], r["operation"], r["size_bytes"]) == (scheme, op, size)]
        body = ", ".join(f"{r['algorithm']} ({r['steady_ms']:.1f}; {r['overhead_pct']:.1f})" for r in cells)
        lines.append(f"{scheme:<14}{op:<10}{_size_label(size):>10}  {body}")
    summ = overhead_summary(rows)
    lines.append("average overhead: " + ", ".join(f"{k} {v:.1f}%" for k, v in summ.items()))
    return "\n".join(lines) + "\n"


def _size_label(n):
    if n >= MB and n % MB == 0:
        return f"{n // MB} MB"
    if n >= KB and n % KB == 0:
        return f"{n // KB} KB"
    return f"{n} B"


def _write(path: Path, text: str):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise FlashVaultError(f"cannot write {path}: {exc}") from exc
    return path


def plot_rows(rows, path: Path, title: str):
    """Stacked bars of the breakdown components, one bar per cell."""
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        log.info("matplotlib not installed; skipping %s", path)
        return None
    labels = [f"{r.algorithm}\n{r.placement}\n{_size_label(r.size)}" for r in rows]
    fig, ax = plt.subplots(figsize=(max(6, 0.45 * len(rows)), 4))
    bottom = np.zeros(len(rows))
    for c in CATEGORIES:
        v = np.array([r.breakdown[c] / 1000 for r in rows])
        ax.bar(range(len(rows)), v, bottom=bottom, label=c)
        bottom += v
    for b in {x for r in rows for x in r.bounds}:
        ax.axhline(b, color="red", lw=0.8, ls="--")
    ax.set_xticks(range(len(rows)))
    ax.set_xticklabels(labels, fontsize=6)
    ax.set_ylabel("latency [ms]")
    ax.set_title(title)
    ax.legend(fontsize=7, ncol=3)
    fig.tight_layout()
    try:
        fig.savefig(path, metadata={"Software": None})
    except OSError as exc:
        raise FlashVaultError(f"cannot write {path}: {exc}") from exc
    finally:
        plt.close(fig)
    return path


def run_matrix(scenario: Scenario, out_dir, bench: Bench | None = None, plot: bool = True) -> dict:
    """Run a scenario, write its CSV (and plot).  Returns paths and rows."""
    bench = bench or Bench()
    out = Path(out_dir)
    if scenario.kind == "ftl_overhead":
        rows = bench.ftl_overhead(scenario.placements[0])
        csv_path = _write(out / "ftl_overhead.csv", overhead_csv(rows))
        txt = _write(out / "ftl_overhead.txt", overhead_table(rows))
        return {"csv": csv_path, "table": txt, "rows": rows}
    rows = bench.rows(scenario)
    tag = scenario.kind + ("_steady" if scenario.steady_state else "")
    csv_path = _write(out / f"{tag}.csv", rows_csv(rows))
    res = {"csv": csv_path, "rows": rows}
    if plot:
        res["plot"] = plot_rows(rows, out / f"{tag}.png", tag.replace("_", " "))
    return res


# -- budget ---------------------------------------------------------------------

BUDGET_FIELDS = ["profile", "engine_area_mm2", "engine_power_mw", "available_mm2",
                 "power_budget_mw", "n_engines", "binding"]


def budget_csv() -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BUDGET_FIELDS)
    for prof in ("text", "table_total", "rows"):
        r = plan(prof)
        w.writerow([prof, f"{r.engine.area_mm2:.6f}", f"{r.engine.power_mw:.2f}", f"{r.available_mm2:.2f}",
                    f"{r.power_budget_mw:.2f}", r.n_engines, r.binding])
    return buf.getvalue()


def budget_summary() -> str:
    pw = load_table()["power"]
    base = program_power(PowerParams(pw["I_program_ma"], pw["V_max_v"]))
    eff = program_power(PowerParams(pw["I_program_ma"], pw["V_max_v"], pw["efficiency_gain"]))
    r = plan("text")
    return (f"program power {base:.2f} mW, after efficiency gain {eff:.2f} mW\n"
            f"free die area {r.available_mm2:.2f} mm2; engine {r.engine.area_mm2:.2f} mm2 / "
            f"{engine_profile('text').power_mw:.2f} mW -> {r.n_engines} engines ({r.binding}-bound)\n")


__all__ = [
    "Scenario", "ReportRow", "Bench", "default_scenario", "run_matrix", "rows_csv",
    "overhead_csv", "overhead_table", "overhead_summary", "budget_csv", "budget_summary",
    "SCHEME_ORDER", "CIPHER_ORDER", "BOOT_BOUND_MS", "LOG_BOUNDS_MS", "SCHEMES", "CIPHERS",
]
