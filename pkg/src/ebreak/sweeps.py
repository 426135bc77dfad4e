"""Grid scans and report tables backing the service endpoints and CLI.

Tables are lists of row tuples with a fixed column order; CSV rendering
uses 12 significant digits, '.' radix and '\\n' newlines so output is
byte-identical for a given configuration.  Grid rows are computed by a
thread pool (numpy releases the GIL on the vectorised kernels) capped by
the EBREAK_THREADS environment variable, and reassembled in row order so
the worker count never changes the bytes.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import propagation
from .environment import (
    EnvSpec,
    classify_arrays,
    correlation_budget,
    omega_eb,
    thresholds,
)
from .errors import DomainError
from .gaussian import TwoModeCM, entanglement_report

MAX_GRID_N = 4001
CLASS_LETTERS = ("F", "S", "E")

ENV_MAP_COLUMNS = ("g", "gp", "class")
REACTIVATION_COLUMNS = ("g", "gp", "class", "eps", "reactivated", "distillable")
THRESHOLDS_COLUMNS = ("tau", "omega_eb", "g_er", "g_ed", "g_max_sep", "g_max_phys")
CURVES_COLUMNS = ("g", "eps", "logneg_ebits", "c_cbits", "d_dbits", "i_bits")


def worker_count() -> int:
    raw = os.environ.get("EBREAK_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return max(1, min(n, 64))


def _grid_axes(omega: float, grid_n: int, bounds):
    if not 2 <= grid_n <= MAX_GRID_N:
        raise DomainError(f"grid_n must lie in [2, {MAX_GRID_N}], got {grid_n}")
    if bounds is None or bounds == "auto":
        bounds = (-omega, omega, -omega, omega)
    g_min, g_max, gp_min, gp_max = (float(b) for b in bounds)
    for b in (g_min, g_max, gp_min, gp_max):
        if not math.isfinite(b):
            raise DomainError("grid ranges must be finite")
    if g_min >= g_max or gp_min >= gp_max:
        raise DomainError("grid ranges must be increasing")
    return np.linspace(g_min, g_max, grid_n), np.linspace(gp_min, gp_max, grid_n)


def _pooled_rows(build_row, n_rows: int) -> list:
    chunks: list = [None] * n_rows
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        for idx, rows in zip(range(n_rows), pool.map(build_row, range(n_rows))):
            chunks[idx] = rows
    return [row for chunk in chunks for row in chunk]


def env_map_table(omega: float, grid_n: int = 401, bounds="auto") -> list[tuple]:
    """Rows (g, g', class letter) over the correlation plan."""
    if omega < 1.0:
        raise DomainError(f"thermal variance must be >= 1, got {omega}")
    g_axis, gp_axis = _grid_axes(omega, grid_n, bounds)

    def build_row(i: int) -> list[tuple]:
        codes = classify_arrays(omega, np.full_like(gp_axis, g_axis[i]), gp_axis)
        g = float(g_axis[i])
        return [
            (g, float(gp), CLASS_LETTERS[int(c)])
            for gp, c in zip(gp_axis, codes)
        ]

    return _pooled_rows(build_row, len(g_axis))


def reactivation_map_table(tau: float, grid_n: int = 401, bounds="auto") -> list[tuple]:
    """Rows (g, g', class, eps, reactivated, distillable) at omega = omega_EB."""
    omega = omega_eb(tau)
    if tau >= 1.0 or tau <= 0.0:
        raise DomainError(f"need 0 < tau < 1, got {tau}")
    g_axis, gp_axis = _grid_axes(omega, grid_n, bounds)
    e_inv = math.exp(-1.0)

    def build_row(i: int) -> list[tuple]:
        g = float(g_axis[i])
        codes = classify_arrays(omega, np.full_like(gp_axis, g), gp_axis)
        prod = (omega - g) * (omega + gp_axis)
        eps = (1.0 - tau) * np.sqrt(np.clip(prod, 0.0, None))
        eps = np.where(codes == 0, np.nan, eps)
        rows = []
        for gp, c, e in zip(gp_axis, codes, eps):
            live = c != 0
            rows.append((
                g, float(gp), CLASS_LETTERS[int(c)],
                float(e),
                bool(live and e < 1.0),
                bool(live and e < e_inv),
            ))
        return rows

    return _pooled_rows(build_row, len(g_axis))


def thresholds_table(family: str, taus) -> list[tuple]:
    """One row per tau; 'none' marks thresholds beyond the physical range."""
    rows = []
    for tau in taus:
        t = float(tau)
        th = thresholds(family, t)
        g_er = th.g_er if th.g_er <= th.g_max_physical + 1e-12 else None
        g_ed = th.g_ed if th.g_ed <= th.g_max_physical + 1e-12 else None
        rows.append((t, omega_eb(t), g_er, g_ed,
                     th.g_max_separable, th.g_max_physical))
    return rows


def _family_eps(family: str, tau: float, g) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    if family == "sc":
        val = (1.0 + tau) ** 2 - (1.0 - tau) ** 2 * g * g
        return np.sqrt(np.clip(val, 0.0, None))
    return 1.0 + tau - (1.0 - tau) * g


def curves_table(family: str, tau: float, points: int = 201) -> list[tuple]:
    """Entanglement and correlation bits along a family, g in [0, g_max].

    The final row re-evaluates everything exactly at the restoration
    threshold g_ER (eps = 1 there), summarising the critical bits; it is
    omitted for SC families with tau <= 2/3 where no threshold exists.
    """
    fam = family.lower()
    if fam not in ("sc", "ac"):
        raise DomainError(f"unknown family {family!r}; use 'sc' or 'ac'")
    if not 2 <= points <= MAX_GRID_N:
        raise DomainError(f"points must lie in [2, {MAX_GRID_N}], got {points}")
    th = thresholds(fam, tau)
    w = omega_eb(tau)
    sign = +1.0 if fam == "sc" else -1.0
    g_values = list(np.linspace(0.0, th.g_max_physical, points))
    if th.g_er <= th.g_max_physical + 1e-12:
        g_values.append(th.g_er)

    def build_row(i: int) -> list[tuple]:
        g = float(g_values[i])
        eps = float(_family_eps(fam, tau, g))
        budget = correlation_budget(EnvSpec(w, g, sign * g, tau))
        return [(
            g, eps, max(0.0, -math.log2(eps)) if eps > 0 else math.inf,
            budget.classical_c, budget.discord_d, budget.mutual_i,
        )]

    return _pooled_rows(build_row, len(g_values))


# ---------------------------------------------------------------------------
# single-point reports


def epr_variances_report(tau: float, omega, g: float, g_prime: float,
                         mu: float | None = None) -> dict:
    """Exact and asymptotic EPR-quadrature variances for one environment."""
    at_eb = isinstance(omega, str)
    if at_eb and omega != "eb":
        raise DomainError(f"omega must be a number or 'eb', got {omega!r}")
    w = omega_eb(tau) if at_eb else float(omega)
    env = EnvSpec(w, g, g_prime, tau)
    limit = propagation.epr_variances_limit(env)
    out = {
        "omega": w,
        "asymptotic": {"vq_minus": limit.vq_minus, "vp_plus": limit.vp_plus,
                       "epr_condition": limit.epr_condition},
    }
    if at_eb:
        eb = propagation.epr_variances_limit_eb(tau, g, g_prime)
        out["asymptotic_eb"] = {"vq_minus": eb.vq_minus, "vp_plus": eb.vp_plus,
                                "epr_condition": eb.epr_condition}
    if mu is not None:
        exact = propagation.epr_variances(propagation.EprInput(mu), env)
        out["exact"] = {"mu": mu, "vq_minus": exact.vq_minus,
                        "vp_plus": exact.vp_plus,
                        "epr_condition": exact.epr_condition}
    return out


def discord_report(cm: TwoModeCM | None = None, omega: float | None = None,
                   g: float | None = None, g_prime: float | None = None,
                   method: str = "both") -> dict:
    """Correlation budget of a CM or an (omega, g, g') environment."""
    from .discord import gaussian_discord
    from .environment import env_cm
    from .errors import NotSpecialFamilyError

    if cm is None:
        if omega is None or g is None or g_prime is None:
            raise DomainError("need either a CM or all of omega, g, g'")
        spec = EnvSpec(float(omega), float(g), float(g_prime))
        cm = env_cm(spec)
    else:
        spec = None
    out: dict = {"method": method}
    if method in ("numeric", "both"):
        numeric = gaussian_discord(cm)
        out["numeric"] = {
            "entropy_s": numeric.entropy_s, "classical_c": numeric.classical_c,
            "discord_d": numeric.discord_d, "mutual_i": numeric.mutual_i,
        }
    if method in ("closed", "both") and spec is not None:
        try:
            closed = correlation_budget(spec, "closed_form")
        except NotSpecialFamilyError:
            closed = None
        if closed is not None:
            out["closed_form"] = {
                "entropy_s": closed.entropy_s, "classical_c": closed.classical_c,
                "discord_d": closed.discord_d, "mutual_i": closed.mutual_i,
            }
            if "numeric" in out:
                out["agreement_1e6"] = bool(
                    abs(closed.classical_c - out["numeric"]["classical_c"]) < 1e-6
                    and abs(closed.discord_d - out["numeric"]["discord_d"]) < 1e-6
                )
    if not out.keys() - {"method"}:
        raise DomainError("closed-form method needs an (omega, g, g') spec")
    return out


def point_report(env: EnvSpec, mu: float | None = None) -> dict:
    """Asymptotic entanglement report, optionally cross-checked at finite mu."""
    rep = propagation.asymptotic_report(env)
    out = {
        "eps": rep.eps, "logneg": rep.logneg, "coherent_info": rep.coherent_info,
        "separable": rep.separable, "distillable": rep.distillable_one_way,
    }
    if mu is not None:
        cm = propagation.two_mode_transmit(propagation.EprInput(mu), env)
        finite = entanglement_report(cm)
        out["finite_mu"] = {"mu": mu, "eps": finite.eps, "logneg": finite.logneg,
                            "coherent_info": finite.coherent_info}
    return out


# ---------------------------------------------------------------------------
# rendering


def _format_value(x) -> str:
    if x is None:
        return "none"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, str):
        return x
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return format(float(x), ".12g")


def render_csv(columns, rows) -> str:
    lines = [",".join(columns)]
    lines.extend(",".join(_format_value(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def table_values(columns, rows) -> dict:
    """Column-major mirror of the table for JSON responses."""
    out: dict[str, list] = {name: [] for name in columns}
    for row in rows:
        for name, value in zip(columns, row):
            if isinstance(value, float) and math.isnan(value):
                value = None
            out[name].append(value)
    return out
