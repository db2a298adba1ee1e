"""Seeded Monte Carlo experiment runners with CSV/JSON reporting.

Each runner consumes an :class:`ExperimentConfig` and returns named row
tables; :func:`write_outputs` serializes them.  Reproducibility contract:
identical ``(config, seed)`` produce byte-identical CSV bodies across
runs and across worker counts — every replication reads its own
counter-derived substream keyed ``(seed, domain, n, rep)`` and writes to
a preallocated slot, so scheduling cannot reorder or perturb anything.
Every row carries ``(seed, reps, config_hash)`` for provenance.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import DivergenceError, DomainError
from .extremes import (VARIANTS, extreme_mean, extreme_var,
                       sample_extreme)
from .integrals import (bickel_integral, d1n, second_moment_windows,
                        truncated_second_moment)
from .limitlaw import (MECHANISMS, build_grid, ks_two_sample,
                       sample_limit_law)
from .special import (as_correlation, h_tail_expansion, psi, psi_expansion,
                      quantile_tail_expansion, scaled_tail, std_normal_quantile)
from .streams import correlated_normal_pairs, standard_normals, substream
from .wasserstein import SortedSample, w2sq_two_sample, w2sq_vs_gaussian

__all__ = [
    "EXPERIMENTS",
    "ExperimentConfig",
    "run_one_sample",
    "run_two_sample",
    "run_limit_compare",
    "run_expansions",
    "run_integrals",
    "run_moments",
    "run_experiment",
    "write_outputs",
]

EXPERIMENTS = ("one_sample", "two_sample", "limit_compare",
               "expansions", "integrals", "moments")

_NEEDS_RHO = ("two_sample", "limit_compare")


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment description; ``seed`` is always explicit."""

    experiment: str
    seed: int
    ns: tuple[int, ...] = ()
    reps: int = 1
    rho: float | None = None
    workers: int = 1
    m: int = 512
    delta: float | None = None          # None -> 1/(4n) where a grid is used
    m_sample: int = 10 ** 4
    C: float = 1.0
    theta: float = 2.0
    gamma: float = 2.0
    divergence_demo: bool = False
    out: str = "results"

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise DomainError(
                f"experiment must be one of {EXPERIMENTS}, "
                f"got {self.experiment!r}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) \
                or not (0 <= self.seed < 2 ** 64):
            raise DomainError("seed must be an explicit unsigned 64-bit int")
        ns = tuple(int(n) for n in self.ns)
        if any(n < 1 for n in ns):
            raise DomainError("all n must be >= 1")
        object.__setattr__(self, "ns", ns)
        if self.reps < 1:
            raise DomainError("reps >= 1 required")
        if self.workers < 1:
            raise DomainError("workers >= 1 required")
        if self.experiment in _NEEDS_RHO:
            if self.rho is None:
                raise DomainError(f"{self.experiment} requires rho")
            as_correlation(self.rho)  # range check
        if self.experiment == "limit_compare" and float(self.rho) == 0.0 \
                and not self.divergence_demo:
            raise DomainError(
                "limit_compare at rho = 0 has no finite limit law; pass "
                "divergence_demo to run it as a divergence demonstration")
        if self.experiment in ("one_sample", "two_sample", "limit_compare") \
                and not ns:
            raise DomainError(f"{self.experiment} requires at least one n")

    def config_hash(self) -> str:
        """12-hex-digit digest of the scientific configuration.

        ``workers`` and ``out`` are excluded: they must not change any
        reported number.
        """
        payload = {
            "experiment": self.experiment, "seed": self.seed,
            "ns": list(self.ns), "reps": self.reps, "rho": self.rho,
            "m": self.m, "delta": self.delta, "m_sample": self.m_sample,
            "C": self.C, "theta": self.theta, "gamma": self.gamma,
            "divergence_demo": self.divergence_demo,
        }
        blob = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


# --------------------------------------------------------------------------
# worker pool: slot-indexed replication
# --------------------------------------------------------------------------

def _fill_slots(fn, count: int, workers: int) -> np.ndarray:
    """``out[i] = fn(i)`` computed under ``workers`` threads.

    Each index is computed independently from its own substream, so the
    result array is identical for every worker count.
    """
    out = np.empty(count)
    if workers <= 1:
        for i in range(count):
            out[i] = fn(i)
        return out
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for i, v in zip(range(count), pool.map(fn, range(count))):
            out[i] = v
    return out


def _loglog(n: int) -> float:
    if n <= 1 or math.log(n) <= 1.0:
        return math.nan
    return math.log(math.log(n))


# --------------------------------------------------------------------------
# runners
# --------------------------------------------------------------------------

def run_one_sample(cfg: ExperimentConfig) -> dict[str, list[dict]]:
    """Mean one-sample distances with their Theorem-1 normalizations."""
    if cfg.experiment != "one_sample":
        raise DomainError("config experiment must be one_sample")
    chash = cfg.config_hash()
    rows = []
    for n in cfg.ns:
        def draw(rep: int, n=n) -> float:
            g = substream(cfg.seed, "one_sample", n, rep)
            z = np.sort(standard_normals(g, n))
            return w2sq_vs_gaussian(SortedSample(z))

        w2sq = _fill_slots(draw, cfg.reps, cfg.workers)
        w2 = np.sqrt(w2sq)
        ll = _loglog(n)
        mean_sq = float(w2sq.mean())
        se_sq = float(w2sq.std(ddof=1) / math.sqrt(cfg.reps)) \
            if cfg.reps > 1 else 0.0
        mean_w2 = float(w2.mean())
        se_w2 = float(w2.std(ddof=1) / math.sqrt(cfg.reps)) \
            if cfg.reps > 1 else 0.0
        rows.append({
            "n": n, "mean_w2sq": mean_sq, "se_w2sq": se_sq,
            "mean_w2": mean_w2, "se_w2": se_w2,
            "ratio": n * mean_sq / ll,
            "root_ratio": math.sqrt(n / ll) * mean_w2 if ll == ll else math.nan,
            "centered": n * mean_sq - ll,
            "seed": cfg.seed, "reps": cfg.reps, "config_hash": chash,
        })
    return {"one_sample": rows}


def _two_sample_draws(cfg: ExperimentConfig, n: int, domain: str) -> np.ndarray:
    rho = float(cfg.rho)

    def draw(rep: int) -> float:
        g = substream(cfg.seed, domain, n, rep)
        xs, ys = correlated_normal_pairs(g, n, rho)
        return n * w2sq_two_sample(SortedSample(np.sort(xs)),
                                   SortedSample(np.sort(ys)))

    return _fill_slots(draw, cfg.reps, cfg.workers)


def run_two_sample(cfg: ExperimentConfig) -> dict[str, list[dict]]:
    """Draws of ``n W_2^2(F_n, G_n)`` against the analytic references.

    ``ref_truncated`` is the finite truncated mean ``M(rho, 1/(4n))``;
    ``ref_limit`` is the delta -> 0 value, reported as ``inf`` because the
    integral diverges for every |rho| < 1 (the finite-n means keep
    growing with n accordingly).  For rho = 0, ``norm_indep`` reports
    ``n mean / (2 log log n)``.
    """
    if cfg.experiment != "two_sample":
        raise DomainError("config experiment must be two_sample")
    chash = cfg.config_hash()
    rho = float(cfg.rho)
    rows = []
    for n in cfg.ns:
        vals = _two_sample_draws(cfg, n, "two_sample")
        q05, q50, q95 = np.quantile(vals, [0.05, 0.50, 0.95])
        ll = _loglog(n)
        delta = cfg.delta if cfg.delta is not None else 1.0 / (4.0 * n)
        ref_trunc = truncated_second_moment(rho, delta).value
        rows.append({
            "rho": rho, "n": n, "mean_nw2sq": float(vals.mean()),
            "se_nw2sq": float(vals.std(ddof=1) / math.sqrt(cfg.reps))
            if cfg.reps > 1 else 0.0,
            "q05": float(q05), "q50": float(q50), "q95": float(q95),
            "ref_truncated": ref_trunc, "ref_delta": delta,
            "ref_limit": math.inf,
            "norm_indep": float(vals.mean()) / (2.0 * ll)
            if rho == 0.0 else math.nan,
            "seed": cfg.seed, "reps": cfg.reps, "config_hash": chash,
        })
    return {"two_sample": rows}


def run_limit_compare(cfg: ExperimentConfig) -> dict[str, list[dict]]:
    """Finite-n draws against both limit-law mechanisms, with KS rows."""
    if cfg.experiment != "limit_compare":
        raise DomainError("config experiment must be limit_compare")
    chash = cfg.config_hash()
    rho = float(cfg.rho)
    limit_rows = []
    ks_rows = []
    for n in cfg.ns:
        delta = cfg.delta if cfg.delta is not None else 1.0 / (4.0 * n)
        grid = build_grid(cfg.m, delta)
        finite = _two_sample_draws(cfg, n, "limit_compare")
        samples = {f"finite_n_{n}": finite}
        for mech in MECHANISMS:
            s = sample_limit_law(rho, grid, cfg.reps, mech, cfg.seed,
                                 m_sample=cfg.m_sample,
                                 divergence_demo=cfg.divergence_demo)
            samples[mech] = s.values
            row = s.summary()
            row.update(seed=cfg.seed, reps=cfg.reps, config_hash=chash)
            limit_rows.append(row)
        q05, q50, q95 = np.quantile(finite, [0.05, 0.50, 0.95])
        limit_rows.append({
            "rho": rho, "mechanism": f"finite_n_{n}", "m": cfg.m,
            "delta": delta, "n_draws": cfg.reps, "seed": cfg.seed,
            "mean": float(finite.mean()),
            "variance": float(finite.var(ddof=1)) if cfg.reps > 1 else 0.0,
            "q05": float(q05), "q50": float(q50), "q95": float(q95),
            "reps": cfg.reps, "config_hash": chash,
        })
        pairs = [(f"finite_n_{n}", "gaussian_grid"),
                 (f"finite_n_{n}", "empirical_coupling"),
                 ("gaussian_grid", "empirical_coupling")]
        for la, lb in pairs:
            ks = ks_two_sample(samples[la], samples[lb])
            ks_rows.append({
                "label_a": la, "label_b": lb, "n_a": ks.n_a, "n_b": ks.n_b,
                "ks_stat": ks.statistic, "p_value": ks.p_value,
                "seed": cfg.seed, "reps": cfg.reps, "config_hash": chash,
            })
    return {"limit": limit_rows, "ks": ks_rows}


_EXPANSION_US = tuple(1.0 - 10.0 ** (-j) for j in range(3, 13))
_PSI_XS = (2.0, 3.0, 5.0, 8.0, 12.0, 20.0)
_SCALED_AS = (0.5, 2.0)


def run_expansions(cfg: ExperimentConfig) -> dict[str, list[dict]]:
    """Tail-expansion accuracy tables: exact vs asymptotic with ratios."""
    if cfg.experiment != "expansions":
        raise DomainError("config experiment must be expansions")
    chash = cfg.config_hash()
    rows = []

    def add(kind: str, arg: float, exact: float, asym: float, order: float):
        rows.append({
            "kind": kind, "arg": arg, "exact": exact, "asymptotic": asym,
            "ratio": exact / asym if asym != 0 else math.nan,
            "error_order": order, "seed": cfg.seed, "reps": cfg.reps,
            "config_hash": chash,
        })

    for x in _PSI_XS:
        t = psi_expansion(x)
        add("psi", x, psi(x), t.value, t.relative_error_order)
    for u in _EXPANSION_US:
        t = quantile_tail_expansion(u)
        add("quantile", u, float(std_normal_quantile(u)), t.value,
            t.relative_error_order)
    for u in _EXPANSION_US:
        t = h_tail_expansion(u)
        exact = math.exp(-0.5 * float(std_normal_quantile(u)) ** 2) \
            / math.sqrt(2.0 * math.pi)
        add("h", u, exact, t.value, t.relative_error_order)
    for a in _SCALED_AS:
        for u in _EXPANSION_US:
            s = scaled_tail(a, u)
            add(f"scaled_a={a:g}", u, s.exact, s.asymptotic, s.ratio)
    return {"expansions": rows}


_INTEGRAL_NS = (1e4, 1e8, 1e16, 1e32)


def run_integrals(cfg: ExperimentConfig) -> dict[str, list[dict]]:
    """Certified singular-integral values, including divergence witnesses."""
    if cfg.experiment != "integrals":
        raise DomainError("config experiment must be integrals")
    chash = cfg.config_hash()
    rows = []

    def add(kind: str, key: float, res=None, **override):
        row = {"kind": kind, "n_or_rho": key,
               "value": math.nan, "centered_or_ratio": math.nan,
               "error_estimate": math.nan, "evaluations": 0,
               "seed": cfg.seed, "reps": cfg.reps, "config_hash": chash}
        if res is not None:
            row.update(value=res.value, centered_or_ratio=res.centered_or_ratio,
                       error_estimate=res.abs_error_estimate,
                       evaluations=res.evaluations)
        row.update(override)
        rows.append(row)

    for n in _INTEGRAL_NS:
        add("bickel", n, bickel_integral(n))
    for n in _INTEGRAL_NS:
        add("d1n", n, d1n(n, C=cfg.C, theta=cfg.theta))
    rho = float(cfg.rho) if cfg.rho is not None else 0.6
    table = second_moment_windows(rho)
    for dlt, val in zip(table["deltas"], table["values"]):
        add("truncated_second_moment", rho,
            truncated_second_moment(rho, dlt))
    add("limit_second_moment", rho, value=math.inf,
        centered_or_ratio=table["slopes"][-1])
    return {"integrals": rows}


_MOMENT_KS = (0, 1, 2, 5)


def run_moments(cfg: ExperimentConfig) -> dict[str, list[dict]]:
    """Extreme-order-statistic predictions vs the exact Beta-draw oracle."""
    if cfg.experiment != "moments":
        raise DomainError("config experiment must be moments")
    chash = cfg.config_hash()
    ns = cfg.ns or (10 ** 6,)
    rows = []
    for n in ns:
        for k in _MOMENT_KS:
            mc = sample_extreme(n, k, cfg.reps, cfg.seed)
            for variant in VARIANTS:
                pred = extreme_mean(n, k, variant)
                rows.append({
                    "n": n, "k": k, "variant": variant,
                    "mean_pred": pred.mean_pred, "var_pred": pred.var_pred,
                    "mc_mean": mc.mean, "mc_mean_se": mc.se_mean,
                    "mc_var": mc.variance, "mc_var_se": mc.se_var,
                    "reps": cfg.reps, "seed": cfg.seed,
                    "config_hash": chash,
                })
    return {"moments": rows}


_RUNNERS = {
    "one_sample": run_one_sample,
    "two_sample": run_two_sample,
    "limit_compare": run_limit_compare,
    "expansions": run_expansions,
    "integrals": run_integrals,
    "moments": run_moments,
}


def run_experiment(cfg: ExperimentConfig) -> dict[str, list[dict]]:
    """Dispatch to the runner named by ``cfg.experiment``."""
    return _RUNNERS[cfg.experiment](cfg)


# --------------------------------------------------------------------------
# serialization
# --------------------------------------------------------------------------

def _cell(v) -> str:
    if isinstance(v, bool):
        return str(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))  # shortest round-trip decimal
    return str(v)


def _json_value(v):
    """Native JSON value; non-finite floats become strings."""
    if isinstance(v, (float, np.floating)):
        f = float(v)
        if math.isnan(f):
            return "nan"
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        return f
    if isinstance(v, (bool, str)) or v is None:
        return v
    if isinstance(v, (int, np.integer)):
        return int(v)
    return str(v)


def write_outputs(tables: dict[str, list[dict]], out_dir: str) -> list[str]:
    """Write each table as ``<name>.csv`` plus a mirroring ``<name>.json``.

    CSV bodies are byte-stable: fixed column order from the first row,
    ``\\n`` line endings, shortest round-trip float formatting.  The JSON
    mirror holds the same rows with native types.
    """
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for name, rows in tables.items():
        if not rows:
            continue
        cols = list(rows[0].keys())
        csv_path = os.path.join(out_dir, f"{name}.csv")
        with open(csv_path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(cols)
            for row in rows:
                w.writerow([_cell(row[c]) for c in cols])
        json_path = os.path.join(out_dir, f"{name}.json")
        clean = [{k: _json_value(v) for k, v in row.items()} for row in rows]
        with open(json_path, "w") as fh:
            json.dump({"table": name, "columns": cols, "rows": clean},
                      fh, indent=2, sort_keys=True)
            fh.write("\n")
        written.extend([csv_path, json_path])
    return written
