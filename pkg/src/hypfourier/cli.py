"""Command-line driver: tables, verification suites, and SVG plots.

Three subcommands:

* ``table``  — dump reference values (c-function, spherical function,
  dyadic kernels, exponent predictions) as deterministic CSV;
* ``verify`` — run a suite of measurements from :mod:`.verify`, compare
  each fitted slope or identity error against its prediction, and emit a
  JSON report (exit 0 iff everything passed, 1 on failures, 2 on usage
  errors);
* ``plot``   — render a log-log scaling plot from a CSV of points, or the
  exponent-region diagrams, as self-contained SVG.

Everything is plain stdlib + the package itself; outputs are
reproducible byte-for-byte for a fixed config and seed, except for the
wall-time fields of verification reports, which are measured.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import verify as V
from .errors import DomainError
from .geometry import ModelParams
from .specfun import plancherel_density, spherical_batch
from .transform import DyadicPiece, multiplier_kernel, radial_grid

VERSION = "0.1.0"

_SUITES = (
    "all",
    "projector",
    "resolvent",
    "extension",
    "smallfreq",
    "smoothing",
    "kernels",
    "identities",
)
_TABLE_KINDS = ("c-function", "phi", "kernel", "exponents")
_PLOT_KINDS = ("loglog", "region-diagram")
_QUAD_KEYS = ("r_max", "n_r", "weight_tol")


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    """Validated experiment configuration.

    ``quadrature`` holds optional overrides (keys r_max, n_r, weight_tol)
    for drivers that accept them; unknown keys are rejected so typos fail
    loudly instead of silently running defaults.
    """

    dimensions: tuple[int, ...] = (2, 3)
    lambdas: tuple[float, ...] = V.DEFAULT_LAMBDAS
    p_values: tuple[float, ...] = (3.0, 4.0, 6.0)
    q_values: tuple[float, ...] = (6.0,)
    s_values: tuple[float, ...] = (1.5,)
    tolerance: float = V.DEFAULT_TOLERANCE
    quadrature: dict = field(default_factory=dict)
    output_dir: str = "."
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "dimensions", tuple(int(d) for d in self.dimensions))
        object.__setattr__(self, "lambdas", tuple(float(x) for x in self.lambdas))
        object.__setattr__(self, "p_values", tuple(float(x) for x in self.p_values))
        object.__setattr__(self, "q_values", tuple(float(x) for x in self.q_values))
        object.__setattr__(self, "s_values", tuple(float(x) for x in self.s_values))
        if not self.dimensions or any(d < 2 for d in self.dimensions):
            raise DomainError("dimensions must be integers >= 2")
        if not self.lambdas or any(x <= 0 for x in self.lambdas):
            raise DomainError("lambda grid must be positive")
        if any(p < 1 for p in self.p_values + self.q_values + self.s_values):
            raise DomainError("Lebesgue exponents must be >= 1")
        if not 0 < self.tolerance < 1:
            raise DomainError("tolerance must lie in (0, 1)")
        bad = set(self.quadrature) - set(_QUAD_KEYS)
        if bad:
            raise DomainError(f"unknown quadrature keys: {sorted(bad)}")

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        bad = set(data) - known
        if bad:
            raise DomainError(f"unknown config keys: {sorted(bad)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path: str | Path) -> "RunConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_mapping(json.load(fh))

    def to_mapping(self) -> dict:
        out = dataclasses.asdict(self)
        for key in ("dimensions", "lambdas", "p_values", "q_values", "s_values"):
            out[key] = list(out[key])
        return out


@dataclass
class ResultRecord:
    """One experiment outcome; ``passed`` iff |measured - predicted| <= tolerance."""

    experiment: str
    params: dict
    predicted: float
    measured: float
    residual: float
    tolerance: float
    passed: bool
    wall_time_s: float
    note: str = ""
    error: str = ""

    def to_json_dict(self) -> dict:
        out = dataclasses.asdict(self)
        for key in ("predicted", "measured", "residual"):
            if isinstance(out[key], float) and not math.isfinite(out[key]):
                out[key] = None
        return out


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------
#
# Each job is (experiment id, params, thunk); the thunk returns
# (predicted, measured, tolerance, residual, note).  Records are sorted by
# id before emission so report order never depends on scheduling.


def _fit_job(fit_call, predicted, tol):
    def thunk():
        fit = fit_call()
        return predicted, fit.slope, tol, fit.max_residual, ""

    return thunk


def _value_job(value_call, predicted, tol, note=""):
    def thunk():
        return predicted, float(value_call()), tol, 0.0, note

    return thunk


def _radial_family_predicted(d: int, p: float) -> float:
    # dens * ||Phi||_p^2 grows like lam^{d-1-2d/p} once the small-r bubble
    # dominates the norm (p past 2d/(d-1)); below that the two factors cancel
    return max(0.0, d - 1.0 - 2.0 * d / p)


def _jobs_projector(cfg: RunConfig):
    jobs = []
    for d in cfg.dimensions:
        for p in cfg.p_values:
            jobs.append(
                (
                    f"projector-radial-d{d}-p{p:g}",
                    {"d": d, "p": p, "family": "radial"},
                    _fit_job(
                        lambda d=d, p=p: V.run_projector_scaling(d, p, "radial", cfg.lambdas),
                        _radial_family_predicted(d, p),
                        cfg.tolerance,
                    ),
                )
            )
            jobs.append(
                (
                    f"projector-knapp-d{d}-p{p:g}",
                    {"d": d, "p": p, "family": "knapp"},
                    _fit_job(
                        lambda d=d, p=p: V.run_projector_scaling(d, p, "knapp", cfg.lambdas),
                        (d - 1) * (0.5 - 1.0 / p),
                        cfg.tolerance,
                    ),
                )
            )
        transition = 2.0 * d / (d - 1)
        for p, predicted in (
            ((2.0 + transition) / 2.0, -0.5 * (d - 1)),
            (2.0 * transition, -d / (2.0 * transition)),
        ):
            jobs.append(
                (
                    f"radial-norm-d{d}-p{p:g}",
                    {"d": d, "p": p},
                    _fit_job(
                        lambda d=d, p=p: V.run_radial_norm_scaling(d, p, cfg.lambdas),
                        predicted,
                        0.1,
                    ),
                )
            )
    return jobs


def _jobs_smallfreq(cfg: RunConfig):
    window = (1.0 / 64, 1.0 / 32, 1.0 / 16, 1.0 / 8)
    return [
        (
            f"smallfreq-d{d}-p4",
            {"d": d, "p": 4.0, "Lambdas": list(window)},
            _fit_job(lambda d=d: V.run_smallfreq_check(d, window, 4.0), 2.0, cfg.tolerance),
        )
        for d in cfg.dimensions
    ]


def _jobs_extension(cfg: RunConfig):
    jobs = []
    for d in cfg.dimensions:
        rho = 0.5 * (d - 1)
        for q in cfg.q_values:
            jobs.append(
                (
                    f"extension-constant-d{d}-q{q:g}",
                    {"d": d, "p": 2.0, "q": q, "family": "constant"},
                    _fit_job(
                        lambda d=d, q=q: V.run_extension_lower_bounds(
                            2.0, q, d, cfg.lambdas, family="constant"
                        ),
                        max(0.0, rho - d / q),
                        cfg.tolerance,
                    ),
                )
            )
            jobs.append(
                (
                    f"extension-cap-d{d}-q{q:g}",
                    {"d": d, "p": 2.0, "q": q, "family": "cap"},
                    _fit_job(
                        lambda d=d, q=q: V.run_extension_lower_bounds(
                            2.0, q, d, cfg.lambdas, family="cap"
                        ),
                        rho / 2.0 - rho / q,
                        cfg.tolerance,
                    ),
                )
            )
        jobs.append(
            (
                f"knapp-pointwise-d{d}",
                {"d": d},
                _value_job(
                    lambda d=d: _pointwise_spread(d),
                    1.0,
                    1.0,
                    note="max/min of the fitted pointwise constant across lambda",
                ),
            )
        )
    return jobs


def _pointwise_spread(d: int) -> float:
    out = V.run_knapp_pointwise(d)
    return out["spread"] if out["positive"] else math.inf


def _jobs_smoothing(cfg: RunConfig):
    def thunk():
        out = V.run_smoothing_scaling(3, 3.0, cfg.lambdas)
        return 1.0, out["variation"], 1.0, 0.0, f"gamma_p={out['gamma_p']:.6f}"

    return [("smoothing-d3-p3", {"d": 3, "p": 3.0}, thunk)]


def _jobs_kernels(cfg: RunConfig):
    jobs = []
    for d in cfg.dimensions:
        def caljob(d=d):
            cal, resid = V.check_kernel_vs_inverse(d)
            return 1.0, cal, 1e-6, resid, "single calibration constant vs inverse-transform oracle"

        jobs.append((f"kernel-calibration-d{d}", {"d": d}, caljob))

        def dyjob(d=d):
            out = V.run_dyadic_kernel_bounds(d)
            worst = max(out["C_spread"], out["r_half_spread"])
            note = "" if out["inner_decaying"] else "inner suppression did not decay"
            return 1.0, worst if out["inner_decaying"] else math.inf, 1.0, 0.0, note

        jobs.append((f"dyadic-window-d{d}", {"d": d, "Lambdas": [8, 16, 32]}, dyjob))
    return jobs


def _jobs_identities(cfg: RunConfig):
    jobs = []
    for d in cfg.dimensions:
        jobs.append(
            (
                f"round-trip-d{d}",
                {"d": d},
                _value_job(lambda d=d: V.check_round_trip(d), 0.0, 1e-6),
            )
        )
        jobs.append(
            (
                f"plancherel-d{d}",
                {"d": d},
                _value_job(lambda d=d: V.check_plancherel(d), 0.0, 1e-6),
            )
        )
        jobs.append(
            (
                f"convolution-d{d}",
                {"d": d},
                _value_job(lambda d=d: V.check_convolution(d), 0.0, 1e-6),
            )
        )
    for lam in (2.0, 5.0):
        def opjob(lam=lam):
            worst = max(V.check_operator_identities(lam).values())
            return 0.0, worst, 1e-6, 0.0, "worst of five extension/restriction identities"

        jobs.append((f"operator-identities-lam{lam:g}", {"d": 2, "lam": lam}, opjob))

    def boostjob():
        out = V.run_boost_covariance()
        note = "" if out["weight_monotone"] else "weight integral not monotone"
        val = out["max_rel_error"] if out["weight_monotone"] else math.inf
        return 0.0, val, 1e-4, 0.0, note

    jobs.append(("boost-covariance-d2", {"d": 2}, boostjob))
    return jobs


def _jobs_resolvent(cfg: RunConfig):
    jobs = [
        (
            "resolvent-symbol-identities",
            {},
            _value_job(V.check_resolvent_symbols, 0.0, 1e-12),
        ),
        (
            "resolvent-first-identity-d3",
            {"d": 3},
            _value_job(lambda: V.check_resolvent_first_identity(3), 0.0, 1e-6),
        ),
    ]
    for d in cfg.dimensions:
        for diagram in ("resolvent", "dresolvent"):
            def dualjob(d=d, diagram=diagram):
                bad = 0
                for pt, expo in V.region_grid(d, diagram, 21):
                    mirror = V.RegionPoint(1.0 - pt.inv_q, 1.0 - pt.inv_s, diagram=diagram)
                    mpt, mex = V.classify_region(mirror, d)
                    same = (math.isnan(expo) and math.isnan(mex)) or expo == mex
                    if not same or pt.region != mpt.region:
                        bad += 1
                return 0.0, float(bad), 0.0, 0.0, "duality mismatches over a 21x21 grid"

            jobs.append((f"region-duality-d{d}-{diagram}", {"d": d, "diagram": diagram}, dualjob))

        def contjob(d=d):
            pst = V.stein_tomas_exponent(d)
            gap = abs(
                V.predicted_alpha(pst * (1 - 1e-13), d).exponent
                - V.predicted_alpha(pst * (1 + 1e-13), d).exponent
            )
            return 0.0, gap, 1e-12, 0.0, "alpha branch agreement at p_ST"

        jobs.append((f"alpha-continuity-d{d}", {"d": d}, contjob))

        def recovjob(d=d):
            worst = 0.0
            for q in (2.5, 3.0, 4.0, 6.0, 10.0):
                off = V.predicted_offduality_projector(q / (q - 1.0), q, d).exponent
                worst = max(worst, abs(off - V.predicted_alpha(q, d).exponent))
            return 0.0, worst, 1e-12, 0.0, "s = q' must reproduce the duality-line exponent"

        jobs.append((f"offduality-recovery-d{d}", {"d": d}, recovjob))
    return jobs


_SUITE_BUILDERS = {
    "projector": _jobs_projector,
    "resolvent": _jobs_resolvent,
    "extension": _jobs_extension,
    "smallfreq": _jobs_smallfreq,
    "smoothing": _jobs_smoothing,
    "kernels": _jobs_kernels,
    "identities": _jobs_identities,
}


def run_suite(cfg: RunConfig, suite: str) -> list[ResultRecord]:
    if suite not in _SUITES:
        raise DomainError(f"unknown suite {suite!r}; choose from {_SUITES}")
    names = [s for s in _SUITES if s != "all"] if suite == "all" else [suite]
    jobs = []
    for name in names:
        jobs.extend(_SUITE_BUILDERS[name](cfg))
    records = []
    for exp_id, params, thunk in sorted(jobs, key=lambda j: j[0]):
        t0 = time.perf_counter()
        try:
            predicted, measured, tol, residual, note = thunk()
            records.append(
                ResultRecord(
                    experiment=exp_id,
                    params=params,
                    predicted=float(predicted),
                    measured=float(measured),
                    residual=float(residual),
                    tolerance=float(tol),
                    passed=bool(abs(measured - predicted) <= tol),
                    wall_time_s=time.perf_counter() - t0,
                    note=note,
                )
            )
        except Exception as exc:  # embed, never crash the report
            records.append(
                ResultRecord(
                    experiment=exp_id,
                    params=params,
                    predicted=math.nan,
                    measured=math.nan,
                    residual=math.nan,
                    tolerance=cfg.tolerance,
                    passed=False,
                    wall_time_s=time.perf_counter() - t0,
                    error=f"{type(exc).__name__}: {exc}",
                )
            )
    return records


def report_json(cfg: RunConfig, records: list[ResultRecord]) -> str:
    passed = sum(1 for r in records if r.passed)
    doc = {
        "version": VERSION,
        "config_echo": cfg.to_mapping(),
        "records": [r.to_json_dict() for r in records],
        "summary": {
            "passed": passed,
            "failed": len(records) - passed,
            "wall_time_s": sum(r.wall_time_s for r in records),
        },
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------


def _fmt(x: float) -> str:
    return f"{x:.16e}"


def _table_rows(kind: str, cfg: RunConfig):
    if kind == "c-function":
        yield ["d", "lambda", "abs_c", "density"]
        for d in cfg.dimensions:
            params = ModelParams(d)
            for lam in cfg.lambdas:
                dens = float(plancherel_density(lam, params))
                yield [str(d), _fmt(lam), _fmt(dens**-0.5), _fmt(dens)]
    elif kind == "phi":
        yield ["d", "lambda", "r", "phi"]
        radii = (0.25, 0.5, 1.0, 2.0, 4.0)
        for d in cfg.dimensions:
            params = ModelParams(d)
            for lam in cfg.lambdas:
                vals = spherical_batch(float(lam), np.array(radii), params)
                for r, v in zip(radii, vals):
                    yield [str(d), _fmt(lam), _fmt(r), _fmt(float(v))]
    elif kind == "kernel":
        yield ["d", "Lambda", "k", "r", "abs_kernel"]
        rg = radial_grid(4.5, 48)
        for d in cfg.dimensions:
            params = ModelParams(d)
            for lam in cfg.lambdas:
                if lam <= 1.0:
                    continue
                piece = DyadicPiece(float(lam), 0, "K")
                kern = multiplier_kernel(piece.as_multiplier(), rg, params)
                for r, v in zip(rg.nodes, kern.values):
                    yield [str(d), _fmt(lam), "0", _fmt(float(r)), _fmt(abs(complex(v)))]
    elif kind == "exponents":
        yield ["context", "d", "p", "s", "q", "inv_s", "inv_q", "region", "exponent"]
        for d in cfg.dimensions:
            for p in cfg.p_values:
                pred = V.predicted_alpha(p, d)
                yield [pred.context, str(d), _fmt(p), "", "", "", "", "", _fmt(pred.exponent)]
            for q in cfg.q_values:
                for s in cfg.s_values:
                    pred = V.predicted_offduality_projector(s, q, d)
                    yield [pred.context, str(d), "", _fmt(s), _fmt(q), "", "", "", _fmt(pred.exponent)]
            for diagram in ("resolvent", "dresolvent"):
                for pt, expo in V.region_grid(d, diagram, 11):
                    yield [
                        diagram,
                        str(d),
                        "",
                        "",
                        "",
                        _fmt(pt.inv_s),
                        _fmt(pt.inv_q),
                        pt.region,
                        "" if math.isnan(expo) else _fmt(expo),
                    ]
    else:
        raise DomainError(f"unknown table kind {kind!r}; choose from {_TABLE_KINDS}")


def cmd_table(kind: str, cfg: RunConfig, out_path: str | Path) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in _table_rows(kind, cfg):
        writer.writerow(row)
    try:
        Path(out_path).write_text(buf.getvalue(), encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write table to {out_path}: {exc}") from exc


# ---------------------------------------------------------------------------
# plots
# ---------------------------------------------------------------------------


def _read_csv_points(path: str | Path):
    """Parse (x, y[, predicted]) rows; header optional; errors carry line numbers."""
    xs, ys, predicted = [], [], None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            cells = [c.strip() for c in line.split(",")]
            try:
                vals = [float(c) for c in cells if c != ""]
            except ValueError:
                if lineno == 1:
                    continue  # header row
                raise DomainError(f"{path}: malformed CSV at line {lineno}: {line!r}")
            if len(vals) < 2:
                raise DomainError(f"{path}: need at least two columns at line {lineno}")
            xs.append(vals[0])
            ys.append(vals[1])
            if len(vals) >= 3:
                predicted = vals[2]
    if len(xs) < 2:
        raise DomainError(f"{path}: need at least two data rows for a scaling plot")
    return np.array(xs), np.array(ys), predicted


_SVG_HEAD = (
    '<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
    'viewBox="0 0 {w} {h}" font-family="Helvetica, Arial, sans-serif">\n'
    '<rect width="{w}" height="{h}" fill="white"/>\n'
)


def _svg_loglog(xs: np.ndarray, ys: np.ndarray, predicted: float | None) -> str:
    fit = V.fit_scaling_exponent(list(zip(xs.tolist(), ys.tolist())))
    ref_slope = fit.slope if predicted is None else float(predicted)
    lx, ly = np.log10(xs), np.log10(ys)
    w, h, m = 560, 420, 60.0
    sx = lambda v: m + (v - lx.min()) / max(np.ptp(lx), 1e-12) * (w - 2 * m)
    sy = lambda v: h - m - (v - ly.min()) / max(np.ptp(ly), 1e-12) * (h - 2 * m)
    parts = [_SVG_HEAD.format(w=w, h=h)]
    parts.append(
        f'<g data-fitted-slope="{fit.slope:.17g}" data-predicted-slope="{ref_slope:.17g}" '
        f'data-max-residual="{fit.max_residual:.17g}">\n'
    )
    parts.append(
        f'<line x1="{m}" y1="{h-m}" x2="{w-m}" y2="{h-m}" stroke="black"/>'
        f'<line x1="{m}" y1="{m}" x2="{m}" y2="{h-m}" stroke="black"/>\n'
    )
    # fitted line through the least-squares intercept
    xf = np.array([lx.min(), lx.max()])
    yf = fit.slope * xf + fit.intercept
    parts.append(
        f'<line x1="{sx(xf[0]):.2f}" y1="{sy(yf[0]):.2f}" x2="{sx(xf[1]):.2f}" '
        f'y2="{sy(yf[1]):.2f}" stroke="#1965b0" stroke-width="1.5" data-name="fitted"/>\n'
    )
    # reference line with the predicted slope, anchored at the first point
    yr = ly[0] + ref_slope * (xf - lx[0])
    parts.append(
        f'<line x1="{sx(xf[0]):.2f}" y1="{sy(yr[0]):.2f}" x2="{sx(xf[1]):.2f}" '
        f'y2="{sy(yr[1]):.2f}" stroke="#dc050c" stroke-dasharray="6 4" data-name="reference"/>\n'
    )
    for px, py in zip(lx, ly):
        parts.append(f'<circle cx="{sx(px):.2f}" cy="{sy(py):.2f}" r="4" fill="#4eb265"/>\n')
    parts.append(
        f'<text x="{w/2:.0f}" y="{h-18:.0f}" text-anchor="middle" font-size="13">'
        f"fitted slope {fit.slope:.4f}, reference {ref_slope:.4f}</text>\n"
    )
    parts.append("</g>\n</svg>\n")
    return "".join(parts)


def _region_label_positions(d: int, diagram: str):
    """Representative centroids of the classified upper-half regions and their mirrors."""
    sums: dict[str, list] = {}
    for a in np.linspace(0.02, 0.98, 49):
        for b in np.linspace(0.02, 0.98, 49):
            if a + b < 1.0:
                continue
            pt, expo = V.classify_region(V.RegionPoint(float(a), float(b), diagram=diagram), d)
            if pt.region and pt.region != "outside":
                sums.setdefault(pt.region, []).append((a, b))
    out = []
    for label in sorted(sums):
        arr = np.array(sums[label])
        ca, cb = arr.mean(axis=0)
        out.append((label, ca, cb, False))
        out.append((label, 1.0 - cb, 1.0 - ca, True))
    return out


def _svg_region_panel(d: int, diagram: str, ox: float, scatter=None) -> str:
    """One unit-square panel at x-offset ox; 320px square plus margins."""
    size, m = 320.0, 50.0
    X = lambda a: ox + m + a * size
    Y = lambda b: m + size - b * size

    def seg(a1, b1, a2, b2, color, name, eq, dashed=False, width=2.0):
        dash = ' stroke-dasharray="5 4"' if dashed else ""
        eq = eq.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
        return (
            f'<line x1="{X(a1):.2f}" y1="{Y(b1):.2f}" x2="{X(a2):.2f}" y2="{Y(b2):.2f}" '
            f'stroke="{color}" stroke-width="{width}"{dash} data-name="{name}" data-eq="{eq}"/>\n'
        )

    gap = 2.0 / d if diagram == "resolvent" else 1.0 / d
    by = (d - 1) / (2.0 * d)
    ax = (d + 1) / (2.0 * d)
    parts = [
        f'<g data-diagram="{diagram}" data-d="{d}">\n',
        f'<rect x="{X(0):.2f}" y="{Y(1):.2f}" width="{size}" height="{size}" '
        'fill="none" stroke="#bbbbbb"/>\n',
    ]
    # blue admissibility edges (and their duals, which coincide as a set)
    parts.append(seg(0.5, 0.0, 0.5, 0.5, "#1965b0", "admissible-edge", "1/s = 1/2, 1/q <= 1/2"))
    parts.append(seg(0.5, 0.5, 1.0, 0.5, "#1965b0", "admissible-edge", "1/q = 1/2, 1/s >= 1/2"))
    # green gap line (self-dual)
    eq = f"1/q - 1/s = {'2/d' if diagram == 'resolvent' else '1/d'}"
    parts.append(seg(gap, 0.0, 1.0, 1.0 - gap, "#4eb265", "green", eq))
    # yellow horizontal and its dual vertical
    parts.append(seg(0.0, by, 1.0, by, "#f7cb45", "yellow", "1/q = (d-1)/(2d)"))
    parts.append(seg(ax, 0.0, ax, 1.0, "#f7cb45", "yellow-dual", "1/s = (d+1)/(2d)"))
    # purple dividing line and its dual
    #   (d+1)/s + (d-1)/q = d+1  <->  a from 1 at b=0 to (d-1+2... solve
    a_at_b1 = (d + 1.0 - (d - 1.0)) / (d + 1.0)  # a where b = 1
    parts.append(
        seg(1.0, 0.0, a_at_b1, 1.0, "#882e72", "purple", "(d+1)/s + (d-1)/q = d+1")
    )
    b_at_a0 = (d - 1.0) / (d + 1.0)  # dual line 1/s + (d+1)/(d-1) 1/q = 1 at a = 0
    parts.append(
        seg(0.0, b_at_a0, 1.0, 0.0, "#882e72", "purple-dual", "1/s + (d+1)/(d-1) 1/q = 1")
    )
    # red duality line
    parts.append(seg(0.0, 1.0, 1.0, 0.0, "#dc050c", "red", "1/s + 1/q = 1", dashed=True))
    if scatter:
        for a, b, region in scatter:
            parts.append(
                f'<circle cx="{X(a):.2f}" cy="{Y(b):.2f}" r="2.5" fill="#7bafde" '
                f'data-region="{region}"/>\n'
            )
    # excluded corner
    parts.append(
        f'<circle cx="{X(0.5):.2f}" cy="{Y(0.5):.2f}" r="5" fill="white" stroke="black" '
        'stroke-width="1.5" data-name="excluded-corner"/>\n'
    )
    for label, a, b, is_dual in _region_label_positions(d, diagram):
        parts.append(
            f'<text x="{X(a):.2f}" y="{Y(b):.2f}" text-anchor="middle" font-size="16" '
            f'font-weight="bold" data-region="{label}" data-dual="{str(is_dual).lower()}">'
            f"{label}</text>\n"
        )
    parts.append(
        f'<text x="{X(0.5):.2f}" y="{m + size + 34:.0f}" text-anchor="middle" '
        f'font-size="13">{diagram}, d = {d}</text>\n'
    )
    parts.append("</g>\n")
    return "".join(parts)


def _svg_region_diagram(d: int, scatter_rows=None) -> str:
    w, h = 2 * (320 + 100), 470
    parts = [_SVG_HEAD.format(w=w, h=h)]
    for i, diagram in enumerate(("resolvent", "dresolvent")):
        scatter = None
        if scatter_rows:
            scatter = [
                (a, b, region)
                for ctx, dd, a, b, region in scatter_rows
                if ctx == diagram and dd == d and region and region != "outside"
            ]
        parts.append(_svg_region_panel(d, diagram, i * 420.0, scatter))
    parts.append("</svg>\n")
    return "".join(parts)


def _read_region_scatter(path: str | Path):
    """Pull classified (context, d, inv_s, inv_q, region) rows from an exponents CSV."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "context" not in reader.fieldnames:
            return []
        for rec in reader:
            if rec.get("context") in ("resolvent", "dresolvent") and rec.get("inv_s"):
                rows.append(
                    (
                        rec["context"],
                        int(rec["d"]),
                        float(rec["inv_s"]),
                        float(rec["inv_q"]),
                        rec.get("region", ""),
                    )
                )
    return rows


def cmd_plot(kind: str, input_csv: str | None, cfg: RunConfig, out_path: str | Path) -> None:
    if kind == "loglog":
        if input_csv is None:
            raise DomainError("loglog plots need an input CSV of (x, y[, predicted]) rows")
        xs, ys, predicted = _read_csv_points(input_csv)
        svg = _svg_loglog(xs, ys, predicted)
    elif kind == "region-diagram":
        scatter = _read_region_scatter(input_csv) if input_csv else None
        svg = _svg_region_diagram(cfg.dimensions[0], scatter)
    else:
        raise DomainError(f"unknown plot kind {kind!r}; choose from {_PLOT_KINDS}")
    try:
        Path(out_path).write_text(svg, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write plot to {out_path}: {exc}") from exc


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hypfourier",
        description="tables, verification suites, and plots for the hyperbolic "
        "Fourier toolkit",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--d", action="append", type=int, help="dimension (repeatable)")
        p.add_argument(
            "--lambda",
            action="append",
            type=float,
            dest="lambdas",
            help="frequency grid point (repeatable)",
        )
        p.add_argument("--p", action="append", type=float, help="Lebesgue p (repeatable)")
        p.add_argument("--q", action="append", type=float, help="Lebesgue q (repeatable)")
        p.add_argument("--out", help="output path")
        p.add_argument("--tolerance", type=float, help="slope tolerance")
        p.add_argument("--seed", type=int, help="seed echoed into reports")

    pt = sub.add_parser("table", help="write a reference-value CSV")
    pt.add_argument("kind", choices=_TABLE_KINDS)
    common(pt)

    pv = sub.add_parser("verify", help="run measurement suites against predictions")
    pv.add_argument("--suite", choices=_SUITES, default="all")
    common(pv)

    pp = sub.add_parser("plot", help="render an SVG plot")
    pp.add_argument("kind", choices=_PLOT_KINDS)
    pp.add_argument("input", nargs="?", help="input CSV (required for loglog)")
    common(pp)
    return ap


def _config_from_args(args) -> RunConfig:
    cfg = RunConfig.from_json(args.config) if args.config else RunConfig()
    overrides = {}
    if args.d:
        overrides["dimensions"] = tuple(args.d)
    if args.lambdas:
        overrides["lambdas"] = tuple(args.lambdas)
    if args.p:
        overrides["p_values"] = tuple(args.p)
    if args.q:
        overrides["q_values"] = tuple(args.q)
    if args.tolerance is not None:
        overrides["tolerance"] = args.tolerance
    if args.seed is not None:
        overrides["seed"] = args.seed
    return dataclasses.replace(cfg, **overrides) if overrides else cfg


def main(argv: list[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        cfg = _config_from_args(args)
    except SystemExit as exc:
        return 2 if exc.code else 0
    except (DomainError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    try:
        if args.command == "table":
            out = args.out or f"{args.kind}.csv"
            cmd_table(args.kind, cfg, out)
            print(out)
            return 0
        if args.command == "plot":
            out = args.out or f"{args.kind}.svg"
            cmd_plot(args.kind, args.input, cfg, out)
            print(out)
            return 0
        records = run_suite(cfg, args.suite)
        text = report_json(cfg, records)
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        for rec in records:
            status = "PASS" if rec.passed else "FAIL"
            print(f"{status} {rec.experiment}", file=sys.stderr)
        return 0 if all(r.passed for r in records) else 1
    except (DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
