"""Command-line surface: instance reports, figure-data export, K-user reports,
and deterministic verification suites.

Documents go to stdout (JSON for ``bounds``/``kuser``, CSV for ``figure``,
plain lines for ``verify``); warnings go to stderr.  Identical flags and
seed produce byte-identical output.  Exit codes: 0 success, 1 failed verify
suite, 2 invalid flags, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import achievable, gap, lp, upper_bounds
from .achievable import SearchConfig
from .model import (
    ChannelSpec,
    KStarSpec,
    NonReciprocalSpec,
    canonicalize,
    snr_db_to_power,
)

_SIG_DIGITS = 12


@dataclass(frozen=True)
class SweepConfig:
    """One figure sweep: the moving axis, its range, and fixed parameters."""

    axis: str  # "snr_db" | "h2" | "h3"
    start: float
    stop: float
    step: float
    fixed: dict
    mode: str = "nonrestricted"
    output_format: str = "csv"
    seed: int = 0
    fdf_step: float = achievable.DEFAULT_FDF_STEP
    v2_starts: int = 8

    def __post_init__(self) -> None:
        if self.axis not in ("snr_db", "h2", "h3"):
            raise ValueError(f"unknown sweep axis {self.axis!r}")
        if self.output_format not in ("json", "csv"):
            raise ValueError(f"unknown output format {self.output_format!r}")
        if self.step <= 0:
            raise ValueError("step must be > 0")
        if self.start > self.stop:
            raise ValueError("start must not exceed stop")
        if self.fdf_step <= 0 or self.v2_starts < 0:
            raise ValueError("search resolutions must be positive")

    def points(self) -> list[float]:
        count = int(round((self.stop - self.start) / self.step))
        return [self.start + k * self.step for k in range(count + 1)]

    def search(self) -> SearchConfig:
        return SearchConfig(
            random_starts=self.v2_starts,
            shrink_rounds=4,
            passes_per_round=1,
            ascent_from=2,
            seed=self.seed,
        )


def _fmt(x: float) -> str:
    return f"{x:.{_SIG_DIGITS}g}"


def _jsonable(obj):
    """Round floats to 12 significant digits; keep JSON strict (no Infinity)."""
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        if math.isnan(obj):
            return "nan"
        return float(_fmt(obj))
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _emit_json(doc: dict) -> None:
    print(json.dumps(_jsonable(doc), indent=2))


def _resolve_power(args, parser: argparse.ArgumentParser) -> float:
    if (args.power is None) == (args.snr_db is None):
        parser.error("specify exactly one of --power or --snr-db")
    return args.power if args.power is not None else snr_db_to_power(args.snr_db)


# --------------------------------------------------------------------------
# bounds
# --------------------------------------------------------------------------

def cmd_bounds(args, parser) -> int:
    power = _resolve_power(args, parser)
    if power < 0:
        parser.error("--power must be >= 0")
    spec, perm = canonicalize((args.h1, args.h2, args.h3), power)
    if perm != (1, 2, 3):
        print(
            f"warning: gains reordered to {spec.gains} (permutation {perm})",
            file=sys.stderr,
        )
    search = SearchConfig(
        random_starts=args.v2_starts,
        seed=args.seed,
    )
    upper, lower, report = gap.full_report(
        spec, args.mode, search=search, fdf_step=args.fdf_step, include_lp=True
    )
    doc = {
        "spec": {
            "h1": spec.h1,
            "h2": spec.h2,
            "h3": spec.h3,
            "power": spec.P,
            "mode": args.mode,
            "permutation": list(perm),
        },
        "upper": {
            "cutset_sum": upper.cutset_sum,
            "genie_sum": upper.genie_sum,
            "restricted_sum": upper.restricted_sum,
            "cutset_lp": upper.cutset_lp,
            "genie_lp": upper.genie_lp,
            "best": upper.best,
        },
        "lower": {
            "cdf_v1": lower.cdf_v1,
            "cdf_v2": lower.cdf_v2,
            "fdf": lower.fdf,
            "best": lower.best,
            "witnesses": {
                "fdf_allocation": {
                    "alpha12": lower.fdf_allocation.alpha12,
                    "alpha23": lower.fdf_allocation.alpha23,
                    "alpha31": lower.fdf_allocation.alpha31,
                },
                "downlink_powers": dict(
                    zip(
                        ("p12", "p13", "p21", "p23", "p31", "p32"),
                        lower.downlink_powers.as_tuple(),
                    )
                ),
            },
        },
        "gap": report.as_dict(),
    }
    _emit_json(doc)
    return 0


# --------------------------------------------------------------------------
# figures
# --------------------------------------------------------------------------

def cmd_figure(args, parser) -> int:
    if args.id == 4:
        sweep = SweepConfig(
            axis="snr_db", start=args.start, stop=args.stop, step=args.step,
            fixed={"h1": 1.0, "h2": 0.8, "h3": 0.6},
            seed=args.seed, fdf_step=args.fdf_step, v2_starts=args.v2_starts,
        )
        return _figure_bounds_vs_snr(sweep)
    if args.id == 5:
        sweep = SweepConfig(
            axis="h2", start=args.grid_step, stop=1.0, step=args.grid_step,
            fixed={"h1": 1.0, "power": args.power}, mode="restricted",
            seed=args.seed, fdf_step=args.fdf_step, v2_starts=args.v2_starts,
        )
        return _figure_gap_surface(sweep)
    if args.id == 6:
        sweep = SweepConfig(
            axis="snr_db", start=args.start, stop=args.stop, step=args.step,
            fixed={"h1": 1.0, "h2": 1.0, "h3": 1.0},
            seed=args.seed, fdf_step=args.fdf_step, v2_starts=args.v2_starts,
        )
        return _figure_symmetric(sweep)
    if args.id == 7:
        sweep = SweepConfig(
            axis="h2", start=0.1 + args.grid_step, stop=1.0,
            step=args.grid_step, fixed={"power": args.power},
            seed=args.seed, fdf_step=args.fdf_step, v2_starts=args.v2_starts,
        )
        return _figure_nonreciprocal(sweep)
    parser.error(f"unknown figure id {args.id}")
    return 2


def _figure_bounds_vs_snr(sweep: SweepConfig) -> int:
    """Upper/lower bounds against SNR for the reference gains (1, 0.8, 0.6)."""
    search = sweep.search()
    gains = (sweep.fixed["h1"], sweep.fixed["h2"], sweep.fixed["h3"])
    print("snr_db,cutset,genie,cdf_v1,cdf_v2,fdf")
    for snr_db in sweep.points():
        spec = ChannelSpec(*gains, snr_db_to_power(snr_db))
        v2, _ = achievable.cdf_v2_optimize(spec, search)
        fdf, _ = achievable.fdf_optimize(spec, sweep.fdf_step)
        row = (
            snr_db,
            upper_bounds.cutset_sum_upper(spec),
            upper_bounds.genie_sum_upper(spec),
            achievable.cdf_v1_sum_rate_closed(spec),
            v2,
            fdf,
        )
        print(",".join(_fmt(v) for v in row))
    return 0


def _figure_gap_surface(sweep: SweepConfig) -> int:
    """Gap over the (h2, h3) triangle at 10 dB with the strongest gain fixed at 1.

    Uses the restricted-encoder upper bound; that is the regime in which the
    gap stays below one bit over the whole triangle.
    """
    search = sweep.search()
    values = [round(v, 10) for v in sweep.points()]
    print("h2,h3,gap")
    for h2 in values:
        for h3 in values:
            if h3 > h2:
                continue
            spec = ChannelSpec(sweep.fixed["h1"], h2, h3, sweep.fixed["power"])
            report = gap.additive_gap(
                spec, sweep.mode, search=search, fdf_step=sweep.fdf_step
            )
            print(f"{_fmt(h2)},{_fmt(h3)},{_fmt(report.additive_gap)}")
    return 0


def _figure_symmetric(sweep: SweepConfig) -> int:
    """Best upper and lower bounds of the equal-gain channel against SNR."""
    print("snr_db,upper_min,lower_max")
    for snr_db in sweep.points():
        rep = gap.symmetric_report(snr_db_to_power(snr_db), fdf_step=sweep.fdf_step)
        print(f"{_fmt(snr_db)},{_fmt(rep.upper)},{_fmt(rep.lower)}")
    return 0


def _figure_nonreciprocal(sweep: SweepConfig) -> int:
    """Gap of the non-reciprocal family over (h_r2, h_2r) at 30 dB.

    Grid points that violate the example ordering keep their row with an
    empty gap field so the output stays rectangular.
    """
    values = [w for w in (round(v, 10) for v in sweep.points()) if 0.1 < w < 1.0]
    print("h_r2,h_2r,gap")
    for hr2 in values:
        for h2r in values:
            if 1.0 > h2r > hr2 > 0.1:
                nrspec = NonReciprocalSpec(
                    (1.0, h2r, 0.1), (1.0, hr2, 0.1), sweep.fixed["power"]
                )
                rep = gap.nr_example_report(nrspec)
                print(f"{_fmt(hr2)},{_fmt(h2r)},{_fmt(rep.gap)}")
            else:
                print(f"{_fmt(hr2)},{_fmt(h2r)},")
    return 0


# --------------------------------------------------------------------------
# K users
# --------------------------------------------------------------------------

def cmd_kuser(args, parser) -> int:
    if args.gains is not None:
        try:
            gains = tuple(float(g) for g in args.gains.split(","))
        except ValueError:
            parser.error("--gains must be a comma-separated list of numbers")
    elif args.k is not None and args.gain is not None:
        gains = (args.gain,) * args.k
    else:
        parser.error("specify --gains or both --k and --gain")
    if len(gains) < 3:
        parser.error("at least three users are required")
    power = _resolve_power(args, parser)
    ordered = tuple(sorted(gains, key=lambda g: -abs(g)))
    if ordered != gains:
        print(f"warning: gains reordered to {ordered}", file=sys.stderr)
    kspec = KStarSpec(ordered, power)
    report = gap.kuser_gap(kspec)
    doc = {
        "spec": {"gains": list(kspec.gains), "K": kspec.K, "power": kspec.P},
        "upper": report.upper_used[1],
        "lower": report.lower_used[1],
        "gap": report.additive_gap,
        "guarantee": report.guarantee,
        "regime": report.regime,
        "satisfied": report.guarantee_satisfied,
    }
    _emit_json(doc)
    return 0


# --------------------------------------------------------------------------
# verification suites
# --------------------------------------------------------------------------

@dataclass
class SuiteResult:
    name: str
    passed: bool
    lines: list[str]

    def render(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        body = "".join(f"\n  {line}" for line in self.lines)
        return f"suite={self.name} status={status}{body}"


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def _random_specs(rng: np.random.Generator, count: int, p_lo: float, p_hi: float):
    for _ in range(count):
        g = np.sort(1.0 - rng.random(3))[::-1]  # gains in (0, 1], descending
        power = 10.0 ** rng.uniform(math.log10(p_lo), math.log10(p_hi))
        yield ChannelSpec(float(g[0]), float(g[1]), float(g[2]), float(power))


def _random_bounded_lp(rng: np.random.Generator) -> lp.LinearProgram:
    n = int(rng.integers(1, 7))
    m = int(rng.integers(1, 7))
    rows = []
    for _ in range(m):
        coeffs = rng.random(n) * (rng.random(n) < 0.7)
        rows.append((tuple(float(c) for c in coeffs), float(rng.uniform(0.05, 4.0))))
    # A full-support row keeps the region bounded whatever else was drawn.
    rows.append(((1.0,) * n, float(rng.uniform(0.5, 8.0))))
    objective = tuple(float(c) for c in rng.uniform(-0.5, 1.5, n))
    return lp.LinearProgram(objective=objective, rows=tuple(rows), n=n)


def run_lp_suite(draws: int, seed: int) -> SuiteResult:
    """Simplex vs. vertex enumeration on random bounded programs and on the
    variant-1 rate polytopes of random channels."""
    rng = _rng(seed)
    worst_random = 0.0
    infeasible_points = 0
    for _ in range(draws):
        program = _random_bounded_lp(rng)
        sol = lp.solve(program)
        _, best = lp.enumerate_vertices(program)
        if sol.status != "optimal" or best is None:
            infeasible_points += 1
            continue
        worst_random = max(worst_random, abs(sol.value - best))
        if not lp.check_feasible(program, sol.point):
            infeasible_points += 1
    worst_v1 = 0.0
    for spec in _random_specs(rng, draws, 1e-2, 1e4):
        program = lp.from_rate_constraints(achievable.cdf_v1_constraints(spec))
        sol = lp.solve(program)
        _, best = lp.enumerate_vertices(program)
        if sol.status != "optimal" or best is None:
            infeasible_points += 1
            continue
        worst_v1 = max(worst_v1, abs(sol.value - best))
    passed = worst_random <= 1e-9 and worst_v1 <= 1e-9 and infeasible_points == 0
    return SuiteResult(
        name="lp",
        passed=passed,
        lines=[
            f"check=random_oracle worst={_fmt(worst_random)} limit=1e-09",
            f"check=cdf_v1_oracle worst={_fmt(worst_v1)} limit=1e-09",
            f"check=solver_anomalies count={infeasible_points} limit=0",
        ],
    )


def run_gap_suite(draws: int, seed: int) -> SuiteResult:
    """Regime guarantees and bound ordering over random channel draws."""
    rng = _rng(seed)
    worst_high = worst_low = worst_restricted = worst_ratio = -math.inf
    min_margin = math.inf
    worst_closed_vs_lp = 0.0
    for spec in _random_specs(rng, draws, 1e-3, 1e6):
        upper_n = upper_bounds.best_upper(spec, "nonrestricted", include_lp=False)
        upper_r = min(upper_n.cutset_sum, upper_n.restricted_sum)
        lower = achievable.lower_report(spec, search=gap.SWEEP_SEARCH)
        gap_n = upper_n.best - lower.best
        gap_r = upper_r - lower.best
        min_margin = min(min_margin, gap_r)
        if spec.h2 ** 2 * spec.P > 0.5:
            worst_high = max(worst_high, gap_n)
            worst_restricted = max(worst_restricted, gap_r)
        else:
            worst_low = max(worst_low, gap_n)
        worst_ratio = max(worst_ratio, gap.multiplicative_ratio(spec))
        worst_closed_vs_lp = max(
            worst_closed_vs_lp,
            abs(
                achievable.cdf_v1_sum_rate_closed(spec)
                - achievable.cdf_v1_sum_rate_lp(spec)
            ),
        )
    checks = [
        ("high_power_gap", worst_high, gap.HIGH_POWER_GUARANTEE + gap.GUARANTEE_TOL),
        ("low_power_gap", worst_low, gap.LOW_POWER_GUARANTEE + gap.GUARANTEE_TOL),
        ("restricted_gap", worst_restricted, gap.RESTRICTED_GUARANTEE + gap.GUARANTEE_TOL),
        ("multiplicative_ratio", worst_ratio, 4.0 + gap.GUARANTEE_TOL),
        ("closed_vs_lp", worst_closed_vs_lp, 1e-9),
        ("ordering_violation", -min_margin, 1e-9),  # lower never above upper
    ]
    passed = all(value <= limit for _, value, limit in checks) if draws > 0 else True
    lines = [
        f"check={name} worst={_fmt(value)} limit={_fmt(limit)}"
        for name, value, limit in checks
    ]
    return SuiteResult(name="gap", passed=passed, lines=lines)


def run_sym_suite(_draws: int, _seed: int) -> SuiteResult:
    """Symmetric-channel gap over the dB grid [-20, 40] in 0.5 dB steps."""
    worst = -math.inf
    worst_db = 0.0
    for k in range(121):
        snr_db = -20.0 + 0.5 * k
        rep = gap.symmetric_report(snr_db_to_power(snr_db))
        if rep.gap.additive_gap > worst:
            worst = rep.gap.additive_gap
            worst_db = snr_db
    spot = gap.symmetric_report(1.0)
    spot_ok = abs(spot.upper - 1.5) <= 1e-9 and abs(spot.lower - 1.0) <= 1e-9
    passed = worst <= gap.SYMMETRIC_GUARANTEE + gap.GUARANTEE_TOL and spot_ok
    return SuiteResult(
        name="sym",
        passed=passed,
        lines=[
            f"check=symmetric_gap worst={_fmt(worst)} at_db={_fmt(worst_db)} "
            f"limit={_fmt(gap.SYMMETRIC_GUARANTEE + gap.GUARANTEE_TOL)}",
            f"check=spot_p1 upper={_fmt(spot.upper)} lower={_fmt(spot.lower)} ok={spot_ok}",
        ],
    )


def run_kuser_suite(draws: int, seed: int) -> SuiteResult:
    """K-user guarantee 2 log2(K-1) over random sorted gain vectors, K = 3..8."""
    rng = _rng(seed)
    per_k = max(1, draws // 100) if draws > 0 else 0
    worst_excess = -math.inf
    min_margin = math.inf
    for K in range(3, 9):
        for _ in range(per_k):
            g = np.sort(1.0 - rng.random(K))[::-1]
            # Power chosen so the guarantee regime g2^2 P > 1/2 always holds.
            power = (0.5 + 10.0 ** rng.uniform(0.0, 4.0)) / (g[1] * g[1])
            kspec = KStarSpec(tuple(float(v) for v in g), float(power))
            report = gap.kuser_gap(kspec)
            worst_excess = max(worst_excess, report.additive_gap - report.guarantee)
            min_margin = min(min_margin, report.additive_gap)
    checks = [
        ("guarantee_excess", worst_excess, gap.GUARANTEE_TOL),
        ("ordering_violation", -min_margin, 1e-9),
    ]
    passed = (per_k == 0) or all(value <= limit for _, value, limit in checks)
    lines = [
        f"check={name} worst={_fmt(value)} limit={_fmt(limit)}"
        for name, value, limit in checks
    ]
    return SuiteResult(name="kuser", passed=passed, lines=lines)


_SUITES = {
    "lp": run_lp_suite,
    "gap": run_gap_suite,
    "sym": run_sym_suite,
    "kuser": run_kuser_suite,
}


def cmd_verify(args, parser) -> int:
    names = list(_SUITES) if args.suite == "all" else [args.suite]
    all_passed = True
    for name in names:
        result = _SUITES[name](args.draws, args.seed)
        print(result.render())
        all_passed &= result.passed
    return 0 if all_passed else 1


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def _add_power_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--power", type=float, default=None, help="linear transmit power")
    p.add_argument("--snr-db", type=float, default=None, help="SNR in dB (power = 10^(dB/10))")


def _add_search_flags(p: argparse.ArgumentParser, v2_default: int) -> None:
    p.add_argument("--fdf-step", type=float, default=achievable.DEFAULT_FDF_STEP,
                   help="simplex grid step of the block-allocation search")
    p.add_argument("--v2-starts", type=int, default=v2_default,
                   help="random starts of the relay power-split search")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized searches")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ychannel",
        description="Sum-capacity bounds and gap certificates for three-user relay networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_bounds = sub.add_parser("bounds", help="all bounds and gaps for one instance")
    p_bounds.add_argument("--h1", type=float, required=True)
    p_bounds.add_argument("--h2", type=float, required=True)
    p_bounds.add_argument("--h3", type=float, required=True)
    _add_power_flags(p_bounds)
    p_bounds.add_argument("--mode", choices=upper_bounds.MODES, default="nonrestricted")
    _add_search_flags(p_bounds, v2_default=32)

    p_fig = sub.add_parser("figure", help="CSV data for the reference figures")
    p_fig.add_argument("id", type=int, choices=(4, 5, 6, 7), help="figure number")
    p_fig.add_argument("--start", type=float, default=None, help="SNR axis start (dB)")
    p_fig.add_argument("--stop", type=float, default=None, help="SNR axis stop (dB)")
    p_fig.add_argument("--step", type=float, default=None, help="SNR axis step (dB)")
    p_fig.add_argument("--grid-step", type=float, default=0.05, help="gain grid step")
    p_fig.add_argument("--power", type=float, default=None, help="override the figure's power")
    _add_search_flags(p_fig, v2_default=8)

    p_kuser = sub.add_parser("kuser", help="K-user star-channel report")
    p_kuser.add_argument("--gains", type=str, default=None, help="comma-separated gains")
    p_kuser.add_argument("--k", type=int, default=None, help="user count for equal gains")
    p_kuser.add_argument("--gain", type=float, default=None, help="common gain with --k")
    _add_power_flags(p_kuser)

    p_verify = sub.add_parser("verify", help="run the deterministic verification suites")
    p_verify.add_argument("--draws", type=int, default=10_000)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--suite", choices=("all", "lp", "gap", "sym", "kuser"), default="all")

    return parser


_FIGURE_DEFAULTS = {
    4: {"start": -10.0, "stop": 50.0, "step": 1.0, "power": None},
    5: {"start": None, "stop": None, "step": None, "power": 10.0},
    6: {"start": -20.0, "stop": 40.0, "step": 0.5, "power": None},
    7: {"start": None, "stop": None, "step": None, "power": 1000.0},
}


def _apply_figure_defaults(args, parser) -> None:
    defaults = _FIGURE_DEFAULTS[args.id]
    for name in ("start", "stop", "step", "power"):
        if getattr(args, name) is None:
            setattr(args, name, defaults[name])
    if args.id in (4, 6) and args.step is not None and args.step <= 0:
        parser.error("--step must be > 0")
    if args.grid_step <= 0 or args.grid_step >= 1:
        parser.error("--grid-step must lie in (0, 1)")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "bounds":
            return cmd_bounds(args, parser)
        if args.command == "figure":
            _apply_figure_defaults(args, parser)
            return cmd_figure(args, parser)
        if args.command == "kuser":
            return cmd_kuser(args, parser)
        if args.command == "verify":
            return cmd_verify(args, parser)
    except ValueError as exc:
        parser.error(str(exc))
    except (ArithmeticError, lp.SimplexStallError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 2


if __name__ == "__main__":
    sys.exit(main())
