"""Verification gate: eleven numbered criteria, each a bundle of named
checks with {threshold, observed, pass} semantics.

Criteria always run on the canonical configuration (the one every golden
number was frozen against); user overrides only steer where results are
written.  A criterion passes iff all of its checks pass; the final criterion
additionally requires byte-identical CSV output across two fresh runs and
every earlier criterion to pass — so a genuine upstream failure cascades
into it by design rather than being hidden.
"""

from dataclasses import dataclass, field

import numpy as np

from . import moments as mo
from . import spectral as sp
from .config import build_config
from .output import ResultBundle, render_csv
from .wavepacket import SuperpositionSpec, WindowSpec


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    checks: dict
    notes: list = field(default_factory=list)

    def failed_checks(self):
        return [k for k, v in self.checks.items() if not v["pass"]]


# criterion number -> (name, [(experiment, verdict), ...])
CRITERIA_MAP = [
    (1, "paradox-core", [
        ("position-density", "alpha_invariance_pointwise"),
        ("momentum-density", "l1_gap_across_alphas"),
        ("moments", "moment_alpha_sensitivity"),
    ]),
    (2, "cancellation-identity", [
        ("moments", "cancellation_identity"),
        ("moments", "overlap_breaks_cancellation"),
    ]),
    (3, "characteristic-function", [
        ("charfun", "window_support_exact_zero"),
        ("charfun", "assembly_vs_direct_transform"),
        ("moments", "charfun_vs_quadrature"),
    ]),
    (4, "phase-sensitive-expectations", [
        ("alpha-expectations", "gaussian_gap_across_alphas"),
        ("alpha-expectations", "delta_matches_closed_form"),
    ]),
    (5, "phase-space", [
        ("wigner", "marginals_match_densities"),
        ("wigner", "flux_identities"),
        ("wigner", "disjoint_cross_moments_vanish"),
        ("wigner", "mixed_moment_alpha_invariance"),
        ("group-delay", "closed_form_match"),
    ]),
    (6, "multi-lobe", [
        ("multi", "dirichlet_reduces_to_two_lobe"),
        ("multi", "pipeline_vs_dirichlet_form"),
        ("multi", "moment_alpha_invariance"),
    ]),
    (7, "operator-representation", [
        ("observable", "level_distribution_tv_gap"),
        ("observable", "power_sum_alpha_invariance"),
    ]),
    (8, "dual-construction", [
        ("dual", "fringe_matches_closed_form"),
        ("dual", "position_moment_alpha_invariance"),
        ("dual", "current_sees_alpha"),
        ("dual", "group_delay_alpha_invariance"),
    ]),
    (9, "lognormal-reference", [
        ("lognormal", "family_shares_moments"),
        ("lognormal", "krein_suggests_indeterminate"),
        ("lognormal", "carleman_lognormal_converges"),
        ("lognormal", "carleman_gaussian_diverges"),
    ]),
]

CRITERION_10_NAME = "divergence-detection"
CRITERION_11_NAME = "determinism-regression"

KNOWN_LIMITS = {
    7: "power sums of the level distribution are truncated at Nb levels; "
       "the moment-cancellation tail lives above the truncation, so the "
       "observed spread sits orders above the 1e-05 bar at any practical "
       "Nb (measured: it shrinks only ~linearly in the discarded mass)",
}


def divergence_checks(cfg):
    """Criterion checks for tail-divergence detection: the second momentum
    moment of a discontinuous window keeps growing as the analysis extent
    doubles, a smooth window's does not."""
    grid = cfg.grid()
    p0 = cfg.p_max()
    out = {}
    for family, grow_key, flag_key, expect_grow in (
        ("rectangle", "rectangle_growth_exceeds_half",
         "rectangle_flagged_divergent", True),
        ("smooth_bump", "smooth_bump_stable",
         "smooth_bump_not_flagged", False),
    ):
        spec = SuperpositionSpec(WindowSpec(family, cfg.a), cfg.L, 2, alpha=0.0)
        m2 = []
        flagged = False
        for p_max in (p0, 2.0 * p0):
            d = sp.momentum_distribution(spec, grid, hbar=cfg.hbar, p_max=p_max)
            qm = mo.moments_by_quadrature(d, 2)
            m2.append(qm.values[2])
            flagged = flagged or bool(qm.tail_flags[2])
        growth = abs(m2[1] - m2[0]) / abs(m2[0])
        if expect_grow:
            out[grow_key] = {"threshold": 0.5, "observed": float(growth),
                             "pass": growth > 0.5}
            out[flag_key] = {"threshold": 1.0, "observed": float(flagged),
                             "pass": flagged}
        else:
            out[grow_key] = {"threshold": 1e-6, "observed": float(growth),
                             "pass": growth <= 1e-6}
            out[flag_key] = {"threshold": 0.0, "observed": float(flagged),
                             "pass": not flagged}
    return out


def determinism_checks(cfg):
    """Render the momentum-density and position-density tables from two fresh
    end-to-end runs and require byte-identical CSV output."""
    from .experiments import run_momentum_density, run_position_density

    mismatches = 0
    compared = 0
    for runner in (run_momentum_density, run_position_density):
        blobs = []
        for _ in range(2):
            bundle = runner(cfg)
            blobs.append({name: render_csv(t) for name, t in bundle.tables.items()})
        for name in blobs[0]:
            compared += 1
            if blobs[0][name] != blobs[1][name]:
                mismatches += 1
    return {"golden_csv_byte_identical": {
        "threshold": 0.0, "observed": float(mismatches),
        "pass": mismatches == 0}}, compared


def run_all(cfg=None, include_determinism=True, progress=None):
    """Run every criterion on the canonical configuration; returns
    (results, experiment_bundles)."""
    from .experiments import EXPERIMENTS, run_wigner

    base = cfg or build_config()
    canonical = build_config(overrides={"out_dir": base.out_dir,
                                        "format": base.fmt})

    needed = sorted({exp for _, _, picks in CRITERIA_MAP for exp, _ in picks})
    bundles = {}
    for exp in needed:
        if progress:
            progress(f"running {exp}")
        if exp == "wigner":
            bundles[exp] = run_wigner(canonical, display=False)
        else:
            bundles[exp] = EXPERIMENTS[exp](canonical)

    results = []
    for number, name, picks in CRITERIA_MAP:
        checks = {}
        for exp, verdict in picks:
            checks[f"{exp}.{verdict}"] = bundles[exp].verdicts[verdict]
        passed = all(c["pass"] for c in checks.values())
        notes = []
        if not passed and number in KNOWN_LIMITS:
            notes.append(KNOWN_LIMITS[number])
        results.append(CriterionResult(number, name, passed, checks, notes))

    if progress:
        progress("running divergence detection")
    checks10 = divergence_checks(canonical)
    results.append(CriterionResult(10, CRITERION_10_NAME,
                                   all(c["pass"] for c in checks10.values()),
                                   checks10))

    if include_determinism:
        if progress:
            progress("running determinism check")
        checks11, compared = determinism_checks(canonical)
        upstream_ok = all(r.passed for r in results)
        checks11["criteria_1_through_10_pass"] = {
            "threshold": 0.0,
            "observed": float(sum(not r.passed for r in results)),
            "pass": upstream_ok,
        }
        notes = [f"compared {compared} rendered tables across fresh reruns"]
        failed_upstream = [r.number for r in results if not r.passed]
        if failed_upstream:
            notes.append("cascaded failure from criteria "
                         + ", ".join(str(n) for n in failed_upstream))
        results.append(CriterionResult(
            11, CRITERION_11_NAME,
            all(c["pass"] for c in checks11.values()), checks11, notes))
    return results, bundles


def format_lines(results):
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        n_ok = sum(1 for c in r.checks.values() if c["pass"])
        line = f"criterion {r.number:2d} {status}  {r.name} ({n_ok}/{len(r.checks)} checks)"
        if not r.passed:
            worst = ", ".join(
                f"{k}: observed {r.checks[k]['observed']:.3e} vs "
                f"threshold {r.checks[k]['threshold']:.0e}"
                for k in r.failed_checks())
            line += f" — {worst}"
        lines.append(line)
    return lines


def criteria_bundle(cfg, include_determinism=True, progress=None):
    results, _ = run_all(cfg, include_determinism=include_determinism,
                         progress=progress)
    name = "verify" if include_determinism else "criteria"
    bundle = ResultBundle(name, (cfg or build_config()).echo())

    crit_rows = {"number": [], "name": [], "passed": [], "checks_passed": [],
                 "checks_total": []}
    check_rows = {"criterion": [], "check": [], "threshold": [],
                  "observed": [], "passed": []}
    for r in results:
        crit_rows["number"].append(r.number)
        crit_rows["name"].append(r.name)
        crit_rows["passed"].append(r.passed)
        crit_rows["checks_passed"].append(
            sum(1 for c in r.checks.values() if c["pass"]))
        crit_rows["checks_total"].append(len(r.checks))
        for cname, c in r.checks.items():
            check_rows["criterion"].append(r.number)
            check_rows["check"].append(cname)
            check_rows["threshold"].append(c["threshold"])
            check_rows["observed"].append(c["observed"])
            check_rows["passed"].append(c["pass"])
        bundle.add_verdict(
            f"criterion_{r.number:02d}_{r.name}",
            0.0, float(sum(not c["pass"] for c in r.checks.values())),
            passed=r.passed)
        bundle.notes.extend(f"criterion {r.number}: {n}" for n in r.notes)
    bundle.add_table("criteria", list(crit_rows), list(crit_rows.values()))
    bundle.add_table("checks", list(check_rows), list(check_rows.values()))
    bundle.notes.append("criteria always run on the canonical configuration")
    return bundle
