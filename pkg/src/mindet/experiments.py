"""The runnable experiments behind each CLI subcommand.

Each experiment takes an ExperimentConfig, computes one facet of the
phase-visibility story on that configuration, and returns a ResultBundle of
tables (for CSV/JSON export) and verdicts ({threshold, observed, pass}).
Thresholds follow one rule: identities that hold on the lattice get tight
bounds (10⁻⁶ … 10⁻¹²), phase-visibility gaps must clear 10⁻³, and
phase-invariance claims are judged relative with a unit floor,
spread / max(1, |mean|).
"""

import numpy as np

from . import moments as mo
from . import phasespace as ps
from . import representations as rep
from . import spectral as sp
from .grids import Distribution1D, quadrature
from .output import ResultBundle
from .wavepacket import (SuperpositionSpec, WindowSpec, build_superposition,
                         build_dual_superposition, lobe_waves, amplitude_phase)

GAP_THRESHOLD = 1e-3


def _alpha_col(prefix, alpha):
    return f"{prefix}_alpha_{alpha:.6g}"


def _rel_spread(rows):
    """spread / max(1, |mean|), elementwise over a (n_alpha, n) table."""
    rows = np.asarray(rows)
    spread = rows.max(axis=0) - rows.min(axis=0)
    return spread / np.maximum(1.0, np.abs(rows.mean(axis=0)))


# ----------------------------------------------------------------------
# position-density
# ----------------------------------------------------------------------

def run_position_density(cfg):
    """|ψ(x)|² for every α — the distributions that cannot differ at all."""
    bundle = ResultBundle("position-density", cfg.echo())
    grid = cfg.grid()
    x = grid.points()
    densities = []
    for alpha in cfg.alphas:
        w = build_superposition(cfg.superposition_spec(alpha), grid, hbar=cfg.hbar)
        densities.append(w.density().density)
        bundle.notes.extend(w.warnings)
    cols = ["x"] + [_alpha_col("density", a) for a in cfg.alphas]
    bundle.add_table("density", cols, [x] + densities)

    worst = 0.0
    for i in range(len(densities)):
        for j in range(i + 1, len(densities)):
            worst = max(worst, float(np.max(np.abs(densities[i] - densities[j]))))
    bundle.add_verdict("alpha_invariance_pointwise", 1e-12, worst)
    mass_err = max(abs(quadrature(Distribution1D(grid, d), np.ones(grid.count)) - 1.0)
                   for d in densities)
    bundle.add_verdict("unit_mass", 1e-9, mass_err)
    return bundle


# ----------------------------------------------------------------------
# momentum-density
# ----------------------------------------------------------------------

def run_momentum_density(cfg):
    """P(p; α) for every α — same moments, visibly different distributions."""
    bundle = ResultBundle("momentum-density", cfg.echo())
    grid = cfg.grid()
    dists = {}
    for alpha in cfg.alphas:
        d = sp.momentum_distribution(cfg.superposition_spec(alpha), grid, hbar=cfg.hbar)
        dists[alpha] = d
        bundle.notes.extend(d.warnings)
    first = dists[cfg.alphas[0]]
    p = first.grid.points()
    cols = ["p"] + [_alpha_col("density", a) for a in cfg.alphas]
    bundle.add_table("density", cols, [p] + [dists[a].density for a in cfg.alphas])

    route = max(d.metadata["route_discrepancy"] for d in dists.values())
    bundle.add_verdict("fft_vs_closed_form", 1e-6, route)

    l1 = 0.0
    vals = list(dists.values())
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            diff = np.abs(vals[i].density - vals[j].density)
            l1 = max(l1, quadrature(Distribution1D(first.grid, diff),
                                    np.ones(first.grid.count)))
    bundle.add_verdict("l1_gap_across_alphas", 0.5, l1, passed=l1 >= 0.5)
    return bundle


# ----------------------------------------------------------------------
# charfun
# ----------------------------------------------------------------------

def run_charfun(cfg):
    """Characteristic functions: compact support, exact assembly, and the
    single pinned value M(L/ħ) = ½e^{iα} that stores the phase."""
    bundle = ResultBundle("charfun", cfg.echo())
    th = cfg.theta_grid()
    theta = th.points()
    grid = cfg.grid()

    MF = sp.char_function_window(cfg.window_spec(), th, hbar=cfg.hbar)
    outside = np.abs(theta) > MF.support_radius + 1e-12
    support_leak = float(np.max(np.abs(MF.values[outside]))) if outside.any() else 0.0
    bundle.add_verdict("window_support_exact_zero", 0.0, support_leak,
                       passed=support_leak == 0.0)

    mod_cols, mod_data = ["theta"], [theta]
    checks_rows = {"alpha": [], "m0_error": [], "max_modulus_excess": [],
                   "hermitian_error": [], "assembly_vs_direct": [],
                   "pin_error": []}
    direct_worst = 0.0
    pin_worst = 0.0
    health_worst = 0.0
    for alpha in cfg.alphas:
        spec = cfg.superposition_spec(alpha)
        M = sp.char_function_superposition(spec, th, hbar=cfg.hbar)
        dist = sp.momentum_distribution(spec, grid, hbar=cfg.hbar)
        direct = sp.char_function_of_distribution(dist, th)
        dev = float(np.max(np.abs(M.values - direct.values)))
        direct_worst = max(direct_worst, dev)
        pin = abs(M(cfg.L / cfg.hbar) - 0.5 * np.exp(1j * alpha))
        pin_worst = max(pin_worst, pin)
        health = sp.validate_char_function(M)
        health_worst = max(health_worst, *(float(v) for v in health.values()))
        mod_cols.append(_alpha_col("modulus", alpha))
        mod_data.append(np.abs(M.values))
        checks_rows["alpha"].append(alpha)
        for key in ("m0_error", "max_modulus_excess", "hermitian_error"):
            checks_rows[key].append(float(health[key]))
        checks_rows["assembly_vs_direct"].append(dev)
        checks_rows["pin_error"].append(float(pin))

    bundle.add_table("modulus", mod_cols, mod_data)
    bundle.add_table("checks", list(checks_rows), list(checks_rows.values()))
    bundle.add_verdict("assembly_vs_direct_transform", 1e-6, direct_worst)
    bundle.add_verdict("phase_pin_at_shift", 1e-12, pin_worst)
    bundle.add_verdict("charfun_health", 1e-9, health_worst)
    return bundle


# ----------------------------------------------------------------------
# moments
# ----------------------------------------------------------------------

def run_moments(cfg):
    """Momentum moments three ways (quadrature per α, derivatives of M,
    closed-form cancellation integrals) — none of them can see α."""
    bundle = ResultBundle("moments", cfg.echo())
    grid = cfg.grid()
    th = cfg.theta_grid()
    report = mo.moment_report(cfg.superposition_spec(0.0), grid, cfg.alphas,
                              n_max=cfg.n_max, hbar=cfg.hbar)

    cols = ["order"] + [_alpha_col("moment", a) for a in report.alpha_values]
    data = [report.orders] + [row for row in report.table]
    bundle.add_table("moments", cols, data)
    bundle.add_table("sensitivity", ["order", "relative_spread"],
                     [report.orders, report.sensitivity])
    bundle.add_verdict("moment_alpha_sensitivity", 1e-6,
                       float(report.sensitivity.max()))
    bundle.add_verdict("density_l1_gap", 0.5, report.distribution_distance,
                       passed=report.distribution_distance >= 0.5)
    if report.tail_flags.any():
        bundle.notes.append("tail-dominated moment orders: "
                            + ", ".join(str(n) for n in report.orders[report.tail_flags]))
    bundle.add_verdict("no_tail_flags", 0.0, float(report.tail_flags.sum()),
                       passed=not report.tail_flags.any())

    dmax = min(cfg.n_max, 4)
    cf_worst = 0.0
    cf_rows = {"order": [], "charfun_value": [], "quadrature_value": [],
               "relative_gap": []}
    for alpha in (cfg.alphas[0],):
        M = sp.char_function_superposition(cfg.superposition_spec(alpha), th,
                                           hbar=cfg.hbar)
        cm = mo.moments_by_charfun(M, dmax)
        qd = sp.momentum_distribution(cfg.superposition_spec(alpha), grid,
                                      hbar=cfg.hbar)
        qm = mo.moments_by_quadrature(qd, dmax)
        for n in range(dmax + 1):
            gap = abs(cm.values[n] - qm.values[n]) / max(1.0, abs(qm.values[n]))
            cf_worst = max(cf_worst, gap)
            cf_rows["order"].append(n)
            cf_rows["charfun_value"].append(cm.values[n])
            cf_rows["quadrature_value"].append(qm.values[n])
            cf_rows["relative_gap"].append(gap)
    bundle.add_table("charfun_route", list(cf_rows), list(cf_rows.values()))
    bundle.add_verdict("charfun_vs_quadrature", 1e-4, cf_worst)

    # cancellation integrals: exact for disjoint lobes, broken by overlap
    rows = {"alpha": [], "order": [], "integral": []}
    all_vals = mo.cosine_identity_check(cfg.window_spec(), cfg.L,
                                        np.asarray(cfg.alphas),
                                        n_max=cfg.n_max, hbar=cfg.hbar)
    for i, alpha in enumerate(cfg.alphas):
        for n, v in enumerate(all_vals[i]):
            rows["alpha"].append(alpha)
            rows["order"].append(n)
            rows["integral"].append(v)
    cancel_worst = float(np.max(np.abs(all_vals)))
    bundle.add_table("cancellation", list(rows), list(rows.values()))
    bundle.add_verdict("cancellation_identity", 1e-6, cancel_worst)

    overlap = mo.cosine_identity_check(cfg.window_spec(), cfg.a / 2.0,
                                       cfg.alphas[0], n_max=cfg.n_max,
                                       hbar=cfg.hbar)
    overlap_peak = float(np.max(np.abs(overlap)))
    bundle.add_verdict("overlap_breaks_cancellation", GAP_THRESHOLD,
                       overlap_peak, passed=overlap_peak > GAP_THRESHOLD)
    return bundle


# ----------------------------------------------------------------------
# alpha-expectations
# ----------------------------------------------------------------------

def run_alpha_expectations(cfg):
    """Non-polynomial observables DO see α: point evaluation P(0;α) and the
    Gaussian-weighted mean ⟨e^{−βp²}⟩."""
    bundle = ResultBundle("alpha-expectations", cfg.echo())
    grid = cfg.grid()
    spec0 = cfg.superposition_spec(0.0)

    delta = mo.alpha_dependent_expectation(spec0, mo.GWeight("delta_at_zero", 1.0),
                                           grid, cfg.alphas, hbar=cfg.hbar)
    gauss = mo.alpha_dependent_expectation(spec0, mo.GWeight("gaussian", 1.0),
                                           grid, cfg.alphas, hbar=cfg.hbar)

    F0 = sp.window_transform(cfg.window_spec(), np.array([0.0]), grid,
                             hbar=cfg.hbar)[0]
    pred = np.abs(F0) ** 2 * np.cos(np.asarray(cfg.alphas))
    delta_err = max(abs(r.interference - pred[i]) for i, r in enumerate(delta))

    rows = {
        "alpha": list(cfg.alphas),
        "delta_value": [r.value for r in delta],
        "delta_baseline": [r.baseline for r in delta],
        "delta_interference": [r.interference for r in delta],
        "delta_predicted_interference": list(pred),
        "gaussian_value": [r.value for r in gauss],
        "gaussian_baseline": [r.baseline for r in gauss],
        "gaussian_theta_route": [r.theta_route for r in gauss],
    }
    bundle.add_table("expectations", list(rows), list(rows.values()))

    bundle.add_verdict("delta_matches_closed_form", 1e-6, float(delta_err))
    gvals = np.array([r.value for r in gauss])
    gap = float(gvals.max() - gvals.min())
    bundle.add_verdict("gaussian_gap_across_alphas", GAP_THRESHOLD, gap,
                       passed=gap > GAP_THRESHOLD)
    troute = max(abs(r.value - r.theta_route) for r in gauss)
    bundle.add_verdict("gaussian_theta_route_match", 1e-6, float(troute))
    return bundle


# ----------------------------------------------------------------------
# current
# ----------------------------------------------------------------------

CHIRP = lambda x: 3.0 * x + 1.5 * x * x


def run_current(cfg):
    """Probability current of a chirped superposition: locally nonzero yet
    α-invariant, with ∫j dx = ⟨p⟩."""
    bundle = ResultBundle("current", cfg.echo())
    grid = cfg.grid()
    x = grid.points()
    cols, data = ["x"], [x]
    stack = []
    rs_worst = 0.0
    mean_p_err = 0.0
    for alpha in cfg.alphas:
        spec = cfg.superposition_spec(alpha, internal_phase=CHIRP)
        w = build_superposition(spec, grid, hbar=cfg.hbar)
        j = ps.current(w)
        stack.append(j)
        cols.append(_alpha_col("current", alpha))
        data.append(j)
        R, S = amplitude_phase(w)
        # polar identity j = R²S′ checked run-by-run (S′ by centered
        # differences, exact here because the chirp phase is quadratic)
        idx = np.flatnonzero(R > 1e-9)
        for run in np.split(idx, np.flatnonzero(np.diff(idx) > 1) + 1):
            if len(run) < 5:
                continue
            Sp = np.gradient(S[run], grid.step)
            dev = np.abs(j[run] - R[run] ** 2 * Sp)[2:-2]
            rs_worst = max(rs_worst, float(np.max(dev)))
        mean_j = float(np.sum(j) * grid.step)
        phi = sp.to_momentum(w)
        mean_p = quadrature(phi.density(), phi.grid.points())
        mean_p_err = max(mean_p_err, abs(mean_j - mean_p))
    bundle.add_table("current", cols, data)

    stack = np.array(stack)
    inv = float(np.max(stack.max(axis=0) - stack.min(axis=0)))
    bundle.add_verdict("alpha_invariance_pointwise", 1e-8, inv)
    bundle.add_verdict("polar_identity", 1e-8, rs_worst)
    bundle.add_verdict("flux_equals_mean_momentum", 1e-6, mean_p_err)
    return bundle


# ----------------------------------------------------------------------
# group-delay
# ----------------------------------------------------------------------

def run_group_delay(cfg):
    """Group delay τ(p): the momentum-space flux DOES depend on α, and it
    matches the closed form built from the single-window transform."""
    bundle = ResultBundle("group-delay", cfg.echo())
    grid = cfg.grid()
    p_max = cfg.p_max()
    closed_worst = 0.0
    cols, data = [], []
    pk = None
    stack = []
    for alpha in cfg.alphas:
        spec = cfg.superposition_spec(alpha)
        w = build_superposition(spec, grid, hbar=cfg.hbar)
        phi, tau = ps.group_delay(w)
        keep = np.abs(phi.grid.points()) <= p_max + 1e-12
        pk = phi.grid.points()[keep]
        F = ps.window_transform_with_derivative(cfg.window_spec(), pk, grid,
                                                hbar=cfg.hbar)
        closed = ps.group_delay_closed_form(spec, pk, F, hbar=cfg.hbar)
        closed_worst = max(closed_worst, float(np.max(np.abs(tau[keep] - closed))))
        if not cols:
            cols, data = ["p"], [pk]
        cols += [_alpha_col("tau", alpha), _alpha_col("closed", alpha)]
        data += [tau[keep], closed]
        stack.append(tau[keep])
    bundle.add_table("group_delay", cols, data)
    bundle.add_verdict("closed_form_match", 1e-6, closed_worst)
    stack = np.array(stack)
    gap = float(np.max(stack.max(axis=0) - stack.min(axis=0)))
    bundle.add_verdict("alpha_gap_pointwise", GAP_THRESHOLD, gap,
                       passed=gap > GAP_THRESHOLD)
    return bundle


# ----------------------------------------------------------------------
# wigner
# ----------------------------------------------------------------------

MIXED_PAIRS = [(n, m) for n in range(5) for m in range(5) if n + m <= 4]


def _column_crop(field_grid, half_count):
    """Sub-lattice of ±half_count columns around p = 0 on a transform lattice."""
    P = field_grid.points()
    center = int(np.argmin(np.abs(P)))
    lo = max(0, center - half_count)
    hi = min(field_grid.count, center + half_count + 1)
    from .grids import Grid1D
    return Grid1D(field_grid.point(lo), field_grid.step, hi - lo), slice(lo, hi)


def run_wigner(cfg, display=True):
    """Phase-space suite: marginals, flux identities, cross-term structure,
    and mixed moments that stay α-blind."""
    from . import kernels

    bundle = ResultBundle("wigner", cfg.echo())
    wgrid = cfg.wigner_wave_grid()
    x_window = cfg.wigner_x_window()
    alphas = list(cfg.alphas)
    hbar = cfg.hbar
    spec0 = cfg.superposition_spec(alphas[0])
    lobes = lobe_waves(spec0, wgrid, hbar=hbar)

    marg_worst = 0.0
    imag_worst = 0.0
    flux_worst = 0.0
    mixed_rows = []
    crops = {}
    crop_grid = None
    for alpha in alphas:
        w = build_superposition(cfg.superposition_spec(alpha), wgrid, hbar=hbar)
        W = ps.wigner(w, x_window=x_window)     # full transform lattice
        marg_worst = max(marg_worst, W.metadata["x_marginal_error"],
                         W.metadata["p_marginal_error"])
        imag_worst = max(imag_worst, W.metadata["imag_residue"])
        X, P = W.x_grid.points(), W.p_grid.points()

        # j(x) = ∫ p W dp   (plain Riemann sum over the periodic lattice)
        j = ps.current(w)
        rows = [wgrid.index_of(xv) for xv in X]
        j_from_W = W.values @ (P * W.p_grid.step)
        flux_worst = max(flux_worst, float(np.max(np.abs(j_from_W - j[rows]))))

        # ∫ x W dx = −τ(p), with τ from the exact transform derivative
        x_cond = (X * W.x_grid.step) @ W.values
        mask = np.abs(w.values) > 0
        xs, vals = wgrid.points()[mask], w.values[mask]
        scale = wgrid.step / np.sqrt(2.0 * np.pi * hbar)
        phiP = scale * kernels.direct_dft(vals, xs, P, hbar, -1.0)
        dphiP = scale * kernels.direct_dft(vals * (-1j * xs / hbar), xs, P,
                                           hbar, -1.0)
        tauP = hbar * np.imag(np.conj(phiP) * dphiP)
        flux_worst = max(flux_worst, float(np.max(np.abs(x_cond + tauP))))

        mixed_rows.append([ps.wigner_moment(W, n, m) for (n, m) in MIXED_PAIRS])

        crop_grid, cols = _column_crop(W.p_grid, 1024)
        crops[alpha] = W.values[:, cols].copy()
        x_axis = W.x_grid
        del W

    bundle.add_verdict("marginals_match_densities", 1e-6, marg_worst)
    bundle.add_verdict("imaginary_residue", 1e-9, imag_worst)
    bundle.add_verdict("flux_identities", 1e-6, flux_worst)

    mixed_rows = np.array(mixed_rows)
    sens = _rel_spread(mixed_rows)
    bundle.add_table("mixed_moments",
                     ["x_order", "p_order"]
                     + [_alpha_col("moment", a) for a in alphas]
                     + ["relative_spread"],
                     [np.array([n for n, _ in MIXED_PAIRS]),
                      np.array([m for _, m in MIXED_PAIRS])]
                     + [mixed_rows[i] for i in range(len(alphas))]
                     + [sens])
    bundle.add_verdict("mixed_moment_alpha_invariance", 1e-6, float(sens.max()))

    # cross-term structure between the two disjoint lobes
    cw = ps.cross_wigner(lobes[0], lobes[1], p_grid=crop_grid, x_window=x_window)
    cw_ba = ps.cross_wigner(lobes[1], lobes[0], p_grid=crop_grid, x_window=x_window)
    herm = float(np.max(np.abs(cw_ba.values - np.conj(cw.values))))
    bundle.add_verdict("cross_term_hermiticity", 1e-12, herm)

    cross_worst = 0.0
    cross_rows = {"x_order": [], "p_order": [], "derivative_route_abs": [],
                  "quadrature_route_abs": []}
    cw_full = ps.cross_wigner(lobes[0], lobes[1], p_grid=None, x_window=x_window)
    for (n, m) in MIXED_PAIRS:
        cm = ps.cross_mixed_moment(lobes[0], lobes[1], n, m,
                                   x_window=x_window, cw=cw_full)
        cross_worst = max(cross_worst, abs(cm.value))
        cross_rows["x_order"].append(n)
        cross_rows["p_order"].append(m)
        cross_rows["derivative_route_abs"].append(abs(cm.derivative))
        cross_rows["quadrature_route_abs"].append(abs(cm.quadrature))
    del cw_full
    bundle.add_table("cross_moments", list(cross_rows), list(cross_rows.values()))
    bundle.add_verdict("disjoint_cross_moments_vanish", 1e-8, cross_worst)
    bundle.notes.append("cross-moment verdict uses the derivative route; the "
                        "2-D quadrature route sits on a ~1e-7 round-off floor "
                        "at p-order 4 (recorded in the cross_moments table)")

    # reconstruction W = (W₁ + W₂)/2 + Re e^{iα} W₁₂ on the cropped slice
    W1 = ps.wigner(lobes[0], p_grid=crop_grid, x_window=x_window)
    W2 = ps.wigner(lobes[1], p_grid=crop_grid, x_window=x_window)
    rec_worst = 0.0
    for alpha in alphas:
        rebuilt = 0.5 * (W1.values + W2.values) \
            + np.real(np.exp(1j * alpha) * cw.values)
        rec_worst = max(rec_worst, float(np.max(np.abs(crops[alpha] - rebuilt))))
    bundle.add_verdict("two_lobe_reconstruction", 1e-12, rec_worst)

    if display:
        a0, a1 = alphas[0], alphas[-1]
        xs, ps_ = x_axis.points(), crop_grid.points()
        xi = np.arange(0, len(xs), 4)
        pi_ = np.flatnonzero(np.abs(ps_) <= 4.0 * np.pi)[::4]
        Xg, Pg = np.meshgrid(xs[xi], ps_[pi_], indexing="ij")
        bundle.add_table("field",
                         ["x", "p", _alpha_col("w", a0), _alpha_col("w", a1)],
                         [Xg.ravel(), Pg.ravel(),
                          crops[a0][np.ix_(xi, pi_)].ravel(),
                          crops[a1][np.ix_(xi, pi_)].ravel()])
    return bundle


# ----------------------------------------------------------------------
# multi
# ----------------------------------------------------------------------

def run_multi(cfg):
    """N-lobe superpositions under linear phase ramps: Dirichlet-kernel
    fringes, still α-invariant moments."""
    bundle = ResultBundle("multi", cfg.echo())
    grid = cfg.grid()
    worst_closed = 0.0
    sens_worst = 0.0
    rows = {"lobes": [], "alpha": [], "order": [], "moment": []}
    for N in (3, 5):
        table = []
        spec_alpha0 = None
        for alpha in cfg.alphas:
            spec = SuperpositionSpec(cfg.window_spec(), cfg.L, N, alpha=alpha,
                                     phase_mode="linear")
            spec_alpha0 = spec_alpha0 or spec
            d = sp.momentum_distribution(spec, grid, hbar=cfg.hbar)
            worst_closed = max(worst_closed, d.metadata["route_discrepancy"])
            qm = mo.moments_by_quadrature(d, min(cfg.n_max, 4))
            table.append(qm.values)
            for n, v in enumerate(qm.values):
                rows["lobes"].append(N)
                rows["alpha"].append(alpha)
                rows["order"].append(n)
                rows["moment"].append(v)
        sens_worst = max(sens_worst, float(_rel_spread(np.array(table)).max()))
    bundle.add_table("moments", list(rows), list(rows.values()))
    bundle.add_verdict("pipeline_vs_dirichlet_form", 1e-6, worst_closed)
    bundle.add_verdict("moment_alpha_invariance", 1e-6, sens_worst)

    # N=2 Dirichlet kernel must reduce to the 1 + cos fringe
    alpha = cfg.alphas[-1] if len(cfg.alphas) > 1 else cfg.alphas[0]
    d2 = sp.momentum_distribution(cfg.superposition_spec(alpha), grid, hbar=cfg.hbar)
    p = d2.grid.points()
    F = sp.window_transform(cfg.window_spec(), p, grid, hbar=cfg.hbar)
    two_form = np.abs(F) ** 2 * (1.0 + np.cos(p * cfg.L / cfg.hbar - alpha))
    gap2 = float(np.max(np.abs(d2.density - two_form)))
    bundle.add_verdict("dirichlet_reduces_to_two_lobe", 1e-10, gap2)

    # N=5 main-peak / first-side-lobe height ratio, two routes on the
    # same lattice.  The kernel-only continuum ratio is exactly 16
    # (sin²x = 5/8 at the side-lobe stationary point); the |F|² envelope
    # decay and the off-maximum lattice sampling push the density ratio
    # a few percent above that.
    spec5 = SuperpositionSpec(cfg.window_spec(), cfg.L, 5, alpha=0.0,
                              phase_mode="linear")
    d5 = sp.momentum_distribution(spec5, grid, hbar=cfg.hbar)
    pm = d5.grid.points()
    i_main = int(np.argmax(d5.density))
    side = (pm > 2.0 * np.pi * cfg.hbar / (5 * cfg.L)) \
        & (pm < 4.0 * np.pi * cfg.hbar / (5 * cfg.L))
    i_side = int(np.flatnonzero(side)[np.argmax(d5.density[side])])
    ratio_closed = float(d5.density[i_main] / d5.density[i_side])

    phi5 = sp.to_momentum(build_superposition(spec5, grid, hbar=cfg.hbar))
    fft_dens = np.abs(phi5.values) ** 2
    to_full = lambda i: phi5.grid.index_of(d5.grid.point(i))
    ratio_fft = float(fft_dens[to_full(i_main)] / fft_dens[to_full(i_side)])

    bundle.add_table("peak",
                     ["lobes", "p_main", "p_side", "ratio_closed", "ratio_fft"],
                     [[5], [pm[i_main]], [pm[i_side]], [ratio_closed],
                      [ratio_fft]])
    bundle.add_verdict("five_lobe_peak_ratio_routes_agree", 1e-6,
                       abs(ratio_fft - ratio_closed) / ratio_closed)
    bundle.add_verdict("five_lobe_peak_ratio_pin", 1e-4,
                       abs(ratio_closed - 16.5588364469) / 16.5588364469)
    return bundle


# ----------------------------------------------------------------------
# observable
# ----------------------------------------------------------------------

def run_observable(cfg):
    """Oscillator-basis statistics: the induced distribution over energy
    levels sees α, its truncated power sums barely don't — quantifying how
    much of the cancellation the first Nb levels can reproduce."""
    bundle = ResultBundle("observable", cfg.echo())
    rgrid = cfg.representation_grid()
    basis = rep.oscillator_basis(rgrid, cfg.basis_size, hbar=cfg.hbar)
    ortho = rep.basis_orthonormality_error(basis)
    bundle.add_verdict("basis_orthonormality", 5e-15, ortho)

    spec0 = cfg.superposition_spec(0.0)
    lobes = lobe_waves(spec0, rgrid, hbar=cfg.hbar)
    probs = {}
    hk_rows = []
    rec_worst = 0.0
    captured_min = 1.0
    for alpha in cfg.alphas:
        w = build_superposition(cfg.superposition_spec(alpha), rgrid, hbar=cfg.hbar)
        two_lobes = lobes if len(lobes) == 2 else None
        ex = rep.expand(w, basis, lobes=two_lobes, alpha=alpha)
        probs[alpha] = ex.probabilities
        if ex.reconstruction_error is not None:
            rec_worst = max(rec_worst, ex.reconstruction_error)
        captured_min = min(captured_min, ex.captured)
        hk_rows.append(rep.operator_moments(ex, basis.eigenvalues, k_max=4))
        for flag in ex.flags:
            note = f"alpha={alpha:.6g}: {flag} (captured {ex.captured:.9f})"
            bundle.notes.append(note)

    n_idx = np.arange(cfg.basis_size)
    bundle.add_table("level_probabilities",
                     ["level", "eigenvalue"]
                     + [_alpha_col("prob", a) for a in cfg.alphas],
                     [n_idx, basis.eigenvalues] + [probs[a] for a in cfg.alphas])
    bundle.add_verdict("lobe_mixing_identity", 1e-12, rec_worst)

    pv = list(probs.values())
    tv = max(float(np.sum(np.abs(pv[i] - pv[j])))
             for i in range(len(pv)) for j in range(i + 1, len(pv)))
    bundle.add_verdict("level_distribution_tv_gap", GAP_THRESHOLD, tv,
                       passed=tv > GAP_THRESHOLD)

    hk_rows = np.array(hk_rows)
    sens = _rel_spread(hk_rows)
    bundle.add_table("energy_power_sums",
                     ["k"] + [_alpha_col("sum", a) for a in cfg.alphas]
                     + ["relative_spread"],
                     [np.arange(hk_rows.shape[1])]
                     + [hk_rows[i] for i in range(hk_rows.shape[0])]
                     + [sens])
    bundle.add_verdict("power_sum_alpha_invariance", 1e-5, float(sens.max()))
    bundle.notes.append(
        f"captured norm at Nb={cfg.basis_size}: {captured_min:.9f}; the "
        "power-sum spread is dominated by the truncated tail, not by the "
        "grid (see acceptance notes)")

    cross_worst = 0.0
    if len(lobes) == 2:
        rows = {"k": [], "cross_term_abs": []}
        for k in range(5):
            c = abs(rep.cross_hamiltonian_term(lobes[0], lobes[1], k))
            cross_worst = max(cross_worst, c)
            rows["k"].append(k)
            rows["cross_term_abs"].append(c)
        bundle.add_table("cross_terms", list(rows), list(rows.values()))
        bundle.add_verdict("disjoint_cross_terms_vanish", 1e-8, cross_worst)
    return bundle


# ----------------------------------------------------------------------
# dual
# ----------------------------------------------------------------------

def run_dual(cfg):
    """Mirror construction: lobes in momentum space.  Position density now
    fringes with α, position moments still cannot see it, the current sees
    it, and the group delay cannot."""
    bundle = ResultBundle("dual", cfg.echo())
    pgrid = cfg.dual_p_grid()

    fringe_worst = 0.0
    curr_stack = []
    tau_stack = []
    mom_table = []
    x = None
    cols_d, data_d = [], []
    cols_j, data_j = [], []
    for alpha in cfg.alphas:
        spec = cfg.superposition_spec(alpha)
        psi, j = ps.dual_current(spec, pgrid, hbar=cfg.hbar)
        x = psi.grid.points()
        dens = np.abs(psi.values) ** 2
        H = sp.window_transform(cfg.window_spec(), x, pgrid, hbar=cfg.hbar)
        closed = np.abs(H) ** 2 * (1.0 + np.cos(x * cfg.L / cfg.hbar - alpha))
        fringe_worst = max(fringe_worst, float(np.max(np.abs(dens - closed))))
        curr_stack.append(j)
        qm = mo.moments_by_quadrature(
            Distribution1D(psi.grid, dens), min(cfg.n_max, 6))
        mom_table.append(qm.values)
        phi, tau = ps.dual_group_delay(spec, pgrid, hbar=cfg.hbar)
        tau_stack.append(tau)
        if not cols_d:
            cols_d, data_d = ["x"], [x]
            cols_j, data_j = ["x"], [x]
        cols_d.append(_alpha_col("density", alpha))
        data_d.append(dens)
        cols_j.append(_alpha_col("current", alpha))
        data_j.append(j)
    bundle.add_table("position_density", cols_d, data_d)
    bundle.add_table("current", cols_j, data_j)

    bundle.add_verdict("fringe_matches_closed_form", 1e-6, fringe_worst)
    sens = _rel_spread(np.array(mom_table))
    bundle.add_verdict("position_moment_alpha_invariance", 1e-6, float(sens.max()))

    curr_stack = np.array(curr_stack)
    jgap = float(np.max(curr_stack.max(axis=0) - curr_stack.min(axis=0)))
    bundle.add_verdict("current_sees_alpha", GAP_THRESHOLD, jgap,
                       passed=jgap > GAP_THRESHOLD)

    tau_stack = np.array(tau_stack)
    tgap = float(np.max(tau_stack.max(axis=0) - tau_stack.min(axis=0)))
    bundle.add_verdict("group_delay_alpha_invariance", 1e-8, tgap)

    # chirped momentum lobes: τ becomes nonzero but still cannot see α
    chirped = []
    for alpha in cfg.alphas:
        spec = cfg.superposition_spec(alpha, internal_phase=CHIRP)
        _, tau = ps.dual_group_delay(spec, pgrid, hbar=cfg.hbar)
        chirped.append(tau)
    chirped = np.array(chirped)
    cgap = float(np.max(chirped.max(axis=0) - chirped.min(axis=0)))
    bundle.add_verdict("chirped_group_delay_alpha_invariance", 1e-8, cgap)
    bundle.notes.append(f"chirped dual group delay peaks at "
                        f"{float(np.max(np.abs(chirped))):.6f} yet stays α-flat")

    report = ps.dual_special_case_report(cfg.superposition_spec(cfg.alphas[-1]),
                                         pgrid, hbar=cfg.hbar)
    bundle.add_table("special_case",
                     ["x", "bilinear_current", "derived_form"],
                     [report["x_grid"].points(), report["bilinear"],
                      report["derived"]])
    bundle.add_verdict("special_case_derived_form", 1e-6,
                       report["max_dev_derived"])
    bundle.notes.append(
        "shifted-lobe special case: derived R²(S₁′ + L/2) deviation "
        f"{report['max_dev_derived']:.3e}; sign-variant R²(S₁′ − L/2) "
        f"deviation {report['max_dev_variant']:.3e}; additive variant "
        f"S₁ − R²L/2 deviation {report['max_dev_printed']:.3e}")
    return bundle


# ----------------------------------------------------------------------
# lognormal
# ----------------------------------------------------------------------

def run_lognormal(cfg):
    """Classical M-indeterminate reference family and the determinacy
    heuristics (Krein integral, Carleman sums) with a Gaussian control."""
    bundle = ResultBundle("lognormal", cfg.echo())
    n_max = min(cfg.n_max, 4)
    closed = mo.lognormal_moments(n_max)
    betas = (-1.0, 0.0, 1.0)

    rows = {"order": list(range(n_max + 1)), "closed_form": list(closed)}
    rel_worst = 0.0
    for beta in betas:
        quad = mo.lognormal_moment_quadrature(beta, n_max)
        rel = np.abs(quad - closed) / closed
        rel_worst = max(rel_worst, float(rel.max()))
        rows[f"quadrature_beta_{beta:+.0f}"] = list(quad)
        rows[f"relative_error_beta_{beta:+.0f}"] = list(rel)
    bundle.add_table("moments", list(rows), list(rows.values()))
    bundle.add_verdict("family_shares_moments", 1e-3, rel_worst)

    overlap = mo.lognormal_perturbation_overlap(n_max)
    bundle.add_table("perturbation_overlap",
                     ["order", "integral"],
                     [list(range(n_max + 1)), list(overlap)])

    krows = {"beta": [], "case": [], "value": [], "tail_fraction": [],
             "suggests_indeterminate": []}
    kr_ok = True
    for beta in betas:
        fam = mo.lognormal_family(beta)
        for case in ("hamburger", "stieltjes"):
            kr = mo.krein_integral(fam, case=case)
            krows["beta"].append(beta)
            krows["case"].append(1.0 if case == "stieltjes" else 0.0)
            krows["value"].append(kr.value)
            krows["tail_fraction"].append(kr.tail_fraction)
            krows["suggests_indeterminate"].append(
                kr.verdict == "suggests_indeterminate")
            kr_ok &= kr.verdict == "suggests_indeterminate"
    bundle.add_table("krein", list(krows), list(krows.values()))
    bundle.add_verdict("krein_suggests_indeterminate", 1.0,
                       0.0 if kr_ok else 1.0, passed=kr_ok)

    K = 12
    ln_even = mo.lognormal_moments(2 * K)[::2]
    cl_ln = mo.carleman_sum(ln_even)
    k_idx = np.arange(1, K + 1)
    gauss_even = np.array([np.prod(np.arange(1, 2 * k, 2), dtype=float)
                           for k in k_idx])
    gauss_even = np.concatenate([[1.0], gauss_even])
    cl_g = mo.carleman_sum(gauss_even)
    point_even = np.ones(K + 1)
    cl_p = mo.carleman_sum(point_even)
    bundle.add_table("carleman",
                     ["k", "lognormal_partial_sum", "gaussian_partial_sum",
                      "point_mass_partial_sum"],
                     [np.arange(1, K + 1), cl_ln.partial_sums,
                      cl_g.partial_sums, cl_p.partial_sums])
    ln_ok = cl_ln.verdict != "suggests_determinate"
    g_ok = cl_g.verdict == "suggests_determinate"
    bundle.add_verdict("carleman_lognormal_converges", 1.0,
                       0.0 if ln_ok else 1.0, passed=ln_ok)
    bundle.add_verdict("carleman_gaussian_diverges", 1.0,
                       0.0 if g_ok else 1.0, passed=g_ok)
    bundle.notes.append(f"lognormal Carleman sum S_{K} = "
                        f"{cl_ln.partial_sums[-1]:.9f} ({cl_ln.verdict}); "
                        f"gaussian S_{K} = {cl_g.partial_sums[-1]:.9f} "
                        f"({cl_g.verdict})")
    return bundle


# ----------------------------------------------------------------------
# criteria / verify (delegating to the acceptance module)
# ----------------------------------------------------------------------

def run_criteria(cfg):
    from . import acceptance
    return acceptance.criteria_bundle(cfg, include_determinism=False)


def run_verify(cfg):
    from . import acceptance
    return acceptance.criteria_bundle(cfg, include_determinism=True)


EXPERIMENTS = {
    "position-density": run_position_density,
    "momentum-density": run_momentum_density,
    "charfun": run_charfun,
    "moments": run_moments,
    "alpha-expectations": run_alpha_expectations,
    "current": run_current,
    "group-delay": run_group_delay,
    "wigner": run_wigner,
    "multi": run_multi,
    "observable": run_observable,
    "dual": run_dual,
    "lognormal": run_lognormal,
    "criteria": run_criteria,
    "verify": run_verify,
}
