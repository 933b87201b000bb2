#include "smolu/lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace smolu {

namespace {

double l2_distance(const SpectralField& a, const SpectralField& b) {
    double acc = 0.0;
    for (int m = -a.n_modes(); m <= a.n_modes(); ++m)
        acc += std::norm(a.coeff(m) - b.coeff(m));
    return std::sqrt(two_pi * acc);
}

double h1_distance(const SpectralField& a, const SpectralField& b) {
    double acc = 0.0;
    for (int m = -a.n_modes(); m <= a.n_modes(); ++m)
        acc += (1.0 + double(m) * double(m)) * std::norm(a.coeff(m) - b.coeff(m));
    return std::sqrt(two_pi * acc);
}

SpectralField field_from_raw(const std::vector<cxd>& c, int n) {
    SpectralField f(n);
    for (int m = 0; m <= n; ++m)
        f.set_pair(m, c[std::size_t(m + n)]);
    return f;
}

} // namespace

SpectralField stroboscopic_map(const SpectralField& f0, const FlowParams& flow,
                               const KernelSpec& kernel, double dt, double period_fraction) {
    if (flow.omega == 0.0)
        throw std::invalid_argument("stroboscopic_map: omega must be nonzero");
    const double T = period_fraction * (0.5 * two_pi) / std::abs(flow.omega);
    const long n_steps = std::max(1l, std::lround(T / dt));
    const Stepper st(flow, kernel, f0.n_modes(), T / double(n_steps));
    std::vector<cxd> c = f0.raw();
    for (long i = 0; i < n_steps; ++i)
        st.advance(c);
    return rotate_frame(field_from_raw(c, f0.n_modes()), -flow.omega * T);
}

TumblingSearch find_tumbling(const FlowParams& flow, const KernelSpec& kernel,
                             const SpectralField& init, int max_iters, double dt,
                             double tol_orbit) {
    TumblingSearch out{init, 0.0, 0, false};
    SpectralField cur = init;
    for (int it = 0; it < max_iters; ++it) {
        SpectralField next = stroboscopic_map(cur, flow, kernel, dt);
        out.residual = l2_distance(next, cur);
        out.iterations = it + 1;
        cur = std::move(next);
        if (out.residual < tol_orbit) {
            out.converged = true;
            break;
        }
    }
    out.orbit = std::move(cur);
    return out;
}

const char* to_string(ClassificationResult::Kind kind) {
    switch (kind) {
    case ClassificationResult::Kind::Steady: return "steady";
    case ClassificationResult::Kind::Tumbling: return "tumbling";
    case ClassificationResult::Kind::Unresolved: return "unresolved";
    }
    return "unresolved";
}

ClassificationResult classify(const SimConfig& cfg, const Tolerances& tol) {
    ClassificationResult out;
    out.t_end = cfg.t_end;

    SpectralField f = build_initial(cfg.initial, cfg.n_modes, cfg.kernel);
    FlowParams flow = cfg.flow;
    if (flow.alpha != 0.0) {
        f = rotate_frame(f, -0.5 * flow.alpha);
        flow.alpha = 0.0;
    }

    const long n_steps = std::lround(cfg.t_end / cfg.dt);
    const Stepper st(flow, cfg.kernel, cfg.n_modes, cfg.dt);
    const double period = flow.omega != 0.0 ? (0.5 * two_pi) / std::abs(flow.omega) : 0.0;
    const long snapshot_step =
        flow.omega != 0.0 ? n_steps - std::lround(0.5 * period / cfg.dt) : -1;

    std::vector<cxd> c = f.raw();
    SpectralField half_period_snapshot(cfg.n_modes);
    for (long i = 1; i <= n_steps; ++i) {
        st.advance(c);
        if (i == snapshot_step)
            half_period_snapshot = field_from_raw(c, cfg.n_modes);
        if (i % cfg.record_every == 0 || i == n_steps) {
            bool ok = true;
            for (const cxd& v : c)
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                    ok = false;
            if (!ok) {
                out.kind = ClassificationResult::Kind::Unresolved;
                out.diagnostic = "blow-up at t = " + std::to_string(double(i) * cfg.dt);
                return out;
            }
        }
    }
    const SpectralField f_end = field_from_raw(c, cfg.n_modes);
    const Norms rhs_norm = norms(rhs(f_end, flow, cfg.kernel));
    out.residual_steady = rhs_norm.l2;

    if (flow.omega == 0.0) {
        out.kind = out.residual_steady < tol.tol_s ? ClassificationResult::Kind::Steady
                                                   : ClassificationResult::Kind::Unresolved;
        return out;
    }

    out.residual_strobe = l2_distance(f_end, stroboscopic_map(f_end, flow, cfg.kernel, cfg.dt));
    out.time_variation = l2_distance(f_end, half_period_snapshot);

    if (out.residual_steady < tol.tol_s) {
        out.kind = ClassificationResult::Kind::Steady;
    } else if (out.residual_strobe < tol.tol_s && out.time_variation > tol.tol_var &&
               out.residual_steady > tol.tol_var) {
        out.kind = ClassificationResult::Kind::Tumbling;
        out.period = period;
        const double half_res =
            l2_distance(f_end, stroboscopic_map(f_end, flow, cfg.kernel, cfg.dt, 0.5));
        out.rigid_rotation = half_res < tol.tol_s;
    } else {
        out.kind = ClassificationResult::Kind::Unresolved;
        out.diagnostic = "no verdict at t_end (residual_steady = " +
                         std::to_string(out.residual_steady) +
                         ", residual_strobe = " + std::to_string(out.residual_strobe) + ")";
    }
    return out;
}

ConditionReport theorem2_conditions(double b, double s, const KernelSpec& kernel, double C_gn,
                                    double epsilon) {
    ConditionReport rep;
    rep.M = 2.0 * s;
    rep.Nk = kernel.sup_deriv(2);
    rep.C_gn = C_gn;
    rep.epsilon = epsilon;
    const DissipativityBound bound = dissipativity_bound(rep.M, rep.Nk, b, C_gn, epsilon);
    rep.Cbar = bound.Cbar;
    const double inv_pi = 2.0 / two_pi;
    rep.R1 = rep.Cbar + inv_pi + epsilon;
    rep.R2 = epsilon + (2.0 * s + b * rep.Nk) * (8.0 * rep.Cbar + 6.0 * inv_pi);
    const double sqrt2pi = std::sqrt(two_pi);

    const double l2_rhs = s + b * sqrt2pi * rep.R1 * kernel.sup_deriv(1) + 0.5 * b * rep.Nk;
    rep.condl2_margin = 1.0 - l2_rhs;

    const double h1_rhs = 7.0 * s + 0.5 * b * kernel.sup_deriv(4) + 1.5 * b * rep.Nk +
                          b * sqrt2pi * kernel.sup_deriv(0) *
                              (epsilon + (2.0 * s + b * rep.Nk) * (8.0 * rep.Cbar + 6.0 * inv_pi) +
                               rep.Cbar + inv_pi);
    rep.condh1_margin = 1.0 - h1_rhs;
    rep.holds = rep.condl2_margin > 0.0 && rep.condh1_margin > 0.0;
    return rep;
}

ContractionResult contraction_test(const SimConfig& cfg, std::uint64_t seed1,
                                   std::uint64_t seed2) {
    InitialData init1 = cfg.initial, init2 = cfg.initial;
    init1.kind = InitialData::Kind::FourierPerturbation;
    init2.kind = InitialData::Kind::FourierPerturbation;
    init1.seed = seed1;
    init2.seed = seed2;
    SpectralField fa = build_initial(init1, cfg.n_modes, cfg.kernel);
    SpectralField fb = build_initial(init2, cfg.n_modes, cfg.kernel);

    FlowParams flow = cfg.flow;
    if (flow.alpha != 0.0) {
        fa = rotate_frame(fa, -0.5 * flow.alpha);
        fb = rotate_frame(fb, -0.5 * flow.alpha);
        flow.alpha = 0.0;
    }
    const Stepper st(flow, cfg.kernel, cfg.n_modes, cfg.dt);
    const long n_steps = std::lround(cfg.t_end / cfg.dt);
    std::vector<cxd> ca = fa.raw(), cb = fb.raw();

    ContractionResult out;
    out.gap_series.emplace_back(0.0, h1_distance(fa, fb));
    for (long i = 1; i <= n_steps; ++i) {
        st.advance(ca);
        st.advance(cb);
        if (i % cfg.record_every == 0 || i == n_steps)
            out.gap_series.emplace_back(double(i) * cfg.dt,
                                        h1_distance(field_from_raw(ca, cfg.n_modes),
                                                    field_from_raw(cb, cfg.n_modes)));
    }

    // log-linear fit over the final half of the run; exact-zero gaps
    // (identical initial data) report rate 0
    double t0 = 0.5 * cfg.t_end;
    double sxx = 0.0, sxy = 0.0, sx = 0.0, sy = 0.0;
    long cnt = 0;
    double max_gap = 0.0;
    for (const auto& [t, gap] : out.gap_series)
        max_gap = std::max(max_gap, gap);
    if (max_gap == 0.0)
        return out;
    for (const auto& [t, gap] : out.gap_series) {
        if (t < t0)
            continue;
        const double lg = std::log(std::max(gap, 1e-300));
        sx += t;
        sy += lg;
        sxx += t * t;
        sxy += t * lg;
        ++cnt;
    }
    if (cnt >= 2) {
        const double denom = double(cnt) * sxx - sx * sx;
        out.rate = denom != 0.0 ? (double(cnt) * sxy - sx * sy) / denom : 0.0;
    }
    return out;
}

SpectralField peaked_initial(double target_h1, int n_modes) {
    auto blend = [&](double wgt) {
        SpectralField f(n_modes);
        f.set_pair(0, cxd(1.0 / two_pi, 0.0));
        for (int n = 1; n <= n_modes; ++n)
            f.set_pair(n, cxd(wgt * (1.0 - double(n) / double(n_modes + 1)) / two_pi, 0.0));
        return f;
    };
    const double top = norms(blend(1.0)).h1;
    if (target_h1 > top)
        throw std::invalid_argument("peaked_initial: H1 target " + std::to_string(target_h1) +
                                    " unreachable at N = " + std::to_string(n_modes) +
                                    " (max " + std::to_string(top) + ")");
    if (target_h1 <= norms(blend(0.0)).h1)
        return blend(0.0);
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (norms(blend(mid)).h1 < target_h1 ? lo : hi) = mid;
    }
    return blend(0.5 * (lo + hi));
}

DissipativityReport dissipativity_probe(const KernelSpec& kernel, const FlowParams& flow,
                                        const std::vector<double>& init_scales,
                                        double window_start, double window_end, int n_modes,
                                        double dt) {
    DissipativityReport rep;
    const long n_steps = std::lround(window_end / dt);
    const long check_every = std::max(1l, std::lround(0.05 / dt));
    const Stepper st(flow, kernel, n_modes, dt);

    struct RunData {
        std::vector<double> t, l2sq, h1;
    };
    std::vector<RunData> runs;

    for (double scale : init_scales) {
        SpectralField f0 = peaked_initial(scale, n_modes);
        DissipativityScale cell;
        cell.target_h1 = scale;
        const Norms n0 = norms(f0);
        cell.init_h1 = n0.h1;
        cell.init_l2_sq = n0.l2 * n0.l2;

        RunData data;
        std::vector<cxd> c = f0.raw();
        auto push = [&](long i) {
            const SpectralField snap = field_from_raw(c, n_modes);
            const Norms nm = norms(snap);
            data.t.push_back(double(i) * dt);
            data.l2sq.push_back(nm.l2 * nm.l2);
            data.h1.push_back(nm.h1);
        };
        push(0);
        for (long i = 1; i <= n_steps; ++i) {
            st.advance(c);
            if (i % check_every == 0 || i == n_steps)
                push(i);
        }
        double sup_l2 = 0.0, sup_h1 = 0.0;
        for (std::size_t j = 0; j < data.t.size(); ++j) {
            if (data.t[j] >= window_start && data.t[j] <= window_end) {
                sup_l2 = std::max(sup_l2, std::sqrt(data.l2sq[j]));
                sup_h1 = std::max(sup_h1, data.h1[j]);
            }
        }
        cell.late_sup_l2 = sup_l2;
        cell.late_sup_h1 = sup_h1;
        rep.scales.push_back(cell);
        runs.push_back(std::move(data));
    }

    // common absorbing level: smallest B so that every run satisfies
    // |f(t)|^2 <= |f(0)|^2 e^{-t/2} + B
    double B = 0.0;
    for (std::size_t rix = 0; rix < runs.size(); ++rix) {
        const double l2sq0 = rep.scales[rix].init_l2_sq;
        for (std::size_t j = 0; j < runs[rix].t.size(); ++j)
            B = std::max(B, runs[rix].l2sq[j] - l2sq0 * std::exp(-0.5 * runs[rix].t[j]));
    }
    rep.fitted_B = B;
    for (std::size_t rix = 0; rix < runs.size(); ++rix) {
        const double l2sq0 = rep.scales[rix].init_l2_sq;
        bool ok = true;
        for (std::size_t j = 0; j < runs[rix].t.size(); ++j)
            if (runs[rix].l2sq[j] - B > l2sq0 * std::exp(-0.5 * runs[rix].t[j]) + 1e-12)
                ok = false;
        rep.scales[rix].envelope_ok = ok;
    }

    double smin = 1e300, smax = 0.0;
    for (const auto& cell : rep.scales) {
        smin = std::min(smin, cell.late_sup_h1);
        smax = std::max(smax, cell.late_sup_h1);
    }
    rep.h1_spread = smin > 0.0 ? smax / smin : 0.0;
    rep.common_bound = rep.h1_spread <= 1.05;
    return rep;
}

std::vector<SweepCell> sweep(const std::vector<double>& b_grid, const std::vector<double>& s_grid,
                             const std::vector<double>& omega_grid, const SimConfig& templ,
                             const Tolerances& tol, unsigned max_threads) {
    if (b_grid.empty() || s_grid.empty() || omega_grid.empty())
        throw std::invalid_argument("sweep: parameter grids must be nonempty");
    struct Task {
        double b, s, omega;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    std::uint64_t idx = 0;
    for (double b : b_grid)
        for (double s : s_grid)
            for (double omega : omega_grid)
                tasks.push_back({b, s, omega, templ.initial.seed + idx++});

    std::vector<SweepCell> cells(tasks.size());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= tasks.size())
                return;
            const Task& tk = tasks[i];
            SweepCell cell;
            cell.b = tk.b;
            cell.s = tk.s;
            cell.omega = tk.omega;
            cell.seed = tk.seed;
            SimConfig cfg = templ;
            cfg.kernel = (templ.kernel.variant() == KernelSpec::Variant::MaierSaupe)
                             ? KernelSpec::maier_saupe(tk.b)
                             : KernelSpec::cosine_series(templ.kernel.cosine_coeffs(), tk.b);
            cfg.flow = FlowParams{tk.omega, tk.s, templ.flow.alpha};
            cfg.initial.seed = tk.seed;
            try {
                cell.result = classify(cfg, tol);
            } catch (const std::exception& e) {
                cell.result.kind = ClassificationResult::Kind::Unresolved;
                cell.result.diagnostic = e.what();
            }
            cells[i] = std::move(cell);
        }
    };

    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0)
        hw = 1;
    unsigned n_threads = max_threads == 0 ? hw : std::min(max_threads, hw);
    n_threads = std::min<unsigned>(n_threads, unsigned(tasks.size()));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n_threads; ++i)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    return cells;
}

} // namespace smolu
