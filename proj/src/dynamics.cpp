#include "smolu/dynamics.hpp"

#include "smolu/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace smolu {

FlowParams flow_from_gradient(const VelocityGradient& u) {
    // V = -u11 cos sin - u12 sin^2 + u21 cos^2 + u22 sin cos
    //   = (u21 - u12)/2 + A cos(2 theta) + B sin(2 theta)
    const double a = 0.5 * (u.u12 + u.u21);
    const double b = 0.5 * (u.u22 - u.u11);
    FlowParams out;
    out.omega = 0.5 * (u.u21 - u.u12);
    out.s = std::hypot(a, b);
    out.alpha = out.s > 0.0 ? std::atan2(-b, a) : 0.0;
    if (out.alpha < 0.0)
        out.alpha += two_pi;
    return out;
}

SpectralField rotate_frame(const SpectralField& f, double phi) {
    const int n = f.n_modes();
    SpectralField out(n);
    for (int m = 0; m <= n; ++m)
        out.set_pair(m, f.coeff(m) * std::polar(1.0, double(m) * phi));
    out.check_symmetry("rotate_frame");
    return out;
}

Stepper::Stepper(const FlowParams& flow, const KernelSpec& kernel, int n_modes, double dt)
    : n_(n_modes), dt_(dt) {
    if (dt <= 0.0)
        throw std::invalid_argument("Stepper: dt must be > 0");
    if (flow.s < 0.0)
        throw std::invalid_argument("Stepper: strain amplitude s must be >= 0");
    v0_ = cxd(flow.omega, 0.0);
    v2_ = 0.5 * flow.s * std::polar(1.0, flow.alpha);
    for (int p = 1; p <= kernel.max_mode(); ++p)
        if (kernel.exp_coeff(p) != 0.0)
            kmods_.emplace_back(p, two_pi * kernel.b() * kernel.exp_coeff(p));
    e_half_.resize(2 * std::size_t(n_) + 1);
    e_full_.resize(2 * std::size_t(n_) + 1);
    for (int m = -n_; m <= n_; ++m) {
        e_half_[std::size_t(m + n_)] = std::exp(-double(m) * double(m) * dt * 0.5);
        e_full_[std::size_t(m + n_)] = std::exp(-double(m) * double(m) * dt);
    }
    const std::size_t len = 2 * std::size_t(n_) + 1;
    k1_.resize(len);
    k2_.resize(len);
    k3_.resize(len);
    k4_.resize(len);
    a_.resize(len);
}

void Stepper::nonlinear(const std::vector<cxd>& c, std::vector<cxd>& out) const {
    const int n = n_;
    auto at = [&](int m) -> cxd {
        return (m < -n || m > n) ? cxd(0.0, 0.0) : c[std::size_t(m + n)];
    };
    // u = V f + (d_theta Kf) f, both multipliers band-limited;
    // out = -d_theta u, which zeroes mode 0 exactly
    for (int m = -n; m <= n; ++m) {
        cxd u = v0_ * at(m) + v2_ * at(m - 2) + std::conj(v2_) * at(m + 2);
        for (const auto& [p, w] : kmods_) {
            // (d_theta Kf)_p = i p w c_p ; add both +p and -p contributions
            u += cxd(0.0, double(p) * w) * at(p) * at(m - p);
            u += cxd(0.0, -double(p) * w) * at(-p) * at(m + p);
        }
        out[std::size_t(m + n)] = cxd(0.0, -double(m)) * u;
    }
}

void Stepper::advance(std::vector<cxd>& c) const {
    const std::size_t len = c.size();
    const double h = dt_;
    nonlinear(c, k1_);
    for (std::size_t i = 0; i < len; ++i)
        a_[i] = e_half_[i] * (c[i] + 0.5 * h * k1_[i]);
    nonlinear(a_, k2_);
    for (std::size_t i = 0; i < len; ++i)
        a_[i] = e_half_[i] * c[i] + 0.5 * h * k2_[i];
    nonlinear(a_, k3_);
    for (std::size_t i = 0; i < len; ++i)
        a_[i] = e_full_[i] * c[i] + h * e_half_[i] * k3_[i];
    nonlinear(a_, k4_);
    for (std::size_t i = 0; i < len; ++i)
        c[i] = e_full_[i] * c[i] +
               (h / 6.0) * (e_full_[i] * k1_[i] + 2.0 * e_half_[i] * (k2_[i] + k3_[i]) + k4_[i]);
}

SpectralField Stepper::step(const SpectralField& f) const {
    std::vector<cxd> c = f.raw();
    advance(c);
    SpectralField out(n_);
    for (int m = 0; m <= n_; ++m)
        out.set_pair(m, c[std::size_t(m + n_)]);
    out.check_symmetry("step");
    return out;
}

SpectralField rhs(const SpectralField& f, const FlowParams& flow, const KernelSpec& k) {
    Stepper st(flow, k, f.n_modes(), 1.0);
    std::vector<cxd> out(f.raw().size());
    st.nonlinear(f.raw(), out);
    SpectralField res(f.n_modes());
    for (int m = 0; m <= f.n_modes(); ++m)
        res.set_pair(m, out[std::size_t(m + f.n_modes())] -
                            double(m) * double(m) * f.coeff(m));
    res.check_symmetry("rhs");
    return res;
}

SpectralField step(const SpectralField& f, const FlowParams& flow, const KernelSpec& k, double dt) {
    Stepper st(flow, k, f.n_modes(), dt);
    SpectralField out = st.step(f);
    for (int m = 0; m <= f.n_modes(); ++m) {
        const cxd v = out.coeff(m);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::runtime_error("step: non-finite values produced");
    }
    return out;
}

InitialData InitialData::isotropic() { return InitialData{}; }

InitialData InitialData::nematic(int sign) {
    InitialData d;
    d.kind = Kind::Nematic;
    d.sign = sign >= 0 ? +1 : -1;
    return d;
}

InitialData InitialData::fourier(std::uint64_t seed, double amplitude, double decay) {
    InitialData d;
    d.kind = Kind::FourierPerturbation;
    d.seed = seed;
    d.amplitude = amplitude;
    d.decay = decay;
    return d;
}

InitialData InitialData::explicit_coeffs(std::vector<cxd> c) {
    InitialData d;
    d.kind = Kind::ExplicitCoeffs;
    d.coeffs = std::move(c);
    return d;
}

SpectralField build_initial(const InitialData& init, int n_modes, const KernelSpec& kernel) {
    switch (init.kind) {
    case InitialData::Kind::Isotropic:
        return SpectralField::isotropic(n_modes);
    case InitialData::Kind::Nematic: {
        if (kernel.variant() != KernelSpec::Variant::MaierSaupe)
            throw std::invalid_argument("build_initial: nematic start needs the Maier-Saupe kernel");
        return nematic_field(nematic_state(kernel.b(), init.sign), n_modes);
    }
    case InitialData::Kind::FourierPerturbation: {
        SpectralField f(n_modes);
        f.set_pair(0, cxd(1.0 / two_pi, 0.0));
        Rng rng(init.seed);
        double amp = init.amplitude;
        for (int n = 1; n <= n_modes / 2; ++n) {
            amp *= init.decay;
            f.set_pair(n, amp * std::polar(1.0, two_pi * rng.next_unit()));
        }
        const double lowest = min_over_grid(f);
        if (lowest <= 0.0) {
            // lift above zero, then renormalize the mass back to one
            const double shift = -lowest + 0.01 / two_pi;
            f.set_pair(0, f.coeff(0) + shift);
            const double mass = f.mass();
            for (int n = 0; n <= n_modes; ++n)
                f.set_pair(n, f.coeff(n) / mass);
        }
        return f;
    }
    case InitialData::Kind::ExplicitCoeffs: {
        if (init.coeffs.size() % 2 != 1)
            throw std::invalid_argument("build_initial: explicit coefficients need odd length 2N+1");
        const int nin = int(init.coeffs.size() / 2);
        const SpectralField given = SpectralField::from_coeffs(nin, init.coeffs);
        SpectralField f(n_modes);
        for (int n = 0; n <= std::min(nin, n_modes); ++n)
            f.set_pair(n, given.coeff(n));
        return f;
    }
    }
    throw std::logic_error("build_initial: unreachable");
}

namespace {

TrajectoryRecord make_record(double t, const SpectralField& f, const KernelSpec& kernel,
                             const FlowParams& flow, bool gradient_type) {
    TrajectoryRecord rec;
    rec.t = t;
    rec.field = f;
    const OrderParams op = order_params(f);
    rec.y = op.y;
    rec.s = op.s;
    const Norms nm = norms(f);
    rec.l2 = nm.l2;
    rec.h1 = nm.h1;
    rec.min_f = min_over_grid(f);
    if (gradient_type) {
        const GradientPotential w =
            GradientPotential::from_strain(flow.s, flow.alpha, f.n_modes());
        rec.energy = energy(f, kernel, w);
    }
    return rec;
}

bool finite(const std::vector<cxd>& c) {
    for (const cxd& v : c)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            return false;
    return true;
}

} // namespace

SimResult simulate(const SimConfig& cfg) {
    if (cfg.dt <= 0.0)
        throw std::invalid_argument("simulate: sim.dt must be > 0");
    if (cfg.t_end <= 0.0)
        throw std::invalid_argument("simulate: sim.t_end must be > 0");
    if (cfg.record_every < 1)
        throw std::invalid_argument("simulate: sim.record_every must be >= 1");
    if (cfg.n_modes < 4)
        throw std::invalid_argument("simulate: sim.n_modes must be >= 4");

    SimResult result;
    SpectralField f = build_initial(cfg.initial, cfg.n_modes, cfg.kernel);
    FlowParams flow = cfg.flow;
    if (flow.alpha != 0.0) {
        // shift theta -> theta - alpha/2 so the strain phase is zero
        result.alpha_shift = -0.5 * flow.alpha;
        f = rotate_frame(f, result.alpha_shift);
        flow.alpha = 0.0;
    }
    if (std::abs(f.mass() - 1.0) > 1e-12)
        throw std::invalid_argument("simulate: initial field must have mass 1");
    if (min_over_grid(f) <= 0.0)
        throw std::invalid_argument("simulate: initial field must be positive");

    const bool gradient_type = flow.omega == 0.0;
    const long n_steps = std::lround(cfg.t_end / cfg.dt);
    const Stepper st(flow, cfg.kernel, cfg.n_modes, cfg.dt);
    std::vector<cxd> c = f.raw();

    auto record_from_raw = [&](long step_idx) {
        SpectralField snap(cfg.n_modes);
        for (int m = 0; m <= cfg.n_modes; ++m)
            snap.set_pair(m, c[std::size_t(m + cfg.n_modes)]);
        return make_record(double(step_idx) * cfg.dt, snap, cfg.kernel, flow, gradient_type);
    };

    result.records.push_back(record_from_raw(0));
    for (long i = 1; i <= n_steps; ++i) {
        st.advance(c);
        const bool due = (i % cfg.record_every == 0) || i == n_steps;
        if (!due)
            continue;
        if (!finite(c)) {
            result.status = SimStatus::Aborted;
            result.diagnostic =
                "non-finite values at t = " + std::to_string(double(i) * cfg.dt);
            return result;
        }
        TrajectoryRecord rec = record_from_raw(i);
        const double minf = rec.min_f;
        result.records.push_back(std::move(rec));
        if (minf < -1e-6) {
            result.status = SimStatus::Aborted;
            result.diagnostic = "density fell below -1e-6 at t = " +
                                std::to_string(double(i) * cfg.dt);
            return result;
        }
    }
    return result;
}

std::vector<double> mode_ode_rhs(const std::vector<double>& y, double b) {
    const std::size_t K = y.size();
    std::vector<double> dy(K);
    const double y1 = K > 0 ? y[0] : 0.0;
    for (std::size_t k = 1; k <= K; ++k) {
        const double prev = (k == 1) ? 1.0 : y[k - 2];
        const double next = (k == K) ? 0.0 : y[k];
        dy[k - 1] = -4.0 * double(k) * double(k) * y[k - 1] +
                    b * double(k) * y1 * (prev - next);
    }
    return dy;
}

ModeTrajectory simulate_even(const ModeState& y0, double b, double dt, double t_end, int K,
                             int record_every) {
    if (dt <= 0.0 || t_end <= 0.0 || K < 1 || record_every < 1)
        throw std::invalid_argument("simulate_even: invalid parameters");
    std::vector<double> y(std::size_t(K), 0.0);
    for (std::size_t k = 0; k < std::min(y0.y.size(), y.size()); ++k)
        y[k] = y0.y[k];

    const long n_steps = std::lround(t_end / dt);
    ModeTrajectory traj;
    traj.t.push_back(0.0);
    traj.states.push_back(ModeState{y});

    std::vector<double> tmp(y.size());
    auto axpy = [&](const std::vector<double>& base, double a, const std::vector<double>& d) {
        for (std::size_t i = 0; i < tmp.size(); ++i)
            tmp[i] = base[i] + a * d[i];
        return tmp;
    };
    for (long i = 1; i <= n_steps; ++i) {
        const auto d1 = mode_ode_rhs(y, b);
        const auto d2 = mode_ode_rhs(axpy(y, 0.5 * dt, d1), b);
        const auto d3 = mode_ode_rhs(axpy(y, 0.5 * dt, d2), b);
        const auto d4 = mode_ode_rhs(axpy(y, dt, d3), b);
        for (std::size_t j = 0; j < y.size(); ++j)
            y[j] += dt / 6.0 * (d1[j] + 2.0 * d2[j] + 2.0 * d3[j] + d4[j]);
        if (i % record_every == 0 || i == n_steps) {
            for (double v : y)
                if (!std::isfinite(v))
                    throw std::runtime_error("simulate_even: non-finite values at t = " +
                                             std::to_string(double(i) * dt));
            traj.t.push_back(double(i) * dt);
            traj.states.push_back(ModeState{y});
        }
    }
    return traj;
}

} // namespace smolu
