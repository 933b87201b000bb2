#include "smolu/equilibria.hpp"

#include <cmath>
#include <stdexcept>

namespace smolu {

namespace {

constexpr int kQuadPoints = 1024;

// int cos^2(2 theta) e^{x cos(2 theta)} d theta, for Newton's method
double h_second(double x) {
    double acc = 0.0;
    for (int j = 0; j < kQuadPoints; ++j) {
        const double c = std::cos(2.0 * two_pi * double(j) / double(kQuadPoints));
        acc += c * c * std::exp(x * c);
    }
    return acc * two_pi / double(kQuadPoints);
}

double r_residual(double r, double b) {
    const HQuad q = h_quad(r);
    return q.hprime / q.h - 2.0 * r / b;
}

} // namespace

HQuad h_quad(double x) {
    double h = 0.0, hp = 0.0;
    for (int j = 0; j < kQuadPoints; ++j) {
        const double c = std::cos(2.0 * two_pi * double(j) / double(kQuadPoints));
        const double e = std::exp(x * c);
        h += e;
        hp += c * e;
    }
    const double w = two_pi / double(kQuadPoints);
    return {h * w, hp * w};
}

std::optional<double> solve_r(double b) {
    if (b <= 0.0)
        throw std::invalid_argument("solve_r: concentration b must be > 0");
    double lo = 1e-8;
    if (r_residual(lo, b) <= 0.0)
        return std::nullopt; // b <= 4: only the isotropic root r = 0
    double hi = 50.0;
    while (r_residual(hi, b) > 0.0) {
        hi *= 2.0;
        if (hi > 1e6)
            throw std::runtime_error("solve_r: failed to bracket the nematic root");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-6; ++it) {
        const double mid = 0.5 * (lo + hi);
        (r_residual(mid, b) > 0.0 ? lo : hi) = mid;
    }
    double r = 0.5 * (lo + hi);
    for (int it = 0; it < 50; ++it) {
        const HQuad q = h_quad(r);
        const double phi = q.hprime / q.h - 2.0 * r / b;
        if (std::abs(phi) < 1e-12)
            break;
        const double ratio_d = (h_second(r) * q.h - q.hprime * q.hprime) / (q.h * q.h);
        const double step = phi / (ratio_d - 2.0 / b);
        r -= step;
        if (r < lo || r > hi)
            r = 0.5 * (lo + hi); // Newton left the bracket; fall back
    }
    if (std::abs(r_residual(r, b)) > 1e-12)
        throw std::runtime_error("solve_r: Newton polish did not reach tolerance");
    return r;
}

NematicState nematic_state(double b, int sign) {
    const auto r = solve_r(b);
    if (!r)
        throw std::invalid_argument("nematic_state: no nematic branch for b <= 4");
    return {b, *r, h_quad(*r).h, sign >= 0 ? +1 : -1};
}

NematicState isotropic_state(double b) { return {b, 0.0, two_pi, +1}; }

double nematic_value(const NematicState& s, double theta) {
    return std::exp(double(s.sign) * s.r * std::cos(2.0 * theta)) / s.Z;
}

SpectralField nematic_field(const NematicState& s, int n_modes) {
    const int m = 8 * n_modes;
    GridField grid;
    grid.samples.resize(std::size_t(m));
    for (int j = 0; j < m; ++j)
        grid.samples[std::size_t(j)] = nematic_value(s, two_pi * double(j) / double(m));
    return analyze(grid, n_modes);
}

GradientPotential GradientPotential::zero(int n_modes) {
    return GradientPotential(SpectralField(n_modes));
}

GradientPotential GradientPotential::from_strain(double s, double alpha, int n_modes) {
    SpectralField w(n_modes);
    // (s/2) sin(2 theta + alpha) has c_2 = -i (s/4) e^{i alpha}
    w.set_pair(2, cxd(0.0, -0.25 * s) * std::polar(1.0, alpha));
    return GradientPotential(std::move(w));
}

GradientPotential GradientPotential::from_field(SpectralField w) {
    return GradientPotential(std::move(w));
}

namespace {

// shared grid setup for the energy integrals
struct EnergyGrids {
    GridField f, kf, w;
};

EnergyGrids energy_grids(const SpectralField& f, const KernelSpec& k, const GradientPotential& w) {
    const int m = 8 * f.n_modes();
    EnergyGrids g;
    g.f = synthesize(f, m);
    g.kf = synthesize(convolve(k, f), m);
    SpectralField wf = w.field();
    if (wf.n_modes() != f.n_modes()) {
        SpectralField resized(f.n_modes());
        for (int n = 0; n <= std::min(wf.n_modes(), f.n_modes()); ++n)
            resized.set_pair(n, wf.coeff(n));
        wf = resized;
    }
    g.w = synthesize(wf, m);
    return g;
}

} // namespace

double energy(const SpectralField& f, const KernelSpec& k, const GradientPotential& w) {
    const EnergyGrids g = energy_grids(f, k, w);
    const std::size_t m = g.f.samples.size();
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        double fv = g.f.samples[j];
        if (fv < -1e-8)
            throw std::domain_error("energy: density below -1e-8, entropy undefined");
        if (fv < 0.0)
            fv = 0.0;
        const double ent = fv > 0.0 ? fv * std::log(fv) : 0.0;
        acc += ent - 0.5 * g.kf.samples[j] * fv - g.w.samples[j] * fv;
    }
    return acc * two_pi / double(m);
}

double energy_dissipation(const SpectralField& f, const KernelSpec& k, const GradientPotential& w) {
    const int m = 8 * f.n_modes();
    const GridField fv = synthesize(f, m);
    const GridField df = synthesize(d_theta(f), m);
    const GridField dkf = synthesize(d_theta(convolve(k, f)), m);
    SpectralField wf = w.field();
    if (wf.n_modes() != f.n_modes()) {
        SpectralField resized(f.n_modes());
        for (int n = 0; n <= std::min(wf.n_modes(), f.n_modes()); ++n)
            resized.set_pair(n, wf.coeff(n));
        wf = resized;
    }
    const GridField dw = synthesize(d_theta(wf), m);
    double acc = 0.0;
    for (int j = 0; j < m; ++j) {
        const double fj = fv.samples[std::size_t(j)];
        if (fj < -1e-8)
            throw std::domain_error("energy_dissipation: density below -1e-8");
        if (fj <= 0.0)
            continue; // x log x extension: zero-clamped points contribute nothing
        const double grad = df.samples[std::size_t(j)] / fj - dkf.samples[std::size_t(j)] -
                            dw.samples[std::size_t(j)];
        acc += grad * grad * fj;
    }
    return -acc * two_pi / double(m);
}

OrderParams order_params(const SpectralField& f) {
    OrderParams out;
    for (int k = 1; k <= 4; ++k) {
        const cxd c = f.coeff(2 * k);
        out.y[std::size_t(k - 1)] = two_pi * c.real();
        out.s[std::size_t(k - 1)] = -two_pi * c.imag();
    }
    const double mag = std::hypot(out.y[0], out.s[0]);
    out.director_defined = mag > 1e-12;
    out.director_angle = out.director_defined ? 0.5 * std::atan2(out.s[0], out.y[0]) : 0.0;
    return out;
}

DissipativityBound dissipativity_bound(double M, double Nk, double b, double C_gn, double epsilon) {
    const double cbrt2 = std::cbrt(2.0);
    const double c23 = cbrt2 * cbrt2; // 2^{2/3}
    const double t1 = 0.5 * (M + b * Nk) * (1.0 / two_pi + C_gn * cbrt2);
    const double t2 = (M * C_gn / c23) * (M * C_gn / c23);
    const double t3 = (b * Nk * C_gn / c23) * (b * Nk * C_gn / c23);
    return {M, Nk, b, C_gn, epsilon, 4.0 * (t1 + t2 + t3)};
}

} // namespace smolu
