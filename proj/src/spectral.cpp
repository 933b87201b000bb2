#include "smolu/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace smolu {

namespace {
std::atomic<bool> g_checks{false};
}

void set_invariant_checks(bool on) { g_checks.store(on); }
bool invariant_checks_enabled() { return g_checks.load(std::memory_order_relaxed); }

SpectralField::SpectralField(int n_modes) : n_modes_(n_modes) {
    if (n_modes < 1)
        throw std::invalid_argument("SpectralField: truncation must be >= 1");
    c_.assign(2 * std::size_t(n_modes) + 1, cxd(0.0, 0.0));
}

SpectralField SpectralField::isotropic(int n_modes) {
    SpectralField f(n_modes);
    f.c_[std::size_t(n_modes)] = cxd(1.0 / two_pi, 0.0);
    return f;
}

SpectralField SpectralField::from_coeffs(int n_modes, const std::vector<cxd>& coeffs) {
    if (int(coeffs.size()) != 2 * n_modes + 1)
        throw std::invalid_argument("SpectralField: coefficient vector has wrong size");
    SpectralField f(n_modes);
    for (int n = 0; n <= n_modes; ++n) {
        cxd a = coeffs[std::size_t(n_modes + n)];
        cxd b = coeffs[std::size_t(n_modes - n)];
        if (std::abs(a - std::conj(b)) > 1e-9 * (1.0 + std::abs(a)))
            throw std::invalid_argument("SpectralField: coefficients are not conjugate symmetric");
        cxd v = 0.5 * (a + std::conj(b));
        f.set_pair(n, v);
    }
    return f;
}

cxd SpectralField::coeff(int n) const {
    if (n < -n_modes_ || n > n_modes_)
        return cxd(0.0, 0.0);
    return c_[std::size_t(n + n_modes_)];
}

void SpectralField::set_pair(int n, cxd v) {
    if (n < 0)
        throw std::invalid_argument("SpectralField::set_pair: n must be >= 0");
    if (n > n_modes_)
        throw std::invalid_argument("SpectralField::set_pair: n beyond truncation");
    if (n == 0) {
        c_[std::size_t(n_modes_)] = cxd(v.real(), 0.0);
    } else {
        c_[std::size_t(n_modes_ + n)] = v;
        c_[std::size_t(n_modes_ - n)] = std::conj(v);
    }
}

double SpectralField::mass() const { return two_pi * c_[std::size_t(n_modes_)].real(); }

void SpectralField::check_symmetry(const char* where) const {
    if (!invariant_checks_enabled())
        return;
    for (int n = 0; n <= n_modes_; ++n) {
        cxd a = c_[std::size_t(n_modes_ + n)];
        cxd b = c_[std::size_t(n_modes_ - n)];
        if (std::abs(a - std::conj(b)) > 1e-12 * (1.0 + std::abs(a)))
            throw std::logic_error(std::string("conjugate symmetry violated after ") + where);
    }
}

KernelSpec KernelSpec::maier_saupe(double b) {
    if (b < 0.0)
        throw std::invalid_argument("KernelSpec: concentration b must be >= 0");
    KernelSpec k;
    k.variant_ = Variant::MaierSaupe;
    k.khat_ = {0.0, 0.0, 0.25}; // (1/2)cos(2 theta) = (1/4)*2cos(2 theta)
    k.b_ = b;
    return k;
}

KernelSpec KernelSpec::cosine_series(std::vector<double> cos_coeffs, double b) {
    if (b < 0.0)
        throw std::invalid_argument("KernelSpec: concentration b must be >= 0");
    if (cos_coeffs.empty())
        cos_coeffs.push_back(0.0);
    KernelSpec k;
    k.variant_ = Variant::CosineSeries;
    k.khat_ = std::move(cos_coeffs);
    k.b_ = b;
    return k;
}

double KernelSpec::exp_coeff(int n) const {
    int m = std::abs(n);
    if (m >= int(khat_.size()))
        return 0.0;
    return khat_[std::size_t(m)];
}

double KernelSpec::sup_deriv(int order) const {
    double s = (order == 0) ? std::abs(khat_[0]) : 0.0;
    for (int m = 1; m < int(khat_.size()); ++m)
        s += 2.0 * std::abs(khat_[std::size_t(m)]) * std::pow(double(m), order);
    return s;
}

GridField synthesize(const SpectralField& f, int m_samples) {
    const int n = f.n_modes();
    if (m_samples < 2 * n + 1)
        throw std::invalid_argument("synthesize: grid size must be >= 2N+1 (aliasing)");
    GridField out;
    out.samples.resize(std::size_t(m_samples));
    double max_imag = 0.0;
    for (int j = 0; j < m_samples; ++j) {
        const double theta = two_pi * double(j) / double(m_samples);
        const cxd w = std::polar(1.0, theta);
        // accumulate c_0 + sum_{m>=1} (c_m w^m + c_{-m} w^-m) with rotor updates
        cxd zp(1.0, 0.0), zm(1.0, 0.0);
        cxd acc = f.coeff(0);
        for (int m = 1; m <= n; ++m) {
            zp *= w;
            zm *= std::conj(w);
            acc += f.coeff(m) * zp + f.coeff(-m) * zm;
        }
        max_imag = std::max(max_imag, std::abs(acc.imag()));
        out.samples[std::size_t(j)] = acc.real();
    }
    if (max_imag > 1e-12)
        throw std::runtime_error("synthesize: imaginary residue above 1e-12; field is not real");
    return out;
}

SpectralField analyze(const GridField& g, int n_modes) {
    const int m = int(g.samples.size());
    if (m < 2 * n_modes + 1)
        throw std::invalid_argument("analyze: grid too small for requested truncation");
    SpectralField f(n_modes);
    for (int n = 0; n <= n_modes; ++n) {
        const cxd w = std::polar(1.0, -two_pi * double(n) / double(m));
        cxd z(1.0, 0.0), acc(0.0, 0.0);
        for (int j = 0; j < m; ++j) {
            acc += g.samples[std::size_t(j)] * z;
            z *= w;
        }
        f.set_pair(n, acc / double(m));
    }
    f.check_symmetry("analyze");
    return f;
}

SpectralField d_theta(const SpectralField& f) {
    const int n = f.n_modes();
    SpectralField out(n);
    for (int m = 0; m <= n; ++m)
        out.set_pair(m, cxd(0.0, double(m)) * f.coeff(m));
    out.check_symmetry("d_theta");
    return out;
}

SpectralField convolve(const KernelSpec& k, const SpectralField& f) {
    const int n = f.n_modes();
    SpectralField out(n);
    for (int m = 0; m <= n; ++m)
        out.set_pair(m, two_pi * k.b() * k.exp_coeff(m) * f.coeff(m));
    out.check_symmetry("convolve");
    return out;
}

SpectralField multiply(const SpectralField& f, const SpectralField& g) {
    const int n = f.n_modes();
    if (g.n_modes() != n)
        throw std::invalid_argument("multiply: truncations differ");
    const int mp = 3 * n + 1; // exact dealiasing for a quadratic product
    GridField a = synthesize(f, mp);
    GridField b = synthesize(g, mp);
    for (int j = 0; j < mp; ++j)
        a.samples[std::size_t(j)] *= b.samples[std::size_t(j)];
    SpectralField out = analyze(a, n);
    out.check_symmetry("multiply");
    return out;
}

SpectralField multiply_banded(const SpectralField& f, const SpectralField& multiplier, int band) {
    const int n = f.n_modes();
    SpectralField out(n);
    for (int m = 0; m <= n; ++m) {
        cxd acc(0.0, 0.0);
        for (int p = -band; p <= band; ++p)
            acc += multiplier.coeff(p) * f.coeff(m - p);
        out.set_pair(m, acc);
    }
    out.check_symmetry("multiply_banded");
    return out;
}

Norms norms(const SpectralField& f) {
    const int n = f.n_modes();
    double sum = 0.0, dsum = 0.0;
    for (int m = -n; m <= n; ++m) {
        const double a2 = std::norm(f.coeff(m));
        sum += a2;
        dsum += double(m) * double(m) * a2;
    }
    Norms out;
    out.l2 = std::sqrt(two_pi * sum);
    out.h1 = std::sqrt(two_pi * (sum + dsum));
    const GridField g = synthesize(f, 8 * n);
    double l1 = 0.0, linf = 0.0;
    for (double v : g.samples) {
        l1 += std::abs(v);
        linf = std::max(linf, std::abs(v));
    }
    out.l1 = l1 * two_pi / double(g.samples.size());
    out.linf = linf;
    return out;
}

double min_over_grid(const SpectralField& f) {
    const GridField g = synthesize(f, 8 * f.n_modes());
    return *std::min_element(g.samples.begin(), g.samples.end());
}

void write_spectral_csv(const SpectralField& f, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open file for writing: " + path);
    out << "n,re,im\n";
    char buf[80];
    for (int n = -f.n_modes(); n <= f.n_modes(); ++n) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", n, f.coeff(n).real(), f.coeff(n).imag());
        out << buf;
    }
}

SpectralField read_spectral_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open file: " + path);
    std::string line;
    std::getline(in, line); // header
    std::vector<std::pair<int, cxd>> rows;
    int n_max = 0;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream ss(line);
        int n;
        double re, im;
        char comma;
        if (!(ss >> n >> comma >> re >> comma >> im))
            throw std::runtime_error("malformed spectral CSV row: " + line);
        rows.emplace_back(n, cxd(re, im));
        n_max = std::max(n_max, std::abs(n));
    }
    std::vector<cxd> coeffs(2 * std::size_t(n_max) + 1, cxd(0.0, 0.0));
    for (auto& [n, v] : rows)
        coeffs[std::size_t(n + n_max)] = v;
    return SpectralField::from_coeffs(n_max, coeffs);
}

void write_grid_csv(const GridField& g, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open file for writing: " + path);
    out << "theta,f\n";
    char buf[80];
    for (std::size_t j = 0; j < g.samples.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", g.theta(j), g.samples[j]);
        out << buf;
    }
}

} // namespace smolu
