#pragma once

#include <complex>
#include <string>
#include <vector>

// Field algebra for real 2*pi-periodic densities represented by truncated
// Fourier series c_{-N}..c_N with f(theta) = sum_n c_n e^{i n theta}.
// All operations are pure; fields are immutable once built, so everything
// here is safe to use from multiple threads without synchronization.

namespace smolu {

using cxd = std::complex<double>;

inline constexpr double two_pi = 6.283185307179586476925286766559;

// Optional post-operation conjugate-symmetry checks. Off by default; the
// test suites switch them on.
void set_invariant_checks(bool on);
bool invariant_checks_enabled();

class SpectralField {
public:
    // zero field with truncation N >= 1
    explicit SpectralField(int n_modes);

    // the uniform density 1/(2*pi)
    static SpectralField isotropic(int n_modes);

    // coeffs must have size 2N+1 ordered n = -N..N and be conjugate
    // symmetric to within 1e-9 (they are re-symmetrized exactly)
    static SpectralField from_coeffs(int n_modes, const std::vector<cxd>& coeffs);

    int n_modes() const { return n_modes_; }

    // c_n; zero outside the truncation band
    cxd coeff(int n) const;

    // sets c_n = v and c_{-n} = conj(v); for n = 0 the imaginary part is dropped
    void set_pair(int n, cxd v);

    // integral of f over [0, 2*pi] = 2*pi*c_0, exact
    double mass() const;

    const std::vector<cxd>& raw() const { return c_; }
    std::vector<cxd>& raw() { return c_; }

    void check_symmetry(const char* where) const;

private:
    int n_modes_;
    std::vector<cxd> c_; // index n + n_modes_
};

struct GridField {
    std::vector<double> samples; // values at theta_j = 2*pi*j/M
    double theta(std::size_t j) const { return two_pi * double(j) / double(samples.size()); }
};

// Even interaction kernel k(theta) = khat_0 + sum_{m>=1} khat_m * 2*cos(m*theta)
// scaled by a nonnegative concentration b. The convolution acts diagonally on
// Fourier modes with complex-exponential coefficients kappa_n = khat_|n|.
class KernelSpec {
public:
    enum class Variant { MaierSaupe, CosineSeries };

    // k(theta) = (1/2) cos(2*theta)
    static KernelSpec maier_saupe(double b);
    // cos_coeffs[m] = khat_m, m = 0..max_mode
    static KernelSpec cosine_series(std::vector<double> cos_coeffs, double b);

    Variant variant() const { return variant_; }
    double b() const { return b_; }
    const std::vector<double>& cosine_coeffs() const { return khat_; }

    double exp_coeff(int n) const; // kappa_n = khat_|n|
    int max_mode() const { return int(khat_.size()) - 1; }

    // sup-norm bound on d^order k / d theta^order via coefficient sums;
    // exact for single-mode kernels such as Maier-Saupe
    double sup_deriv(int order) const;

private:
    Variant variant_;
    std::vector<double> khat_;
    double b_;
};

struct Norms {
    double l1;   // grid estimate
    double l2;   // exact (Parseval)
    double h1;   // exact (Parseval with derivative weight)
    double linf; // grid estimate
};

// evaluation on M >= 2N+1 uniform points; throws on smaller grids and on
// imaginary residue above 1e-12 (non-symmetric coefficients)
GridField synthesize(const SpectralField& f, int m_samples);

// trapezoid-exact Fourier coefficients of a grid sample; requires M >= 2N+1
SpectralField analyze(const GridField& g, int n_modes);

// c_n -> i*n*c_n
SpectralField d_theta(const SpectralField& f);

// (Kf)_n = 2*pi*b*kappa_n*c_n
SpectralField convolve(const KernelSpec& k, const SpectralField& f);

// dealiased pointwise product: evaluated on a padded grid of size >= 3N+1 and
// re-truncated, which equals the exact coefficient convolution cut to |n| <= N
SpectralField multiply(const SpectralField& f, const SpectralField& g);

// exact banded coefficient convolution: multiplier restricted to modes
// |n| <= band, result truncated to f's band. Identical to multiply() when the
// multiplier's coefficients vanish beyond |n| > band.
SpectralField multiply_banded(const SpectralField& f, const SpectralField& multiplier, int band);

Norms norms(const SpectralField& f);

// minimum of the synthesized field on the 8N estimation grid
double min_over_grid(const SpectralField& f);

// CSV: header "n,re,im", one row per mode
void write_spectral_csv(const SpectralField& f, const std::string& path);
SpectralField read_spectral_csv(const std::string& path);

// CSV: header "theta,f", one row per sample
void write_grid_csv(const GridField& g, const std::string& path);

} // namespace smolu
