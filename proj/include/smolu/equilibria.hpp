#pragma once

#include "smolu/spectral.hpp"

#include <array>
#include <optional>

// Flow-free Maier-Saupe steady states, the r(b) equation, the energy
// functional of the gradient case, and order-parameter diagnostics.
// Everything here is a pure function of its arguments.

namespace smolu {

// h(x) = int_0^{2pi} e^{x cos(2 theta)} d theta and its derivative, by
// 1024-point trapezoid rule (spectrally accurate for these integrands)
struct HQuad {
    double h;
    double hprime;
};
HQuad h_quad(double x);

// Unique r > 0 solving h'(r)/h(r) = 2r/b, bracketed bisection then Newton
// polish to |h'/h - 2r/b| < 1e-12. Returns nothing for b <= 4 where the
// isotropic root r = 0 is the only one.
std::optional<double> solve_r(double b);

// Equilibrium record for g(theta) = e^{sign * r * cos(2 theta)} / Z
struct NematicState {
    double b;
    double r;
    double Z;
    int sign; // +1 or -1
};

NematicState nematic_state(double b, int sign); // throws for b <= 4
NematicState isotropic_state(double b);         // r = 0 base at concentration b

double nematic_value(const NematicState& s, double theta);

// spectral analysis of g on an 8N grid; mass 1 to 1e-12
SpectralField nematic_field(const NematicState& s, int n_modes);

// Potential W with V = dW/dtheta, defined for gradient-type flows
// (omega = 0): W(theta) = (s/2) sin(2 theta + alpha).
class GradientPotential {
public:
    static GradientPotential zero(int n_modes);
    static GradientPotential from_strain(double s, double alpha, int n_modes);
    static GradientPotential from_field(SpectralField w);
    const SpectralField& field() const { return w_; }

private:
    explicit GradientPotential(SpectralField w) : w_(std::move(w)) {}
    SpectralField w_;
};

// E = int f log f - (1/2) int (Kf) f - int W f on an 8N grid.
// The entropy integrand x log x extends by 0 at x = 0; grid values in
// (-1e-8, 0) are clamped to 0, anything below -1e-8 is refused.
double energy(const SpectralField& f, const KernelSpec& k, const GradientPotential& w);

// dE/dt = -int |d_theta(log f - Kf - W)|^2 f  (nonpositive along solutions)
double energy_dissipation(const SpectralField& f, const KernelSpec& k, const GradientPotential& w);

struct OrderParams {
    std::array<double, 4> y{}; // y_k = int cos(2k theta) f
    std::array<double, 4> s{}; // s_k = int sin(2k theta) f
    double director_angle = 0.0; // (1/2) atan2(s_1, y_1) in (-pi/2, pi/2]
    bool director_defined = false;
};
OrderParams order_params(const SpectralField& f);

// Constants of the H^1 absorbing-ball estimate. M bounds |d_theta V|,
// Nk bounds |d_theta^2 k|, C_gn is the user-supplied Gagliardo-Nirenberg
// constant. Cbar is derived, epsilon is slack carried along.
struct DissipativityBound {
    double M;
    double Nk;
    double b;
    double C_gn;
    double epsilon;
    double Cbar;
};
DissipativityBound dissipativity_bound(double M, double Nk, double b, double C_gn, double epsilon);

} // namespace smolu
