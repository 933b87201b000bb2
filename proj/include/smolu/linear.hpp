#pragma once

#include "smolu/equilibria.hpp"
#include "smolu/spectral.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

// Linearization about a nematic (or isotropic) base state g of the
// Maier-Saupe dynamics:
//   L h = d2h - d[ d(Kg) h + d(Kh) g ],   d = d/dtheta,
// assembled on the mean-zero trigonometric basis
//   {cos t, sin t, cos 2t, sin 2t, ..., cos Nt, sin Nt}.
// Matrices are immutable after assembly; all routines are pure.

namespace smolu {

struct OperatorMatrix {
    int n_modes = 0;
    double b = 0.0;
    double r = 0.0;
    int sign = +1;
    Eigen::MatrixXd mat; // 2N x 2N, real
};

// basis <-> field conversions (basis order: cos m, sin m interleaved)
Eigen::VectorXd field_to_basis(const SpectralField& f);
SpectralField basis_to_field(const Eigen::VectorXd& v, int n_modes);

// direct spectral application of the linearized operator, truncated to
// h's band (identical to the Galerkin matrix action on half-band inputs)
SpectralField apply_linearized(const SpectralField& h, const SpectralField& g_field, double b);

OperatorMatrix assemble(const NematicState& g, int n_modes);

struct SpectrumReport {
    std::vector<std::complex<double>> eigenvalues;
    double max_imag = 0.0;
    int kernel_dim = 0;      // count of |lambda| < tol_kernel * max|lambda|
    double kernel_angle = 0.0; // angle between numerical kernel vector and d_theta g
    double tol_kernel = 1e-7;
};
SpectrumReport spectrum(const OperatorMatrix& m);

// Range-compatibility integral
//   int_0^{2pi} (int_0^theta f) (1/g - (1/2pi) int dsigma/g) dtheta,
// zero iff f lies in the range of the linearization. f must have mass 0.
double range_test(const SpectralField& f, const NematicState& g);

struct RepresentationSolution {
    SpectralField h;
    double c1 = 0.0;
    double c2 = 0.0;
    double c_h = 0.0; // cos(2 theta) moment of h
    double s_h = 0.0; // prescribed sin(2 theta) moment (free parameter)
};

// Direct quadrature solver for L h = f via the closed-form representation;
// requires b > 4, range_test(f, g) within 1e-8, and returns the
// representative with the prescribed sine moment s_h.
RepresentationSolution solve_representation(const SpectralField& f, const NematicState& g,
                                            double s_h);

struct ShiftedSolveResult {
    SpectralField real_part;
    SpectralField imag_part;
    double residual = 0.0; // L2 norm of (i 2 omega k + L)h - f
};

// solve (i * 2 * omega * k * I + L) h = f in the complexified basis
ShiftedSolveResult shifted_solve(const OperatorMatrix& m, int k, double omega,
                                 const SpectralField& f);

// L2 operator norm of (i 2 omega k + L)^{-1} (sectoriality diagnostic)
double resolvent_norm(const OperatorMatrix& m, int k, double omega);

struct NonResonance {
    double Z_minus_2pi = 0.0;
    bool holds = false; // |Z(b) - 2pi| > 1e-10
};
NonResonance nonresonance(double b);

} // namespace smolu
