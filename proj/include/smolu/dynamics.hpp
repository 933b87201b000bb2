#pragma once

#include "smolu/equilibria.hpp"
#include "smolu/spectral.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

// Time integration of the Fokker-Planck equation
//   df/dt = d2f/dtheta2 - d/dtheta[ V f + (d/dtheta Kf) f ],
//   V = omega + s cos(2 theta + alpha),
// plus the independent even-mode ODE system used for cross-validation.
// simulate() is deterministic for a given config; simulations share no
// mutable state and may run concurrently.

namespace smolu {

struct FlowParams {
    double omega = 0.0;
    double s = 0.0;     // >= 0
    double alpha = 0.0; // phase, unique mod 2*pi when s > 0
};

// constant velocity-gradient matrix entries
struct VelocityGradient {
    double u11 = 0.0, u12 = 0.0, u21 = 0.0, u22 = 0.0;
};

// decompose the tangential projection of grad(u) into omega + s cos(2 theta + alpha)
FlowParams flow_from_gradient(const VelocityGradient& u);

// full right-hand side; mode 0 of the result is exactly zero
SpectralField rhs(const SpectralField& f, const FlowParams& flow, const KernelSpec& k);

// shift f(theta) -> f(theta + phi); c_n -> c_n e^{i n phi}
SpectralField rotate_frame(const SpectralField& f, double phi);

struct InitialData {
    enum class Kind { Isotropic, Nematic, FourierPerturbation, ExplicitCoeffs };
    Kind kind = Kind::Isotropic;
    int sign = +1;
    std::uint64_t seed = 1;
    double amplitude = 0.02;
    double decay = 0.85;
    std::vector<cxd> coeffs; // ExplicitCoeffs, ordered n = -N..N

    static InitialData isotropic();
    static InitialData nematic(int sign);
    static InitialData fourier(std::uint64_t seed, double amplitude, double decay);
    static InitialData explicit_coeffs(std::vector<cxd> c);
};

// Builds a strictly positive, mass-one field. FourierPerturbation places
// c_n = amplitude * decay^n * (seeded unit-modulus phase) on 1 <= n <= N/2;
// if the synthesis dips below zero a constant is added and the field is
// renormalized.
SpectralField build_initial(const InitialData& init, int n_modes, const KernelSpec& kernel);

struct SimConfig {
    KernelSpec kernel = KernelSpec::maier_saupe(0.0);
    FlowParams flow;
    int n_modes = 64;
    double dt = 1e-3;
    double t_end = 1.0;
    int record_every = 100;
    InitialData initial;
};

struct TrajectoryRecord {
    double t = 0.0;
    SpectralField field;
    std::array<double, 4> y{}, s{};
    std::optional<double> energy; // gradient-type flow (omega = 0) only
    double l2 = 0.0, h1 = 0.0;
    double min_f = 0.0; // positivity monitor on the 8N grid
};

enum class SimStatus { Completed, Aborted };

struct SimResult {
    std::vector<TrajectoryRecord> records;
    SimStatus status = SimStatus::Completed;
    std::string diagnostic;
    double alpha_shift = 0.0; // frame shift used to canonicalize alpha to 0
};

SimResult simulate(const SimConfig& cfg);

// Integrating-factor RK4 engine: the diffusion multiplier e^{-n^2 dt} is
// applied exactly on each stage, advection and the nonlinear term are
// explicit. Mode 0 is untouched by both parts, so mass is preserved exactly.
class Stepper {
public:
    Stepper(const FlowParams& flow, const KernelSpec& kernel, int n_modes, double dt);

    void advance(std::vector<cxd>& c) const; // one step in place, c ordered n = -N..N
    SpectralField step(const SpectralField& f) const;

    // nonlinear + advection part of the right-hand side
    void nonlinear(const std::vector<cxd>& c, std::vector<cxd>& out) const;

    int n_modes() const { return n_; }
    double dt() const { return dt_; }

private:
    int n_;
    double dt_;
    cxd v0_;                                    // omega
    cxd v2_;                                    // (s/2) e^{i alpha}
    std::vector<std::pair<int, double>> kmods_; // kernel modes p > 0 with 2*pi*b*kappa_p
    std::vector<double> e_half_, e_full_;       // exp(-n^2 dt/2), exp(-n^2 dt)
    mutable std::vector<cxd> k1_, k2_, k3_, k4_, a_;
};

// one integrating-factor RK4 step; throws on non-finite output
SpectralField step(const SpectralField& f, const FlowParams& flow, const KernelSpec& k, double dt);

// Truncated even-mode system for the Maier-Saupe kernel:
//   y_k' = -4 k^2 y_k + b k y_1 (y_{k-1} - y_{k+1}),  y_0 = 1,  y_{K+1} = 0.
struct ModeState {
    std::vector<double> y; // y_1..y_K
};

std::vector<double> mode_ode_rhs(const std::vector<double>& y, double b);

struct ModeTrajectory {
    std::vector<double> t;
    std::vector<ModeState> states;
};

// Classical RK4 at fixed dt (stability needs 4 K^2 dt < 2.8), truncation K,
// y0 zero-padded or cut to length K. Records every record_every steps plus
// the final state.
ModeTrajectory simulate_even(const ModeState& y0, double b, double dt, double t_end, int K,
                             int record_every = 1);

} // namespace smolu
