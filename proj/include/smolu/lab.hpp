#pragma once

#include "smolu/dynamics.hpp"

#include <cstdint>
#include <string>
#include <vector>

// Experiment harness: steady-vs-tumbling classification via stroboscopic
// maps in the rotating frame, smallness-condition checking for the
// contraction regime, dissipativity probes, and parameter sweeps.
// Sweep cells are self-contained and run concurrently; results are
// deterministic and independent of the thread count.

namespace smolu {

struct Tolerances {
    double tol_s = 1e-7;   // L2 steadiness / strobe-fixed-point residual
    double tol_var = 1e-3; // genuine time dependence threshold
};

// Integrate for one rotation period T = pi/|omega| and unwind the frame:
// returns rotate_frame(f(T), -omega T). Fixed points are tumbling waves.
// `period_fraction` shortens the interval (0.5 = half period diagnostic).
SpectralField stroboscopic_map(const SpectralField& f0, const FlowParams& flow,
                               const KernelSpec& kernel, double dt,
                               double period_fraction = 1.0);

struct TumblingSearch {
    SpectralField orbit;
    double residual = 0.0; // L2 distance between the last two strobe iterates
    int iterations = 0;
    bool converged = false;
};

// Picard iteration of the stroboscopic map (plain forward integration
// sampled at period multiples). Non-convergence is reported, not thrown.
TumblingSearch find_tumbling(const FlowParams& flow, const KernelSpec& kernel,
                             const SpectralField& init, int max_iters, double dt,
                             double tol_orbit = 1e-7);

struct ClassificationResult {
    enum class Kind { Steady, Tumbling, Unresolved };
    Kind kind = Kind::Unresolved;
    double period = 0.0;         // pi/|omega| for Tumbling verdicts
    bool rigid_rotation = false; // strobe-fixed at every interval (s = 0 orbits)
    double residual_steady = 0.0; // |rhs(f)|_L2 at final time, fixed frame
    double residual_strobe = 0.0; // |f - strobe(f)|_L2, rotating frame
    double time_variation = 0.0;  // |f(t_end) - f(t_end - period/2)|_L2, fixed frame
    double t_end = 0.0;
    std::string diagnostic;
};

const char* to_string(ClassificationResult::Kind kind);

ClassificationResult classify(const SimConfig& cfg, const Tolerances& tol = {});

// Smallness conditions of the contraction regime with user-supplied
// Gagliardo-Nirenberg constant; margins are left-minus-right, positive
// when the inequality is satisfied.
struct ConditionReport {
    double M = 0.0;  // sup |d_theta V| = 2 s
    double Nk = 0.0; // sup |d2 k|
    double C_gn = 1.0;
    double epsilon = 0.0;
    double Cbar = 0.0;
    double R1 = 0.0; // Cbar + 1/pi + epsilon
    double R2 = 0.0; // epsilon + (2s + b Nk)(8 Cbar + 6/pi)
    double condl2_margin = 0.0;
    double condh1_margin = 0.0;
    bool holds = false;
};
ConditionReport theorem2_conditions(double b, double s, const KernelSpec& kernel, double C_gn,
                                    double epsilon);

struct ContractionResult {
    double rate = 0.0; // log-linear slope of the H1 gap over the final 50%
    std::vector<std::pair<double, double>> gap_series; // (t, |f-g|_H1)
};
ContractionResult contraction_test(const SimConfig& cfg, std::uint64_t seed1,
                                   std::uint64_t seed2);

// strictly positive mass-one field with the requested H1 magnitude
// (isotropic/Fejer blend, bisected weight)
SpectralField peaked_initial(double target_h1, int n_modes);

struct DissipativityScale {
    double target_h1 = 0.0;
    double init_h1 = 0.0;
    double init_l2_sq = 0.0;
    double late_sup_l2 = 0.0;
    double late_sup_h1 = 0.0;
    bool envelope_ok = false; // |f(t)|^2 - B <= |f(0)|^2 e^{-t/2} throughout
};

struct DissipativityReport {
    std::vector<DissipativityScale> scales;
    double fitted_B = 0.0;    // common fitted absorbing level
    double h1_spread = 0.0;   // max/min ratio of the late-window H1 sups
    bool common_bound = false;
};

DissipativityReport dissipativity_probe(const KernelSpec& kernel, const FlowParams& flow,
                                        const std::vector<double>& init_scales,
                                        double window_start, double window_end, int n_modes,
                                        double dt);

struct SweepCell {
    double b = 0.0, s = 0.0, omega = 0.0;
    ClassificationResult result;
    std::uint64_t seed = 0;
};

// classify() per grid cell; cells are independent, failures are recorded as
// Unresolved, and the output order matches the input grids regardless of
// how many worker threads run.
std::vector<SweepCell> sweep(const std::vector<double>& b_grid, const std::vector<double>& s_grid,
                             const std::vector<double>& omega_grid, const SimConfig& templ,
                             const Tolerances& tol = {}, unsigned max_threads = 0);

} // namespace smolu
