#include "smolu/linear.hpp"

#include <cmath>
#include <stdexcept>

namespace smolu {

Eigen::VectorXd field_to_basis(const SpectralField& f) {
    const int n = f.n_modes();
    Eigen::VectorXd v(2 * n);
    for (int m = 1; m <= n; ++m) {
        const cxd c = f.coeff(m);
        v[2 * (m - 1)] = 2.0 * c.real();      // cos(m theta) coefficient
        v[2 * (m - 1) + 1] = -2.0 * c.imag(); // sin(m theta) coefficient
    }
    return v;
}

SpectralField basis_to_field(const Eigen::VectorXd& v, int n_modes) {
    if (v.size() != 2 * n_modes)
        throw std::invalid_argument("basis_to_field: size mismatch");
    SpectralField f(n_modes);
    for (int m = 1; m <= n_modes; ++m)
        f.set_pair(m, 0.5 * cxd(v[2 * (m - 1)], -v[2 * (m - 1) + 1]));
    return f;
}

SpectralField apply_linearized(const SpectralField& h, const SpectralField& g_field, double b) {
    const KernelSpec k = KernelSpec::maier_saupe(b);
    const int band = k.max_mode();
    const SpectralField dkg = d_theta(convolve(k, g_field));
    const SpectralField dkh = d_theta(convolve(k, h));
    SpectralField u = multiply_banded(h, dkg, band);
    const SpectralField u2 = multiply_banded(g_field, dkh, band);
    for (int m = 0; m <= u.n_modes(); ++m)
        u.set_pair(m, u.coeff(m) + u2.coeff(m));
    const SpectralField du = d_theta(u);
    SpectralField out(h.n_modes());
    for (int m = 0; m <= h.n_modes(); ++m)
        out.set_pair(m, -double(m) * double(m) * h.coeff(m) - du.coeff(m));
    return out;
}

OperatorMatrix assemble(const NematicState& g, int n_modes) {
    OperatorMatrix op;
    op.n_modes = n_modes;
    op.b = g.b;
    op.r = g.r;
    op.sign = g.sign;
    op.mat.resize(2 * n_modes, 2 * n_modes);
    const SpectralField g_field = nematic_field(g, n_modes);
    for (int m = 1; m <= n_modes; ++m) {
        for (int part = 0; part < 2; ++part) {
            SpectralField basis(n_modes);
            // cos: c_m = 1/2 ; sin: c_m = -i/2
            basis.set_pair(m, part == 0 ? cxd(0.5, 0.0) : cxd(0.0, -0.5));
            op.mat.col(2 * (m - 1) + part) = field_to_basis(apply_linearized(basis, g_field, g.b));
        }
    }
    return op;
}

SpectrumReport spectrum(const OperatorMatrix& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(m.mat);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("spectrum: eigensolver failed to converge");
    SpectrumReport rep;
    const auto& vals = es.eigenvalues();
    double max_abs = 0.0;
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        rep.eigenvalues.push_back(vals[i]);
        rep.max_imag = std::max(rep.max_imag, std::abs(vals[i].imag()));
        max_abs = std::max(max_abs, std::abs(vals[i]));
    }
    const double cut = rep.tol_kernel * max_abs;
    Eigen::Index kernel_idx = 0;
    double min_abs = std::abs(vals[0]);
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        if (std::abs(vals[i]) < cut)
            ++rep.kernel_dim;
        if (std::abs(vals[i]) < min_abs) {
            min_abs = std::abs(vals[i]);
            kernel_idx = i;
        }
    }
    // angle of the smallest-eigenvalue eigenvector against d_theta g;
    // reported as -1 when the base state is isotropic (no kernel direction)
    const NematicState st{m.b, m.r, h_quad(m.r).h, m.sign};
    const Eigen::VectorXd dg = field_to_basis(d_theta(nematic_field(st, m.n_modes)));
    if (dg.norm() < 1e-300) {
        rep.kernel_angle = -1.0;
        return rep;
    }
    const Eigen::VectorXcd v = es.eigenvectors().col(kernel_idx);
    const double cosang = std::abs((v.adjoint() * dg.cast<std::complex<double>>())(0)) /
                          (v.norm() * dg.norm());
    rep.kernel_angle = std::acos(std::min(1.0, cosang));
    return rep;
}

namespace {

// antiderivative of a mass-free field, pinned to F(0) = 0, as a field
SpectralField antiderivative(const SpectralField& f) {
    const int n = f.n_modes();
    SpectralField out(n);
    cxd at_zero(0.0, 0.0);
    for (int m = 1; m <= n; ++m) {
        const cxd v = f.coeff(m) / cxd(0.0, double(m));
        out.set_pair(m, v);
        at_zero += v + std::conj(v);
    }
    out.set_pair(0, -at_zero);
    return out;
}

} // namespace

double range_test(const SpectralField& f, const NematicState& g) {
    if (std::abs(f.mass()) > 1e-12)
        throw std::invalid_argument("range_test: field must have mass 0");
    const int m = 8 * f.n_modes();
    const GridField F = synthesize(antiderivative(f), m);
    double inv_total = 0.0;
    std::vector<double> ginv(std::size_t(m));
    for (int j = 0; j < m; ++j) {
        ginv[std::size_t(j)] = 1.0 / nematic_value(g, two_pi * double(j) / double(m));
        inv_total += ginv[std::size_t(j)];
    }
    inv_total *= two_pi / double(m);
    double acc = 0.0;
    for (int j = 0; j < m; ++j)
        acc += F.samples[std::size_t(j)] * (ginv[std::size_t(j)] - inv_total / two_pi);
    return acc * two_pi / double(m);
}

RepresentationSolution solve_representation(const SpectralField& f, const NematicState& g,
                                            double s_h) {
    if (g.b <= 4.0)
        throw std::invalid_argument("solve_representation: requires b > 4");
    const double compat = range_test(f, g);
    if (std::abs(compat) > 1e-8)
        throw std::runtime_error("solve_representation: right-hand side not in range "
                                 "(compatibility integral = " +
                                 std::to_string(compat) + ")");
    const int n = f.n_modes();
    const int m = 8 * n;
    const double w = two_pi / double(m);

    const GridField F = synthesize(antiderivative(f), m);
    std::vector<double> gv(std::size_t(m)), cos2(std::size_t(m)), sin2(std::size_t(m));
    for (int j = 0; j < m; ++j) {
        const double theta = two_pi * double(j) / double(m);
        gv[std::size_t(j)] = nematic_value(g, theta);
        cos2[std::size_t(j)] = std::cos(2.0 * theta);
        sin2[std::size_t(j)] = std::sin(2.0 * theta);
    }

    double num = 0.0, den = 0.0;
    for (int j = 0; j < m; ++j) {
        num += F.samples[std::size_t(j)] / gv[std::size_t(j)];
        den += 1.0 / gv[std::size_t(j)];
    }
    const double c1 = -num / den;

    // J(theta) = int_0^theta (F + c1)/g, an antiderivative of a mean-zero
    // smooth periodic integrand, built spectrally on the fine grid
    GridField q;
    q.samples.resize(std::size_t(m));
    for (int j = 0; j < m; ++j)
        q.samples[std::size_t(j)] = (F.samples[std::size_t(j)] + c1) / gv[std::size_t(j)];
    const int nq = m / 2 - 1;
    SpectralField q_hat = analyze(q, nq);
    q_hat.set_pair(0, cxd(0.0, 0.0)); // mean zero holds by the choice of c1
    const GridField J = synthesize(antiderivative(q_hat), m);

    double int_gJ = 0.0, int_gcJ = 0.0, c_g = 0.0;
    for (int j = 0; j < m; ++j) {
        int_gJ += gv[std::size_t(j)] * J.samples[std::size_t(j)];
        int_gcJ += gv[std::size_t(j)] * cos2[std::size_t(j)] * J.samples[std::size_t(j)];
        c_g += gv[std::size_t(j)] * cos2[std::size_t(j)];
    }
    int_gJ *= w;
    int_gcJ *= w;
    c_g *= w;

    const double divisor = 2.0 - 0.5 * g.b + 0.5 * g.b * c_g * c_g;
    if (std::abs(divisor) < 1e-12)
        throw std::runtime_error("solve_representation: singular moment divisor");
    const double c_h = (-c_g * int_gJ + int_gcJ) / divisor;
    const double c2 = -(0.5 * g.b * c_h * c_g + int_gJ);

    GridField hg;
    hg.samples.resize(std::size_t(m));
    for (int j = 0; j < m; ++j) {
        const std::size_t u = std::size_t(j);
        hg.samples[u] = 0.5 * g.b * c_h * gv[u] * cos2[u] + 0.5 * g.b * s_h * gv[u] * sin2[u] +
                        gv[u] * J.samples[u] + c2 * gv[u];
    }
    RepresentationSolution sol;
    sol.h = analyze(hg, n);
    sol.c1 = c1;
    sol.c2 = c2;
    sol.c_h = c_h;
    sol.s_h = s_h;
    return sol;
}

ShiftedSolveResult shifted_solve(const OperatorMatrix& m, int k, double omega,
                                 const SpectralField& f) {
    if (k == 0)
        throw std::invalid_argument("shifted_solve: k must be nonzero");
    if (omega == 0.0)
        throw std::invalid_argument("shifted_solve: omega must be nonzero");
    const Eigen::Index dim = m.mat.rows();
    Eigen::MatrixXcd a = m.mat.cast<std::complex<double>>();
    a += std::complex<double>(0.0, 2.0 * omega * double(k)) *
         Eigen::MatrixXcd::Identity(dim, dim);
    const Eigen::VectorXcd rhs_vec = field_to_basis(f).cast<std::complex<double>>();
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(a);
    if (!lu.isInvertible())
        throw std::runtime_error("shifted_solve: singular shifted system");
    const Eigen::VectorXcd x = lu.solve(rhs_vec);
    ShiftedSolveResult out{SpectralField(m.n_modes), SpectralField(m.n_modes), 0.0};
    out.real_part = basis_to_field(x.real(), m.n_modes);
    out.imag_part = basis_to_field(x.imag(), m.n_modes);
    // basis functions have L2 norm sqrt(pi), so the coefficient 2-norm scales by it
    out.residual = (a * x - rhs_vec).norm() * std::sqrt(0.5 * two_pi);
    return out;
}

double resolvent_norm(const OperatorMatrix& m, int k, double omega) {
    const Eigen::Index dim = m.mat.rows();
    Eigen::MatrixXcd a = m.mat.cast<std::complex<double>>();
    a += std::complex<double>(0.0, 2.0 * omega * double(k)) *
         Eigen::MatrixXcd::Identity(dim, dim);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    return 1.0 / svd.singularValues().minCoeff();
}

NonResonance nonresonance(double b) {
    if (b <= 4.0)
        throw std::invalid_argument("nonresonance: requires b > 4");
    const auto r = solve_r(b);
    if (!r)
        throw std::runtime_error("nonresonance: no nematic root");
    NonResonance out;
    out.Z_minus_2pi = h_quad(*r).h - two_pi;
    out.holds = std::abs(out.Z_minus_2pi) > 1e-10;
    return out;
}

} // namespace smolu
