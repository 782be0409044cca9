#include "gpjc/solvers.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <boost/numeric/odeint/external/eigen/eigen.hpp>
#include <cmath>
#include <complex>
#include <sstream>

namespace gpjc {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kTwoPi = 2.0 * M_PI;

// 1/sqrt(n!) for n = 0..count-1
Eigen::VectorXd inv_sqrt_factorials(int count) {
    Eigen::VectorXd f(count);
    f(0) = 1.0;
    for (int n = 1; n < count; ++n) f(n) = f(n - 1) / std::sqrt(static_cast<double>(n));
    return f;
}

double block_freq(double Omega, double Delta, int n) {
    return std::hypot(Delta, std::sqrt(static_cast<double>(n)) * Omega);
}

// banded realizations of gamma~ multiplication and differentiation on the
// factorial-normalized coefficient basis
Eigen::MatrixXcd mul_g(const Eigen::MatrixXcd& S) {
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(S.rows(), S.cols());
    for (Eigen::Index b = 1; b < S.cols(); ++b)
        r.col(b) = std::sqrt(static_cast<double>(b)) * S.col(b - 1);
    return r;
}

Eigen::MatrixXcd mul_gs(const Eigen::MatrixXcd& S) {
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(S.rows(), S.cols());
    for (Eigen::Index a = 1; a < S.rows(); ++a)
        r.row(a) = std::sqrt(static_cast<double>(a)) * S.row(a - 1);
    return r;
}

Eigen::MatrixXcd d_g(const Eigen::MatrixXcd& S) {
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(S.rows(), S.cols());
    for (Eigen::Index b = 0; b + 1 < S.cols(); ++b)
        r.col(b) = std::sqrt(static_cast<double>(b + 1)) * S.col(b + 1);
    return r;
}

Eigen::MatrixXcd d_gs(const Eigen::MatrixXcd& S) {
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(S.rows(), S.cols());
    for (Eigen::Index a = 0; a + 1 < S.rows(); ++a)
        r.row(a) = std::sqrt(static_cast<double>(a + 1)) * S.row(a + 1);
    return r;
}

Eigen::VectorXcd pack(const CoefficientSeries& s) {
    const Eigen::Index nn = s.S0.size();
    Eigen::VectorXcd y(6 * nn);
    const Eigen::MatrixXcd* blocks[] = {&s.S0, &s.S2_11, &s.S2_12, &s.S2_21, &s.S2_22, &s.S4};
    for (int i = 0; i < 6; ++i)
        y.segment(i * nn, nn) = Eigen::Map<const Eigen::VectorXcd>(blocks[i]->data(), nn);
    return y;
}

void unpack(const Eigen::VectorXcd& y, CoefficientSeries& s) {
    const Eigen::Index nn = s.S0.size();
    Eigen::MatrixXcd* blocks[] = {&s.S0, &s.S2_11, &s.S2_12, &s.S2_21, &s.S2_22, &s.S4};
    for (int i = 0; i < 6; ++i)
        Eigen::Map<Eigen::VectorXcd>(blocks[i]->data(), nn) = y.segment(i * nn, nn);
}

}  // namespace

StenholmConstants stenholm_constants(const AmplitudeState& initial, const ScenarioConfig& cfg) {
    if (initial.t != 0.0) throw config_error("analytic constants are fixed by the t=0 amplitudes");
    const int nb = cfg.n_max + 1;
    if (static_cast<int>(initial.A1.size()) != nb || static_cast<int>(initial.A2.size()) != nb)
        throw config_error("amplitude arrays do not match n_max");

    StenholmConstants c;
    c.Omega = cfg.rabi_Omega;
    c.Delta = cfg.detuning_Delta;
    c.A.setZero(nb);
    c.B.setZero(nb);
    const Eigen::VectorXd isf = inv_sqrt_factorials(nb);
    for (int n = 0; n < nb; ++n) {
        const cplx a1 = initial.A1[static_cast<std::size_t>(n)];
        const cplx a2 = initial.A2[static_cast<std::size_t>(n)];
        const double wn = block_freq(c.Omega, c.Delta, n);
        c.A(n) = -std::conj(a1) * isf(n) / kTwoPi;
        // the n=0 frequency is |Delta|; on resonance the block is constant
        // and the sin quadrature drops out entirely
        if (wn > 0.0)
            c.B(n) = kI *
                     std::conj((c.Delta * a1 -
                                c.Omega * std::sqrt(static_cast<double>(n)) * a2) /
                               wn) *
                     isf(n) / kTwoPi;
    }
    return c;
}

PsiPair stenholm_psi(const StenholmConstants& c, double t) {
    const int nb = static_cast<int>(c.A.size());
    PsiPair p;
    p.psi2.setZero(nb);
    p.psi1.setZero(nb - 1);
    for (int n = 0; n < nb; ++n) {
        const double wn = block_freq(c.Omega, c.Delta, n);
        const double cs = std::cos(0.5 * wn * t);
        const double sn = std::sin(0.5 * wn * t);
        p.psi2(n) = c.A(n) * cs + c.B(n) * sn;
        if (n >= 1)
            p.psi1(n - 1) = kI *
                            (cs * (wn * c.B(n) + kI * c.Delta * c.A(n)) +
                             sn * (-wn * c.A(n) + kI * c.Delta * c.B(n))) /
                            c.Omega;
    }
    return p;
}

CoefficientSeries stenholm_coefficients(const StenholmConstants& c, double t,
                                        const ScenarioConfig& cfg) {
    const int nm = static_cast<int>(c.A.size()) - 1;
    const PsiPair p = stenholm_psi(c, t);

    Eigen::VectorXcd u1 = Eigen::VectorXcd::Zero(nm + 1);
    Eigen::VectorXcd u2(nm + 1);
    double sf = 1.0;  // sqrt(a!)
    for (int a = 0; a <= nm; ++a) {
        if (a > 0) sf *= std::sqrt(static_cast<double>(a));
        if (a < nm) u1(a) = kTwoPi * sf * p.psi1(a);
        u2(a) = kTwoPi * sf * p.psi2(a);
    }

    CoefficientSeries s = make_series(nm, t, cfg.cavity_omega);
    s.S2_11 = u1.conjugate() * u1.transpose();
    s.S2_12 = u1.conjugate() * u2.transpose();
    s.S2_21 = u2.conjugate() * u1.transpose();
    s.S2_22 = u2.conjugate() * u2.transpose();
    s.S4 = s.S2_11 + s.S2_22;
    return s;
}

CoefficientSeries canonical_rhs(const CoefficientSeries& s, const ScenarioConfig& cfg) {
    const cplx hiO = 0.5 * kI * cfg.rabi_Omega;
    const cplx iD = kI * cfg.detuning_Delta;
    const Eigen::MatrixXcd P11 = s.S2_11 - s.S0;
    const Eigen::MatrixXcd P22 = s.S2_22 - s.S0;

    CoefficientSeries d = make_series(s.n_max, s.t, s.omega);
    d.S2_11 = hiO * (d_gs(s.S2_21) - d_g(s.S2_12));
    d.S2_12 = -iD * s.S2_12 - hiO * mul_g(P11) + hiO * d_gs(P22);
    d.S2_21 = iD * s.S2_21 + hiO * mul_gs(P11) - hiO * d_g(P22);
    d.S2_22 = hiO * (mul_gs(s.S2_12) - mul_g(s.S2_21));
    d.S4 = hiO * (d_gs(s.S2_21) - mul_g(s.S2_21)) - hiO * (d_g(s.S2_12) - mul_gs(s.S2_12));
    // d.S0 stays zero
    return d;
}

CanonicalIntegrator::CanonicalIntegrator(CoefficientSeries s0, const ScenarioConfig& cfg,
                                         double dt)
    : s_(std::move(s0)), cfg_(cfg), dt_(dt) {
    if (dt <= 0.0) throw config_error("time step must be positive");
    const double mass = band_mass();
    if (mass > kBandThreshold) {
        std::ostringstream msg;
        msg << "initial coefficient mass " << mass
            << " already sits in the top photon bands; increase n_max";
        throw truncation_error(msg.str());
    }
}

double CanonicalIntegrator::band_mass() const {
    const Eigen::Index nb = s_.n_max + 1;
    if (nb < 3) return 0.0;  // no interior left to distinguish a leak from the state
    double m = 0.0;
    for (const auto* blk : {&s_.S2_11, &s_.S2_12, &s_.S2_21, &s_.S2_22, &s_.S4}) {
        m = std::max(m, blk->bottomRows(2).cwiseAbs().maxCoeff());
        m = std::max(m, blk->rightCols(2).cwiseAbs().maxCoeff());
    }
    return m;
}

void CanonicalIntegrator::advance_to(double t) {
    if (t < s_.t - 1e-12) throw config_error("cannot integrate backwards");
    if (t <= s_.t) return;
    const int steps = std::max(1, static_cast<int>(std::llround((t - s_.t) / dt_)));
    const double h = (t - s_.t) / steps;

    boost::numeric::odeint::runge_kutta4<Eigen::VectorXcd> stepper;
    CoefficientSeries scratch = make_series(s_.n_max, s_.t, s_.omega);
    auto rhs = [&](const Eigen::VectorXcd& y, Eigen::VectorXcd& dy, double) {
        unpack(y, scratch);
        dy = pack(canonical_rhs(scratch, cfg_));
    };

    Eigen::VectorXcd y = pack(s_);
    double tc = s_.t;
    for (int k = 0; k < steps; ++k) {
        stepper.do_step(rhs, y, tc, h);
        tc += h;
        unpack(y, s_);
        s_.t = tc;
        const double mass = band_mass();
        if (mass > kBandThreshold) {
            std::ostringstream msg;
            msg << "coefficient mass " << mass << " reached the top photon bands at t=" << tc
                << "; increase n_max";
            throw truncation_error(msg.str());
        }
    }
    s_.t = t;
    if (!y.allFinite()) throw std::runtime_error("integration produced non-finite values");
}

CoefficientSeries integrate_canonical(const CoefficientSeries& s0, const ScenarioConfig& cfg,
                                      double t_end, double dt) {
    CanonicalIntegrator it(s0, cfg, dt);
    it.advance_to(t_end);
    return it.state();
}

cplx standard_nu(double Omega, double Delta, int m) {
    return std::sqrt(cplx{Delta * Delta - static_cast<double>(m) * Omega * Omega, 0.0});
}

StandardRuleConstants standard_rule_constants(const AmplitudeState& initial,
                                              const ScenarioConfig& cfg) {
    if (initial.t != 0.0) throw config_error("standard-rule constants are fixed by the t=0 amplitudes");
    const int nb = cfg.n_max + 1;
    if (static_cast<int>(initial.A1.size()) != nb || static_cast<int>(initial.A2.size()) != nb)
        throw config_error("amplitude arrays do not match n_max");

    StandardRuleConstants c;
    c.Omega = cfg.rabi_Omega;
    c.Delta = cfg.detuning_Delta;
    c.A.setZero(nb);
    c.B.setZero(nb);
    const Eigen::VectorXd isf = inv_sqrt_factorials(nb);
    for (int m = 1; m < nb; ++m) {
        const cplx a1 = initial.A1[static_cast<std::size_t>(m)];
        const cplx a2 = initial.A2[static_cast<std::size_t>(m)];
        const cplx nu = standard_nu(c.Omega, c.Delta, m);
        c.A(m) = -std::conj(a1) * isf(m) / kTwoPi;
        // at the exact crossover nu=0 the sin quadrature degenerates
        // (secular growth); these constants are diagnostic only, drop it
        if (std::abs(nu) > 1e-12)
            c.B(m) = kI *
                     std::conj(c.Delta * a1 -
                               c.Omega * std::sqrt(static_cast<double>(m)) * a2) *
                     isf(m) / (kTwoPi * nu);
    }
    return c;
}

StandardRuleConstants standard_rule_unit_constants(int fock_m, const ScenarioConfig& cfg) {
    if (fock_m < 1 || fock_m > cfg.n_max) throw config_error("mode index out of range");
    StandardRuleConstants c;
    c.Omega = cfg.rabi_Omega;
    c.Delta = cfg.detuning_Delta;
    c.A.setZero(cfg.n_max + 1);
    c.B.setZero(cfg.n_max + 1);
    c.A(fock_m) = 1.0;
    return c;
}

StandardRuleSolution standard_fpe_solution(const StandardRuleConstants& c, double t) {
    const int nb = static_cast<int>(c.A.size());
    StandardRuleSolution sol;
    sol.phi1.setZero(nb);
    sol.phi2.setZero(nb);
    for (int m = 1; m < nb; ++m) {
        const cplx nu = standard_nu(c.Omega, c.Delta, m);
        const cplx cs = std::cos(0.5 * nu * t);
        const cplx sn = std::sin(0.5 * nu * t);
        sol.phi1(m) = c.A(m) * cs + c.B(m) * sn;
        sol.phi2(m - 1) = kI *
                          (cs * (nu * c.B(m) + kI * c.Delta * c.A(m)) +
                           sn * (-nu * c.A(m) + kI * c.Delta * c.B(m))) /
                          c.Omega;
    }
    sol.R2_11 = sol.phi1.conjugate() * sol.phi1.transpose();
    sol.R2_12 = sol.phi1.conjugate() * sol.phi2.transpose();
    sol.R2_21 = sol.phi2.conjugate() * sol.phi1.transpose();
    sol.R2_22 = sol.phi2.conjugate() * sol.phi2.transpose();
    sol.non_normalizable = true;
    return sol;
}

StandardRuleSolution standard_fpe_solution(const AmplitudeState& initial,
                                           const ScenarioConfig& cfg, double t) {
    return standard_fpe_solution(standard_rule_constants(initial, cfg), t);
}

DivergenceReport divergence_report(const ScenarioConfig& cfg, const std::vector<double>& t_grid) {
    if (t_grid.size() < 3) throw config_error("divergence report needs at least three sample times");
    for (std::size_t i = 1; i < t_grid.size(); ++i)
        if (t_grid[i] <= t_grid[i - 1]) throw config_error("sample times must increase");

    const AmplitudeState initial = initial_amplitudes(cfg);
    const StenholmConstants stc = stenholm_constants(initial, cfg);
    const StandardRuleConstants src = standard_rule_constants(initial, cfg);
    const int nm = cfg.n_max;

    DivergenceReport rep;

    const PsiPair p0 = stenholm_psi(stc, 0.0);
    rep.psi_bound = std::abs(p0.psi2(0));
    for (int n = 1; n <= nm; ++n) {
        const double cn = std::norm(p0.psi1(n - 1)) +
                          static_cast<double>(n) * std::norm(p0.psi2(n));
        rep.psi_bound = std::max(rep.psi_bound, std::sqrt(cn));
    }

    for (double t : t_grid) {
        const PsiPair p = stenholm_psi(stc, t);
        if (p.psi1.size() > 0) rep.psi_sup = std::max(rep.psi_sup, p.psi1.cwiseAbs().maxCoeff());
        rep.psi_sup = std::max(rep.psi_sup, p.psi2.cwiseAbs().maxCoeff());
        const StandardRuleSolution f = standard_fpe_solution(src, t);
        rep.phi_sup = std::max({rep.phi_sup, f.phi1.cwiseAbs().maxCoeff(),
                                f.phi2.cwiseAbs().maxCoeff()});
    }

    const double t1 = t_grid[t_grid.size() / 2];
    const double t2 = t_grid.back();
    const StandardRuleSolution f1 = standard_fpe_solution(src, t1);
    const StandardRuleSolution f2 = standard_fpe_solution(src, t2);
    const double crossover =
        (cfg.detuning_Delta / cfg.rabi_Omega) * (cfg.detuning_Delta / cfg.rabi_Omega);
    for (int m = 1; m <= nm; ++m) {
        if (std::abs(src.A(m)) + std::abs(src.B(m)) == 0.0) continue;
        ModeGrowth g;
        g.m = m;
        g.nu = standard_nu(cfg.rabi_Omega, cfg.detuning_Delta, m);
        g.divergent = static_cast<double>(m) > crossover;
        g.predicted_rate = 0.5 * std::abs(g.nu.imag());
        const double v1 = std::abs(f1.phi1(m));
        const double v2 = std::abs(f2.phi1(m));
        if (v1 > 0.0 && v2 > 0.0 && t2 > t1) g.measured_rate = std::log(v2 / v1) / (t2 - t1);
        rep.modes.push_back(g);
    }
    return rep;
}

}  // namespace gpjc
