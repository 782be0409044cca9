#include "gpjc/jc_reference.hpp"

#include <boost/numeric/odeint.hpp>
#include <boost/numeric/odeint/external/eigen/eigen.hpp>
#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

#include "gpjc/fermion_fock.hpp"

namespace gpjc {

namespace {

constexpr cplx kI{0.0, 1.0};

int rk4_steps(double t_end, double dt) {
    return std::max(1, static_cast<int>(std::ceil(t_end / dt - 1e-12)));
}

void check_finite(const Eigen::VectorXcd& y) {
    if (!y.allFinite()) throw std::runtime_error("integration produced non-finite values");
}

std::vector<cplx> poisson_amplitudes(cplx eta, int count) {
    std::vector<cplx> amps(count);
    if (count == 0) return amps;
    amps[0] = std::exp(-0.5 * std::norm(eta));
    for (int n = 1; n < count; ++n) amps[n] = amps[n - 1] * eta / std::sqrt(double(n));
    return amps;
}

}  // namespace

int default_n_max(const InitialState& init) {
    switch (init.kind) {
        case InitialState::Kind::Fock:
            return init.fock_m + 2;
        case InitialState::Kind::Coherent: {
            const double a = std::abs(init.eta);
            return static_cast<int>(std::ceil(a * a + 8.0 * a + 10.0));
        }
        case InitialState::Kind::Custom:
            if (init.custom_a1.empty()) throw config_error("custom initial state has no amplitudes");
            return static_cast<int>(init.custom_a1.size()) - 1;
    }
    throw config_error("unknown initial state kind");
}

void validate_config(const ScenarioConfig& cfg) {
    if (cfg.n_max < 1) throw config_error("n_max must be at least 1");
    if (!cfg.time_grid.empty()) {
        if (cfg.time_grid.front() != 0.0) throw config_error("time grid must start at 0");
        for (std::size_t i = 1; i < cfg.time_grid.size(); ++i)
            if (cfg.time_grid[i] <= cfg.time_grid[i - 1])
                throw config_error("time grid must be strictly increasing");
    }
    const auto& init = cfg.initial;
    switch (init.kind) {
        case InitialState::Kind::Fock:
            if (init.atom != 1 && init.atom != 2) throw config_error("atom must be 1 or 2");
            if (init.fock_m < 0) throw config_error("photon number must be non-negative");
            if (init.fock_m + (init.atom == 2 ? 1 : 0) > cfg.n_max)
                throw config_error("n_max too small for the Fock initial state");
            break;
        case InitialState::Kind::Coherent:
            if (init.atom != 1 && init.atom != 2) throw config_error("atom must be 1 or 2");
            break;
        case InitialState::Kind::Custom: {
            const std::size_t want = static_cast<std::size_t>(cfg.n_max) + 1;
            if (init.custom_a1.size() != want || init.custom_a2.size() != want)
                throw config_error("custom amplitude arrays must have n_max+1 entries");
            if (std::abs(init.custom_a2[0]) > 1e-12)
                throw config_error("custom A2[0] must be zero (no partner state)");
            double norm = 0.0;
            for (const auto& c : init.custom_a1) norm += std::norm(c);
            for (const auto& c : init.custom_a2) norm += std::norm(c);
            if (std::abs(norm - 1.0) > 1e-12)
                throw config_error("custom initial state is not normalized");
            break;
        }
    }
}

double rabi_freq(const ScenarioConfig& cfg, int n) {
    return std::hypot(cfg.detuning_Delta, std::sqrt(double(n)) * cfg.rabi_Omega);
}

AmplitudeState initial_amplitudes(const ScenarioConfig& cfg) {
    validate_config(cfg);
    AmplitudeState s;
    s.t = 0.0;
    s.A1.assign(static_cast<std::size_t>(cfg.n_max) + 1, cplx{});
    s.A2.assign(static_cast<std::size_t>(cfg.n_max) + 1, cplx{});
    const auto& init = cfg.initial;
    switch (init.kind) {
        case InitialState::Kind::Fock:
            if (init.atom == 1)
                s.A1[static_cast<std::size_t>(init.fock_m)] = 1.0;
            else
                s.A2[static_cast<std::size_t>(init.fock_m) + 1] = 1.0;
            break;
        case InitialState::Kind::Coherent: {
            auto amps = poisson_amplitudes(init.eta, cfg.n_max + 1);
            if (init.atom == 1) {
                s.A1 = std::move(amps);
            } else {
                for (int n = 1; n <= cfg.n_max; ++n)
                    s.A2[static_cast<std::size_t>(n)] = amps[static_cast<std::size_t>(n) - 1];
            }
            break;
        }
        case InitialState::Kind::Custom:
            s.A1 = init.custom_a1;
            s.A2 = init.custom_a2;
            s.A2[0] = 0.0;
            break;
    }
    return s;
}

AmplitudeState closed_form_amplitudes(const ScenarioConfig& cfg, double t) {
    AmplitudeState s = initial_amplitudes(cfg);
    s.t = t;
    const double D = cfg.detuning_Delta;
    const double Om = cfg.rabi_Omega;
    const cplx down = std::exp(-0.5 * kI * D * t);  // exp(-i Delta t / 2)
    for (int n = 1; n <= cfg.n_max; ++n) {
        const auto i = static_cast<std::size_t>(n);
        const double wn = rabi_freq(cfg, n);
        const cplx a1 = s.A1[i], a2 = s.A2[i];
        if (wn < 1e-300) continue;  // Omega = Delta = 0: block is stationary
        const double sq = std::sqrt(double(n));
        const double c = std::cos(0.5 * wn * t), sn = std::sin(0.5 * wn * t);
        s.A1[i] = down * (c * a1 + kI * sn * (D * a1 - Om * sq * a2) / wn);
        s.A2[i] = std::conj(down) * (c * a2 - kI * sn * (Om * sq * a1 + D * a2) / wn);
    }
    // the n = 0 block has no partner and keeps its amplitude exactly
    return s;
}

AmplitudeState integrate_amplitudes(const ScenarioConfig& cfg, double t_end, double dt) {
    if (dt <= 0.0) throw config_error("dt must be positive");
    AmplitudeState s = initial_amplitudes(cfg);
    if (t_end == 0.0) return s;

    const int nm = cfg.n_max;
    Eigen::VectorXcd y(2 * (nm + 1));
    for (int n = 0; n <= nm; ++n) {
        y[n] = s.A1[static_cast<std::size_t>(n)];
        y[nm + 1 + n] = s.A2[static_cast<std::size_t>(n)];
    }

    const double D = cfg.detuning_Delta;
    const double Om = cfg.rabi_Omega;
    auto rhs = [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& dxdt, double t) {
        dxdt.resize(x.size());
        dxdt[0] = 0.0;
        dxdt[nm + 1] = 0.0;
        const cplx ph = std::exp(-kI * D * t);  // exp(-i Delta t)
        for (int n = 1; n <= nm; ++n) {
            const cplx g = -0.5 * kI * Om * std::sqrt(double(n));
            dxdt[n] = g * ph * x[nm + 1 + n];
            dxdt[nm + 1 + n] = g * std::conj(ph) * x[n];
        }
    };

    boost::numeric::odeint::runge_kutta4<Eigen::VectorXcd> stepper;
    const int steps = rk4_steps(t_end, dt);
    const double h = t_end / steps;
    double t = 0.0;
    for (int k = 0; k < steps; ++k, t += h) stepper.do_step(rhs, y, t, h);
    check_finite(y);

    s.t = t_end;
    for (int n = 0; n <= nm; ++n) {
        s.A1[static_cast<std::size_t>(n)] = y[n];
        s.A2[static_cast<std::size_t>(n)] = y[nm + 1 + n];
    }
    return s;
}

Observables amplitude_observables(const AmplitudeState& s, const ScenarioConfig& cfg) {
    Observables o;
    const int nm = static_cast<int>(s.A1.size()) - 1;
    for (int n = 0; n <= nm; ++n) {
        const auto i = static_cast<std::size_t>(n);
        o.P1 += std::norm(s.A1[i]);
        o.P2 += std::norm(s.A2[i]);
        o.nbar += n * std::norm(s.A1[i]);
        if (n >= 1) o.nbar += (n - 1) * std::norm(s.A2[i]);
    }
    // <sigma_-> in the non-rotating picture: the interaction-picture cross
    // terms re-dress with exp(-i omega0 t), omega0 = omega + Delta
    cplx cross{};
    for (int k = 0; k + 1 <= nm; ++k)
        cross += s.A2[static_cast<std::size_t>(k) + 1] * std::conj(s.A1[static_cast<std::size_t>(k)]);
    const double w0 = cfg.cavity_omega + cfg.detuning_Delta;
    o.rho12 = std::exp(-kI * w0 * s.t) * cross;
    o.rho21 = std::conj(o.rho12);
    o.norm = o.P1 + o.P2;
    o.trunc_mass = std::norm(s.A1[static_cast<std::size_t>(nm)]) +
                   std::norm(s.A2[static_cast<std::size_t>(nm)]);
    return o;
}

Eigen::MatrixXcd boson_annihilator(int n_max) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

Eigen::MatrixXcd build_enlarged_hamiltonian(const ScenarioConfig& cfg) {
    validate_config(cfg);
    const int dim_b = cfg.n_max + 1;

    GeneratorSet gs({"g1", "g2"});
    auto ops = atomic_operators(gs);
    auto to_matrix = [&gs](const FermionOperator& op) {
        auto e = scalar_entries(op);
        Eigen::MatrixXcd m(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) m(i, j) = e[i][j];
        return m;
    };
    auto n1 = to_matrix(compose(mode_operator(gs, Mode::c1dag), mode_operator(gs, Mode::c1)));
    auto n2 = to_matrix(compose(mode_operator(gs, Mode::c2dag), mode_operator(gs, Mode::c2)));
    auto sp = to_matrix(ops.sigma_plus);
    auto sm = to_matrix(ops.sigma_minus);

    auto a = boson_annihilator(cfg.n_max);
    Eigen::MatrixXcd adag = a.adjoint();
    Eigen::MatrixXcd id_b = Eigen::MatrixXcd::Identity(dim_b, dim_b);
    Eigen::MatrixXcd num_b = adag * a;

    const double w0 = cfg.cavity_omega + cfg.detuning_Delta;
    Eigen::MatrixXcd H = Eigen::kroneckerProduct(0.5 * w0 * (n2 - n1), id_b);
    H += Eigen::kroneckerProduct(Eigen::MatrixXcd::Identity(4, 4), cfg.cavity_omega * num_b);
    H += 0.5 * cfg.rabi_Omega *
         (Eigen::kroneckerProduct(sp, a) + Eigen::kroneckerProduct(sm, adag));
    return H;
}

Eigen::VectorXcd initial_state_vector(const ScenarioConfig& cfg) {
    AmplitudeState s = initial_amplitudes(cfg);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4 * (cfg.n_max + 1));
    for (int n = 0; n <= cfg.n_max; ++n) {
        psi[flat_index(1, n, cfg.n_max)] = s.A1[static_cast<std::size_t>(n)];
        if (n >= 1) psi[flat_index(2, n - 1, cfg.n_max)] = s.A2[static_cast<std::size_t>(n)];
    }
    return psi;
}

Eigen::MatrixXcd initial_density(const ScenarioConfig& cfg) {
    Eigen::VectorXcd psi = initial_state_vector(cfg);
    return psi * psi.adjoint();
}

DensityPropagator::DensityPropagator(const ScenarioConfig& cfg) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(build_enlarged_hamiltonian(cfg));
    if (es.info() != Eigen::Success) throw std::runtime_error("hamiltonian diagonalization failed");
    vecs_ = es.eigenvectors();
    vals_ = es.eigenvalues();
}

Eigen::MatrixXcd DensityPropagator::at(const Eigen::MatrixXcd& rho0, double t) const {
    Eigen::VectorXcd phases(vals_.size());
    for (Eigen::Index i = 0; i < vals_.size(); ++i) phases[i] = std::exp(-kI * vals_[i] * t);
    Eigen::MatrixXcd U = vecs_ * phases.asDiagonal() * vecs_.adjoint();
    return U * rho0 * U.adjoint();
}

namespace {

void check_density(const Eigen::MatrixXcd& rho0) {
    if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
        throw config_error("density matrix is not Hermitian");
    if (std::abs(rho0.trace() - cplx{1.0}) > 1e-8)
        throw config_error("density matrix trace is not 1");
}

}  // namespace

Eigen::MatrixXcd evolve_density(const ScenarioConfig& cfg, const Eigen::MatrixXcd& rho0,
                                double t) {
    check_density(rho0);
    Eigen::MatrixXcd rho = DensityPropagator(cfg).at(rho0, t);
    if (std::abs(rho.trace() - rho0.trace()) > 1e-10)
        throw std::runtime_error("density evolution lost trace");
    return rho;
}

Eigen::MatrixXcd evolve_density_rk4(const ScenarioConfig& cfg, const Eigen::MatrixXcd& rho0,
                                    double t, double dt) {
    check_density(rho0);
    if (dt <= 0.0) throw config_error("dt must be positive");
    Eigen::MatrixXcd H = build_enlarged_hamiltonian(cfg);
    auto rhs = [&H](const Eigen::MatrixXcd& r, Eigen::MatrixXcd& drdt, double) {
        drdt = -kI * (H * r - r * H);
    };
    Eigen::MatrixXcd rho = rho0;
    if (t == 0.0) return rho;
    boost::numeric::odeint::runge_kutta4<Eigen::MatrixXcd> stepper;
    const int steps = rk4_steps(t, dt);
    const double h = t / steps;
    double tc = 0.0;
    for (int k = 0; k < steps; ++k, tc += h) stepper.do_step(rhs, rho, tc, h);
    if (!rho.allFinite()) throw std::runtime_error("integration produced non-finite values");
    return rho;
}

Observables density_observables(const Eigen::MatrixXcd& rho, const ScenarioConfig& cfg) {
    const int nm = cfg.n_max;
    Observables o;
    for (int n = 0; n <= nm; ++n) {
        o.P0 += rho(flat_index(0, n, nm), flat_index(0, n, nm)).real();
        o.P1 += rho(flat_index(1, n, nm), flat_index(1, n, nm)).real();
        o.P2 += rho(flat_index(2, n, nm), flat_index(2, n, nm)).real();
        o.P12 += rho(flat_index(3, n, nm), flat_index(3, n, nm)).real();
        for (int slot = 0; slot < 4; ++slot)
            o.nbar += n * rho(flat_index(slot, n, nm), flat_index(slot, n, nm)).real();
        o.rho12 += rho(flat_index(2, n, nm), flat_index(1, n, nm));
    }
    o.rho21 = std::conj(o.rho12);
    o.norm = o.P0 + o.P1 + o.P2 + o.P12;
    for (int slot = 0; slot < 4; ++slot)
        o.trunc_mass += rho(flat_index(slot, nm, nm), flat_index(slot, nm, nm)).real();
    return o;
}

}  // namespace gpjc
