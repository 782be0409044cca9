#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gpjc/grassmann.hpp"

namespace gpjc {

// Initial conditions for the single-atom/single-mode model. Atom 1 is the
// lower level (first fermion mode occupied), atom 2 the upper level.
struct InitialState {
    enum class Kind { Fock, Coherent, Custom };
    Kind kind = Kind::Fock;
    int atom = 1;    // 1 or 2, Fock/Coherent variants
    int fock_m = 0;  // photon number, Fock variant
    cplx eta{};      // field amplitude, Coherent variant
    // Custom variant: amplitude arrays sized n_max+1 (see AmplitudeState for
    // the index pairing); custom_a2[0] must be zero.
    std::vector<cplx> custom_a1, custom_a2;
};

struct ScenarioConfig {
    double rabi_Omega = 1.0;
    double detuning_Delta = 0.0;  // atomic transition frequency minus cavity frequency
    double cavity_omega = 0.0;
    InitialState initial;
    int n_max = 1;
    std::vector<double> time_grid;
};

// Interaction-picture amplitudes. A1[n] multiplies (atom 1, n photons) and
// A2[n] multiplies (atom 2, n-1 photons); A2[0] is identically zero. Both
// arrays run n = 0..n_max.
struct AmplitudeState {
    double t = 0.0;
    std::vector<cplx> A1, A2;
};

struct Observables {
    double P0 = 0.0, P1 = 0.0, P2 = 0.0, P12 = 0.0;
    cplx rho12{}, rho21{};
    double nbar = 0.0;
    double norm = 0.0;
    double trunc_mass = 0.0;
};

// Default photon-space truncation: Fock needs headroom of one exchange quantum;
// coherent keeps the dropped Poisson tail mass below 1e-12.
int default_n_max(const InitialState& init);
void validate_config(const ScenarioConfig& cfg);

// omega_n = sqrt(Delta^2 + n Omega^2)
double rabi_freq(const ScenarioConfig& cfg, int n);

AmplitudeState initial_amplitudes(const ScenarioConfig& cfg);
// Exact per-n two-block rotation of the initial amplitudes.
AmplitudeState closed_form_amplitudes(const ScenarioConfig& cfg, double t);
// Fixed-step RK4 on the coupled amplitude equations with the explicit
// exp(±i Delta t) factors; lands exactly on t_end.
AmplitudeState integrate_amplitudes(const ScenarioConfig& cfg, double t_end, double dt);
Observables amplitude_observables(const AmplitudeState& s, const ScenarioConfig& cfg);

// Enlarged-space matrix oracle on the 4(n_max+1)-dimensional fermion⊗boson
// product, basis index = atom_slot*(n_max+1) + photon_number with the fermion
// slot order of fermion_fock.
inline int flat_index(int slot, int n, int n_max) { return slot * (n_max + 1) + n; }

Eigen::MatrixXcd boson_annihilator(int n_max);
Eigen::MatrixXcd build_enlarged_hamiltonian(const ScenarioConfig& cfg);
Eigen::VectorXcd initial_state_vector(const ScenarioConfig& cfg);
Eigen::MatrixXcd initial_density(const ScenarioConfig& cfg);

// Eigendecomposition propagator; diagonalizes once, evaluates at any t.
class DensityPropagator {
  public:
    explicit DensityPropagator(const ScenarioConfig& cfg);
    Eigen::MatrixXcd at(const Eigen::MatrixXcd& rho0, double t) const;

  private:
    Eigen::MatrixXcd vecs_;
    Eigen::VectorXd vals_;
};

Eigen::MatrixXcd evolve_density(const ScenarioConfig& cfg, const Eigen::MatrixXcd& rho0, double t);
// RK4 on the von Neumann equation, retained as a cross-check path.
Eigen::MatrixXcd evolve_density_rk4(const ScenarioConfig& cfg, const Eigen::MatrixXcd& rho0,
                                    double t, double dt);
Observables density_observables(const Eigen::MatrixXcd& rho, const ScenarioConfig& cfg);

}  // namespace gpjc
