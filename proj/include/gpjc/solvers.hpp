#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "gpjc/jc_reference.hpp"
#include "gpjc/phase_space.hpp"

namespace gpjc {

// Raised when the spectral integrator leaks coefficient mass into the top
// photon bands: the result would silently depend on n_max, so refuse instead.
struct truncation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Constants of the per-block analytic solution.  Index n runs 0..n_max; block
// n rotates at omega_n = sqrt(Delta^2 + n Omega^2).  Entry 0 is the regular
// uncoupled block: its partner function vanishes identically (the singular
// 1/gamma~ branch is never constructed), it just carries the detuning phase.
struct StenholmConstants {
    Eigen::VectorXcd A, B;
    double Omega = 0.0;
    double Delta = 0.0;
};

// Truncated coefficient arrays of the two ansatz functions in the plain
// monomial basis gamma~^k: psi1 holds degrees 0..n_max-1 (block n feeds
// degree n-1), psi2 holds degrees 0..n_max.
struct PsiPair {
    Eigen::VectorXcd psi1, psi2;
};

StenholmConstants stenholm_constants(const AmplitudeState& initial, const ScenarioConfig& cfg);
PsiPair stenholm_psi(const StenholmConstants& c, double t);
// Outer products of the psi arrays, rescaled to the factorial-normalized
// coefficient basis; S4 = S2_11 + S2_22, S0 = 0.
CoefficientSeries stenholm_coefficients(const StenholmConstants& c, double t,
                                        const ScenarioConfig& cfg);

// Right-hand sides of the coupled coefficient equations, with gamma~
// multiplication and d/d gamma~ realized as banded shifts carrying the
// sqrt(n) factors of the normalized basis.
CoefficientSeries canonical_rhs(const CoefficientSeries& s, const ScenarioConfig& cfg);

// Fixed-step RK4 on the flattened blocks.  Monitors the top two photon bands
// after every step; mass above the threshold raises truncation_error naming
// the leaked magnitude (remedy: larger n_max).
class CanonicalIntegrator {
  public:
    CanonicalIntegrator(CoefficientSeries s0, const ScenarioConfig& cfg, double dt);

    const CoefficientSeries& state() const { return s_; }
    double band_mass() const;  // max coefficient magnitude in the top two bands
    void advance_to(double t);

    static constexpr double kBandThreshold = 1e-8;

  private:
    CoefficientSeries s_;
    ScenarioConfig cfg_;
    double dt_;
};

CoefficientSeries integrate_canonical(const CoefficientSeries& s0, const ScenarioConfig& cfg,
                                      double t_end, double dt);

// Mode constants of the standard-rule (unfactored Fokker-Planck) solution.
// nu_m = sqrt(Delta^2 - m Omega^2) goes imaginary for m > (Delta/Omega)^2 and
// the cos/sin blocks turn hyperbolic.
struct StandardRuleConstants {
    Eigen::VectorXcd A, B;  // index m = 0..n_max; m = 0 unused
    double Omega = 0.0;
    double Delta = 0.0;
};

// phi1[k]: coefficient of beta^k (modes m = k >= 1); phi2[k]: coefficient of
// beta^k contributed by mode m = k+1.  The R2 blocks are plain monomial-basis
// outer products conj(phi_i[a]) phi_j[b]; the exp(beta beta+) prefactor of
// the full solution is never multiplied in (non_normalizable flags it), so
// these are diagnostics, not a distribution.
struct StandardRuleSolution {
    Eigen::VectorXcd phi1, phi2;
    Eigen::MatrixXcd R2_11, R2_12, R2_21, R2_22;
    bool non_normalizable = true;
};

cplx standard_nu(double Omega, double Delta, int m);
StandardRuleConstants standard_rule_constants(const AmplitudeState& initial,
                                              const ScenarioConfig& cfg);
// A_m = 1, B_m = 0 for a single mode: the textbook divergence demonstration.
StandardRuleConstants standard_rule_unit_constants(int fock_m, const ScenarioConfig& cfg);
StandardRuleSolution standard_fpe_solution(const StandardRuleConstants& c, double t);
StandardRuleSolution standard_fpe_solution(const AmplitudeState& initial,
                                           const ScenarioConfig& cfg, double t);

// Side-by-side growth diagnosis: the analytic coefficient blocks stay inside
// their conserved per-block norms while the standard-rule modes above the
// detuning crossover grow like exp(|Im nu_m| t / 2).
struct ModeGrowth {
    int m = 0;
    cplx nu{};
    bool divergent = false;     // m > (Delta/Omega)^2
    double predicted_rate = 0;  // |Im nu_m| / 2
    double measured_rate = 0;   // log-slope of the phi1 component over the grid tail
};

struct DivergenceReport {
    std::vector<ModeGrowth> modes;
    double psi_sup = 0.0;    // sup over the grid of every psi component
    double psi_bound = 0.0;  // bound implied by the conserved block norms
    double phi_sup = 0.0;    // sup over the grid of every phi component
};

DivergenceReport divergence_report(const ScenarioConfig& cfg, const std::vector<double>& t_grid);

}  // namespace gpjc
