#pragma once

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "gpjc/grassmann.hpp"
#include "gpjc/jc_reference.hpp"

namespace gpjc {

// Coefficient blocks of the positive-P distribution over the rotating phase
// variables (gamma~, delta~).  Entry (a,b) of a block multiplies the basis
// element gamma~*^a gamma~^b / sqrt(a! b!); the shared Gaussian factors
// exp(-|gamma~|^2) exp(-|delta~|^2) and the 1/(4 pi^2) prefactor are implied,
// not stored.  All constant measure factors fold to w = 1, so diagonal sums
// are directly physical.  The fast phases exp(-i omega t) on S2_12 and
// exp(+i omega t) on S2_21 are metadata: stored entries are phase-stripped
// and the factors are reapplied only when observables are formed.
struct CoefficientSeries {
    double t = 0.0;
    double omega = 0.0;
    int n_max = 0;
    Eigen::MatrixXcd S0, S2_11, S2_12, S2_21, S2_22, S4;
};

// Zero-initialized series with (n_max+1)^2 blocks.
CoefficientSeries make_series(int n_max, double t = 0.0, double omega = 0.0);

// The eight Grassmann generators used to double phase space for density-matrix
// projection: g1, g2 (bra side), g1p, g2p (ket side) and their starred
// integration partners.  Shared singleton so polynomials from different calls
// compose.
const GeneratorSet& doubled_generators();

// Weight polynomial in (g1, g2, g1p, g2p) produced by Berezin-integrating the
// doubled-variable kernel against the dyad |b_j><b_k|.  Determines how each
// fermion block of a density matrix feeds the stored coefficient blocks:
// the constant part feeds S0, the g1*g1p / g2*g2p bilinears feed S2_11 /
// S2_22, the cross bilinears feed S2_12 / S2_21, and the quartic feeds S4.
GrassmannPoly fermion_block_weight(int j, int k);

// Project a (possibly mixed) density matrix on the atom (x) cavity space onto
// coefficient blocks at time t.  rho must be supported on the one-atom sector
// plus optional zero-/two-atom diagonal blocks; coherences between different
// atom numbers have no representation here and raise config_error.
CoefficientSeries from_density(const Eigen::MatrixXcd& rho, double t, double omega);

// Blocks at t=0 for a configured initial state (routes through from_density).
CoefficientSeries initial_coefficients(const ScenarioConfig& cfg);

// Closed-form t=0 blocks for "atom in state 1, cavity coherent eta": the only
// nonzero blocks are S2_22 (outer product of the Poisson amplitude vector)
// and S4 = S2_22.  Cross-check artifact for initial_coefficients.
CoefficientSeries coherent_lower_closed_form(cplx eta, double omega, int n_max);

// Gaussian-moment observables of a series.  rho12 and rho21 are computed
// independently (each from its own block with its own rotating factor), not
// by conjugation.  norm is the S4 diagonal sum (exactly 1 for a faithful
// state); trunc_mass is the top photon band's share of it.
Observables phase_observables(const CoefficientSeries& s);

// Maximum structure violations of a series.
struct StructureReport {
    double hermiticity = 0.0;    // max |block - block^H|, S2_12 checked against S2_21^H
    double normalization = 0.0;  // |sum_a S4_aa - 1|
    double s0_mass = 0.0;        // max |S0 entry| (zero for one-atom states)
    double rank_residual = 0.0;  // max second singular value over S2 blocks
};
StructureReport check_structure(const CoefficientSeries& s);

// Brute-force evaluation of the phase-space moment integrals on a
// Gauss-Legendre product grid over [-R,R]^4 in
// (Re gamma~, Im gamma~, Re delta~, Im delta~), reconstructing the implied
// Gaussian factors and the 4/(4 pi^2) measure constant explicitly.
struct QuadratureGrid {
    double R = 8.0;
    int nodes = 64;  // per axis
};

enum class ObservableId { P0, P1, P2, P12, Rho12, Rho21, Nbar, Norm };

cplx quadrature_oracle(const CoefficientSeries& s, ObservableId which,
                       const QuadratureGrid& grid = {});

// 2-D Gauss-Legendre value of the plane moment
// integral d^2z exp(-|z|^2) conj(z)^n z^m  (exact value: pi n! delta_nm).
cplx gaussian_plane_moment(int n, int m, const QuadratureGrid& grid = {});

// JSON round-trip: {t, omega, n_max, blocks: {name: [[re,im],...] row-major}}.
nlohmann::json series_to_json(const CoefficientSeries& s);
CoefficientSeries series_from_json(const nlohmann::json& j);

}  // namespace gpjc
