#include "gpjc/phase_space.hpp"

#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <string>
#include <vector>

#include "gpjc/fermion_fock.hpp"

namespace gpjc {

namespace {

constexpr cplx kI{0.0, 1.0};

// Density blocks below this mass are treated as numerically absent when they
// sit in a sector the coefficient form cannot represent.
constexpr double kSectorTol = 1e-12;

// Starred variables integrated out of the doubled kernel, each next to its
// doubled partner, mode by mode.  The order is load-bearing: it selects the
// overall sign of every weight below (any reordering flips all of them
// together with its permutation parity).
const std::vector<std::string>& projection_measure() {
    static const std::vector<std::string> m = {"g1s", "g1ps", "g2s", "g2ps"};
    return m;
}

// How one fermion block feeds the six stored blocks: the coefficients of the
// canonical monomials in fermion_block_weight(j,k).  canonical is false when
// the weight has any component outside those monomials, i.e. the block sits
// in a sector (atom-number coherence) the distribution cannot carry.
struct BlockRoute {
    cplx s0{}, s11{}, s12{}, s21{}, s22{}, s4{};
    bool canonical = true;
};

const std::array<std::array<BlockRoute, 4>, 4>& block_routes() {
    static const auto routes = [] {
        std::array<std::array<BlockRoute, 4>, 4> r{};
        const auto& gs = doubled_generators();
        for (int j = 0; j < 4; ++j) {
            for (int k = 0; k < 4; ++k) {
                auto w = fermion_block_weight(j, k);
                BlockRoute& b = r[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
                b.s0 = w.coeff_of({});
                b.s11 = w.coeff_of({"g1", "g1p"});
                b.s12 = w.coeff_of({"g1", "g2p"});
                b.s21 = w.coeff_of({"g2", "g1p"});
                b.s22 = w.coeff_of({"g2", "g2p"});
                b.s4 = w.coeff_of({"g1", "g2", "g2p", "g1p"});
                auto rebuilt = GrassmannPoly::scalar(gs, b.s0) +
                               GrassmannPoly::monomial(gs, {"g1", "g1p"}, b.s11) +
                               GrassmannPoly::monomial(gs, {"g1", "g2p"}, b.s12) +
                               GrassmannPoly::monomial(gs, {"g2", "g1p"}, b.s21) +
                               GrassmannPoly::monomial(gs, {"g2", "g2p"}, b.s22) +
                               GrassmannPoly::monomial(gs, {"g1", "g2", "g2p", "g1p"}, b.s4);
                b.canonical = (w - rebuilt).max_abs_coeff() == 0.0;
            }
        }
        return r;
    }();
    return routes;
}

// Gauss-Legendre nodes/weights rescaled to [-R, R].
struct Axis {
    std::vector<double> x, w;
};

template <unsigned N>
Axis fill_axis(double R) {
    using rule = boost::math::quadrature::gauss<double, N>;
    Axis a;
    const auto& xs = rule::abscissa();
    const auto& ws = rule::weights();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] == 0.0) {
            a.x.push_back(0.0);
            a.w.push_back(R * ws[i]);
        } else {
            a.x.push_back(-R * xs[i]);
            a.w.push_back(R * ws[i]);
            a.x.push_back(R * xs[i]);
            a.w.push_back(R * ws[i]);
        }
    }
    return a;
}

Axis gl_axis(const QuadratureGrid& grid) {
    switch (grid.nodes) {
        case 8: return fill_axis<8>(grid.R);
        case 16: return fill_axis<16>(grid.R);
        case 24: return fill_axis<24>(grid.R);
        case 32: return fill_axis<32>(grid.R);
        case 48: return fill_axis<48>(grid.R);
        case 64: return fill_axis<64>(grid.R);
        case 96: return fill_axis<96>(grid.R);
        case 128: return fill_axis<128>(grid.R);
        default: throw config_error("unsupported quadrature node count");
    }
}

// Plane moments of the delta~ factor exp(-|z|^2): 1, z, conj(z), |z|^2.
struct PlaneMoments {
    cplx one{}, z{}, zbar{}, zzbar{};
};

PlaneMoments delta_moments(const Axis& ax) {
    PlaneMoments m;
    for (std::size_t i = 0; i < ax.x.size(); ++i) {
        for (std::size_t j = 0; j < ax.x.size(); ++j) {
            const cplx z{ax.x[i], ax.x[j]};
            const double w = ax.w[i] * ax.w[j] * std::exp(-std::norm(z));
            m.one += w;
            m.z += w * z;
            m.zbar += w * std::conj(z);
            m.zzbar += w * std::norm(z);
        }
    }
    return m;
}

// Plane integrals over gamma~ of exp(-|g|^2) {1, g, conj(g), |g|^2} times the
// block polynomial sum_ab C_ab conj(g)^a g^b / sqrt(a! b!).
struct BlockMoments {
    cplx one{}, g{}, gbar{}, ggbar{};
};

BlockMoments gamma_moments(const Eigen::MatrixXcd& C, const Axis& ax) {
    const Eigen::Index nb = C.rows();
    BlockMoments m;
    Eigen::VectorXcd pows(nb);
    for (std::size_t i = 0; i < ax.x.size(); ++i) {
        for (std::size_t j = 0; j < ax.x.size(); ++j) {
            const cplx g{ax.x[i], ax.x[j]};
            pows(0) = 1.0;
            for (Eigen::Index n = 1; n < nb; ++n)
                pows(n) = pows(n - 1) * g / std::sqrt(static_cast<double>(n));
            const cplx val = pows.dot(C * pows);  // conj on the left factor
            const double w = ax.w[i] * ax.w[j] * std::exp(-std::norm(g));
            m.one += w * val;
            m.g += w * g * val;
            m.gbar += w * std::conj(g) * val;
            m.ggbar += w * std::norm(g) * val;
        }
    }
    return m;
}

}  // namespace

CoefficientSeries make_series(int n_max, double t, double omega) {
    if (n_max < 0) throw config_error("n_max must be non-negative");
    CoefficientSeries s;
    s.t = t;
    s.omega = omega;
    s.n_max = n_max;
    const Eigen::Index nb = n_max + 1;
    s.S0 = Eigen::MatrixXcd::Zero(nb, nb);
    s.S2_11 = Eigen::MatrixXcd::Zero(nb, nb);
    s.S2_12 = Eigen::MatrixXcd::Zero(nb, nb);
    s.S2_21 = Eigen::MatrixXcd::Zero(nb, nb);
    s.S2_22 = Eigen::MatrixXcd::Zero(nb, nb);
    s.S4 = Eigen::MatrixXcd::Zero(nb, nb);
    return s;
}

const GeneratorSet& doubled_generators() {
    static const GeneratorSet gs(
        {"g1", "g2", "g1p", "g2p", "g1s", "g2s", "g1ps", "g2ps"},
        {{"g1", "g1s"}, {"g2", "g2s"}, {"g1p", "g1ps"}, {"g2p", "g2ps"}});
    return gs;
}

GrassmannPoly fermion_block_weight(int j, int k) {
    if (j < 0 || j > 3 || k < 0 || k > 3) throw config_error("fermion block index out of range");
    const auto& gs = doubled_generators();
    const auto one = GrassmannPoly::scalar(gs, 1.0);
    auto G = [&](const char* n) { return GrassmannPoly::generator(gs, n); };
    // all three pairings of the doubled variables, mode by mode; every factor
    // is even so the product order is immaterial
    const auto E = (one + G("g1") * G("g1s")) * (one + G("g1ps") * G("g1p")) *
                   (one + G("g1") * G("g1p")) * (one + G("g2") * G("g2s")) *
                   (one + G("g2ps") * G("g2p")) * (one + G("g2") * G("g2p"));
    const auto sw = sandwich(bargmann_bra(gs, "g1s", "g2s"), bargmann_ket(gs, "g1ps", "g2ps"));
    return (E * sw[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)])
        .integrate_berezin(projection_measure());
}

CoefficientSeries from_density(const Eigen::MatrixXcd& rho, double t, double omega) {
    const Eigen::Index dim = rho.rows();
    if (rho.cols() != dim || dim < 4 || dim % 4 != 0)
        throw config_error("density matrix must be square with one photon ladder per fermion basis state");
    const Eigen::Index nb = dim / 4;
    CoefficientSeries s = make_series(static_cast<int>(nb) - 1, t, omega);

    Eigen::VectorXcd ph(nb);
    for (Eigen::Index a = 0; a < nb; ++a) ph(a) = std::exp(kI * (omega * t * static_cast<double>(a)));
    const Eigen::MatrixXcd counter = ph * ph.adjoint();  // exp(+i omega t (a-b))
    const cplx strip12 = std::exp(kI * (omega * t));     // undoes the exp(-i omega t) metadata factor

    const auto& routes = block_routes();
    for (int j = 0; j < 4; ++j) {
        for (int k = 0; k < 4; ++k) {
            const auto block = rho.block(j * nb, k * nb, nb, nb);
            const double mass = block.cwiseAbs().maxCoeff();
            if (mass == 0.0) continue;
            const BlockRoute& r = routes[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
            if (!r.canonical) {
                if (mass > kSectorTol)
                    throw config_error("density operator couples atom sectors the coefficient form cannot carry");
                continue;
            }
            const Eigen::MatrixXcd rot = counter.cwiseProduct(block);
            if (r.s0 != 0.0) s.S0 += r.s0 * rot;
            if (r.s11 != 0.0) s.S2_11 += r.s11 * rot;
            if (r.s22 != 0.0) s.S2_22 += r.s22 * rot;
            if (r.s12 != 0.0) s.S2_12 += (r.s12 * strip12) * rot;
            if (r.s21 != 0.0) s.S2_21 += (r.s21 * std::conj(strip12)) * rot;
            if (r.s4 != 0.0) s.S4 += r.s4 * rot;
        }
    }
    return s;
}

CoefficientSeries initial_coefficients(const ScenarioConfig& cfg) {
    validate_config(cfg);
    return from_density(initial_density(cfg), 0.0, cfg.cavity_omega);
}

CoefficientSeries coherent_lower_closed_form(cplx eta, double omega, int n_max) {
    CoefficientSeries s = make_series(n_max, 0.0, omega);
    Eigen::VectorXcd v(n_max + 1);
    v(0) = std::exp(-0.5 * std::norm(eta));
    for (int n = 1; n <= n_max; ++n) v(n) = v(n - 1) * eta / std::sqrt(static_cast<double>(n));
    s.S2_22 = v * v.adjoint();
    s.S4 = s.S2_22;
    return s;
}

Observables phase_observables(const CoefficientSeries& s) {
    Observables o{};
    const Eigen::Index nb = s.n_max + 1;
    cplx tr0 = 0, tr11 = 0, tr12 = 0, tr21 = 0, tr22 = 0, tr4 = 0, num = 0;
    for (Eigen::Index a = 0; a < nb; ++a) {
        tr0 += s.S0(a, a);
        tr11 += s.S2_11(a, a);
        tr12 += s.S2_12(a, a);
        tr21 += s.S2_21(a, a);
        tr22 += s.S2_22(a, a);
        tr4 += s.S4(a, a);
        num += static_cast<double>(a) * s.S4(a, a);
    }
    o.P12 = (tr0).real();
    o.P1 = (tr22 - tr0).real();
    o.P2 = (tr11 - tr0).real();
    o.P0 = (tr4 - tr11 - tr22 + tr0).real();
    o.rho12 = -std::exp(-kI * (s.omega * s.t)) * tr12;
    o.rho21 = -std::exp(kI * (s.omega * s.t)) * tr21;
    o.nbar = num.real();
    o.norm = tr4.real();
    o.trunc_mass = std::abs(s.S4(nb - 1, nb - 1));
    return o;
}

StructureReport check_structure(const CoefficientSeries& s) {
    StructureReport r;
    auto herm = [](const Eigen::MatrixXcd& m) {
        return (m - m.adjoint().eval()).cwiseAbs().maxCoeff();
    };
    r.hermiticity = std::max({herm(s.S0), herm(s.S2_11), herm(s.S2_22), herm(s.S4),
                              (s.S2_12 - s.S2_21.adjoint()).cwiseAbs().maxCoeff()});
    r.normalization = std::abs(s.S4.trace() - cplx{1.0});
    r.s0_mass = s.S0.cwiseAbs().maxCoeff();
    for (const auto* m : {&s.S2_11, &s.S2_12, &s.S2_21, &s.S2_22}) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(*m);
        const auto& sv = svd.singularValues();
        if (sv.size() > 1) r.rank_residual = std::max(r.rank_residual, sv(1));
    }
    return r;
}

cplx quadrature_oracle(const CoefficientSeries& s, ObservableId which, const QuadratureGrid& grid) {
    const Axis ax = gl_axis(grid);
    // The product-grid sum over (gamma~, delta~) in R^4 factorizes exactly:
    // every integrand below is a finite sum of (gamma~ factor) x (delta~
    // factor) terms, so the two plane sums are accumulated separately and
    // recombined -- same nodes, same weights, just regrouped.
    const PlaneMoments d = delta_moments(ax);
    constexpr double pref = 1.0 / (M_PI * M_PI);  // measure factor 4 times 1/(4 pi^2)

    auto plain = [&](const Eigen::MatrixXcd& C) { return pref * d.one * gamma_moments(C, ax).one; };

    switch (which) {
        case ObservableId::Norm:
            return plain(s.S4);
        case ObservableId::P12:
            return plain(s.S0);
        case ObservableId::P1:
            return plain(s.S2_22) - plain(s.S0);
        case ObservableId::P2:
            return plain(s.S2_11) - plain(s.S0);
        case ObservableId::P0:
            return plain(s.S4) - plain(s.S2_11) - plain(s.S2_22) + plain(s.S0);
        case ObservableId::Rho12:
            return -std::exp(-kI * (s.omega * s.t)) * plain(s.S2_12);
        case ObservableId::Rho21:
            return -std::exp(kI * (s.omega * s.t)) * plain(s.S2_21);
        case ObservableId::Nbar: {
            // alpha alpha+ = (gamma~ + delta~)(conj(gamma~) - conj(delta~));
            // the free-rotation phases of the inversion cancel in the pair
            const BlockMoments g = gamma_moments(s.S4, ax);
            return pref * (d.one * g.ggbar - d.zbar * g.g + d.z * g.gbar - d.zzbar * g.one);
        }
    }
    throw config_error("unknown observable id");
}

cplx gaussian_plane_moment(int n, int m, const QuadratureGrid& grid) {
    if (n < 0 || m < 0) throw config_error("moment orders must be non-negative");
    const Axis ax = gl_axis(grid);
    cplx acc = 0;
    for (std::size_t i = 0; i < ax.x.size(); ++i) {
        for (std::size_t j = 0; j < ax.x.size(); ++j) {
            const cplx z{ax.x[i], ax.x[j]};
            acc += ax.w[i] * ax.w[j] * std::exp(-std::norm(z)) *
                   std::pow(std::conj(z), n) * std::pow(z, m);
        }
    }
    return acc;
}

nlohmann::json series_to_json(const CoefficientSeries& s) {
    auto flat = [](const Eigen::MatrixXcd& m) {
        nlohmann::json rows = nlohmann::json::array();
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                rows.push_back({m(i, j).real(), m(i, j).imag()});
        return rows;
    };
    nlohmann::json j;
    j["t"] = s.t;
    j["omega"] = s.omega;
    j["n_max"] = s.n_max;
    j["blocks"] = {{"S0", flat(s.S0)},     {"S2_11", flat(s.S2_11)}, {"S2_12", flat(s.S2_12)},
                   {"S2_21", flat(s.S2_21)}, {"S2_22", flat(s.S2_22)}, {"S4", flat(s.S4)}};
    return j;
}

CoefficientSeries series_from_json(const nlohmann::json& j) {
    CoefficientSeries s = make_series(j.at("n_max").get<int>(), j.at("t").get<double>(),
                                      j.at("omega").get<double>());
    const Eigen::Index nb = s.n_max + 1;
    auto load = [&](const char* name, Eigen::MatrixXcd& m) {
        const auto& rows = j.at("blocks").at(name);
        if (rows.size() != static_cast<std::size_t>(nb * nb))
            throw config_error("coefficient block size does not match n_max");
        std::size_t idx = 0;
        for (Eigen::Index a = 0; a < nb; ++a)
            for (Eigen::Index b = 0; b < nb; ++b, ++idx)
                m(a, b) = cplx{rows[idx][0].get<double>(), rows[idx][1].get<double>()};
    };
    load("S0", s.S0);
    load("S2_11", s.S2_11);
    load("S2_12", s.S2_12);
    load("S2_21", s.S2_21);
    load("S2_22", s.S2_22);
    load("S4", s.S4);
    return s;
}

}  // namespace gpjc
