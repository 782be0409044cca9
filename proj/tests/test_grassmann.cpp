#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gpjc/grassmann.hpp"

using namespace gpjc;

namespace {

GeneratorSet make_g8() {
    return GeneratorSet({"g1", "g2", "g1p", "g2p", "g1s", "g2s", "g1ps", "g2ps"},
                        {{"g1", "g1s"}, {"g2", "g2s"}, {"g1p", "g1ps"}, {"g2p", "g2ps"}});
}

GrassmannPoly random_poly(const GeneratorSet& gs, std::mt19937& rng, int max_terms = 12) {
    std::uniform_int_distribution<int> nterms(1, max_terms);
    std::uniform_int_distribution<std::uint32_t> mask(0, (1u << gs.size()) - 1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    GrassmannPoly p(gs);
    const int k = nterms(rng);
    for (int i = 0; i < k; ++i) p.set_coeff(mask(rng), p.coeff(mask(rng)) + cplx{u(rng), u(rng)});
    // rebuild to drop any zero produced above
    GrassmannPoly q(gs);
    for (const auto& [m, c] : p.terms()) q.set_coeff(m, c);
    return q;
}

}  // namespace

TEST_CASE("generator squares vanish and generators anticommute") {
    auto gs = make_g8();
    auto g1 = GrassmannPoly::generator(gs, "g1");
    auto g2 = GrassmannPoly::generator(gs, "g2");
    CHECK((g1 * g1).is_zero());
    CHECK((g1 * g2 + g2 * g1).is_zero());
    CHECK((g1 * g2).coeff_of({"g2", "g1"}) == cplx{-1.0});
}

TEST_CASE("truncated exponential product (1+g1)(1+g2)") {
    auto gs = make_g8();
    auto one = GrassmannPoly::scalar(gs, 1.0);
    auto g1 = GrassmannPoly::generator(gs, "g1");
    auto g2 = GrassmannPoly::generator(gs, "g2");
    auto p = (one + g1) * (one + g2);
    auto expect = one + g1 + g2 + g1 * g2;
    CHECK(p == expect);
}

TEST_CASE("left and right derivative sign bookkeeping") {
    auto gs = make_g8();
    auto g1g2 = GrassmannPoly::monomial(gs, {"g1", "g2"});
    auto g2g1 = GrassmannPoly::monomial(gs, {"g2", "g1"});
    auto g2 = GrassmannPoly::generator(gs, "g2");

    CHECK(g1g2.derive("g1", Side::Left) == g2);
    CHECK(g2g1.derive("g1", Side::Left) == -g2);
    CHECK(g2g1.derive("g1", Side::Right) == g2);
    CHECK(g2g1.derive("g1p", Side::Left).is_zero());
}

TEST_CASE("basic Berezin integrals") {
    auto gs = make_g8();
    auto one = GrassmannPoly::scalar(gs, 1.0);
    CHECK(one.integrate_berezin({"g1"}).is_zero());

    // complete integral of the reversed product of all differentials
    auto h2h1 = GrassmannPoly::monomial(gs, {"g2", "g1"});
    CHECK(h2h1.integrate_berezin({"g1", "g2"}) == one);

    // the quartic that carries all the phase-space weight
    auto quartic = GrassmannPoly::monomial(gs, {"g1", "g2", "g2p", "g1p"});
    CHECK(quartic.integrate_berezin({"g2p", "g2", "g1p", "g1"}) == one);

    CHECK_THROWS_AS(one.integrate_berezin({"g1", "g1"}), config_error);
}

TEST_CASE("parity classification") {
    auto gs = make_g8();
    auto one = GrassmannPoly::scalar(gs, 1.0);
    auto g1 = GrassmannPoly::generator(gs, "g1");
    auto g1g2 = GrassmannPoly::monomial(gs, {"g1", "g2"});
    auto g1g2g2p = GrassmannPoly::monomial(gs, {"g1", "g2", "g2p"});

    CHECK((one + g1g2).parity() == Parity::Even);
    CHECK((g1 + g1g2g2p).parity() == Parity::Odd);
    CHECK((one + g1).parity() == Parity::Mixed);
    CHECK(GrassmannPoly(gs).parity() == Parity::Even);
}

TEST_CASE("conjugation maps through the star pairing and reverses order") {
    auto gs = make_g8();
    auto g1 = GrassmannPoly::generator(gs, "g1");
    auto g1s = GrassmannPoly::generator(gs, "g1s");
    const cplx c{0.3, -0.7};

    CHECK((g1 * c).conjugate() == g1s * std::conj(c));

    // (g1 g2)* = g2s g1s = -g1s g2s in canonical order
    auto lhs = GrassmannPoly::monomial(gs, {"g1", "g2"}).conjugate();
    auto rhs = GrassmannPoly::monomial(gs, {"g2s", "g1s"});
    CHECK(lhs == rhs);
    CHECK(lhs.coeff_of({"g1s", "g2s"}) == cplx{-1.0});

    std::mt19937 rng(7);
    for (int i = 0; i < 200; ++i) {
        auto p = random_poly(gs, rng);
        CHECK(p.conjugate().conjugate().distance(p) < 1e-12);
    }
}

TEST_CASE("multiplication is associative and distributive") {
    auto gs = make_g8();
    std::mt19937 rng(11);
    for (int i = 0; i < 300; ++i) {
        auto a = random_poly(gs, rng), b = random_poly(gs, rng), c = random_poly(gs, rng);
        CHECK(((a * b) * c).distance(a * (b * c)) < 1e-12);
        CHECK((a * (b + c)).distance(a * b + a * c) < 1e-12);
    }
}

TEST_CASE("left derivatives anticommute") {
    auto gs = make_g8();
    std::mt19937 rng(13);
    for (int i = 0; i < 300; ++i) {
        auto p = random_poly(gs, rng);
        auto d12 = p.derive("g2", Side::Left).derive("g1", Side::Left);
        auto d21 = p.derive("g1", Side::Left).derive("g2", Side::Left);
        CHECK(d12.distance(-d21) < 1e-12);
    }
}

TEST_CASE("left/right derivatives agree up to the parity sign") {
    auto gs = make_g8();
    std::mt19937 rng(17);
    for (int i = 0; i < 300; ++i) {
        auto p = random_poly(gs, rng);
        auto e = p.even_part();
        auto o = p.odd_part();
        CHECK(e.derive("g2p", Side::Left).distance(-e.derive("g2p", Side::Right)) < 1e-12);
        CHECK(o.derive("g2p", Side::Left).distance(o.derive("g2p", Side::Right)) < 1e-12);
    }
}

TEST_CASE("product rules for differentiation") {
    auto gs = make_g8();
    std::mt19937 rng(19);
    const std::string v = "g1p";
    for (int i = 0; i < 300; ++i) {
        auto f1 = random_poly(gs, rng);
        auto f2 = random_poly(gs, rng);
        auto f1e = f1.even_part(), f1o = f1.odd_part();

        // left derivative: even first factor adds, odd first factor flips the
        // sign of the second term
        CHECK((f1e * f2).derive(v, Side::Left)
                  .distance(f1e.derive(v, Side::Left) * f2 + f1e * f2.derive(v, Side::Left)) < 1e-12);
        CHECK((f1o * f2).derive(v, Side::Left)
                  .distance(f1o.derive(v, Side::Left) * f2 - f1o * f2.derive(v, Side::Left)) < 1e-12);

        // right derivative, mirrored
        CHECK((f2 * f1e).derive(v, Side::Right)
                  .distance(f2 * f1e.derive(v, Side::Right) + f2.derive(v, Side::Right) * f1e) < 1e-12);
        CHECK((f2 * f1o).derive(v, Side::Right)
                  .distance(f2 * f1o.derive(v, Side::Right) - f2.derive(v, Side::Right) * f1o) < 1e-12);
    }
}

TEST_CASE("single-variable Berezin integral equals the left derivative") {
    auto gs = make_g8();
    for (std::uint32_t m = 0; m < (1u << gs.size()); ++m) {
        GrassmannPoly basis(gs);
        basis.set_coeff(m, 1.0);
        for (std::size_t i = 0; i < gs.size(); ++i) {
            const auto& n = gs.name(static_cast<int>(i));
            auto left_int = basis.integrate_berezin({n});
            CHECK(left_int == basis.derive(n, Side::Left));
            // right integration satisfies ∫ g dg = -1, i.e. it differs from
            // the left integral by (-1)^deg on monomials containing the
            // variable
            if (m & (1u << i)) {
                const double s = (std::popcount(m) % 2 == 0) ? 1.0 : -1.0;
                auto right_int = -basis.derive(n, Side::Right);
                CHECK(left_int.distance(right_int * s) < 1e-15);
            }
        }
    }
}

TEST_CASE("parity controls commutation of products") {
    auto gs = make_g8();
    std::mt19937 rng(23);
    for (int i = 0; i < 300; ++i) {
        auto a = random_poly(gs, rng), b = random_poly(gs, rng);
        auto ae = a.even_part(), ao = a.odd_part();
        auto be = b.even_part(), bo = b.odd_part();
        CHECK((ae * be).distance(be * ae) < 1e-12);
        CHECK((ao * bo).distance(-(bo * ao)) < 1e-12);
        CHECK((ae * bo).distance(bo * ae) < 1e-12);
    }
}

TEST_CASE("mismatched generator sets are a configuration error") {
    auto gs1 = make_g8();
    GeneratorSet gs2({"h1", "h2"});
    auto a = GrassmannPoly::generator(gs1, "g1");
    auto b = GrassmannPoly::generator(gs2, "h1");
    CHECK_THROWS_AS(a * b, config_error);
    CHECK_THROWS_AS(a.derive("h1", Side::Left), config_error);
}

TEST_CASE("debug serialization is deterministic and sorted") {
    auto gs = make_g8();
    auto p = GrassmannPoly::monomial(gs, {"g2", "g1"}) + GrassmannPoly::scalar(gs, 2.0);
    CHECK(p.to_string() == "(2,0)\n(-1,0) * g1 * g2\n");
}
