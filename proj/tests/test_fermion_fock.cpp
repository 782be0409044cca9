#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "gpjc/fermion_fock.hpp"

using namespace gpjc;

namespace {

GeneratorSet make_g8() {
    return GeneratorSet({"g1", "g2", "g1p", "g2p", "g1s", "g2s", "g1ps", "g2ps"},
                        {{"g1", "g1s"}, {"g2", "g2s"}, {"g1p", "g1ps"}, {"g2p", "g2ps"}});
}

GrassmannPoly random_poly(const GeneratorSet& gs, std::mt19937& rng, int max_terms = 6) {
    std::uniform_int_distribution<int> nterms(1, max_terms);
    std::uniform_int_distribution<std::uint32_t> mask(0, (1u << gs.size()) - 1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    GrassmannPoly p(gs);
    const int k = nterms(rng);
    for (int i = 0; i < k; ++i) p.set_coeff(mask(rng), p.coeff(mask(rng)) + cplx{u(rng), u(rng)});
    GrassmannPoly q(gs);
    for (const auto& [m, c] : p.terms()) q.set_coeff(m, c);
    return q;
}

FermionVector random_vector(const GeneratorSet& gs, std::mt19937& rng) {
    FermionVector v(gs);
    for (int i = 0; i < 4; ++i) v.c[i] = random_poly(gs, rng);
    return v;
}

FermionOperator random_operator(const GeneratorSet& gs, std::mt19937& rng) {
    FermionOperator op(gs);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) op.m[i][j] = random_poly(gs, rng);
    return op;
}

FermionOperator neg(const FermionOperator& op) {
    return scale_left(GrassmannPoly::scalar(*op.gens, -1.0), op);
}

// A differential operator standing to the right of an operator sum reaches the
// coefficient of |b_i><b_j| only after passing the dyad, so each entry picks
// up (-1)^{N_i+N_j} on top of the plain right derivative.
FermionOperator graded_right_derive(const FermionOperator& op, const char* gen) {
    FermionOperator r = derive(op, gen, Side::Right);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if ((kFermionNumber[i] + kFermionNumber[j]) % 2 == 1) r.m[i][j] = -r.m[i][j];
    return r;
}

bool vec_equal(const FermionVector& a, const FermionVector& b) {
    for (int i = 0; i < 4; ++i)
        if (!(a.c[i] == b.c[i])) return false;
    return true;
}

double vec_distance(const FermionVector& a, const FermionVector& b) {
    double d = 0.0;
    for (int i = 0; i < 4; ++i) d = std::max(d, a.c[i].distance(b.c[i]));
    return d;
}

}  // namespace

TEST_CASE("mode operators satisfy the canonical anticommutation relations") {
    auto gs = make_g8();
    const Mode ann[2] = {Mode::c1, Mode::c2};
    const Mode cre[2] = {Mode::c1dag, Mode::c2dag};
    auto id = identity_operator(gs);
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            auto ca = mode_operator(gs, ann[a]);
            auto cb = mode_operator(gs, ann[b]);
            auto cad = mode_operator(gs, cre[a]);
            auto cbd = mode_operator(gs, cre[b]);
            CHECK(op_distance(compose(ca, cb) + compose(cb, ca), FermionOperator(gs)) == 0.0);
            CHECK(op_distance(compose(cad, cbd) + compose(cbd, cad), FermionOperator(gs)) == 0.0);
            auto anti = compose(ca, cbd) + compose(cbd, ca);
            CHECK(op_distance(anti, a == b ? id : FermionOperator(gs)) == 0.0);
        }
    }
}

TEST_CASE("mode operators act on the number basis with fermionic signs") {
    auto gs = make_g8();
    auto c1d = mode_operator(gs, Mode::c1dag);
    auto c2d = mode_operator(gs, Mode::c2dag);
    auto c1 = mode_operator(gs, Mode::c1);
    auto c2 = mode_operator(gs, Mode::c2);

    // |1;1> = c1† c2† |0>, so c2† applied after c1† picks up a sign
    CHECK(vec_equal(apply(c1d, basis_ket(gs, 0)), basis_ket(gs, 1)));
    CHECK(vec_equal(apply(c2d, basis_ket(gs, 0)), basis_ket(gs, 2)));
    CHECK(vec_equal(apply(c2d, basis_ket(gs, 1)),
                    scale_left(GrassmannPoly::scalar(gs, -1.0), basis_ket(gs, 3))));
    CHECK(vec_equal(apply(c1d, basis_ket(gs, 2)), basis_ket(gs, 3)));
    CHECK(vec_equal(apply(c1, basis_ket(gs, 3)), basis_ket(gs, 2)));
    CHECK(vec_equal(apply(c2, basis_ket(gs, 3)),
                    scale_left(GrassmannPoly::scalar(gs, -1.0), basis_ket(gs, 1))));

    // double occupation of a single mode is excluded
    CHECK(op_distance(compose(c1d, c1d), FermionOperator(gs)) == 0.0);
    CHECK(op_distance(compose(c2, c2), FermionOperator(gs)) == 0.0);

    auto n1 = scalar_entries(compose(c1d, c1));
    auto n2 = scalar_entries(compose(c2d, c2));
    CHECK(n1[0][0] == cplx{0.0});
    CHECK(n1[1][1] == cplx{1.0});
    CHECK(n1[2][2] == cplx{0.0});
    CHECK(n1[3][3] == cplx{1.0});
    CHECK(n2[1][1] == cplx{0.0});
    CHECK(n2[2][2] == cplx{1.0});
    CHECK(n2[3][3] == cplx{1.0});
}

TEST_CASE("grassmann coefficients thread through products consistently") {
    auto gs = make_g8();
    std::mt19937 rng(20260814);
    for (int trial = 0; trial < 60; ++trial) {
        auto A = random_operator(gs, rng);
        auto B = random_operator(gs, rng);
        auto v = random_vector(gs, rng);
        auto w = random_vector(gs, rng);
        auto u = random_vector(gs, rng);

        // associativity of bra/op/ket groupings, up to reassociation roundoff
        const double tol = 1e-12;
        CHECK(inner(apply_bra(w, A), v).distance(inner(w, apply(A, v))) < tol);
        CHECK(vec_distance(apply(compose(A, B), v), apply(A, apply(B, v))) < tol);
        CHECK(op_distance(compose(compose(A, B), dyad(u, w)),
                          compose(A, compose(B, dyad(u, w)))) < tol);

        // (|v><w|)|u> = |v> <w|u>
        CHECK(vec_distance(apply(dyad(v, w), u), scale_right(v, inner(w, u))) < tol);

        // adjoint is an involutive anti-homomorphism
        CHECK(op_distance(adjoint(adjoint(A)), A) == 0.0);
        CHECK(op_distance(adjoint(compose(A, B)), compose(adjoint(B), adjoint(A))) < tol);

        // scaling through the composite
        auto s = random_poly(gs, rng);
        CHECK(op_distance(compose(scale_left(s, A), B), scale_left(s, compose(A, B))) < tol);
        CHECK(op_distance(compose(A, scale_right(B, s)), scale_right(compose(A, B), s)) < tol);
    }
}

TEST_CASE("bargmann kets are mode-operator eigenvectors") {
    auto gs = make_g8();
    auto ket = bargmann_ket(gs, "g1", "g2");
    auto g1 = GrassmannPoly::generator(gs, "g1");
    auto g2 = GrassmannPoly::generator(gs, "g2");

    CHECK(vec_equal(apply(mode_operator(gs, Mode::c1), ket), scale_left(g1, ket)));
    CHECK(vec_equal(apply(mode_operator(gs, Mode::c2), ket), scale_left(g2, ket)));

    // the bra with amplitude-conjugate labels k is a left eigenvector of c†
    auto bra = bargmann_bra(gs, "g1p", "g2p");
    auto g1p = GrassmannPoly::generator(gs, "g1p");
    auto g2p = GrassmannPoly::generator(gs, "g2p");
    CHECK(vec_equal(apply_bra(bra, mode_operator(gs, Mode::c1dag)), scale_left(g1p, bra)));
    CHECK(vec_equal(apply_bra(bra, mode_operator(gs, Mode::c2dag)), scale_left(g2p, bra)));

    auto ov = inner(bra, ket);
    auto one = GrassmannPoly::scalar(gs, 1.0);
    CHECK(ov == (one + g1p * g1) * (one + g2p * g2));
    CHECK(ov == bargmann_overlap(gs, {"g1p", "g2p"}, {"g1", "g2"}));

    // tracing the unnormalized dyad gives the same product, ket label first
    auto tr = trace(dyad(ket, bra));
    CHECK(tr == (one + g1 * g1p) * (one + g2 * g2p));

    CHECK_THROWS_AS(bargmann_ket(gs, "g1", "g1"), config_error);
}

TEST_CASE("bargmann kets resolve the identity under the gaussian weight") {
    auto gs = make_g8();
    auto one = GrassmannPoly::scalar(gs, 1.0);
    auto ket = bargmann_ket(gs, "g1", "g2");
    auto bra = bargmann_bra(gs, "g1s", "g2s");  // labels are the amplitude conjugates
    auto weight =
        (one - GrassmannPoly::monomial(gs, {"g1s", "g1"})) *
        (one - GrassmannPoly::monomial(gs, {"g2s", "g2"}));
    auto weighted = scale_left(weight, dyad(ket, bra));

    const std::vector<std::string> measure = {"g1s", "g1", "g2s", "g2"};
    auto id = identity_operator(gs);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(weighted.m[i][j].integrate_berezin(measure) == id.m[i][j]);
}

TEST_CASE("normalized projector has unit trace and graded-even entries") {
    auto gs = make_g8();
    auto L = normalized_projector(gs, "g1", "g2", "g1p", "g2p");
    CHECK(trace(L) == GrassmannPoly::scalar(gs, 1.0));
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (L.m[i][j].is_zero()) continue;
            auto want = ((kFermionNumber[i] + kFermionNumber[j]) % 2 == 0) ? Parity::Even
                                                                           : Parity::Odd;
            CHECK(L.m[i][j].parity() == want);
        }
    }
}

TEST_CASE("projector absorbs mode operators as multiplications and derivatives") {
    auto gs = make_g8();
    auto L = normalized_projector(gs, "g1", "g2", "g1p", "g2p");
    const char* lower[2] = {"g1", "g2"};
    const char* raise[2] = {"g1p", "g2p"};
    const Mode ann[2] = {Mode::c1, Mode::c2};
    const Mode cre[2] = {Mode::c1dag, Mode::c2dag};

    for (int i = 0; i < 2; ++i) {
        auto gi = GrassmannPoly::generator(gs, lower[i]);
        auto gip = GrassmannPoly::generator(gs, raise[i]);
        auto ci = mode_operator(gs, ann[i]);
        auto cid = mode_operator(gs, cre[i]);

        CHECK(op_distance(compose(ci, L), scale_left(gi, L)) == 0.0);
        CHECK(op_distance(compose(ci, L), scale_right(L, gi)) == 0.0);

        CHECK(op_distance(compose(L, cid), scale_left(gip, L)) == 0.0);
        CHECK(op_distance(compose(L, cid), scale_right(L, gip)) == 0.0);

        CHECK(op_distance(compose(cid, L),
                          neg(derive(L, lower[i], Side::Left)) + scale_left(-gip, L)) == 0.0);
        CHECK(op_distance(compose(cid, L),
                          graded_right_derive(L, lower[i]) + scale_right(L, -gip)) == 0.0);

        CHECK(op_distance(compose(L, ci),
                          neg(graded_right_derive(L, raise[i])) + scale_right(L, -gi)) == 0.0);
        CHECK(op_distance(compose(L, ci),
                          derive(L, raise[i], Side::Left) + scale_left(-gi, L)) == 0.0);
    }
}

TEST_CASE("weighted projector moments fix the phase-space integration order") {
    auto gs = make_g8();
    auto one = GrassmannPoly::scalar(gs, 1.0);
    auto G = [&](const char* n) { return GrassmannPoly::generator(gs, n); };

    // even weight carrying all three pairings of the doubled variables
    auto E = (one + G("g1") * G("g1s")) * (one + G("g1ps") * G("g1p")) *
             (one + G("g1") * G("g1p")) * (one + G("g2") * G("g2s")) *
             (one + G("g2ps") * G("g2p")) * (one + G("g2") * G("g2p"));

    const char* star[3] = {nullptr, "g1s", "g2s"};
    const char* pstar[3] = {nullptr, "g1ps", "g2ps"};

    auto expected = [&](int k, int l) {
        GrassmannPoly e(gs);
        if (k == 2 && l == 2)
            e = GrassmannPoly::monomial(gs, {"g1", "g1p"}) +
                GrassmannPoly::monomial(gs, {"g1", "g2", "g2p", "g1p"});
        else if (k == 2 && l == 1)
            e = GrassmannPoly::monomial(gs, {"g1", "g2p"}, -1.0);
        else if (k == 1 && l == 2)
            e = GrassmannPoly::monomial(gs, {"g2", "g1p"}, -1.0);
        else
            e = GrassmannPoly::monomial(gs, {"g2", "g2p"}) +
                GrassmannPoly::monomial(gs, {"g1", "g2", "g2p", "g1p"});
        return e;
    };

    auto matches = [&](const std::vector<std::string>& measure) {
        for (int k = 1; k <= 2; ++k)
            for (int l = 1; l <= 2; ++l) {
                auto integrand = E * G(star[k]) * G(pstar[l]);
                if (!(integrand.integrate_berezin(measure) == expected(k, l))) return false;
            }
        return true;
    };

    // this order (each starred variable next to its doubled partner, mode by
    // mode) is the one the phase-space map uses; pin it here
    const std::vector<std::string> pinned = {"g1s", "g1ps", "g2s", "g2ps"};
    CHECK(matches(pinned));

    // reordering the measure only ever flips the global sign with the
    // permutation parity: half the orders match, the other half anti-match
    auto anti_matches = [&](const std::vector<std::string>& measure) {
        for (int k = 1; k <= 2; ++k)
            for (int l = 1; l <= 2; ++l) {
                auto integrand = E * G(star[k]) * G(pstar[l]);
                if (!(integrand.integrate_berezin(measure) == -expected(k, l))) return false;
            }
        return true;
    };
    std::vector<std::string> perm = pinned;
    std::sort(perm.begin(), perm.end());
    int plus = 0, minus = 0;
    do {
        if (matches(perm)) ++plus;
        if (anti_matches(perm)) ++minus;
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(plus == 12);
    CHECK(minus == 12);
}

TEST_CASE("atomic projectors partition the identity") {
    auto gs = make_g8();
    auto ops = atomic_operators(gs);

    auto p0 = scalar_entries(ops.P0);
    auto p1 = scalar_entries(ops.P1);
    auto p2 = scalar_entries(ops.P2);
    auto p12 = scalar_entries(ops.P12);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            CHECK(p0[i][j] == ((i == 0 && j == 0) ? cplx{1.0} : cplx{0.0}));
            CHECK(p1[i][j] == ((i == 1 && j == 1) ? cplx{1.0} : cplx{0.0}));
            CHECK(p2[i][j] == ((i == 2 && j == 2) ? cplx{1.0} : cplx{0.0}));
            CHECK(p12[i][j] == ((i == 3 && j == 3) ? cplx{1.0} : cplx{0.0}));
        }

    CHECK(op_distance(ops.P0 + ops.P1 + ops.P2 + ops.P12, identity_operator(gs)) == 0.0);

    const FermionOperator* projs[4] = {&ops.P0, &ops.P1, &ops.P2, &ops.P12};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            auto prod = compose(*projs[a], *projs[b]);
            CHECK(op_distance(prod, a == b ? *projs[a] : FermionOperator(gs)) == 0.0);
        }

    // total number operator is diagonal and commutes with every projector
    auto n = scalar_entries(ops.N);
    for (int i = 0; i < 4; ++i) CHECK(n[i][i] == cplx{double(kFermionNumber[i])});
    for (int a = 0; a < 4; ++a)
        CHECK(op_distance(compose(ops.N, *projs[a]), compose(*projs[a], ops.N)) == 0.0);
}

TEST_CASE("transition operators connect the two singly occupied states") {
    auto gs = make_g8();
    auto ops = atomic_operators(gs);

    auto sm = scalar_entries(ops.sigma_minus);
    auto sp = scalar_entries(ops.sigma_plus);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            CHECK(sm[i][j] == ((i == 1 && j == 2) ? cplx{1.0} : cplx{0.0}));
            CHECK(sp[i][j] == ((i == 2 && j == 1) ? cplx{1.0} : cplx{0.0}));
        }

    CHECK(op_distance(adjoint(ops.sigma_minus), ops.sigma_plus) == 0.0);
    CHECK(op_distance(compose(ops.sigma_minus, ops.sigma_plus), ops.P1) == 0.0);
    CHECK(op_distance(compose(ops.sigma_plus, ops.sigma_minus), ops.P2) == 0.0);
}

TEST_CASE("scalar extraction rejects operators with grassmann entries") {
    auto gs = make_g8();
    auto op = identity_operator(gs);
    CHECK(scalar_entries(op)[0][0] == cplx{1.0});
    op.m[2][1] = GrassmannPoly::generator(gs, "g1");
    CHECK_THROWS_AS(scalar_entries(op), config_error);
}
