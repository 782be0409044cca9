#include "gpjc/fermion_fock.hpp"

#include <algorithm>

namespace gpjc {

GrassmannPoly parity_signed(const GrassmannPoly& p, int n) {
    return (n & 1) ? p.even_part() - p.odd_part() : p;
}

FermionVector basis_ket(const GeneratorSet& gs, int j) {
    FermionVector v(gs);
    v.c[static_cast<std::size_t>(j)] = GrassmannPoly::scalar(gs, 1.0);
    return v;
}

FermionOperator identity_operator(const GeneratorSet& gs) {
    FermionOperator op(gs);
    for (int i = 0; i < 4; ++i) op.m[i][i] = GrassmannPoly::scalar(gs, 1.0);
    return op;
}

FermionOperator mode_operator(const GeneratorSet& gs, Mode which) {
    FermionOperator op(gs);
    auto one = GrassmannPoly::scalar(gs, 1.0);
    // Signs follow from |m1;m2> = (c1†)^{m1}(c2†)^{m2}|0>: mode-2 operators
    // acting when mode 1 is occupied pass one creation operator.
    switch (which) {
        case Mode::c1:
            op.m[0][1] = one;
            op.m[2][3] = one;
            break;
        case Mode::c1dag:
            op.m[1][0] = one;
            op.m[3][2] = one;
            break;
        case Mode::c2:
            op.m[0][2] = one;
            op.m[1][3] = -one;
            break;
        case Mode::c2dag:
            op.m[2][0] = one;
            op.m[3][1] = -one;
            break;
    }
    return op;
}

FermionVector operator+(const FermionVector& a, const FermionVector& b) {
    FermionVector r(*a.gens);
    for (int i = 0; i < 4; ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
}

FermionVector operator-(const FermionVector& a, const FermionVector& b) {
    FermionVector r(*a.gens);
    for (int i = 0; i < 4; ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
}

FermionOperator operator+(const FermionOperator& a, const FermionOperator& b) {
    FermionOperator r(*a.gens);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r.m[i][j] = a.m[i][j] + b.m[i][j];
    return r;
}

FermionOperator operator-(const FermionOperator& a, const FermionOperator& b) {
    FermionOperator r(*a.gens);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r.m[i][j] = a.m[i][j] - b.m[i][j];
    return r;
}

FermionVector scale_left(const GrassmannPoly& s, const FermionVector& v) {
    FermionVector r(*v.gens);
    for (int i = 0; i < 4; ++i) r.c[i] = s * v.c[i];
    return r;
}

FermionVector scale_right(const FermionVector& v, const GrassmannPoly& s) {
    FermionVector r(*v.gens);
    for (int i = 0; i < 4; ++i) r.c[i] = v.c[i] * parity_signed(s, kFermionNumber[i]);
    return r;
}

FermionOperator scale_left(const GrassmannPoly& s, const FermionOperator& op) {
    FermionOperator r(*op.gens);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r.m[i][j] = s * op.m[i][j];
    return r;
}

FermionOperator scale_right(const FermionOperator& op, const GrassmannPoly& s) {
    FermionOperator r(*op.gens);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            r.m[i][j] = op.m[i][j] * parity_signed(s, kFermionNumber[i] + kFermionNumber[j]);
    return r;
}

FermionVector apply(const FermionOperator& op, const FermionVector& v) {
    FermionVector r(*v.gens);
    for (int i = 0; i < 4; ++i) {
        GrassmannPoly acc(*v.gens);
        for (int j = 0; j < 4; ++j) {
            if (op.m[i][j].is_zero() || v.c[j].is_zero()) continue;
            // v_j commutes past |b_i><b_j| before the bracket closes
            acc += op.m[i][j] * parity_signed(v.c[j], kFermionNumber[i] + kFermionNumber[j]);
        }
        r.c[i] = acc;
    }
    return r;
}

FermionVector apply_bra(const FermionVector& bra, const FermionOperator& op) {
    FermionVector r(*bra.gens);
    for (int k = 0; k < 4; ++k) {
        GrassmannPoly acc(*bra.gens);
        for (int j = 0; j < 4; ++j) {
            if (bra.c[j].is_zero() || op.m[j][k].is_zero()) continue;
            // the operator coefficient commutes past <b_j|
            acc += bra.c[j] * parity_signed(op.m[j][k], kFermionNumber[j]);
        }
        r.c[k] = acc;
    }
    return r;
}

FermionOperator compose(const FermionOperator& a, const FermionOperator& b) {
    FermionOperator r(*a.gens);
    for (int i = 0; i < 4; ++i) {
        for (int l = 0; l < 4; ++l) {
            GrassmannPoly acc(*a.gens);
            for (int j = 0; j < 4; ++j) {
                if (a.m[i][j].is_zero() || b.m[j][l].is_zero()) continue;
                acc += a.m[i][j] * parity_signed(b.m[j][l], kFermionNumber[i] + kFermionNumber[j]);
            }
            r.m[i][l] = acc;
        }
    }
    return r;
}

FermionOperator dyad(const FermionVector& ket, const FermionVector& bra) {
    FermionOperator r(*ket.gens);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            // the bra coefficient commutes past |b_i>
            r.m[i][j] = ket.c[i] * parity_signed(bra.c[j], kFermionNumber[i]);
    return r;
}

GrassmannPoly inner(const FermionVector& bra, const FermionVector& ket) {
    GrassmannPoly acc(*bra.gens);
    for (int j = 0; j < 4; ++j) {
        if (bra.c[j].is_zero() || ket.c[j].is_zero()) continue;
        acc += bra.c[j] * parity_signed(ket.c[j], kFermionNumber[j]);
    }
    return acc;
}

std::array<std::array<GrassmannPoly, 4>, 4> sandwich(const FermionVector& bra,
                                                     const FermionVector& ket) {
    const GeneratorSet& gs = *bra.gens;
    std::array<std::array<GrassmannPoly, 4>, 4> r{
        {{GrassmannPoly(gs), GrassmannPoly(gs), GrassmannPoly(gs), GrassmannPoly(gs)},
         {GrassmannPoly(gs), GrassmannPoly(gs), GrassmannPoly(gs), GrassmannPoly(gs)},
         {GrassmannPoly(gs), GrassmannPoly(gs), GrassmannPoly(gs), GrassmannPoly(gs)},
         {GrassmannPoly(gs), GrassmannPoly(gs), GrassmannPoly(gs), GrassmannPoly(gs)}}};
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
            r[j][k] = bra.c[j] * parity_signed(ket.c[k], kFermionNumber[k]);
    return r;
}

GrassmannPoly trace(const FermionOperator& op) {
    GrassmannPoly acc(*op.gens);
    for (int i = 0; i < 4; ++i) acc += parity_signed(op.m[i][i], kFermionNumber[i]);
    return acc;
}

FermionOperator adjoint(const FermionOperator& op) {
    FermionOperator r(*op.gens);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            r.m[j][i] = parity_signed(op.m[i][j].conjugate(), kFermionNumber[i] + kFermionNumber[j]);
    return r;
}

FermionOperator derive(const FermionOperator& op, std::string_view gen, Side side) {
    FermionOperator r(*op.gens);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r.m[i][j] = op.m[i][j].derive(gen, side);
    return r;
}

double op_distance(const FermionOperator& a, const FermionOperator& b) {
    double d = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) d = std::max(d, a.m[i][j].distance(b.m[i][j]));
    return d;
}

FermionVector bargmann_ket(const GeneratorSet& gs, const std::string& g1, const std::string& g2) {
    if (g1 == g2) throw config_error("bargmann_ket needs two distinct generators");
    auto p1 = GrassmannPoly::generator(gs, g1);
    auto p2 = GrassmannPoly::generator(gs, g2);
    FermionVector v(gs);
    v.c[0] = GrassmannPoly::scalar(gs, 1.0);
    v.c[1] = -p1;
    v.c[2] = -p2;
    v.c[3] = -(p1 * p2);
    return v;
}

FermionVector bargmann_bra(const GeneratorSet& gs, const std::string& k1, const std::string& k2) {
    if (k1 == k2) throw config_error("bargmann_bra needs two distinct generators");
    auto p1 = GrassmannPoly::generator(gs, k1);
    auto p2 = GrassmannPoly::generator(gs, k2);
    FermionVector v(gs);
    v.c[0] = GrassmannPoly::scalar(gs, 1.0);
    v.c[1] = p1;
    v.c[2] = p2;
    v.c[3] = p1 * p2;
    return v;
}

GrassmannPoly bargmann_overlap(const GeneratorSet& gs, const std::array<std::string, 2>& bra_gens,
                               const std::array<std::string, 2>& ket_gens) {
    auto acc = GrassmannPoly::scalar(gs, 1.0);
    for (int i = 0; i < 2; ++i) {
        auto b = GrassmannPoly::generator(gs, bra_gens[i]);
        auto k = GrassmannPoly::generator(gs, ket_gens[i]);
        acc = acc * (GrassmannPoly::scalar(gs, 1.0) + b * k);
    }
    return acc;
}

FermionOperator normalized_projector(const GeneratorSet& gs, const std::string& g1,
                                     const std::string& g2, const std::string& g1p,
                                     const std::string& g2p) {
    auto ket = bargmann_ket(gs, g1, g2);
    auto bra = bargmann_bra(gs, g1p, g2p);  // <g⁺*|_B carries amplitude-conjugates g⁺
    auto proj = dyad(ket, bra);
    // Tr = Π(1 + g_i g_i⁺); its inverse is Π(1 - g_i g_i⁺) because the
    // quadratic is nilpotent
    auto one = GrassmannPoly::scalar(gs, 1.0);
    auto inv = (one - GrassmannPoly::generator(gs, g1) * GrassmannPoly::generator(gs, g1p)) *
               (one - GrassmannPoly::generator(gs, g2) * GrassmannPoly::generator(gs, g2p));
    return scale_left(inv, proj);
}

AtomicOperators atomic_operators(const GeneratorSet& gs) {
    auto c1 = mode_operator(gs, Mode::c1);
    auto c2 = mode_operator(gs, Mode::c2);
    auto c1d = mode_operator(gs, Mode::c1dag);
    auto c2d = mode_operator(gs, Mode::c2dag);
    auto n1 = compose(c1d, c1);
    auto n2 = compose(c2d, c2);

    AtomicOperators ops(gs);
    ops.P12 = compose(compose(compose(c1d, c2d), c2), c1);
    ops.P1 = n1 - ops.P12;
    ops.P2 = n2 - ops.P12;
    ops.P0 = identity_operator(gs) - n1 - n2 + ops.P12;
    ops.sigma_minus = compose(c1d, c2);
    ops.sigma_plus = compose(c2d, c1);
    ops.N = n1 + n2;
    return ops;
}

std::array<std::array<cplx, 4>, 4> scalar_entries(const FermionOperator& op) {
    std::array<std::array<cplx, 4>, 4> r{};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const auto& p = op.m[i][j];
            if (p.is_zero()) continue;
            if (p.term_count() != 1 || p.terms().begin()->first != 0)
                throw config_error("operator entry carries Grassmann content");
            r[i][j] = p.terms().begin()->second;
        }
    }
    return r;
}

}  // namespace gpjc
