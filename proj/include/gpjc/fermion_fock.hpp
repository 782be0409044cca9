#pragma once

#include <array>
#include <string>

#include "gpjc/grassmann.hpp"

namespace gpjc {

// Two-mode fermion Fock space. Basis order is fixed as
//   b0=|0;0>, b1=|1;0>, b2=|0;1>, b3=|1;1>,
// with |m1;m2> = (c1†)^{m1} (c2†)^{m2} |0>. kFermionNumber[i] is the total
// fermion number of slot i; it drives every sign rule below (a Grassmann
// factor passing a basis ket of fermion number N picks up (-1)^N).
inline constexpr int kFermionNumber[4] = {0, 1, 1, 2};

// State vector with Grassmann coefficients stored to the LEFT of the kets.
// The same container doubles as a bra (coefficients left of <b_j|); the
// bra/ket interpretation is fixed by which function argument it fills.
struct FermionVector {
    const GeneratorSet* gens;
    std::array<GrassmannPoly, 4> c;

    explicit FermionVector(const GeneratorSet& gs)
        : gens(&gs), c{GrassmannPoly(gs), GrassmannPoly(gs), GrassmannPoly(gs), GrassmannPoly(gs)} {}
};

// Operator sum O = Σ_{ij} m[i][j] |b_i><b_j| with Grassmann coefficients on
// the left of the dyads.
struct FermionOperator {
    const GeneratorSet* gens;
    std::array<std::array<GrassmannPoly, 4>, 4> m;

    explicit FermionOperator(const GeneratorSet& gs)
        : gens(&gs),
          m{{{GrassmannPoly(gs), GrassmannPoly(gs), GrassmannPoly(gs), GrassmannPoly(gs)},
             {GrassmannPoly(gs), GrassmannPoly(gs), GrassmannPoly(gs), GrassmannPoly(gs)},
             {GrassmannPoly(gs), GrassmannPoly(gs), GrassmannPoly(gs), GrassmannPoly(gs)},
             {GrassmannPoly(gs), GrassmannPoly(gs), GrassmannPoly(gs), GrassmannPoly(gs)}}} {}
};

enum class Mode { c1, c1dag, c2, c2dag };

// Flips the sign of the odd part when n is odd: the net effect of commuting a
// Grassmann function past n fermion creation/annihilation operators.
GrassmannPoly parity_signed(const GrassmannPoly& p, int n);

FermionVector basis_ket(const GeneratorSet& gs, int j);
FermionOperator identity_operator(const GeneratorSet& gs);
FermionOperator mode_operator(const GeneratorSet& gs, Mode which);

FermionVector operator+(const FermionVector& a, const FermionVector& b);
FermionVector operator-(const FermionVector& a, const FermionVector& b);
FermionOperator operator+(const FermionOperator& a, const FermionOperator& b);
FermionOperator operator-(const FermionOperator& a, const FermionOperator& b);

// Grassmann scalar times vector / operator, on a declared side. Right
// multiplication commutes the scalar through the basis kets (and dyads),
// which is where the (-1)^N signs appear.
FermionVector scale_left(const GrassmannPoly& s, const FermionVector& v);
FermionVector scale_right(const FermionVector& v, const GrassmannPoly& s);
FermionOperator scale_left(const GrassmannPoly& s, const FermionOperator& op);
FermionOperator scale_right(const FermionOperator& op, const GrassmannPoly& s);

FermionVector apply(const FermionOperator& op, const FermionVector& v);
FermionVector apply_bra(const FermionVector& bra, const FermionOperator& op);
FermionOperator compose(const FermionOperator& a, const FermionOperator& b);
FermionOperator dyad(const FermionVector& ket, const FermionVector& bra);
GrassmannPoly inner(const FermionVector& bra, const FermionVector& ket);
// sandwich(bra, ket)[j][k] = <bra| ( |b_j><b_k| ) |ket>
std::array<std::array<GrassmannPoly, 4>, 4> sandwich(const FermionVector& bra,
                                                     const FermionVector& ket);
GrassmannPoly trace(const FermionOperator& op);
FermionOperator adjoint(const FermionOperator& op);

// Entrywise derivative of the operator's coefficient functions.
FermionOperator derive(const FermionOperator& op, std::string_view gen, Side side);

double op_distance(const FermionOperator& a, const FermionOperator& b);

// |g>_B = (1 + c1† g1)(1 + c2† g2)|0>, expanded onto the four basis kets.
FermionVector bargmann_ket(const GeneratorSet& gs, const std::string& g1, const std::string& g2);
// Bra with amplitude-conjugate labels k = (k1,k2): <k|_B = <b0| + k1<b1| +
// k2<b2| + k1 k2 <b3|, so that inner(<k|_B, |h>_B) = Π_i (1 + k_i h_i).
FermionVector bargmann_bra(const GeneratorSet& gs, const std::string& k1, const std::string& k2);
GrassmannPoly bargmann_overlap(const GeneratorSet& gs, const std::array<std::string, 2>& bra_gens,
                               const std::array<std::string, 2>& ket_gens);

// Λ(g, g⁺) = |g>_B <g⁺*|_B / Tr(|g>_B <g⁺*|_B); even, unit trace.
FermionOperator normalized_projector(const GeneratorSet& gs, const std::string& g1,
                                     const std::string& g2, const std::string& g1p,
                                     const std::string& g2p);

struct AtomicOperators {
    FermionOperator P0, P1, P2, P12, sigma_minus, sigma_plus, N;
    explicit AtomicOperators(const GeneratorSet& gs)
        : P0(gs), P1(gs), P2(gs), P12(gs), sigma_minus(gs), sigma_plus(gs), N(gs) {}
};
AtomicOperators atomic_operators(const GeneratorSet& gs);

// Extracts plain complex entries; throws config_error if any entry carries
// Grassmann content.
std::array<std::array<cplx, 4>, 4> scalar_entries(const FermionOperator& op);

}  // namespace gpjc
