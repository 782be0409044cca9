#include "gpjc/grassmann.hpp"

#include <algorithm>
#include <sstream>

namespace gpjc {

namespace {

// Sign picked up when the ascending monomial `b` is multiplied on the right
// of the ascending monomial `a` and the product is re-sorted to ascending
// order: each generator of b hops over every generator of a with a larger
// index.
int merge_sign(GrassmannPoly::mask_t a, GrassmannPoly::mask_t b) {
    int inversions = 0;
    while (b) {
        const int p = std::countr_zero(b);
        inversions += std::popcount(a >> (p + 1));
        b &= b - 1;
    }
    return (inversions & 1) ? -1 : 1;
}

}  // namespace

GeneratorSet::GeneratorSet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty() || names_.size() > kMaxGenerators)
        throw config_error("generator count must be in 1.." + std::to_string(kMaxGenerators));
    for (std::size_t i = 0; i < names_.size(); ++i)
        for (std::size_t j = i + 1; j < names_.size(); ++j)
            if (names_[i] == names_[j]) throw config_error("duplicate generator label: " + names_[i]);
    star_.assign(names_.size(), -1);
}

GeneratorSet::GeneratorSet(std::vector<std::string> names,
                           const std::vector<std::pair<std::string, std::string>>& star_pairs)
    : GeneratorSet(std::move(names)) {
    for (const auto& [a, b] : star_pairs) {
        const int ia = index(a), ib = index(b);
        if (ia == ib) throw config_error("star pairing must have no fixed points: " + a);
        if (star_[static_cast<std::size_t>(ia)] != -1 || star_[static_cast<std::size_t>(ib)] != -1)
            throw config_error("generator appears in two star pairs: " + a);
        star_[static_cast<std::size_t>(ia)] = ib;
        star_[static_cast<std::size_t>(ib)] = ia;
    }
    for (std::size_t i = 0; i < star_.size(); ++i)
        if (star_[i] == -1) throw config_error("star pairing must cover every generator");
    has_star_ = true;
}

int GeneratorSet::index(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<int>(i);
    throw config_error("unknown generator label: " + std::string(name));
}

int GeneratorSet::star(int i) const {
    if (!has_star_) throw config_error("generator set has no star pairing");
    return star_.at(static_cast<std::size_t>(i));
}

GrassmannPoly GrassmannPoly::scalar(const GeneratorSet& gs, cplx c) {
    GrassmannPoly p(gs);
    if (c != 0.0) p.terms_[0] = c;
    return p;
}

GrassmannPoly GrassmannPoly::generator(const GeneratorSet& gs, std::string_view name) {
    GrassmannPoly p(gs);
    p.terms_[mask_t{1} << gs.index(name)] = 1.0;
    return p;
}

GrassmannPoly GrassmannPoly::monomial(const GeneratorSet& gs,
                                      std::initializer_list<std::string_view> names, cplx c) {
    GrassmannPoly p = scalar(gs, c);
    for (auto n : names) p = p * generator(gs, n);
    return p;
}

cplx GrassmannPoly::coeff(mask_t m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? cplx{0.0} : it->second;
}

cplx GrassmannPoly::coeff_of(std::initializer_list<std::string_view> names) const {
    mask_t m = 0;
    int sign = 1;
    for (auto n : names) {
        const mask_t bit = mask_t{1} << gens_->index(n);
        if (m & bit) return 0.0;
        // appending the generator on the right = merging one bit
        sign *= merge_sign(m, bit);
        m |= bit;
    }
    return static_cast<double>(sign) * coeff(m);
}

void GrassmannPoly::set_coeff(mask_t m, cplx c) {
    if (c == 0.0)
        terms_.erase(m);
    else
        terms_[m] = c;
}

void GrassmannPoly::check_same_set(const GrassmannPoly& o) const {
    if (gens_ != o.gens_) throw config_error("operands use different generator sets");
}

GrassmannPoly GrassmannPoly::operator+(const GrassmannPoly& o) const {
    GrassmannPoly r = *this;
    r += o;
    return r;
}

GrassmannPoly& GrassmannPoly::operator+=(const GrassmannPoly& o) {
    check_same_set(o);
    for (const auto& [m, c] : o.terms_) set_coeff(m, coeff(m) + c);
    return *this;
}

GrassmannPoly GrassmannPoly::operator-(const GrassmannPoly& o) const {
    GrassmannPoly r = *this;
    r -= o;
    return r;
}

GrassmannPoly& GrassmannPoly::operator-=(const GrassmannPoly& o) {
    check_same_set(o);
    for (const auto& [m, c] : o.terms_) set_coeff(m, coeff(m) - c);
    return *this;
}

GrassmannPoly GrassmannPoly::operator-() const {
    GrassmannPoly r(*gens_);
    for (const auto& [m, c] : terms_) r.terms_[m] = -c;
    return r;
}

GrassmannPoly GrassmannPoly::operator*(const GrassmannPoly& o) const {
    check_same_set(o);
    GrassmannPoly r(*gens_);
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : o.terms_) {
            if (ma & mb) continue;  // repeated generator squares to zero
            const cplx c = ca * cb * static_cast<double>(merge_sign(ma, mb));
            const mask_t m = ma | mb;
            auto [it, inserted] = r.terms_.try_emplace(m, c);
            if (!inserted) it->second += c;
        }
    }
    // canonicalize: drop exact zeros produced by cancellation
    for (auto it = r.terms_.begin(); it != r.terms_.end();)
        it = (it->second == 0.0) ? r.terms_.erase(it) : std::next(it);
    return r;
}

GrassmannPoly GrassmannPoly::operator*(cplx c) const {
    GrassmannPoly r(*gens_);
    if (c == 0.0) return r;
    for (const auto& [m, k] : terms_) r.terms_[m] = k * c;
    return r;
}

GrassmannPoly GrassmannPoly::derive(std::string_view gen, Side side) const {
    const int i = gens_->index(gen);
    const mask_t bit = mask_t{1} << i;
    GrassmannPoly r(*gens_);
    for (const auto& [m, c] : terms_) {
        if (!(m & bit)) continue;  // monomial lacks the generator — vanishes
        // move the generator to the differentiating end, hopping over the
        // others, then strike it
        const int hops = (side == Side::Left) ? std::popcount(m & (bit - 1))
                                              : std::popcount(m >> (i + 1));
        r.set_coeff(m & ~bit, ((hops & 1) ? -c : c));
    }
    return r;
}

GrassmannPoly GrassmannPoly::integrate_berezin(const std::vector<std::string>& gens) const {
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t j = i + 1; j < gens.size(); ++j)
            if (gens[i] == gens[j]) throw config_error("duplicate integration label: " + gens[i]);
    GrassmannPoly r = *this;
    // left integration over one variable coincides with the left derivative;
    // iterate with the rightmost differential first
    for (auto it = gens.rbegin(); it != gens.rend(); ++it) r = r.derive(*it, Side::Left);
    return r;
}

Parity GrassmannPoly::parity() const {
    bool even = true, odd = true;
    for (const auto& [m, c] : terms_) ((std::popcount(m) & 1) ? even : odd) = false;
    if (even) return Parity::Even;  // zero polynomial counts as even
    if (odd) return Parity::Odd;
    return Parity::Mixed;
}

GrassmannPoly GrassmannPoly::conjugate() const {
    if (!gens_->has_star()) throw config_error("conjugate needs a star pairing");
    GrassmannPoly r(*gens_);
    for (const auto& [m, c] : terms_) {
        // (g_{i1}..g_{ik})* = g*_{ik} .. g*_{i1}: starred partners in reversed
        // order, built by single-generator multiplies so the reordering signs
        // are computed, not assumed
        GrassmannPoly term = scalar(*gens_, std::conj(c));
        for (int i = static_cast<int>(gens_->size()) - 1; i >= 0; --i) {
            if (m & (mask_t{1} << i))
                term = term * generator(*gens_, gens_->name(gens_->star(i)));
        }
        r += term;
    }
    return r;
}

GrassmannPoly GrassmannPoly::even_part() const {
    GrassmannPoly r(*gens_);
    for (const auto& [m, c] : terms_)
        if (!(std::popcount(m) & 1)) r.terms_[m] = c;
    return r;
}

GrassmannPoly GrassmannPoly::odd_part() const {
    GrassmannPoly r(*gens_);
    for (const auto& [m, c] : terms_)
        if (std::popcount(m) & 1) r.terms_[m] = c;
    return r;
}

double GrassmannPoly::distance(const GrassmannPoly& o) const {
    check_same_set(o);
    double d = 0.0;
    for (const auto& [m, c] : terms_) d = std::max(d, std::abs(c - o.coeff(m)));
    for (const auto& [m, c] : o.terms_) d = std::max(d, std::abs(coeff(m) - c));
    return d;
}

double GrassmannPoly::max_abs_coeff() const {
    double d = 0.0;
    for (const auto& [m, c] : terms_) d = std::max(d, std::abs(c));
    return d;
}

std::string GrassmannPoly::to_string() const {
    if (terms_.empty()) return "0\n";
    std::ostringstream os;
    for (const auto& [m, c] : terms_) {
        os << "(" << c.real() + 0.0 << "," << c.imag() + 0.0 << ")";
        for (std::size_t i = 0; i < gens_->size(); ++i)
            if (m & (mask_t{1} << i)) os << " * " << gens_->name(static_cast<int>(i));
        os << "\n";
    }
    return os.str();
}

}  // namespace gpjc
