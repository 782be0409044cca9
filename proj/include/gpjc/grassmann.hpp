#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gpjc {

using cplx = std::complex<double>;

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Parity { Even, Odd, Mixed };
enum class Side { Left, Right };

// Ordered set of anticommuting generator labels. The position in the list is
// the canonical ordering used for all sign bookkeeping; an optional star
// pairing maps each generator to its conjugate partner.
class GeneratorSet {
  public:
    static constexpr std::size_t kMaxGenerators = 16;

    explicit GeneratorSet(std::vector<std::string> names);
    GeneratorSet(std::vector<std::string> names,
                 const std::vector<std::pair<std::string, std::string>>& star_pairs);

    std::size_t size() const { return names_.size(); }
    int index(std::string_view name) const;  // throws config_error on unknown label
    const std::string& name(int i) const { return names_.at(static_cast<std::size_t>(i)); }
    bool has_star() const { return has_star_; }
    int star(int i) const;  // conjugate partner index

    bool operator==(const GeneratorSet& o) const { return this == &o; }

  private:
    std::vector<std::string> names_;
    std::vector<int> star_;
    bool has_star_ = false;
};

// Sparse anticommuting polynomial: monomials are subsets of the generator set
// (bitmask over the canonical order, implicitly in ascending order), and the
// complex coefficients absorb all reordering signs. Exact-zero coefficients
// are never stored, so structural equality is mathematical equality.
class GrassmannPoly {
  public:
    using mask_t = std::uint32_t;

    explicit GrassmannPoly(const GeneratorSet& gs) : gens_(&gs) {}

    static GrassmannPoly scalar(const GeneratorSet& gs, cplx c);
    static GrassmannPoly generator(const GeneratorSet& gs, std::string_view name);
    // Product of the listed generators in the written order (signs applied).
    static GrassmannPoly monomial(const GeneratorSet& gs,
                                  std::initializer_list<std::string_view> names,
                                  cplx c = 1.0);

    const GeneratorSet& gens() const { return *gens_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const std::map<mask_t, cplx>& terms() const { return terms_; }

    cplx coeff(mask_t m) const;
    // Coefficient relative to a specific written generator ordering
    // (= stored coefficient times the permutation sign into ascending order).
    cplx coeff_of(std::initializer_list<std::string_view> names) const;
    void set_coeff(mask_t m, cplx c);

    GrassmannPoly operator+(const GrassmannPoly& o) const;
    GrassmannPoly operator-(const GrassmannPoly& o) const;
    GrassmannPoly operator-() const;
    GrassmannPoly operator*(const GrassmannPoly& o) const;
    GrassmannPoly operator*(cplx c) const;
    GrassmannPoly& operator+=(const GrassmannPoly& o);
    GrassmannPoly& operator-=(const GrassmannPoly& o);

    bool operator==(const GrassmannPoly& o) const { return terms_ == o.terms_; }

    GrassmannPoly derive(std::string_view gen, Side side) const;
    // Iterated left Berezin integral; the rightmost differential in the list
    // is applied first: ∫dh_i dh_j f = ∫dh_i (∫dh_j f).
    GrassmannPoly integrate_berezin(const std::vector<std::string>& gens) const;
    Parity parity() const;
    GrassmannPoly conjugate() const;

    GrassmannPoly even_part() const;
    GrassmannPoly odd_part() const;

    // Largest |coefficient| difference against another polynomial.
    double distance(const GrassmannPoly& o) const;
    double max_abs_coeff() const;

    // Deterministic debug form: one "(re,im) * g_i g_j" line per term, sorted
    // by mask.
    std::string to_string() const;

  private:
    void check_same_set(const GrassmannPoly& o) const;

    const GeneratorSet* gens_;
    std::map<mask_t, cplx> terms_;
};

inline GrassmannPoly operator*(cplx c, const GrassmannPoly& p) { return p * c; }

}  // namespace gpjc
