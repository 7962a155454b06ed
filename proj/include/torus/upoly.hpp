#pragma once

#include "torus/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace torus {

/// Dense univariate polynomial over Q, coefficients ascending by degree.
/// The zero polynomial has no coefficients and degree -1.
class UPoly {
public:
    UPoly() = default;
    explicit UPoly(std::vector<Rational> coeffs);
    static UPoly monomial(Rational c, int degree);
    static UPoly from_ints(std::initializer_list<long> ascending);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(i)] : Rational(0); }
    const Rational& lead() const { return c_.back(); }

    Rational eval(const Rational& x) const;
    /// Sign of the value at x: -1, 0, 1.
    int sign_at(const Rational& x) const;
    UPoly derivative() const;
    UPoly monic() const;
    /// Primitive integer polynomial with positive leading coefficient, same roots.
    UPoly primitive() const;
    bool has_integer_coeffs() const;

    friend UPoly operator+(const UPoly& a, const UPoly& b);
    friend UPoly operator-(const UPoly& a, const UPoly& b);
    friend UPoly operator*(const UPoly& a, const UPoly& b);
    friend UPoly operator*(const Rational& s, const UPoly& a);
    friend bool operator==(const UPoly&, const UPoly&) = default;

    /// "x^3 - 2*x + 1"
    std::string str(const std::string& var = "x") const;

private:
    void trim();
    std::vector<Rational> c_;
};

struct DivMod {
    UPoly quotient;
    UPoly remainder;
};

DivMod divmod(const UPoly& a, const UPoly& b);
/// Monic gcd; gcd(0, 0) = 0.
UPoly gcd(const UPoly& a, const UPoly& b);
bool divides(const UPoly& d, const UPoly& a);

struct SquarefreeFactor {
    UPoly factor;  ///< monic, squarefree, pairwise coprime
    int multiplicity = 1;
};

/// Yun's algorithm: q = lead * prod factor_i^multiplicity_i.
std::vector<SquarefreeFactor> squarefree_decomposition(const UPoly& q);
UPoly squarefree_part(const UPoly& q);

/// Distinct rational roots, ascending (rational-root theorem on the primitive form).
std::vector<Rational> rational_roots(const UPoly& q);

std::vector<UPoly> sturm_sequence(const UPoly& q);
/// Number of distinct real roots in (a, b].
int count_real_roots(const std::vector<UPoly>& sturm, const Rational& a, const Rational& b);
int count_real_roots(const UPoly& q);
/// Cauchy bound: every root has |x| < bound.
Rational root_bound(const UPoly& q);

/// Half-open isolating interval (lo, hi] holding exactly one distinct real root;
/// lo == hi when the root is rational and was hit exactly.
struct IsolatingInterval {
    Rational lo;
    Rational hi;
};

/// Isolates the distinct real roots of q, ascending, refining each interval to
/// width <= max_width.
std::vector<IsolatingInterval> isolate_real_roots(const UPoly& q, const Rational& max_width = Rational(1, 1 << 20));

struct Factorization {
    Rational unit;                            ///< q = unit * prod factor^multiplicity
    std::vector<SquarefreeFactor> factors;    ///< primitive integer irreducibles, positive lead
    bool complete = true;                     ///< false when the degree cap stopped the search
};

/// Complete factorization over Q by Kronecker's method. Components of degree
/// above degree_cap are left unfactored and mark the result incomplete.
Factorization factor_over_Q(const UPoly& q, int degree_cap = 8);

enum class Irreducibility { Irreducible, Reducible, Inconclusive };

struct IrreducibilityResult {
    Irreducibility verdict = Irreducibility::Inconclusive;
    std::optional<UPoly> factor;  ///< nontrivial divisor when reducible
};

IrreducibilityResult irreducible_over_Q(const UPoly& q, int degree_cap = 8);

/// Smallest-degree nontrivial factor of a primitive integer polynomial, or
/// nullopt when it is irreducible. Exhaustive over Kronecker's search space.
std::optional<UPoly> kronecker_find_factor(const UPoly& f);

}  // namespace torus
