#pragma once

#include "torus/gaussian.hpp"
#include "torus/lattice.hpp"

#include <compare>
#include <map>
#include <string>
#include <string_view>

namespace torus {

struct Monomial {
    unsigned d1 = 0;
    unsigned d2 = 0;

    friend auto operator<=>(const Monomial&, const Monomial&) = default;
    unsigned degree() const { return d1 + d2; }
};

/// Bivariate polynomial P(xi1, xi2) with Gaussian-rational coefficients.
class SymbolPolynomial {
public:
    using TermMap = std::map<Monomial, GaussianRational>;

    SymbolPolynomial() = default;
    explicit SymbolPolynomial(TermMap terms);

    static SymbolPolynomial constant(GaussianRational c);
    static SymbolPolynomial term(GaussianRational c, unsigned d1, unsigned d2);

    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_real() const;
    /// -1 for the zero polynomial.
    int degree() const;
    /// Every term has the same total degree (the zero polynomial counts).
    bool is_homogeneous() const;
    GaussianRational coeff(unsigned d1, unsigned d2) const;

    GaussianRational eval(long xi1, long xi2) const;
    GaussianRational eval(const LatticeIndex& k) const { return eval(k.k1, k.k2); }
    GaussianRational eval(const Rational& xi1, const Rational& xi2) const;

    SymbolPolynomial real_part() const;
    SymbolPolynomial imag_part() const;

    friend SymbolPolynomial operator+(const SymbolPolynomial& a, const SymbolPolynomial& b);
    friend SymbolPolynomial operator*(const SymbolPolynomial& a, const SymbolPolynomial& b);
    friend SymbolPolynomial operator*(const GaussianRational& c, const SymbolPolynomial& a);
    friend bool operator==(const SymbolPolynomial&, const SymbolPolynomial&) = default;

    /// "1*x1^2 + -2*x2^2" style, for diagnostics.
    std::string str() const;

private:
    TermMap terms_;
};

/// Term list "c a1 a2, c a1 a2, ..." for c * xi1^a1 * xi2^a2. The coefficient is
/// a rational, an imaginary rational ("3/2i") or both ("1-2i", "1/2+3i").
/// Throws ParseError with the column of the offending token.
SymbolPolynomial parse_symbol(std::string_view text);
GaussianRational parse_gaussian(std::string_view text);

}  // namespace torus
