#pragma once

#include "torus/lattice.hpp"
#include "torus/symbol.hpp"
#include "torus/trig_series.hpp"
#include "torus/upoly.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace torus {

/// Real homogeneous polynomial P(x1, x2) of degree p >= 2.
class HomogeneousPoly {
public:
    struct Term {
        Rational coeff;
        unsigned a1 = 0;
        unsigned a2 = 0;
    };

    /// Throws std::invalid_argument for mixed degrees, degree < 2 or P = 0.
    static HomogeneousPoly from_terms(const std::vector<Term>& terms);
    /// Requires real coefficients; complex symbols are rejected.
    static HomogeneousPoly from_symbol(const SymbolPolynomial& s);
    /// Term list "c a1 a2, c a1 a2, ..." (c rational, exponents nonnegative).
    static HomogeneousPoly parse(std::string_view text);

    int degree() const { return degree_; }
    const std::map<Monomial, Rational>& terms() const { return terms_; }
    Rational eval(long n1, long n2) const;
    Rational eval(const Rational& x1, const Rational& x2) const;
    SymbolPolynomial symbol() const;
    /// Canonical term list, descending in a1.
    std::string term_list() const;
    std::string str() const { return symbol().str(); }

private:
    int degree_ = 0;
    std::map<Monomial, Rational> terms_;
};

/// Q(x) = P(x, 1); P(n1, n2) = n2^p Q(n1/n2) for n2 != 0.
UPoly restrict_to_line(const HomogeneousPoly& p);

/// Primitive representatives (k2 > 0, or k2 = 0 and k1 > 0) of the lines of
/// nonzero integer zeros of a real homogeneous polynomial, counterclockwise from (1,0).
std::vector<LatticeIndex> homogeneous_zero_rays(const SymbolPolynomial& p);
std::vector<LatticeIndex> integer_lattice_zeros(const HomogeneousPoly& p);

struct RootCertificate {
    IsolatingInterval interval;
    int multiplicity = 1;          ///< r
    int minimal_degree = 1;        ///< nu, degree of the irreducible factor holding the root
    UPoly minimal_polynomial;
    int liouville_exponent = 1;    ///< |alpha - p/q| > C / q^nu
    bool roth_applies = false;     ///< nu >= 2: exponent 2 + eps for every eps > 0
};

struct ShellMinimum {
    int shell = 0;            ///< n^2 in (2^shell, 2^(shell+1)]
    Rational min_abs;         ///< exact min |P(n)| on the shell
    LatticeIndex argmin;
    long argmin_norm_sq = 0;
};

struct EmpiricalScan {
    int max_radius = 0;
    std::vector<ShellMinimum> shells;
    std::optional<LatticeIndex> zero_witness;  ///< some shell minimum vanished: fit aborted
    bool fit_valid = false;
    double k1_fit = 0;  ///< least-squares slope of log min|P| vs log n^2
};

/// Exact shell minima of |P(n)| over 0 < n^2 <= max_radius^2 (max_radius >= 8).
EmpiricalScan empirical_exponent(const HomogeneousPoly& p, int max_radius, unsigned threads = 1);

enum class HypoVerdict { HypoellipticCertified, NotHypoelliptic, HypoellipticEmpirical, Inconclusive };

std::string to_string(HypoVerdict v);

struct HypoReport {
    HypoVerdict verdict = HypoVerdict::Inconclusive;
    std::string branch;  ///< "lattice-zero", "elliptic", "irreducible", "algebraic-roots", "degree-cap"
    int degree = 0;
    UPoly restricted;                          ///< P(x, 1)
    std::vector<LatticeIndex> zero_rays;
    std::optional<LatticeIndex> witness;       ///< NOT verdicts: P(witness) = 0, witness != 0
    std::optional<TrigSeries> kernel_witness;  ///< sum_{|j|<=J} e^{i j nu x}, annihilated by L
    std::vector<RootCertificate> certificates;
    int max_multiplicity = 0;                  ///< r, greatest multiplicity of a real root
    /// Certified lower-bound exponent: |P(n)| >= C (n^2)^k for n != 0, from the
    /// Liouville bound per real root; k = (p - max nu*r) / 2.
    std::optional<Rational> certified_k1;
    std::optional<EmpiricalScan> empirical;
};

struct ClassifyOptions {
    int degree_cap = 8;
    int kernel_terms = 4;      ///< J in the kernel witness
    int empirical_radius = 0;  ///< 0 = no scan unless inconclusive (then 64)
    unsigned threads = 1;
};

HypoReport classify(const HomogeneousPoly& p, const ClassifyOptions& options = {});

/// L^{-1}: H^m -> H^{m + paper_offset - eps} as stated for irreducible P,
/// reported next to the empirically observed gain 2 * k1_fit.
struct SobolevGain {
    Rational paper_offset;      ///< p/2 - r
    bool epsilon_vanishes = false;  ///< p == 2
    std::string paper_index;    ///< "m + 1", "m + 1/2 - eps", ...
    double empirical_gain = 0;  ///< 2 * k1_fit
    std::optional<Rational> certified_gain;  ///< 2 * certified_k1
    bool discrepancy = false;   ///< |paper_offset - empirical_gain| > tolerance
    std::string note;
};

/// Throws std::invalid_argument unless report.verdict is certified. Runs an
/// empirical scan of radius `radius` when the report carries none.
SobolevGain sobolev_gain(const HomogeneousPoly& p, const HypoReport& report, int radius = 256,
                         double tolerance = 0.25);

}  // namespace torus
