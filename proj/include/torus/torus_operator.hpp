#pragma once

#include "torus/symbol.hpp"
#include "torus/trig_series.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace torus {

/// One term T(x) d^alpha of an operator, with d the plain partial derivative.
struct AlphaTerm {
    unsigned a1 = 0;
    unsigned a2 = 0;
    TrigSeries coeff;  ///< trigonometric polynomial

    friend bool operator==(const AlphaTerm&, const AlphaTerm&) = default;
};

/// L = sum_alpha T_alpha(x) d^alpha = sum_n e^{inx} P_n(D), D = -i d.
///
/// d^alpha has symbol i^{|alpha|} xi^alpha, so the frequency form is
/// P_n(xi) = sum_alpha (T_alpha)_n i^{|alpha|} xi^alpha.
class TorusOperator {
public:
    using FreqForm = std::map<LatticeIndex, SymbolPolynomial>;

    TorusOperator() = default;

    /// Terms with equal alpha are merged; zero terms are dropped. Throws
    /// std::invalid_argument when a coefficient is not a trigonometric polynomial.
    static TorusOperator from_alpha_form(const std::vector<AlphaTerm>& terms);
    static TorusOperator from_freq_form(const FreqForm& freq);
    /// Constant-coefficient operator P(D).
    static TorusOperator from_symbol(const SymbolPolynomial& p);
    /// d_{x1} + i sin(x1) d_{x2}.
    static TorusOperator mizohata();

    /// Canonical alpha form: one term per alpha, ascending in (a1, a2).
    const std::vector<AlphaTerm>& alpha_form() const { return alpha_; }
    const FreqForm& freq_form() const { return freq_; }
    /// Symbol P_n, zero when n is not in the support.
    SymbolPolynomial symbol_at(const LatticeIndex& n) const;

    bool is_zero() const { return freq_.empty(); }
    bool is_constant_coefficient() const;
    long s1() const { return s1_; }
    long s2() const { return s2_; }
    /// max_n deg P_n, -1 for the zero operator.
    int max_degree() const;

    friend bool operator==(const TorusOperator& a, const TorusOperator& b) { return a.freq_ == b.freq_; }

private:
    void finish();

    std::vector<AlphaTerm> alpha_;
    FreqForm freq_;
    long s1_ = 0;
    long s2_ = 0;
};

/// t(x) * L for a trigonometric polynomial t.
TorusOperator multiply_left(const TrigSeries& t, const TorusOperator& l);
TorusOperator operator+(const TorusOperator& a, const TorusOperator& b);

/// (Lu)_k = sum_n P_n(k - n) u_{k-n}. A truncated input yields output on its
/// window shrunk by (s1, s2); throws ContractViolation when nothing remains.
TrigSeries apply(const TorusOperator& l, const TrigSeries& u);
/// Same operator applied term by term through the alpha form.
TrigSeries apply_alpha_form(const TorusOperator& l, const TrigSeries& u);

enum class Assumption1Status { HoldsCertified, HoldsOnBox, Fails };

std::string to_string(Assumption1Status s);

struct Assumption1Result {
    Assumption1Status status = Assumption1Status::HoldsCertified;
    std::optional<LatticeIndex> n;  ///< Fails: the frequency whose symbol vanishes
    std::optional<LatticeIndex> m;  ///< Fails: nonzero lattice point with P_n(m) = 0
    /// Frequencies decided only by the box scan.
    std::vector<LatticeIndex> scanned;
};

/// Decides, for each n, whether P_n(m) = 0 for some m in Z^2 \ {0}. Homogeneous
/// symbols and a few positive forms are decided exactly; the rest are scanned
/// over `search_box`.
Assumption1Result check_assumption1(const TorusOperator& l, const Box& search_box);

/// True iff P_n(m) != 0 for some n.
bool check_weak_assumption(const TorusOperator& l, const LatticeIndex& m);

/// {"terms":[{"alpha":[a1,a2],"coeff":<series>}]}
nlohmann::json operator_to_json(const TorusOperator& l);
TorusOperator operator_from_json(const nlohmann::json& j);

}  // namespace torus
