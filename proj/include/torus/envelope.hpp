#pragma once

#include "torus/lattice.hpp"
#include "torus/rational.hpp"

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace torus {

/// w(k) = (1+k.k)^a e^{b1|k1| + b2|k2|} (|k1|!)^c1 (|k2|!)^c2.
struct AtomEnvelope {
    Rational a{0};
    Rational b1{0};
    Rational b2{0};
    Rational c1{0};
    Rational c2{0};

    friend bool operator==(const AtomEnvelope&, const AtomEnvelope&) = default;
    AtomEnvelope operator-(const AtomEnvelope& o) const { return {a - o.a, b1 - o.b1, b2 - o.b2, c1 - o.c1, c2 - o.c2}; }
    /// "atom(a, b1, b2, c1, c2)"
    std::string str() const;
};

/// Exact value of an atom at a lattice point.
///
/// Values factor as e^B * prod_p p^{e_p} with rational B and e_p, and this form
/// is unique (Lindemann-Weierstrass plus unique factorization), so equality is
/// decided structurally and ordering by logarithms evaluated to whatever
/// precision separates them.
class EnvelopeValue {
public:
    EnvelopeValue(AtomEnvelope atom, LatticeIndex k) : atom_(std::move(atom)), k_(k) {}

    const AtomEnvelope& atom() const { return atom_; }
    const LatticeIndex& at() const { return k_; }

    /// B = b1|k1| + b2|k2|.
    Rational exponential_part() const;
    /// Prime exponents of (1+k.k)^a (|k1|!)^c1 (|k2|!)^c2, zeros omitted.
    std::map<unsigned long, Rational> prime_exponents() const;
    double log_value() const;

    /// -1, 0, 1. Exact for values at any lattice points.
    friend int compare(const EnvelopeValue& x, const EnvelopeValue& y);
    friend bool operator==(const EnvelopeValue& x, const EnvelopeValue& y) { return compare(x, y) == 0; }
    friend bool operator<(const EnvelopeValue& x, const EnvelopeValue& y) { return compare(x, y) < 0; }

private:
    AtomEnvelope atom_;
    LatticeIndex k_;
};

/// Expression tree over atoms with MAX and MIN nodes. Limit leaves stand for
/// the non-principal sections H^inf, H^-inf, E0 and E0*; they have no
/// pointwise value.
class EnvelopeExpr {
public:
    enum class Kind { Atom, Limit, Max, Min };
    enum class LimitKind { Hinf, HminusInf, E0, E0dual };

    /// The constant envelope atom(0, 0, 0, 0, 0).
    EnvelopeExpr() = default;
    static EnvelopeExpr atom(AtomEnvelope a);
    static EnvelopeExpr limit(LimitKind k);
    /// Plain nodes without simplification; throws on an empty child list.
    static EnvelopeExpr max(std::vector<EnvelopeExpr> children);
    static EnvelopeExpr min(std::vector<EnvelopeExpr> children);

    Kind kind() const { return kind_; }
    bool is_leaf() const { return kind_ == Kind::Atom || kind_ == Kind::Limit; }
    const AtomEnvelope& as_atom() const { return atom_; }
    LimitKind limit_kind() const { return limit_; }
    const std::vector<EnvelopeExpr>& children() const { return children_; }
    bool has_limits() const;
    std::size_t leaf_count() const;

    /// Pointwise value; throws std::invalid_argument when a limit leaf is present.
    EnvelopeValue eval(const LatticeIndex& k) const;
    /// Applies f to every atom leaf, keeping the tree shape.
    template <typename F>
    EnvelopeExpr map_atoms(F&& f) const {
        if (kind_ == Kind::Atom) return atom(f(atom_));
        if (kind_ == Kind::Limit) return *this;
        std::vector<EnvelopeExpr> c;
        for (const auto& ch : children_) c.push_back(ch.map_atoms(f));
        return kind_ == Kind::Max ? max(std::move(c)) : min(std::move(c));
    }

    std::string str() const;
    friend bool operator==(const EnvelopeExpr&, const EnvelopeExpr&) = default;

private:
    Kind kind_ = Kind::Atom;
    AtomEnvelope atom_;
    LimitKind limit_ = LimitKind::Hinf;
    std::vector<EnvelopeExpr> children_;
};

std::string to_string(EnvelopeExpr::LimitKind k);

/// Parses the grammar in docs/envelope_grammar.md. Throws ParseError.
EnvelopeExpr parse_envelope(std::string_view text);

/// Evaluates many limit-free expressions over one shared atom table, so each
/// distinct atom costs a few flops per lattice point. Winners are picked by
/// double log values; near ties go through the exact compare().
class EnvelopeProbe {
public:
    /// Returns a handle for use with equal() and log_value().
    std::size_t add(const EnvelopeExpr& e);

    /// Moves to lattice point k and evaluates every added expression there.
    void at(const LatticeIndex& k);

    /// Exact equality of two expressions at the current point.
    bool equal(std::size_t h1, std::size_t h2) const;
    double log_value(std::size_t h) const { return logs_[winner_[h]]; }
    const AtomEnvelope& winner(std::size_t h) const { return atoms_[winner_[h]]; }

private:
    struct Node {
        EnvelopeExpr::Kind kind;
        std::size_t atom = 0;
        std::vector<std::size_t> children;
    };
    std::size_t compile(const EnvelopeExpr& e);
    std::size_t intern(const AtomEnvelope& a);
    int cmp(std::size_t i, std::size_t j) const;

    std::vector<AtomEnvelope> atoms_;
    std::vector<std::array<double, 5>> coef_;  ///< a, b1, b2, c1, c2 as doubles
    std::vector<Node> nodes_;
    std::map<std::tuple<EnvelopeExpr::Kind, std::size_t, std::vector<std::size_t>>, std::size_t> index_;
    std::vector<std::size_t> roots_;
    std::vector<std::size_t> node_win_;
    LatticeIndex k_{0, 0};
    std::array<bool, 5> zero_{};  ///< basis entries vanishing at k_
    std::vector<double> logs_;
    std::vector<std::size_t> winner_;
};

}  // namespace torus
