#include "torus/envelope.hpp"

#include "torus/series_io.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace torus {

std::string AtomEnvelope::str() const {
    return "atom(" + to_string(a) + ", " + to_string(b1) + ", " + to_string(b2) + ", " + to_string(c1) + ", " + to_string(c2) + ")";
}

namespace {

void add_factorization(std::map<unsigned long, Rational>& out, unsigned long n, const Rational& weight) {
    for (unsigned long p = 2; p * p <= n; ++p) {
        long e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out[p] += weight * e;
    }
    if (n > 1) out[n] += weight;
}

/// Legendre: exponent of p in n! for every prime p <= n.
void add_factorial(std::map<unsigned long, Rational>& out, unsigned long n, const Rational& weight) {
    if (weight == 0) return;
    for (unsigned long p = 2; p <= n; ++p) {
        bool prime = true;
        for (unsigned long d = 2; d * d <= p; ++d)
            if (p % d == 0) {
                prime = false;
                break;
            }
        if (!prime) continue;
        long e = 0;
        for (unsigned long q = p; q <= n; q *= p) {
            e += static_cast<long>(n / q);
            if (q > n / p) break;
        }
        out[p] += weight * e;
    }
}

int sign_with_precision(const EnvelopeValue& x, const EnvelopeValue& y, mpfr_prec_t prec) {
    mpfr_t acc, term;
    mpfr_init2(acc, prec);
    mpfr_init2(term, prec);
    const Rational b = x.exponential_part() - y.exponential_part();
    mpfr_set_q(acc, b.get_mpq_t(), MPFR_RNDN);
    auto ex = x.prime_exponents();
    for (const auto& [p, e] : y.prime_exponents()) ex[p] -= e;
    for (const auto& [p, e] : ex) {
        if (e == 0) continue;
        mpfr_set_ui(term, p, MPFR_RNDN);
        mpfr_log(term, term, MPFR_RNDN);
        mpfr_mul_q(term, term, e.get_mpq_t(), MPFR_RNDN);
        mpfr_add(acc, acc, term, MPFR_RNDN);
    }
    // Accumulated rounding stays far below 2^(-prec/2) for any realistic term count.
    int s = 0;
    if (!mpfr_zero_p(acc) && mpfr_get_exp(acc) > -static_cast<mpfr_exp_t>(prec / 2)) s = mpfr_sgn(acc) > 0 ? 1 : -1;
    mpfr_clear(acc);
    mpfr_clear(term);
    return s;
}

double log_factorial(long n) { return std::lgamma(static_cast<double>(n) + 1.0); }

}  // namespace

Rational EnvelopeValue::exponential_part() const { return atom_.b1 * std::labs(k_.k1) + atom_.b2 * std::labs(k_.k2); }

std::map<unsigned long, Rational> EnvelopeValue::prime_exponents() const {
    std::map<unsigned long, Rational> out;
    if (atom_.a != 0) add_factorization(out, static_cast<unsigned long>(1 + k_.norm_sq()), atom_.a);
    add_factorial(out, static_cast<unsigned long>(std::labs(k_.k1)), atom_.c1);
    add_factorial(out, static_cast<unsigned long>(std::labs(k_.k2)), atom_.c2);
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
}

double EnvelopeValue::log_value() const {
    return atom_.a.get_d() * std::log(1.0 + static_cast<double>(k_.norm_sq())) + exponential_part().get_d() +
           atom_.c1.get_d() * log_factorial(std::labs(k_.k1)) + atom_.c2.get_d() * log_factorial(std::labs(k_.k2));
}

int compare(const EnvelopeValue& x, const EnvelopeValue& y) {
    if (x.at() == y.at() && x.atom() == y.atom()) return 0;
    const double lx = x.log_value();
    const double ly = y.log_value();
    const double scale = std::max({1.0, std::fabs(lx), std::fabs(ly)});
    if (std::fabs(lx - ly) > 1e-9 * scale) return lx < ly ? -1 : 1;
    if (x.exponential_part() == y.exponential_part() && x.prime_exponents() == y.prime_exponents()) return 0;
    // Distinct exact forms never coincide; raise precision until the sign shows.
    for (mpfr_prec_t prec = 256;; prec *= 2)
        if (const int s = sign_with_precision(x, y, prec)) return s;
}

EnvelopeExpr EnvelopeExpr::atom(AtomEnvelope a) {
    EnvelopeExpr e;
    e.kind_ = Kind::Atom;
    e.atom_ = std::move(a);
    return e;
}

EnvelopeExpr EnvelopeExpr::limit(LimitKind k) {
    EnvelopeExpr e;
    e.kind_ = Kind::Limit;
    e.limit_ = k;
    return e;
}

EnvelopeExpr EnvelopeExpr::max(std::vector<EnvelopeExpr> children) {
    if (children.empty()) throw std::invalid_argument("max() needs at least one argument");
    EnvelopeExpr e;
    e.kind_ = Kind::Max;
    e.children_ = std::move(children);
    return e;
}

EnvelopeExpr EnvelopeExpr::min(std::vector<EnvelopeExpr> children) {
    if (children.empty()) throw std::invalid_argument("min() needs at least one argument");
    EnvelopeExpr e;
    e.kind_ = Kind::Min;
    e.children_ = std::move(children);
    return e;
}

bool EnvelopeExpr::has_limits() const {
    if (kind_ == Kind::Limit) return true;
    return std::any_of(children_.begin(), children_.end(), [](const EnvelopeExpr& c) { return c.has_limits(); });
}

std::size_t EnvelopeExpr::leaf_count() const {
    if (is_leaf()) return 1;
    std::size_t n = 0;
    for (const auto& c : children_) n += c.leaf_count();
    return n;
}

EnvelopeValue EnvelopeExpr::eval(const LatticeIndex& k) const {
    switch (kind_) {
        case Kind::Atom: return EnvelopeValue(atom_, k);
        case Kind::Limit: throw std::invalid_argument(to_string(limit_) + " has no pointwise generator");
        case Kind::Max:
        case Kind::Min: break;
    }
    EnvelopeValue best = children_.front().eval(k);
    for (std::size_t i = 1; i < children_.size(); ++i) {
        EnvelopeValue v = children_[i].eval(k);
        const int c = compare(v, best);
        if (kind_ == Kind::Max ? c > 0 : c < 0) best = std::move(v);
    }
    return best;
}

std::string to_string(EnvelopeExpr::LimitKind k) {
    switch (k) {
        case EnvelopeExpr::LimitKind::Hinf: return "hinf";
        case EnvelopeExpr::LimitKind::HminusInf: return "hminf";
        case EnvelopeExpr::LimitKind::E0: return "e0";
        case EnvelopeExpr::LimitKind::E0dual: return "e0dual";
    }
    return "?";
}

std::string EnvelopeExpr::str() const {
    if (kind_ == Kind::Atom) return atom_.str();
    if (kind_ == Kind::Limit) return to_string(limit_);
    std::string s = kind_ == Kind::Max ? "max(" : "min(";
    for (std::size_t i = 0; i < children_.size(); ++i) {
        if (i) s += ", ";
        s += children_[i].str();
    }
    return s + ")";
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    EnvelopeExpr parse() {
        EnvelopeExpr e = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        // Columns are 1-based; line counting supports multi-line input.
        int line = 1, col = 1;
        for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(what, line, col);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string word() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])))) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    Rational rational() {
        skip_ws();
        const std::size_t start = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
        while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '/')) ++pos_;
        const std::string_view tok = text_.substr(start, pos_ - start);
        try {
            return parse_rational(tok);
        } catch (const std::invalid_argument&) {
            pos_ = start;
            fail("expected a rational number");
        }
    }

    EnvelopeExpr expr() {
        const std::size_t start = (skip_ws(), pos_);
        const std::string w = word();
        if (w == "atom") {
            expect('(');
            AtomEnvelope a;
            Rational* fields[] = {&a.a, &a.b1, &a.b2, &a.c1, &a.c2};
            for (int i = 0; i < 5; ++i) {
                if (i) expect(',');
                *fields[i] = rational();
            }
            expect(')');
            return EnvelopeExpr::atom(std::move(a));
        }
        if (w == "max" || w == "min") {
            expect('(');
            std::vector<EnvelopeExpr> children{expr()};
            skip_ws();
            while (pos_ < text_.size() && text_[pos_] == ',') {
                ++pos_;
                children.push_back(expr());
                skip_ws();
            }
            expect(')');
            return w == "max" ? EnvelopeExpr::max(std::move(children)) : EnvelopeExpr::min(std::move(children));
        }
        for (auto k : {EnvelopeExpr::LimitKind::Hinf, EnvelopeExpr::LimitKind::HminusInf, EnvelopeExpr::LimitKind::E0,
                       EnvelopeExpr::LimitKind::E0dual})
            if (w == to_string(k)) return EnvelopeExpr::limit(k);
        pos_ = start;
        fail(w.empty() ? "expected an envelope expression" : "unknown envelope '" + w + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

EnvelopeExpr parse_envelope(std::string_view text) { return Parser(text).parse(); }

std::size_t EnvelopeProbe::intern(const AtomEnvelope& a) {
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        if (atoms_[i] == a) return i;
    atoms_.push_back(a);
    coef_.push_back({a.a.get_d(), a.b1.get_d(), a.b2.get_d(), a.c1.get_d(), a.c2.get_d()});
    return atoms_.size() - 1;
}

std::size_t EnvelopeProbe::compile(const EnvelopeExpr& e) {
    Node n{e.kind(), 0, {}};
    switch (e.kind()) {
        case EnvelopeExpr::Kind::Atom: n.atom = intern(e.as_atom()); break;
        case EnvelopeExpr::Kind::Limit: throw std::invalid_argument(e.str() + " has no pointwise generator");
        case EnvelopeExpr::Kind::Max:
        case EnvelopeExpr::Kind::Min:
            for (const auto& c : e.children()) n.children.push_back(compile(c));
            break;
    }
    // Shared subtrees are stored once; children always precede their parents.
    auto [it, fresh] = index_.try_emplace(std::make_tuple(n.kind, n.atom, n.children), nodes_.size());
    if (fresh) nodes_.push_back(std::move(n));
    return it->second;
}

std::size_t EnvelopeProbe::add(const EnvelopeExpr& e) {
    roots_.push_back(compile(e));
    return roots_.size() - 1;
}

int EnvelopeProbe::cmp(std::size_t i, std::size_t j) const {
    if (i == j) return 0;
    const double x = logs_[i], y = logs_[j];
    const double scale = std::max({1.0, std::fabs(x), std::fabs(y)});
    if (std::fabs(x - y) > 1e-9 * scale) return x < y ? -1 : 1;
    // Atoms that differ only where the basis vanishes (axes, origin) agree exactly.
    const AtomEnvelope &p = atoms_[i], &q = atoms_[j];
    const bool same = (zero_[0] || p.a == q.a) && (zero_[1] || p.b1 == q.b1) && (zero_[2] || p.b2 == q.b2) &&
                      (zero_[3] || p.c1 == q.c1) && (zero_[4] || p.c2 == q.c2);
    if (same) return 0;
    return compare(EnvelopeValue(p, k_), EnvelopeValue(q, k_));
}

void EnvelopeProbe::at(const LatticeIndex& k) {
    k_ = k;
    const double basis[5] = {std::log1p(static_cast<double>(k.norm_sq())), static_cast<double>(std::labs(k.k1)),
                             static_cast<double>(std::labs(k.k2)), log_factorial(std::labs(k.k1)), log_factorial(std::labs(k.k2))};
    for (int j = 0; j < 5; ++j) zero_[j] = basis[j] == 0;
    logs_.resize(atoms_.size());
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        double v = 0;
        for (int j = 0; j < 5; ++j)
            if (coef_[i][j] != 0) v += coef_[i][j] * basis[j];
        logs_[i] = v;
    }
    node_win_.resize(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Node& n = nodes_[i];
        if (n.kind == EnvelopeExpr::Kind::Atom) {
            node_win_[i] = n.atom;
            continue;
        }
        const bool is_max = n.kind == EnvelopeExpr::Kind::Max;
        std::size_t best = node_win_[n.children.front()];
        for (std::size_t c = 1; c < n.children.size(); ++c) {
            const std::size_t v = node_win_[n.children[c]];
            const int s = cmp(v, best);
            if (is_max ? s > 0 : s < 0) best = v;
        }
        node_win_[i] = best;
    }
    winner_.resize(roots_.size());
    for (std::size_t h = 0; h < roots_.size(); ++h) winner_[h] = node_win_[roots_[h]];
}

bool EnvelopeProbe::equal(std::size_t h1, std::size_t h2) const { return cmp(winner_[h1], winner_[h2]) == 0; }

}  // namespace torus
