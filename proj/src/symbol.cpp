#include "torus/symbol.hpp"

#include "torus/series_io.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace torus {

SymbolPolynomial::SymbolPolynomial(TermMap terms) : terms_(std::move(terms)) {
    std::erase_if(terms_, [](const auto& kv) { return kv.second.is_zero(); });
}

SymbolPolynomial SymbolPolynomial::constant(GaussianRational c) { return term(std::move(c), 0, 0); }

SymbolPolynomial SymbolPolynomial::term(GaussianRational c, unsigned d1, unsigned d2) {
    TermMap m;
    m.emplace(Monomial{d1, d2}, std::move(c));
    return SymbolPolynomial(std::move(m));
}

bool SymbolPolynomial::is_real() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& kv) { return kv.second.is_real(); });
}

int SymbolPolynomial::degree() const {
    int d = -1;
    for (const auto& [m, _] : terms_) d = std::max(d, static_cast<int>(m.degree()));
    return d;
}

bool SymbolPolynomial::is_homogeneous() const {
    if (terms_.empty()) return true;
    const unsigned d = terms_.begin()->first.degree();
    return std::all_of(terms_.begin(), terms_.end(), [d](const auto& kv) { return kv.first.degree() == d; });
}

GaussianRational SymbolPolynomial::coeff(unsigned d1, unsigned d2) const {
    auto it = terms_.find(Monomial{d1, d2});
    return it == terms_.end() ? GaussianRational() : it->second;
}

GaussianRational SymbolPolynomial::eval(long xi1, long xi2) const { return eval(Rational(xi1), Rational(xi2)); }

GaussianRational SymbolPolynomial::eval(const Rational& xi1, const Rational& xi2) const {
    GaussianRational acc;
    for (const auto& [m, c] : terms_) acc += c * GaussianRational(pow_int(xi1, m.d1) * pow_int(xi2, m.d2));
    return acc;
}

SymbolPolynomial SymbolPolynomial::real_part() const {
    TermMap m;
    for (const auto& [mono, c] : terms_) m.emplace(mono, GaussianRational(c.re()));
    return SymbolPolynomial(std::move(m));
}

SymbolPolynomial SymbolPolynomial::imag_part() const {
    TermMap m;
    for (const auto& [mono, c] : terms_) m.emplace(mono, GaussianRational(c.im()));
    return SymbolPolynomial(std::move(m));
}

SymbolPolynomial operator+(const SymbolPolynomial& a, const SymbolPolynomial& b) {
    SymbolPolynomial::TermMap m = a.terms_;
    for (const auto& [mono, c] : b.terms_) m[mono] += c;
    return SymbolPolynomial(std::move(m));
}

SymbolPolynomial operator*(const SymbolPolynomial& a, const SymbolPolynomial& b) {
    SymbolPolynomial::TermMap m;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) m[Monomial{ma.d1 + mb.d1, ma.d2 + mb.d2}] += ca * cb;
    return SymbolPolynomial(std::move(m));
}

SymbolPolynomial operator*(const GaussianRational& c, const SymbolPolynomial& a) {
    SymbolPolynomial::TermMap m;
    for (const auto& [mono, x] : a.terms_) m.emplace(mono, c * x);
    return SymbolPolynomial(std::move(m));
}

std::string SymbolPolynomial::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        if (!s.empty()) s += " + ";
        const auto& [m, c] = *it;
        s += c.is_real() ? c.str() : "(" + c.str() + ")";
        if (m.d1) s += "*x1" + (m.d1 > 1 ? "^" + std::to_string(m.d1) : std::string());
        if (m.d2) s += "*x2" + (m.d2 > 1 ? "^" + std::to_string(m.d2) : std::string());
    }
    return s;
}

GaussianRational parse_gaussian(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty coefficient");
    if (text.back() != 'i') return GaussianRational(parse_rational(text));
    const std::string_view body = text.substr(0, text.size() - 1);
    // Split "re+im" / "re-im" at the last sign that is not leading.
    std::size_t split = std::string_view::npos;
    for (std::size_t i = body.size(); i-- > 1;)
        if (body[i] == '+' || body[i] == '-') {
            split = i;
            break;
        }
    auto imag = [](std::string_view t) {
        if (t.empty() || t == "+") return Rational(1);
        if (t == "-") return Rational(-1);
        return parse_rational(t.front() == '+' ? t.substr(1) : t);
    };
    if (split == std::string_view::npos) return {Rational(0), imag(body)};
    return {parse_rational(body.substr(0, split)), imag(body.substr(split))};
}

SymbolPolynomial parse_symbol(std::string_view text) {
    SymbolPolynomial::TermMap terms;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = text.find(',', pos);
        const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
        std::vector<std::pair<std::string_view, int>> toks;
        for (std::size_t i = pos; i < end;) {
            while (i < end && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
            if (i >= end) break;
            const std::size_t start = i;
            while (i < end && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
            toks.emplace_back(text.substr(start, i - start), static_cast<int>(start) + 1);
        }
        if (!toks.empty() || comma != std::string_view::npos) {
            if (toks.size() != 3) throw ParseError("term needs 'c a1 a2'", 1, toks.empty() ? static_cast<int>(pos) + 1 : toks[0].second);
            GaussianRational c;
            try {
                c = parse_gaussian(toks[0].first);
            } catch (const std::invalid_argument& e) {
                throw ParseError(e.what(), 1, toks[0].second);
            }
            unsigned exps[2];
            for (int j = 0; j < 2; ++j) {
                const auto& [t, col] = toks[static_cast<std::size_t>(j) + 1];
                if (t.empty() || t.size() > 6 || !std::all_of(t.begin(), t.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
                    throw ParseError("exponent must be a nonnegative integer, got '" + std::string(t) + "'", 1, col);
                exps[j] = static_cast<unsigned>(std::stoul(std::string(t)));
            }
            terms[Monomial{exps[0], exps[1]}] += c;
        }
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return SymbolPolynomial(std::move(terms));
}

}  // namespace torus
