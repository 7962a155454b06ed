#include "torus/torus_operator.hpp"

#include "torus/errors.hpp"
#include "torus/hypo.hpp"
#include "torus/series_io.hpp"

#include <algorithm>
#include <stdexcept>

namespace torus {

namespace {

using AlphaKey = std::pair<unsigned, unsigned>;

SymbolPolynomial::TermMap& slot(std::map<LatticeIndex, SymbolPolynomial::TermMap>& m, const LatticeIndex& n) { return m[n]; }

}  // namespace

void TorusOperator::finish() {
    std::erase_if(freq_, [](const auto& kv) { return kv.second.is_zero(); });
    s1_ = s2_ = 0;
    for (const auto& [n, _] : freq_) {
        s1_ = std::max(s1_, std::labs(n.k1));
        s2_ = std::max(s2_, std::labs(n.k2));
    }
    // Canonical alpha form from the frequency form: (T_alpha)_n = (-i)^{|alpha|} [xi^alpha] P_n.
    std::map<AlphaKey, TrigSeries::CoeffMap> by_alpha;
    for (const auto& [n, p] : freq_)
        for (const auto& [mono, c] : p.terms()) by_alpha[{mono.d1, mono.d2}].emplace(n, c * i_pow(-static_cast<long>(mono.degree())));
    alpha_.clear();
    for (auto& [a, coeffs] : by_alpha) alpha_.push_back({a.first, a.second, TrigSeries::polynomial(std::move(coeffs))});
}

TorusOperator TorusOperator::from_alpha_form(const std::vector<AlphaTerm>& terms) {
    std::map<LatticeIndex, SymbolPolynomial::TermMap> freq;
    for (const auto& t : terms) {
        if (!t.coeff.is_polynomial())
            throw std::invalid_argument("operator coefficient for alpha=(" + std::to_string(t.a1) + "," + std::to_string(t.a2) +
                                        ") must be a trigonometric polynomial");
        const GaussianRational unit = i_pow(static_cast<long>(t.a1 + t.a2));
        for (const auto& [n, c] : t.coeff.coeffs()) slot(freq, n)[Monomial{t.a1, t.a2}] += unit * c;
    }
    TorusOperator l;
    for (auto& [n, m] : freq) l.freq_.emplace(n, SymbolPolynomial(std::move(m)));
    l.finish();
    return l;
}

TorusOperator TorusOperator::from_freq_form(const FreqForm& freq) {
    TorusOperator l;
    l.freq_ = freq;
    l.finish();
    return l;
}

TorusOperator TorusOperator::from_symbol(const SymbolPolynomial& p) { return from_freq_form({{LatticeIndex{0, 0}, p}}); }

TorusOperator TorusOperator::mizohata() {
    // i sin x1 = (e^{ix1} - e^{-ix1}) / 2
    TrigSeries::CoeffMap isin;
    isin.emplace(LatticeIndex{1, 0}, GaussianRational(Rational(1, 2)));
    isin.emplace(LatticeIndex{-1, 0}, GaussianRational(Rational(-1, 2)));
    return from_alpha_form({{1, 0, TrigSeries::constant(1)}, {0, 1, TrigSeries::polynomial(std::move(isin))}});
}

SymbolPolynomial TorusOperator::symbol_at(const LatticeIndex& n) const {
    auto it = freq_.find(n);
    return it == freq_.end() ? SymbolPolynomial() : it->second;
}

bool TorusOperator::is_constant_coefficient() const {
    return std::all_of(freq_.begin(), freq_.end(), [](const auto& kv) { return kv.first == LatticeIndex{0, 0}; });
}

int TorusOperator::max_degree() const {
    int d = -1;
    for (const auto& [_, p] : freq_) d = std::max(d, p.degree());
    return d;
}

TorusOperator multiply_left(const TrigSeries& t, const TorusOperator& l) {
    if (!t.is_polynomial()) throw std::invalid_argument("multiply_left needs a trigonometric polynomial");
    std::vector<AlphaTerm> terms;
    for (const auto& a : l.alpha_form()) terms.push_back({a.a1, a.a2, multiply(t, a.coeff)});
    return TorusOperator::from_alpha_form(terms);
}

TorusOperator operator+(const TorusOperator& a, const TorusOperator& b) {
    TorusOperator::FreqForm f = a.freq_form();
    for (const auto& [n, p] : b.freq_form()) f[n] = f[n] + p;
    return TorusOperator::from_freq_form(f);
}

TrigSeries apply(const TorusOperator& l, const TrigSeries& u) {
    std::optional<Box> out_box;
    if (u.window()) {
        out_box = u.window()->shrink(l.s1(), l.s2());
        if (!out_box)
            throw ContractViolation("apply: window " + u.window()->str() + " is empty after shrinking by (" +
                                    std::to_string(l.s1()) + "," + std::to_string(l.s2()) + ")");
    }
    TrigSeries::CoeffMap out;
    for (const auto& [j, c] : u.coeffs()) {
        for (const auto& [n, p] : l.freq_form()) {
            const LatticeIndex k = j + n;
            if (out_box && !out_box->contains(k)) continue;
            GaussianRational v = p.eval(j) * c;
            if (v.is_zero()) continue;
            out[k] += v;
        }
    }
    std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
    return out_box ? TrigSeries::truncated(*out_box, std::move(out)) : TrigSeries::polynomial(std::move(out));
}

TrigSeries apply_alpha_form(const TorusOperator& l, const TrigSeries& u) {
    std::optional<TrigSeries> acc;
    for (const auto& a : l.alpha_form()) {
        TrigSeries::CoeffMap d;
        const GaussianRational unit = i_pow(static_cast<long>(a.a1 + a.a2));
        for (const auto& [k, c] : u.coeffs()) {
            GaussianRational v = unit * pow_int(Rational(k.k1), a.a1) * pow_int(Rational(k.k2), a.a2) * c;
            if (!v.is_zero()) d.emplace(k, std::move(v));
        }
        TrigSeries du = u.window() ? TrigSeries::truncated(*u.window(), std::move(d)) : TrigSeries::polynomial(std::move(d));
        TrigSeries term = multiply(a.coeff, du);
        acc = acc ? add(*acc, term) : term;
    }
    if (!acc) return u.window() ? TrigSeries::truncated(*u.window(), {}) : TrigSeries();
    return *acc;
}

std::string to_string(Assumption1Status s) {
    switch (s) {
        case Assumption1Status::HoldsCertified: return "HOLDS_CERTIFIED";
        case Assumption1Status::HoldsOnBox: return "HOLDS_ON_BOX";
        case Assumption1Status::Fails: return "FAILS";
    }
    return "?";
}

namespace {

/// Exact answer for the symbol classes with a decision procedure: nullopt when
/// undecided, otherwise the zero ray (or none).
std::optional<std::optional<LatticeIndex>> decide_exactly(const SymbolPolynomial& p) {
    if (p.is_zero()) return std::optional<LatticeIndex>(LatticeIndex{1, 0});
    if (p.degree() == 0) return std::optional<LatticeIndex>();
    if (p.is_homogeneous()) {
        const SymbolPolynomial re = p.real_part();
        const SymbolPolynomial im = p.imag_part();
        std::vector<LatticeIndex> rays;
        if (re.is_zero()) {
            rays = homogeneous_zero_rays(im);
        } else if (im.is_zero()) {
            rays = homogeneous_zero_rays(re);
        } else {
            auto a = homogeneous_zero_rays(re);
            auto b = homogeneous_zero_rays(im);
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(rays));
        }
        if (rays.empty()) return std::optional<LatticeIndex>();
        return std::optional<LatticeIndex>(rays.front());
    }
    // Sum of same-sign multiples of even monomials with a nonzero constant: no real zeros.
    if (p.is_real()) {
        int sign = 0;
        bool ok = p.coeff(0, 0).re() != 0;
        for (const auto& [m, c] : p.terms()) {
            const int s = sgn(c.re());
            if (m.d1 % 2 || m.d2 % 2 || (sign && s != sign)) ok = false;
            sign = s;
        }
        if (ok) return std::optional<LatticeIndex>();
    }
    return std::nullopt;
}

}  // namespace

Assumption1Result check_assumption1(const TorusOperator& l, const Box& search_box) {
    Assumption1Result r;
    if (l.is_zero()) {
        r.status = Assumption1Status::Fails;
        r.n = LatticeIndex{0, 0};
        r.m = LatticeIndex{1, 0};
        return r;
    }
    bool any_scanned = false;
    for (const auto& [n, p] : l.freq_form()) {
        if (auto exact = decide_exactly(p)) {
            if (*exact) {
                r.status = Assumption1Status::Fails;
                r.n = n;
                r.m = **exact;
                return r;
            }
            continue;
        }
        std::optional<LatticeIndex> hit;
        search_box.for_each([&](const LatticeIndex& m) {
            if (!hit && m != LatticeIndex{0, 0} && p.eval(m).is_zero()) hit = m;
        });
        if (hit) {
            r.status = Assumption1Status::Fails;
            r.n = n;
            r.m = hit;
            return r;
        }
        any_scanned = true;
        r.scanned.push_back(n);
    }
    r.status = any_scanned ? Assumption1Status::HoldsOnBox : Assumption1Status::HoldsCertified;
    return r;
}

bool check_weak_assumption(const TorusOperator& l, const LatticeIndex& m) {
    return std::any_of(l.freq_form().begin(), l.freq_form().end(), [&](const auto& kv) { return !kv.second.eval(m).is_zero(); });
}

nlohmann::json operator_to_json(const TorusOperator& l) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& a : l.alpha_form()) terms.push_back({{"alpha", {a.a1, a.a2}}, {"coeff", series_to_json(a.coeff)}});
    return {{"terms", terms}};
}

TorusOperator operator_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array())
        throw std::invalid_argument("operator document needs a \"terms\" array");
    std::vector<AlphaTerm> terms;
    std::size_t idx = 0;
    for (const auto& t : j["terms"]) {
        const std::string where = "operator term " + std::to_string(idx++);
        if (!t.is_object() || !t.contains("alpha") || !t.contains("coeff"))
            throw std::invalid_argument(where + ": needs \"alpha\" and \"coeff\"");
        const auto& a = t["alpha"];
        if (!a.is_array() || a.size() != 2 || !a[0].is_number_unsigned() || !a[1].is_number_unsigned())
            throw std::invalid_argument(where + ": \"alpha\" must be two nonnegative integers");
        TrigSeries c = series_from_json(t["coeff"]);
        if (!c.is_polynomial()) throw std::invalid_argument(where + ": coefficient must have \"box\": null");
        terms.push_back({a[0].get<unsigned>(), a[1].get<unsigned>(), std::move(c)});
    }
    return TorusOperator::from_alpha_form(terms);
}

}  // namespace torus
