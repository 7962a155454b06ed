#include "torus/hypo.hpp"

#include "torus/series_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace torus {

namespace {

LatticeIndex normalize_ray(Integer a, Integer b) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    a /= g;
    b /= g;
    if (b < 0 || (b == 0 && a < 0)) {
        a = -a;
        b = -b;
    }
    return {a.get_si(), b.get_si()};
}

}  // namespace

HomogeneousPoly HomogeneousPoly::from_terms(const std::vector<Term>& terms) {
    HomogeneousPoly p;
    for (const auto& t : terms) {
        if (t.coeff == 0) continue;
        p.terms_[Monomial{t.a1, t.a2}] += t.coeff;
    }
    std::erase_if(p.terms_, [](const auto& kv) { return kv.second == 0; });
    if (p.terms_.empty()) throw std::invalid_argument("homogeneous polynomial must be nonzero");
    p.degree_ = static_cast<int>(p.terms_.begin()->first.degree());
    for (const auto& [m, _] : p.terms_)
        if (static_cast<int>(m.degree()) != p.degree_)
            throw std::invalid_argument("polynomial is not homogeneous: degrees " + std::to_string(p.degree_) + " and " +
                                        std::to_string(m.degree()));
    if (p.degree_ < 2) throw std::invalid_argument("homogeneous polynomial needs degree >= 2, got " + std::to_string(p.degree_));
    return p;
}

HomogeneousPoly HomogeneousPoly::from_symbol(const SymbolPolynomial& s) {
    if (!s.is_real()) throw std::invalid_argument("hypoellipticity analysis needs real coefficients: " + s.str());
    std::vector<Term> terms;
    for (const auto& [m, c] : s.terms()) terms.push_back({c.re(), m.d1, m.d2});
    return from_terms(terms);
}

HomogeneousPoly HomogeneousPoly::parse(std::string_view text) {
    std::vector<Term> terms;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
        const std::string_view chunk = text.substr(pos, end - pos);
        std::vector<std::pair<std::string, int>> toks;
        for (std::size_t i = 0; i < chunk.size();) {
            while (i < chunk.size() && std::isspace(static_cast<unsigned char>(chunk[i]))) ++i;
            if (i >= chunk.size()) break;
            const std::size_t start = i;
            while (i < chunk.size() && !std::isspace(static_cast<unsigned char>(chunk[i]))) ++i;
            toks.emplace_back(std::string(chunk.substr(start, i - start)), static_cast<int>(pos + start) + 1);
        }
        if (!toks.empty() || comma != std::string_view::npos) {
            if (toks.size() != 3)
                throw ParseError("term needs 'c a1 a2'", 1, toks.empty() ? static_cast<int>(pos) + 1 : toks.front().second);
            Term t;
            try {
                t.coeff = parse_rational(toks[0].first);
            } catch (const std::invalid_argument& e) {
                throw ParseError(e.what(), 1, toks[0].second);
            }
            for (int i : {1, 2}) {
                const auto& s = toks[static_cast<std::size_t>(i)].first;
                if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
                    throw ParseError("exponent must be a nonnegative integer, got '" + s + "'", 1, toks[static_cast<std::size_t>(i)].second);
                (i == 1 ? t.a1 : t.a2) = static_cast<unsigned>(std::stoul(s));
            }
            terms.push_back(t);
        }
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return from_terms(terms);
}

Rational HomogeneousPoly::eval(long n1, long n2) const { return eval(Rational(n1), Rational(n2)); }

Rational HomogeneousPoly::eval(const Rational& x1, const Rational& x2) const {
    Rational acc(0);
    for (const auto& [m, c] : terms_) acc += c * pow_int(x1, m.d1) * pow_int(x2, m.d2);
    return acc;
}

SymbolPolynomial HomogeneousPoly::symbol() const {
    SymbolPolynomial::TermMap m;
    for (const auto& [mono, c] : terms_) m.emplace(mono, GaussianRational(c));
    return SymbolPolynomial(std::move(m));
}

std::string HomogeneousPoly::term_list() const {
    std::string s;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        if (!s.empty()) s += ", ";
        s += to_string(it->second) + " " + std::to_string(it->first.d1) + " " + std::to_string(it->first.d2);
    }
    return s;
}

UPoly restrict_to_line(const HomogeneousPoly& p) {
    std::vector<Rational> c(static_cast<std::size_t>(p.degree()) + 1, Rational(0));
    for (const auto& [m, a] : p.terms()) c[m.d1] += a;
    return UPoly(std::move(c));
}

std::vector<LatticeIndex> homogeneous_zero_rays(const SymbolPolynomial& p) {
    if (p.is_zero()) throw std::invalid_argument("zero polynomial vanishes everywhere");
    if (!p.is_homogeneous() || !p.is_real()) throw std::invalid_argument("expected a real homogeneous polynomial");
    const int d = p.degree();
    std::vector<LatticeIndex> rays;
    if (d == 0) return rays;
    std::vector<Rational> c(static_cast<std::size_t>(d) + 1, Rational(0));
    for (const auto& [m, a] : p.terms()) c[m.d1] += a.re();
    const UPoly q{c};
    if (q.degree() < d) rays.push_back({1, 0});  // x2 | P
    for (const auto& r : rational_roots(q)) rays.push_back(normalize_ray(r.get_num(), r.get_den()));
    // Counterclockwise from (1,0); all representatives lie in the upper half-plane.
    std::sort(rays.begin(), rays.end(), [](const LatticeIndex& x, const LatticeIndex& y) { return x.k1 * y.k2 - x.k2 * y.k1 > 0; });
    rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
    return rays;
}

std::vector<LatticeIndex> integer_lattice_zeros(const HomogeneousPoly& p) { return homogeneous_zero_rays(p.symbol()); }

namespace {

struct Candidate {
    bool set = false;
    long norm_sq = 0;
    long n1 = 0, n2 = 0;
};

template <typename V>
struct ShellBest {
    Candidate where;
    V value{};
};

template <typename V>
bool better(const V& v, long N, long n1, long n2, const ShellBest<V>& b) {
    if (!b.where.set) return true;
    if (v != b.value) return v < b.value;
    if (N != b.where.norm_sq) return N < b.where.norm_sq;
    return std::pair(n1, n2) < std::pair(b.where.n1, b.where.n2);
}

int shell_of(long N) { return static_cast<int>(std::bit_width(static_cast<unsigned long>(N - 1))) - 1; }

template <typename V, typename Eval>
std::vector<ShellBest<V>> scan_range(long lo, long hi, long R, int nshells, Eval&& eval) {
    std::vector<ShellBest<V>> best(static_cast<std::size_t>(nshells) + 2);
    const long R2 = R * R;
    for (long n1 = lo; n1 <= hi; ++n1) {
        for (long n2 = 0; n2 <= R; ++n2) {
            if (n2 == 0 && n1 <= 0) continue;
            const long N = n1 * n1 + n2 * n2;
            if (N > R2) break;
            V v = eval(n1, n2);
            if (v < 0) v = -v;
            auto& b = best[static_cast<std::size_t>(shell_of(N) + 1)];
            if (better(v, N, n1, n2, b)) {
                b.where = {true, N, n1, n2};
                b.value = v;
            }
        }
    }
    return best;
}

template <typename V, typename Eval>
std::vector<ShellBest<V>> scan_parallel(long R, int nshells, unsigned threads, Eval eval) {
    threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(2 * R + 1)));
    std::vector<std::vector<ShellBest<V>>> parts(threads);
    std::vector<std::thread> pool;
    const long total = 2 * R + 1;
    for (unsigned t = 0; t < threads; ++t) {
        const long lo = -R + total * t / threads;
        const long hi = -R + total * (t + 1) / threads - 1;
        if (threads == 1) {
            parts[t] = scan_range<V>(lo, hi, R, nshells, eval);
            break;
        }
        pool.emplace_back([&, t, lo, hi] { parts[t] = scan_range<V>(lo, hi, R, nshells, eval); });
    }
    for (auto& th : pool) th.join();
    std::vector<ShellBest<V>> merged(static_cast<std::size_t>(nshells) + 2);
    for (const auto& part : parts)
        for (std::size_t i = 0; i < part.size(); ++i)
            if (part[i].where.set && better(part[i].value, part[i].where.norm_sq, part[i].where.n1, part[i].where.n2, merged[i]))
                merged[i] = part[i];
    return merged;
}

Integer to_integer(__int128 v) {
    const bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    Integer hi(static_cast<unsigned long>(u >> 64));
    Integer lo(static_cast<unsigned long>(u & 0xFFFFFFFFFFFFFFFFULL));
    Integer r = (hi << 64) + lo;
    return neg ? Integer(-r) : r;
}

}  // namespace

EmpiricalScan empirical_exponent(const HomogeneousPoly& p, int max_radius, unsigned threads) {
    if (max_radius < 8) throw std::invalid_argument("empirical_exponent needs max_radius >= 8");
    EmpiricalScan scan;
    scan.max_radius = max_radius;
    const long R = max_radius;
    const int nshells = shell_of(R * R);
    const int deg = p.degree();

    Integer den(1);
    for (const auto& [m, c] : p.terms()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<Integer> ci(static_cast<std::size_t>(deg) + 1, Integer(0));  // coefficient of n1^a n2^(p-a)
    double coeff_bits = 0;
    for (const auto& [m, c] : p.terms()) {
        ci[m.d1] = c.get_num() * (den / c.get_den());
    }
    Integer abs_sum(0);
    for (const auto& c : ci) abs_sum += abs(c);
    coeff_bits = std::log2(abs_sum.get_d() + 1.0);
    const bool fast = coeff_bits + deg * std::log2(static_cast<double>(R) + 1.0) < 120.0 &&
                      std::all_of(ci.begin(), ci.end(), [](const Integer& c) { return c.fits_slong_p(); });

    std::vector<std::pair<Integer, Candidate>> mins(static_cast<std::size_t>(nshells) + 2);
    if (fast) {
        std::vector<__int128> c128;
        for (const auto& c : ci) c128.push_back(c.get_si());
        auto eval = [c128, deg](long n1, long n2) {
            // Horner in n1 with n2 powers: sum_a c_a n1^a n2^(p-a)
            __int128 acc = 0;
            __int128 n2pow = 1;
            std::vector<__int128> pw(static_cast<std::size_t>(deg) + 1);
            for (int b = 0; b <= deg; ++b) {
                pw[static_cast<std::size_t>(b)] = n2pow;
                n2pow *= n2;
            }
            for (int a = deg; a >= 0; --a) acc = acc * n1 + c128[static_cast<std::size_t>(a)] * pw[static_cast<std::size_t>(deg - a)];
            return acc;
        };
        auto best = scan_parallel<__int128>(R, nshells, threads, eval);
        for (std::size_t i = 0; i < best.size(); ++i) mins[i] = {to_integer(best[i].value), best[i].where};
    } else {
        auto eval = [ci, deg](long n1, long n2) {
            Integer acc(0);
            for (int a = deg; a >= 0; --a) {
                Integer n2p;
                mpz_ui_pow_ui(n2p.get_mpz_t(), static_cast<unsigned long>(std::labs(n2)), static_cast<unsigned long>(deg - a));
                if (n2 < 0 && (deg - a) % 2 == 1) n2p = -n2p;
                acc = acc * n1 + ci[static_cast<std::size_t>(a)] * n2p;
            }
            return acc;
        };
        auto best = scan_parallel<Integer>(R, nshells, threads, eval);
        for (std::size_t i = 0; i < best.size(); ++i) mins[i] = {best[i].value, best[i].where};
    }

    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < mins.size(); ++i) {
        const auto& [v, where] = mins[i];
        if (!where.set) continue;
        ShellMinimum sm;
        sm.shell = static_cast<int>(i) - 1;
        sm.min_abs = Rational(v, den);
        sm.min_abs.canonicalize();
        sm.argmin = {where.n1, where.n2};
        sm.argmin_norm_sq = where.norm_sq;
        if (v == 0 && !scan.zero_witness) scan.zero_witness = sm.argmin;
        if (v != 0) {
            xs.push_back(std::log(static_cast<double>(where.norm_sq)));
            ys.push_back(log_abs(sm.min_abs));
        }
        scan.shells.push_back(std::move(sm));
    }
    if (!scan.zero_witness && xs.size() >= 2) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            mx += xs[i];
            my += ys[i];
        }
        mx /= static_cast<double>(xs.size());
        my /= static_cast<double>(xs.size());
        double sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxx += (xs[i] - mx) * (xs[i] - mx);
            sxy += (xs[i] - mx) * (ys[i] - my);
        }
        scan.k1_fit = sxy / sxx;
        scan.fit_valid = true;
    }
    return scan;
}

std::string to_string(HypoVerdict v) {
    switch (v) {
        case HypoVerdict::HypoellipticCertified: return "HYPOELLIPTIC_CERTIFIED";
        case HypoVerdict::NotHypoelliptic: return "NOT_HYPOELLIPTIC";
        case HypoVerdict::HypoellipticEmpirical: return "HYPOELLIPTIC_EMPIRICAL";
        case HypoVerdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

HypoReport classify(const HomogeneousPoly& p, const ClassifyOptions& options) {
    HypoReport report;
    report.degree = p.degree();
    report.restricted = restrict_to_line(p);
    report.zero_rays = integer_lattice_zeros(p);
    const Rational half_p = ratio(p.degree(), 2);
    if (options.empirical_radius > 0) report.empirical = empirical_exponent(p, options.empirical_radius, options.threads);

    if (!report.zero_rays.empty()) {
        report.verdict = HypoVerdict::NotHypoelliptic;
        report.branch = "lattice-zero";
        const LatticeIndex nu = report.zero_rays.front();
        report.witness = nu;
        TrigSeries::CoeffMap kernel;
        for (long j = -options.kernel_terms; j <= options.kernel_terms; ++j)
            kernel.emplace(LatticeIndex{j * nu.k1, j * nu.k2}, GaussianRational(1));
        report.kernel_witness = TrigSeries::polynomial(std::move(kernel));
        return report;
    }

    // No lattice zeros: deg Q = p and Q has no rational roots.
    if (count_real_roots(report.restricted) == 0) {
        report.verdict = HypoVerdict::HypoellipticCertified;
        report.branch = "elliptic";
        report.certified_k1 = half_p;
        return report;
    }

    const Factorization fact = factor_over_Q(report.restricted, options.degree_cap);
    if (!fact.complete) {
        report.branch = "degree-cap";
        if (!report.empirical) report.empirical = empirical_exponent(p, 64, options.threads);
        report.verdict = report.empirical->fit_valid ? HypoVerdict::HypoellipticEmpirical : HypoVerdict::Inconclusive;
        return report;
    }

    Rational k1 = half_p;
    for (const auto& f : fact.factors) {
        for (const auto& iv : isolate_real_roots(f.factor)) {
            RootCertificate c;
            c.interval = iv;
            c.multiplicity = f.multiplicity;
            c.minimal_degree = f.factor.degree();
            c.minimal_polynomial = f.factor;
            c.liouville_exponent = c.minimal_degree;
            c.roth_applies = c.minimal_degree >= 2;
            report.max_multiplicity = std::max(report.max_multiplicity, c.multiplicity);
            k1 = std::min(k1, ratio(p.degree() - c.minimal_degree * c.multiplicity, 2));
            report.certificates.push_back(std::move(c));
        }
    }
    std::sort(report.certificates.begin(), report.certificates.end(),
              [](const RootCertificate& a, const RootCertificate& b) { return a.interval.hi < b.interval.hi; });
    report.certified_k1 = k1;
    report.verdict = HypoVerdict::HypoellipticCertified;
    const bool irreducible = fact.factors.size() == 1 && fact.factors.front().multiplicity == 1;
    report.branch = irreducible ? "irreducible" : "algebraic-roots";
    return report;
}

SobolevGain sobolev_gain(const HomogeneousPoly& p, const HypoReport& report, int radius, double tolerance) {
    if (report.verdict != HypoVerdict::HypoellipticCertified)
        throw std::invalid_argument("sobolev_gain needs a certified hypoelliptic verdict, got " + to_string(report.verdict));
    SobolevGain g;
    g.paper_offset = ratio(p.degree(), 2) - report.max_multiplicity;
    g.epsilon_vanishes = p.degree() == 2;
    std::string idx = "m";
    if (g.paper_offset > 0) idx += " + " + to_string(g.paper_offset);
    if (g.paper_offset < 0) idx += " - " + to_string(Rational(-g.paper_offset));
    if (!g.epsilon_vanishes) idx += " - eps";
    g.paper_index = idx;

    const EmpiricalScan scan = report.empirical ? *report.empirical : empirical_exponent(p, radius);
    if (!scan.fit_valid) throw std::logic_error("certified operator produced an invalid empirical scan");
    g.empirical_gain = 2.0 * scan.k1_fit;
    if (report.certified_k1) g.certified_gain = 2 * *report.certified_k1;
    g.discrepancy = std::fabs(g.paper_offset.get_d() - g.empirical_gain) > tolerance;
    std::ostringstream note;
    note << "stated target H^{" << g.paper_index << "}; observed |P(n)| ~ (n^2)^" << scan.k1_fit
         << " on shells up to radius " << scan.max_radius << " (gain " << g.empirical_gain << ")";
    if (g.discrepancy) note << "; stated offset " << to_string(g.paper_offset) << " disagrees with observed gain";
    g.note = note.str();
    return g;
}

}  // namespace torus
