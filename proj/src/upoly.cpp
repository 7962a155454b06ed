#include "torus/upoly.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

namespace torus {

UPoly::UPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

UPoly UPoly::monomial(Rational c, int degree) {
    std::vector<Rational> v(static_cast<std::size_t>(degree) + 1, Rational(0));
    v.back() = std::move(c);
    return UPoly(std::move(v));
}

UPoly UPoly::from_ints(std::initializer_list<long> ascending) {
    std::vector<Rational> v;
    for (long a : ascending) v.emplace_back(a);
    return UPoly(std::move(v));
}

void UPoly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational UPoly::eval(const Rational& x) const {
    Rational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

int UPoly::sign_at(const Rational& x) const { return sgn(eval(x)); }

UPoly UPoly::derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
    return UPoly(std::move(d));
}

UPoly UPoly::monic() const {
    if (is_zero()) return {};
    return (Rational(1) / lead()) * (*this);
}

UPoly UPoly::primitive() const {
    if (is_zero()) return {};
    Integer den_lcm(1);
    for (const auto& a : c_) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), a.get_den().get_mpz_t());
    std::vector<Integer> ints;
    Integer g(0);
    for (const auto& a : c_) {
        Integer v = a.get_num() * (den_lcm / a.get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        ints.push_back(v);
    }
    if (ints.back() < 0) g = -g;
    std::vector<Rational> out;
    out.reserve(ints.size());
    for (auto& v : ints) out.emplace_back(Integer(v / g));
    return UPoly(std::move(out));
}

bool UPoly::has_integer_coeffs() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& a) { return a.get_den() == 1; });
}

UPoly operator+(const UPoly& a, const UPoly& b) {
    std::vector<Rational> v(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) v[i] += b.c_[i];
    return UPoly(std::move(v));
}

UPoly operator-(const UPoly& a, const UPoly& b) { return a + Rational(-1) * b; }

UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> v(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
    return UPoly(std::move(v));
}

UPoly operator*(const Rational& s, const UPoly& a) {
    std::vector<Rational> v = a.c_;
    for (auto& x : v) x *= s;
    return UPoly(std::move(v));
}

std::string UPoly::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::string s;
    for (int i = degree(); i >= 0; --i) {
        const Rational& a = c_[static_cast<std::size_t>(i)];
        if (a == 0) continue;
        const Rational mag = abs(a);
        if (s.empty())
            s += a < 0 ? "-" : "";
        else
            s += a < 0 ? " - " : " + ";
        const bool unit = mag == 1 && i > 0;
        if (!unit) s += to_string(mag);
        if (i > 0) {
            if (!unit) s += "*";
            s += var;
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s;
}

DivMod divmod(const UPoly& a, const UPoly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    std::vector<Rational> r = a.coeffs();
    const int db = b.degree();
    if (a.degree() < db) return {UPoly(), a};
    std::vector<Rational> q(static_cast<std::size_t>(a.degree() - db) + 1, Rational(0));
    for (int i = a.degree(); i >= db; --i) {
        const Rational f = r[static_cast<std::size_t>(i)] / b.lead();
        q[static_cast<std::size_t>(i - db)] = f;
        if (f == 0) continue;
        for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(i - db + j)] -= f * b.coeffs()[static_cast<std::size_t>(j)];
    }
    return {UPoly(std::move(q)), UPoly(std::move(r))};
}

UPoly gcd(const UPoly& a, const UPoly& b) {
    UPoly x = a, y = b;
    while (!y.is_zero()) {
        UPoly r = divmod(x, y).remainder;
        x = std::move(y);
        y = std::move(r);
    }
    return x.monic();
}

bool divides(const UPoly& d, const UPoly& a) { return divmod(a, d).remainder.is_zero(); }

std::vector<SquarefreeFactor> squarefree_decomposition(const UPoly& q) {
    if (q.is_zero()) throw std::invalid_argument("squarefree decomposition of zero");
    std::vector<SquarefreeFactor> out;
    if (q.degree() == 0) return out;
    const UPoly f = q.monic();
    const UPoly fp = f.derivative();
    const UPoly b = gcd(f, fp);
    UPoly c = divmod(f, b).quotient;
    UPoly d = divmod(fp, b).quotient - c.derivative();
    for (int i = 1; c.degree() > 0; ++i) {
        const UPoly a = gcd(c, d);
        if (a.degree() > 0) out.push_back({a, i});
        c = divmod(c, a).quotient;
        d = divmod(d, a).quotient - c.derivative();
    }
    return out;
}

UPoly squarefree_part(const UPoly& q) {
    if (q.degree() <= 0) return q.monic();
    return divmod(q.monic(), gcd(q, q.derivative())).quotient.monic();
}

namespace {

// Positive divisors of |n| (n != 0) by trial division.
std::vector<Integer> divisors(const Integer& n) {
    Integer m = abs(n);
    std::vector<std::pair<Integer, unsigned>> primes;
    for (Integer p = 2; p * p <= m; p += (p == 2 ? 1 : 2)) {
        unsigned e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (e) primes.emplace_back(p, e);
    }
    if (m > 1) primes.emplace_back(m, 1);
    std::vector<Integer> out{Integer(1)};
    for (const auto& [p, e] : primes) {
        const std::size_t base = out.size();
        Integer pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::vector<Rational> rational_roots(const UPoly& q) {
    if (q.is_zero()) throw std::invalid_argument("rational roots of the zero polynomial");
    std::set<Rational> roots;
    UPoly f = q.primitive();
    if (f.degree() <= 0) return {};
    // strip x^k
    int shift = 0;
    while (f.coeffs()[static_cast<std::size_t>(shift)] == 0) ++shift;
    if (shift > 0) {
        roots.insert(Rational(0));
        f = UPoly(std::vector<Rational>(f.coeffs().begin() + shift, f.coeffs().end()));
    }
    if (f.degree() >= 1) {
        const auto ps = divisors(f.coeffs().front().get_num());
        const auto qs = divisors(f.lead().get_num());
        for (const auto& p : ps)
            for (const auto& d : qs)
                for (int sign : {1, -1}) {
                    Rational cand(Integer(sign * p), d);
                    cand.canonicalize();
                    if (!roots.count(cand) && f.eval(cand) == 0) roots.insert(cand);
                }
    }
    return {roots.begin(), roots.end()};
}

std::vector<UPoly> sturm_sequence(const UPoly& q) {
    std::vector<UPoly> seq;
    if (q.is_zero()) return seq;
    seq.push_back(q);
    seq.push_back(q.derivative());
    while (!seq.back().is_zero()) {
        UPoly r = divmod(seq[seq.size() - 2], seq.back()).remainder;
        if (r.is_zero()) break;
        seq.push_back(Rational(-1) * r);
    }
    if (seq.back().is_zero()) seq.pop_back();
    return seq;
}

namespace {

int sign_variations(const std::vector<UPoly>& seq, const Rational& x) {
    int changes = 0, last = 0;
    for (const auto& p : seq) {
        const int s = p.sign_at(x);
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

}  // namespace

int count_real_roots(const std::vector<UPoly>& sturm, const Rational& a, const Rational& b) {
    return sign_variations(sturm, a) - sign_variations(sturm, b);
}

Rational root_bound(const UPoly& q) {
    if (q.degree() <= 0) return Rational(1);
    Rational m(0);
    for (int i = 0; i < q.degree(); ++i) m = std::max(m, Rational(abs(q.coeffs()[static_cast<std::size_t>(i)] / q.lead())));
    return m + 1;
}

int count_real_roots(const UPoly& q) {
    const UPoly s = squarefree_part(q);
    if (s.degree() <= 0) return 0;
    const Rational b = root_bound(s);
    return count_real_roots(sturm_sequence(s), -b, b);
}

std::vector<IsolatingInterval> isolate_real_roots(const UPoly& q, const Rational& max_width) {
    std::vector<IsolatingInterval> out;
    const UPoly s = squarefree_part(q);
    if (s.degree() <= 0) return out;
    const auto seq = sturm_sequence(s);
    const Rational b = root_bound(s);
    std::vector<IsolatingInterval> work{{-b, b}};
    while (!work.empty()) {
        IsolatingInterval iv = work.back();
        work.pop_back();
        const int n = count_real_roots(seq, iv.lo, iv.hi);
        if (n == 0) continue;
        if (n > 1) {
            const Rational mid = (iv.lo + iv.hi) / 2;
            work.push_back({iv.lo, mid});
            work.push_back({mid, iv.hi});
            continue;
        }
        while (iv.lo != iv.hi && iv.hi - iv.lo > max_width) {
            if (s.sign_at(iv.hi) == 0) {
                iv.lo = iv.hi;
                break;
            }
            const Rational mid = (iv.lo + iv.hi) / 2;
            if (count_real_roots(seq, iv.lo, mid) == 1)
                iv.hi = mid;
            else
                iv.lo = mid;
        }
        if (iv.lo != iv.hi && s.sign_at(iv.hi) == 0) iv.lo = iv.hi;
        out.push_back(iv);
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.hi < y.hi; });
    return out;
}

namespace {

UPoly newton_interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& vs) {
    const std::size_t n = xs.size();
    std::vector<Rational> dd = vs;
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = n - 1; i >= j; --i) {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
            if (i == j) break;
        }
    UPoly result;
    UPoly basis = UPoly::from_ints({1});
    for (std::size_t j = 0; j < n; ++j) {
        result = result + dd[j] * basis;
        basis = basis * UPoly(std::vector<Rational>{-xs[j], Rational(1)});
    }
    return result;
}

}  // namespace

std::optional<UPoly> kronecker_find_factor(const UPoly& f) {
    const int n = f.degree();
    if (n <= 1) return std::nullopt;
    // degree-one factors come from rational roots
    for (const auto& r : rational_roots(f))
        return UPoly(std::vector<Rational>{Rational(-r.get_num()), Rational(r.get_den())});

    const Integer lead = f.lead().get_num();
    const Integer constant = f.coeffs().front().get_num();
    for (int d = 2; d <= n / 2; ++d) {
        // candidate points: pick the d+1 values with the fewest divisors
        struct Point {
            Rational x;
            std::vector<Integer> divs;
        };
        std::vector<Point> cands;
        for (long x = 0, step = 0; step < 4 * n + 20; ++step) {
            x = (step % 2 == 0) ? step / 2 : -(step + 1) / 2;
            const Rational v = f.eval(Rational(x));
            cands.push_back({Rational(x), divisors(v.get_num())});
        }
        std::stable_sort(cands.begin(), cands.end(), [](const Point& a, const Point& b) { return a.divs.size() < b.divs.size(); });
        cands.resize(static_cast<std::size_t>(d) + 2);
        const Point check = cands.back();
        cands.pop_back();
        const Integer check_val = f.eval(check.x).get_num();

        std::vector<Rational> xs, vs(static_cast<std::size_t>(d) + 1);
        for (const auto& c : cands) xs.push_back(c.x);
        std::optional<UPoly> found;
        std::function<void(std::size_t)> search = [&](std::size_t i) {
            if (found) return;
            if (i == cands.size()) {
                UPoly g = newton_interpolate(xs, vs);
                if (g.degree() != d || !g.has_integer_coeffs()) return;
                const Integer gl = g.lead().get_num();
                if (lead % gl != 0) return;
                const Integer g0 = g.coeffs().front().get_num();
                if (g0 == 0 || constant % g0 != 0) return;
                const Integer gc = g.eval(check.x).get_num();
                if (gc == 0 || check_val % gc != 0) return;
                if (divides(g, f)) found = g.primitive();
                return;
            }
            for (const auto& dv : cands[i].divs)
                for (int sign : {1, -1}) {
                    if (i == 0 && sign < 0) continue;  // g and -g are the same factor
                    vs[i] = Rational(Integer(sign * dv));
                    search(i + 1);
                    if (found) return;
                }
        };
        search(0);
        if (found) return found;
    }
    return std::nullopt;
}

Factorization factor_over_Q(const UPoly& q, int degree_cap) {
    if (q.is_zero()) throw std::invalid_argument("factorization of the zero polynomial");
    Factorization out;
    out.unit = q.lead();
    std::vector<SquarefreeFactor> result;
    for (const auto& sf : squarefree_decomposition(q)) {
        std::vector<UPoly> pending{sf.factor.primitive()};
        while (!pending.empty()) {
            UPoly f = pending.back();
            pending.pop_back();
            if (f.degree() <= 0) continue;
            if (f.degree() > degree_cap) {
                out.complete = false;
                result.push_back({f, sf.multiplicity});
                continue;
            }
            auto g = kronecker_find_factor(f);
            if (!g) {
                result.push_back({f, sf.multiplicity});
                continue;
            }
            result.push_back({*g, sf.multiplicity});  // minimal-degree factor is irreducible
            pending.push_back(divmod(f, *g).quotient.primitive());
        }
    }
    // unit such that q = unit * prod f^m exactly
    UPoly prod = UPoly::from_ints({1});
    for (const auto& f : result)
        for (int i = 0; i < f.multiplicity; ++i) prod = prod * f.factor;
    out.unit = q.lead() / prod.lead();
    std::sort(result.begin(), result.end(), [](const SquarefreeFactor& a, const SquarefreeFactor& b) {
        if (a.factor.degree() != b.factor.degree()) return a.factor.degree() < b.factor.degree();
        return a.factor.coeffs() < b.factor.coeffs();
    });
    out.factors = std::move(result);
    return out;
}

IrreducibilityResult irreducible_over_Q(const UPoly& q, int degree_cap) {
    if (q.degree() < 1) throw std::invalid_argument("irreducibility needs degree >= 1");
    IrreducibilityResult r;
    if (q.degree() == 1) {
        r.verdict = Irreducibility::Irreducible;
        return r;
    }
    const UPoly f = q.primitive();
    // repeated factors are a cheap witness
    const UPoly g = gcd(f, f.derivative());
    if (g.degree() > 0) {
        r.verdict = Irreducibility::Reducible;
        r.factor = g.primitive();
        return r;
    }
    if (f.degree() > degree_cap) return r;
    if (auto factor = kronecker_find_factor(f)) {
        r.verdict = Irreducibility::Reducible;
        r.factor = *factor;
    } else {
        r.verdict = Irreducibility::Irreducible;
    }
    return r;
}

}  // namespace torus
