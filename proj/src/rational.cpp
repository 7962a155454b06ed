#include "torus/rational.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>

namespace torus {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    const auto slash = body.find('/');
    std::string_view num = body.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
        throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    Integer n(std::string(num), 10);
    Integer d(std::string(den), 10);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational q(negative ? Integer(-n) : n, d);
    q.canonicalize();
    return q;
}

std::string to_pair_string(const Rational& q) {
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string to_string(const Rational& q) { return q.get_str(); }

double log_abs(const Integer& z) {
    if (z == 0) throw std::domain_error("log of zero");
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

double log_abs(const Rational& q) { return log_abs(q.get_num()) - log_abs(q.get_den()); }

Integer factorial(unsigned long n) {
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

Rational pow_int(const Rational& q, long e) {
    Integer num, den;
    const unsigned long ue = static_cast<unsigned long>(e < 0 ? -e : e);
    mpz_pow_ui(num.get_mpz_t(), q.get_num().get_mpz_t(), ue);
    mpz_pow_ui(den.get_mpz_t(), q.get_den().get_mpz_t(), ue);
    if (e < 0) {
        if (num == 0) throw std::domain_error("negative power of zero");
        std::swap(num, den);
    }
    Rational r(num, den);
    r.canonicalize();
    return r;
}

RationalInterval root_enclosure(const Rational& x, unsigned long root, unsigned bits) {
    if (x < 0) throw std::domain_error("root of negative rational");
    if (root == 0) throw std::invalid_argument("zero-th root");
    if (root == 1 || x == 0) return {x, x};
    // x^(1/r) = (n d^(r-1))^(1/r) / d
    Integer n = x.get_num();
    const Integer& d = x.get_den();
    Integer dpow;
    mpz_pow_ui(dpow.get_mpz_t(), d.get_mpz_t(), root - 1);
    n *= dpow;
    Integer exact_root;
    if (mpz_root(exact_root.get_mpz_t(), n.get_mpz_t(), root) != 0) {
        Rational r(exact_root, d);
        r.canonicalize();
        return {r, r};
    }
    Integer scaled = n;
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), static_cast<mp_bitcnt_t>(bits) * root);
    Integer r;
    mpz_root(r.get_mpz_t(), scaled.get_mpz_t(), root);
    Integer scale = d;
    mpz_mul_2exp(scale.get_mpz_t(), scale.get_mpz_t(), bits);
    Rational lo(r, scale), hi(Integer(r + 1), scale);
    lo.canonicalize();
    hi.canonicalize();
    return {lo, hi};
}

Rational sqrt_upper(const Rational& x, unsigned bits) { return root_enclosure(x, 2, bits).hi; }

std::string to_decimal(const Rational& q, unsigned digits) {
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
    Integer scaled = q.get_num() * scale;
    Integer t;
    mpz_tdiv_q(t.get_mpz_t(), scaled.get_mpz_t(), q.get_den().get_mpz_t());
    const bool negative = t < 0 || (t == 0 && q < 0);
    Integer mag = abs(t);
    std::string s = mag.get_str();
    if (digits > 0) {
        if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
        s.insert(s.size() - digits, ".");
    }
    return negative ? "-" + s : s;
}

Rational approximate(double x, long max_den) {
    if (!std::isfinite(x)) throw std::domain_error("non-finite value");
    // continued-fraction convergents
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double v = x;
    for (int iter = 0; iter < 64; ++iter) {
        const double a = std::floor(v);
        if (std::fabs(a) > 1e15) break;
        const long ai = static_cast<long>(a);
        const long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        const double frac = v - a;
        if (frac < 1e-12) break;
        v = 1.0 / frac;
    }
    if (q1 == 0) return Rational(static_cast<long>(std::llround(x)));
    Rational r(p1, q1);
    r.canonicalize();
    return r;
}

}  // namespace torus
