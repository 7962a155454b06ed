#pragma once

#include "torus/envelope.hpp"
#include "torus/torus_operator.hpp"
#include "torus/trig_series.hpp"

#include <random>

namespace torus::testing {

using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

inline Rational random_rational(Rng& rng, long num = 9, long den = 6) {
    return ratio(uniform(rng, -num, num), uniform(rng, 1, den));
}

inline GaussianRational random_gaussian(Rng& rng) { return {random_rational(rng), random_rational(rng)}; }

inline GaussianRational random_nonzero_gaussian(Rng& rng) {
    for (;;) {
        GaussianRational z = random_gaussian(rng);
        if (!z.is_zero()) return z;
    }
}

/// Roughly `density` of the points of `support` get a random nonzero coefficient.
inline TrigSeries::CoeffMap random_coeffs(Rng& rng, const Box& support, double density = 0.5) {
    TrigSeries::CoeffMap m;
    std::bernoulli_distribution keep(density);
    for (long a = support.n1_min; a <= support.n1_max; ++a)
        for (long b = support.n2_min; b <= support.n2_max; ++b)
            if (keep(rng)) m[{a, b}] = random_nonzero_gaussian(rng);
    return m;
}

inline TrigSeries random_polynomial(Rng& rng, long r1, long r2, double density = 0.5) {
    return TrigSeries::polynomial(random_coeffs(rng, Box::centered(r1, r2), density));
}

/// Even in x1, f_{0,0} = 0, supported in [-r,r]^2, truncated to `window`.
inline TrigSeries random_even_rhs(Rng& rng, long r, const Box& window) {
    TrigSeries::CoeffMap m;
    for (long a = 0; a <= r; ++a)
        for (long b = -r; b <= r; ++b) {
            if ((a == 0 && b == 0) || uniform(rng, 0, 2) == 0) continue;
            const GaussianRational c = random_nonzero_gaussian(rng);
            m[{a, b}] = c;
            m[{-a, b}] = c;
        }
    return TrigSeries::truncated(window, std::move(m));
}

/// (d_{x1} + i sin x1 d_{x2}) u at k, written out by hand:
/// i k1 u_k + (i k2 / 2) (u_{k1-1,k2} - u_{k1+1,k2}).
inline GaussianRational mizohata_at(const TrigSeries& u, const LatticeIndex& k) {
    const GaussianRational i = GaussianRational::i();
    GaussianRational v = i * GaussianRational(k.k1) * u.coeff(k);
    v += i * GaussianRational(ratio(k.k2, 2)) * (u.coeff({k.k1 - 1, k.k2}) - u.coeff({k.k1 + 1, k.k2}));
    return v;
}

inline TorusOperator random_operator(Rng& rng, unsigned max_degree = 3, long radius = 2) {
    std::vector<AlphaTerm> terms;
    const long nterms = uniform(rng, 1, 4);
    for (long t = 0; t < nterms; ++t) {
        const unsigned deg = static_cast<unsigned>(uniform(rng, 0, max_degree));
        const unsigned a1 = static_cast<unsigned>(uniform(rng, 0, deg));
        terms.push_back({a1, deg - a1, random_polynomial(rng, uniform(rng, 0, radius), uniform(rng, 0, radius), 0.4)});
    }
    return TorusOperator::from_alpha_form(terms);
}

inline AtomEnvelope random_atom(Rng& rng) {
    auto small = [&] { return ratio(uniform(rng, -4, 4), uniform(rng, 1, 2)); };
    return {small(), small(), small(), small(), small()};
}

inline EnvelopeExpr random_expr(Rng& rng, int depth = 2) {
    if (depth == 0 || uniform(rng, 0, 2) == 0) return EnvelopeExpr::atom(random_atom(rng));
    std::vector<EnvelopeExpr> c;
    const long n = uniform(rng, 2, 3);
    for (long i = 0; i < n; ++i) c.push_back(random_expr(rng, depth - 1));
    return uniform(rng, 0, 1) ? EnvelopeExpr::max(std::move(c)) : EnvelopeExpr::min(std::move(c));
}

}  // namespace torus::testing
