#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "torus/growth.hpp"
#include "torus/series_io.hpp"
#include "torus/space_tag.hpp"

#include <cmath>

using namespace torus;
using namespace torus::testing;

namespace {

const GaussianRational I = GaussianRational::i();

TrigSeries d(long k1, long k2, GaussianRational c = GaussianRational(1)) { return TrigSeries::delta({k1, k2}, std::move(c)); }

}  // namespace

TEST_CASE("gaussian rationals obey the field axioms exactly") {
    Rng rng(11);
    for (int t = 0; t < 300; ++t) {
        const auto a = random_gaussian(rng), b = random_gaussian(rng), c = random_gaussian(rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK((a * b).conj() == a.conj() * b.conj());
        if (!b.is_zero()) CHECK((a / b) * b == a);
    }
    CHECK(I * I == GaussianRational(-1));
    CHECK(i_pow(-3) == I);
}

TEST_CASE("vector space operations") {
    Rng rng(12);
    const TrigSeries u = random_polynomial(rng, 3, 3);
    CHECK(add(u, TrigSeries{}) == u);
    CHECK(shift(d(0, 0), {1, 2}) == d(1, 2));
    CHECK(scale(I, scale(I, d(1, 0))) == d(1, 0, GaussianRational(-1)));
    CHECK(subtract(u, u).is_zero());

    const TrigSeries a = TrigSeries::truncated(Box::make(-4, 4, -4, 4), {});
    const TrigSeries b = TrigSeries::truncated(Box::make(-2, 6, -3, 3), {});
    CHECK(*add(a, b).window() == Box::make(-2, 4, -3, 3));
    CHECK(*shift(a, {1, -1}).window() == Box::make(-3, 5, -5, 3));
}

TEST_CASE("function product is index convolution") {
    CHECK(multiply(TrigSeries::constant(1), d(2, -1)) == d(2, -1));
    CHECK(multiply(d(1, 0), d(0, 5)) == d(1, 5));

    // sin x1 = (e^{ix1} - e^{-ix1}) / (2i)
    const GaussianRational half_over_i = GaussianRational(1) / (GaussianRational(2) * I);
    const TrigSeries sin_x1 = add(d(1, 0, half_over_i), d(-1, 0, -half_over_i));
    const TrigSeries p = multiply(sin_x1, TrigSeries::constant(1));
    CHECK(p.coeff({1, 0}) == GaussianRational(Rational(0), ratio(-1, 2)));
    CHECK(p.coeff({-1, 0}) == GaussianRational(Rational(0), ratio(1, 2)));
    CHECK(p.nnz() == 2);

    Rng rng(13);
    for (int t = 0; t < 20; ++t) {
        const TrigSeries a = random_polynomial(rng, 2, 1), b = random_polynomial(rng, 2, 3);
        const TrigSeries ab = multiply(a, b);
        for (long k1 = -4; k1 <= 4; ++k1)
            for (long k2 = -4; k2 <= 4; ++k2) {
                GaussianRational s;
                for (const auto& [n, c] : a.coeffs()) s += c * b.coeff({k1 - n.k1, k2 - n.k2});
                CHECK(ab.coeff({k1, k2}) == s);
            }
        // e^{inx} u = shift(u, n)
        CHECK(multiply(d(1, -2), b) == shift(b, {1, -2}));
    }

    const TrigSeries window = TrigSeries::truncated(Box::centered(5, 5), {});
    // shrinks by the support radius of the polynomial factor
    CHECK(*multiply(d(2, 1), window).window() == Box::make(-3, 3, -4, 4));
    CHECK(*multiply(TrigSeries::polynomial({{{2, 1}, 1}, {{-1, 0}, 1}}), window).window() == Box::make(-3, 3, -4, 4));
    CHECK_THROWS_AS(multiply(window, window), std::invalid_argument);
}

TEST_CASE("coefficientwise product") {
    Rng rng(14);
    const Box box = Box::centered(1, 1);
    const TrigSeries v = TrigSeries::truncated(box, random_coeffs(rng, box, 1.0));
    TrigSeries::CoeffMap ones;
    for (long a = -1; a <= 1; ++a)
        for (long b = -1; b <= 1; ++b) ones[{a, b}] = 1;
    CHECK(mul_coeffwise(v, TrigSeries::truncated(box, ones)) == v);
    CHECK(mul_coeffwise(d(1, 1), d(2, 2)).is_zero());
    const TrigSeries h = TrigSeries::truncated(box, random_coeffs(rng, box, 1.0));
    const TrigSeries vh = mul_coeffwise(v, h);
    for (long a = -1; a <= 1; ++a)
        for (long b = -1; b <= 1; ++b) CHECK(vh.coeff({a, b}) == v.coeff({a, b}) * h.coeff({a, b}));
}

TEST_CASE("pairing") {
    CHECK(pairing(d(1, 0), d(1, 0)) == GaussianRational(1));
    CHECK(pairing(d(1, 0), d(0, 1)).is_zero());
    Rng rng(15);
    for (int t = 0; t < 50; ++t) {
        const TrigSeries u = random_polynomial(rng, 2, 2), v = random_polynomial(rng, 2, 2);
        CHECK(pairing(u, v) == pairing(v, u).conj());
        const GaussianRational uu = pairing(u, u);
        CHECK(uu.is_real());
        CHECK(uu.re() >= 0);
        CHECK((uu.is_zero() == u.is_zero()));
        CHECK(sobolev_norm_sq(u, 0).lo == uu.re());
    }
    const TrigSeries w = TrigSeries::truncated(Box::centered(3, 3), {});
    CHECK_THROWS_AS(pairing(w, w), std::invalid_argument);
}

TEST_CASE("partial pairings") {
    // <u, t>_{x1} = sum_n (sum_m u_{m,n} conj(t_{-m})) e^{inx2}
    CHECK(partial_pairing_x1(d(0, 3), TrigSeries::constant(1)) == d(0, 3));
    CHECK(partial_pairing_x1(d(1, 3), d(1, 0)).is_zero());
    CHECK(partial_pairing_x1(d(-1, 3), d(1, 0)) == d(0, 3));
    CHECK(partial_pairing_x2(d(2, -1), d(0, 1)) == d(2, 0));

    Rng rng(16);
    for (int t = 0; t < 30; ++t) {
        const TrigSeries u = random_polynomial(rng, 3, 3);
        const TrigSeries tt = random_polynomial(rng, 2, 0);
        const TrigSeries got = partial_pairing_x1(u, tt);
        for (long n = -3; n <= 3; ++n) {
            GaussianRational s;
            for (long m = -3; m <= 3; ++m) s += u.coeff({m, n}) * tt.coeff({-m, 0}).conj();
            CHECK(got.coeff({0, n}) == s);
        }
        // linear in u, conjugate-linear in t
        const GaussianRational c = random_gaussian(rng);
        const TrigSeries v = random_polynomial(rng, 3, 3);
        CHECK(partial_pairing_x1(add(scale(c, u), v), tt) == add(scale(c, got), partial_pairing_x1(v, tt)));
        CHECK(partial_pairing_x1(u, scale(c, tt)) == scale(c.conj(), got));

        const TrigSeries e = add(u, TrigSeries{});
        const TrigSeries even = parity_project(TrigSeries::truncated(Box::centered(3, 3), e.coeffs()), 1, Parity::Even);
        CHECK(partial_pairing_x1(even, d(1, 0)) == partial_pairing_x1(even, d(-1, 0)));
    }
    CHECK_THROWS_AS(partial_pairing_x1(d(0, 0), d(0, 1)), std::invalid_argument);
}

TEST_CASE("parity projection") {
    const TrigSeries cos_like = add(d(1, 0), d(-1, 0));
    CHECK(parity_project(cos_like, 1, Parity::Even) == cos_like);
    CHECK(parity_project(cos_like, 1, Parity::Odd).is_zero());
    Rng rng(17);
    for (int t = 0; t < 30; ++t) {
        const Box box = Box::centered(3, 2);
        const TrigSeries u = TrigSeries::truncated(box, random_coeffs(rng, box));
        const TrigSeries e = parity_project(u, 1, Parity::Even);
        const TrigSeries o = parity_project(u, 1, Parity::Odd);
        CHECK(add(e, o) == u);
        CHECK(parity_project(e, 1, Parity::Even) == e);
        CHECK(has_parity(e, 1, Parity::Even));
        CHECK(has_parity(o, 1, Parity::Odd));
        CHECK(add(parity_project(u, 2, Parity::Even), parity_project(u, 2, Parity::Odd)) == u);
    }
    CHECK_THROWS_AS(parity_project(TrigSeries::truncated(Box::make(-1, 2, -1, 1), {}), 1, Parity::Even), std::invalid_argument);
}

TEST_CASE("sobolev norms") {
    for (long m = -3; m <= 6; ++m) CHECK(sobolev_norm_sq(d(1, 0), m).lo == pow_int(Rational(2), m));
    CHECK(sobolev_norm_sq(TrigSeries{}, 5).lo == 0);
    const auto two = sobolev_norm_sq(add(d(1, 0), d(0, 2)), 1);
    CHECK(two.exact());
    CHECK(two.lo == 7);
    const auto half = sobolev_norm_sq(d(1, 0), ratio(1, 2), 64);
    CHECK_FALSE(half.exact());
    CHECK(half.lo * half.lo <= 2);
    CHECK(half.hi * half.hi >= 2);
    CHECK((half.hi - half.lo) < Rational(1, 1000000));
    // perfect squares stay exact: (1 + 8)^(1/2) = 3
    const auto three = sobolev_norm_sq(d(2, 2), ratio(1, 2));
    CHECK(three.exact());
    CHECK(three.lo == 3);
}

TEST_CASE("growth classification") {
    SUBCASE("finite support") {
        CHECK(classify_growth(d(3, 1)).tag == SpaceTag::hinf());
        const Box box = Box::centered(12, 12);
        CHECK(classify_growth(TrigSeries::truncated(box, {{{1, 1}, 1}})).tag == SpaceTag::hinf());
    }
    SUBCASE("polynomial decay (1+k^2)^-3") {
        const Box box = Box::centered(20, 20);
        TrigSeries::CoeffMap m;
        for (long a = -20; a <= 20; ++a)
            for (long b = -20; b <= 20; ++b) m[{a, b}] = pow_int(Rational(1 + a * a + b * b), -3);
        const GrowthReport g = classify_growth(TrigSeries::truncated(box, m));
        REQUIRE(g.tag);
        CHECK(g.model == "polynomial");
        CHECK(g.tag->kind == SpaceTag::Kind::Hm);
        // |u| ~ (1+s^2)^-3 on the axis shells
        CHECK(std::fabs(-g.exponent - 3.0) <= 0.5);
        CHECK(g.tag->m >= 4);
        CHECK(g.tag->m <= 6);
        CHECK(g.heuristic);
    }
    SUBCASE("factorial growth in k1") {
        const Box box = Box::centered(20, 4);
        TrigSeries::CoeffMap m;
        for (long a = -20; a <= 20; ++a)
            for (long b = -4; b <= 4; ++b) m[{a, b}] = Rational(factorial(static_cast<unsigned long>(std::labs(a))));
        // exact ratio oracle
        for (long a = 0; a < 20; ++a) CHECK(m[{a + 1, 0}].re() / m[{a, 0}].re() == a + 1);
        GrowthOptions opt;
        opt.min_shells = 4;
        const GrowthReport g = classify_growth(TrigSeries::truncated(box, m), opt);
        REQUIRE(g.tag);
        CHECK(*g.tag == SpaceTag::l1_fact_dual(1));
    }
    SUBCASE("too few shells") {
        CHECK_THROWS_AS(classify_growth(TrigSeries::truncated(Box::centered(3, 3), {{{1, 1}, 1}})), std::invalid_argument);
    }
}

TEST_CASE("duality on space tags") {
    const std::vector<SpaceTag> tags = {SpaceTag::hm(3),         SpaceTag::hm(ratio(-5, 2)), SpaceTag::hinf(),
                                        SpaceTag::hminus_inf(),  SpaceTag::e0(),             SpaceTag::e0_dual(),
                                        SpaceTag::l1_fact(1),    SpaceTag::l1_fact(2),       SpaceTag::l1_fact_dual(1),
                                        SpaceTag::l1_fact_dual(2)};
    for (const auto& t : tags) {
        CHECK(dual_space(dual_space(t)) == t);
        CHECK(parse_space_tag(t.str()) == t);
    }
    CHECK(dual_space(SpaceTag::hm(3)) == SpaceTag::hm(-3));
    CHECK(dual_space(SpaceTag::e0()) == SpaceTag::e0_dual());
    CHECK(dual_space(SpaceTag::hinf()) == SpaceTag::hminus_inf());
    CHECK(dual_space(SpaceTag::l1_fact(2)) == SpaceTag::l1_fact_dual(2));
}

TEST_CASE("series text and structured formats") {
    Rng rng(18);
    for (int t = 0; t < 20; ++t) {
        const Box box = Box::make(-uniform(rng, 0, 3), uniform(rng, 0, 3), -uniform(rng, 0, 3), uniform(rng, 0, 3));
        const TrigSeries u = TrigSeries::truncated(box, random_coeffs(rng, box));
        const std::string s = write_series_text(u);
        CHECK(parse_series_text(s) == u);
        CHECK(write_series_text(parse_series_text(s)) == s);
        CHECK(series_from_json(series_to_json(u)) == u);
    }
    const TrigSeries p = parse_series_text("# comment\nbox all\n\n1 0 2/4 0\n-1 0 1/2 -3\n");
    CHECK(p.is_polynomial());
    CHECK(p.coeff({1, 0}) == GaussianRational(ratio(1, 2)));
    CHECK(write_series_text(p) == "box all\n-1 0 1/2 -3/1\n1 0 1/2 0/1\n");

    auto error_at = [](const std::string& text) -> std::pair<int, int> {
        try {
            parse_series_text(text);
        } catch (const ParseError& e) {
            return {e.line(), e.column()};
        }
        return {0, 0};
    };
    CHECK(error_at("box 0 1 0 1\n0 0 1/x 0\n") == std::pair{2, 5});
    CHECK(error_at("box 0 1 0 1\n5 0 1 0\n").first == 2);
    CHECK(error_at("0 0 1 0\n").first == 1);
    CHECK(error_at("box 0 1 0 1\n0 0 1/0 0\n").first == 2);
    CHECK(error_at("box 0 1 0 1\n0 0 1 0\n0 0 2 0\n").first == 3);
}
