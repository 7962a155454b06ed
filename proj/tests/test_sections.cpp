#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "torus/errors.hpp"
#include "torus/sections.hpp"
#include "torus/series_io.hpp"
#include "torus/symbol.hpp"

#include <cmath>

using namespace torus;
using namespace torus::testing;

namespace {

EnvelopeExpr env(const char* text) { return parse_envelope(text); }
Section sec(const char* text) { return {env(text)}; }

AtomEnvelope atom(Rational a, Rational b1 = 0, Rational b2 = 0, Rational c1 = 0, Rational c2 = 0) {
    return {std::move(a), std::move(b1), std::move(b2), std::move(c1), std::move(c2)};
}

/// Exact pointwise equality of two limit-free expressions on [-r, r]^2.
bool pointwise_equal(const EnvelopeExpr& x, const EnvelopeExpr& y, long r) {
    bool ok = true;
    Box::centered(r, r).for_each([&](const LatticeIndex& k) {
        if (ok && compare(x.eval(k), y.eval(k)) != 0) ok = false;
    });
    return ok;
}

/// max over the max-norm shell s of log e1(k) - log e2(k).
double shell_log_ratio(const AtomEnvelope& e1, const AtomEnvelope& e2, long s) {
    double m = -1e300;
    Box::centered(s, s).for_each([&](const LatticeIndex& k) {
        if (std::max(std::labs(k.k1), std::labs(k.k2)) != s) return;
        m = std::max(m, EnvelopeValue(e1, k).log_value() - EnvelopeValue(e2, k).log_value());
    });
    return m;
}

TorusOperator laplacian() { return TorusOperator::from_symbol(parse_symbol("-1 2 0, -1 0 2")); }

}  // namespace

TEST_CASE("exact envelope values") {
    const AtomEnvelope e1 = atom(0, 1, 0), e2 = atom(0, 0, 1);
    CHECK(compare(EnvelopeValue(e1, {2, 3}), EnvelopeValue(e2, {3, 2})) == 0);
    CHECK(compare(EnvelopeValue(e1, {2, 3}), EnvelopeValue(e2, {2, 3})) < 0);
    // (1+k.k)^1 at (2,1) is 6 = 3! = |k1|! at (3,0)
    CHECK(compare(EnvelopeValue(atom(1), {2, 1}), EnvelopeValue(atom(0, 0, 0, 1), {3, 0})) == 0);
    // 2^{1/2} against e^b with b 1e-19 below log(2)/2: beyond double precision
    const Rational b(Integer("3465735902799726547"), Integer("10000000000000000000"));
    const EnvelopeValue root2(atom(ratio(1, 2)), {1, 0});
    const EnvelopeValue eb(atom(0, b), {1, 0});
    CHECK(std::fabs(root2.log_value() - eb.log_value()) < 1e-15);
    CHECK(compare(eb, root2) < 0);
    CHECK(compare(root2, eb) > 0);
    CHECK(EnvelopeValue(atom(5), {0, 0}) == EnvelopeValue(atom(0, 0, 0, -3, 2), {1, 1}));
}

TEST_CASE("atom order") {
    CHECK(atom_leq(atom(0), atom(1)));
    CHECK_FALSE(atom_leq(atom(1), atom(0)));
    CHECK_FALSE(atom_leq(atom(0, 1, 0), atom(0, 0, 1)));
    CHECK_FALSE(atom_leq(atom(0, 0, 1), atom(0, 1, 0)));
    const AtomEnvelope poly5 = atom(5), expo = atom(0, ratio(1, 100), ratio(1, 100));
    CHECK(atom_leq(poly5, expo));
    CHECK_FALSE(atom_leq(expo, poly5));
    // the ratio peaks near |k| = 1000 and then falls
    CHECK(shell_log_ratio(poly5, expo, 4000) < shell_log_ratio(poly5, expo, 2000));
    CHECK(atom_leq(atom(3, 0, 0, -1, -1), atom(0)));
    CHECK(atom_leq(atom(0, 5, 5, -1, -1), atom(0)));
    CHECK_FALSE(atom_leq(atom(0, 0, 0, 1), atom(0, 9, 9)));
}

TEST_CASE("atom order matches the ratio trend on random pairs") {
    Rng rng(51);
    auto pick = [&](long lo, long hi) { return Rational(uniform(rng, lo, hi)); };
    int yes = 0, no = 0;
    for (int t = 0; t < 200; ++t) {
        const AtomEnvelope e1 = atom(ratio(uniform(rng, -4, 4), 2), pick(-1, 1), pick(-1, 1), pick(-1, 1), pick(-1, 1));
        const AtomEnvelope e2 = atom(ratio(uniform(rng, -4, 4), 2), pick(-1, 1), pick(-1, 1), pick(-1, 1), pick(-1, 1));
        const bool leq = atom_leq(e1, e2);
        CAPTURE(e1.str());
        CAPTURE(e2.str());
        CHECK(leq == (shell_log_ratio(e1, e2, 32) <= shell_log_ratio(e1, e2, 16) + 1e-9));
        if (atom_pointwise_leq(e1, e2)) CHECK(leq);
        (leq ? yes : no)++;
    }
    CHECK(yes > 20);
    CHECK(no > 20);
}

TEST_CASE("sup and inf") {
    const Section h1{EnvelopeExpr::atom(atom(ratio(1, 2)))}, h2{EnvelopeExpr::atom(atom(1))};
    CHECK(section_sup(h1, h2) == h2);
    CHECK(section_inf(h1, h2) == h1);
    CHECK(section_sup(section_from_tag(SpaceTag::hm(1)), section_from_tag(SpaceTag::hm(2))) == section_from_tag(SpaceTag::hm(1)));

    const Section a = sec("atom(0, 1, 0, 0, 0)"), b = sec("atom(0, 0, 1, 0, 0)");
    CHECK(section_sup(a, a) == a);
    CHECK(section_sup(a, b).str() == "max(atom(0, 0, 1, 0, 0), atom(0, 1, 0, 0, 0))");
    CHECK(section_sup(a, b) == section_sup(b, a));
    CHECK(section_inf(a, b).str() == "min(atom(0, 0, 1, 0, 0), atom(0, 1, 0, 0, 0))");
    // nested nodes of the same kind flatten
    CHECK(section_sup(section_sup(a, b), sec("atom(2, 0, 0, 0, 0)")).generator.children().size() == 3);
    // limit leaves order as sections
    CHECK(section_sup(sec("hinf"), sec("e0")) == sec("hinf"));
    CHECK(section_sup(sec("hinf"), sec("atom(-1, 0, 0, 0, 0)")) == sec("atom(-1, 0, 0, 0, 0)"));
    CHECK(section_inf(sec("hminf"), sec("atom(7, 0, 0, 0, 0)")) == sec("atom(7, 0, 0, 0, 0)"));
}

TEST_CASE("lattice laws hold pointwise") {
    Rng rng(52);
    for (int t = 0; t < 40; ++t) {
        const Section a{random_expr(rng)}, b{random_expr(rng)}, c{random_expr(rng)};
        auto eq = [](const Section& x, const Section& y) { return pointwise_equal(x.generator, y.generator, 6); };
        CHECK(eq(section_sup(a, a), a));
        CHECK(eq(section_inf(a, a), a));
        CHECK(eq(section_sup(a, b), section_sup(b, a)));
        CHECK(eq(section_inf(a, b), section_inf(b, a)));
        CHECK(eq(section_sup(section_sup(a, b), c), section_sup(a, section_sup(b, c))));
        CHECK(eq(section_inf(section_inf(a, b), c), section_inf(a, section_inf(b, c))));
        CHECK(eq(section_sup(a, section_inf(a, b)), a));
        CHECK(eq(section_inf(a, section_sup(a, b)), a));
        CHECK(eq(section_inf(a, section_sup(b, c)), section_sup(section_inf(a, b), section_inf(a, c))));
        CHECK(eq(section_sup(a, section_inf(b, c)), section_inf(section_sup(a, b), section_sup(a, c))));
    }
}

TEST_CASE("section containment") {
    CHECK(section_leq(sec("atom(0, 0, 0, 0, 0)"), sec("atom(1, 0, 0, 0, 0)")) == Comparison::Yes);
    CHECK(section_leq(sec("atom(1, 0, 0, 0, 0)"), sec("atom(0, 0, 0, 0, 0)")) == Comparison::No);
    CHECK(section_leq(sec("max(atom(0, 0, 0, 0, 0), atom(-3, 1, 1, -1, -1))"), sec("atom(1, 0, 0, 0, 0)")) == Comparison::Yes);
    CHECK(section_leq(sec("min(atom(0, 1, 0, 0, 0), atom(0, 0, 1, 0, 0))"), sec("atom(0, 1, 1, 0, 0)")) == Comparison::Yes);
    // min(x, y) <= sqrt(x y): true, but only the probe sees it
    CHECK(section_leq(sec("min(atom(0, 1, 0, 0, 0), atom(0, 0, 1, 0, 0))"), sec("atom(0, 1/2, 1/2, 0, 0)")) ==
          Comparison::HeuristicYes);
    CHECK(section_leq(sec("min(atom(0, 1, 0, 0, 0), atom(0, 0, 1, 0, 0))"), sec("atom(0, 0, 0, 0, 0)")) ==
          Comparison::HeuristicNo);
    CHECK(section_leq(sec("hinf"), sec("atom(0, 0, 0, 0, 0)")) == Comparison::Yes);
    CHECK(section_leq(sec("atom(-1, 0, 0, 0, 0)"), sec("hinf")) == Comparison::No);
    CHECK(section_leq(sec("e0"), sec("hinf")) == Comparison::Yes);
    CHECK(section_leq(sec("atom(40, 0, 0, 0, 0)"), sec("hminf")) == Comparison::Yes);
    CHECK(section_leq(sec("atom(0, 1/9, 0, 0, 0)"), sec("hminf")) == Comparison::No);
    CHECK(section_leq(sec("atom(40, 0, 0, 0, 0)"), sec("e0dual")) == Comparison::Yes);
    CHECK(section_leq(sec("atom(0, 1/9, 0, 0, 0)"), sec("e0dual")) == Comparison::No);
    CHECK(section_leq(sec("min(hinf, atom(0, 1, 0, 0, 0))"), sec("atom(0, 0, -1, 0, 0)")) == Comparison::Unknown);
}

TEST_CASE("more regular on a box") {
    Rng rng(53);
    const Box box = Box::centered(6, 6);
    const TrigSeries u = TrigSeries::truncated(box, random_coeffs(rng, box, 1.0));
    const auto same = more_regular(u, u, box);
    CHECK(same.yes);
    CHECK(same.c_sq == 1);
    CHECK(same.c == 1);
    CHECK_FALSE(same.non_stabilizing);

    TrigSeries::CoeffMap one, decay;
    box.for_each([&](const LatticeIndex& k) {
        one[k] = 1;
        decay[k] = ratio(1, std::labs(k.k1) + 1);
    });
    const auto grow = more_regular(TrigSeries::truncated(box, one), TrigSeries::truncated(box, decay), box);
    CHECK(grow.yes);
    CHECK(grow.c_sq == 49);
    CHECK(grow.non_stabilizing);

    const auto no = more_regular(TrigSeries::truncated(box, {{{1, 0}, 1}}), TrigSeries::truncated(box, {}), box);
    CHECK_FALSE(no.yes);
    CHECK(*no.witness == LatticeIndex{1, 0});

    // transitive with multiplied constants
    const TrigSeries v = TrigSeries::truncated(box, random_coeffs(rng, box, 1.0));
    const TrigSeries w = TrigSeries::truncated(box, random_coeffs(rng, box, 1.0));
    const auto uv = more_regular(u, v, box), vw = more_regular(v, w, box), uw = more_regular(u, w, box);
    if (uv.yes && vw.yes) CHECK(uw.c_sq <= uv.c_sq * vw.c_sq);
}

TEST_CASE("dual membership") {
    const Box box = Box::centered(16, 16);
    TrigSeries::CoeffMap fact, decay;
    box.for_each([&](const LatticeIndex& k) {
        fact[k] = Rational(factorial(static_cast<unsigned long>(std::labs(k.k1))));
        decay[k] = pow_int(Rational(1 + k.norm_sq()), -2);
    });
    const auto boundary = dual_membership(TrigSeries::truncated(box, fact), section_from_tag(SpaceTag::l1_fact(1)), box);
    CHECK_FALSE(boundary.summable_trend);
    CHECK(boundary.partial_sums.back() > boundary.partial_sums[8]);
    const auto fast = dual_membership(TrigSeries::truncated(box, decay), sec("atom(0, 0, 0, 0, 0)"), box);
    CHECK(fast.summable_trend);
    CHECK(fast.tail_slope < -2.0);
    CHECK_THROWS_AS(dual_membership(TrigSeries::truncated(box, decay), sec("hinf"), box), std::invalid_argument);
}

TEST_CASE("operator image") {
    const Section s = sec("max(atom(1/2, 0, 0, 0, 0), atom(0, 1, 0, 0, 0))");
    CHECK(operator_image(TorusOperator::from_symbol(SymbolPolynomial::constant(1)), s) == s);
    CHECK(operator_image(laplacian(), sec("atom(3/2, 0, 0, 0, 0)")) == sec("atom(5/2, 0, 0, 0, 0)"));
    const Section fact = sec("atom(0, 0, 0, 1, 0)");
    const Section img = operator_image(TorusOperator::mizohata(), fact);
    CHECK(img.generator.as_atom().c1 == 1);

    // the atom rule bounds the pointwise image up to a constant
    struct Case {
        TorusOperator l;
        Section s;
    };
    for (const auto& [l, in] : std::vector<Case>{{laplacian(), sec("atom(3/2, 0, 0, 0, 0)")},
                                               {TorusOperator::mizohata(), fact},
                                               {TorusOperator::mizohata(), sec("atom(-1, 1, 0, 0, 1/2)")}}) {
        const Section out = operator_image(l, in);
        auto worst = [&](long r) {
            double m = -1e300;
            Box::centered(r, r).for_each([&](const LatticeIndex& k) {
                const double v = derived_image_log(l, in.generator, k);
                if (std::isfinite(v)) m = std::max(m, v - out.generator.eval(k).log_value());
            });
            return m;
        };
        // bounded: the log ratio settles instead of growing
        const double w12 = worst(12), w24 = worst(24);
        CHECK(w24 - w12 < 0.05);
        CHECK(w24 < 2.0);
    }

    // monotone under containment
    const Section small = sec("atom(0, 0, 0, 0, 0)"), large = sec("atom(1, 0, 0, 1, 0)");
    REQUIRE(section_leq(small, large) == Comparison::Yes);
    CHECK(section_leq(operator_image(TorusOperator::mizohata(), small), operator_image(TorusOperator::mizohata(), large)) ==
          Comparison::Yes);
}

TEST_CASE("solution sections") {
    SUBCASE("Laplacian keeps rapid decay") {
        const auto s = solution_section(laplacian(), sec("hinf"));
        CHECK(s.section == sec("hinf"));
        CHECK(s.provenance == Provenance::Exact);
    }
    SUBCASE("dividing by n^2") {
        const TorusOperator l = TorusOperator::from_symbol(parse_symbol("1 2 0, 1 0 2"));
        const auto s = solution_section(l, sec("atom(0, 0, 0, 0, 0)"));
        CHECK(s.section == sec("atom(-1, 0, 0, 0, 0)"));
        // w_G / |P_0| against the reported atom
        double top = -1e300;
        Box::centered(24, 24).for_each([&](const LatticeIndex& k) {
            if (k.norm_sq() == 0) return;
            top = std::max(top, -std::log(double(k.norm_sq())) - s.section.generator.eval(k).log_value());
        });
        CHECK(top == doctest::Approx(std::log(2.0)));
    }
    SUBCASE("Mizohata") {
        const auto s = solution_section(TorusOperator::mizohata(), sec("atom(3/2, 0, 0, 0, 0)"));
        CHECK(s.section.generator.as_atom().c1 == 1);
        CHECK(s.provenance == Provenance::PaperClaim);
        REQUIRE(s.containment);
        CHECK(*s.containment == SpaceTag::l1_fact_dual(1));
        CHECK_THROWS_AS(solution_section(TorusOperator::mizohata(), sec("hminf")), ContractViolation);
    }
    SUBCASE("degenerate operator") {
        CHECK_THROWS_AS(solution_section(TorusOperator::from_symbol(parse_symbol("1 2 0, -1 0 2")), sec("hinf")), ContractViolation);
    }
    SUBCASE("variable coefficients are sampled") {
        const TorusOperator l = laplacian() + TorusOperator::from_freq_form({{{0, 0}, SymbolPolynomial::constant(-1)},
                                                                             {{1, 0}, SymbolPolynomial::constant(ratio(1, 4))}});
        const auto s = solution_section(l, sec("atom(0, 0, 0, 0, 0)"));
        CHECK(s.provenance == Provenance::Empirical);
        CHECK_FALSE(s.note.empty());
        // the backward recurrence multiplies by |P_0| ~ k.k at every step
        CHECK_FALSE(s.containment.has_value());
        CHECK(s.section.generator.as_atom().c1 >= 2);
    }
}

TEST_CASE("envelope grammar") {
    for (const char* text : {"atom(0, 0, 0, 0, 0)", "max(atom(1/2, -1, 0, 0, 3), hinf)", "min(e0, max(hminf, e0dual))"})
        CHECK(env(text).str() == text);
    CHECK(env("  max( atom(1,2,3,4,5) ,e0 ) ").str() == "max(atom(1, 2, 3, 4, 5), e0)");
    CHECK(env("atom(2/4, 0, 0, 0, 0)").as_atom().a == ratio(1, 2));
    auto where = [](const char* text) -> std::pair<int, int> {
        try {
            parse_envelope(text);
        } catch (const ParseError& e) {
            return {e.line(), e.column()};
        }
        return {0, 0};
    };
    CHECK(where("atom(1, 2)") == std::pair{1, 10});
    CHECK(where("max()") == std::pair{1, 5});
    CHECK(where("foo(1)") == std::pair{1, 1});
    CHECK(where("max(e0,\n  atom(x, 0, 0, 0, 0))") == std::pair{2, 8});
    CHECK(where("e0 e0") == std::pair{1, 4});
    CHECK(where("atom(1/0, 0, 0, 0, 0)").second == 6);
}

TEST_CASE("probe agrees with direct evaluation") {
    Rng rng(54);
    for (int t = 0; t < 30; ++t) {
        const EnvelopeExpr x = random_expr(rng, 3), y = random_expr(rng, 3);
        EnvelopeProbe p;
        const std::size_t hx = p.add(x), hy = p.add(y), hx2 = p.add(x);
        Box::centered(5, 5).for_each([&](const LatticeIndex& k) {
            p.at(k);
            const EnvelopeValue vx = x.eval(k), vy = y.eval(k);
            CHECK(compare(EnvelopeValue(p.winner(hx), k), vx) == 0);
            CHECK(p.equal(hx, hy) == (compare(vx, vy) == 0));
            CHECK(p.equal(hx, hx2));
            CHECK(p.log_value(hy) == doctest::Approx(vy.log_value()));
        });
    }
    EnvelopeProbe p;
    CHECK_THROWS_AS(p.add(env("max(hinf, atom(0, 0, 0, 0, 0))")), std::invalid_argument);
}
