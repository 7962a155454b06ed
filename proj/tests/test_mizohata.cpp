#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "torus/errors.hpp"
#include "torus/linsolve.hpp"
#include "torus/mizohata.hpp"

#include <cstdlib>

using namespace torus;
using namespace torus::testing;

namespace {

const GaussianRational I = GaussianRational::i();

TrigSeries d(long k1, long k2, GaussianRational c = GaussianRational(1)) { return TrigSeries::delta({k1, k2}, std::move(c)); }

/// max |u_k|^2 / ((|k1|+1)!)^2 over the stored coefficients with |k1| <= k1_max.
Rational factorial_ratio_sq(const TrigSeries& u, long k1_max, long min_abs_k2 = 0) {
    Rational best = 0;
    for (const auto& [k, c] : u.coeffs()) {
        if (std::labs(k.k1) > k1_max || std::labs(k.k2) < min_abs_k2) continue;
        const Rational f(factorial(static_cast<unsigned long>(std::labs(k.k1) + 1)));
        best = std::max(best, Rational(c.norm_sq() / (f * f)));
    }
    return best;
}

void check_residual(const TrigSeries& u, const TrigSeries& f, const Box& on) {
    for (long a = on.n1_min; a <= on.n1_max; ++a)
        for (long b = on.n2_min; b <= on.n2_max; ++b) REQUIRE(mizohata_at(u, {a, b}) == f.coeff({a, b}));
}

}  // namespace

TEST_CASE("zero right-hand side") {
    const Box box = Box::centered(6, 3);
    const auto sol = solve_odd(TrigSeries::truncated(box, {}), box);
    CHECK(sol.u.is_zero());
    CHECK(sol.growth_constant == 0);
    CHECK(sol.residual_box == Box::centered(5, 3));
}

TEST_CASE("cos x1 e^{ix2}") {
    const Box box = Box::centered(10, 2);
    const TrigSeries f = TrigSeries::truncated(box, {{{1, 1}, ratio(1, 2)}, {{-1, 1}, ratio(1, 2)}});
    const auto sol = solve_odd(f, box);
    CHECK(sol.u.coeff({0, 1}).is_zero());
    CHECK(sol.u.coeff({1, 1}).is_zero());
    // k1 = 1 row: -(i/2) u_{2,1} = 1/2
    CHECK(sol.u.coeff({2, 1}) == I);
    CHECK(sol.u.coeff({-2, 1}) == -I);
    check_residual(sol.u, f, sol.residual_box);
    CHECK(has_parity(sol.u, 1, Parity::Odd));
}

TEST_CASE("random even right-hand sides") {
    Rng rng(31);
    for (int t = 0; t < 10; ++t) {
        const Box box = Box::centered(9, 4);
        const TrigSeries f = random_even_rhs(rng, 4, box);
        const auto sol = solve_odd(f, box);
        check_residual(sol.u, f, sol.residual_box);
        CHECK(has_parity(sol.u, 1, Parity::Odd));
        for (long b = -4; b <= 4; ++b) CHECK(sol.u.coeff({0, b}).is_zero());
        // k2 = 0 row: u_{k1,0} = f_{k1,0} / (i k1)
        for (long a = 1; a <= 9; ++a) CHECK(sol.u.coeff({a, 0}) == f.coeff({a, 0}) / (I * GaussianRational(a)));

        CHECK(sol.growth_constant_sq == factorial_ratio_sq(sol.u, 9));
        CHECK(sol.growth_constant * sol.growth_constant >= sol.growth_constant_sq);
        for (const auto& [k, c] : sol.u.coeffs()) {
            const Rational fact(factorial(static_cast<unsigned long>(std::labs(k.k1) + 1)));
            CHECK(c.norm_sq() <= sol.growth_constant * sol.growth_constant * fact * fact);
        }
    }
}

TEST_CASE("nested boxes agree") {
    Rng rng(32);
    for (int t = 0; t < 5; ++t) {
        const TrigSeries f = random_even_rhs(rng, 3, Box::centered(20, 6));
        const auto small = solve_odd(f.restrict(Box::centered(8, 4)), Box::centered(8, 4));
        const auto large = solve_odd(f, Box::centered(20, 6));
        CHECK(large.u.restrict(Box::centered(8, 4)) == small.u);
    }
}

TEST_CASE("factorial constant grows with the box and settles for |k2| >= 2") {
    Rng rng(33);
    for (int t = 0; t < 5; ++t) {
        const TrigSeries f = random_even_rhs(rng, 3, Box::centered(28, 5));
        const auto sol = solve_odd(f, Box::centered(28, 5));
        Rational prev = 0;
        for (long k1 = 4; k1 <= 28; k1 += 4) {
            const Rational c = factorial_ratio_sq(sol.u, k1);
            CHECK(c >= prev);
            prev = c;
        }
        // columns |k2| >= 2 grow like (2/|k2|)^k1 k1!, below (k1+1)!
        CHECK(factorial_ratio_sq(sol.u, 28, 2) == factorial_ratio_sq(sol.u, 14, 2));
    }
}

TEST_CASE("solver preconditions") {
    const Box box = Box::centered(4, 2);
    CHECK_THROWS_WITH_AS(solve_odd(TrigSeries::truncated(box, {{{2, 1}, 1}}), box), "f not even in x1 at (2,1)", ContractViolation);
    CHECK_THROWS_AS(solve_odd(TrigSeries::truncated(box, {{{0, 0}, 1}}), box), ContractViolation);
    CHECK_THROWS_AS(solve_odd(TrigSeries::truncated(box, {}), Box::make(-4, 3, -2, 2)), ContractViolation);
    CHECK_THROWS_AS(solve_odd(TrigSeries::truncated(box, {}), Box::centered(0, 2)), ContractViolation);
    CHECK_THROWS_AS(solve_odd(TrigSeries::truncated(Box::centered(3, 2), {}), box), ContractViolation);
}

TEST_CASE("homogeneous reconstruction from two traces") {
    const Box box = Box::centered(8, 3);
    CHECK(reconstruct_homogeneous(TrigSeries{}, TrigSeries{}, box).is_zero());

    const TrigSeries one = reconstruct_homogeneous(TrigSeries::constant(1), TrigSeries{}, box);
    CHECK(one == TrigSeries::truncated(box, {{{0, 0}, 1}}));

    const TrigSeries u = reconstruct_homogeneous(TrigSeries{}, d(0, 1), box);
    CHECK(u.nnz() > 4);
    CHECK(u.coeff({1, 1}) == GaussianRational(1));
    CHECK(has_parity(u, 1, Parity::Even));
    check_residual(u, TrigSeries{}, Box::centered(7, 3));
    CHECK(partial_pairing_x1(u, TrigSeries::constant(1)).restrict(Box::centered(0, 3)).coeffs().empty());
    CHECK(partial_pairing_x1(u, d(1, 0)).coeff({0, 1}) == GaussianRational(1));

    CHECK_THROWS_AS(reconstruct_homogeneous(TrigSeries{}, d(0, 0), box), ContractViolation);
}

TEST_CASE("general reconstruction") {
    const TorusOperator l = TorusOperator::mizohata();
    SUBCASE("zero traces") {
        const Box box = Box::centered(6, 3);
        TraceData t{{TrigSeries{}, TrigSeries{}}, {TrigSeries{}}};
        const auto g = reconstruct_general(l, t, box);
        CHECK(g.u.is_zero());
        CHECK(g.unique);
    }
    SUBCASE("matches the homogeneous recurrence") {
        const Box box = Box::centered(7, 3);
        Rng rng(34);
        for (int t = 0; t < 5; ++t) {
            TrigSeries::CoeffMap c0, c1;
            for (long n = -3; n <= 3; ++n) {
                c0[{0, n}] = random_gaussian(rng);
                if (n) c1[{0, n}] = random_gaussian(rng);
            }
            const TrigSeries u0 = TrigSeries::polynomial(c0), u1 = TrigSeries::polynomial(c1);
            const TrigSeries h = reconstruct_homogeneous(u0, u1, box);
            const auto g = reconstruct_general(l, extract_traces(h, l.s1(), l.s2()), box);
            CHECK(g.u == h);
            CHECK(g.unique);
        }
    }
    SUBCASE("solutions of the inhomogeneous equation") {
        Rng rng(35);
        const Box box = Box::centered(10, 4);
        const TrigSeries f = random_even_rhs(rng, 3, box);
        const auto sol = solve_odd(f, box);
        const auto g = reconstruct_general(l, extract_traces(sol.u, 1, 0), box, f);
        CHECK(g.u == sol.u);
        CHECK(g.unique);
    }
    SUBCASE("incompatible traces name the failing pair") {
        // s1 = s2 = 1: traces overlap in u_{-p,-q} for p, q in {0, 1}
        const TorusOperator l2 = l + multiply_left(d(0, 1), TorusOperator::from_symbol(SymbolPolynomial::term(1, 1, 0)));
        REQUIRE(l2.s1() == 1);
        REQUIRE(l2.s2() == 1);
        const Box box = Box::centered(5, 5);
        Rng rng(36);
        const TrigSeries u = TrigSeries::truncated(box, random_coeffs(rng, box, 1.0));
        TraceData t = extract_traces(u, 1, 1);
        CHECK_FALSE(check_compatibility(t).has_value());
        t.col_traces[1] = add(t.col_traces[1], d(0, -1));
        REQUIRE(check_compatibility(t).has_value());
        CHECK(*check_compatibility(t) == std::pair<long, long>{1, 1});
        CHECK_THROWS_WITH_AS(reconstruct_general(l2, t, box), "incompatible traces at (p,q) = (1,1)", ContractViolation);
    }
    SUBCASE("box cap") {
        TraceData t{{TrigSeries{}, TrigSeries{}}, {TrigSeries{}}};
        CHECK_THROWS_AS(reconstruct_general(l, t, Box::centered(40, 2)), std::invalid_argument);
    }
}

TEST_CASE("sparse elimination agrees with fraction-free elimination") {
    Rng rng(37);
    for (int t = 0; t < 60; ++t) {
        SparseSystem s;
        s.unknowns = static_cast<std::size_t>(uniform(rng, 1, 7));
        const long rows = uniform(rng, 1, 8);
        for (long r = 0; r < rows; ++r) {
            std::map<std::size_t, GaussianRational> row;
            for (std::size_t j = 0; j < s.unknowns; ++j)
                if (uniform(rng, 0, 2)) row[j] = random_gaussian(rng);
            s.add_row(row, random_gaussian(rng));
        }
        // a duplicated row with a shifted right-hand side makes some systems inconsistent
        if (uniform(rng, 0, 3) == 0) s.add_row(s.rows.front(), s.rhs.front() + GaussianRational(1));
        const LinearSolution a = solve_sparse(s);
        const LinearSolution b = solve_dense_bareiss(s);
        CHECK(a.consistent == b.consistent);
        CHECK(a.rank == b.rank);
        CHECK(a.unique == b.unique);
        if (!a.consistent) continue;
        if (a.unique) CHECK(a.x == b.x);
        for (std::size_t r = 0; r < s.rows.size(); ++r) {
            GaussianRational lhs;
            for (const auto& [j, c] : s.rows[r]) lhs += c * a.x[j];
            CHECK(lhs == s.rhs[r]);
        }
    }
}
