#include "torus/mizohata.hpp"

#include "torus/errors.hpp"
#include "torus/linsolve.hpp"

#include <stdexcept>

namespace torus {

namespace {

// The Mizohata frequency form couples u_{k1-1}, u_k, u_{k1+1} within a column:
//   (Lu)_k = P0(k) u_k + Pp(k - e1) u_{k - e1} + Pm(k + e1) u_{k + e1}.
struct ColumnSymbols {
    SymbolPolynomial p0, pp, pm;

    static ColumnSymbols of(const TorusOperator& l) {
        return {l.symbol_at({0, 0}), l.symbol_at({1, 0}), l.symbol_at({-1, 0})};
    }
    GaussianRational P0(long k1, long k2) const { return p0.eval(k1, k2); }
    GaussianRational Pp(long k1, long k2) const { return pp.eval(k1, k2); }
    GaussianRational Pm(long k1, long k2) const { return pm.eval(k1, k2); }
};

void require_symmetric(const Box& box, const char* what) {
    if (!box.symmetric_in(1) || box.n1_max < 1)
        throw ContractViolation(std::string(what) + ": box must be symmetric in k1 with n1_max >= 1, got " + box.str());
}

void set(TrigSeries::CoeffMap& m, const LatticeIndex& k, GaussianRational v) {
    if (!v.is_zero()) m[k] = std::move(v);
}

}  // namespace

MizohataSolution solve_odd(const TrigSeries& f, const Box& box) {
    require_symmetric(box, "solve_odd");
    if (!f.is_complete_on(box))
        throw ContractViolation("solve_odd: f is only complete on " + f.window()->str() + ", not on " + box.str());
    const TrigSeries fb = f.restrict(box);
    LatticeIndex bad;
    if (!has_parity(fb, 1, Parity::Even, &bad)) throw ContractViolation("f not even in x1 at " + bad.str());
    if (!fb.coeff({0, 0}).is_zero()) throw ContractViolation("f_{0,0} must vanish, got " + fb.coeff({0, 0}).str());

    const TorusOperator l = TorusOperator::mizohata();
    const ColumnSymbols s = ColumnSymbols::of(l);
    const long K = box.n1_max;
    TrigSeries::CoeffMap out;
    for (long k2 = box.n2_min; k2 <= box.n2_max; ++k2) {
        std::vector<GaussianRational> u(static_cast<std::size_t>(K) + 1);  // u[k1], k1 >= 0; u[0] = 0 by oddness
        if (s.Pm(1, k2).is_zero()) {
            for (long k1 = 1; k1 <= K; ++k1) u[static_cast<std::size_t>(k1)] = fb.coeff({k1, k2}) / s.P0(k1, k2);
        } else {
            // k1 = 0 row with u_{-1} = -u_1.
            u[1] = fb.coeff({0, k2}) / (s.Pm(1, k2) - s.Pp(-1, k2));
            for (long k1 = 1; k1 < K; ++k1) {
                const auto i = static_cast<std::size_t>(k1);
                u[i + 1] = (fb.coeff({k1, k2}) - s.P0(k1, k2) * u[i] - s.Pp(k1 - 1, k2) * u[i - 1]) / s.Pm(k1 + 1, k2);
            }
        }
        for (long k1 = 1; k1 <= K; ++k1) {
            set(out, {k1, k2}, u[static_cast<std::size_t>(k1)]);
            set(out, {-k1, k2}, -u[static_cast<std::size_t>(k1)]);
        }
    }

    MizohataSolution sol;
    sol.u = TrigSeries::truncated(box, std::move(out));
    sol.residual_box = *box.shrink(1, 0);
    if (apply(l, sol.u).coeffs() != fb.restrict(sol.residual_box).coeffs())
        throw std::logic_error("solve_odd: residual check failed on " + sol.residual_box.str());

    sol.growth_constant_sq = 0;
    for (const auto& [k, c] : sol.u.coeffs()) {
        const Rational fact(factorial(static_cast<unsigned long>(std::labs(k.k1) + 1)));
        const Rational r = c.norm_sq() / (fact * fact);
        if (r > sol.growth_constant_sq) sol.growth_constant_sq = r;
    }
    sol.growth_constant = sqrt_upper(sol.growth_constant_sq);
    return sol;
}

TrigSeries reconstruct_homogeneous(const TrigSeries& u0, const TrigSeries& u1, const Box& box) {
    require_symmetric(box, "reconstruct_homogeneous");
    for (long k2 = box.n2_min; k2 <= box.n2_max; ++k2)
        if (!u0.is_complete_at({0, k2}) || !u1.is_complete_at({0, k2}))
            throw ContractViolation("reconstruct_homogeneous: traces incomplete at n = " + std::to_string(k2));
    if (box.n2_min <= 0 && 0 <= box.n2_max && !u1.coeff({0, 0}).is_zero())
        throw ContractViolation("reconstruct_homogeneous: u1 must vanish at n = 0 (the equation forces u_{1,0} = 0)");

    const TorusOperator l = TorusOperator::mizohata();
    const ColumnSymbols s = ColumnSymbols::of(l);
    const long K = box.n1_max;
    TrigSeries::CoeffMap out;
    for (long k2 = box.n2_min; k2 <= box.n2_max; ++k2) {
        std::vector<GaussianRational> u(static_cast<std::size_t>(K) + 1);
        u[0] = u0.coeff({0, k2});
        if (!s.Pm(1, k2).is_zero()) {
            u[1] = u1.coeff({0, k2});
            for (long k1 = 1; k1 < K; ++k1) {
                const auto i = static_cast<std::size_t>(k1);
                u[i + 1] = -(s.P0(k1, k2) * u[i] + s.Pp(k1 - 1, k2) * u[i - 1]) / s.Pm(k1 + 1, k2);
            }
        }
        set(out, {0, k2}, u[0]);
        for (long k1 = 1; k1 <= K; ++k1) {
            set(out, {k1, k2}, u[static_cast<std::size_t>(k1)]);
            set(out, {-k1, k2}, u[static_cast<std::size_t>(k1)]);
        }
    }
    TrigSeries result = TrigSeries::truncated(box, std::move(out));
    if (!apply(l, result).is_zero()) throw std::logic_error("reconstruct_homogeneous: nonzero residual");
    return result;
}

TraceData extract_traces(const TrigSeries& u, long s1, long s2) {
    if (s1 < 0 || s2 < 0) throw std::invalid_argument("trace radii must be nonnegative");
    TraceData t;
    for (long p = 0; p <= s1; ++p) t.col_traces.push_back(partial_pairing_x1(u, TrigSeries::delta({p, 0})));
    for (long q = 0; q <= s2; ++q) t.row_traces.push_back(partial_pairing_x2(u, TrigSeries::delta({0, q})));
    return t;
}

std::optional<std::pair<long, long>> check_compatibility(const TraceData& traces) {
    const long s1 = static_cast<long>(traces.col_traces.size()) - 1;
    const long s2 = static_cast<long>(traces.row_traces.size()) - 1;
    for (long p = 0; p <= s1; ++p)
        for (long q = 0; q <= s2; ++q) {
            const TrigSeries& row = traces.row_traces[static_cast<std::size_t>(q)];
            const TrigSeries& col = traces.col_traces[static_cast<std::size_t>(p)];
            const GaussianRational lhs = partial_pairing_x1(row, TrigSeries::delta({p, 0})).coeff({0, 0});
            const GaussianRational rhs = partial_pairing_x2(col, TrigSeries::delta({0, q})).coeff({0, 0});
            if (!(lhs == rhs)) return std::pair(p, q);
        }
    return std::nullopt;
}

GeneralSolution reconstruct_general(const TorusOperator& l, const TraceData& traces, const Box& box,
                                    const std::optional<TrigSeries>& f, long max_width) {
    if (box.width1() > max_width || box.width2() > max_width)
        throw std::invalid_argument("reconstruct_general: box " + box.str() + " exceeds the " + std::to_string(max_width) + "x" +
                                    std::to_string(max_width) + " cap");
    if (traces.col_traces.size() != static_cast<std::size_t>(l.s1()) + 1 ||
        traces.row_traces.size() != static_cast<std::size_t>(l.s2()) + 1)
        throw std::invalid_argument("reconstruct_general: need " + std::to_string(l.s1() + 1) + " column and " +
                                    std::to_string(l.s2() + 1) + " row traces");
    if (auto bad = check_compatibility(traces))
        throw ContractViolation("incompatible traces at (p,q) = (" + std::to_string(bad->first) + "," + std::to_string(bad->second) + ")");

    const long w2 = box.width2();
    auto index = [&](const LatticeIndex& k) {
        return static_cast<std::size_t>((k.k1 - box.n1_min) * w2 + (k.k2 - box.n2_min));
    };
    SparseSystem sys;
    sys.unknowns = static_cast<std::size_t>(box.size());

    if (const auto eq_box = box.shrink(l.s1(), l.s2())) {
        if (f && !f->is_complete_on(*eq_box))
            throw ContractViolation("reconstruct_general: right-hand side incomplete on " + eq_box->str());
        eq_box->for_each([&](const LatticeIndex& k) {
            std::map<std::size_t, GaussianRational> row;
            for (const auto& [n, p] : l.freq_form()) row[index(k - n)] += p.eval(k - n);
            sys.add_row(std::move(row), f ? f->coeff(k) : GaussianRational());
        });
    }
    for (long p = 0; p <= l.s1(); ++p) {
        const TrigSeries& col = traces.col_traces[static_cast<std::size_t>(p)];
        for (long n = box.n2_min; n <= box.n2_max; ++n) {
            if (!box.contains(LatticeIndex{-p, n})) continue;
            if (!col.is_complete_at({0, n}))
                throw ContractViolation("column trace " + std::to_string(p) + " incomplete at n = " + std::to_string(n));
            sys.add_row({{index({-p, n}), GaussianRational(1)}}, col.coeff({0, n}));
        }
    }
    for (long q = 0; q <= l.s2(); ++q) {
        const TrigSeries& row = traces.row_traces[static_cast<std::size_t>(q)];
        for (long m = box.n1_min; m <= box.n1_max; ++m) {
            if (!box.contains(LatticeIndex{m, -q})) continue;
            if (!row.is_complete_at({m, 0}))
                throw ContractViolation("row trace " + std::to_string(q) + " incomplete at m = " + std::to_string(m));
            sys.add_row({{index({m, -q}), GaussianRational(1)}}, row.coeff({m, 0}));
        }
    }

    const LinearSolution sol = solve_sparse(sys);
    if (!sol.consistent) throw ContractViolation("reconstruct_general: traces and equation are inconsistent on " + box.str());
    TrigSeries::CoeffMap out;
    box.for_each([&](const LatticeIndex& k) { set(out, k, sol.x[index(k)]); });
    GeneralSolution g;
    g.u = TrigSeries::truncated(box, std::move(out));
    g.unique = sol.unique;
    g.rank = sol.rank;
    g.unknowns = sys.unknowns;
    return g;
}

}  // namespace torus
