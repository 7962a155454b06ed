#include "torus/sections.hpp"

#include "torus/errors.hpp"
#include "torus/growth.hpp"
#include "torus/hypo.hpp"
#include "torus/mizohata.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace torus {

using Limit = EnvelopeExpr::LimitKind;

Section section_from_tag(const SpaceTag& tag) {
    AtomEnvelope a;
    switch (tag.kind) {
        case SpaceTag::Kind::Hm: a.a = -tag.m / 2; break;
        case SpaceTag::Kind::L1Fact: (tag.axis == 1 ? a.c1 : a.c2) = -1; break;
        case SpaceTag::Kind::L1FactDual: (tag.axis == 1 ? a.c1 : a.c2) = 1; break;
        case SpaceTag::Kind::Hinf: return {EnvelopeExpr::limit(Limit::Hinf)};
        case SpaceTag::Kind::HminusInf: return {EnvelopeExpr::limit(Limit::HminusInf)};
        case SpaceTag::Kind::E0: return {EnvelopeExpr::limit(Limit::E0)};
        case SpaceTag::Kind::E0dual: return {EnvelopeExpr::limit(Limit::E0dual)};
    }
    a.a.canonicalize();
    return {EnvelopeExpr::atom(a)};
}

namespace {

/// Per-axis growth class of the ratio: factorial power first, then exponential rate.
bool axis_bounded(const Rational& dc, const Rational& db, bool strict) {
    if (dc != 0) return dc < 0;
    return strict ? db < 0 : db <= 0;
}

bool axis_decays(const Rational& c, const Rational& b) { return c < 0 || (c == 0 && b < 0); }
bool axis_at_most_poly(const Rational& c, const Rational& b) { return c < 0 || (c == 0 && b <= 0); }
bool axis_not_decaying(const Rational& c, const Rational& b) { return c > 0 || (c == 0 && b >= 0); }
bool axis_beyond_poly(const Rational& c, const Rational& b) { return c > 0 || (c == 0 && b > 0); }

int limit_rank(Limit k) {
    switch (k) {
        case Limit::E0: return 0;
        case Limit::Hinf: return 1;
        case Limit::HminusInf: return 2;
        case Limit::E0dual: return 3;
    }
    return 0;
}

bool atom_in_limit(const AtomEnvelope& a, Limit k) {
    if (k == Limit::E0 || k == Limit::Hinf) return axis_decays(a.c1, a.b1) && axis_decays(a.c2, a.b2);
    return axis_at_most_poly(a.c1, a.b1) && axis_at_most_poly(a.c2, a.b2);
}

bool limit_in_atom(Limit k, const AtomEnvelope& a) {
    if (k == Limit::E0 || k == Limit::Hinf) return axis_not_decaying(a.c1, a.b1) && axis_not_decaying(a.c2, a.b2);
    return axis_beyond_poly(a.c1, a.b1) && axis_beyond_poly(a.c2, a.b2);
}

bool leaf_leq(const EnvelopeExpr& x, const EnvelopeExpr& y) {
    using K = EnvelopeExpr::Kind;
    if (x.kind() == K::Atom && y.kind() == K::Atom) return atom_leq(x.as_atom(), y.as_atom());
    if (x.kind() == K::Limit && y.kind() == K::Limit) return limit_rank(x.limit_kind()) <= limit_rank(y.limit_kind());
    if (x.kind() == K::Atom) return atom_in_limit(x.as_atom(), y.limit_kind());
    return limit_in_atom(x.limit_kind(), y.as_atom());
}

/// x <= y everywhere (atoms), or as sections when a limit leaf is involved.
bool safe_leq(const EnvelopeExpr& x, const EnvelopeExpr& y) {
    if (x == y) return true;
    if (!x.is_leaf() || !y.is_leaf()) return false;
    if (x.kind() == EnvelopeExpr::Kind::Atom && y.kind() == EnvelopeExpr::Kind::Atom)
        return atom_pointwise_leq(x.as_atom(), y.as_atom());
    return leaf_leq(x, y);
}

EnvelopeExpr combine(const EnvelopeExpr& x, const EnvelopeExpr& y, EnvelopeExpr::Kind kind) {
    std::vector<EnvelopeExpr> all;
    for (const EnvelopeExpr* e : {&x, &y}) {
        if (e->kind() == kind)
            all.insert(all.end(), e->children().begin(), e->children().end());
        else
            all.push_back(*e);
    }
    std::vector<EnvelopeExpr> kept;
    for (std::size_t i = 0; i < all.size(); ++i) {
        bool drop = false;
        for (std::size_t j = 0; j < all.size() && !drop; ++j) {
            if (i == j) continue;
            const bool dominated = kind == EnvelopeExpr::Kind::Max ? safe_leq(all[i], all[j]) : safe_leq(all[j], all[i]);
            // Of two equal children keep the first; otherwise drop the dominated one.
            if (dominated && (!(all[i] == all[j]) || j < i)) drop = true;
        }
        if (!drop) kept.push_back(all[i]);
    }
    std::sort(kept.begin(), kept.end(), [](const EnvelopeExpr& a, const EnvelopeExpr& b) { return a.str() < b.str(); });
    if (kept.size() == 1) return kept.front();
    return kind == EnvelopeExpr::Kind::Max ? EnvelopeExpr::max(std::move(kept)) : EnvelopeExpr::min(std::move(kept));
}

Comparison symbolic_leq(const EnvelopeExpr& x, const EnvelopeExpr& y) {
    using K = EnvelopeExpr::Kind;
    auto all_of_children = [](const std::vector<EnvelopeExpr>& cs, auto&& test) {
        bool unknown = false;
        for (const auto& c : cs) {
            const Comparison r = test(c);
            if (r == Comparison::No) return Comparison::No;
            if (r != Comparison::Yes) unknown = true;
        }
        return unknown ? Comparison::Unknown : Comparison::Yes;
    };
    if (x.kind() == K::Max) return all_of_children(x.children(), [&](const EnvelopeExpr& c) { return symbolic_leq(c, y); });
    if (y.kind() == K::Min) return all_of_children(y.children(), [&](const EnvelopeExpr& c) { return symbolic_leq(x, c); });
    if (x.is_leaf() && y.is_leaf()) return leaf_leq(x, y) ? Comparison::Yes : Comparison::No;
    if (x.kind() == K::Min)
        for (const auto& c : x.children())
            if (symbolic_leq(c, y) == Comparison::Yes) return Comparison::Yes;
    if (y.kind() == K::Max)
        for (const auto& c : y.children())
            if (symbolic_leq(x, c) == Comparison::Yes) return Comparison::Yes;
    return Comparison::Unknown;
}

double max_log_ratio(const EnvelopeExpr& x, const EnvelopeExpr& y, long r) {
    double m = -std::numeric_limits<double>::infinity();
    Box::centered(r, r).for_each([&](const LatticeIndex& k) { m = std::max(m, x.eval(k).log_value() - y.eval(k).log_value()); });
    return m;
}

}  // namespace

bool atom_leq(const AtomEnvelope& e1, const AtomEnvelope& e2) {
    const AtomEnvelope d = e1 - e2;
    const bool strict = d.a > 0;
    return axis_bounded(d.c1, d.b1, strict) && axis_bounded(d.c2, d.b2, strict);
}

bool atom_pointwise_leq(const AtomEnvelope& e1, const AtomEnvelope& e2) {
    return e1.a <= e2.a && e1.b1 <= e2.b1 && e1.b2 <= e2.b2 && e1.c1 <= e2.c1 && e1.c2 <= e2.c2;
}

Section section_sup(const Section& s1, const Section& s2) { return {combine(s1.generator, s2.generator, EnvelopeExpr::Kind::Max)}; }
Section section_inf(const Section& s1, const Section& s2) { return {combine(s1.generator, s2.generator, EnvelopeExpr::Kind::Min)}; }

std::string to_string(Comparison c) {
    switch (c) {
        case Comparison::Yes: return "YES";
        case Comparison::No: return "NO";
        case Comparison::HeuristicYes: return "HEURISTIC_YES";
        case Comparison::HeuristicNo: return "HEURISTIC_NO";
        case Comparison::Unknown: return "UNKNOWN";
    }
    return "?";
}

Comparison section_leq(const Section& s1, const Section& s2, long probe_radius) {
    const Comparison c = symbolic_leq(s1.generator, s2.generator);
    if (c != Comparison::Unknown) return c;
    if (s1.generator.has_limits() || s2.generator.has_limits() || probe_radius < 4) return Comparison::Unknown;
    const double half = max_log_ratio(s1.generator, s2.generator, probe_radius / 2);
    const double full = max_log_ratio(s1.generator, s2.generator, probe_radius);
    return full <= half + 1e-9 ? Comparison::HeuristicYes : Comparison::HeuristicNo;
}

MoreRegularResult more_regular(const TrigSeries& u, const TrigSeries& v, const Box& box) {
    if (!u.is_complete_on(box) || !v.is_complete_on(box))
        throw ContractViolation("more_regular: both series must be complete on " + box.str());
    MoreRegularResult r;
    const Box inner = box.shrink(box.width1() / 4, box.width2() / 4).value_or(box);
    Rational inner_max(0);
    bool witness_found = false;
    box.for_each([&](const LatticeIndex& k) {
        if (witness_found) return;
        const Rational nu = u.coeff(k).norm_sq();
        const Rational nv = v.coeff(k).norm_sq();
        if (nu == 0) return;
        if (nv == 0) {
            r.witness = k;
            witness_found = true;
            return;
        }
        const Rational q = nu / nv;
        if (q > r.c_sq) r.c_sq = q;
        if (inner.contains(k) && q > inner_max) inner_max = q;
    });
    if (witness_found) return r;
    r.yes = true;
    r.c = sqrt_upper(r.c_sq);
    r.non_stabilizing = inner_max < r.c_sq;
    return r;
}

DualMembership dual_membership(const TrigSeries& u, const Section& s, const Box& box) {
    if (s.generator.has_limits()) throw std::invalid_argument("dual_membership needs a generator without limit leaves");
    if (!u.is_complete_on(box)) throw ContractViolation("dual_membership: series incomplete on " + box.str());
    const long radius = std::min({-box.n1_min, box.n1_max, -box.n2_min, box.n2_max});
    if (radius < 4) throw std::invalid_argument("dual_membership needs a box containing [-4,4]^2");
    std::vector<double> shell(static_cast<std::size_t>(radius) + 1, 0.0);
    Box::centered(radius, radius).for_each([&](const LatticeIndex& k) {
        const Rational n = u.coeff(k).norm_sq();
        if (n == 0) return;
        const long sh = std::max(std::labs(k.k1), std::labs(k.k2));
        shell[static_cast<std::size_t>(sh)] += std::exp(0.5 * log_abs(n) + s.generator.eval(k).log_value());
    });
    DualMembership d;
    double acc = 0;
    for (double x : shell) d.partial_sums.push_back(acc += x);
    std::vector<double> xs, ys;
    for (long sh = radius / 2; sh <= radius; ++sh)
        if (sh > 0 && shell[static_cast<std::size_t>(sh)] > 0) {
            xs.push_back(std::log(static_cast<double>(sh)));
            ys.push_back(std::log(shell[static_cast<std::size_t>(sh)]));
        }
    if (xs.size() < 2) {
        // The tail carries no mass: the partial sums are constant.
        d.summable_trend = true;
        d.tail_slope = -std::numeric_limits<double>::infinity();
        return d;
    }
    d.tail_slope = fit_line(xs, ys).slope;
    d.summable_trend = d.tail_slope < -1.25;
    return d;
}

Section operator_image(const TorusOperator& l, const Section& s) {
    const Rational d(std::max(0, l.max_degree()));
    const long s1 = l.s1(), s2 = l.s2();
    return {s.generator.map_atoms([&](const AtomEnvelope& a) {
        AtomEnvelope out = a;
        out.a += d / 2 + (abs(a.c1) * s1 + abs(a.c2) * s2) / 2;
        out.a.canonicalize();
        return out;
    })};
}

double derived_image_log(const TorusOperator& l, const EnvelopeExpr& w, const LatticeIndex& k) {
    std::vector<double> terms;
    for (const auto& [n, p] : l.freq_form()) {
        const Rational mag = p.eval(k - n).norm_sq();
        if (mag == 0) continue;
        terms.push_back(0.5 * log_abs(mag) + w.eval(k - n).log_value());
    }
    if (terms.empty()) return -std::numeric_limits<double>::infinity();
    const double top = *std::max_element(terms.begin(), terms.end());
    double sum = 0;
    for (double t : terms) sum += std::exp(t - top);
    return top + std::log(sum);
}

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::Exact: return "EXACT";
        case Provenance::PaperClaim: return "PAPER_CLAIM";
        case Provenance::Empirical: return "EMPIRICAL";
    }
    return "?";
}

namespace {

SolutionSection mizohata_solution_section(const Section& g) {
    // |u_k| <= (|k1|+1)! sum |f| per column, and (|k1|+1)! <= (1+k.k)^{1/2} |k1|!.
    auto lift = [](const AtomEnvelope& a) {
        AtomEnvelope out = a;
        out.a += Rational(1, 2);
        out.c1 += 1;
        return out;
    };
    std::function<EnvelopeExpr(const EnvelopeExpr&)> go = [&](const EnvelopeExpr& e) -> EnvelopeExpr {
        switch (e.kind()) {
            case EnvelopeExpr::Kind::Atom: return EnvelopeExpr::atom(lift(e.as_atom()));
            case EnvelopeExpr::Kind::Limit:
                if (e.limit_kind() == Limit::Hinf || e.limit_kind() == Limit::E0) return EnvelopeExpr::atom(lift(AtomEnvelope{}));
                throw ContractViolation("Mizohata solution section needs summable right-hand sides, got " + e.str());
            case EnvelopeExpr::Kind::Max:
            case EnvelopeExpr::Kind::Min: break;
        }
        std::vector<EnvelopeExpr> c;
        for (const auto& ch : e.children()) c.push_back(go(ch));
        return e.kind() == EnvelopeExpr::Kind::Max ? EnvelopeExpr::max(std::move(c)) : EnvelopeExpr::min(std::move(c));
    };
    SolutionSection s;
    s.section = {go(g.generator)};
    s.provenance = Provenance::PaperClaim;
    s.containment = SpaceTag::l1_fact_dual(1);
    s.note =
        "factorial class from the column recurrence; containment in l1*(|k1|!) is the stated claim. Exact solves show "
        "columns with |k2| = 1 growing like 2^|k1| |k1|!, beyond that class";
    return s;
}

/// Least-squares fit of log|u_k| against log(1+k.k), log|k1|! and log|k2|!,
/// each coefficient rounded up to a multiple of 1/4.
AtomEnvelope fit_factorial_atom(const TrigSeries& u) {
    double ata[3][4] = {};
    for (const auto& [k, c] : u.coeffs()) {
        if (c.is_zero()) continue;
        const double x[3] = {std::log1p(static_cast<double>(k.norm_sq())), std::lgamma(std::labs(k.k1) + 1.0),
                             std::lgamma(std::labs(k.k2) + 1.0)};
        const double y = 0.5 * log_abs(c.norm_sq());
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) ata[i][j] += x[i] * x[j];
            ata[i][3] += x[i] * y;
        }
    }
    for (int i = 0; i < 3; ++i) ata[i][i] += 1e-9;
    for (int i = 0; i < 3; ++i)
        for (int r = i + 1; r < 3; ++r) {
            const double f = ata[r][i] / ata[i][i];
            for (int j = i; j < 4; ++j) ata[r][j] -= f * ata[i][j];
        }
    double beta[3];
    for (int i = 2; i >= 0; --i) {
        double v = ata[i][3];
        for (int j = i + 1; j < 3; ++j) v -= ata[i][j] * beta[j];
        beta[i] = v / ata[i][i];
    }
    auto up = [](double v) { return Rational(static_cast<long>(std::ceil(v * 4 - 1e-6)), 4); };
    AtomEnvelope a;
    a.a = up(beta[0]);
    a.c1 = up(beta[1]);
    a.c2 = up(beta[2]);
    for (Rational* r : {&a.a, &a.c1, &a.c2}) r->canonicalize();
    return a;
}

SolutionSection empirical_solution_section(const TorusOperator& l) {
    const long r = std::max<long>(10, 2 * std::max(l.s1(), l.s2()) + 10);
    const Box box = Box::centered(r, r);
    // Equations on the column k1 = min n1 and the row k2 = min n2 see only trace
    // values, so f vanishes there to stay consistent with zero traces.
    long n1 = std::numeric_limits<long>::max(), n2 = n1;
    for (const auto& [n, p] : l.freq_form()) {
        n1 = std::min(n1, n.k1);
        n2 = std::min(n2, n.k2);
    }
    TrigSeries::CoeffMap ones;
    box.shrink(l.s1(), l.s2())->for_each([&](const LatticeIndex& k) {
        if (k.k1 != n1 && k.k2 != n2) ones.emplace(k, GaussianRational(1));
    });
    TraceData zero;
    for (long p = 0; p <= l.s1(); ++p) zero.col_traces.push_back(TrigSeries::truncated(Box{0, 0, -r, r}, {}));
    for (long q = 0; q <= l.s2(); ++q) zero.row_traces.push_back(TrigSeries::truncated(Box{-r, r, 0, 0}, {}));
    const GeneralSolution sol = reconstruct_general(l, zero, box, TrigSeries::polynomial(std::move(ones)));
    const std::string where = "sampled from an exact solve with f = 1 off the trace cross on " + box.str() + " and zero traces";
    SolutionSection s;
    s.provenance = Provenance::Empirical;
    const GrowthReport g = classify_growth(sol.u);
    if (g.tag) {
        s.section = section_from_tag(*g.tag);
        s.containment = g.tag;
        s.note = where + "; growth model " + g.model;
        return s;
    }
    s.section = {EnvelopeExpr::atom(fit_factorial_atom(sol.u))};
    s.note = where + "; beyond every classified space, least-squares factorial atom rounded up to quarters";
    return s;
}

}  // namespace

SolutionSection solution_section(const TorusOperator& l, const Section& g) {
    if (l == TorusOperator::mizohata()) return mizohata_solution_section(g);
    const Assumption1Result a1 = check_assumption1(l, Box::centered(16, 16));
    if (a1.status == Assumption1Status::Fails)
        throw ContractViolation("non-degeneracy fails: P_n(m) = 0 at n = " + a1.n->str() + ", m = " + a1.m->str());
    if (!l.is_constant_coefficient()) return empirical_solution_section(l);

    // |P_0(k)| >= C (1+k.k)^kappa for k != 0; kappa = 0 always works since P_0 takes
    // values in (1/D) Z[i].
    const SymbolPolynomial p0 = l.symbol_at({0, 0});
    Rational kappa(0);
    std::string how = "values of P_0 are bounded away from 0 on Z^2 \\ {0}";
    if (p0.is_real() && p0.is_homogeneous() && p0.degree() >= 2) {
        const HypoReport rep = classify(HomogeneousPoly::from_symbol(p0));
        if (rep.verdict == HypoVerdict::HypoellipticCertified && rep.certified_k1) {
            kappa = *rep.certified_k1;
            how = "certified |P_0(k)| >= C (k.k)^" + to_string(kappa) + " (" + rep.branch + ")";
        }
    }
    SolutionSection s;
    s.section = {g.generator.map_atoms([&](const AtomEnvelope& a) {
        AtomEnvelope out = a;
        out.a -= kappa;
        return out;
    })};
    s.provenance = a1.status == Assumption1Status::HoldsCertified ? Provenance::Exact : Provenance::Empirical;
    s.note = how + "; u_0 is free where P_0(0) = 0";
    if (a1.status == Assumption1Status::HoldsOnBox) s.note += "; non-degeneracy only checked on [-16,16]^2";
    return s;
}

}  // namespace torus
