#include "torus/growth.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace torus {

ModelFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    ModelFit f;
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw std::invalid_argument("fit_line needs at least two points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    f.slope = sxx > 0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        ss_res += r * r;
    }
    const double scale = 1e-20 * static_cast<double>(n) * (1.0 + my * my);
    f.rel_residual = syy <= scale ? 0.0 : std::sqrt(ss_res / syy);
    return f;
}

namespace {

// Lower is more regular; nullopt (beyond the chain) ranks last.
double regularity_rank(const std::optional<SpaceTag>& t) {
    if (!t) return 1e9;
    using K = SpaceTag::Kind;
    switch (t->kind) {
        case K::E0: return -1;
        case K::Hinf: return 0;
        case K::Hm: return 1.0 + 1.0 / (1.0 + std::exp(t->m.get_d() / 8.0));  // larger m ranks lower
        case K::HminusInf: return 2;
        case K::E0dual: return 3;
        case K::L1FactDual: return 4;
        default: return 5;
    }
}

struct ShellData {
    int shells = 0;
    std::vector<Rational> max_sq;                   // index s
    std::vector<std::array<double, 2>> norm_log;    // log max |u_k|/|k_i|! per axis
};

ShellData scan_shells(const TrigSeries& u, int shells) {
    ShellData d;
    d.shells = shells;
    d.max_sq.assign(static_cast<std::size_t>(shells) + 1, Rational(0));
    const double ninf = -std::numeric_limits<double>::infinity();
    d.norm_log.assign(static_cast<std::size_t>(shells) + 1, {ninf, ninf});
    for (const auto& [k, c] : u.coeffs()) {
        const long s = std::max(std::labs(k.k1), std::labs(k.k2));
        if (s > shells) continue;
        const auto si = static_cast<std::size_t>(s);
        const Rational m = c.norm_sq();
        if (m > d.max_sq[si]) d.max_sq[si] = m;
        const double lm = 0.5 * log_abs(m);
        for (int axis = 0; axis < 2; ++axis) {
            const long along = std::labs(axis == 0 ? k.k1 : k.k2);
            const double v = lm - std::lgamma(static_cast<double>(along) + 1.0);
            d.norm_log[si][static_cast<std::size_t>(axis)] = std::max(d.norm_log[si][static_cast<std::size_t>(axis)], v);
        }
    }
    return d;
}

// Axis whose factorial-normalized maxima stay bounded over the outer half of the shells.
std::optional<int> bounded_factorial_axis(const ShellData& d, double bounded_slope) {
    std::optional<int> best;
    double best_slope = std::numeric_limits<double>::infinity();
    for (int axis = 0; axis < 2; ++axis) {
        std::vector<double> x, y;
        for (int s = std::max(1, d.shells / 2); s <= d.shells; ++s) {
            const double v = d.norm_log[static_cast<std::size_t>(s)][static_cast<std::size_t>(axis)];
            if (!std::isfinite(v)) continue;
            x.push_back(std::log(1.0 + static_cast<double>(s) * s));
            y.push_back(v);
        }
        if (x.size() < 2) continue;
        const double slope = fit_line(x, y).slope;
        if (slope <= bounded_slope && slope < best_slope) {
            best_slope = slope;
            best = axis + 1;
        }
    }
    return best;
}

std::optional<SpaceTag> growth_beyond_exponential(const ShellData& d, double bounded_slope) {
    if (auto axis = bounded_factorial_axis(d, bounded_slope)) return SpaceTag::l1_fact_dual(*axis);
    return std::nullopt;
}

}  // namespace

GrowthReport classify_growth(const TrigSeries& u, const GrowthOptions& options) {
    GrowthReport report;
    if (u.is_polynomial()) {
        report.tag = SpaceTag::hinf();
        report.model = "eventually-zero";
        return report;
    }
    const Box& w = *u.window();
    const long shells = std::min({-w.n1_min, w.n1_max, -w.n2_min, w.n2_max});
    if (shells < options.min_shells)
        throw std::invalid_argument("classify_growth: window " + w.str() + " holds " + std::to_string(std::max(0L, shells)) +
                                    " complete shells, need " + std::to_string(options.min_shells));
    report.shells = static_cast<int>(shells);
    const ShellData d = scan_shells(u, report.shells);

    report.shell_log_max.reserve(d.max_sq.size());
    for (const auto& m : d.max_sq)
        report.shell_log_max.push_back(m == 0 ? std::numeric_limits<double>::quiet_NaN() : 0.5 * log_abs(m));

    bool tail_zero = true;
    for (int s = (report.shells + 1) / 2; s <= report.shells; ++s)
        if (d.max_sq[static_cast<std::size_t>(s)] != 0) tail_zero = false;
    if (tail_zero) {
        report.tag = SpaceTag::hinf();
        report.model = "eventually-zero";
        return report;
    }

    std::vector<double> xp, xe, xf, y;
    for (int s = 1; s <= report.shells; ++s) {
        const double v = report.shell_log_max[static_cast<std::size_t>(s)];
        if (std::isnan(v)) continue;
        const double sd = s;
        xp.push_back(std::log(1.0 + sd * sd));
        xe.push_back(sd);
        xf.push_back(std::lgamma(sd + 1.0));
        y.push_back(v);
    }
    if (y.size() < 3) throw std::invalid_argument("classify_growth: fewer than three nonzero shells");

    ModelFit poly = fit_line(xp, y);
    poly.model = "polynomial";
    // |u| ~ (1+k^2)^g lies in H^m exactly for m < -2g - 1
    poly.tag = SpaceTag::hm(approximate(-2.0 * poly.slope - 1.0, 4));

    ModelFit expo = fit_line(xe, y);
    expo.model = "exponential";
    expo.tag = expo.slope < 0 ? std::optional<SpaceTag>(SpaceTag::hinf())
                              : growth_beyond_exponential(d, options.bounded_slope);

    ModelFit fact = fit_line(xf, y);
    fact.model = "factorial";
    fact.tag = fact.slope < 0 ? std::optional<SpaceTag>(SpaceTag::hinf())
                              : growth_beyond_exponential(d, options.bounded_slope);

    report.fits = {poly, expo, fact};
    double best = std::numeric_limits<double>::infinity();
    for (auto& f : report.fits) {
        f.passed = f.rel_residual < options.max_rel_residual;
        if (f.passed) best = std::min(best, f.rel_residual);
    }
    const ModelFit* winner = nullptr;
    for (const auto& f : report.fits) {
        if (!f.passed || f.rel_residual > best + options.tie_tolerance) continue;
        if (!winner || regularity_rank(f.tag) < regularity_rank(winner->tag)) winner = &f;
    }
    if (winner) {
        report.tag = winner->tag;
        report.model = winner->model;
        report.exponent = winner->slope;
        return report;
    }

    // No model explains the data: subexponential growth votes E0*, otherwise
    // fall back to the factorial boundedness test.
    report.model = "fallback";
    report.exponent = expo.slope;
    if (std::fabs(expo.slope) <= options.bounded_slope && poly.slope > 0)
        report.tag = SpaceTag::e0_dual();
    else
        report.tag = growth_beyond_exponential(d, options.bounded_slope);
    return report;
}

}  // namespace torus
