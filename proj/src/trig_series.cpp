#include "torus/trig_series.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace torus {

namespace {

void insert_nonzero(TrigSeries::CoeffMap& m, const LatticeIndex& k, GaussianRational c) {
    if (!c.is_zero()) m.insert_or_assign(k, std::move(c));
}

void accumulate(TrigSeries::CoeffMap& m, const LatticeIndex& k, const GaussianRational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = m.try_emplace(k, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) m.erase(it);
    }
}

std::optional<Box> intersect_windows(const std::optional<Box>& a, const std::optional<Box>& b) {
    if (!a) return b;
    if (!b) return a;
    auto w = a->intersect(*b);
    if (!w) throw std::invalid_argument("series windows " + a->str() + " and " + b->str() + " are disjoint");
    return w;
}

LatticeIndex reflect(const LatticeIndex& k, int axis) { return axis == 1 ? LatticeIndex{-k.k1, k.k2} : LatticeIndex{k.k1, -k.k2}; }

}  // namespace

TrigSeries::TrigSeries(std::optional<Box> window, CoeffMap coeffs) : window_(window), coeffs_(std::move(coeffs)) {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        if (it->second.is_zero()) {
            it = coeffs_.erase(it);
            continue;
        }
        if (window_ && !window_->contains(it->first))
            throw std::invalid_argument("coefficient at " + it->first.str() + " lies outside window " + window_->str());
        ++it;
    }
}

TrigSeries TrigSeries::polynomial(CoeffMap coeffs) { return TrigSeries(std::nullopt, std::move(coeffs)); }

TrigSeries TrigSeries::truncated(const Box& window, CoeffMap coeffs) { return TrigSeries(window, std::move(coeffs)); }

TrigSeries TrigSeries::delta(const LatticeIndex& k, GaussianRational c) {
    CoeffMap m;
    insert_nonzero(m, k, std::move(c));
    return polynomial(std::move(m));
}

Box TrigSeries::effective_box() const {
    if (window_) return *window_;
    if (coeffs_.empty()) return Box{0, 0, 0, 0};
    Box b{coeffs_.begin()->first.k1, coeffs_.rbegin()->first.k1, coeffs_.begin()->first.k2,
          coeffs_.begin()->first.k2};
    for (const auto& [k, _] : coeffs_) {
        b.n2_min = std::min(b.n2_min, k.k2);
        b.n2_max = std::max(b.n2_max, k.k2);
    }
    return b;
}

GaussianRational TrigSeries::coeff(const LatticeIndex& k) const {
    auto it = coeffs_.find(k);
    return it == coeffs_.end() ? GaussianRational() : it->second;
}

GaussianRational TrigSeries::at(const LatticeIndex& k) const {
    if (!is_complete_at(k)) throw std::out_of_range("coefficient " + k.str() + " outside window " + window_->str());
    return coeff(k);
}

LatticeIndex TrigSeries::support_radius() const {
    LatticeIndex r{0, 0};
    for (const auto& [k, _] : coeffs_) {
        r.k1 = std::max(r.k1, std::labs(k.k1));
        r.k2 = std::max(r.k2, std::labs(k.k2));
    }
    return r;
}

TrigSeries TrigSeries::restrict(const Box& b) const {
    Box w = b;
    if (window_) {
        auto i = window_->intersect(b);
        if (!i) throw std::invalid_argument("restriction box " + b.str() + " misses window " + window_->str());
        w = *i;
    }
    CoeffMap m;
    for (const auto& [k, c] : coeffs_)
        if (w.contains(k)) m.emplace(k, c);
    return truncated(w, std::move(m));
}

TrigSeries add(const TrigSeries& u, const TrigSeries& v) {
    auto w = intersect_windows(u.window(), v.window());
    TrigSeries::CoeffMap m;
    for (const auto& [k, c] : u.coeffs())
        if (!w || w->contains(k)) accumulate(m, k, c);
    for (const auto& [k, c] : v.coeffs())
        if (!w || w->contains(k)) accumulate(m, k, c);
    return w ? TrigSeries::truncated(*w, std::move(m)) : TrigSeries::polynomial(std::move(m));
}

TrigSeries scale(const GaussianRational& c, const TrigSeries& u) {
    TrigSeries::CoeffMap m;
    if (!c.is_zero())
        for (const auto& [k, a] : u.coeffs()) m.emplace(k, c * a);
    return u.window() ? TrigSeries::truncated(*u.window(), std::move(m)) : TrigSeries::polynomial(std::move(m));
}

TrigSeries subtract(const TrigSeries& u, const TrigSeries& v) { return add(u, scale(GaussianRational(-1), v)); }

TrigSeries shift(const TrigSeries& u, const LatticeIndex& n) {
    TrigSeries::CoeffMap m;
    for (const auto& [k, c] : u.coeffs()) m.emplace(k + n, c);
    return u.window() ? TrigSeries::truncated(u.window()->translate(n), std::move(m))
                      : TrigSeries::polynomial(std::move(m));
}

TrigSeries multiply(const TrigSeries& t, const TrigSeries& u) {
    if (!t.is_polynomial()) {
        if (u.is_polynomial()) return multiply(u, t);
        throw std::invalid_argument("multiply: neither factor is a trigonometric polynomial");
    }
    std::optional<Box> w;
    if (u.window()) {
        const LatticeIndex r = t.support_radius();
        w = u.window()->shrink(r.k1, r.k2);
        if (!w) throw std::invalid_argument("multiply: window " + u.window()->str() + " too small for factor radius " + r.str());
    }
    TrigSeries::CoeffMap m;
    for (const auto& [n, tn] : t.coeffs())
        for (const auto& [k, uk] : u.coeffs()) {
            const LatticeIndex out = n + k;
            if (!w || w->contains(out)) accumulate(m, out, tn * uk);
        }
    return w ? TrigSeries::truncated(*w, std::move(m)) : TrigSeries::polynomial(std::move(m));
}

TrigSeries mul_coeffwise(const TrigSeries& v, const TrigSeries& h) {
    auto w = intersect_windows(v.window(), h.window());
    TrigSeries::CoeffMap m;
    const auto& small = v.nnz() <= h.nnz() ? v : h;
    const auto& other = &small == &v ? h : v;
    for (const auto& [k, c] : small.coeffs()) {
        if (w && !w->contains(k)) continue;
        auto it = other.coeffs().find(k);
        if (it != other.coeffs().end()) insert_nonzero(m, k, c * it->second);
    }
    return w ? TrigSeries::truncated(*w, std::move(m)) : TrigSeries::polynomial(std::move(m));
}

GaussianRational pairing(const TrigSeries& u, const TrigSeries& v) {
    if (!u.is_polynomial() && !v.is_polynomial())
        throw std::invalid_argument("pairing: both arguments are truncated series");
    const bool u_finite = u.is_polynomial() && (!v.is_polynomial() || u.nnz() <= v.nnz());
    const TrigSeries& fin = u_finite ? u : v;
    const TrigSeries& other = u_finite ? v : u;
    GaussianRational sum;
    for (const auto& [k, c] : fin.coeffs()) {
        const GaussianRational o = other.at(k);
        sum += u_finite ? c * o.conj() : o * c.conj();
    }
    return sum;
}

namespace {

TrigSeries partial_pairing(const TrigSeries& u, const TrigSeries& t, int axis) {
    if (!t.is_polynomial()) throw std::invalid_argument("partial pairing: second argument must be a trigonometric polynomial");
    // t(x_axis): stored on the axis line; collect its one-variable coefficients.
    std::map<long, GaussianRational> tc;
    for (const auto& [k, c] : t.coeffs()) {
        const long other = axis == 1 ? k.k2 : k.k1;
        if (other != 0)
            throw std::invalid_argument("partial pairing: trigonometric polynomial depends on both variables at " + k.str());
        tc.emplace(axis == 1 ? k.k1 : k.k2, c);
    }
    std::optional<Box> w;
    if (u.window()) {
        const Box& b = *u.window();
        for (const auto& [m, _] : tc) {
            const long need = -m;
            const bool ok = axis == 1 ? (b.n1_min <= need && need <= b.n1_max) : (b.n2_min <= need && need <= b.n2_max);
            if (!ok) throw std::invalid_argument("partial pairing: window " + b.str() + " lacks index " + std::to_string(need));
        }
        w = axis == 1 ? Box{0, 0, b.n2_min, b.n2_max} : Box{b.n1_min, b.n1_max, 0, 0};
    }
    TrigSeries::CoeffMap out;
    for (const auto& [k, c] : u.coeffs()) {
        const long along = axis == 1 ? k.k1 : k.k2;
        auto it = tc.find(-along);
        if (it == tc.end()) continue;
        const LatticeIndex target = axis == 1 ? LatticeIndex{0, k.k2} : LatticeIndex{k.k1, 0};
        accumulate(out, target, c * it->second.conj());
    }
    return w ? TrigSeries::truncated(*w, std::move(out)) : TrigSeries::polynomial(std::move(out));
}

}  // namespace

TrigSeries partial_pairing_x1(const TrigSeries& u, const TrigSeries& t) { return partial_pairing(u, t, 1); }
TrigSeries partial_pairing_x2(const TrigSeries& u, const TrigSeries& t) { return partial_pairing(u, t, 2); }

TrigSeries parity_project(const TrigSeries& u, int axis, Parity parity) {
    if (axis != 1 && axis != 2) throw std::invalid_argument("axis must be 1 or 2");
    if (u.window() && !u.window()->symmetric_in(axis))
        throw std::invalid_argument("parity projection needs a window symmetric in x" + std::to_string(axis) + ", got " +
                                    u.window()->str());
    const GaussianRational half(Rational(1, 2));
    const GaussianRational sign(parity == Parity::Even ? 1 : -1);
    TrigSeries::CoeffMap m;
    for (const auto& [k, c] : u.coeffs()) {
        accumulate(m, k, half * c);
        accumulate(m, reflect(k, axis), half * sign * c);
    }
    return u.window() ? TrigSeries::truncated(*u.window(), std::move(m)) : TrigSeries::polynomial(std::move(m));
}

bool has_parity(const TrigSeries& u, int axis, Parity parity, LatticeIndex* violation) {
    const GaussianRational sign(parity == Parity::Even ? 1 : -1);
    for (const auto& [k, c] : u.coeffs()) {
        const LatticeIndex r = reflect(k, axis);
        if (!u.is_complete_at(r)) continue;
        if (!(u.coeff(r) == sign * c)) {
            if (violation) *violation = k;
            return false;
        }
    }
    return true;
}

RationalInterval sobolev_norm_sq(const TrigSeries& u, const Rational& m, unsigned bits) {
    const bool integral = m.get_den() == 1;
    RationalInterval total{Rational(0), Rational(0)};
    for (const auto& [k, c] : u.coeffs()) {
        const Rational weight_base(1 + k.norm_sq());
        const Rational mag = c.norm_sq();
        if (integral) {
            const Rational w = pow_int(weight_base, m.get_num().get_si());
            total.lo += w * mag;
            total.hi += w * mag;
            continue;
        }
        const Rational p = pow_int(weight_base, m.get_num().get_si());
        const RationalInterval w = root_enclosure(p, m.get_den().get_ui(), bits);
        total.lo += w.lo * mag;
        total.hi += w.hi * mag;
    }
    return total;
}

}  // namespace torus
