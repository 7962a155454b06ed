#pragma once

#include "torus/gaussian.hpp"
#include "torus/lattice.hpp"

#include <map>
#include <optional>

namespace torus {

/// Formal trigonometric series sum u_k e^{ikx} on the 2-torus, stored sparsely.
///
/// A series either is a trigonometric polynomial (every unstored coefficient is
/// zero on all of Z^2) or is truncated to a window: coefficients are asserted
/// complete only inside the window, and nothing is known outside it. Zero
/// coefficients are never stored and every stored index lies in the window.
class TrigSeries {
public:
    using CoeffMap = std::map<LatticeIndex, GaussianRational>;

    TrigSeries() = default;

    static TrigSeries polynomial(CoeffMap coeffs);
    /// Throws std::invalid_argument if a nonzero coefficient lies outside `window`.
    static TrigSeries truncated(const Box& window, CoeffMap coeffs);

    static TrigSeries delta(const LatticeIndex& k, GaussianRational c = GaussianRational(1));
    static TrigSeries constant(GaussianRational c) { return delta({0, 0}, std::move(c)); }

    bool is_polynomial() const { return !window_.has_value(); }
    /// Completeness window; std::nullopt for trigonometric polynomials.
    const std::optional<Box>& window() const { return window_; }
    /// Window for truncated series, smallest box holding the support for polynomials.
    Box effective_box() const;

    bool is_complete_at(const LatticeIndex& k) const { return !window_ || window_->contains(k); }
    bool is_complete_on(const Box& b) const { return !window_ || window_->contains(b); }

    const CoeffMap& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    std::size_t nnz() const { return coeffs_.size(); }

    /// Coefficient at k; zero when unstored. Does not check completeness.
    GaussianRational coeff(const LatticeIndex& k) const;
    /// As coeff(), but throws std::out_of_range outside the completeness window.
    GaussianRational at(const LatticeIndex& k) const;

    /// max |k1| and max |k2| over the support.
    LatticeIndex support_radius() const;

    /// Same coefficients restricted to `b` (intersected with the current window).
    TrigSeries restrict(const Box& b) const;

    friend bool operator==(const TrigSeries&, const TrigSeries&) = default;

private:
    TrigSeries(std::optional<Box> window, CoeffMap coeffs);

    std::optional<Box> window_;
    CoeffMap coeffs_;
};

enum class Parity { Even, Odd };

TrigSeries add(const TrigSeries& u, const TrigSeries& v);
TrigSeries subtract(const TrigSeries& u, const TrigSeries& v);
TrigSeries scale(const GaussianRational& c, const TrigSeries& u);
/// Multiplication by e^{inx}: coefficients and window move by n.
TrigSeries shift(const TrigSeries& u, const LatticeIndex& n);

/// Function product (index convolution). At least one factor must be a
/// trigonometric polynomial; the result window shrinks by its support radius.
TrigSeries multiply(const TrigSeries& t, const TrigSeries& u);

/// Coefficientwise product (v*h)_k = v_k h_k.
TrigSeries mul_coeffwise(const TrigSeries& v, const TrigSeries& h);

/// <u, v> = sum_k u_k conj(v_k). One argument must be a trigonometric polynomial
/// and the other must be complete on its support.
GaussianRational pairing(const TrigSeries& u, const TrigSeries& v);

/// Pairing along x1 with a trigonometric polynomial t(x1):
///   <u, t>_{x1} = sum_n ( sum_m u_{m,n} conj(t_{-m}) ) e^{i n x2}.
/// The result is a series in x2, stored on the k1 = 0 axis.
TrigSeries partial_pairing_x1(const TrigSeries& u, const TrigSeries& t);
/// Pairing along x2 with t(x2); the result is a series in x1 stored on the k2 = 0 axis.
TrigSeries partial_pairing_x2(const TrigSeries& u, const TrigSeries& t);

/// Even or odd part in the given axis (1 or 2). The window must be symmetric in that axis.
TrigSeries parity_project(const TrigSeries& u, int axis, Parity parity);

/// True when u_{-k} = +-u_k for the reflection in `axis`, for every k in the window.
bool has_parity(const TrigSeries& u, int axis, Parity parity, LatticeIndex* violation = nullptr);

/// sum (1 + k.k)^m |u_k|^2 over the stored coefficients. Exact for integer m,
/// a rational enclosure otherwise.
RationalInterval sobolev_norm_sq(const TrigSeries& u, const Rational& m, unsigned bits = 64);

}  // namespace torus
