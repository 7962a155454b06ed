#pragma once

#include <compare>
#include <optional>
#include <ostream>
#include <string>

namespace torus {

/// Point k = (k1, k2) of Z^2; lexicographic order gives deterministic iteration.
struct LatticeIndex {
    long k1 = 0;
    long k2 = 0;

    friend auto operator<=>(const LatticeIndex&, const LatticeIndex&) = default;

    LatticeIndex operator+(const LatticeIndex& o) const { return {k1 + o.k1, k2 + o.k2}; }
    LatticeIndex operator-(const LatticeIndex& o) const { return {k1 - o.k1, k2 - o.k2}; }
    LatticeIndex operator-() const { return {-k1, -k2}; }

    long norm_sq() const { return k1 * k1 + k2 * k2; }
    std::string str() const { return "(" + std::to_string(k1) + "," + std::to_string(k2) + ")"; }
};

inline std::ostream& operator<<(std::ostream& os, const LatticeIndex& k) { return os << k.str(); }

/// Closed rectangle [n1_min, n1_max] x [n2_min, n2_max] of lattice points.
struct Box {
    long n1_min = 0;
    long n1_max = 0;
    long n2_min = 0;
    long n2_max = 0;

    /// Throws std::invalid_argument when min > max on either axis.
    static Box make(long n1_min, long n1_max, long n2_min, long n2_max);
    /// [-r1, r1] x [-r2, r2]
    static Box centered(long r1, long r2);

    friend bool operator==(const Box&, const Box&) = default;

    bool contains(const LatticeIndex& k) const {
        return n1_min <= k.k1 && k.k1 <= n1_max && n2_min <= k.k2 && k.k2 <= n2_max;
    }
    bool contains(const Box& b) const {
        return n1_min <= b.n1_min && b.n1_max <= n1_max && n2_min <= b.n2_min && b.n2_max <= n2_max;
    }
    long width1() const { return n1_max - n1_min + 1; }
    long width2() const { return n2_max - n2_min + 1; }
    long size() const { return width1() * width2(); }

    bool symmetric_in(int axis) const {
        return axis == 1 ? n1_min == -n1_max : n2_min == -n2_max;
    }

    /// Shrinks by margins on both sides; std::nullopt when nothing remains.
    std::optional<Box> shrink(long m1, long m2) const;
    Box translate(const LatticeIndex& n) const {
        return {n1_min + n.k1, n1_max + n.k1, n2_min + n.k2, n2_max + n.k2};
    }
    std::optional<Box> intersect(const Box& o) const;

    template <typename F>
    void for_each(F&& f) const {
        for (long a = n1_min; a <= n1_max; ++a)
            for (long b = n2_min; b <= n2_max; ++b) f(LatticeIndex{a, b});
    }

    std::string str() const;
};

inline std::ostream& operator<<(std::ostream& os, const Box& b) { return os << b.str(); }

}  // namespace torus
