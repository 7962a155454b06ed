#include "torus/lattice.hpp"

#include <algorithm>
#include <stdexcept>

namespace torus {

Box Box::make(long n1_min, long n1_max, long n2_min, long n2_max) {
    if (n1_min > n1_max || n2_min > n2_max)
        throw std::invalid_argument("invalid box [" + std::to_string(n1_min) + "," + std::to_string(n1_max) + "]x[" +
                                    std::to_string(n2_min) + "," + std::to_string(n2_max) + "]");
    return {n1_min, n1_max, n2_min, n2_max};
}

Box Box::centered(long r1, long r2) { return make(-r1, r1, -r2, r2); }

std::optional<Box> Box::shrink(long m1, long m2) const {
    Box b{n1_min + m1, n1_max - m1, n2_min + m2, n2_max - m2};
    if (b.n1_min > b.n1_max || b.n2_min > b.n2_max) return std::nullopt;
    return b;
}

std::optional<Box> Box::intersect(const Box& o) const {
    Box b{std::max(n1_min, o.n1_min), std::min(n1_max, o.n1_max), std::max(n2_min, o.n2_min),
          std::min(n2_max, o.n2_max)};
    if (b.n1_min > b.n1_max || b.n2_min > b.n2_max) return std::nullopt;
    return b;
}

std::string Box::str() const {
    return "[" + std::to_string(n1_min) + "," + std::to_string(n1_max) + "]x[" + std::to_string(n2_min) + "," +
           std::to_string(n2_max) + "]";
}

}  // namespace torus
