#pragma once

#include "torus/gaussian.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

namespace torus {

/// Sparse linear system A x = b over Q(i).
struct SparseSystem {
    std::size_t unknowns = 0;
    std::vector<std::map<std::size_t, GaussianRational>> rows;
    std::vector<GaussianRational> rhs;

    void add_row(std::map<std::size_t, GaussianRational> row, GaussianRational b);
};

struct LinearSolution {
    bool consistent = true;
    std::optional<std::size_t> inconsistent_row;  ///< an original row reducing to 0 = b != 0
    std::size_t rank = 0;
    bool unique = false;                          ///< rank == unknowns
    std::vector<GaussianRational> x;              ///< free unknowns set to zero
};

/// Exact sparse Gauss-Jordan elimination; the pivot row is always one with the
/// fewest nonzeros, which keeps banded recurrence systems banded.
LinearSolution solve_sparse(const SparseSystem& s);

/// Fraction-free (Bareiss) elimination on the dense matrix with rows scaled to
/// Gaussian integers. Cubic; meant for small systems and cross-checks.
LinearSolution solve_dense_bareiss(const SparseSystem& s);

}  // namespace torus
