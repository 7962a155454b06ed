#include "torus/linsolve.hpp"

#include <set>
#include <stdexcept>

namespace torus {

void SparseSystem::add_row(std::map<std::size_t, GaussianRational> row, GaussianRational b) {
    std::erase_if(row, [](const auto& kv) { return kv.second.is_zero(); });
    for (const auto& [c, _] : row)
        if (c >= unknowns) throw std::out_of_range("linear system row references unknown " + std::to_string(c));
    rows.push_back(std::move(row));
    rhs.push_back(std::move(b));
}

namespace {

using Row = std::map<std::size_t, GaussianRational>;

LinearSolution back_substitute(std::size_t unknowns, const std::vector<std::pair<std::size_t, std::size_t>>& pivots,
                               const std::vector<Row>& rows, const std::vector<GaussianRational>& rhs) {
    LinearSolution sol;
    sol.rank = pivots.size();
    sol.unique = sol.rank == unknowns;
    sol.x.assign(unknowns, GaussianRational());
    for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
        const auto [r, c] = *it;
        GaussianRational acc = rhs[r];
        for (const auto& [j, a] : rows[r])
            if (j != c) acc -= a * sol.x[j];
        sol.x[c] = acc / rows[r].at(c);
    }
    return sol;
}

}  // namespace

LinearSolution solve_sparse(const SparseSystem& s) {
    std::vector<Row> rows = s.rows;
    std::vector<GaussianRational> rhs = s.rhs;
    std::vector<std::set<std::size_t>> col_rows(s.unknowns);
    std::set<std::pair<std::size_t, std::size_t>> queue;  // (nnz, row) over active rows
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (const auto& [c, _] : rows[r]) col_rows[c].insert(r);
        queue.insert({rows[r].size(), r});
    }
    std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, column) in elimination order
    while (!queue.empty()) {
        const auto [nnz, r] = *queue.begin();
        queue.erase(queue.begin());
        if (nnz == 0) {
            if (!rhs[r].is_zero()) {
                LinearSolution bad;
                bad.consistent = false;
                bad.inconsistent_row = r;
                return bad;
            }
            continue;
        }
        // Pivot column: the entry of r shared with the fewest other rows.
        std::size_t c = rows[r].begin()->first;
        for (const auto& [j, _] : rows[r])
            if (col_rows[j].size() < col_rows[c].size()) c = j;
        const GaussianRational piv = rows[r].at(c);
        for (const auto& [j, _] : rows[r]) col_rows[j].erase(r);
        pivots.emplace_back(r, c);

        const std::vector<std::size_t> targets(col_rows[c].begin(), col_rows[c].end());
        for (std::size_t t : targets) {
            queue.erase({rows[t].size(), t});
            const GaussianRational factor = rows[t].at(c) / piv;
            for (const auto& [j, a] : rows[r]) {
                GaussianRational& cell = rows[t][j];
                const bool was_zero = cell.is_zero();
                cell -= factor * a;
                if (cell.is_zero()) {
                    rows[t].erase(j);
                    col_rows[j].erase(t);
                } else if (was_zero) {
                    col_rows[j].insert(t);
                }
            }
            rhs[t] -= factor * rhs[r];
            queue.insert({rows[t].size(), t});
        }
    }
    // Pivot rows were frozen when chosen, so later pivot columns may still appear
    // in earlier pivot rows; back substitution in reverse order handles that.
    return back_substitute(s.unknowns, pivots, rows, rhs);
}

LinearSolution solve_dense_bareiss(const SparseSystem& s) {
    const std::size_t m = s.rows.size();
    const std::size_t n = s.unknowns;
    // Augmented matrix scaled row-wise to Gaussian integers.
    std::vector<std::vector<GaussianRational>> a(m, std::vector<GaussianRational>(n + 1));
    for (std::size_t r = 0; r < m; ++r) {
        Integer den(1);
        auto absorb = [&den](const GaussianRational& z) {
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), z.re().get_den().get_mpz_t());
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), z.im().get_den().get_mpz_t());
        };
        for (const auto& [c, v] : s.rows[r]) absorb(v);
        absorb(s.rhs[r]);
        const GaussianRational scale{Rational(den)};
        for (const auto& [c, v] : s.rows[r]) a[r][c] = v * scale;
        a[r][n] = s.rhs[r] * scale;
    }
    GaussianRational prev(1);
    std::size_t row = 0;
    std::vector<std::size_t> pivot_col;
    for (std::size_t col = 0; col < n && row < m; ++col) {
        std::size_t p = row;
        while (p < m && a[p][col].is_zero()) ++p;
        if (p == m) continue;
        std::swap(a[p], a[row]);
        for (std::size_t i = row + 1; i < m; ++i) {
            for (std::size_t j = col + 1; j <= n; ++j) a[i][j] = (a[row][col] * a[i][j] - a[i][col] * a[row][j]) / prev;
            a[i][col] = GaussianRational();
        }
        prev = a[row][col];
        pivot_col.push_back(col);
        ++row;
    }
    LinearSolution sol;
    for (std::size_t i = row; i < m; ++i)
        if (!a[i][n].is_zero()) {
            sol.consistent = false;
            return sol;
        }
    sol.rank = row;
    sol.unique = row == n;
    sol.x.assign(n, GaussianRational());
    for (std::size_t k = row; k-- > 0;) {
        const std::size_t c = pivot_col[k];
        GaussianRational acc = a[k][n];
        for (std::size_t j = c + 1; j < n; ++j) acc -= a[k][j] * sol.x[j];
        sol.x[c] = acc / a[k][c];
    }
    return sol;
}

}  // namespace torus
