#pragma once

#include "torus/torus_operator.hpp"
#include "torus/trig_series.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace torus {

struct MizohataSolution {
    TrigSeries u;                   ///< odd in x1, truncated to the solve box
    Rational growth_constant;       ///< rational upper bound for c below
    Rational growth_constant_sq;    ///< exact min c^2 with |u_k| <= c (|k1|+1)! on the box
    Box residual_box;               ///< L u = f verified exactly here
};

/// Solves d_{x1}u + i sin(x1) d_{x2}u = f for the odd-in-x1 solution on `box`
/// (symmetric in k1, n1_max >= 1). f must be complete on the box, even in x1,
/// and have f_{0,0} = 0. Violations raise ContractViolation.
MizohataSolution solve_odd(const TrigSeries& f, const Box& box);

/// Even-in-x1 solution of L u = 0 on `box` with <u,1>_{x1} = u0 and
/// <u,e^{ix1}>_{x1} = u1 (both series in x2, stored on the k1 = 0 axis).
/// u1 must vanish at n = 0, where the equation forces u_{1,0} = 0.
TrigSeries reconstruct_homogeneous(const TrigSeries& u0, const TrigSeries& u1, const Box& box);

/// Traces of a solution for an operator with frequency radii (s1, s2):
///   col[p] = <u, e^{ipx1}>_{x1}, a series in x2 on the k1 = 0 axis, p = 0..s1
///   row[q] = <u, e^{iqx2}>_{x2}, a series in x1 on the k2 = 0 axis, q = 0..s2
struct TraceData {
    std::vector<TrigSeries> col_traces;
    std::vector<TrigSeries> row_traces;
};

TraceData extract_traces(const TrigSeries& u, long s1, long s2);

/// First (p, q), in lexicographic order, where <row[q], e^{ipx1}>_{x1} and
/// <col[p], e^{iqx2}>_{x2} disagree; nullopt when all overlaps agree.
std::optional<std::pair<long, long>> check_compatibility(const TraceData& traces);

struct GeneralSolution {
    TrigSeries u;
    bool unique = false;  ///< every coefficient in the box is determined
    std::size_t rank = 0;
    std::size_t unknowns = 0;
};

/// Solves (Lu)_k = f_k on the box shrunk by (s1, s2) together with the trace
/// constraints, exactly. f defaults to zero. Incompatible traces or an
/// inconsistent system raise ContractViolation; the box is capped at
/// max_width x max_width.
GeneralSolution reconstruct_general(const TorusOperator& l, const TraceData& traces, const Box& box,
                                    const std::optional<TrigSeries>& f = std::nullopt, long max_width = 64);

}  // namespace torus
