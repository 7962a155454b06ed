#pragma once

#include "torus/space_tag.hpp"
#include "torus/trig_series.hpp"

#include <optional>
#include <string>
#include <vector>

namespace torus {

/// One least-squares model of log shell-maxima.
struct ModelFit {
    std::string model;  ///< "polynomial", "exponential", "factorial"
    double slope = 0;
    double intercept = 0;
    double rel_residual = 0;  ///< sqrt(SS_res / SS_tot), 0 for constant data
    bool passed = false;
    std::optional<SpaceTag> tag;  ///< verdict this model implies; nullopt = beyond l1*(|k_i|!)
};

struct GrowthOptions {
    int min_shells = 8;
    double max_rel_residual = 0.1;
    double tie_tolerance = 0.02;
    double bounded_slope = 0.05;  ///< slope cap for "bounded" normalized maxima
};

/// HEURISTIC classification: finite data can only vote on asymptotics.
struct GrowthReport {
    std::optional<SpaceTag> tag;  ///< nullopt when growth exceeds every tag in the chain
    std::string model;            ///< winning model, or "eventually-zero" / "fallback"
    double exponent = 0;          ///< slope of the winning model
    int shells = 0;
    std::vector<double> shell_log_max;  ///< log max |u_k| on shell s (NaN when the shell is zero)
    std::vector<ModelFit> fits;
    bool heuristic = true;
};

/// Classifies u against H^inf < H^m < H^-inf < E0* < l1*(|k_i|!) using per-shell
/// maxima over max(|k1|,|k2|) = s. Throws std::invalid_argument when the
/// window holds fewer than options.min_shells complete shells.
GrowthReport classify_growth(const TrigSeries& u, const GrowthOptions& options = {});

/// Least-squares line through (x, y): returns {slope, intercept, rel_residual}.
ModelFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace torus
