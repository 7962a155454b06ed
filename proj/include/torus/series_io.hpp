#pragma once

#include "torus/trig_series.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace torus {

/// Input error carrying a 1-based line/column position.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line, int column)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// Text record set:
///   box n1_min n1_max n2_min n2_max      (or "box all" for a trigonometric polynomial)
///   k1 k2 re_num/re_den im_num/im_den    (one line per nonzero coefficient)
/// Blank lines and '#' comments are ignored on input. Output is canonical:
/// lexicographic index order, every rational as "num/den".
std::string write_series_text(const TrigSeries& u);
TrigSeries parse_series_text(std::string_view text);

/// Structured form: {"box": [n1_min, n1_max, n2_min, n2_max] | null,
///                   "coeffs": [[k1, k2, "re", "im"], ...]}
nlohmann::json series_to_json(const TrigSeries& u);
TrigSeries series_from_json(const nlohmann::json& j);

}  // namespace torus
