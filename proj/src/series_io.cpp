#include "torus/series_io.hpp"

#include <cctype>
#include <charconv>
#include <sstream>
#include <vector>

namespace torus {

namespace {

struct Token {
    std::string_view text;
    int column;
};

std::vector<Token> split_tokens(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= line.size() || line[i] == '#') break;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#') ++i;
        out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
    }
    return out;
}

long parse_long(const Token& t, int line) {
    long v = 0;
    const auto* first = t.text.data();
    const auto* last = first + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw ParseError("expected integer, got '" + std::string(t.text) + "'", line, t.column);
    return v;
}

Rational parse_rat(const Token& t, int line) {
    try {
        return parse_rational(t.text);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), line, t.column);
    }
}

}  // namespace

std::string write_series_text(const TrigSeries& u) {
    std::ostringstream os;
    if (const auto& w = u.window())
        os << "box " << w->n1_min << ' ' << w->n1_max << ' ' << w->n2_min << ' ' << w->n2_max << '\n';
    else
        os << "box all\n";
    for (const auto& [k, c] : u.coeffs())
        os << k.k1 << ' ' << k.k2 << ' ' << to_pair_string(c.re()) << ' ' << to_pair_string(c.im()) << '\n';
    return os.str();
}

TrigSeries parse_series_text(std::string_view text) {
    std::optional<Box> window;
    bool have_header = false;
    TrigSeries::CoeffMap coeffs;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        const std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        const auto toks = split_tokens(line);
        if (toks.empty()) continue;
        if (!have_header) {
            if (toks[0].text != "box") throw ParseError("expected 'box' header", line_no, toks[0].column);
            if (toks.size() == 2 && toks[1].text == "all") {
                have_header = true;
                continue;
            }
            if (toks.size() != 5)
                throw ParseError("header needs 'box all' or four integers", line_no, toks.back().column);
            const long a = parse_long(toks[1], line_no), b = parse_long(toks[2], line_no);
            const long c = parse_long(toks[3], line_no), d = parse_long(toks[4], line_no);
            if (a > b || c > d) throw ParseError("empty box", line_no, toks[1].column);
            window = Box{a, b, c, d};
            have_header = true;
            continue;
        }
        if (toks.size() != 4)
            throw ParseError("expected 'k1 k2 re im', got " + std::to_string(toks.size()) + " fields", line_no, toks[0].column);
        const LatticeIndex k{parse_long(toks[0], line_no), parse_long(toks[1], line_no)};
        GaussianRational c(parse_rat(toks[2], line_no), parse_rat(toks[3], line_no));
        if (window && !window->contains(k))
            throw ParseError("index " + k.str() + " outside box " + window->str(), line_no, toks[0].column);
        if (coeffs.count(k)) throw ParseError("duplicate index " + k.str(), line_no, toks[0].column);
        if (!c.is_zero()) coeffs.emplace(k, std::move(c));
    }
    if (!have_header) throw ParseError("missing 'box' header", line_no == 0 ? 1 : line_no, 1);
    return window ? TrigSeries::truncated(*window, std::move(coeffs)) : TrigSeries::polynomial(std::move(coeffs));
}

nlohmann::json series_to_json(const TrigSeries& u) {
    nlohmann::json j;
    if (const auto& w = u.window())
        j["box"] = {w->n1_min, w->n1_max, w->n2_min, w->n2_max};
    else
        j["box"] = nullptr;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [k, c] : u.coeffs()) arr.push_back({k.k1, k.k2, to_pair_string(c.re()), to_pair_string(c.im())});
    j["coeffs"] = std::move(arr);
    return j;
}

TrigSeries series_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("coeffs")) throw std::invalid_argument("series object needs 'coeffs'");
    std::optional<Box> window;
    if (j.contains("box") && !j["box"].is_null()) {
        const auto& b = j["box"];
        if (!b.is_array() || b.size() != 4) throw std::invalid_argument("'box' must be [n1_min, n1_max, n2_min, n2_max]");
        window = Box::make(b[0].get<long>(), b[1].get<long>(), b[2].get<long>(), b[3].get<long>());
    }
    TrigSeries::CoeffMap coeffs;
    for (const auto& e : j["coeffs"]) {
        if (!e.is_array() || e.size() != 4) throw std::invalid_argument("coefficient entries are [k1, k2, re, im]");
        const LatticeIndex k{e[0].get<long>(), e[1].get<long>()};
        GaussianRational c(parse_rational(e[2].get<std::string>()), parse_rational(e[3].get<std::string>()));
        if (coeffs.count(k)) throw std::invalid_argument("duplicate index " + k.str());
        if (!c.is_zero()) coeffs.emplace(k, std::move(c));
    }
    return window ? TrigSeries::truncated(*window, std::move(coeffs)) : TrigSeries::polynomial(std::move(coeffs));
}

}  // namespace torus
