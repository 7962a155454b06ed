#pragma once

#include "torus/rational.hpp"

#include <string>
#include <variant>

namespace torus {

/// Names the generalized-function spaces the toolkit classifies against.
struct SpaceTag {
    enum class Kind { Hm, Hinf, HminusInf, E0, E0dual, L1Fact, L1FactDual };

    Kind kind = Kind::Hinf;
    Rational m{0};  ///< Sobolev index, Hm only
    int axis = 1;   ///< factorial axis, L1Fact / L1FactDual only

    static SpaceTag hm(Rational m) { return {Kind::Hm, std::move(m), 1}; }
    static SpaceTag hinf() { return {Kind::Hinf, Rational(0), 1}; }
    static SpaceTag hminus_inf() { return {Kind::HminusInf, Rational(0), 1}; }
    static SpaceTag e0() { return {Kind::E0, Rational(0), 1}; }
    static SpaceTag e0_dual() { return {Kind::E0dual, Rational(0), 1}; }
    static SpaceTag l1_fact(int axis) { return {Kind::L1Fact, Rational(0), axis}; }
    static SpaceTag l1_fact_dual(int axis) { return {Kind::L1FactDual, Rational(0), axis}; }

    friend bool operator==(const SpaceTag& a, const SpaceTag& b) {
        if (a.kind != b.kind) return false;
        if (a.kind == Kind::Hm) return a.m == b.m;
        if (a.kind == Kind::L1Fact || a.kind == Kind::L1FactDual) return a.axis == b.axis;
        return true;
    }

    /// "H^3", "H^inf", "E0*", "l1(|k1|!)", "l1*(|k2|!)", ...
    std::string str() const;
};

/// Hm <-> H(-m), Hinf <-> HminusInf, E0 <-> E0dual, L1Fact <-> L1FactDual.
SpaceTag dual_space(const SpaceTag& tag);

/// Parses the str() form back. Throws std::invalid_argument.
SpaceTag parse_space_tag(const std::string& text);

}  // namespace torus
