#include "torus/space_tag.hpp"

#include <stdexcept>

namespace torus {

std::string SpaceTag::str() const {
    switch (kind) {
        case Kind::Hm: return "H^" + to_string(m);
        case Kind::Hinf: return "H^inf";
        case Kind::HminusInf: return "H^-inf";
        case Kind::E0: return "E0";
        case Kind::E0dual: return "E0*";
        case Kind::L1Fact: return "l1(|k" + std::to_string(axis) + "|!)";
        case Kind::L1FactDual: return "l1*(|k" + std::to_string(axis) + "|!)";
    }
    return "?";
}

SpaceTag dual_space(const SpaceTag& tag) {
    using K = SpaceTag::Kind;
    switch (tag.kind) {
        case K::Hm: return SpaceTag::hm(-tag.m);
        case K::Hinf: return SpaceTag::hminus_inf();
        case K::HminusInf: return SpaceTag::hinf();
        case K::E0: return SpaceTag::e0_dual();
        case K::E0dual: return SpaceTag::e0();
        case K::L1Fact: return SpaceTag::l1_fact_dual(tag.axis);
        case K::L1FactDual: return SpaceTag::l1_fact(tag.axis);
    }
    throw std::logic_error("unknown space tag");
}

SpaceTag parse_space_tag(const std::string& text) {
    if (text == "H^inf") return SpaceTag::hinf();
    if (text == "H^-inf") return SpaceTag::hminus_inf();
    if (text == "E0") return SpaceTag::e0();
    if (text == "E0*") return SpaceTag::e0_dual();
    if (text.rfind("H^", 0) == 0) return SpaceTag::hm(parse_rational(text.substr(2)));
    for (int axis : {1, 2}) {
        const std::string suffix = "(|k" + std::to_string(axis) + "|!)";
        if (text == "l1" + suffix) return SpaceTag::l1_fact(axis);
        if (text == "l1*" + suffix) return SpaceTag::l1_fact_dual(axis);
    }
    throw std::invalid_argument("unknown space tag '" + text + "'");
}

}  // namespace torus
