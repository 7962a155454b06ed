#include "torus/gaussian.hpp"

namespace torus {

std::string GaussianRational::str() const {
    if (im_ == 0) return to_string(re_);
    std::string s;
    if (re_ != 0) s = to_string(re_) + (im_ > 0 ? "+" : "");
    return s + to_string(im_) + "i";
}

GaussianRational i_pow(long e) {
    switch (((e % 4) + 4) % 4) {
        case 0: return {Rational(1), Rational(0)};
        case 1: return {Rational(0), Rational(1)};
        case 2: return {Rational(-1), Rational(0)};
        default: return {Rational(0), Rational(-1)};
    }
}

GaussianRational pow(const GaussianRational& z, unsigned long e) {
    GaussianRational result(1);
    GaussianRational base = z;
    while (e > 0) {
        if (e & 1UL) result *= base;
        e >>= 1;
        if (e > 0) base *= base;
    }
    return result;
}

}  // namespace torus
