#include "facref/uncertainty.hpp"

#include <cmath>

#include <boost/math/distributions/normal.hpp>
#include <fmt/format.h>

#include "facref/errors.hpp"

namespace facref {

double sigma_from_error(double e, double z) {
    if (!(e > 0.0) || !(z > 0.0)) throw ConfigError("error and z value must be positive");
    return (e / 2.0) / z;
}

double z_for_confidence(double cl) {
    if (!(cl > 0.0 && cl < 1.0)) throw ConfigError(fmt::format("confidence level {} outside (0,1)", cl));
    const boost::math::normal standard;
    return boost::math::quantile(standard, 0.5 + cl / 2.0);
}

void validate_uncertainty(const UncertaintySpec& s, double z_tolerance) {
    if (!(s.e1 > 0.0) || !(s.e2 > 0.0)) throw ConfigError("uncertainty errors e1, e2 must be positive");
    const double z1 = z_for_confidence(s.cl1);
    const double z2 = z_for_confidence(s.cl2);
    if (std::abs(z1 - s.z1) > z_tolerance) {
        throw ConfigError(fmt::format("uncertainty.z1 = {} does not match CL {} (expected {:.3f})", s.z1, s.cl1, z1));
    }
    if (std::abs(z2 - s.z2) > z_tolerance) {
        throw ConfigError(fmt::format("uncertainty.z2 = {} does not match CL {} (expected {:.3f})", s.z2, s.cl2, z2));
    }
}

FacadeConfidence combine_sigmas(double s1, double s2, double cl) {
    if (!(s1 >= 0.0) || !(s2 >= 0.0) || !(s1 + s2 > 0.0)) throw ConfigError("sigmas must be non-negative and not both zero");
    FacadeConfidence out;
    out.sigma = std::hypot(s1, s2);
    // Round the 2-sigma band up to whole centimeters; the epsilon keeps exact
    // centimeter values from being bumped by representation error.
    out.upper_ci = std::ceil(2.0 * out.sigma * 100.0 - 1e-9) / 100.0;
    out.cl = cl;
    return out;
}

FacadeConfidence combine(const UncertaintySpec& s) {
    return combine_sigmas(sigma_from_error(s.e1, s.z1), sigma_from_error(s.e2, s.z2), std::min(s.cl1, s.cl2));
}

}  // namespace facref
