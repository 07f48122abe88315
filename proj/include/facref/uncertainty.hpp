#pragma once

#include "facref/params.hpp"

namespace facref {

/// Combined location uncertainty of a façade.
struct FacadeConfidence {
    double sigma = 0.0;     // m
    double upper_ci = 0.0;  // m, half-width of the deviation band around a wall
    double cl = 0.0;
};

/// sigma = (e / 2) / z: half the error is taken as the mean deviation.
double sigma_from_error(double e, double z);

/// Two-sided standard-normal quantile for confidence level `cl`.
double z_for_confidence(double cl);

/// Throws ConfigError for non-positive errors or z values that do not match their CL.
void validate_uncertainty(const UncertaintySpec& spec, double z_tolerance = 0.01);

/// sigma = hypot(s1, s2); upper CI = 2 sigma rounded up to the centimeter.
FacadeConfidence combine_sigmas(double sigma1, double sigma2, double cl);

FacadeConfidence combine(const UncertaintySpec& spec);

}  // namespace facref
