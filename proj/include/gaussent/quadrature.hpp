#pragma once

#include "gaussent/real.hpp"

#include <functional>

namespace gaussent {

struct QuadratureResult {
    Real value;
    Real error_estimate; // |difference of the last two levels|
    int levels;
    long evaluations;
};

// Tanh-sinh rule on [a, b]; levels halve the step until two consecutive
// estimates agree to 10^-digits relative. max_level bounds the refinement.
QuadratureResult tanh_sinh(const std::function<Real(const Real&)>& f, const Real& a, const Real& b, int digits, int max_level = 14);

} // namespace gaussent
