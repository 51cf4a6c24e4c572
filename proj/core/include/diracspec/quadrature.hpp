#pragma once

#include <span>
#include <vector>

namespace dirac {

/// Composite Simpson over uniformly spaced samples. An odd number of intervals
/// is closed with a 3/8-rule panel at the right end; fewer than three samples
/// fall back to the trapezoid rule.
double simpson(std::span<const double> values, double h);

/// Running integral from the first sample to every node, fourth-order accurate
/// at every node (odd nodes use the local three-point quadratic panel).
std::vector<double> cumulative_simpson(std::span<const double> values, double h);

/// Fourth-order finite-difference derivative at every node (five-point centred
/// stencil inside, one-sided five-point stencils at the two ends). Needs >= 5 nodes.
std::vector<double> differentiate(std::span<const double> values, double h);

}  // namespace dirac
