#pragma once

#include <vector>

#include "lcmetrics/metrics.hpp"
#include "lcmetrics/numerics.hpp"

namespace lcm::detail {

std::vector<double> split_points(const Component1D& a, const Component1D& b, const numerics::Fn& h, double lo,
                                 double hi, int scan_total);

// Probability of (a, b] under c, computed on the tail side that avoids cancellation.
double mass(const Component1D& c, double a, double b);

MetricResult relative_entropy_1d(const Component1D& a, const Component1D& b);
MetricResult entropy_1d(const Component1D& a);

// Integral over u in (0, 1) of |Q_a(u) - Q_b(u)|^p, the p-th power of W_p.
numerics::Integral quantile_moment(const Component1D& a, const Component1D& b, double p);

}  // namespace lcm::detail
