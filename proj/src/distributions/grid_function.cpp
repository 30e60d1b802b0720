#include <algorithm>
#include <stdexcept>

#include "lcmetrics/distributions.hpp"

namespace lcm {

GridFunction::GridFunction(std::vector<double> nodes, std::vector<double> values, double outside_value)
    : nodes_(std::move(nodes)), values_(std::move(values)), outside_(outside_value) {
  if (nodes_.size() != values_.size()) throw std::invalid_argument("grid function: length mismatch");
  if (nodes_.size() < 2) throw std::invalid_argument("grid function: need at least two nodes");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1])) throw std::invalid_argument("grid function: nodes must be strictly increasing");
  }
}

double GridFunction::operator()(double x) const {
  if (x < nodes_.front() || x > nodes_.back()) return outside_;
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  if (it == nodes_.end()) return values_.back();
  const auto i = static_cast<std::size_t>(it - nodes_.begin());
  const double w = (x - nodes_[i - 1]) / (nodes_[i] - nodes_[i - 1]);
  return (1.0 - w) * values_[i - 1] + w * values_[i];
}

double GridFunction::trapezoid_integral() const {
  double total = 0.0;
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    total += 0.5 * (values_[i] + values_[i - 1]) * (nodes_[i] - nodes_[i - 1]);
  }
  return total;
}

}  // namespace lcm
