#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "lcmetrics/distributions.hpp"

namespace lcm {
namespace {

bool is_diagonal(const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i != j && m(i, j) != 0.0) return false;
    }
  }
  return true;
}

bool unit_moments(const std::vector<Component1D>& factors) {
  for (const auto& f : factors) {
    if (std::abs(f.mean()) > 1e-12 || std::abs(f.variance() - 1.0) > 1e-12) return false;
  }
  return true;
}

std::variant<Uniform1D, Laplace1D> as_base(const Component1D& c) {
  if (const auto* u = std::get_if<Uniform1D>(&c.variant())) return *u;
  return std::get<Laplace1D>(c.variant());
}

void require_dimension(std::size_t n) {
  if (n == 0) throw std::invalid_argument("dimension must be positive");
}

}  // namespace

LogConcaveDensity::LogConcaveDensity(std::vector<Component1D> factors, bool isotropic, std::string label)
    : factors_(std::move(factors)), isotropic_(isotropic), label_(std::move(label)) {
  require_dimension(factors_.size());
}

const Component1D& LogConcaveDensity::as_1d() const {
  if (dimension() != 1 || linear_) throw std::invalid_argument("expected a one-dimensional measure");
  return factors_.front();
}

double LogConcaveDensity::log_pdf(std::span<const double> x) const {
  if (x.size() != dimension()) throw std::invalid_argument("log_pdf: point has wrong dimension");
  double total = 0.0;
  if (!linear_) {
    for (std::size_t i = 0; i < factors_.size(); ++i) total += factors_[i].log_pdf(x[i]);
    return total;
  }
  const Eigen::Map<const Eigen::VectorXd> y(x.data(), static_cast<Eigen::Index>(x.size()));
  const Eigen::VectorXd z = linear_->a_inv * (y - linear_->b);
  for (std::size_t i = 0; i < factors_.size(); ++i) total += factors_[i].log_pdf(z(static_cast<Eigen::Index>(i)));
  return total - linear_->log_abs_det;
}

double LogConcaveDensity::pdf(std::span<const double> x) const { return std::exp(log_pdf(x)); }

Eigen::VectorXd LogConcaveDensity::mean() const {
  Eigen::VectorXd m(static_cast<Eigen::Index>(dimension()));
  for (std::size_t i = 0; i < factors_.size(); ++i) m(static_cast<Eigen::Index>(i)) = factors_[i].mean();
  if (linear_) return linear_->a * m + linear_->b;
  return m;
}

Eigen::MatrixXd LogConcaveDensity::covariance() const {
  const auto n = static_cast<Eigen::Index>(dimension());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) d(i, i) = factors_[static_cast<std::size_t>(i)].variance();
  if (linear_) return linear_->a * d * linear_->a.transpose();
  return d;
}

std::vector<Interval> LogConcaveDensity::support_box() const {
  std::vector<Interval> box;
  if (linear_) return box;
  for (const auto& f : factors_) box.push_back(f.support());
  return box;
}

double LogConcaveDensity::max_density() const {
  double log_sup = 0.0;
  for (const auto& f : factors_) log_sup += std::log(f.max_density());
  return std::exp(log_sup - log_abs_det());
}

double LogConcaveDensity::log_abs_det() const { return linear_ ? linear_->log_abs_det : 0.0; }

SampleMatrix LogConcaveDensity::sample(std::size_t count, Rng& rng) const {
  const std::size_t n = dimension();
  SampleMatrix out{n, std::vector<double>(count * n)};
  Eigen::VectorXd z(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < count; ++k) {
    double* row = out.data.data() + k * n;
    for (std::size_t i = 0; i < n; ++i) row[i] = factors_[i].sample(rng);
    if (linear_) {
      for (std::size_t i = 0; i < n; ++i) z(static_cast<Eigen::Index>(i)) = row[i];
      const Eigen::VectorXd y = linear_->a * z + linear_->b;
      for (std::size_t i = 0; i < n; ++i) row[i] = y(static_cast<Eigen::Index>(i));
    }
  }
  return out;
}

LogConcaveDensity LogConcaveDensity::with_affine(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                                 bool isotropic, std::string label) const {
  const auto n = static_cast<Eigen::Index>(dimension());
  if (a.rows() != n || a.cols() != n || b.size() != n) {
    throw std::invalid_argument("affine map has wrong shape");
  }
  // Compose with any existing map: y = a (A x + b0) + b.
  Eigen::MatrixXd total_a = linear_ ? Eigen::MatrixXd(a * linear_->a) : a;
  Eigen::VectorXd total_b = linear_ ? Eigen::VectorXd(a * linear_->b + b) : b;

  if (is_diagonal(total_a)) {
    std::vector<Component1D> mapped;
    for (Eigen::Index i = 0; i < n; ++i) {
      mapped.push_back(factors_[static_cast<std::size_t>(i)].affine(total_a(i, i), total_b(i)));
    }
    return {std::move(mapped), isotropic, std::move(label)};
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(total_a);
  const double det = lu.determinant();
  if (!(std::isfinite(det) && det != 0.0)) throw std::invalid_argument("affine map is singular");
  LogConcaveDensity out({factors_}, isotropic, std::move(label));
  out.linear_ = Affine{total_a, lu.inverse(), total_b, std::log(std::abs(det))};
  return out;
}

LogConcaveDensity make_standard_gaussian(std::size_t n) {
  require_dimension(n);
  return {std::vector<Component1D>(n, Component1D(Gaussian1D{0.0, 1.0})), true, fmt::format("gaussian{}", n)};
}

LogConcaveDensity make_isotropic_uniform(std::size_t n) {
  require_dimension(n);
  return {std::vector<Component1D>(n, Component1D(Uniform1D{0.0, std::sqrt(3.0)})), true,
          fmt::format("uniform{}", n)};
}

LogConcaveDensity make_isotropic_laplace(std::size_t n) {
  require_dimension(n);
  return {std::vector<Component1D>(n, Component1D(Laplace1D{0.0, std::sqrt(2.0)})), true,
          fmt::format("laplace{}", n)};
}

LogConcaveDensity make_gaussian(const Eigen::VectorXd& mean, const Eigen::MatrixXd& covariance) {
  const auto n = mean.size();
  require_dimension(static_cast<std::size_t>(n));
  if (covariance.rows() != n || covariance.cols() != n) {
    throw std::invalid_argument("gaussian: covariance has wrong shape");
  }
  const LogConcaveDensity standard = make_standard_gaussian(static_cast<std::size_t>(n));
  const Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success || !covariance.isApprox(covariance.transpose())) {
    throw std::invalid_argument("gaussian: covariance must be symmetric positive definite");
  }
  const bool isotropic = mean.isZero(0.0) && covariance.isIdentity(0.0);
  Eigen::MatrixXd root = llt.matrixL();
  if (is_diagonal(covariance)) root = covariance.diagonal().cwiseSqrt().asDiagonal();
  return standard.with_affine(root, mean, isotropic, fmt::format("gaussian{}-raw", n));
}

LogConcaveDensity make_uniform_box(std::vector<Uniform1D> coords) {
  std::vector<Component1D> factors;
  for (const auto& c : coords) factors.emplace_back(c);
  require_dimension(factors.size());
  const bool iso = unit_moments(factors);
  const std::size_t n = factors.size();
  return {std::move(factors), iso, fmt::format("uniform{}-raw", n)};
}

LogConcaveDensity make_laplace_product(std::vector<Laplace1D> coords) {
  std::vector<Component1D> factors;
  for (const auto& c : coords) factors.emplace_back(c);
  require_dimension(factors.size());
  const bool iso = unit_moments(factors);
  const std::size_t n = factors.size();
  return {std::move(factors), iso, fmt::format("laplace{}-raw", n)};
}

Component1D add_gaussian_noise(const Component1D& c, double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw std::invalid_argument("add_gaussian_noise: scale must be finite and >= 0");
  if (s == 0.0) return c;
  const auto& v = c.variant();
  if (const auto* g = std::get_if<Gaussian1D>(&v)) return Component1D(Gaussian1D{g->mean, std::hypot(g->sd, s)});
  if (const auto* sm = std::get_if<Smoothed1D>(&v)) return Component1D(Smoothed1D{std::hypot(sm->sigma, s), sm->base});
  return Component1D(Smoothed1D{s, as_base(c)});
}

LogConcaveDensity convolve_interpolate(const LogConcaveDensity& base, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("convolve_interpolate: t must lie in [0, 1]");
  if (!base.is_isotropic()) throw std::invalid_argument("convolve_interpolate: base must be isotropic");
  if (!base.is_product()) throw std::invalid_argument("convolve_interpolate: base must be a product measure");
  const std::string label = fmt::format("interp({},t={:g})", base.label(), t);
  if (t == 0.0) {
    const std::size_t n = base.dimension();
    return {std::vector<Component1D>(n, Component1D(Gaussian1D{0.0, 1.0})), true, label};
  }
  if (t == 1.0) return {base.factors(), true, label};

  const double s = std::sqrt(1.0 - t * t);
  std::vector<Component1D> mixed;
  mixed.reserve(base.dimension());
  for (const auto& f : base.factors()) mixed.push_back(add_gaussian_noise(f.affine(t, 0.0), s));
  return {std::move(mixed), true, label};
}

LogConcaveDensity whiten(const LogConcaveDensity& raw, const Eigen::VectorXd& mean,
                         const Eigen::MatrixXd& covariance) {
  const auto n = static_cast<Eigen::Index>(raw.dimension());
  if (mean.size() != n || covariance.rows() != n || covariance.cols() != n) {
    throw std::invalid_argument("whiten: mean/covariance shape does not match the dimension");
  }
  if (!covariance.allFinite() || !covariance.isApprox(covariance.transpose(), 1e-12)) {
    throw std::invalid_argument("whiten: covariance must be symmetric");
  }
  Eigen::MatrixXd inv_root;
  if (is_diagonal(covariance)) {
    if ((covariance.diagonal().array() <= 0.0).any()) {
      throw std::invalid_argument("whiten: covariance must be positive definite");
    }
    inv_root = covariance.diagonal().cwiseSqrt().cwiseInverse().asDiagonal();
  } else {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(covariance);
    if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
      throw std::invalid_argument("whiten: covariance must be positive definite");
    }
    inv_root = eig.operatorInverseSqrt();
  }
  return raw.with_affine(inv_root, -inv_root * mean, true, fmt::format("whiten({})", raw.label()));
}

double cdf_1d(const LogConcaveDensity& d, double x) { return d.as_1d().cdf(x); }

double quantile_1d(const LogConcaveDensity& d, double u) { return d.as_1d().quantile(u); }

SampleMatrix sample(const LogConcaveDensity& d, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  return d.sample(count, rng);
}

}  // namespace lcm
