#include "plateslip/cohesive_law.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "plateslip/errors.hpp"

namespace plateslip {

namespace {

void require_nonnegative(double v, const char* what) {
  if (!(v >= 0.0)) {
    throw DomainError(std::string(what) + " must be nonnegative, got " + std::to_string(v));
  }
}

// Shared implementation of Phi and its partials for any loading function F
// exposing psi/dpsi/d2psi.
template <class F>
double phi_impl(const F& f, double y, double z) {
  if (y < z) {
    const double dz = f.dpsi(z);
    return dz / (2.0 * z) * y * y + f.psi(z) - 0.5 * z * dz;
  }
  return f.psi(y);
}

template <class F>
double dphi_dy_impl(const F& f, double y, double z) {
  if (y < z) return f.dpsi(z) * y / z;
  return f.dpsi(y);
}

template <class F>
double dphi_dz_impl(const F& f, double y, double z) {
  if (z <= y) return 0.0;
  const double ratio = y / z;
  return 0.5 * (f.dpsi(z) - z * f.d2psi(z)) * (1.0 - ratio * ratio);
}

template <class F>
double d2phi_dy2_impl(const F& f, double y, double z) {
  if (y < z) return f.dpsi(z) / z;
  return f.d2psi(y);
}

}  // namespace

CohesiveLaw::CohesiveLaw(LawKind kind, double kappa, double shape)
    : kind_(kind), kappa_(kappa), shape_(shape), lambda_(0.0) {
  if (!(kappa > 0.0) || !(shape > 0.0)) {
    throw ConfigError("cohesive law parameters must be positive");
  }
  lambda_ = analytic_lambda();
}

CohesiveLaw CohesiveLaw::exponential(double kappa, double rho) {
  return CohesiveLaw(LawKind::Exponential, kappa, rho);
}

CohesiveLaw CohesiveLaw::cubic_capped(double kappa, double delta_cap) {
  return CohesiveLaw(LawKind::CubicCapped, kappa, delta_cap);
}

CohesiveLaw CohesiveLaw::with_lambda(double lambda) const {
  if (lambda < analytic_lambda()) {
    throw ConfigError("lambda " + std::to_string(lambda) +
                      " is below the curvature bound of the law (" +
                      std::to_string(analytic_lambda()) + ")");
  }
  CohesiveLaw copy = *this;
  copy.lambda_ = lambda;
  return copy;
}

double CohesiveLaw::analytic_lambda() const {
  switch (kind_) {
    case LawKind::Exponential:
      return kappa_ * shape_ * shape_;
    case LawKind::CubicCapped:
      return 6.0 * kappa_ / (shape_ * shape_);
  }
  return 0.0;
}

double CohesiveLaw::slip_scale() const {
  return kind_ == LawKind::Exponential ? 1.0 / shape_ : shape_;
}

double CohesiveLaw::psi(double z) const {
  switch (kind_) {
    case LawKind::Exponential:
      return -kappa_ * std::expm1(-shape_ * z);
    case LawKind::CubicCapped: {
      if (z >= shape_) return kappa_;
      const double v = 1.0 - z / shape_;
      return kappa_ * (1.0 - v * v * v);
    }
  }
  return 0.0;
}

double CohesiveLaw::dpsi(double z) const {
  switch (kind_) {
    case LawKind::Exponential:
      return kappa_ * shape_ * std::exp(-shape_ * z);
    case LawKind::CubicCapped: {
      if (z >= shape_) return 0.0;
      const double v = 1.0 - z / shape_;
      return 3.0 * kappa_ / shape_ * v * v;
    }
  }
  return 0.0;
}

double CohesiveLaw::d2psi(double z) const {
  switch (kind_) {
    case LawKind::Exponential:
      return -kappa_ * shape_ * shape_ * std::exp(-shape_ * z);
    case LawKind::CubicCapped: {
      if (z >= shape_) return 0.0;
      const double v = 1.0 - z / shape_;
      return -6.0 * kappa_ / (shape_ * shape_) * v;
    }
  }
  return 0.0;
}

double fixed_point_z_eps(const CohesiveLaw& law, double eps) {
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  // g(s) = s - eps psi'(s) is increasing, g(0) < 0 <= g(eps psi'(0)).
  double lo = 0.0;
  double hi = eps * law.dpsi0();
  constexpr int kMaxIterations = 400;
  for (int it = 0; it < kMaxIterations && hi - lo > std::numeric_limits<double>::epsilon() * hi;
       ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid - eps * law.dpsi(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double z = 0.5 * (lo + hi);
  if (std::abs(z - eps * law.dpsi(z)) > 1e-14 * (1.0 + z)) {
    throw NumericalError("fixed point of s -> eps psi'(s) did not converge");
  }
  return z;
}

RegularizedLaw::RegularizedLaw(const CohesiveLaw& base, double eps)
    : base_(base), eps_(eps), z_eps_(fixed_point_z_eps(base, eps)) {
  shift_ = z_eps_ * z_eps_ / (2.0 * eps_) - base_.psi(z_eps_);
}

double RegularizedLaw::psi(double z) const {
  if (z <= z_eps_) return z * z / (2.0 * eps_);
  return base_.psi(z) + shift_;
}

double RegularizedLaw::dpsi(double z) const {
  if (z <= z_eps_) return z / eps_;
  return base_.dpsi(z);
}

double RegularizedLaw::d2psi(double z) const {
  if (z < z_eps_) return 1.0 / eps_;
  return base_.d2psi(z);
}

double RegularizedLaw::sup_psi_gap() const { return std::abs(shift_); }

double RegularizedLaw::phi_gap_bound() const {
  const double d0 = base_.dpsi0();
  return sup_psi_gap() + 0.5 * d0 * z_eps_ + 2.0 * d0 * z_eps_;
}

double psi(const CohesiveLaw& law, double z) {
  require_nonnegative(z, "slip");
  return law.psi(z);
}

double phi(const CohesiveLaw& law, double y, double z) {
  require_nonnegative(y, "slip");
  require_nonnegative(z, "history slip");
  return phi_impl(law, y, z);
}

double dphi_dy(const CohesiveLaw& law, double y, double z) {
  require_nonnegative(y, "slip");
  require_nonnegative(z, "history slip");
  return dphi_dy_impl(law, y, z);
}

double dphi_dz(const CohesiveLaw& law, double y, double z) {
  require_nonnegative(y, "slip");
  require_nonnegative(z, "history slip");
  return dphi_dz_impl(law, y, z);
}

double d2phi_dy2(const CohesiveLaw& law, double y, double z) {
  require_nonnegative(y, "slip");
  require_nonnegative(z, "history slip");
  return d2phi_dy2_impl(law, y, z);
}

double phi_eps(const RegularizedLaw& reg, double y, double z) {
  require_nonnegative(y, "slip");
  require_nonnegative(z, "history slip");
  return phi_impl(reg, y, z);
}

double dphi_eps_dy(const RegularizedLaw& reg, double y, double z) {
  require_nonnegative(y, "slip");
  require_nonnegative(z, "history slip");
  return dphi_dy_impl(reg, y, z);
}

double dphi_eps_dz(const RegularizedLaw& reg, double y, double z) {
  require_nonnegative(y, "slip");
  require_nonnegative(z, "history slip");
  return dphi_dz_impl(reg, y, z);
}

double d2phi_eps_dy2(const RegularizedLaw& reg, double y, double z) {
  require_nonnegative(y, "slip");
  require_nonnegative(z, "history slip");
  return d2phi_dy2_impl(reg, y, z);
}

double unloading_slope(const CohesiveLaw& law, double z) {
  if (!(z > 0.0)) throw DomainError("unloading slope needs a positive history slip");
  return law.dpsi(z) / z;
}

CohesiveDensity::CohesiveDensity(const CohesiveLaw& law) : law_(law) {}

CohesiveDensity::CohesiveDensity(const CohesiveLaw& law, double eps)
    : law_(law), reg_(RegularizedLaw(law, eps)) {}

double CohesiveDensity::value(double y, double z) const {
  return reg_ ? phi_impl(*reg_, y, z) : phi_impl(law_, y, z);
}

double CohesiveDensity::dy(double y, double z) const {
  return reg_ ? dphi_dy_impl(*reg_, y, z) : dphi_dy_impl(law_, y, z);
}

double CohesiveDensity::dz(double y, double z) const {
  return reg_ ? dphi_dz_impl(*reg_, y, z) : dphi_dz_impl(law_, y, z);
}

double CohesiveDensity::dyy(double y, double z) const {
  return reg_ ? d2phi_dy2_impl(*reg_, y, z) : d2phi_dy2_impl(law_, y, z);
}

double CohesiveDensity::dy_over_y(double y, double z) const {
  if (y < z) return reg_ ? reg_->dpsi(z) / z : law_.dpsi(z) / z;
  if (y > 0.0) return dy(y, z) / y;
  // y = z = 0: the regularized law is quadratic near the origin, the original one has a kink.
  return reg_ ? 1.0 / reg_->eps() : std::numeric_limits<double>::infinity();
}

}  // namespace plateslip
