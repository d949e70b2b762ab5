#include "corrint/sequence_space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "corrint/errors.hpp"

namespace corrint {

namespace {

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) {
    throw DimensionError("vectors of dimension " + std::to_string(a) + " and " +
                         std::to_string(b) + " mixed");
  }
}

double weighted_gap(std::span<const double> a, std::span<const double> b) {
  require_same_dim(a.size(), b.size());
  double sum = 0.0;
  double weight = 0.5;
  for (std::size_t m = 0; m < a.size(); ++m) {
    sum += weight * std::fabs(a[m] - b[m]);
    weight *= 0.5;
  }
  return sum;
}

}  // namespace

TruncVector TruncVector::basis(std::size_t n, std::size_t dim) {
  if (n >= dim) {
    throw DimensionError("basis index " + std::to_string(n) + " outside dimension " +
                         std::to_string(dim));
  }
  TruncVector v(dim);
  v.coeffs_[n] = 1.0;
  return v;
}

TruncVector& TruncVector::operator+=(const TruncVector& o) {
  require_same_dim(dim(), o.dim());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

TruncVector& TruncVector::operator-=(const TruncVector& o) {
  require_same_dim(dim(), o.dim());
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

TruncVector& TruncVector::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

NormFlavor parse_norm_flavor(std::string_view name) {
  if (name == "SUM") return NormFlavor::Sum;
  if (name == "EUCLID") return NormFlavor::Euclid;
  if (name == "MAX") return NormFlavor::Max;
  throw PreconditionError("unknown norm flavor '" + std::string(name) + "'");
}

Topology parse_topology(std::string_view name) {
  if (name == "NORM") return Topology::Norm;
  if (name == "WEAK") return Topology::Weak;
  if (name == "WEAK_STAR") return Topology::WeakStar;
  throw PreconditionError("unknown topology '" + std::string(name) + "'");
}

std::string to_string(NormFlavor f) {
  switch (f) {
    case NormFlavor::Sum: return "SUM";
    case NormFlavor::Euclid: return "EUCLID";
    case NormFlavor::Max: return "MAX";
  }
  return "?";
}

std::string to_string(Topology t) {
  switch (t) {
    case Topology::Norm: return "NORM";
    case Topology::Weak: return "WEAK";
    case Topology::WeakStar: return "WEAK_STAR";
  }
  return "?";
}

void Workspace::require_dim(std::size_t needed, std::string_view what) const {
  if (dim < needed) {
    throw DimensionError(std::string(what) + " needs dimension >= " + std::to_string(needed) +
                         ", workspace has " + std::to_string(dim));
  }
}

double dual_pairing(std::size_t m, const TruncVector& v) {
  if (m >= v.dim()) {
    throw DimensionError("functional index " + std::to_string(m) + " outside dimension " +
                         std::to_string(v.dim()));
  }
  return v[m];
}

double norm(const TruncVector& v, NormFlavor flavor) {
  double acc = 0.0;
  switch (flavor) {
    case NormFlavor::Sum:
      for (double c : v.coeffs()) acc += std::fabs(c);
      return acc;
    case NormFlavor::Euclid:
      for (double c : v.coeffs()) acc += c * c;
      return std::sqrt(acc);
    case NormFlavor::Max:
      for (double c : v.coeffs()) acc = std::max(acc, std::fabs(c));
      return acc;
  }
  return acc;
}

double rho_w(const TruncVector& v, const TruncVector& w) { return weighted_gap(v.coeffs(), w.coeffs()); }

// Same arithmetic as rho_w: against the predual basis the coefficients of a
// dual element are its values v(x_m).
double d_w(const TruncVector& v, const TruncVector& w) { return weighted_gap(v.coeffs(), w.coeffs()); }

double Metric::distance(std::span<const double> a, std::span<const double> b) const {
  if (topology_ != Topology::Norm) return weighted_gap(a, b);
  require_same_dim(a.size(), b.size());
  double acc = 0.0;
  switch (flavor_) {
    case NormFlavor::Sum:
      for (std::size_t i = 0; i < a.size(); ++i) acc += std::fabs(a[i] - b[i]);
      return acc;
    case NormFlavor::Euclid:
      for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
      return std::sqrt(acc);
    case NormFlavor::Max:
      for (std::size_t i = 0; i < a.size(); ++i) acc = std::max(acc, std::fabs(a[i] - b[i]));
      return acc;
  }
  return acc;
}

double Metric::axis_weight(std::size_t m) const {
  if (topology_ == Topology::Norm) return 1.0;
  return std::ldexp(1.0, -static_cast<int>(m) - 1);
}

}  // namespace corrint
