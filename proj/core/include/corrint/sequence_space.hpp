#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace corrint {

/// A point of the Banach space truncated to its first d coordinates against
/// the biorthogonal system (x_n, x_n*): coeffs[n] = x_n*(v).
class TruncVector {
 public:
  TruncVector() = default;
  explicit TruncVector(std::size_t dim) : coeffs_(dim, 0.0) {}
  explicit TruncVector(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

  /// The unit basis vector x_n in dimension `dim`.
  static TruncVector basis(std::size_t n, std::size_t dim);

  std::size_t dim() const { return coeffs_.size(); }
  double operator[](std::size_t i) const { return coeffs_[i]; }
  double& operator[](std::size_t i) { return coeffs_[i]; }
  std::span<const double> coeffs() const { return coeffs_; }

  TruncVector& operator+=(const TruncVector& o);
  TruncVector& operator-=(const TruncVector& o);
  TruncVector& operator*=(double s);

  friend TruncVector operator+(TruncVector a, const TruncVector& b) { return a += b; }
  friend TruncVector operator-(TruncVector a, const TruncVector& b) { return a -= b; }
  friend TruncVector operator*(double s, TruncVector v) { return v *= s; }
  friend TruncVector operator*(TruncVector v, double s) { return v *= s; }

  friend bool operator==(const TruncVector&, const TruncVector&) = default;
  friend auto operator<=>(const TruncVector& a, const TruncVector& b) {
    return a.coeffs_ <=> b.coeffs_;
  }

 private:
  std::vector<double> coeffs_;
};

enum class NormFlavor { Sum, Euclid, Max };

/// Which metric convergence diagnostics use: the norm, the weak metric
/// rho_w, or the weak* metric d_w.
enum class Topology { Norm, Weak, WeakStar };

NormFlavor parse_norm_flavor(std::string_view name);
Topology parse_topology(std::string_view name);
std::string to_string(NormFlavor f);
std::string to_string(Topology t);

/// Per-run truncation settings.
struct Workspace {
  std::size_t dim = 16;
  NormFlavor flavor = NormFlavor::Euclid;
  Topology topology = Topology::Norm;

  TruncVector zero() const { return TruncVector(dim); }
  TruncVector basis(std::size_t n) const { return TruncVector::basis(n, dim); }
  /// Throws DimensionError unless dim >= needed.
  void require_dim(std::size_t needed, std::string_view what) const;
};

/// x_m*(v).
double dual_pairing(std::size_t m, const TruncVector& v);

double norm(const TruncVector& v, NormFlavor flavor);

/// sum_m 2^-(m+1) |x_m*(v - w)|.
double rho_w(const TruncVector& v, const TruncVector& w);

/// sum_m 2^-(m+1) |v(x_m) - w(x_m)| for v, w read as dual-space elements.
double d_w(const TruncVector& v, const TruncVector& w);

/// Distance selected by a topology tag (and a norm flavor for Topology::Norm).
/// `axis_weight(m)` is a per-coordinate factor with
/// distance(a, b) >= axis_weight(m) * |a[m] - b[m]|, used for search pruning.
class Metric {
 public:
  Metric() = default;
  Metric(Topology topology, NormFlavor flavor) : topology_(topology), flavor_(flavor) {}
  static Metric from(const Workspace& ws) { return Metric(ws.topology, ws.flavor); }
  static Metric norm(NormFlavor flavor) { return Metric(Topology::Norm, flavor); }

  double distance(std::span<const double> a, std::span<const double> b) const;
  double distance(const TruncVector& a, const TruncVector& b) const {
    return distance(a.coeffs(), b.coeffs());
  }
  double axis_weight(std::size_t m) const;

  Topology topology() const { return topology_; }
  NormFlavor flavor() const { return flavor_; }

 private:
  Topology topology_ = Topology::Norm;
  NormFlavor flavor_ = NormFlavor::Euclid;
};

}  // namespace corrint
