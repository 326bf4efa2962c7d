#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace scallop {

/// A finitely supported real sequence: the computational stand-in for a point
/// of the separable Hilbert space ell^2. Entries are (index, coefficient)
/// pairs with indices >= 1 strictly increasing and coefficients nonzero, so
/// every value has exactly one stored form.
class FsVector {
 public:
  using Entry = std::pair<std::int32_t, double>;

  FsVector() = default;

  /// Builds from arbitrary (index, coeff) pairs: sorts, merges duplicate
  /// indices by addition, and drops exact zeros.
  static FsVector from_pairs(std::vector<Entry> entries);

  /// The basis vector e_i (index is 1-based).
  static FsVector unit(std::int32_t index, double coeff = 1.0);

  /// Dense prefix constructor: values[k] becomes coordinate first_index + k.
  static FsVector from_dense(std::span<const double> values,
                             std::int32_t first_index = 1);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }
  bool is_zero() const { return entries_.empty(); }

  /// Coefficient at an index (0 when absent). Binary search.
  double at(std::int32_t index) const;

  /// Largest stored index, 0 when empty.
  std::int32_t max_index() const;

  void set(std::int32_t index, double coeff);

  FsVector& operator+=(const FsVector& rhs);
  FsVector& operator-=(const FsVector& rhs);
  FsVector& operator*=(double s);

  friend FsVector operator+(FsVector a, const FsVector& b) { return a += b; }
  friend FsVector operator-(FsVector a, const FsVector& b) { return a -= b; }
  friend FsVector operator*(FsVector a, double s) { return a *= s; }
  friend FsVector operator*(double s, FsVector a) { return a *= s; }

  bool operator==(const FsVector& rhs) const { return entries_ == rhs.entries_; }

  /// Text form `{index:coeff,...}` with ascending indices; `{}` is zero.
  std::string to_text() const;
  static FsVector parse(const std::string& text);

  friend FsVector axpy(double a, const FsVector& x, const FsVector& y);

 private:
  std::vector<Entry> entries_;
};

double inner(const FsVector& a, const FsVector& b);
double norm_sq(const FsVector& a);
double norm(const FsVector& a);
double dist_sq(const FsVector& a, const FsVector& b);
double dist(const FsVector& a, const FsVector& b);

/// a*x + y without materializing intermediates more than once.
FsVector axpy(double a, const FsVector& x, const FsVector& y);

}  // namespace scallop
