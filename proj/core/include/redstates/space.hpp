// Labeled tensor-product Hilbert spaces: ordered finite-dimensional factors
// with a fixed row-major composite index convention (first factor is the
// most significant digit).
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace redstates {

/// Thrown when a composite space would exceed the configured dimension cap.
class dimension_limit_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimension cap for composite spaces. Defaults to 4096; the environment
/// variable REDSTATES_DIM_LIMIT overrides it.
int dimension_limit();

struct Factor {
  std::string label;
  int dim = 0;
};

class SpaceSpec {
 public:
  // Labels must be unique, every dim >= 1, and the total dimension must
  // stay within dimension_limit().
  explicit SpaceSpec(std::vector<Factor> factors);

  static SpaceSpec single(std::string label, int dim);

  int factor_count() const { return static_cast<int>(factors_.size()); }
  const Factor& factor(int i) const { return factors_.at(static_cast<std::size_t>(i)); }
  const std::vector<Factor>& factors() const { return factors_; }
  int total_dim() const { return total_dim_; }

  // Row-major strides: strides()[k] = product of dims of factors after k.
  const std::vector<int>& strides() const { return strides_; }

  bool has_label(const std::string& label) const;
  int position(const std::string& label) const;  // throws on unknown label
  std::vector<std::string> labels() const;

  // Positions of the given labels, sorted ascending. Throws on unknown or
  // duplicated labels.
  std::vector<int> positions(const std::vector<std::string>& labels) const;

  // Sub-space made of the named factors, kept in this spec's factor order.
  SpaceSpec subspace(const std::vector<std::string>& labels) const;

  // Labels of this spec that are not in `labels`, in factor order.
  std::vector<std::string> complement(const std::vector<std::string>& labels) const;

  bool operator==(const SpaceSpec& other) const;
  bool operator!=(const SpaceSpec& other) const { return !(*this == other); }

  std::string describe() const;  // e.g. "A(2) x B(3)", for error messages

 private:
  std::vector<Factor> factors_;
  std::vector<int> strides_;
  int total_dim_ = 1;
};

// Concatenation of two label-disjoint specs (the composite-space product).
SpaceSpec concat(const SpaceSpec& a, const SpaceSpec& b);

}  // namespace redstates
