#include "redstates/space.hpp"

#include <algorithm>
#include <cstdlib>
#include <unordered_set>

namespace redstates {

int dimension_limit() {
  if (const char* env = std::getenv("REDSTATES_DIM_LIMIT")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
  }
  return 4096;
}

SpaceSpec::SpaceSpec(std::vector<Factor> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw std::invalid_argument("SpaceSpec: needs at least one factor");
  std::unordered_set<std::string> seen;
  const long limit = dimension_limit();
  long total = 1;
  for (const Factor& f : factors_) {
    if (f.dim < 1) throw std::invalid_argument("SpaceSpec: factor '" + f.label + "' has dim < 1");
    if (!seen.insert(f.label).second)
      throw std::invalid_argument("SpaceSpec: duplicate factor label '" + f.label + "'");
    total *= f.dim;
    if (total > limit)
      throw dimension_limit_error("SpaceSpec: total dimension exceeds limit " + std::to_string(limit));
  }
  total_dim_ = static_cast<int>(total);
  strides_.assign(factors_.size(), 1);
  for (int k = static_cast<int>(factors_.size()) - 2; k >= 0; --k)
    strides_[k] = strides_[k + 1] * factors_[k + 1].dim;
}

SpaceSpec SpaceSpec::single(std::string label, int dim) {
  return SpaceSpec({Factor{std::move(label), dim}});
}

bool SpaceSpec::has_label(const std::string& label) const {
  return std::any_of(factors_.begin(), factors_.end(),
                     [&](const Factor& f) { return f.label == label; });
}

int SpaceSpec::position(const std::string& label) const {
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].label == label) return static_cast<int>(i);
  throw std::invalid_argument("SpaceSpec: unknown factor label '" + label + "'");
}

std::vector<std::string> SpaceSpec::labels() const {
  std::vector<std::string> out;
  out.reserve(factors_.size());
  for (const Factor& f : factors_) out.push_back(f.label);
  return out;
}

std::vector<int> SpaceSpec::positions(const std::vector<std::string>& labels) const {
  std::vector<int> out;
  out.reserve(labels.size());
  for (const std::string& l : labels) out.push_back(position(l));
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end())
    throw std::invalid_argument("SpaceSpec: duplicated label in selection");
  return out;
}

SpaceSpec SpaceSpec::subspace(const std::vector<std::string>& labels) const {
  std::vector<int> pos = positions(labels);
  std::vector<Factor> sub;
  sub.reserve(pos.size());
  for (int p : pos) sub.push_back(factors_[static_cast<std::size_t>(p)]);
  return SpaceSpec(std::move(sub));
}

std::vector<std::string> SpaceSpec::complement(const std::vector<std::string>& labels) const {
  std::vector<int> pos = positions(labels);
  std::vector<std::string> out;
  std::size_t j = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (j < pos.size() && static_cast<int>(i) == pos[j]) {
      ++j;
    } else {
      out.push_back(factors_[i].label);
    }
  }
  return out;
}

bool SpaceSpec::operator==(const SpaceSpec& other) const {
  if (factors_.size() != other.factors_.size()) return false;
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].label != other.factors_[i].label || factors_[i].dim != other.factors_[i].dim)
      return false;
  return true;
}

std::string SpaceSpec::describe() const {
  std::string out;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) out += " x ";
    out += factors_[i].label + "(" + std::to_string(factors_[i].dim) + ")";
  }
  return out;
}

SpaceSpec concat(const SpaceSpec& a, const SpaceSpec& b) {
  for (const Factor& f : b.factors())
    if (a.has_label(f.label))
      throw std::invalid_argument("concat: label collision on '" + f.label + "'");
  std::vector<Factor> all = a.factors();
  all.insert(all.end(), b.factors().begin(), b.factors().end());
  return SpaceSpec(std::move(all));
}

}  // namespace redstates
