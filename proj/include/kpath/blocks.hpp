#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace kpath {

// Strictly increasing index sequence n(k) used by the block criteria.
// Stored as doubles so that super-dyadic growth stays representable; values
// are exact below 2^53.
class BlockSequence {
 public:
  enum class Generator { dyadic, super_dyadic, squared, explicit_list };

  static BlockSequence dyadic(int count, bool start_at_one = true) {
    std::vector<double> v;
    if (start_at_one) v.push_back(1.0);
    double x = 2.0;
    while (static_cast<int>(v.size()) < count) {
      v.push_back(x);
      x *= 2.0;
    }
    return BlockSequence(std::move(v), Generator::dyadic);
  }

  // n(k) = 2^(2^k), prefixed with 1.
  static BlockSequence super_dyadic(int count) {
    std::vector<double> v{1.0};
    for (int k = 1; static_cast<int>(v.size()) < count; ++k)
      v.push_back(std::exp2(std::exp2(static_cast<double>(k))));
    return BlockSequence(std::move(v), Generator::super_dyadic);
  }

  // n(k) = 2^(k^2), prefixed with 1.
  static BlockSequence squared(int count) {
    std::vector<double> v{1.0};
    for (int k = 1; static_cast<int>(v.size()) < count; ++k)
      v.push_back(std::exp2(static_cast<double>(k) * static_cast<double>(k)));
    return BlockSequence(std::move(v), Generator::squared);
  }

  static BlockSequence explicit_list(std::vector<double> v) {
    return BlockSequence(std::move(v), Generator::explicit_list);
  }

  const std::vector<double>& indices() const { return idx_; }
  int size() const { return static_cast<int>(idx_.size()); }
  double index(int k) const { return idx_[static_cast<size_t>(k)]; }  // 0-based
  double log_index(int k) const { return std::log(idx_[static_cast<size_t>(k)]); }
  Generator generator() const { return gen_; }

  void require_starts_at_one() const {
    if (idx_.empty() || idx_[0] != 1.0)
      throw std::invalid_argument("BlockSequence: sequence must start at n(1) = 1");
  }

 private:
  BlockSequence(std::vector<double> v, Generator g) : idx_(std::move(v)), gen_(g) {
    if (idx_.size() < 2)
      throw std::invalid_argument("BlockSequence: need at least two indices");
    for (size_t i = 0; i < idx_.size(); ++i) {
      if (!(idx_[i] >= 1.0) || idx_[i] != std::floor(idx_[i]))
        throw std::invalid_argument("BlockSequence: indices must be natural numbers");
      if (i > 0 && !(idx_[i] > idx_[i - 1]))
        throw std::invalid_argument("BlockSequence: indices must be strictly increasing");
    }
  }

  std::vector<double> idx_;
  Generator gen_;
};

}  // namespace kpath
