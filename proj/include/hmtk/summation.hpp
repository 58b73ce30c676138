#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace hmtk {

// Neumaier-compensated accumulator. Every norm, kernel and measure sum in the
// library goes through this type so that results are insensitive to benign
// reorderings of well-conditioned inputs and reproducible for a fixed order.
class KahanSum {
 public:
  KahanSum() = default;
  explicit KahanSum(double init) : sum_(init) {}

  void add(double x) {
    double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(const std::vector<double>& xs) {
  KahanSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

// Weighted dot product over an explicit index set, fixed iteration order.
template <class GetA, class GetB, class GetW>
double compensated_dot(const std::vector<int>& idx, GetA a, GetB b, GetW w) {
  KahanSum acc;
  for (int i : idx) acc.add(a(i) * b(i) * w(i));
  return acc.value();
}

}  // namespace hmtk
