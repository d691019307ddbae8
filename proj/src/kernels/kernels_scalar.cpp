#include "gradcons/kernels.hpp"

namespace gradcons::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_into_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i];
}

// Written as comparisons rather than std::max so NaN handling matches the
// SIMD max/min instructions (second operand wins on unordered).
void max_inplace_scalar(double* acc, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] = x[i] > acc[i] ? x[i] : acc[i];
}

void min_inplace_scalar(double* acc, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] = x[i] < acc[i] ? x[i] : acc[i];
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{
      Variant::Scalar,   "scalar",           dot_scalar,         squared_distance_scalar,
      axpy_scalar,       scale_into_scalar,  max_inplace_scalar, min_inplace_scalar,
  };
  return table;
}

}  // namespace gradcons::kernels
