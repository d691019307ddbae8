#pragma once

// Vector kernels used by the agent-state arithmetic.
//
// Every kernel has a portable scalar reference implementation and, on x86-64,
// an AVX2 variant. The active table is chosen once at first use from the CPU
// features and the GRADCONS_SIMD environment variable ("scalar", "avx2",
// "auto"). Element-wise kernels (axpy, scale_into, max/min) round exactly
// like the scalar path; reductions (dot, squared_distance) may differ in the
// last bits because lanes are summed in a different order.

#include <cstddef>
#include <span>
#include <string_view>

namespace gradcons::kernels {

enum class Variant { Scalar, Avx2 };

struct KernelTable {
  Variant variant;
  std::string_view name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // y = a * x
  void (*scale_into)(double a, const double* x, double* y, std::size_t n);
  // acc = max(acc, x) / min(acc, x), componentwise
  void (*max_inplace)(double* acc, const double* x, std::size_t n);
  void (*min_inplace)(double* acc, const double* x, std::size_t n);
};

const KernelTable& scalar_table();

// nullptr when the variant is not compiled in or not supported by this CPU.
const KernelTable* table_for(Variant v);

const KernelTable& active();

// Overrides the active table (tests use this to pin a variant).
// Returns false if the variant is unavailable; the active table is unchanged.
bool select(Variant v);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  return active().squared_distance(a.data(), b.data(), a.size());
}

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}

inline void scale_into(double a, std::span<const double> x, std::span<double> y) {
  active().scale_into(a, x.data(), y.data(), x.size());
}

inline void max_inplace(std::span<double> acc, std::span<const double> x) {
  active().max_inplace(acc.data(), x.data(), x.size());
}

inline void min_inplace(std::span<double> acc, std::span<const double> x) {
  active().min_inplace(acc.data(), x.data(), x.size());
}

}  // namespace gradcons::kernels
