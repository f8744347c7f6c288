#include "zid/kernels.hpp"

#include <cmath>

namespace zid::kernels {

namespace scalar {

double sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double dot(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double max_abs_diff(const double* x, const double* y, std::size_t n) {
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::fabs(x[i] - y[i]);
    if (d > best) best = d;
  }
  return best;
}

void matvec(const double* a, const double* x, double* y, std::size_t rows,
            std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) {
    y[r] = dot(a + r * cols, x, cols);
  }
}

}  // namespace scalar

namespace {

struct Backend {
  double (*sum)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*max_abs_diff)(const double*, const double*, std::size_t);
  void (*matvec)(const double*, const double*, double*, std::size_t,
                 std::size_t);
  const char* name;
};

Backend select_backend() {
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return {avx2::sum, avx2::dot, avx2::max_abs_diff, avx2::matvec, "avx2"};
  }
#endif
  return {scalar::sum, scalar::dot, scalar::max_abs_diff, scalar::matvec,
          "scalar"};
}

const Backend& backend() {
  static const Backend b = select_backend();
  return b;
}

}  // namespace

double sum(const double* x, std::size_t n) { return backend().sum(x, n); }

double dot(const double* x, const double* y, std::size_t n) {
  return backend().dot(x, y, n);
}

double max_abs_diff(const double* x, const double* y, std::size_t n) {
  return backend().max_abs_diff(x, y, n);
}

void matvec(const double* a, const double* x, double* y, std::size_t rows,
            std::size_t cols) {
  backend().matvec(a, x, y, rows, cols);
}

const char* active_backend() { return backend().name; }

}  // namespace zid::kernels
