#pragma once

#include <cstddef>

// Low-level numeric kernels used by the probability-table layer and the
// numeric witness search.  Each kernel has a portable scalar implementation
// and, on x86-64 machines with AVX2, a vectorized variant.  The public entry
// points dispatch once at first use based on runtime CPU detection, so the
// same binary runs correctly on any host.
namespace zid::kernels {

// Sum of x[0..n).
double sum(const double* x, std::size_t n);

// Dot product of x[0..n) and y[0..n).
double dot(const double* x, const double* y, std::size_t n);

// max_i |x[i] - y[i]| over [0..n).  Returns 0 for n == 0.
double max_abs_diff(const double* x, const double* y, std::size_t n);

// y[0..rows) = A * x where A is row-major rows x cols.
void matvec(const double* a, const double* x, double* y, std::size_t rows,
            std::size_t cols);

// Name of the implementation selected at runtime ("scalar" or "avx2").
const char* active_backend();

// Scalar reference implementations, exposed so tests can check the
// vectorized path against them on the same inputs.
namespace scalar {
double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double max_abs_diff(const double* x, const double* y, std::size_t n);
void matvec(const double* a, const double* x, double* y, std::size_t rows,
            std::size_t cols);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double max_abs_diff(const double* x, const double* y, std::size_t n);
void matvec(const double* a, const double* x, double* y, std::size_t rows,
            std::size_t cols);
}  // namespace avx2
#endif

}  // namespace zid::kernels
