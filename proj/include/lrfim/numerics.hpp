#pragma once

#include <cstdint>
#include <vector>

namespace lrfim {

/// Riemann zeta for real s > 1 via Euler–Maclaurin; `error` receives a bound on
/// the truncation remainder plus accumulated rounding.
double zeta(double s, double* error = nullptr);

/// Number of sites at l1 distance exactly n >= 1 from the origin of Z^d.
double sphere_count(int d, std::int64_t n);

/// Coefficients p_j with sphere_count(d, n) = sum_j p_j n^j for n >= 1.
std::vector<double> sphere_count_polynomial(int d);

double log_binomial(double n, double k);

/// Deterministic seed for replica `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// log(exp(a) + exp(b)) without overflow.
double log_add(double a, double b);

/// 64-bit FNV-1a over bytes; used for constant-table fingerprints.
std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 1469598103934665603ULL);

}  // namespace lrfim
