#include "lrfim/numerics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lrfim {

namespace {

// B_2k / (2k)! for k = 1..10.
constexpr std::array<double, 10> kBernoulliOverFactorial = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
    43867.0 / 798.0 / 6402373705728000.0,
    -174611.0 / 330.0 / 2432902008176640000.0,
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

double zeta(double s, double* error) {
  if (!(s > 1.0)) throw std::domain_error("zeta requires s > 1");
  constexpr int N = 24;
  constexpr int K = 9;
  double head = 0.0;
  for (int n = N - 1; n >= 1; --n) head += std::pow(n, -s);
  const double Nd = N;
  double sum = head + std::pow(Nd, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(Nd, -s);
  // Rising factorial s(s+1)...(s+2k-2) times N^{-s-2k+1}.
  double rising = s;
  double power = std::pow(Nd, -s - 1.0);
  double next = 0.0;
  for (int k = 1; k <= K + 1; ++k) {
    const double term = kBernoulliOverFactorial[static_cast<std::size_t>(k - 1)] * rising * power;
    if (k <= K) sum += term;
    else next = std::abs(term);
    rising *= (s + 2 * k - 1) * (s + 2 * k);
    power /= Nd * Nd;
  }
  if (error) *error = next + 64.0 * std::numeric_limits<double>::epsilon() * std::abs(sum);
  return sum;
}

double sphere_count(int d, std::int64_t n) {
  if (n == 0) return 1.0;
  double total = 0.0;
  for (int k = 1; k <= d && k <= n; ++k) {
    double choose_dk = 1.0;
    for (int i = 0; i < k; ++i) choose_dk = choose_dk * (d - i) / (i + 1);
    double choose_n = 1.0;
    for (int i = 0; i < k - 1; ++i) choose_n = choose_n * static_cast<double>(n - 1 - i) / (i + 1);
    total += std::ldexp(choose_dk * choose_n, k);
  }
  return total;
}

std::vector<double> sphere_count_polynomial(int d) {
  std::vector<double> p(static_cast<std::size_t>(d), 0.0);
  for (int k = 1; k <= d; ++k) {
    // (n-1)(n-2)...(n-k+1)/(k-1)!
    std::vector<double> poly{1.0};
    double fact = 1.0;
    for (int i = 1; i <= k - 1; ++i) {
      std::vector<double> next(poly.size() + 1, 0.0);
      for (std::size_t j = 0; j < poly.size(); ++j) {
        next[j + 1] += poly[j];
        next[j] -= i * poly[j];
      }
      poly = std::move(next);
      fact *= i;
    }
    double choose_dk = 1.0;
    for (int i = 0; i < k; ++i) choose_dk = choose_dk * (d - i) / (i + 1);
    const double w = std::ldexp(choose_dk, k) / fact;
    for (std::size_t j = 0; j < poly.size(); ++j) p[j] += w * poly[j];
  }
  return p;
}

double log_binomial(double n, double k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace lrfim
