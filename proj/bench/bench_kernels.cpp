// Serial reference against the OpenMP Gray-code kernel for log Z.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <omp.h>

#include "lrfim/model.hpp"
#include "lrfim/params.hpp"

using namespace lrfim;

namespace {

template <class F>
double seconds(F&& f, double& out) {
  const auto t0 = std::chrono::steady_clock::now();
  out = f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main() {
  Params p = paper_params(2, 4.0);
  p.beta = 0.7;
  p.eps = 0.5;
  std::printf("threads=%d\n", omp_get_max_threads());
  std::printf("%-6s %-6s %12s %12s %9s %12s\n", "side", "sites", "serial_s", "parallel_s", "speedup", "abs_diff");
  for (int side : {3, 4}) {
    const Region box = Region::centered_box(2, side);
    const FieldSample h = sample_field(box, FieldDistribution::Gaussian, 7);
    double ref = 0, par = 0;
    const double ts = seconds([&] { return log_partition_function_reference(box, h, p); }, ref);
    const double tp = seconds([&] { return log_partition_function(box, h, p); }, par);
    std::printf("%-6d %-6zu %12.4f %12.4f %9.2f %12.3e\n", side, box.size(), ts, tp, ts / tp, std::abs(ref - par));
  }
  {
    const Region box = Region::box(Site{0, 0}, Site{4, 3});
    const FieldSample h = sample_field(box, FieldDistribution::Gaussian, 11);
    double ref = 0, par = 0;
    const double ts = seconds([&] { return log_partition_function_reference(box, h, p); }, ref);
    const double tp = seconds([&] { return log_partition_function(box, h, p); }, par);
    std::printf("%-6s %-6zu %12.4f %12.4f %9.2f %12.3e\n", "5x4", box.size(), ts, tp, ts / tp, std::abs(ref - par));
  }
  return 0;
}
