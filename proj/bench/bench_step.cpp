// Wall-clock comparison of the fused parallel step and the serial reference
// step on the benchmark initial states.
//
//   qhmix_bench [case] [cells] [steps]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "qhmix/cases.hpp"

using namespace qhmix;

namespace {

template <class Step>
double seconds_per_step(const MeshState& initial, const SchemeConfig& cfg, int steps, Step step) {
  MeshState s = initial;
  const auto t0 = std::chrono::steady_clock::now();
  for (int k = 0; k < steps; ++k) s = step(s, cfg, time_step(s, cfg));
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count() / steps;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string id = argc > 1 ? argv[1] : "B";
  const int cells = argc > 2 ? std::atoi(argv[2]) : 20000;
  const int steps = argc > 3 ? std::atoi(argv[3]) : 50;

  const CaseSpec spec = make_case(id);
  const SchemeConfig cfg = spec.scheme_config();
  const MeshState initial = build_initial(spec, case_mesh(spec, cells));

  const double ref = seconds_per_step(initial, cfg, steps,
                                      [](const MeshState& s, const SchemeConfig& c, double dt) {
                                        return reference::step(s, c, dt);
                                      });
  std::printf("case %s, %d cells, %d steps\n", id.c_str(), cells, steps);
  std::printf("%-22s %12.3f us/step\n", "reference (serial)", ref * 1e6);
  const int max_threads = omp_get_max_threads();
  for (int t = 1; t <= max_threads; t *= 2) {
    omp_set_num_threads(t);
    MeshState out = initial;
    detail::KernelWorkspace ws;
    const double k = seconds_per_step(initial, cfg, steps,
                                      [&](const MeshState& s, const SchemeConfig& c, double dt) {
                                        detail::step_into(s, c, dt, out, ws);
                                        return out;
                                      });
    std::printf("kernel, %2d thread(s)    %12.3f us/step  (x%.2f)\n", t, k * 1e6, ref / k);
  }
  return 0;
}
