// Per-kernel benchmark: serial reference vs OpenMP implementation on a
// synthetic frame. Also cross-checks that both sides produce identical
// output sizes (they share the per-point seed protocol, so they must).

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "scanstress/frame.hpp"
#include "scanstress/kernels.hpp"
#include "scanstress/params.hpp"
#include "scanstress/reference.hpp"
#include "scanstress/rng.hpp"

using namespace scanstress;

namespace {

PointCloudFrame synthesize(std::size_t points, std::uint64_t seed) {
  PointCloudFrame frame;
  frame.sensor_id = "bench";
  frame.attributes.push_back({"intensity", ScalarType::F32, {}});
  frame.reserve(points);
  RandomStream stream(seed, 0xBE7C);
  for (std::size_t i = 0; i < points; ++i) {
    Eigen::Vector3d direction;
    double norm = 0.0;
    do {
      direction = next_normal3(stream);
      norm = direction.norm();
    } while (norm < 1e-12);
    const double range = 2.0 + 28.0 * stream.next_unit();
    frame.push_point(direction * (range / norm),
                     0.1 * static_cast<double>(i) / std::max<std::size_t>(points, 1),
                     {100.0 / (1.0 + range)});
  }
  return frame;
}

template <typename F>
double time_ms(int iterations, F&& body) {
  double best = 1e300;
  for (int i = 0; i < iterations; ++i) {
    const auto start = std::chrono::steady_clock::now();
    body();
    const std::chrono::duration<double, std::milli> elapsed =
        std::chrono::steady_clock::now() - start;
    best = std::min(best, elapsed.count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t points = 100000;
  int iterations = 10;
  if (argc > 1) points = std::strtoull(argv[1], nullptr, 10);
  if (argc > 2) iterations = std::atoi(argv[2]);

  const PointCloudFrame frame = synthesize(points, 42);
  const DegradationParams params = default_tier_params(Tier::kHeavy);
  const std::uint64_t seed = derive_seed(42, 0, 0);
  const Exec exec;
  const MotionEstimate motion{params.motion.linear_velocity, params.motion.angular_velocity};
  const SectorParams sector{0.0, M_PI / 3.0};
  const auto centers = sample_occlusion_centers(params.occlusion, seed);

  struct Row {
    const char* name;
    double serial_ms;
    double parallel_ms;
    std::size_t serial_out;
    std::size_t parallel_out;
  };
  std::vector<Row> rows;

  auto bench = [&](const char* name, auto serial_fn, auto parallel_fn) {
    std::size_t serial_out = 0, parallel_out = 0;
    const double serial_ms = time_ms(iterations, [&] { serial_out = serial_fn().size(); });
    const double parallel_ms = time_ms(iterations, [&] { parallel_out = parallel_fn().size(); });
    rows.push_back({name, serial_ms, parallel_ms, serial_out, parallel_out});
  };

  bench(
      "dropout", [&] { return reference::apply_dropout(frame, params.dropout_ratio, seed); },
      [&] { return apply_dropout(frame, params.dropout_ratio, seed, exec); });
  bench(
      "structured_dropout", [&] { return reference::apply_structured_dropout(frame, sector); },
      [&] { return apply_structured_dropout(frame, sector, exec); });
  bench(
      "fov_reduction",
      [&] { return reference::apply_fov_reduction(frame, params.fov.theta_max, params.fov.phi_max); },
      [&] { return apply_fov_reduction(frame, params.fov.theta_max, params.fov.phi_max, exec); });
  bench(
      "occlusion",
      [&] { return reference::apply_occlusion_at(frame, centers, params.occlusion.patch_radius); },
      [&] { return apply_occlusion_at(frame, centers, params.occlusion.patch_radius, exec); });
  bench(
      "noise", [&] { return reference::apply_noise(frame, params.noise, seed); },
      [&] { return apply_noise(frame, params.noise, seed, exec); });
  bench(
      "motion_distortion", [&] { return reference::apply_motion_distortion(frame, motion); },
      [&] { return apply_motion_distortion(frame, motion, exec); });
  bench(
      "sparsification",
      [&] { return reference::apply_sparsification(frame, params.sparsify_stride); },
      [&] { return apply_sparsification(frame, params.sparsify_stride, exec); });

#ifdef _OPENMP
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif
  std::printf("kernel benchmark: %zu points, best of %d, %d thread(s)\n", points, iterations,
              threads);
  std::printf("%-20s %12s %12s %9s %10s\n", "kernel", "serial [ms]", "openmp [ms]", "speedup",
              "out count");
  bool mismatch = false;
  for (const Row& row : rows) {
    std::printf("%-20s %12.3f %12.3f %8.2fx %10zu\n", row.name, row.serial_ms, row.parallel_ms,
                row.serial_ms / row.parallel_ms, row.parallel_out);
    if (row.serial_out != row.parallel_out) mismatch = true;
  }
  if (mismatch) {
    std::fprintf(stderr, "serial/parallel output size mismatch\n");
    return 1;
  }
  return 0;
}
