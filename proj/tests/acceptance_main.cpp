// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Usage: acceptance [path-to-scanstress-cli] [scratch-dir]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "scanstress/chain.hpp"
#include "scanstress/eval/ape.hpp"
#include "scanstress/eval/sweep.hpp"
#include "scanstress/io/pcd.hpp"
#include "scanstress/io/stream.hpp"
#include "scanstress/kernels.hpp"
#include "scanstress/reference.hpp"
#include "scanstress/rng.hpp"

#include "test_helpers.hpp"

using namespace scanstress;
namespace fs = std::filesystem;

namespace {

std::string g_cli_path;
fs::path g_scratch;

struct Criterion {
  int number;
  const char* title;
  std::function<bool(std::string&)> run;
};

double seconds_since(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------------- 1
bool equation_fidelity(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  RandomStream stream(0xACC1, 0);
  std::size_t mismatches = 0;
  std::size_t points_checked = 0;

  for (int trial = 0; trial < 1000; ++trial) {
    testing::FrameSpec spec;
    spec.points = 1 + stream.next_u64() % 1000;
    const auto frame = testing::make_random_frame(50000 + trial, spec);
    points_checked += frame.size();

    const double theta_max = 0.2 + (M_PI - 0.2) * stream.next_unit();
    const double phi_max = 0.1 + (M_PI / 2 - 0.1) * stream.next_unit();
    if (!frames_equal(apply_fov_reduction(frame, theta_max, phi_max),
                      reference::apply_fov_reduction(frame, theta_max, phi_max))) {
      ++mismatches;
    }

    std::vector<Eigen::Vector3d> centers;
    const int k = 1 + static_cast<int>(stream.next_u64() % 5);
    for (int c = 0; c < k; ++c) {
      centers.emplace_back(-20.0 + 40.0 * stream.next_unit(), -20.0 + 40.0 * stream.next_unit(),
                           -8.0 + 16.0 * stream.next_unit());
    }
    const double radius = 0.2 + 6.0 * stream.next_unit();
    if (!frames_equal(apply_occlusion_at(frame, centers, radius),
                      reference::apply_occlusion_at(frame, centers, radius))) {
      ++mismatches;
    }

    const SectorParams sector{-M_PI + 2.0 * M_PI * stream.next_unit(),
                              0.01 + 6.0 * stream.next_unit()};
    if (!frames_equal(apply_structured_dropout(frame, sector),
                      reference::apply_structured_dropout(frame, sector))) {
      ++mismatches;
    }

    const int stride = 1 + static_cast<int>(stream.next_u64() % 7);
    if (!frames_equal(apply_sparsification(frame, stride),
                      reference::apply_sparsification(frame, stride))) {
      ++mismatches;
    }
  }

  const double elapsed = seconds_since(start);
  std::ostringstream out;
  out << mismatches << " mismatching frames over 1000 frames / " << points_checked
      << " points, " << elapsed << " s";
  detail = out.str();
  return mismatches == 0 && elapsed < 30.0;
}

// ---------------------------------------------------------------------- 2
bool statistical_laws(std::string& detail) {
  const std::size_t n = 100000;
  PointCloudFrame frame;
  frame.positions.assign(n, Eigen::Vector3d::Zero());
  frame.time_offsets.assign(n, 0.0);

  std::size_t band_violations = 0;
  for (double ratio : {0.15, 0.225, 0.325, 0.40}) {
    const double mean = static_cast<double>(n) * (1.0 - ratio);
    const double band = 3.0 * std::sqrt(static_cast<double>(n) * ratio * (1.0 - ratio));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto out = apply_dropout(frame, ratio, derive_seed(seed, 0, 3));
      if (std::fabs(static_cast<double>(out.size()) - mean) > band) ++band_violations;
    }
  }

  double worst_variance_deviation = 0.0;
  for (double sigma : {0.01, 0.05}) {
    const auto out = apply_noise(frame, {sigma, 0.0, 0.0}, derive_seed(17, 0, 5));
    for (int axis = 0; axis < 3; ++axis) {
      double sum = 0.0, sum_sq = 0.0;
      for (const auto& p : out.positions) {
        sum += p[axis];
        sum_sq += p[axis] * p[axis];
      }
      const double variance = sum_sq / n - (sum / n) * (sum / n);
      worst_variance_deviation =
          std::max(worst_variance_deviation, std::fabs(variance - sigma * sigma) / (sigma * sigma));
    }
  }

  std::ostringstream out;
  out << band_violations << " binomial band violations (80 draws); worst noise variance deviation "
      << worst_variance_deviation * 100.0 << "% (allowed 5%)";
  detail = out.str();
  return band_violations == 0 && worst_variance_deviation <= 0.05;
}

// ---------------------------------------------------------------------- 3
Eigen::Matrix3d exact_rodrigues(const Eigen::Vector3d& aa) {
  const double angle = aa.norm();
  if (angle == 0.0) return Eigen::Matrix3d::Identity();
  const Eigen::Vector3d axis = aa / angle;
  Eigen::Matrix3d skew;
  skew << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
  return Eigen::Matrix3d::Identity() + std::sin(angle) * skew +
         (1.0 - std::cos(angle)) * (skew * skew);
}

bool rotation_correctness(std::string& detail) {
  RandomStream stream(0xACC3, 0);
  double worst_orth = 0.0, worst_det = 0.0, worst_margin = 0.0;
  for (int i = 0; i < 10000; ++i) {
    Eigen::Vector3d axis = next_normal3(stream);
    while (axis.norm() < 1e-12) axis = next_normal3(stream);
    axis.normalize();

    const Eigen::Vector3d exact_branch = axis * (0.1 + (M_PI - 0.1) * stream.next_unit());
    const Eigen::Matrix3d r = rotation_from_axis_angle(exact_branch);
    worst_orth = std::max(worst_orth,
                          (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff());
    worst_det = std::max(worst_det, std::fabs(r.determinant() - 1.0));

    const Eigen::Vector3d small_branch = axis * (0.0999 * stream.next_unit());
    const double error = (rotation_from_axis_angle(small_branch) - exact_rodrigues(small_branch))
                             .cwiseAbs()
                             .maxCoeff();
    const double bound = 0.5 * small_branch.squaredNorm();
    if (bound > 0.0) worst_margin = std::max(worst_margin, error / bound);
  }
  std::ostringstream out;
  out << "orthogonality " << worst_orth << ", |det-1| " << worst_det
      << " (allowed 1e-12); first-order error/bound " << worst_margin << " (allowed 1)";
  detail = out.str();
  return worst_orth <= 1e-12 && worst_det <= 1e-12 && worst_margin <= 1.0;
}

// ---------------------------------------------------------------------- 4
std::string file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool cli_determinism(std::string& detail) {
  if (g_cli_path.empty()) {
    detail = "no CLI path given";
    return false;
  }
  const fs::path root = g_scratch / "determinism";
  fs::remove_all(root);
  fs::create_directories(root / "in");

  // Synthetic input sequence: 5 rendered scans written as binary PCD.
  const Scene scene = generate_scene(29);
  TrajectorySpec spec;
  spec.frame_count = 5;
  spec.step = 0.25;
  RenderOptions render;
  render.azimuth_steps = 240;
  render.elevation_steps = 16;
  const auto scans = render_sequence(scene, spec, make_profile(ProfileClass::kGeneric), render);
  std::vector<std::string> inputs;
  for (std::size_t k = 0; k < scans.size(); ++k) {
    const fs::path path = root / "in" / ("frame_" + std::to_string(k) + ".pcd");
    write_pcd(scans[k], path.string(), PcdEncoding::kBinary);
    inputs.push_back(path.string());
  }

  const auto run = [&](const std::string& label, int threads) -> std::optional<fs::path> {
    const fs::path out_dir = root / label;
    std::ostringstream command;
    command << g_cli_path << " --tier heavy --seed 424242 --threads " << threads << " --output "
            << out_dir << " augment";
    for (const auto& input : inputs) command << ' ' << input;
    command << " > " << (root / (label + ".log")) << " 2>&1";
    if (std::system(command.str().c_str()) != 0) return std::nullopt;
    return out_dir;
  };

  std::vector<std::string> payload_hashes;
  const std::vector<std::pair<std::string, int>> runs = {
      {"run1_t4", 4}, {"run2_t4", 4}, {"run3_t4", 4}, {"run4_t1", 1}, {"run5_t8", 8}};
  for (const auto& [label, threads] : runs) {
    const auto out_dir = run(label, threads);
    if (!out_dir) {
      detail = "CLI run failed: " + label;
      return false;
    }
    std::string combined;
    for (std::size_t k = 0; k < scans.size(); ++k) {
      combined += file_bytes(*out_dir / ("frame_" + std::to_string(k) + ".pcd"));
      combined += '\0';
    }
    payload_hashes.push_back(combined);
  }

  for (std::size_t i = 1; i < payload_hashes.size(); ++i) {
    if (payload_hashes[i] != payload_hashes[0]) {
      detail = "payload bytes differ between " + runs[0].first + " and " + runs[i].first;
      return false;
    }
  }
  std::ostringstream out;
  out << runs.size() << " runs (threads 1/4/8), " << scans.size()
      << " frames each: byte-identical payloads";
  detail = out.str();
  return true;
}

// ---------------------------------------------------------------------- 5
struct ReferenceApe {
  double mean, std_dev, rmse, median, min, max;
};

// Straight-line reference: exhaustive nearest association + direct formulas.
ReferenceApe reference_ape(const Trajectory& ref, const Trajectory& est, double max_dt) {
  std::vector<double> errors;
  for (const Pose& e : est.poses) {
    double best_dt = std::numeric_limits<double>::infinity();
    const Pose* best = nullptr;
    for (const Pose& r : ref.poses) {
      const double dt = std::fabs(r.timestamp - e.timestamp);
      if (dt < best_dt) {
        best_dt = dt;
        best = &r;
      }
    }
    if (best != nullptr && best_dt <= max_dt) {
      errors.push_back((best->translation - e.translation).norm());
    }
  }
  ReferenceApe out{};
  const double n = static_cast<double>(errors.size());
  double sum = 0, sum_sq = 0;
  out.min = errors.front();
  out.max = errors.front();
  for (double v : errors) {
    sum += v;
    sum_sq += v * v;
    out.min = std::min(out.min, v);
    out.max = std::max(out.max, v);
  }
  out.mean = sum / n;
  out.rmse = std::sqrt(sum_sq / n);
  double centered = 0;
  for (double v : errors) centered += (v - out.mean) * (v - out.mean);
  out.std_dev = std::sqrt(centered / n);
  std::sort(errors.begin(), errors.end());
  out.median = errors.size() % 2 == 1
                   ? errors[errors.size() / 2]
                   : 0.5 * (errors[errors.size() / 2 - 1] + errors[errors.size() / 2]);
  return out;
}

bool ape_oracle_equivalence(std::string& detail) {
  RandomStream stream(0xACC5, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 5 + stream.next_u64() % 60;
    Trajectory ref, est;
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      t += 0.05 + 0.2 * stream.next_unit();
      Pose r;
      r.timestamp = t;
      r.translation = 10.0 * next_normal3(stream);
      ref.poses.push_back(r);
      Pose e = r;
      e.timestamp = t + (stream.next_unit() - 0.5) * 0.02;  // jitter within the window
      e.translation += 0.5 * next_normal3(stream);
      est.poses.push_back(e);
    }
    std::sort(est.poses.begin(), est.poses.end(),
              [](const Pose& a, const Pose& b) { return a.timestamp < b.timestamp; });

    ApeOptions options;
    options.max_dt = 0.03;
    const ApeResult got = compute_ape(ref, est, options);
    const ReferenceApe expected = reference_ape(ref, est, options.max_dt);
    worst = std::max({worst, std::fabs(got.mean - expected.mean),
                      std::fabs(got.std_dev - expected.std_dev),
                      std::fabs(got.rmse - expected.rmse), std::fabs(got.median - expected.median),
                      std::fabs(got.min - expected.min), std::fabs(got.max - expected.max)});
  }

  // Exactness of the contract cases.
  Trajectory ref;
  for (int i = 0; i < 10; ++i) {
    Pose p;
    p.timestamp = i * 0.1;
    p.translation = {1.0 * i, 0.5 * i, 0.0};
    ref.poses.push_back(p);
  }
  const ApeResult self = compute_ape(ref, ref, {});
  auto offset_traj = ref;
  for (Pose& p : offset_traj.poses) p.translation += Eigen::Vector3d(1, 0, 0);
  const ApeResult offset = compute_ape(ref, offset_traj, {});

  std::ostringstream out;
  out << "worst |difference| vs straight-line oracle " << worst
      << " (allowed 1e-9); identity mean " << self.mean << "; offset mean " << offset.mean;
  detail = out.str();
  return worst <= 1e-9 && self.mean == 0.0 && self.max == 0.0 &&
         std::fabs(offset.mean - 1.0) <= 1e-12 && offset.std_dev <= 1e-12;
}

// ---------------------------------------------------------------------- 6
bool severity_trend(std::string& detail) {
  const auto start = std::chrono::steady_clock::now();
  ScenarioConfig config = default_scenario();
  config.global_seed = 1;

  SweepOptions options;
  options.trajectory.frame_count = 10;
  options.trajectory.step = 0.3;

  const auto result = severity_sweep(7, config, kAllTiers, 10, options);
  const double elapsed = seconds_since(start);

  std::ostringstream out;
  bool ok = result.cells.size() == 4;
  double previous = -1.0;
  out << "medians [m]:";
  for (const auto& cell : result.cells) {
    out << ' ' << tier_name(cell.tier) << '=' << cell.ape.median;
    if (cell.ape.count == 0 || cell.ape.median < previous) ok = false;
    previous = cell.ape.median;
  }
  const double light = result.cells.front().ape.median;
  const double extreme = result.cells.back().ape.median;
  out << "; extreme/light = " << (light > 0 ? extreme / light : 0.0) << " (need >= 2); " << elapsed
      << " s (budget 600)";
  detail = out.str();
  return ok && extreme >= 2.0 * light && elapsed < 600.0;
}

// ---------------------------------------------------------------------- 7
bool performance_bound(std::string& detail) {
  ScenarioConfig config = default_scenario();
  config.global_seed = 9;
  PointCloudFrame frame;
  frame.sensor_id = "bench";
  RandomStream stream(0xACC7, 0);
  const std::size_t n = 100000;
  frame.positions.reserve(n);
  frame.time_offsets.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::Vector3d direction = next_normal3(stream);
    while (direction.norm() < 1e-12) direction = next_normal3(stream);
    const double range = 2.0 + 28.0 * stream.next_unit();
    frame.positions.push_back(direction.normalized() * range);
    frame.time_offsets.push_back(0.1 * static_cast<double>(i) / n);
  }

  apply_chain(frame, config, Tier::kHeavy);  // warm-up
  double total = 0.0;
  const int iterations = 10;
  for (int i = 0; i < iterations; ++i) {
    const auto start = std::chrono::steady_clock::now();
    apply_chain(frame, config, Tier::kHeavy);
    total += seconds_since(start);
  }
  const double mean_ms = total / iterations * 1e3;

  std::ostringstream out;
  out << "heavy chain on 100k points: mean " << mean_ms
      << " ms; paper-hardware target 20 ms: " << (mean_ms < 20.0 ? "pass" : "warn")
      << "; portable bound 100 ms";
  detail = out.str();
  return mean_ms < 100.0;
}

// ---------------------------------------------------------------------- 8
bool io_roundtrips(std::string& detail) {
  const fs::path dir = g_scratch / "roundtrip";
  fs::create_directories(dir);
  RandomStream stream(0xACC8, 0);
  std::size_t failures = 0;

  for (int trial = 0; trial < 500; ++trial) {
    testing::FrameSpec spec;
    spec.points = 1 + stream.next_u64() % 400;
    spec.frame_index = static_cast<std::uint64_t>(trial);
    spec.base_time = 1000.0 + trial;
    const int flavor = trial % 3;
    spec.with_intensity = flavor == 0;
    spec.stream_ouster = flavor == 1;
    spec.stream_livox = flavor == 2;
    const auto frame = testing::make_random_frame(90000 + trial, spec);

    const fs::path ascii_path = dir / "a.pcd";
    const fs::path binary_path = dir / "b.pcd";
    write_pcd(frame, ascii_path.string(), PcdEncoding::kAscii);
    write_pcd(frame, binary_path.string(), PcdEncoding::kBinary);
    if (!frames_equal(read_pcd(ascii_path.string())[0], frame)) ++failures;
    if (!frames_equal(read_pcd(binary_path.string())[0], frame)) ++failures;

    std::stringstream buffer;
    write_frame_stream(buffer, {&frame, 1});
    const auto decoded = read_frame_stream(buffer);
    if (decoded.size() != 1 || !frames_equal(decoded[0], frame)) ++failures;
  }

  std::ostringstream out;
  out << failures << " lossy round-trips over 500 frames x {pcd-ascii, pcd-binary, stream}";
  detail = out.str();
  return failures == 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli_path = argv[1];
  g_scratch = argc > 2 ? fs::path(argv[2]) : fs::temp_directory_path() / "scanstress_acceptance";
  fs::create_directories(g_scratch);

  const std::vector<Criterion> criteria = {
      {1, "equation fidelity vs brute-force membership oracle", equation_fidelity},
      {2, "statistical laws (binomial dropout band, noise variance)", statistical_laws},
      {3, "rotation orthogonality and first-order Taylor bound", rotation_correctness},
      {4, "byte-identical augment outputs across runs and thread counts", cli_determinism},
      {5, "APE equals a straight-line reference implementation", ape_oracle_equivalence},
      {6, "median APE non-decreasing light->extreme, extreme >= 2x light", severity_trend},
      {7, "heavy-chain latency report and portable bound", performance_bound},
      {8, "lossless PCD and framed-stream round-trips", io_roundtrips},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    std::string det;
    bool ok = false;
    try {
      ok = criterion.run(det);
    } catch (const std::exception& e) {
      det = std::string("exception: ") + e.what();
    }
    std::printf("%s criterion-%d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion.number,
                criterion.title, det.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
