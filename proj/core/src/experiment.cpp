#include "geowave/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "geowave/bounds.hpp"
#include "geowave/csv.hpp"
#include "geowave/errors.hpp"
#include "geowave/nystrom.hpp"
#include "geowave/sampling.hpp"

namespace geowave {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Deterministic, documented derivation of the proxy-cloud seed used by the
// consistency harness; keeps the proxy sample independent of the N-clouds.
std::uint64_t proxy_seed(std::uint64_t seed) { return seed + 1000003; }

}  // namespace

ExperimentSpec ExperimentSpec::resolve(const ConfigMap& config) {
  ExperimentSpec spec;
  spec.model = model_from_string(config.get_string("manifold.model", "sphere2"));
  spec.n_points = config.get_int("manifold.N", 500);
  spec.density =
      sphere_density_from_string(config.get_string("manifold.density", "uniform"));
  spec.seed = config.get_uint("manifold.seed", 1);
  spec.external_path = config.get_string("manifold.path", "");
  switch (spec.model) {
    case Model::Sphere2:
    case Model::FlatTorus2:
      spec.intrinsic_dim = 2;
      break;
    case Model::Circle1:
      spec.intrinsic_dim = 1;
      break;
    case Model::External:
      spec.intrinsic_dim = static_cast<int>(config.get_int("manifold.n", 2));
      break;
  }

  spec.lambda = config.get_double("kernel.lambda", 1.0);
  spec.alpha = config.get_double("kernel.alpha", 2.0);
  spec.h = config.get_double("kernel.h", 0.2);
  spec.epsilon_explicit = config.get_double("kernel.epsilon", 0.0);
  spec.truncation_radius = config.get_double("kernel.rtrunc", 6.0);
  spec.shift_policy = config.get_string("kernel.shift", "none");

  spec.base_index = config.get_int("state.j0", 0);
  const std::string construction = config.get_string("state.construction", "tangent");
  if (construction == "neighbor") {
    spec.neighbor_construction = true;
  } else if (construction != "tangent") {
    throw InvalidArgument("state.construction must be tangent|neighbor");
  }
  spec.direction = config.get_double_list("state.direction", {});
  spec.neighbor_index = config.get_int("state.jstar", -1);
  spec.state_h = config.get_double("state.h", 0.0);

  spec.t_grid = config.get_double_list("recovery.t_grid", {0.2, 0.4, 0.6});
  spec.cutoff_inner = config.get_double("recovery.cutoff_in", 1.0);
  spec.cutoff_outer = config.get_double("recovery.cutoff_out", 2.0);
  spec.use_cutoff = config.get_bool("recovery.use_cutoff", true);

  spec.workers = static_cast<int>(config.get_int("workers", 1));
  spec.verbose = config.get_bool("verbose", false);

  if (spec.model == Model::External && spec.external_path.empty()) {
    throw InvalidArgument("external model needs manifold.path");
  }
  if (spec.model == Model::External && !spec.neighbor_construction) {
    throw InvalidArgument("external clouds need state.construction=neighbor");
  }
  if (spec.workers < 1) {
    throw InvalidArgument("workers must be >= 1");
  }
  return spec;
}

double ExperimentSpec::resolved_epsilon() const {
  return epsilon_explicit > 0.0 ? epsilon_explicit : std::pow(h, 2.0 + alpha);
}

double ExperimentSpec::resolved_shift() const {
  if (shift_policy == "none") return 0.0;
  if (shift_policy == "coupled") return std::pow(resolved_state_h(), 1.0 + alpha);
  char* end = nullptr;
  const double value = std::strtod(shift_policy.c_str(), &end);
  if (end == shift_policy.c_str() || *end != '\0' || value < 0.0) {
    throw InvalidArgument("kernel.shift must be none|coupled|<nonnegative number>");
  }
  return value;
}

PointCloud make_cloud(const ExperimentSpec& spec) {
  return make_cloud(spec, spec.n_points, spec.seed);
}

PointCloud make_cloud(const ExperimentSpec& spec, Index n_points, std::uint64_t seed) {
  switch (spec.model) {
    case Model::Sphere2:
      return sample_sphere(n_points, spec.density, seed);
    case Model::FlatTorus2:
      return sample_flat_torus(n_points, seed);
    case Model::Circle1:
      return sample_circle(n_points, seed);
    case Model::External:
      return load_point_cloud(spec.external_path, spec.intrinsic_dim);
  }
  throw InvalidArgument("unknown model");
}

namespace {

// Deterministic default momentum direction per model: a fixed ambient axis
// projected onto the tangent space, with a fallback when degenerate.
Eigen::VectorXd default_direction(const PointCloud& cloud, Index base) {
  const Eigen::VectorXd at = cloud.points.row(base);
  switch (cloud.model) {
    case Model::Sphere2: {
      for (int axis = 2; axis >= 0; --axis) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(3);
        v(axis) = 1.0;
        Eigen::VectorXd tangent = v - at.dot(v) * at;
        if (tangent.norm() > 1e-6) return tangent.normalized();
      }
      throw InvalidArgument("degenerate base point");
    }
    case Model::FlatTorus2: {
      const double ct = at(0), st = at(1), cp = at(2), sp = at(3);
      Eigen::VectorXd tangent(4);
      const double inv = 1.0 / std::sqrt(2.0);
      tangent << -st * inv, ct * inv, -sp * inv, cp * inv;
      return tangent;
    }
    case Model::Circle1: {
      Eigen::VectorXd tangent(2);
      tangent << -at(1), at(0);
      return tangent.normalized();
    }
    case Model::External:
      throw InvalidArgument("external clouds need an explicit state.direction");
  }
  throw InvalidArgument("unknown model");
}

Eigen::VectorXd project_tangent(const PointCloud& cloud, Index base,
                                const Eigen::VectorXd& direction) {
  const Eigen::VectorXd at = cloud.points.row(base);
  Eigen::VectorXd v = direction;
  switch (cloud.model) {
    case Model::Sphere2:
    case Model::Circle1: {
      const Eigen::VectorXd normal = at.normalized();
      v -= normal.dot(v) * normal;
      break;
    }
    case Model::FlatTorus2: {
      Eigen::VectorXd n1 = Eigen::VectorXd::Zero(4);
      n1.head<2>() = at.head<2>().normalized();
      Eigen::VectorXd n2 = Eigen::VectorXd::Zero(4);
      n2.tail<2>() = at.tail<2>().normalized();
      v -= n1.dot(v) * n1;
      v -= n2.dot(v) * n2;
      break;
    }
    case Model::External:
      break;
  }
  if (!(v.norm() > 1e-10)) {
    throw InvalidArgument("state.direction is normal to the manifold at the base point");
  }
  return v.normalized();
}

}  // namespace

Pipeline build_pipeline(const ExperimentSpec& spec, Index n_points, std::uint64_t seed,
                        std::vector<std::string>* warnings) {
  Pipeline pipeline;
  auto start = Clock::now();
  pipeline.cloud = make_cloud(spec, n_points, seed);

  KernelConfig kernel;
  kernel.kind = KernelKind::Gaussian;
  kernel.epsilon = spec.resolved_epsilon();
  kernel.lambda = spec.lambda;
  kernel.intrinsic_dim = pipeline.cloud.intrinsic_dim;
  kernel.truncation_radius = spec.truncation_radius;
  pipeline.ops = GraphOperators::build(pipeline.cloud, kernel);
  pipeline.times.assembly_s = seconds_since(start);

  // h-regime check: epsilon should couple as h^{2+alpha} with alpha in [1,2]
  if (warnings) {
    const double state_h = spec.resolved_state_h();
    const double implied_alpha = std::log(kernel.epsilon) / std::log(state_h) - 2.0;
    if (!(implied_alpha >= 1.0 - 1e-9 && implied_alpha <= 2.0 + 1e-9)) {
      std::ostringstream msg;
      msg << "epsilon=" << kernel.epsilon << " is h^" << 2.0 + implied_alpha
          << " with h=" << state_h << "; outside the h^(2+alpha), alpha in [1,2] regime";
      warnings->push_back(msg.str());
    }
  }

  start = Clock::now();
  pipeline.decomp = decompose(pipeline.ops);
  pipeline.times.eig_s = seconds_since(start);

  const Index base = spec.base_index;
  if (base < 0 || base >= pipeline.cloud.size()) {
    throw InvalidArgument("state.j0 out of range");
  }
  const double state_h = spec.resolved_state_h();
  Eigen::VectorXd direction;
  if (!spec.direction.empty()) {
    direction = Eigen::Map<const Eigen::VectorXd>(spec.direction.data(),
                                                  static_cast<Index>(spec.direction.size()));
    if (direction.size() != pipeline.cloud.points.cols()) {
      throw InvalidArgument("state.direction has the wrong ambient dimension");
    }
  } else {
    direction = default_direction(pipeline.cloud, base);
  }

  if (spec.neighbor_construction) {
    const Index neighbor = spec.neighbor_index >= 0
                               ? spec.neighbor_index
                               : pick_neighbor(pipeline.cloud, base, direction);
    pipeline.state = make_state_neighbor(pipeline.cloud, base, neighbor, state_h);
    if (warnings && pipeline.state.regime_warning) {
      std::ostringstream msg;
      msg << "neighbor offset " << pipeline.state.neighbor_offset
          << " exceeds the accuracy scale h^(n/4+2)="
          << std::pow(state_h, 0.25 * pipeline.cloud.intrinsic_dim + 2.0);
      warnings->push_back(msg.str());
    }
  } else {
    pipeline.state = make_state_tangent(pipeline.cloud, base,
                                        project_tangent(pipeline.cloud, base, direction),
                                        state_h);
  }

  pipeline.recovery.h = state_h;
  pipeline.recovery.alpha = spec.alpha;
  pipeline.recovery.epsilon = kernel.epsilon;
  pipeline.recovery.epsilon_shift = spec.resolved_shift();
  pipeline.recovery.t_grid = spec.t_grid;
  pipeline.recovery.cutoff_inner = spec.cutoff_inner;
  pipeline.recovery.cutoff_outer = spec.cutoff_outer;
  pipeline.recovery.use_cutoff = spec.use_cutoff;
  pipeline.recovery.c20 = pipeline.ops.c20();
  return pipeline;
}

Eigen::MatrixXd held_out_points(Model model, int count) {
  if (count < 1) {
    throw InvalidArgument("held-out point count must be >= 1");
  }
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  Eigen::MatrixXd points;
  switch (model) {
    case Model::Sphere2: {
      points.resize(count, 3);
      for (int i = 0; i < count; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / count;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = 2.0 * M_PI * std::fmod(i / golden, 1.0);
        points.row(i) << r * std::cos(phi), r * std::sin(phi), z;
      }
      return points;
    }
    case Model::FlatTorus2: {
      points.resize(count, 4);
      for (int i = 0; i < count; ++i) {
        const double a = 2.0 * M_PI * std::fmod(i / golden, 1.0);
        const double b = 2.0 * M_PI * (i + 0.5) / count;
        points.row(i) << std::cos(a), std::sin(a), std::cos(b), std::sin(b);
      }
      return points;
    }
    case Model::Circle1: {
      points.resize(count, 2);
      for (int i = 0; i < count; ++i) {
        const double a = 2.0 * M_PI * (i + 0.5) / count;
        points.row(i) << std::cos(a), std::sin(a);
      }
      return points;
    }
    case Model::External:
      break;
  }
  throw UnsupportedModel("held-out evaluation set needs a model manifold");
}

double median(std::vector<double> values) {
  if (values.empty()) {
    throw InvalidArgument("median of an empty set");
  }
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) return std::nullopt;
    lx[i] = std::log(x[i]);
    ly[i] = std::log(std::max(y[i], 1e-300));
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx < 1e-12) return std::nullopt;  // single distinct x: not fittable
  return sxy / sxx;
}

std::vector<SweepAggregate> aggregate_sweep(const std::vector<SweepRow>& rows) {
  std::vector<SweepAggregate> aggregates;
  // per (N, h): medians, in first-appearance order
  std::vector<std::pair<Index, double>> seen;
  for (const SweepRow& row : rows) {
    if (std::find(seen.begin(), seen.end(), std::make_pair(row.n_points, row.h)) == seen.end()) {
      seen.emplace_back(row.n_points, row.h);
    }
  }
  for (const auto& [n_points, h] : seen) {
    std::vector<double> err_max, err_mean;
    for (const SweepRow& row : rows) {
      if (row.n_points == n_points && row.h == h) {
        err_max.push_back(row.err_max);
        err_mean.push_back(row.err_mean);
      }
    }
    SweepAggregate agg;
    agg.n_points = n_points;
    agg.h = h;
    agg.median_err_max = median(err_max);
    agg.median_err_mean = median(err_mean);
    aggregates.push_back(agg);
  }
  // per N: log-log slope over all rows
  std::vector<Index> n_values;
  for (const SweepRow& row : rows) {
    if (std::find(n_values.begin(), n_values.end(), row.n_points) == n_values.end()) {
      n_values.push_back(row.n_points);
    }
  }
  for (Index n_points : n_values) {
    std::vector<double> hs, err_max, err_mean;
    for (const SweepRow& row : rows) {
      if (row.n_points == n_points) {
        hs.push_back(row.h);
        err_max.push_back(std::max(row.err_max, 1e-15));
        err_mean.push_back(std::max(row.err_mean, 1e-15));
      }
    }
    SweepAggregate agg;
    agg.n_points = n_points;
    agg.h = std::numeric_limits<double>::quiet_NaN();
    agg.median_err_max = median(err_max);
    agg.median_err_mean = median(err_mean);
    agg.slope_err_max = loglog_slope(hs, err_max);
    agg.slope_err_mean = loglog_slope(hs, err_mean);
    aggregates.push_back(agg);
  }
  return aggregates;
}

namespace {

struct SweepPoint {
  Index n_points = 0;
  double h = 0.0;
  std::uint64_t seed = 0;
};

struct SweepPointOutcome {
  std::vector<SweepRow> rows;
  StageTimes times;
  bool failed = false;
  std::string error;
};

}  // namespace

SweepResult run_sweep(const ExperimentSpec& spec, const std::vector<Index>& n_list,
                      const std::vector<double>& h_list, int seed_count, std::ostream& log) {
  if (n_list.empty() || h_list.empty() || seed_count < 1) {
    throw InvalidArgument("sweep needs nonempty N/h lists and seeds >= 1");
  }
  std::vector<SweepPoint> grid;
  for (Index n_points : n_list) {
    for (double h : h_list) {
      for (int k = 0; k < seed_count; ++k) {
        grid.push_back({n_points, h, spec.seed + static_cast<std::uint64_t>(k)});
      }
    }
  }
  std::vector<SweepPointOutcome> outcomes(grid.size());
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;

  auto worker = [&]() {
    while (true) {
      const std::size_t index = next.fetch_add(1);
      if (index >= grid.size()) return;
      const SweepPoint& point = grid[index];
      SweepPointOutcome& outcome = outcomes[index];
      try {
        ExperimentSpec local = spec;
        local.h = point.h;
        local.state_h = 0.0;       // state h follows the grid h
        local.epsilon_explicit = 0.0;  // epsilon derives from the grid h
        std::vector<std::string> warnings;
        Pipeline pipeline = build_pipeline(local, point.n_points, point.seed, &warnings);
        const auto start = Clock::now();
        const GeodesicTrace trace = trace_geodesic(pipeline.cloud, pipeline.ops,
                                                   pipeline.decomp, pipeline.state,
                                                   pipeline.recovery);
        pipeline.times.propagation_s = seconds_since(start);
        outcome.times = pipeline.times;
        for (const TraceRecord& record : trace.records) {
          SweepRow row;
          row.n_points = point.n_points;
          row.h = point.h;
          row.epsilon = pipeline.recovery.epsilon;
          row.seed = point.seed;
          row.t = record.t;
          row.err_max = record.err_max.value_or(std::numeric_limits<double>::quiet_NaN());
          row.err_mean = record.err_mean.value_or(std::numeric_limits<double>::quiet_NaN());
          row.c_tN = record.c_tN;
          outcome.rows.push_back(row);
        }
        std::lock_guard<std::mutex> guard(log_mutex);
        log << "[sweep] N=" << point.n_points << " h=" << point.h << " seed=" << point.seed
            << " assembly=" << outcome.times.assembly_s << "s eig=" << outcome.times.eig_s
            << "s propagation=" << outcome.times.propagation_s << "s\n";
      } catch (const std::exception& error) {
        outcome.failed = true;
        outcome.error = error.what();
        std::lock_guard<std::mutex> guard(log_mutex);
        log << "[sweep] N=" << point.n_points << " h=" << point.h << " seed=" << point.seed
            << " FAILED: " << error.what() << "\n";
      }
    }
  };

  const int workers = std::max(1, spec.workers);
  std::vector<std::thread> threads;
  for (int i = 1; i < workers; ++i) threads.emplace_back(worker);
  worker();
  for (std::thread& thread : threads) thread.join();

  SweepResult result;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const SweepPointOutcome& outcome = outcomes[i];
    // failed points are recorded in the log and skipped; the sweep continues
    for (const SweepRow& row : outcome.rows) result.rows.push_back(row);
    if (!outcome.failed) {
      result.timings.push_back({grid[i].n_points, grid[i].h, grid[i].seed, outcome.times});
    }
  }
  if (result.rows.empty()) {
    throw Error("every sweep point failed");
  }
  result.aggregates = aggregate_sweep(result.rows);
  return result;
}

ConsistencyResult run_consistency(const ExperimentSpec& spec, const std::vector<Index>& n_list,
                                  Index proxy_size, double t, int coordinate, int seed_count,
                                  int held_out_count, std::ostream& log) {
  if (n_list.empty() || seed_count < 1) {
    throw InvalidArgument("consistency needs a nonempty N list and seeds >= 1");
  }
  for (Index n_points : n_list) {
    if (proxy_size < n_points) {
      throw InvalidArgument("proxy size M must be >= every N in the list");
    }
    if (proxy_size < 4 * n_points) {
      log << "[warn] proxy M=" << proxy_size << " is below 4N for N=" << n_points
          << "; the continuum proxy may be too coarse\n";
    }
  }
  const Eigen::MatrixXd evaluation = held_out_points(spec.model, held_out_count);
  if (coordinate < 0 || coordinate >= evaluation.cols()) {
    throw InvalidArgument("coordinate index out of range for this model");
  }
  const double epsilon = spec.resolved_epsilon();
  const double shift = spec.resolved_shift();

  ConsistencyResult result;
  for (int k = 0; k < seed_count; ++k) {
    const std::uint64_t seed = spec.seed + static_cast<std::uint64_t>(k);

    auto extend_all = [&](const PointCloud& cloud, const GraphOperators& ops,
                          const SpectralDecomposition& decomp) {
      const ScalarFunction f = ScalarFunction::propagator(t, epsilon, shift, ops.c20());
      Eigen::VectorXcd u = cloud.points.col(coordinate).cast<std::complex<double>>();
      const Eigen::VectorXcd derived_applied = apply_function(decomp, f.derived(), u);
      Eigen::VectorXcd values(evaluation.rows());
      for (Index i = 0; i < evaluation.rows(); ++i) {
        values(i) = nystrom_extend_prepared(cloud, ops, derived_applied, f.f0,
                                            evaluation(i, coordinate), evaluation.row(i));
      }
      return values;
    };

    const auto proxy_start = Clock::now();
    // Self-comparison mode (M equal to some N with the same seed) reuses the
    // exact cloud, making the discrepancy a pure harness check.
    const bool self_compare =
        n_list.size() == 1 && proxy_size == n_list.front();
    const PointCloud proxy_cloud =
        make_cloud(spec, proxy_size, self_compare ? seed : proxy_seed(seed));
    KernelConfig kernel;
    kernel.epsilon = epsilon;
    kernel.lambda = spec.lambda;
    kernel.intrinsic_dim = proxy_cloud.intrinsic_dim;
    kernel.truncation_radius = spec.truncation_radius;
    const GraphOperators proxy_ops = GraphOperators::build(proxy_cloud, kernel);
    const SpectralDecomposition proxy_decomp = decompose(proxy_ops);
    const Eigen::VectorXcd proxy_values = extend_all(proxy_cloud, proxy_ops, proxy_decomp);
    log << "[consistency] seed=" << seed << " proxy M=" << proxy_size << " built in "
        << seconds_since(proxy_start) << "s\n";

    for (Index n_points : n_list) {
      const PointCloud cloud = make_cloud(spec, n_points, seed);
      KernelConfig small_kernel = kernel;
      small_kernel.intrinsic_dim = cloud.intrinsic_dim;
      const GraphOperators ops = GraphOperators::build(cloud, small_kernel);
      const SpectralDecomposition decomp = decompose(ops);
      const Eigen::VectorXcd values = extend_all(cloud, ops, decomp);
      const double discrepancy = (values - proxy_values).cwiseAbs().maxCoeff();
      result.rows.push_back({n_points, seed, discrepancy});
      log << "[consistency] seed=" << seed << " N=" << n_points
          << " sup-discrepancy=" << discrepancy << "\n";
    }
  }

  for (Index n_points : n_list) {
    std::vector<double> values;
    for (const ConsistencyRow& row : result.rows) {
      if (row.n_points == n_points) values.push_back(row.discrepancy);
    }
    result.median_by_n.emplace_back(n_points, median(values));
  }
  return result;
}

// --- command bodies ----------------------------------------------------------

namespace {

std::vector<std::pair<std::string, std::string>> header_meta(const std::string& command,
                                                             const ConfigMap& config) {
  std::vector<std::pair<std::string, std::string>> meta;
  meta.emplace_back("geowave", command);
  for (const auto& entry : config.resolved_entries()) {
    meta.push_back(entry);
  }
  return meta;
}

void warn_unused(const ConfigMap& config, std::ostream& log) {
  for (const std::string& key : config.unused_keys()) {
    log << "[warn] unused config key: " << key << "\n";
  }
}

std::filesystem::path sibling(const std::filesystem::path& out, const std::string& suffix) {
  std::filesystem::path path = out;
  path.replace_filename(out.stem().string() + suffix + out.extension().string());
  return path;
}

}  // namespace

int cmd_sample(const ConfigMap& config, const std::filesystem::path& out, std::ostream& log) {
  const ExperimentSpec spec = ExperimentSpec::resolve(config);
  const auto start = Clock::now();
  const PointCloud cloud = make_cloud(spec);
  cloud.validate();
  std::ofstream file = open_output(out);
  file << metadata_line(header_meta("sample", config)) << '\n';
  std::vector<std::pair<std::string, std::string>> meta;
  meta.emplace_back("model", to_string(cloud.model));
  meta.emplace_back("n", std::to_string(cloud.intrinsic_dim));
  meta.emplace_back("seed", cloud.seed ? std::to_string(*cloud.seed) : "none");
  meta.emplace_back("N", std::to_string(cloud.size()));
  meta.emplace_back("D", std::to_string(cloud.ambient_dim()));
  file << metadata_line(meta) << '\n';
  for (Index i = 0; i < cloud.size(); ++i) {
    for (Index j = 0; j < cloud.points.cols(); ++j) {
      if (j) file << ',';
      file << format_double(cloud.points(i, j));
    }
    file << '\n';
  }
  log << "[sample] N=" << cloud.size() << " -> " << out.string() << " ("
      << seconds_since(start) << "s)\n";
  warn_unused(config, log);
  return 0;
}

int cmd_trace(const ConfigMap& config, const std::filesystem::path& out, std::ostream& log) {
  const ExperimentSpec spec = ExperimentSpec::resolve(config);
  std::vector<std::string> warnings;
  Pipeline pipeline = build_pipeline(spec, spec.n_points, spec.seed, &warnings);
  for (const std::string& warning : warnings) {
    log << "[warn] " << warning << "\n";
  }
  const auto start = Clock::now();
  const GeodesicTrace trace = trace_geodesic(pipeline.cloud, pipeline.ops, pipeline.decomp,
                                             pipeline.state, pipeline.recovery);
  pipeline.times.propagation_s = seconds_since(start);
  log << "[time] assembly=" << pipeline.times.assembly_s << "s eig=" << pipeline.times.eig_s
      << "s propagation=" << pipeline.times.propagation_s << "s\n";

  auto meta = header_meta("trace", config);
  meta.emplace_back("epsilon", format_double(pipeline.recovery.epsilon));
  meta.emplace_back("epsilon_shift", format_double(pipeline.recovery.epsilon_shift));
  meta.emplace_back("c20", format_double(pipeline.recovery.c20));
  save_trace(trace, pipeline.cloud, meta, out);
  warn_unused(config, log);
  return 0;
}

int cmd_sweep(const ConfigMap& config, const std::filesystem::path& out, std::ostream& log) {
  const ExperimentSpec spec = ExperimentSpec::resolve(config);
  const std::vector<std::int64_t> n_list_raw = config.get_int_list("sweep.N_list", {3000});
  const std::vector<double> h_list =
      config.get_double_list("sweep.h_list", {0.3, 0.2, 0.15, 0.1});
  const int seed_count = static_cast<int>(config.get_int("sweep.seeds", 10));
  std::vector<Index> n_list(n_list_raw.begin(), n_list_raw.end());

  const SweepResult result = run_sweep(spec, n_list, h_list, seed_count, log);

  {
    std::ofstream file = open_output(out);
    file << metadata_line(header_meta("sweep", config)) << '\n';
    file << "# N,h,epsilon,seed,t,err_max,err_mean,c_tN\n";
    for (const SweepRow& row : result.rows) {
      file << row.n_points << ',' << format_double(row.h) << ',' << format_double(row.epsilon)
           << ',' << row.seed << ',' << format_double(row.t) << ','
           << format_double(row.err_max) << ',' << format_double(row.err_mean) << ','
           << format_double(row.c_tN) << '\n';
    }
  }
  {
    std::ofstream file = open_output(sibling(out, "_aggregate"));
    file << metadata_line(header_meta("sweep-aggregate", config)) << '\n';
    file << "# N,h,median_err_max,median_err_mean,slope_err_max,slope_err_mean\n";
    for (const SweepAggregate& agg : result.aggregates) {
      file << agg.n_points << ',';
      if (std::isnan(agg.h)) {
        file << "all";
      } else {
        file << format_double(agg.h);
      }
      file << ',' << format_double(agg.median_err_max) << ','
           << format_double(agg.median_err_mean) << ','
           << (agg.slope_err_max ? format_double(*agg.slope_err_max) : "") << ','
           << (agg.slope_err_mean ? format_double(*agg.slope_err_mean) : "") << '\n';
    }
  }
  {
    // timing sidecar: wall clock readings, deliberately outside the
    // byte-reproducibility contract
    std::ofstream file = open_output(sibling(out, "_timing"));
    file << "# non-deterministic timing sidecar\n";
    file << "# N,h,seed,assembly_s,eig_s,propagation_s\n";
    for (const SweepTiming& timing : result.timings) {
      file << timing.n_points << ',' << format_double(timing.h) << ',' << timing.seed << ','
           << format_double(timing.times.assembly_s) << ','
           << format_double(timing.times.eig_s) << ','
           << format_double(timing.times.propagation_s) << '\n';
    }
  }
  for (const SweepAggregate& agg : result.aggregates) {
    if (std::isnan(agg.h) && agg.slope_err_mean) {
      log << "[sweep] N=" << agg.n_points << " slope(err_max)=" << *agg.slope_err_max
          << " slope(err_mean)=" << *agg.slope_err_mean << "\n";
    }
  }
  warn_unused(config, log);
  return 0;
}

int cmd_consistency(const ConfigMap& config, const std::filesystem::path& out,
                    std::ostream& log) {
  const ExperimentSpec spec = ExperimentSpec::resolve(config);
  const std::vector<std::int64_t> n_list_raw =
      config.get_int_list("consistency.N_list", {250, 500, 1000});
  const Index proxy_size = config.get_int("consistency.M", 4000);
  const double t = config.get_double("consistency.t", 0.5);
  const int seed_count = static_cast<int>(config.get_int("consistency.seeds", 10));
  const int held_out = static_cast<int>(config.get_int("consistency.points", 200));
  const std::string u_spec = config.get_string("consistency.u", "coord:0");
  if (u_spec.rfind("coord:", 0) != 0) {
    throw InvalidArgument("consistency.u must be of the form coord:<index>");
  }
  const int coordinate = std::stoi(u_spec.substr(6));
  std::vector<Index> n_list(n_list_raw.begin(), n_list_raw.end());

  const ConsistencyResult result =
      run_consistency(spec, n_list, proxy_size, t, coordinate, seed_count, held_out, log);

  {
    std::ofstream file = open_output(out);
    file << metadata_line(header_meta("consistency", config)) << '\n';
    file << "# N,seed,sup_discrepancy\n";
    for (const ConsistencyRow& row : result.rows) {
      file << row.n_points << ',' << row.seed << ',' << format_double(row.discrepancy) << '\n';
    }
  }
  {
    std::ofstream file = open_output(sibling(out, "_median"));
    file << metadata_line(header_meta("consistency-median", config)) << '\n';
    file << "# N,median_sup_discrepancy\n";
    for (const auto& [n_points, value] : result.median_by_n) {
      file << n_points << ',' << format_double(value) << '\n';
    }
  }
  bool non_increasing = true;
  for (std::size_t i = 1; i < result.median_by_n.size(); ++i) {
    if (result.median_by_n[i].second > result.median_by_n[i - 1].second) non_increasing = false;
  }
  log << "[consistency] medians" << (non_increasing ? " are" : " are NOT")
      << " non-increasing in N\n";
  warn_unused(config, log);
  return 0;
}

int cmd_bounds(const ConfigMap& config, const std::filesystem::path& out, std::ostream& log) {
  const double dim = config.get_double("bounds.n", 2.0);
  const double k_u = config.get_double("bounds.K_u", 1.0);
  const double constant = config.get_double("bounds.C", 1.0);
  const std::vector<double> n_list = config.get_double_list("bounds.N_list", {1e4, 1e6, 1e8});
  const std::vector<double> eps_list =
      config.get_double_list("bounds.eps_list", {1e-2, 1e-3});
  const std::vector<double> delta_list = config.get_double_list("bounds.delta_list", {0.1});
  const std::vector<double> t_list = config.get_double_list("bounds.t_list", {1.0});
  const std::vector<double> h_list = config.get_double_list("bounds.h_list", {0.3, 0.1});

  std::ofstream file = open_output(out);
  file << metadata_line(header_meta("bounds", config)) << '\n';
  file << "# kind,N,n,epsilon,delta,t,K_u,h,C,bound\n";
  auto emit = [&](BoundKind kind, const BoundParams& params) {
    file << to_string(kind) << ',' << format_double(params.n_samples) << ','
         << format_double(params.dim) << ',' << format_double(params.epsilon) << ','
         << format_double(params.delta) << ',' << format_double(params.t) << ','
         << format_double(params.k_u) << ',' << format_double(params.h) << ','
         << format_double(params.constant) << ','
         << format_double(bernstein_bound(kind, params)) << '\n';
  };
  for (double n_samples : n_list) {
    for (double epsilon : eps_list) {
      BoundParams params;
      params.n_samples = n_samples;
      params.dim = dim;
      params.epsilon = epsilon;
      params.k_u = k_u;
      params.constant = constant;
      for (double delta : delta_list) {
        for (double t : t_list) {
          BoundParams p = params;
          p.delta = delta;
          p.t = t;
          p.h = 0.0;
          emit(BoundKind::Halfwave, p);
        }
      }
      for (double h : h_list) {
        BoundParams p = params;
        p.h = h;
        emit(BoundKind::Mean, p);
        emit(BoundKind::Max, p);
      }
    }
  }
  log << "[bounds] table -> " << out.string() << "\n";
  warn_unused(config, log);
  return 0;
}

}  // namespace geowave
