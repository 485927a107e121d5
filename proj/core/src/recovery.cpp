#include "geowave/recovery.hpp"

#include <cmath>
#include <sstream>

#include "geowave/csv.hpp"
#include "geowave/errors.hpp"
#include "geowave/sampling.hpp"

namespace geowave {

double RecoveryConfig::resolved_epsilon() const {
  return epsilon > 0.0 ? epsilon : std::pow(h, 2.0 + alpha);
}

void RecoveryConfig::validate(Model model) const {
  if (h <= 0.0) {
    throw InvalidArgument("recovery h must be > 0");
  }
  if (epsilon == 0.0 && (alpha < 1.0 || alpha > 2.0)) {
    throw InvalidArgument("alpha must lie in [1,2] when epsilon is derived");
  }
  if (epsilon_shift < 0.0) {
    throw InvalidArgument("epsilon_shift must be >= 0");
  }
  if (t_grid.empty()) {
    throw InvalidArgument("t_grid must be nonempty");
  }
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    if (t_grid[i] <= t_grid[i - 1]) {
      throw InvalidArgument("t_grid must be strictly increasing");
    }
  }
  if (!(cutoff_inner > 0.0) || cutoff_inner >= cutoff_outer) {
    throw InvalidArgument("cutoff radii must satisfy 0 < inner < outer");
  }
  if (model != Model::External) {
    const double cap = 0.9 * M_PI;
    for (double t : t_grid) {
      if (std::abs(t) > cap) {
        std::ostringstream msg;
        msg << "|t|=" << std::abs(t) << " exceeds the injectivity-radius cap " << cap;
        throw InvalidArgument(msg.str());
      }
    }
  }
}

DensityResult propagate_density(const SpectralDecomposition& decomp, const CoherentState& state,
                                double t, const RecoveryConfig& config) {
  DensityResult result;
  result.propagated = wave_propagate(decomp, t, config.resolved_epsilon(), config.epsilon_shift,
                                     config.c20, state.amplitudes);
  result.c_tN = discrete_norm(result.propagated);
  if (!(result.c_tN > 0.0)) {
    throw DegenerateState("propagated state has zero discrete norm");
  }
  result.density = result.propagated.cwiseAbs2() / (result.c_tN * result.c_tN);
  return result;
}

Index sample_max(const Eigen::VectorXd& density) {
  if (density.size() == 0) {
    throw InvalidArgument("sample_max of an empty density");
  }
  Index best = 0;
  for (Index j = 1; j < density.size(); ++j) {
    if (density(j) > density(best)) best = j;
  }
  return best;
}

Eigen::VectorXd bump_cutoff(const Eigen::VectorXd& center, double r_inner, double r_outer,
                            const PointCloud& cloud) {
  if (!(r_inner > 0.0) || r_inner >= r_outer) {
    throw InvalidArgument("bump_cutoff requires 0 < r_inner < r_outer");
  }
  if (center.size() != cloud.points.cols()) {
    throw InvalidArgument("bump_cutoff center has the wrong ambient dimension");
  }
  const Index n = cloud.size();
  Eigen::VectorXd chi(n);
  for (Index j = 0; j < n; ++j) {
    const double rho = (cloud.points.row(j).transpose() - center).norm();
    if (rho <= r_inner) {
      chi(j) = 1.0;
    } else if (rho >= r_outer) {
      chi(j) = 0.0;
    } else {
      const double s = (rho - r_inner) / (r_outer - r_inner);
      chi(j) = std::exp(1.0 - 1.0 / (1.0 - s * s));
    }
  }
  return chi;
}

ExtrinsicMeanResult extrinsic_mean(const Eigen::VectorXd& density, const Eigen::VectorXd& chi,
                                   const PointCloud& cloud) {
  const Index n = cloud.size();
  if (density.size() != n || chi.size() != n) {
    throw InvalidArgument("extrinsic_mean: dimension mismatch");
  }
  const Eigen::VectorXd weights = density.cwiseProduct(chi);
  if (!(weights.maxCoeff() > 0.0)) {
    throw EmptySupport("cutoff annihilated the density");
  }
  ExtrinsicMeanResult result;
  result.mean_point = cloud.points.transpose() * weights / static_cast<double>(n);
  Index best = 0;
  double best_distance = (cloud.points.row(0).transpose() - result.mean_point).squaredNorm();
  for (Index j = 1; j < n; ++j) {
    const double dist = (cloud.points.row(j).transpose() - result.mean_point).squaredNorm();
    if (dist < best_distance) {
      best = j;
      best_distance = dist;
    }
  }
  result.snapped_index = best;
  return result;
}

namespace {

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * M_PI);
  if (a > M_PI) a -= 2.0 * M_PI;
  if (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

}  // namespace

TorusLocalMeanResult torus_local_mean(const Eigen::VectorXd& density, const Eigen::VectorXd& chi,
                                      const PointCloud& cloud) {
  if (cloud.model != Model::FlatTorus2) {
    throw UnsupportedModel("torus_local_mean needs a flattorus2 cloud");
  }
  const Index n = cloud.size();
  if (density.size() != n || chi.size() != n) {
    throw InvalidArgument("torus_local_mean: dimension mismatch");
  }
  const Eigen::VectorXd weights = density.cwiseProduct(chi);
  if (!(weights.maxCoeff() > 0.0)) {
    throw EmptySupport("cutoff annihilated the density");
  }
  // circular mean per angle: atan2 of the weighted embedded coordinates
  double c1 = 0.0, s1 = 0.0, c2 = 0.0, s2 = 0.0;
  for (Index j = 0; j < n; ++j) {
    c1 += weights(j) * cloud.points(j, 0);
    s1 += weights(j) * cloud.points(j, 1);
    c2 += weights(j) * cloud.points(j, 2);
    s2 += weights(j) * cloud.points(j, 3);
  }
  TorusLocalMeanResult result;
  result.theta = std::atan2(s1, c1);
  result.phi = std::atan2(s2, c2);
  Index best = 0;
  double best_distance = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < n; ++j) {
    const double da = wrap_angle(std::atan2(cloud.points(j, 1), cloud.points(j, 0)) - result.theta);
    const double db = wrap_angle(std::atan2(cloud.points(j, 3), cloud.points(j, 2)) - result.phi);
    const double dist = da * da + db * db;
    if (dist < best_distance) {
      best = j;
      best_distance = dist;
    }
  }
  result.snapped_index = best;
  return result;
}

namespace {

// Scoring momentum: the tangent projection of the state momentum at the base
// point, renormalized.
Eigen::VectorXd oracle_momentum(const PointCloud& cloud, const CoherentState& state) {
  const Eigen::VectorXd at = cloud.points.row(state.base_index);
  Eigen::VectorXd xi = state.momentum;
  switch (cloud.model) {
    case Model::Sphere2:
    case Model::Circle1: {
      const Eigen::VectorXd normal = at.normalized();
      xi -= normal.dot(xi) * normal;
      break;
    }
    case Model::FlatTorus2: {
      Eigen::VectorXd n1 = Eigen::VectorXd::Zero(4);
      n1.head<2>() = at.head<2>().normalized();
      Eigen::VectorXd n2 = Eigen::VectorXd::Zero(4);
      n2.tail<2>() = at.tail<2>().normalized();
      xi -= n1.dot(xi) * n1;
      xi -= n2.dot(xi) * n2;
      break;
    }
    case Model::External:
      break;
  }
  const double norm = xi.norm();
  if (!(norm > 0.0)) {
    throw DegenerateState("state momentum is normal to the manifold at the base point");
  }
  return xi / norm;
}

}  // namespace

GeodesicTrace trace_geodesic(const PointCloud& cloud, const GraphOperators& ops,
                             const SpectralDecomposition& decomp, const CoherentState& state,
                             const RecoveryConfig& config) {
  if (cloud.size() != decomp.size() || cloud.size() != state.amplitudes.size() ||
      cloud.size() != ops.size()) {
    throw InvalidArgument("trace_geodesic: component sizes disagree");
  }
  config.validate(cloud.model);

  GeodesicTrace trace;
  trace.model = cloud.model;
  trace.x0 = cloud.points.row(state.base_index);
  if (cloud.model != Model::External) {
    trace.xi_oracle = oracle_momentum(cloud, state);
  }

  const double r_inner = config.cutoff_inner * std::sqrt(config.h);
  const double r_outer = config.cutoff_outer * std::sqrt(config.h);

  for (double t : config.t_grid) {
    TraceRecord record;
    record.t = t;
    auto annotate = [t](const Error& error) {
      std::ostringstream msg;
      msg << "at t=" << t << ": " << error.what();
      return msg.str();
    };
    try {
      const DensityResult propagated = propagate_density(decomp, state, t, config);
      record.c_tN = propagated.c_tN;
      record.max_index = sample_max(propagated.density);
      Eigen::VectorXd chi;
      if (config.use_cutoff) {
        chi = bump_cutoff(cloud.points.row(record.max_index), r_inner, r_outer, cloud);
      } else {
        chi = Eigen::VectorXd::Ones(cloud.size());
      }
      const ExtrinsicMeanResult mean = extrinsic_mean(propagated.density, chi, cloud);
      record.mean_point = mean.mean_point;
      record.snapped_index = mean.snapped_index;
    } catch (const DegenerateState& error) {
      throw DegenerateState(annotate(error));
    } catch (const EmptySupport& error) {
      throw EmptySupport(annotate(error));
    } catch (const SpectrumViolation& error) {
      throw SpectrumViolation(annotate(error));
    } catch (const FunctionDomain& error) {
      throw FunctionDomain(annotate(error));
    } catch (const Error& error) {
      throw Error(annotate(error));
    }
    if (cloud.model != Model::External) {
      GeodesicQuery query{trace.x0, trace.xi_oracle, t};
      const Eigen::VectorXd target = geodesic_oracle(cloud.model, query);
      record.err_max =
          geodesic_distance(cloud.model, cloud.points.row(record.max_index), target);
      record.err_mean =
          geodesic_distance(cloud.model, cloud.points.row(record.snapped_index), target);
    }
    trace.records.push_back(std::move(record));
  }
  return trace;
}

std::vector<RecoveryErrorRecord> recovery_error(const GeodesicTrace& trace,
                                                const PointCloud& cloud) {
  if (trace.model == Model::External) {
    throw UnsupportedModel("recovery_error needs a model cloud with an oracle");
  }
  std::vector<RecoveryErrorRecord> records;
  records.reserve(trace.records.size());
  for (const TraceRecord& record : trace.records) {
    GeodesicQuery query{trace.x0, trace.xi_oracle, record.t};
    const Eigen::VectorXd target = geodesic_oracle(trace.model, query);
    RecoveryErrorRecord out;
    out.t = record.t;
    out.err_max = geodesic_distance(trace.model, cloud.points.row(record.max_index), target);
    out.err_mean =
        geodesic_distance(trace.model, cloud.points.row(record.snapped_index), target);
    records.push_back(out);
  }
  return records;
}

void save_trace(const GeodesicTrace& trace, const PointCloud& cloud,
                const std::vector<std::pair<std::string, std::string>>& config_meta,
                const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  out << metadata_line(config_meta) << '\n';
  out << "# t,max_index,snap_index";
  for (int d = 1; d <= cloud.ambient_dim(); ++d) out << ",mean_x_" << d;
  out << ",c_tN,err_max,err_mean\n";
  for (const TraceRecord& record : trace.records) {
    out << format_double(record.t) << ',' << record.max_index << ',' << record.snapped_index;
    for (Index d = 0; d < record.mean_point.size(); ++d) {
      out << ',' << format_double(record.mean_point(d));
    }
    out << ',' << format_double(record.c_tN);
    out << ',' << (record.err_max ? format_double(*record.err_max) : "");
    out << ',' << (record.err_mean ? format_double(*record.err_mean) : "");
    out << '\n';
  }
}

}  // namespace geowave
