#include "peacock/coloring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Cholesky>

#include "peacock/error.hpp"
#include "peacock/parallel.hpp"

namespace peacock {
namespace {

constexpr double kTinyStress = 1e-300;
constexpr double kInitJitter = 1e-3;

double row_distance(const Eigen::MatrixXd& y, Eigen::Index i, Eigen::Index j) {
  return (y.row(i) - y.row(j)).norm();
}

void check_problem(const ColorEmbedding& y, const BundleWeightMatrix& w,
                   const DissimilarityMatrix& d) {
  const auto m = static_cast<Eigen::Index>(y.size());
  if (static_cast<Eigen::Index>(w.size()) != m || d.rows() != m || d.cols() != m) {
    throw ParameterError("dimension mismatch: embedding has " + std::to_string(m) +
                         " rows, weights " + std::to_string(w.size()) + ", dissimilarities " +
                         std::to_string(d.rows()) + "x" + std::to_string(d.cols()));
  }
}

// Per-column zero mean, unit variance; constant columns become zero.
void standardize_columns(Eigen::MatrixXd& y) {
  for (Eigen::Index k = 0; k < y.cols(); ++k) {
    auto col = y.col(k);
    col.array() -= col.mean();
    const double sd = std::sqrt(col.squaredNorm() / static_cast<double>(y.rows()));
    if (sd > 0.0) col /= sd;
  }
}

}  // namespace

ColorEmbedding::ColorEmbedding(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.cols() < 1 || values_.cols() > 3) {
    throw ParameterError("embedding dimensionality must be 1, 2 or 3");
  }
  if (!values_.allFinite()) throw ParameterError("embedding has non-finite entries");
}

ColorTable::ColorTable(Eigen::MatrixXd values) : values_(std::move(values)) {
  if (values_.cols() < 1 || values_.cols() > 3) {
    throw ParameterError("color table dimensionality must be 1, 2 or 3");
  }
  if (!((values_.array() >= 0.0).all() && (values_.array() <= 1.0).all())) {
    throw ParameterError("color table entries must lie in [0,1]");
  }
}

void OptimizerConfig::validate() const {
  if (dims < 1 || dims > 3) throw ParameterError("dims must be 1, 2 or 3");
  if (max_iters < 1) throw ParameterError("max_iters must be at least 1");
  if (!(rel_tol > 0.0)) throw ParameterError("rel_tol must be positive");
}

double stress(const ColorEmbedding& y, const BundleWeightMatrix& w, const DissimilarityMatrix& d,
              unsigned threads) {
  check_problem(y, w, d);
  const auto m = static_cast<Eigen::Index>(y.size());
  const Eigen::MatrixXd& v = y.values();
  const WeightMatrix& weights = w.weights();
  std::vector<double> rows(m, 0.0);
  parallel_for(m, threads, [&](std::size_t ii) {
    const auto i = static_cast<Eigen::Index>(ii);
    double sum = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (j == i || weights(i, j) == 0.0) continue;
      const double r = d(i, j) - row_distance(v, i, j);
      sum += weights(i, j) * r * r;
    }
    rows[ii] = sum;
  });
  double total = 0.0;
  for (double r : rows) total += r;
  return total;
}

StressMajorizer::StressMajorizer(const BundleWeightMatrix& w, const DissimilarityMatrix& d,
                                 unsigned threads)
    : w_(&w), d_(&d), threads_(threads) {
  const auto m = static_cast<Eigen::Index>(w.size());
  if (d.rows() != m || d.cols() != m) throw ParameterError("dimension mismatch between weights and dissimilarities");
  sym_weights_ = w.weights() + w.weights().transpose();
  sym_weights_.diagonal().setZero();
  if (!(sym_weights_.array() > 0.0).any()) {
    throw OptimizerError("all weights are zero, nothing to optimize");
  }

  // Connected components of the positive-weight graph.
  std::vector<Eigen::Index> component(m, -1);
  std::vector<std::vector<Eigen::Index>> members;
  for (Eigen::Index s = 0; s < m; ++s) {
    if (component[s] >= 0) continue;
    const auto id = static_cast<Eigen::Index>(members.size());
    members.emplace_back();
    std::vector<Eigen::Index> stack{s};
    component[s] = id;
    while (!stack.empty()) {
      const Eigen::Index u = stack.back();
      stack.pop_back();
      members[id].push_back(u);
      for (Eigen::Index v = 0; v < m; ++v) {
        if (component[v] < 0 && sym_weights_(u, v) > 0.0) {
          component[v] = id;
          stack.push_back(v);
        }
      }
    }
  }
  components_ = members.size();

  // On a connected component with Laplacian V, V + J/n is positive definite
  // and V^+ = (V + J/n)^-1 - J/n. Singletons have V = 0 and V^+ = 0.
  laplacian_pinv_ = Eigen::MatrixXd::Zero(m, m);
  for (auto& idx : members) {
    const auto n = static_cast<Eigen::Index>(idx.size());
    if (n < 2) continue;
    std::sort(idx.begin(), idx.end());
    Eigen::MatrixXd local(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index b = 0; b < n; ++b) local(a, b) = -sym_weights_(idx[a], idx[b]);
      local(a, a) = 0.0;
      local(a, a) = -local.row(a).sum();
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    local.array() += inv_n;
    Eigen::MatrixXd pinv = local.llt().solve(Eigen::MatrixXd::Identity(n, n));
    pinv.array() -= inv_n;
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index b = 0; b < n; ++b) laplacian_pinv_(idx[a], idx[b]) = pinv(a, b);
    }
  }
}

ColorEmbedding StressMajorizer::step(const ColorEmbedding& y) const {
  check_problem(y, *w_, *d_);
  const auto m = static_cast<Eigen::Index>(y.size());
  const Eigen::MatrixXd& x = y.values();
  const DissimilarityMatrix& d = *d_;
  // (B(X) X)_i = sum_j w~_ij d_ij / |x_i - x_j| (x_i - x_j)
  Eigen::MatrixXd bx = Eigen::MatrixXd::Zero(m, x.cols());
  parallel_for(m, threads_, [&](std::size_t ii) {
    const auto i = static_cast<Eigen::Index>(ii);
    for (Eigen::Index j = 0; j < m; ++j) {
      const double wij = sym_weights_(i, j);
      if (j == i || wij == 0.0) continue;
      const double dist = row_distance(x, i, j);
      if (dist == 0.0) continue;
      bx.row(i) += (wij * d(i, j) / dist) * (x.row(i) - x.row(j));
    }
  });
  return ColorEmbedding(laplacian_pinv_ * bx);
}

double StressMajorizer::stress(const ColorEmbedding& y) const {
  return peacock::stress(y, *w_, *d_, threads_);
}

ColorEmbedding smacof_step(const ColorEmbedding& y, const BundleWeightMatrix& w,
                           const DissimilarityMatrix& d) {
  return StressMajorizer(w, d).step(y);
}

ColorEmbedding random_embedding(std::size_t m, std::size_t dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd y(m, dims);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < dims; ++k) y(i, k) = normal(rng);
  }
  return ColorEmbedding(std::move(y));
}

std::vector<ColorEmbedding> initial_embeddings(const GraphLayout& layout,
                                               const OptimizerConfig& cfg) {
  cfg.validate();
  const std::size_t m = layout.size();
  if (cfg.init == InitMethod::kSeededRandom) return {random_embedding(m, cfg.dims, cfg.seed)};

  Eigen::MatrixXd mid(m, 2);
  for (std::size_t i = 0; i < m; ++i) {
    const EdgeCurve& e = layout.edge(i);
    mid(i, 0) = 0.5 * (e.v1.x + e.v2.x);
    mid(i, 1) = 0.5 * (e.v1.y + e.v2.y);
  }

  std::vector<Eigen::MatrixXd> starts;
  if (cfg.dims == 1) {
    for (int k = 0; k < 4; ++k) {
      const double angle = k * std::numbers::pi / 4.0;
      starts.emplace_back(mid.col(0) * std::cos(angle) + mid.col(1) * std::sin(angle));
    }
    // cos(pi/2) is not exactly zero.
    starts[2] = mid.col(1);
  } else if (cfg.dims == 2) {
    starts.push_back(mid);
  } else {
    Eigen::MatrixXd y(m, 3);
    y.leftCols(2) = mid;
    y.col(2) = mid.col(0) + mid.col(1);
    starts.push_back(std::move(y));
  }

  // A small seeded jitter breaks exact ties and gives the linearly dependent
  // third column of the q = 3 start a component of its own.
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> jitter(-kInitJitter, kInitJitter);
  Eigen::MatrixXd noise(m, cfg.dims);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < cfg.dims; ++k) noise(i, k) = jitter(rng);
  }

  std::vector<ColorEmbedding> out;
  for (Eigen::MatrixXd& y : starts) {
    standardize_columns(y);
    out.emplace_back(y + noise);
  }
  return out;
}

OptimizeResult optimize(const BundleWeightMatrix& w, const DissimilarityMatrix& d,
                        const OptimizerConfig& cfg, std::span<const ColorEmbedding> starts) {
  cfg.validate();
  if (starts.empty()) throw ParameterError("optimize needs at least one start");
  const StressMajorizer majorizer(w, d, cfg.threads);

  std::vector<OptimizeResult> runs;
  runs.reserve(starts.size());
  for (std::size_t s = 0; s < starts.size(); ++s) {
    if (starts[s].dims() != cfg.dims) throw ParameterError("start dimensionality differs from dims");
    ColorEmbedding y = starts[s];
    double current = majorizer.stress(y);
    std::vector<double> trace{current};
    std::size_t iters = 0;
    while (iters < cfg.max_iters) {
      y = majorizer.step(y);
      ++iters;
      const double previous = current;
      current = majorizer.stress(y);
      trace.push_back(current);
      if ((previous - current) / std::max(previous, kTinyStress) < cfg.rel_tol) break;
    }
    runs.push_back({std::move(y), current, iters, std::move(trace), s});
  }

  std::size_t best = 0;
  for (std::size_t s = 1; s < runs.size(); ++s) {
    if (runs[s].stress < runs[best].stress) best = s;
  }
  return std::move(runs[best]);
}

OptimizeResult optimize(const BundleWeightMatrix& w, const DissimilarityMatrix& d,
                        const OptimizerConfig& cfg, const GraphLayout& layout) {
  if (layout.size() != w.size()) throw ParameterError("layout and weights disagree on edge count");
  const std::vector<ColorEmbedding> starts = initial_embeddings(layout, cfg);
  return optimize(w, d, cfg, starts);
}

OptimizeResult optimize(const BundleWeightMatrix& w, const DissimilarityMatrix& d,
                        const OptimizerConfig& cfg) {
  if (cfg.init != InitMethod::kSeededRandom) {
    throw ParameterError("endpoint-projection initialization needs the layout");
  }
  cfg.validate();
  const ColorEmbedding start = random_embedding(w.size(), cfg.dims, cfg.seed);
  return optimize(w, d, cfg, std::span<const ColorEmbedding>(&start, 1));
}

ColorTable normalize_colors(const ColorEmbedding& y, const BundleWeightMatrix& w,
                            unsigned threads) {
  const auto m = static_cast<Eigen::Index>(y.size());
  if (static_cast<Eigen::Index>(w.size()) != m) {
    throw ParameterError("embedding and weights disagree on edge count");
  }
  const Eigen::MatrixXd& v = y.values();
  const Eigen::Index q = v.cols();
  const Eigen::RowVectorXd global_lo = v.colwise().minCoeff();
  const Eigen::RowVectorXd global_hi = v.colwise().maxCoeff();

  auto rescale = [](double value, double lo, double hi) {
    if (!(hi > lo)) return 0.5;
    return std::clamp((value - lo) / (hi - lo), 0.0, 1.0);
  };

  Eigen::MatrixXd col(m, q);
  parallel_for(m, threads, [&](std::size_t ii) {
    const auto i = static_cast<Eigen::Index>(ii);
    Eigen::RowVectorXd lo = v.row(i);
    Eigen::RowVectorXd hi = v.row(i);
    bool has_partner = false;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (j == i || !w.bundled_either(i, j)) continue;
      has_partner = true;
      lo = lo.cwiseMin(v.row(j));
      hi = hi.cwiseMax(v.row(j));
    }
    if (!has_partner) {
      lo = global_lo;
      hi = global_hi;
    }
    for (Eigen::Index k = 0; k < q; ++k) col(i, k) = rescale(v(i, k), lo(k), hi(k));
  });
  return ColorTable(std::move(col));
}

Rgb gradient_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  if (t <= 0.5) return {2.0 * t, 0.0, 1.0 - 2.0 * t};
  return {1.0, 2.0 * t - 1.0, 0.0};
}

std::vector<Rgb> colors_to_display(const ColorTable& table) {
  std::vector<Rgb> out;
  out.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    switch (table.dims()) {
      case 1:
        out.push_back(gradient_color(table(i, 0)));
        break;
      case 2:
        out.push_back({table(i, 0), 0.0, table(i, 1)});
        break;
      default:
        out.push_back({table(i, 0), table(i, 1), table(i, 2)});
        break;
    }
  }
  return out;
}

}  // namespace peacock
