#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <thread>
#include <vector>

#include <json.hpp>

#include "sqtile/stream.hpp"

namespace sqtile {

struct LyapunovReport {
  std::vector<double> exponents;  // rescaled so the top exponent is 1
  std::vector<double> stderrs;    // per exponent, on the rescaled values
  long steps = 0;
  std::uint64_t seed = 0;
  double normalization_factor = 0.0;  // raw top rate (per unit flow time)
  double total_time = 0.0;
  int blocks = 0;
  int parallelism = 1;
  int dim = 0;
  int digit_cap = 0;
  std::string space;  // "absolute" or "relative"
};

enum class CocycleSpace { Absolute, Relative };

// Step functor over a geodesic stream, emitting the requested block as
// doubles.
class StreamStepper {
 public:
  StreamStepper(GeodesicStream stream, CocycleSpace space)
      : stream_(std::move(stream)), space_(space) {}

  int dimension(const OrbitGraph& g) const {
    return space_ == CocycleSpace::Absolute ? g.base_homology().abs_rank
                                            : g.base_homology().rel_rank;
  }

  double operator()(Eigen::MatrixXd& out) {
    StreamStep s = stream_.next();
    const IntMat& m = (space_ == CocycleSpace::Absolute) ? s.cocycle->abs : s.cocycle->rel;
    out.resize(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = to_double(m(i, j));
    return s.dt;
  }

 private:
  GeodesicStream stream_;
  CocycleSpace space_;
};

namespace detail {

struct BlockStats {
  // per block: sums of log |r_ii| and elapsed time
  std::vector<std::vector<double>> log_sums;
  std::vector<double> times;
};

// Benettin QR run: one trajectory, re-orthonormalizing every step.
template <typename StepFn>
BlockStats qr_run(StepFn&& step, int dim, long steps, int blocks) {
  if (steps < blocks || blocks < 1) throw Error("estimate_spectrum: steps < blocks");
  Eigen::MatrixXd a;
  Eigen::MatrixXd q;
  BlockStats stats;
  stats.log_sums.assign(blocks, std::vector<double>(dim, 0.0));
  stats.times.assign(blocks, 0.0);
  long per_block = steps / blocks;
  bool init = false;
  for (long k = 0; k < steps; ++k) {
    double dt = step(a);
    if (!init) {
      if (dim > a.rows()) throw Error("estimate_spectrum: dim exceeds matrix dimension");
      q = Eigen::MatrixXd::Identity(a.rows(), dim);
      init = true;
    }
    Eigen::MatrixXd b = a * q;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(b);
    Eigen::MatrixXd thin_q = qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), dim);
    Eigen::VectorXd diag = qr.matrixQR().topLeftCorner(dim, dim).diagonal();
    int block = static_cast<int>(std::min<long>(k / per_block, blocks - 1));
    for (int i = 0; i < dim; ++i) {
      double r = std::fabs(diag(i));
      if (!(r > 0.0) || !std::isfinite(r))
        throw DegenerateStream("estimate_spectrum: singular frame at step " +
                               std::to_string(k));
      stats.log_sums[block][i] += std::log(r);
      if (diag(i) < 0) thin_q.col(i) = -thin_q.col(i);
    }
    stats.times[block] += dt;
    q = thin_q;
  }
  return stats;
}

}  // namespace detail

// Spectrum estimate from B independent trajectories produced by
// make_stepper(stream_index). Trajectories run concurrently; block statistics
// are merged in index order, so results are bitwise deterministic for a fixed
// (seed, parallelism) pair.
template <typename MakeStepper>
LyapunovReport estimate_spectrum_multi(MakeStepper&& make_stepper, int dim, long steps,
                                       int blocks, int parallelism) {
  if (parallelism < 1) throw Error("estimate_spectrum: parallelism must be >= 1");
  long per_stream = steps / parallelism;
  int blocks_per_stream = std::max(1, blocks / parallelism);
  std::vector<detail::BlockStats> partial(parallelism);
  std::vector<std::string> failures(parallelism);
  auto work = [&](int b) {
    try {
      auto stepper = make_stepper(b);
      partial[b] = detail::qr_run(stepper, dim, per_stream, blocks_per_stream);
    } catch (const std::exception& e) {
      failures[b] = e.what();
    }
  };
  if (parallelism == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(parallelism);
    for (int b = 0; b < parallelism; ++b) threads.emplace_back(work, b);
    for (auto& t : threads) t.join();
  }
  for (const auto& f : failures)
    if (!f.empty()) throw DegenerateStream(f);

  std::vector<std::vector<double>> log_sums;
  std::vector<double> times;
  for (const auto& p : partial) {
    log_sums.insert(log_sums.end(), p.log_sums.begin(), p.log_sums.end());
    times.insert(times.end(), p.times.begin(), p.times.end());
  }

  LyapunovReport rep;
  rep.dim = dim;
  rep.steps = per_stream * parallelism;
  rep.blocks = static_cast<int>(times.size());
  rep.parallelism = parallelism;
  std::vector<double> total(dim, 0.0);
  double total_time = 0.0;
  for (std::size_t b = 0; b < times.size(); ++b) {
    total_time += times[b];
    for (int i = 0; i < dim; ++i) total[i] += log_sums[b][i];
  }
  rep.total_time = total_time;
  bool have_time = total_time > 0.0;
  // Raw rates per unit flow time; identity-like streams have zero time and
  // zero growth, reported as zero rates.
  std::vector<double> raw(dim, 0.0);
  for (int i = 0; i < dim; ++i) raw[i] = have_time ? total[i] / total_time : 0.0;
  rep.normalization_factor = raw.empty() ? 0.0 : raw[0];
  double scale = (rep.normalization_factor != 0.0) ? rep.normalization_factor : 1.0;
  rep.exponents.resize(dim);
  for (int i = 0; i < dim; ++i) rep.exponents[i] = raw[i] / scale;

  // Block-mean standard errors on the rescaled values (fixed denominator).
  rep.stderrs.assign(dim, 0.0);
  if (times.size() > 1) {
    for (int i = 0; i < dim; ++i) {
      double mean = 0.0;
      std::vector<double> rates(times.size());
      for (std::size_t b = 0; b < times.size(); ++b) {
        rates[b] = (times[b] > 0.0 ? log_sums[b][i] / times[b] : 0.0) / scale;
        mean += rates[b];
      }
      mean /= static_cast<double>(times.size());
      double var = 0.0;
      for (double r : rates) var += (r - mean) * (r - mean);
      var /= static_cast<double>(times.size() - 1);
      rep.stderrs[i] = std::sqrt(var / static_cast<double>(times.size()));
    }
  }
  return rep;
}

inline LyapunovReport estimate_spectrum(const OrbitGraph& graph, CocycleSpace space,
                                        int dim, long steps, int blocks,
                                        std::uint64_t seed, int digit_cap = 20,
                                        int parallelism = 1) {
  auto make = [&](int b) {
    return StreamStepper(GeodesicStream(graph, seed + 0x9e3779b97f4a7c15ULL * b, digit_cap),
                         space);
  };
  LyapunovReport rep = estimate_spectrum_multi(make, dim, steps, blocks, parallelism);
  rep.seed = seed;
  rep.digit_cap = digit_cap;
  rep.space = (space == CocycleSpace::Absolute) ? "absolute" : "relative";
  return rep;
}

// ---------------------------------------------------------------------------

struct TopSubspace {
  std::vector<double> direction;  // unit vector, absolute coordinates
  double dominance = 0.0;         // accumulated log separation of the top two
  double residual_to_tautological = 0.0;
};

// Power iteration for the top Oseledets direction. Convergence requires the
// top direction to dominate the second; an isometric (or identity) stream
// never separates and raises NoConvergence.
template <typename StepFn>
TopSubspace top_direction(StepFn&& step, long steps, double angle_tol = 1e-9) {
  Eigen::MatrixXd a;
  Eigen::MatrixXd q;
  double separation = 0.0;
  Eigen::VectorXd prev;
  double last_angle = 1.0;
  bool init = false;
  for (long k = 0; k < steps; ++k) {
    double dt = step(a);
    (void)dt;
    if (!init) {
      q = Eigen::MatrixXd::Identity(a.rows(), std::min<long>(2, a.rows()));
      init = true;
    }
    Eigen::MatrixXd b = a * q;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(b);
    Eigen::MatrixXd thin_q =
        qr.householderQ() * Eigen::MatrixXd::Identity(a.rows(), q.cols());
    Eigen::VectorXd diag = qr.matrixQR().topLeftCorner(q.cols(), q.cols()).diagonal();
    if (q.cols() > 1) separation += std::log(std::fabs(diag(0))) - std::log(std::fabs(diag(1)));
    for (int i = 0; i < q.cols(); ++i)
      if (diag(i) < 0) thin_q.col(i) = -thin_q.col(i);
    q = thin_q;
    if (k * 10 >= steps * 9) {  // track stability over the last tenth
      Eigen::VectorXd v = q.col(0);
      if (prev.size()) last_angle = std::min(last_angle, 1.0 - std::fabs(prev.dot(v)));
      prev = v;
    }
  }
  if (!init || separation < std::log(1e8))
    throw NoConvergence("top_direction: no dominant direction emerged");
  if (prev.size() == 0 || last_angle > angle_tol)
    throw NoConvergence("top_direction: direction still oscillating");
  TopSubspace t;
  t.dominance = separation;
  t.direction.assign(prev.data(), prev.data() + prev.size());
  return t;
}

inline TopSubspace top_subspace(const OrbitGraph& graph, long steps, std::uint64_t seed,
                                int digit_cap = 20) {
  StreamStepper stepper(GeodesicStream(graph, seed, digit_cap), CocycleSpace::Absolute);
  TopSubspace t = top_direction(stepper, steps);
  // Residual of the estimated direction against span(taut_a, taut_b).
  const HomologyData& hd = graph.base_homology();
  Eigen::MatrixXd taut(hd.abs_rank, 2);
  for (int i = 0; i < hd.abs_rank; ++i) {
    taut(i, 0) = to_double(hd.taut_a[i]);
    taut(i, 1) = to_double(hd.taut_b[i]);
  }
  Eigen::VectorXd v(hd.abs_rank);
  for (int i = 0; i < hd.abs_rank; ++i) v(i) = t.direction[i];
  Eigen::VectorXd proj = taut * (taut.colPivHouseholderQr().solve(v));
  t.residual_to_tautological = (v - proj).norm();
  return t;
}

// ---------------------------------------------------------------------------

struct SymmetryCheck {
  bool pass = true;
  std::vector<double> pair_sums;     // lambda_i + lambda_{n+1-i}
  std::vector<double> pair_margins;  // 3 * combined stderr
};

// Symplectic symmetry lambda_i = -lambda_{n+1-i}: each pair sum must sit
// within 3 combined standard errors of zero.
inline SymmetryCheck spectrum_symmetry_check(const LyapunovReport& rep) {
  SymmetryCheck c;
  int n = static_cast<int>(rep.exponents.size());
  for (int i = 0; i < (n + 1) / 2; ++i) {
    int j = n - 1 - i;
    double sum = rep.exponents[i] + rep.exponents[j];
    double se = 3.0 * std::sqrt(rep.stderrs[i] * rep.stderrs[i] +
                                rep.stderrs[j] * rep.stderrs[j]);
    c.pair_sums.push_back(sum);
    c.pair_margins.push_back(se);
    if (std::fabs(sum) > se) c.pass = false;
  }
  return c;
}

inline nlohmann::json lyapunov_to_json(const LyapunovReport& rep) {
  nlohmann::json j;
  nlohmann::json exps = nlohmann::json::array();
  for (std::size_t i = 0; i < rep.exponents.size(); ++i) {
    nlohmann::json e;
    e["estimate"] = round12(rep.exponents[i]);
    e["stderr"] = round12(rep.stderrs[i]);
    exps.push_back(e);
  }
  j["exponents"] = exps;
  j["steps"] = rep.steps;
  j["seed"] = rep.seed;
  j["blocks"] = rep.blocks;
  j["parallelism"] = rep.parallelism;
  j["dim"] = rep.dim;
  j["digit_cap"] = rep.digit_cap;
  j["space"] = rep.space;
  j["normalization_factor"] = round12(rep.normalization_factor);
  j["total_time"] = round12(rep.total_time);
  return j;
}

inline std::string lyapunov_to_csv(const LyapunovReport& rep) {
  std::string out = "estimate,stderr,steps,seed\n";
  char buf[128];
  for (std::size_t i = 0; i < rep.exponents.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%ld,%llu\n", round12(rep.exponents[i]),
                  round12(rep.stderrs[i]), rep.steps,
                  static_cast<unsigned long long>(rep.seed));
    out += buf;
  }
  return out;
}

}  // namespace sqtile
