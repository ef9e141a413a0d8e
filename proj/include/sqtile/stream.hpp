#pragma once

#include <cmath>
#include <random>
#include <unordered_map>

#include "sqtile/orbit.hpp"

namespace sqtile {

// One continued-fraction digit of a random Teichmueller geodesic: the word
// T^a S applied at the current node. dt is the log of the top singular value
// of the 2x2 word matrix, used as elapsed flow time.
struct StreamStep {
  const CocycleMatrix* cocycle = nullptr;
  double dt = 0.0;
  int digit = 0;
};

class GeodesicStream {
 public:
  GeodesicStream(const OrbitGraph& graph, std::uint64_t seed, int digit_cap = 20)
      : graph_(&graph), rng_(seed), seed_(seed), digit_cap_(digit_cap) {
    if (!graph.complete)
      throw Error("geodesic stream requires a fully expanded orbit graph");
    // Gauss-measure digit distribution P(k) = log2(1 + 1/(k(k+2))),
    // truncated at the cap and renormalized.
    cdf_.resize(digit_cap_);
    double total = 0.0;
    for (int k = 1; k <= digit_cap_; ++k)
      total += std::log2(1.0 + 1.0 / (static_cast<double>(k) * (k + 2)));
    double acc = 0.0;
    for (int k = 1; k <= digit_cap_; ++k) {
      acc += std::log2(1.0 + 1.0 / (static_cast<double>(k) * (k + 2))) / total;
      cdf_[k - 1] = acc;
    }
    cdf_.back() = 1.0;
  }

  std::uint64_t seed() const { return seed_; }
  int digit_cap() const { return digit_cap_; }
  int node() const { return node_; }

  StreamStep next() {
    int digit = sample_digit();
    std::uint64_t key = (static_cast<std::uint64_t>(node_) << 8) | digit;
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, build_digit(node_, digit)).first;
    node_ = it->second.target;
    return StreamStep{&it->second.cocycle, it->second.dt, digit};
  }

 private:
  struct DigitCocycle {
    CocycleMatrix cocycle;
    double dt;
    int target;
  };

  int sample_digit() {
    double u = (rng_() >> 11) * (1.0 / 9007199254740992.0);
    int lo = 0, hi = digit_cap_ - 1;
    while (lo < hi) {
      int mid = (lo + hi) / 2;
      if (cdf_[mid] < u) lo = mid + 1;
      else hi = mid;
    }
    return lo + 1;
  }

  DigitCocycle build_digit(int start, int digit) const {
    int cur = start;
    const CocycleMatrix* first = &graph_->edges[graph_->t_edge[cur]].cocycle;
    CocycleMatrix acc = *first;
    cur = graph_->edges[graph_->t_edge[cur]].to;
    for (int k = 1; k < digit; ++k) {
      const OrbitEdge& e = graph_->edges[graph_->t_edge[cur]];
      acc = e.cocycle.compose_after(acc);
      cur = e.to;
    }
    const OrbitEdge& se = graph_->edges[graph_->s_edge[cur]];
    acc = se.cocycle.compose_after(acc);
    cur = se.to;

    // dt from the 2x2 word W = S T^digit with T = [[1,1],[0,1]],
    // S = [[0,1],[-1,0]]: W = [[0,1],[-1,-digit]].
    double a = 0, b = 1, c = -1, d = -static_cast<double>(digit);
    double t = a * a + b * b + c * c + d * d;  // trace(W^T W), det = 1
    double s1sq = (t + std::sqrt(std::max(0.0, t * t - 4.0))) / 2.0;
    return DigitCocycle{std::move(acc), 0.5 * std::log(s1sq), cur};
  }

  const OrbitGraph* graph_;
  std::mt19937_64 rng_;
  std::uint64_t seed_;
  int digit_cap_;
  int node_ = 0;
  std::vector<double> cdf_;
  std::unordered_map<std::uint64_t, DigitCocycle> cache_;
};

}  // namespace sqtile
