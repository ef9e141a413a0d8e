#pragma once

#include <Eigen/Dense>

#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "sqtile/errors.hpp"
#include "sqtile/poly.hpp"

namespace sqtile {

struct BoundedSubspaceOptions {
  double norm_cap = 0.0;  // 0 = auto: 10 * max generator norm
  int word_len = 12;
  int n_words = 0;        // 0 = auto
  std::uint64_t seed = 7;
};

struct BoundedSubspaceResult {
  RatMat basis;            // canonical rational basis, empty when inconclusive
  int screened_dim = -1;   // numeric stage estimate
  int exact_dim = -1;      // exact stage dimension
  bool screen_stable = false;
  bool inconclusive = false;
  std::string note;
};

namespace detail {

inline void check_preserves_form(const std::vector<IntMat>& gens, const IntMat& j) {
  for (const auto& g : gens)
    if (g.transpose() * j * g != j)
      throw Error("bounded_subspace: generator does not preserve the symplectic form");
}

inline IntMat random_word(const std::vector<IntMat>& gens,
                          const std::vector<IntMat>& inverses, int len,
                          std::mt19937_64& rng, std::size_t dim) {
  IntMat w = IntMat::identity(dim);
  for (int k = 0; k < len; ++k) {
    std::size_t pick = rng() % (2 * gens.size());
    w = (pick < gens.size() ? gens[pick] : inverses[pick - gens.size()]) * w;
  }
  return w;
}

inline IntMat random_word_mixed(const std::vector<IntMat>& gens,
                                const std::vector<IntMat>& inverses, int max_len,
                                std::mt19937_64& rng, std::size_t dim) {
  return random_word(gens, inverses, 1 + static_cast<int>(rng() % max_len), rng, dim);
}

// Numeric growth screen: count directions whose images under sampled words
// of the given length stay below the cap. Bounded directions keep norms at
// the finite-group scale; unbounded ones grow exponentially in the word
// length, so long enough words separate the two decisively. Words are
// multiplied in double precision; the exact stage never sees them.
inline int screen_bounded_dim(const std::vector<Eigen::MatrixXd>& gens_d, int word_len,
                              double norm_cap, int n_words, std::mt19937_64& rng) {
  std::size_t d = gens_d[0].rows();
  Eigen::MatrixXd stacked(n_words * d, d);
  for (int w = 0; w < n_words; ++w) {
    Eigen::MatrixXd word = Eigen::MatrixXd::Identity(d, d);
    for (int k = 0; k < word_len; ++k) word = gens_d[rng() % gens_d.size()] * word;
    stacked.block(w * d, 0, d, d) = word;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
  int count = 0;
  double scale = std::sqrt(static_cast<double>(n_words));
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) <= norm_cap * scale) ++count;
  return count;
}

}  // namespace detail

// Largest rational subspace on which the generated group plausibly acts with
// bounded image, computed in two stages:
//   1. numeric screening of growth under random words (with a
//      stability-under-doubling gate on the word length);
//   2. exact stage: intersect the bounded parts ker q_W(W) of sampled words
//      (q_W = squarefree cyclotomic part of the characteristic polynomial),
//      then shrink to the largest subspace invariant under all generators.
// The two stages must agree on the dimension; otherwise the result is
// flagged inconclusive and the basis is empty, never wrong.
inline BoundedSubspaceResult bounded_subspace(const std::vector<IntMat>& gens,
                                              const IntMat& j,
                                              BoundedSubspaceOptions opts = {}) {
  std::size_t d = j.rows();
  BoundedSubspaceResult res;
  if (gens.empty()) {
    res.basis = canonical_basis(to_rat(IntMat::identity(d)));
    res.screened_dim = res.exact_dim = static_cast<int>(d);
    res.screen_stable = true;
    res.note = "no generators: whole space is trivially bounded";
    return res;
  }
  detail::check_preserves_form(gens, j);

  std::vector<IntMat> inverses;
  for (const auto& g : gens) inverses.push_back(unimodular_inverse(g));

  double norm_cap = opts.norm_cap;
  if (norm_cap <= 0.0) {
    double max_norm = 0.0;
    for (const auto& g : gens) {
      Eigen::MatrixXd m(d, d);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k) m(i, k) = to_double(g(i, k));
      max_norm = std::max(max_norm, m.operatorNorm());
    }
    norm_cap = 10.0 * max_norm;
  }
  int n_words = opts.n_words > 0 ? opts.n_words : static_cast<int>(4 * d + 16);

  std::mt19937_64 rng(opts.seed);
  // Screening horizon: word_len, doubled twice. Stability under doubling is
  // required; the reported dimension comes from the longest horizon.
  std::vector<Eigen::MatrixXd> gens_d;
  for (const auto* side : {&gens, &inverses})
    for (const auto& g : *side) {
      Eigen::MatrixXd m(d, d);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t k = 0; k < d; ++k) m(i, k) = to_double(g(i, k));
      gens_d.push_back(std::move(m));
    }
  int at_2x =
      detail::screen_bounded_dim(gens_d, 2 * opts.word_len, norm_cap, n_words, rng);
  int at_4x =
      detail::screen_bounded_dim(gens_d, 4 * opts.word_len, norm_cap, n_words, rng);
  res.screened_dim = at_4x;
  res.screen_stable = (at_2x == at_4x);

  // Exact stage: cut by the generators, then by short random words. The
  // final guarantee is the invariance shrink plus the finite-closure
  // certification downstream, so a modest sample is enough here.
  RatMat v = canonical_basis(to_rat(IntMat::identity(d)));
  for (const auto& g : gens) {
    if (v.cols() == 0) break;
    v = subspace_intersection(v, bounded_part(g));
  }
  int exact_words = std::min<int>(static_cast<int>(2 * d + 8), 24);
  int exact_len = std::min(opts.word_len, 6);
  for (int w = 0; w < exact_words && v.cols() > 0; ++w) {
    IntMat word = detail::random_word_mixed(gens, inverses, exact_len, rng, d);
    v = subspace_intersection(v, bounded_part(word));
  }
  // Largest invariant subspace inside v: iterate v <- v  ∩ g^{-1} v.
  bool changed = true;
  while (changed && v.cols() > 0) {
    changed = false;
    for (const auto& g : gens) {
      RatMat pre = subspace_preimage(to_rat(g), v);
      RatMat cut = subspace_intersection(v, pre);
      if (cut.cols() != v.cols()) {
        v = cut;
        changed = true;
      }
    }
  }
  res.exact_dim = static_cast<int>(v.cols());

  if (!res.screen_stable || res.exact_dim != res.screened_dim) {
    res.inconclusive = true;
    res.note = "screening (dim " + std::to_string(res.screened_dim) +
               (res.screen_stable ? "" : ", unstable under doubling") +
               ") and exact stage (dim " + std::to_string(res.exact_dim) + ") disagree";
    res.basis = RatMat(d, 0);
    return res;
  }
  // Exact invariance re-check.
  for (const auto& g : gens) {
    RatMat image = to_rat(g) * v;
    if (!subspace_contains(v, image))
      throw Error("bounded_subspace: invariance verification failed (internal)");
  }
  res.basis = canonical_basis(v);
  return res;
}

// ---------------------------------------------------------------------------

struct ClosureResult {
  long size = -1;  // -1 = inconclusive at the cap
  std::vector<RatMat> elements;
  std::vector<RatMat> restricted_gens;
};

inline RatMat restrict_to(const RatMat& space, const RatMat& g) {
  auto r = solve(space, g * space);
  if (!r) throw NotInvariant("restrict_to: subspace not invariant");
  return *r;
}

// BFS closure of the restricted generators. Integer matrices with compact
// closure form a finite group, so either the BFS closes or the cap is hit.
inline ClosureResult certify_finite_closure(const RatMat& f_basis,
                                            const std::vector<IntMat>& gens,
                                            long element_cap = 20000) {
  ClosureResult out;
  std::size_t k = f_basis.cols();
  if (k == 0) {
    out.size = 1;
    out.elements = {RatMat::identity(0)};
    return out;
  }
  for (const auto& g : gens) out.restricted_gens.push_back(restrict_to(f_basis, to_rat(g)));

  auto key = [](const RatMat& m) {
    std::string s;
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) s += rat_to_string(m(i, j)) + ",";
    return s;
  };
  std::unordered_map<std::string, std::size_t> seen;
  std::vector<RatMat> elements{RatMat::identity(k)};
  seen.emplace(key(elements[0]), 0);
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    std::size_t cur = queue.front();
    queue.pop_front();
    for (const auto& g : out.restricted_gens) {
      RatMat next = g * elements[cur];
      std::string s = key(next);
      if (seen.count(s)) continue;
      if (static_cast<long>(elements.size()) >= element_cap) return out;  // inconclusive
      seen.emplace(s, elements.size());
      queue.push_back(elements.size());
      elements.push_back(std::move(next));
    }
  }
  out.size = static_cast<long>(elements.size());
  out.elements = std::move(elements);
  return out;
}

// Group-averaged inner product Q_F = (1/|G|) sum g^T g: exactly invariant,
// symmetric, positive definite, rational.
inline RatMat averaged_form(const std::vector<RatMat>& group) {
  if (group.empty()) throw Error("averaged_form: empty group");
  std::size_t k = group[0].rows();
  RatMat q(k, k);
  for (const auto& g : group) q = q + g.transpose() * g;
  Rat inv = Rat(1) / Rat(Int(group.size()));
  return q * inv;
}

// ---------------------------------------------------------------------------

struct ForniCertificate {
  RatMat f_basis;   // absolute coordinates, canonical form; may be empty
  int dim_f = 0;
  long closure_size = -1;  // -1 = inconclusive
  std::vector<RatMat> restricted_group;
  RatMat q_f;
  bool conclusive = false;
  BoundedSubspaceResult detection;
  std::vector<std::string> caveats;
};

struct ForniOptions {
  BoundedSubspaceOptions bounded;
  long element_cap = 20000;
};

inline ForniCertificate forni_certificate(const std::vector<IntMat>& gens, const IntMat& j,
                                          ForniOptions opts = {}) {
  ForniCertificate cert;
  cert.caveats.push_back(
      "generators: possibly proper subgroup of the full monodromy image");
  cert.detection = bounded_subspace(gens, j, opts.bounded);
  if (cert.detection.inconclusive) {
    cert.f_basis = RatMat(j.rows(), 0);
    cert.caveats.push_back("bounded-subspace detection inconclusive: " +
                           cert.detection.note);
    return cert;
  }
  cert.f_basis = cert.detection.basis;
  cert.dim_f = static_cast<int>(cert.f_basis.cols());
  ClosureResult closure = certify_finite_closure(cert.f_basis, gens, opts.element_cap);
  cert.closure_size = closure.size;
  if (closure.size < 0) {
    cert.caveats.push_back("finite-closure certification inconclusive at element cap " +
                           std::to_string(opts.element_cap));
    return cert;
  }
  cert.restricted_group = std::move(closure.elements);
  if (cert.dim_f > 0) {
    cert.q_f = averaged_form(cert.restricted_group);
    for (const auto& g : cert.restricted_group)
      if (g.transpose() * cert.q_f * g != cert.q_f)
        throw Error("forni_certificate: averaged form is not invariant (internal)");
  }
  cert.conclusive = true;
  return cert;
}

// J-complement {x : <l, x> = 0 for all l in L}.
inline RatMat symplectic_complement(const RatMat& space, const IntMat& j) {
  if (space.cols() == 0) return canonical_basis(to_rat(IntMat::identity(j.rows())));
  RatMat lt_j = space.transpose() * to_rat(j);
  return canonical_basis(kernel(lt_j));
}

// Constructive complement of Theorem-1.6 type: L1 = L ∩ L^dagger must lie in
// F; L2 = Q_F-orthocomplement of L1 inside F; the returned complement is
// L^dagger ∩ (L2 ⊕ F^dagger).
inline RatMat invariant_complement(const RatMat& l, const std::vector<IntMat>& gens,
                                   const ForniCertificate& cert, const IntMat& j) {
  for (const auto& g : gens) {
    RatMat image = to_rat(g) * l;
    if (l.cols() > 0 && !subspace_contains(l, image))
      throw NotInvariant("invariant_complement: L is not invariant under the generators");
  }
  RatMat l_dag = symplectic_complement(l, j);
  RatMat l1 = subspace_intersection(l, l_dag);
  if (l1.cols() > 0 && !subspace_contains(cert.f_basis, l1))
    throw HypothesisFailure("invariant_complement: L ∩ L^dagger is not contained in F");

  RatMat l2(j.rows(), 0);
  if (cert.dim_f > 0) {
    if (l1.cols() == 0) {
      l2 = cert.f_basis;
    } else {
      auto l1_coords = solve(cert.f_basis, l1);
      if (!l1_coords) throw Error("invariant_complement: F coordinates failed");
      RatMat cond = l1_coords->transpose() * cert.q_f;  // rows: Q_F pairings
      RatMat k = kernel(cond);
      l2 = canonical_basis(cert.f_basis * k);
    }
  }
  RatMat f_dag = symplectic_complement(cert.f_basis, j);
  RatMat l3 = subspace_sum(l2, f_dag);
  RatMat comp = subspace_intersection(l_dag, l3);

  for (const auto& g : gens) {
    RatMat image = to_rat(g) * comp;
    if (comp.cols() > 0 && !subspace_contains(comp, image))
      throw Error("invariant_complement: complement failed invariance (internal)");
  }
  if (subspace_sum(l, comp).cols() != j.rows() ||
      l.cols() + comp.cols() != j.rows())
    throw Error("invariant_complement: direct sum verification failed");
  return comp;
}

inline nlohmann::json rat_matrix_to_json(const RatMat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(rat_to_string(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

inline nlohmann::json forni_to_json(const ForniCertificate& cert) {
  nlohmann::json j;
  j["dim_F"] = cert.dim_f;
  j["F_basis"] = rat_matrix_to_json(cert.f_basis);
  j["closure_size"] =
      cert.closure_size < 0 ? nlohmann::json("inconclusive") : nlohmann::json(cert.closure_size);
  j["Q_F"] = rat_matrix_to_json(cert.q_f);
  j["conclusive"] = cert.conclusive;
  j["caveats"] = cert.caveats;
  j["screened_dim"] = cert.detection.screened_dim;
  j["screen_stable"] = cert.detection.screen_stable;
  return j;
}

}  // namespace sqtile
