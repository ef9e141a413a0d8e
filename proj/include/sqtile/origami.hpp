#pragma once

#include <algorithm>
#include <deque>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "sqtile/errors.hpp"

namespace sqtile {

// Permutation of {0..n-1}, stored in one-line notation.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::size_t n) : img_(n) {
    for (std::size_t i = 0; i < n; ++i) img_[i] = i;
  }
  explicit Permutation(std::vector<int> image) : img_(std::move(image)) {
    std::vector<bool> seen(img_.size(), false);
    for (int x : img_) {
      if (x < 0 || static_cast<std::size_t>(x) >= img_.size() || seen[x])
        throw ParseError("not a permutation");
      seen[x] = true;
    }
  }

  // Cycles given 1-based, e.g. {{1,2,3,4},{5,6,7,8}} on n points.
  static Permutation from_cycles(std::size_t n, const std::vector<std::vector<int>>& cycles) {
    std::vector<int> img(n);
    for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<int>(i);
    for (const auto& c : cycles)
      for (std::size_t k = 0; k < c.size(); ++k) img[c[k] - 1] = c[(k + 1) % c.size()] - 1;
    return Permutation(img);
  }

  std::size_t size() const { return img_.size(); }
  int operator()(int i) const { return img_[i]; }

  Permutation inverse() const {
    std::vector<int> inv(img_.size());
    for (std::size_t i = 0; i < img_.size(); ++i) inv[img_[i]] = static_cast<int>(i);
    return Permutation(inv);
  }

  // (*this) after `other`: (a.compose(b))(i) = a(b(i)).
  Permutation compose(const Permutation& other) const {
    if (size() != other.size()) throw SizeMismatch("permutation size mismatch");
    std::vector<int> img(img_.size());
    for (std::size_t i = 0; i < img_.size(); ++i) img[i] = img_[other(static_cast<int>(i))];
    return Permutation(img);
  }

  // conjugate by relabeling pi: returns pi . this . pi^{-1}
  Permutation conjugate(const Permutation& pi) const {
    std::vector<int> img(img_.size());
    for (std::size_t i = 0; i < img_.size(); ++i) img[pi(static_cast<int>(i))] = pi(img_[i]);
    return Permutation(img);
  }

  std::vector<std::vector<int>> cycles() const {
    std::vector<std::vector<int>> out;
    std::vector<bool> seen(img_.size(), false);
    for (std::size_t i = 0; i < img_.size(); ++i) {
      if (seen[i]) continue;
      std::vector<int> c;
      int j = static_cast<int>(i);
      while (!seen[j]) {
        seen[j] = true;
        c.push_back(j);
        j = img_[j];
      }
      out.push_back(std::move(c));
    }
    return out;
  }

  const std::vector<int>& image() const { return img_; }
  bool operator==(const Permutation& o) const { return img_ == o.img_; }
  bool operator<(const Permutation& o) const { return img_ < o.img_; }

 private:
  std::vector<int> img_;
};

// Square-tiled surface: n unit squares, h(i) = square to the right of i,
// v(i) = square above i. Indices 0-based internally, 1-based in JSON.
struct Origami {
  int n = 0;
  Permutation h, v;
  std::string label;

  bool operator==(const Origami& o) const { return n == o.n && h == o.h && v == o.v; }
  bool operator<(const Origami& o) const {
    if (h == o.h) return v < o.v;
    return h < o.h;
  }

  std::string key() const {
    std::string s;
    for (int x : h.image()) s += std::to_string(x) + ",";
    s += "|";
    for (int x : v.image()) s += std::to_string(x) + ",";
    return s;
  }
};

inline bool is_transitive(const Permutation& h, const Permutation& v) {
  std::size_t n = h.size();
  if (n == 0) return false;
  std::vector<bool> seen(n, false);
  std::deque<int> queue{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!queue.empty()) {
    int i = queue.front();
    queue.pop_front();
    for (int j : {h(i), v(i), h.inverse()(i), v.inverse()(i)}) {
      if (!seen[j]) {
        seen[j] = true;
        ++count;
        queue.push_back(j);
      }
    }
  }
  return count == n;
}

inline Origami build_origami(const Permutation& h, const Permutation& v,
                             const std::string& label = "") {
  if (h.size() != v.size()) throw SizeMismatch("h and v act on different sets");
  if (h.size() == 0) throw SizeMismatch("empty origami");
  if (!is_transitive(h, v)) throw NotConnected("<h,v> does not act transitively: surface is disconnected");
  return Origami{static_cast<int>(h.size()), h, v, label};
}

// Deterministic relabeling: squares numbered in breadth-first discovery
// order from `root`, exploring h, v, h^{-1}, v^{-1} in that order.
inline Permutation bfs_labeling(const Origami& o, int root) {
  std::vector<int> label(o.n, -1);
  std::deque<int> queue{root};
  label[root] = 0;
  int next = 1;
  Permutation hi = o.h.inverse(), vi = o.v.inverse();
  while (!queue.empty()) {
    int i = queue.front();
    queue.pop_front();
    for (int j : {o.h(i), o.v(i), hi(i), vi(i)}) {
      if (label[j] < 0) {
        label[j] = next++;
        queue.push_back(j);
      }
    }
  }
  return Permutation(label);
}

// Canonical form: the lexicographically smallest (h, v) pair over the n
// BFS labelings. Outputs the witness relabeling when requested.
inline Origami canonical_form(const Origami& o, Permutation* relabel = nullptr) {
  Origami best;
  Permutation best_pi;
  bool have = false;
  for (int root = 0; root < o.n; ++root) {
    Permutation pi = bfs_labeling(o, root);
    Origami cand{o.n, o.h.conjugate(pi), o.v.conjugate(pi), o.label};
    if (!have || cand < best) {
      best = cand;
      best_pi = pi;
      have = true;
    }
  }
  if (relabel) *relabel = best_pi;
  return best;
}

inline Origami random_transitive_origami(int n, std::uint64_t seed, const std::string& label) {
  std::mt19937_64 rng(seed);
  std::vector<int> ha(n), va(n);
  while (true) {
    for (int i = 0; i < n; ++i) ha[i] = va[i] = i;
    for (int i = n - 1; i > 0; --i) {
      std::swap(ha[i], ha[rng() % (i + 1)]);
      std::swap(va[i], va[rng() % (i + 1)]);
    }
    Permutation h(ha), v(va);
    if (is_transitive(h, v)) return Origami{n, h, v, label};
  }
}

// ---------------------------------------------------------------------------
// JSON: {"n": 8, "h": [...], "v": [...], "label": "..."} with 1-based
// one-line permutations.

inline Origami origami_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("origami: expected a JSON object");
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw ParseError("origami: field \"n\" missing or not an integer");
  int n = j["n"].get<int>();
  if (n < 1) throw ParseError("origami: field \"n\" must be >= 1");
  auto read_perm = [&](const char* field) {
    if (!j.contains(field) || !j[field].is_array())
      throw ParseError(std::string("origami: field \"") + field + "\" missing or not an array");
    auto arr = j[field];
    if (static_cast<int>(arr.size()) != n)
      throw ParseError(std::string("origami: field \"") + field + "\" has wrong length");
    std::vector<int> img(n);
    for (int i = 0; i < n; ++i) {
      if (!arr[i].is_number_integer())
        throw ParseError(std::string("origami: field \"") + field + "\" entry " +
                         std::to_string(i + 1) + " is not an integer");
      int x = arr[i].get<int>();
      if (x < 1 || x > n)
        throw ParseError(std::string("origami: field \"") + field + "\" entry " +
                         std::to_string(i + 1) + " out of range");
      img[i] = x - 1;
    }
    try {
      return Permutation(img);
    } catch (const ParseError&) {
      throw ParseError(std::string("origami: field \"") + field + "\" is not a permutation");
    }
  };
  Permutation h = read_perm("h"), v = read_perm("v");
  std::string label = j.value("label", std::string());
  return build_origami(h, v, label);
}

inline nlohmann::json origami_to_json(const Origami& o) {
  nlohmann::json j;
  j["n"] = o.n;
  std::vector<int> h1(o.n), v1(o.n);
  for (int i = 0; i < o.n; ++i) {
    h1[i] = o.h(i) + 1;
    v1[i] = o.v(i) + 1;
  }
  j["h"] = h1;
  j["v"] = v1;
  j["label"] = o.label;
  return j;
}

}  // namespace sqtile
