#pragma once

#include <deque>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "sqtile/cylinders.hpp"

namespace sqtile {

struct OrbitNode {
  Origami origami;
  HomologyData hd;
  int depth = 0;
  int parent_edge = -1;  // BFS tree edge into this node, -1 at the base
};

struct OrbitEdge {
  int from = 0, to = 0;
  Move move = Move::T;
  CocycleMatrix cocycle;
  bool tree = false;
};

struct OrbitGraph {
  std::vector<OrbitNode> nodes;
  std::vector<OrbitEdge> edges;
  // edge index of the T/S move out of each node, -1 if not expanded
  std::vector<int> t_edge, s_edge;
  std::vector<CocycleMatrix> monodromy_generators;  // loops based at node 0
  bool complete = true;  // every node expanded (no depth truncation)

  const HomologyData& base_homology() const { return nodes.front().hd; }
};

// BFS over T/S moves with canonical-form deduplication. max_depth < 0 means
// unbounded. Nodes beyond max_nodes raise OrbitTooLarge. The enumeration runs
// first on bare permutation pairs; homology and transport matrices are only
// computed once the node set is known.
inline OrbitGraph veech_orbit(const Origami& o, int max_nodes, int max_depth = -1) {
  OrbitGraph g;
  Origami base = canonical_form(o);
  base.label = o.label;

  struct ProtoEdge {
    int from, to;
    Move move;
    Origami raw;
    Permutation relabel;
    bool tree;
  };
  std::vector<Origami> origamis{base};
  std::vector<int> depths{0};
  std::vector<ProtoEdge> proto;
  std::unordered_map<std::string, int> index{{base.key(), 0}};
  bool complete = true;

  std::deque<int> queue{0};
  while (!queue.empty()) {
    int cur = queue.front();
    queue.pop_front();
    if (max_depth >= 0 && depths[cur] >= max_depth) {
      complete = false;
      continue;
    }
    for (Move m : {Move::T, Move::S}) {
      Origami raw = move_raw_target(origamis[cur], m);
      Permutation pi;
      Origami target = canonical_form(raw, &pi);
      auto it = index.find(target.key());
      int tgt;
      bool fresh = (it == index.end());
      if (fresh) {
        if (static_cast<int>(origamis.size()) >= max_nodes)
          throw OrbitTooLarge("veech_orbit: more than " + std::to_string(max_nodes) +
                              " nodes");
        tgt = static_cast<int>(origamis.size());
        target.label = o.label;
        origamis.push_back(target);
        depths.push_back(depths[cur] + 1);
        index.emplace(target.key(), tgt);
        queue.push_back(tgt);
      } else {
        tgt = it->second;
      }
      proto.push_back(ProtoEdge{cur, tgt, m, std::move(raw), pi, fresh});
    }
  }

  g.complete = complete;
  g.nodes.reserve(origamis.size());
  for (std::size_t i = 0; i < origamis.size(); ++i)
    g.nodes.push_back(OrbitNode{origamis[i], homology(origamis[i]), depths[i], -1});
  for (const auto& pe : proto) {
    IntMat edge_map =
        relabel_edge_map(pe.raw, pe.relabel) * move_edge_map(g.nodes[pe.from].origami, pe.move);
    CocycleMatrix cm = cocycle_of_edge_map(edge_map, g.nodes[pe.from].hd,
                                           g.nodes[pe.to].hd,
                                           pe.move == Move::T ? "T" : "S");
    g.edges.push_back(OrbitEdge{pe.from, pe.to, pe.move, std::move(cm), pe.tree});
    if (pe.tree) g.nodes[pe.to].parent_edge = static_cast<int>(g.edges.size()) - 1;
  }

  g.t_edge.assign(g.nodes.size(), -1);
  g.s_edge.assign(g.nodes.size(), -1);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    if (g.edges[i].move == Move::T) g.t_edge[g.edges[i].from] = static_cast<int>(i);
    else g.s_edge[g.edges[i].from] = static_cast<int>(i);
  }
  for (std::size_t i = 0; i < g.nodes.size(); ++i)
    if (g.t_edge[i] < 0 || g.s_edge[i] < 0) g.complete = false;

  // Transport from the base along tree edges.
  std::vector<CocycleMatrix> to_node(g.nodes.size());
  to_node[0] = CocycleMatrix{IntMat::identity(g.nodes[0].hd.rel_rank),
                             IntMat::identity(g.nodes[0].hd.abs_rank), ""};
  // BFS discovery order equals node index order.
  for (std::size_t i = 1; i < g.nodes.size(); ++i) {
    const OrbitEdge& e = g.edges[g.nodes[i].parent_edge];
    to_node[i] = e.cocycle.compose_after(to_node[e.from]);
  }

  // Monodromy: loops from non-tree edges, plus both multitwists conjugated in
  // from every node.
  std::unordered_set<std::string> seen;
  auto add_generator = [&](CocycleMatrix cm) {
    if (cm.rel == IntMat::identity(cm.rel.rows())) return;
    std::string key = cm.key();
    if (seen.insert(key).second) g.monodromy_generators.push_back(std::move(cm));
  };
  for (const auto& e : g.edges) {
    if (e.tree) continue;
    CocycleMatrix loop =
        to_node[e.to].inverse().compose_after(e.cocycle.compose_after(to_node[e.from]));
    loop.word = "loop[" + (e.move == Move::T ? std::string("T") : std::string("S")) +
                "@" + std::to_string(e.from) + "]";
    add_generator(std::move(loop));
  }
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    for (Direction dir : {Direction::Horizontal, Direction::Vertical}) {
      CocycleMatrix tw = multitwist_matrix(g.nodes[i].origami, g.nodes[i].hd, dir);
      CocycleMatrix conj =
          to_node[i].inverse().compose_after(tw.compose_after(to_node[i]));
      conj.word = "tw" + std::string(dir == Direction::Horizontal ? "H" : "V") + "@" +
                  std::to_string(i);
      add_generator(std::move(conj));
    }
  }
  return g;
}

inline std::vector<IntMat> monodromy_abs_generators(const OrbitGraph& g) {
  std::vector<IntMat> out;
  out.reserve(g.monodromy_generators.size());
  for (const auto& m : g.monodromy_generators) out.push_back(m.abs);
  return out;
}

inline nlohmann::json orbit_to_json(const OrbitGraph& g) {
  nlohmann::json j;
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : g.nodes) nodes.push_back(origami_to_json(n.origami));
  j["nodes"] = nodes;
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges) {
    nlohmann::json ej;
    ej["from"] = e.from;
    ej["to"] = e.to;
    ej["move"] = (e.move == Move::T) ? "T" : "S";
    edges.push_back(ej);
  }
  j["edges"] = edges;
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& m : g.monodromy_generators) {
    nlohmann::json gj;
    gj["word"] = m.word;
    gj["rel"] = int_matrix_to_json(m.rel);
    gj["abs"] = int_matrix_to_json(m.abs);
    gens.push_back(gj);
  }
  j["monodromy_generators"] = gens;
  j["complete"] = g.complete;
  return j;
}

}  // namespace sqtile
