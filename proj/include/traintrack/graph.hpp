#pragma once

// Finite graphs with oriented edges, edge paths and tightening.  An oriented
// edge is a nonzero integer: +(e+1) is edge e in its given orientation,
// -(e+1) the reverse.  Paths carry an explicit start vertex so that trivial
// paths are representable.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "traintrack/word.hpp"

namespace traintrack {

struct Graph {
  struct Edge {
    int init = -1;
    int term = -1;
  };
  int num_vertices = 0;
  std::vector<Edge> edges;

  int num_edges() const { return static_cast<int>(edges.size()); }

  static int edge_id(int oriented) { return (oriented > 0 ? oriented : -oriented) - 1; }
  static int oriented(int edge, bool forward = true) {
    return forward ? edge + 1 : -(edge + 1);
  }

  int init_of(int oe) const {
    const Edge& e = edges.at(edge_id(oe));
    return oe > 0 ? e.init : e.term;
  }
  int term_of(int oe) const { return init_of(-oe); }

  // Oriented edges leaving v, in increasing oriented-id order.
  std::vector<int> directions_at(int v) const {
    std::vector<int> out;
    for (int e = 0; e < num_edges(); ++e) {
      if (edges[e].init == v) out.push_back(oriented(e));
      if (edges[e].term == v) out.push_back(oriented(e, false));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  int valence(int v) const { return static_cast<int>(directions_at(v).size()); }

  std::vector<int> all_directions() const {
    std::vector<int> out;
    for (int e = 0; e < num_edges(); ++e) {
      out.push_back(oriented(e));
      out.push_back(oriented(e, false));
    }
    return out;
  }

  // Connected components of the subgraph spanned by `edge_set` (vertex set =
  // endpoints of those edges).  Returns component index per edge.
  std::vector<int> edge_components(const std::vector<int>& edge_set) const {
    std::vector<int> vrep(num_vertices, -1);
    std::vector<int> comp(num_edges(), -1);
    std::vector<int> stack;
    int c = 0;
    std::vector<std::vector<int>> vert_edges(num_vertices);
    for (int e : edge_set) {
      vert_edges[edges[e].init].push_back(e);
      vert_edges[edges[e].term].push_back(e);
    }
    for (int e0 : edge_set) {
      if (comp[e0] != -1) continue;
      stack.push_back(e0);
      comp[e0] = c;
      while (!stack.empty()) {
        int e = stack.back();
        stack.pop_back();
        for (int v : {edges[e].init, edges[e].term})
          for (int e2 : vert_edges[v])
            if (comp[e2] == -1) {
              comp[e2] = c;
              stack.push_back(e2);
            }
      }
      ++c;
    }
    return comp;
  }

  bool connected() const {
    if (num_vertices == 0) return true;
    std::vector<int> all(num_edges());
    std::iota(all.begin(), all.end(), 0);
    auto comp = edge_components(all);
    std::set<int> cs(comp.begin(), comp.end());
    cs.erase(-1);
    if (num_edges() == 0) return num_vertices <= 1;
    // isolated vertices count as disconnection
    std::vector<bool> touched(num_vertices, false);
    for (auto& e : edges) touched[e.init] = touched[e.term] = true;
    for (bool t : touched)
      if (!t) return false;
    return cs.size() <= 1;
  }

  int first_betti() const {
    // assumes connected
    return num_edges() - num_vertices + 1;
  }
};

struct EdgePath {
  int start = -1;            // vertex; meaningful when steps is empty too
  std::vector<int> steps;    // oriented edge ids

  static EdgePath trivial(int v) { return EdgePath{v, {}}; }
  bool is_trivial() const { return steps.empty(); }
  size_t size() const { return steps.size(); }

  int end(const Graph& g) const {
    return steps.empty() ? start : g.term_of(steps.back());
  }

  bool valid(const Graph& g) const {
    if (steps.empty()) return start >= 0 && start < g.num_vertices;
    if (start != g.init_of(steps.front())) return false;
    for (size_t i = 0; i + 1 < steps.size(); ++i)
      if (g.term_of(steps[i]) != g.init_of(steps[i + 1])) return false;
    return true;
  }

  bool is_tight() const {
    for (size_t i = 0; i + 1 < steps.size(); ++i)
      if (steps[i] == -steps[i + 1]) return false;
    return true;
  }

  bool is_closed(const Graph& g) const { return end(g) == start; }

  bool operator==(const EdgePath& o) const {
    return start == o.start && steps == o.steps;
  }
};

inline EdgePath path_inverse(const Graph& g, const EdgePath& p) {
  EdgePath out;
  out.start = p.end(g);
  out.steps.assign(p.steps.rbegin(), p.steps.rend());
  for (int& s : out.steps) s = -s;
  return out;
}

// [p]: the tight path homotopic to p rel endpoints.
inline EdgePath tighten_path(const Graph& g, const EdgePath& p) {
  if (!p.valid(g)) throw std::invalid_argument("tighten_path: malformed path");
  EdgePath out;
  out.start = p.start;
  for (int s : p.steps) {
    if (!out.steps.empty() && out.steps.back() == -s)
      out.steps.pop_back();
    else
      out.steps.push_back(s);
  }
  return out;
}

inline EdgePath concat_paths(const Graph& g, const EdgePath& a, const EdgePath& b) {
  if (a.end(g) != b.start) throw std::invalid_argument("concat_paths: endpoint mismatch");
  EdgePath out;
  out.start = a.start;
  out.steps = a.steps;
  out.steps.insert(out.steps.end(), b.steps.begin(), b.steps.end());
  return tighten_path(g, out);
}

inline EdgePath concat_paths(const Graph& g, const EdgePath& a, const EdgePath& b,
                             const EdgePath& c) {
  return concat_paths(g, concat_paths(g, a, b), c);
}

// Cyclically tight canonical circuit.  Throws if the circuit is trivial.
inline EdgePath tighten_circuit(const Graph& g, const EdgePath& p0) {
  EdgePath p = tighten_path(g, p0);
  if (!p.is_closed(g)) throw std::invalid_argument("tighten_circuit: not closed");
  while (p.steps.size() >= 2 && p.steps.front() == -p.steps.back()) {
    p.steps.pop_back();
    p.steps.erase(p.steps.begin());
    p.start = p.steps.empty() ? p.start : g.init_of(p.steps.front());
  }
  if (p.steps.empty())
    throw std::invalid_argument("tighten_circuit: homotopically trivial circuit");
  // canonical rotation: least oriented-edge sequence
  std::vector<int> best = p.steps, cur = p.steps;
  for (size_t i = 1; i < p.steps.size(); ++i) {
    std::rotate(cur.begin(), cur.begin() + 1, cur.end());
    if (cur < best) best = cur;
  }
  EdgePath out;
  out.steps = best;
  out.start = g.init_of(best.front());
  return out;
}

// Core of a subgraph: edges crossed by some circuit, via iterated
// valence-one pruning.  Input and output are sorted edge-id sets.
inline std::vector<int> core_subgraph(const Graph& g, std::vector<int> K) {
  std::sort(K.begin(), K.end());
  bool changed = true;
  while (changed) {
    changed = false;
    // valence of v within K: count incident oriented edges
    auto valence_in = [&](int v) {
      int c = 0;
      for (int e : K) {
        if (g.edges[e].init == v) ++c;
        if (g.edges[e].term == v) ++c;
      }
      return c;
    };
    std::vector<int> keep;
    for (int e : K) {
      if (valence_in(g.edges[e].init) <= 1 || valence_in(g.edges[e].term) <= 1) {
        changed = true;
      } else {
        keep.push_back(e);
      }
    }
    K = keep;
  }
  return K;
}

// ---------------------------------------------------------------------------
// Markings.  forward: one edge path per basis element of F_n (a loop at the
// base vertex); backward: one word per edge, so that reading a path through
// backward computes its image in F_n.  backward ∘ forward must be the
// identity on the basis.
// ---------------------------------------------------------------------------

struct Marking {
  int base = 0;
  std::vector<EdgePath> forward;  // per generator
  std::vector<Word> backward;     // per (positively oriented) edge
};

struct MarkedGraph {
  Graph graph;
  Marking marking;
  int rank = 0;
};

inline Word read_path(const MarkedGraph& mg, const EdgePath& p) {
  Word out;
  for (int s : p.steps) {
    const Word& w = mg.marking.backward.at(Graph::edge_id(s));
    if (s > 0)
      out.insert(out.end(), w.begin(), w.end());
    else {
      Word iw = inverse(w);
      out.insert(out.end(), iw.begin(), iw.end());
    }
  }
  return reduce(out);
}

inline bool verify_marking(const MarkedGraph& mg) {
  if (static_cast<int>(mg.marking.forward.size()) != mg.rank) return false;
  if (static_cast<int>(mg.marking.backward.size()) != mg.graph.num_edges())
    return false;
  for (int i = 1; i <= mg.rank; ++i) {
    const EdgePath& p = mg.marking.forward[i - 1];
    if (!p.valid(mg.graph) || p.start != mg.marking.base || !p.is_closed(mg.graph))
      return false;
    if (read_path(mg, p) != Word{i}) return false;
  }
  return true;
}

// The rose R_n with the identity marking.
inline MarkedGraph rose(int rank) {
  MarkedGraph mg;
  mg.rank = rank;
  mg.graph.num_vertices = 1;
  for (int i = 0; i < rank; ++i) mg.graph.edges.push_back({0, 0});
  mg.marking.base = 0;
  for (int i = 0; i < rank; ++i) {
    mg.marking.forward.push_back(EdgePath{0, {Graph::oriented(i)}});
    mg.marking.backward.push_back(Word{i + 1});
  }
  return mg;
}

// Translation of paths between graphs: a vertex map plus, for each old
// edge, its image path in the new graph.
struct PathCorrespondence {
  std::vector<int> vertex_map;          // old vertex -> new vertex
  std::vector<EdgePath> edge_paths;     // per old edge (positive orientation)

  EdgePath apply(const Graph& new_graph, const EdgePath& p) const {
    EdgePath out;
    out.start = vertex_map.at(p.start);
    for (int s : p.steps) {
      const EdgePath& q = edge_paths.at(Graph::edge_id(s));
      if (s > 0)
        out.steps.insert(out.steps.end(), q.steps.begin(), q.steps.end());
      else {
        EdgePath iq = path_inverse(new_graph, q);
        out.steps.insert(out.steps.end(), iq.steps.begin(), iq.steps.end());
      }
    }
    return tighten_path(new_graph, out);
  }
};

// Collapse a forest (edge set containing no circuit) in a marked graph.
// Returns the new marked graph together with forward and backward path
// correspondences.  Surviving edges keep their relative order (ids shift).
struct CollapseResult {
  MarkedGraph collapsed;
  PathCorrespondence forward;             // old -> new
  PathCorrespondence backward;            // new -> old
  std::vector<int> surviving_edge_of_new; // new edge id -> old edge id
  std::vector<int> new_edge_of_old;       // old edge id -> new edge id or -1
};

inline bool is_forest(const Graph& g, const std::vector<int>& F) {
  // no circuit: within each component of F, edges = vertices - 1
  std::set<int> fs(F.begin(), F.end());
  if (fs.size() != F.size()) return false;
  auto comp = g.edge_components(F);
  std::map<int, std::set<int>> verts;
  std::map<int, int> count;
  for (int e : F) {
    if (g.edges[e].init == g.edges[e].term) return false;  // loop
    verts[comp[e]].insert(g.edges[e].init);
    verts[comp[e]].insert(g.edges[e].term);
    count[comp[e]]++;
  }
  for (auto& [c, vs] : verts)
    if (count[c] != static_cast<int>(vs.size()) - 1) return false;
  return true;
}

inline CollapseResult collapse_forest(const MarkedGraph& mg,
                                      const std::vector<int>& forest) {
  const Graph& g = mg.graph;
  if (!is_forest(g, forest))
    throw std::invalid_argument("collapse_forest: edge set contains a circuit");
  std::set<int> F(forest.begin(), forest.end());

  // Union-find over vertices; forest components collapse to single vertices.
  std::vector<int> rep(g.num_vertices);
  std::iota(rep.begin(), rep.end(), 0);
  std::function<int(int)> find = [&](int v) {
    while (rep[v] != v) v = rep[v] = rep[rep[v]];
    return v;
  };
  for (int e : F) {
    int a = find(g.edges[e].init), b = find(g.edges[e].term);
    if (a != b) rep[std::max(a, b)] = std::min(a, b);
  }
  // Prefer the marking base as its component representative so that read
  // words compose exactly.
  // (Representative choice only matters through the tree paths below.)

  std::vector<int> new_id(g.num_vertices, -1);
  int nv = 0;
  for (int v = 0; v < g.num_vertices; ++v)
    if (find(v) == v) new_id[v] = nv++;

  CollapseResult out;
  Graph ng;
  ng.num_vertices = nv;
  out.new_edge_of_old.assign(g.num_edges(), -1);
  for (int e = 0; e < g.num_edges(); ++e) {
    if (F.count(e)) continue;
    out.new_edge_of_old[e] = ng.num_edges();
    out.surviving_edge_of_new.push_back(e);
    ng.edges.push_back({new_id[find(g.edges[e].init)], new_id[find(g.edges[e].term)]});
  }

  // forward correspondence: delete forest edges
  out.forward.vertex_map.resize(g.num_vertices);
  for (int v = 0; v < g.num_vertices; ++v) out.forward.vertex_map[v] = new_id[find(v)];
  out.forward.edge_paths.resize(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) {
    if (F.count(e))
      out.forward.edge_paths[e] = EdgePath::trivial(new_id[find(g.edges[e].init)]);
    else
      out.forward.edge_paths[e] =
          EdgePath{new_id[find(g.edges[e].init)], {Graph::oriented(out.new_edge_of_old[e])}};
  }

  // backward correspondence: a new edge maps to (tree path) old-edge (tree path)
  // where tree paths run from a representative point of each forest
  // component.  The component containing the marking base is rooted at the
  // base itself so that readings of based loops stay exact.
  std::map<int, int> rep_point;       // union-find root -> chosen old vertex
  std::map<int, EdgePath> tree_path;  // old vertex -> path rep_point -> v in F
  {
    std::map<int, std::vector<std::pair<int, int>>> adj;  // v -> (edge, other)
    std::set<int> fverts;
    for (int e : F) {
      adj[g.edges[e].init].push_back({e, g.edges[e].term});
      adj[g.edges[e].term].push_back({e, g.edges[e].init});
      fverts.insert(g.edges[e].init);
      fverts.insert(g.edges[e].term);
    }
    for (int v : fverts) {
      int r = find(v);
      if (!rep_point.count(r)) rep_point[r] = (r == find(mg.marking.base) &&
                                               fverts.count(mg.marking.base))
                                                  ? mg.marking.base
                                                  : r;
    }
    for (auto [r, p0] : rep_point) {
      tree_path[p0] = EdgePath::trivial(p0);
      std::queue<int> q;
      q.push(p0);
      while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (auto [e, w] : adj[u]) {
          if (tree_path.count(w)) continue;
          EdgePath p = tree_path[u];
          p.steps.push_back(g.edges[e].init == u ? Graph::oriented(e)
                                                 : Graph::oriented(e, false));
          tree_path[w] = p;
          q.push(w);
        }
      }
    }
  }
  auto root_to = [&](int old_v) -> EdgePath {
    auto it = tree_path.find(old_v);
    if (it != tree_path.end()) return it->second;
    return EdgePath::trivial(old_v);
  };

  out.backward.vertex_map.resize(nv);
  for (int v = 0; v < g.num_vertices; ++v)
    if (find(v) == v)
      out.backward.vertex_map[new_id[v]] = rep_point.count(v) ? rep_point[v] : v;
  out.backward.edge_paths.resize(ng.num_edges());
  for (int ne = 0; ne < ng.num_edges(); ++ne) {
    int e = out.surviving_edge_of_new[ne];
    EdgePath pre = root_to(g.edges[e].init);       // root -> init
    EdgePath post = root_to(g.edges[e].term);      // root -> term
    EdgePath p = pre;
    p.steps.push_back(Graph::oriented(e));
    EdgePath ipost = path_inverse(g, post);
    p.steps.insert(p.steps.end(), ipost.steps.begin(), ipost.steps.end());
    out.backward.edge_paths[ne] = tighten_path(g, p);
  }

  // transported marking
  MarkedGraph nmg;
  nmg.graph = ng;
  nmg.rank = mg.rank;
  nmg.marking.base = new_id[find(mg.marking.base)];
  for (const EdgePath& p : mg.marking.forward)
    nmg.marking.forward.push_back(out.forward.apply(ng, p));
  for (int ne = 0; ne < ng.num_edges(); ++ne)
    nmg.marking.backward.push_back(read_path(mg, out.backward.edge_paths[ne]));
  out.collapsed = nmg;
  return out;
}

}  // namespace traintrack
