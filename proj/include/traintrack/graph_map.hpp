#pragma once

// Topological representatives f: G -> G on marked graphs: edge images,
// filtrations, the derivative map on directions, gates and legality,
// transition matrices with stratum classification, and the relative train
// track checks.

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "traintrack/graph.hpp"
#include "traintrack/intpoly.hpp"
#include "traintrack/word.hpp"

namespace traintrack {

inline int dir_index(int oe) { return oe > 0 ? 2 * (oe - 1) : 2 * (-oe - 1) + 1; }
inline int dir_of_index(int idx) { return idx % 2 == 0 ? idx / 2 + 1 : -(idx / 2 + 1); }

struct GraphMap {
  MarkedGraph domain;
  std::vector<EdgePath> edge_images;  // per edge, positive orientation; tight, nonempty
  std::vector<int> vertex_images;
  std::vector<std::vector<int>> strata;  // ascending filtration, sorted edge ids

  // caches, built by make()
  std::vector<int> stratum_of;  // edge -> stratum position (0-based)
  std::vector<int> df;          // direction index -> direction (oriented edge)
  std::vector<int> gate_of;     // direction index -> gate id; gates share base

  const Graph& graph() const { return domain.graph; }
  int num_strata() const { return static_cast<int>(strata.size()); }

  // f on a direction: the initial direction of the image of its edge.
  int derivative(int oe) const { return df.at(dir_index(oe)); }

  int stratum_of_direction(int oe) const { return stratum_of.at(Graph::edge_id(oe)); }

  bool same_gate(int d1, int d2) const {
    return gate_of.at(dir_index(d1)) == gate_of.at(dir_index(d2));
  }

  // A turn (unordered pair of directions at a common base) is legal iff the
  // directions lie in distinct gates.  Degenerate turns are illegal.
  bool turn_is_legal(int d1, int d2) const { return !same_gate(d1, d2); }

  static GraphMap make(MarkedGraph domain, std::vector<EdgePath> edge_images,
                       std::vector<int> vertex_images,
                       std::vector<std::vector<int>> strata = {});
};

inline EdgePath image_of_path(const GraphMap& f, const EdgePath& p) {
  if (!p.valid(f.graph())) throw std::invalid_argument("image_of_path: invalid path");
  EdgePath out;
  out.start = f.vertex_images.at(p.start);
  for (int s : p.steps) {
    const EdgePath& q = f.edge_images.at(Graph::edge_id(s));
    if (s > 0)
      out.steps.insert(out.steps.end(), q.steps.begin(), q.steps.end());
    else {
      EdgePath iq = path_inverse(f.graph(), q);
      out.steps.insert(out.steps.end(), iq.steps.begin(), iq.steps.end());
    }
  }
  return tighten_path(f.graph(), out);
}

inline EdgePath iterate_image(const GraphMap& f, EdgePath p, int k) {
  for (int i = 0; i < k; ++i) p = image_of_path(f, p);
  return p;
}

inline GraphMap GraphMap::make(MarkedGraph domain, std::vector<EdgePath> edge_images,
                               std::vector<int> vertex_images,
                               std::vector<std::vector<int>> strata) {
  GraphMap f;
  f.domain = std::move(domain);
  f.edge_images = std::move(edge_images);
  f.vertex_images = std::move(vertex_images);
  const Graph& g = f.domain.graph;
  if (static_cast<int>(f.edge_images.size()) != g.num_edges())
    throw std::invalid_argument("GraphMap: one image per edge required");
  if (static_cast<int>(f.vertex_images.size()) != g.num_vertices)
    throw std::invalid_argument("GraphMap: one image per vertex required");
  for (int e = 0; e < g.num_edges(); ++e) {
    const EdgePath& im = f.edge_images[e];
    if (im.is_trivial()) throw std::invalid_argument("GraphMap: trivial edge image");
    if (!im.valid(g) || !im.is_tight())
      throw std::invalid_argument("GraphMap: edge image not a tight path");
    if (im.start != f.vertex_images[g.edges[e].init] ||
        im.end(g) != f.vertex_images[g.edges[e].term])
      throw std::invalid_argument("GraphMap: edge image endpoints disagree with vertex images");
  }

  // filtration: default single stratum
  if (strata.empty()) {
    std::vector<int> all(g.num_edges());
    std::iota(all.begin(), all.end(), 0);
    strata.push_back(all);
  }
  f.strata = std::move(strata);
  f.stratum_of.assign(g.num_edges(), -1);
  for (int s = 0; s < f.num_strata(); ++s) {
    std::sort(f.strata[s].begin(), f.strata[s].end());
    for (int e : f.strata[s]) {
      if (e < 0 || e >= g.num_edges() || f.stratum_of[e] != -1)
        throw std::invalid_argument("GraphMap: bad filtration");
      f.stratum_of[e] = s;
    }
  }
  for (int e = 0; e < g.num_edges(); ++e)
    if (f.stratum_of[e] == -1) throw std::invalid_argument("GraphMap: filtration misses an edge");
  for (int e = 0; e < g.num_edges(); ++e)
    for (int s : f.edge_images[e].steps)
      if (f.stratum_of[Graph::edge_id(s)] > f.stratum_of[e])
        throw std::invalid_argument("GraphMap: filtration is not f-invariant");

  // derivative table
  const int nd = 2 * g.num_edges();
  f.df.assign(nd, 0);
  for (int e = 0; e < g.num_edges(); ++e) {
    f.df[dir_index(Graph::oriented(e))] = f.edge_images[e].steps.front();
    EdgePath rev = path_inverse(g, f.edge_images[e]);
    f.df[dir_index(Graph::oriented(e, false))] = rev.steps.front();
  }

  // gates: d1 ~ d2 (same base) iff Df^k identifies them for some k; if the
  // orbits ever meet at equal times they do so within nd steps.
  {
    std::vector<int> rep(nd);
    std::iota(rep.begin(), rep.end(), 0);
    std::function<int(int)> find = [&](int v) {
      while (rep[v] != v) v = rep[v] = rep[rep[v]];
      return v;
    };
    std::vector<int> cur(nd);  // Df^k as direction-index map
    std::iota(cur.begin(), cur.end(), 0);
    for (int k = 0; k <= nd; ++k) {
      for (int i = 0; i < nd; ++i)
        for (int j = i + 1; j < nd; ++j) {
          if (g.init_of(dir_of_index(i)) != g.init_of(dir_of_index(j))) continue;
          if (cur[i] == cur[j]) {
            int a = find(i), b = find(j);
            if (a != b) rep[std::max(a, b)] = std::min(a, b);
          }
        }
      for (int i = 0; i < nd; ++i) cur[i] = dir_index(f.df[cur[i]]);
    }
    f.gate_of.assign(nd, -1);
    std::map<int, int> ids;
    for (int i = 0; i < nd; ++i) {
      int r = find(i);
      auto [it, fresh] = ids.try_emplace(r, static_cast<int>(ids.size()));
      f.gate_of[i] = it->second;
    }
  }
  return f;
}

// Gate partition at a vertex, as sorted direction lists.
inline std::vector<std::vector<int>> gate_partition(const GraphMap& f, int v) {
  std::map<int, std::vector<int>> blocks;
  for (int d : f.graph().directions_at(v)) blocks[f.gate_of[dir_index(d)]].push_back(d);
  std::vector<std::vector<int>> out;
  for (auto& [id, ds] : blocks) {
    std::sort(ds.begin(), ds.end());
    out.push_back(ds);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Strata
// ---------------------------------------------------------------------------

enum class StratumKind { Zero, EG, NegFixed, NegPeriodic, NegLinear, NegGeneral, Reducible };

inline std::string stratum_kind_name(StratumKind k) {
  switch (k) {
    case StratumKind::Zero: return "zero";
    case StratumKind::EG: return "EG";
    case StratumKind::NegFixed: return "NEG-fixed";
    case StratumKind::NegPeriodic: return "NEG-periodic";
    case StratumKind::NegLinear: return "NEG-linear";
    case StratumKind::NegGeneral: return "NEG-general";
    case StratumKind::Reducible: return "reducible";
  }
  return "?";
}

struct LinearEdgeData {
  int edge = -1;
  EdgePath suffix;     // u with f(E) = E.u
  EdgePath root;       // closed root-free w with u = [w^d]
  EdgePath root_conj;  // c and rho with w = c.rho.c~, rho cyclically tight
  EdgePath root_core;
  int exponent = 0;  // d, sign carried by the orientation of root
  ConjClass axis;    // unoriented class of the root, read through the marking
};

struct StratumInfo {
  int index = 0;  // 0-based position in the filtration
  std::vector<int> edges;
  StratumKind kind = StratumKind::Zero;
  IntMatrix matrix;
  IntPoly charpoly;      // EG only
  double pf_value = 0.0; // EG only
  bool aperiodic = false;
  bool normal_form = false;  // NEG: every edge E has f(E) = E'.u with u lower
  std::vector<LinearEdgeData> linear;  // NEG-linear single edges
  std::string note;
};

inline IntMatrix transition_matrix(const GraphMap& f, int stratum) {
  const auto& es = f.strata.at(stratum);
  const int n = static_cast<int>(es.size());
  IntMatrix m(n, std::vector<std::int64_t>(n, 0));
  std::map<int, int> pos;
  for (int i = 0; i < n; ++i) pos[es[i]] = i;
  for (int i = 0; i < n; ++i)
    for (int s : f.edge_images[es[i]].steps) {
      auto it = pos.find(Graph::edge_id(s));
      if (it != pos.end()) m[i][it->second]++;
    }
  return m;
}

namespace detail {

inline bool matrix_is_zero(const IntMatrix& m) {
  for (auto& row : m)
    for (auto x : row)
      if (x) return false;
  return true;
}

inline bool matrix_is_irreducible(const IntMatrix& m) {
  const int n = static_cast<int>(m.size());
  if (n == 0) return false;
  if (n == 1) return m[0][0] > 0;
  // strong connectivity of the positive-entry digraph
  auto reach = [&](bool transpose) {
    std::vector<bool> vis(n, false);
    std::vector<int> stk{0};
    vis[0] = true;
    while (!stk.empty()) {
      int v = stk.back();
      stk.pop_back();
      for (int w = 0; w < n; ++w) {
        bool arc = transpose ? m[w][v] > 0 : m[v][w] > 0;
        if (arc && !vis[w]) {
          vis[w] = true;
          stk.push_back(w);
        }
      }
    }
    return vis;
  };
  auto a = reach(false), b = reach(true);
  for (int i = 0; i < n; ++i)
    if (!a[i] || !b[i]) return false;
  return true;
}

inline bool matrix_is_permutation(const IntMatrix& m) {
  const int n = static_cast<int>(m.size());
  for (int i = 0; i < n; ++i) {
    int row = 0, col = 0;
    for (int j = 0; j < n; ++j) {
      row += static_cast<int>(m[i][j]);
      col += static_cast<int>(m[j][i]);
      if (m[i][j] < 0 || m[i][j] > 1) return false;
    }
    if (row != 1 || col != 1) return false;
  }
  return true;
}

inline bool matrix_is_aperiodic(const IntMatrix& m) {
  // primitive test: some boolean power has all entries positive
  const int n = static_cast<int>(m.size());
  std::vector<std::vector<bool>> b(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b[i][j] = m[i][j] > 0;
  for (int step = 0; step <= n * n + 1; ++step) {
    bool all = true;
    for (int i = 0; i < n && all; ++i)
      for (int j = 0; j < n && all; ++j)
        if (!b[i][j]) all = false;
    if (all) return true;
    std::vector<std::vector<bool>> nb(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        if (b[i][k])
          for (int j = 0; j < n; ++j)
            if (m[k][j] > 0) nb[i][j] = true;
    b = nb;
  }
  return false;
}

// Path-level cyclic reduction: p = conj . core . conj^{-1}, core cyclically tight.
inline std::pair<EdgePath, EdgePath> cyclic_reduce_path(const Graph& g, EdgePath p) {
  p = tighten_path(g, p);
  size_t a = 0, b = p.steps.size();
  while (b - a >= 2 && p.steps[a] == -p.steps[b - 1]) {
    ++a;
    --b;
  }
  EdgePath conj{p.start, std::vector<int>(p.steps.begin(), p.steps.begin() + a)};
  EdgePath core;
  core.steps.assign(p.steps.begin() + a, p.steps.begin() + b);
  core.start = core.steps.empty() ? conj.end(g) : g.init_of(core.steps.front());
  return {core, conj};
}

// Maximal root of a closed cyclically tight path: p = root^d.
inline std::pair<EdgePath, int> path_root(const Graph& g, const EdgePath& p) {
  const int n = static_cast<int>(p.steps.size());
  for (int d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    bool ok = true;
    for (int i = d; i < n && ok; ++i)
      if (p.steps[i] != p.steps[i % d]) ok = false;
    if (ok) {
      EdgePath r{p.start, std::vector<int>(p.steps.begin(), p.steps.begin() + d)};
      if (r.is_closed(g)) return {r, n / d};
    }
  }
  return {p, 1};
}

}  // namespace detail

// Full classification.  Pre: each transition matrix irreducible or zero
// (run build_filtration first); violations come back as kind Reducible.
inline std::vector<StratumInfo> classify_strata(const GraphMap& f) {
  std::vector<StratumInfo> out;
  const Graph& g = f.graph();
  for (int s = 0; s < f.num_strata(); ++s) {
    StratumInfo info;
    info.index = s;
    info.edges = f.strata[s];
    info.matrix = transition_matrix(f, s);
    if (detail::matrix_is_zero(info.matrix)) {
      info.kind = StratumKind::Zero;
      out.push_back(std::move(info));
      continue;
    }
    if (!detail::matrix_is_irreducible(info.matrix)) {
      info.kind = StratumKind::Reducible;
      info.note = "transition matrix reducible; refine the filtration";
      out.push_back(std::move(info));
      continue;
    }
    if (detail::matrix_is_permutation(info.matrix)) {
      // NEG.  Normal form: f(E_i) = E_{sigma(i)} . u_i with u_i lower.
      bool normal = true;
      bool all_trivial_suffix = true;
      bool all_fixed = true;
      std::vector<EdgePath> suffixes(info.edges.size());
      for (size_t i = 0; i < info.edges.size(); ++i) {
        int e = info.edges[i];
        const EdgePath& im = f.edge_images[e];
        int first = im.steps.front();
        bool first_in_stratum =
            f.stratum_of[Graph::edge_id(first)] == s && first > 0 &&
            std::find(info.edges.begin(), info.edges.end(), Graph::edge_id(first)) !=
                info.edges.end();
        if (!first_in_stratum) {
          normal = false;
          continue;
        }
        EdgePath u;
        u.start = g.term_of(first);
        u.steps.assign(im.steps.begin() + 1, im.steps.end());
        for (int st : u.steps)
          if (f.stratum_of[Graph::edge_id(st)] >= s) normal = false;
        suffixes[i] = u;
        if (!u.is_trivial()) all_trivial_suffix = false;
        if (!(Graph::edge_id(first) == e && u.is_trivial())) all_fixed = false;
      }
      info.normal_form = normal;
      if (normal && all_fixed)
        info.kind = StratumKind::NegFixed;
      else if (normal && all_trivial_suffix)
        info.kind = StratumKind::NegPeriodic;
      else if (normal && info.edges.size() == 1) {
        int e = info.edges[0];
        const EdgePath& u = suffixes[0];
        // linear iff u is a closed Nielsen path
        bool closed = u.is_closed(g) && u.start == g.term_of(Graph::oriented(e));
        bool nielsen = closed && image_of_path(f, u) == u;
        if (nielsen) {
          auto [core, conj] = detail::cyclic_reduce_path(g, u);
          auto [root_core, d] = detail::path_root(g, core);
          EdgePath w = concat_paths(g, conj, root_core, path_inverse(g, conj));
          LinearEdgeData ld;
          ld.edge = e;
          ld.suffix = u;
          ld.root = w;
          ld.root_conj = conj;
          ld.root_core = root_core;
          ld.exponent = d;
          ld.axis = ConjClass::of(read_path(f.domain, root_core), false);
          info.kind = StratumKind::NegLinear;
          info.linear.push_back(std::move(ld));
        } else {
          info.kind = StratumKind::NegGeneral;
        }
      } else {
        info.kind = StratumKind::NegGeneral;
      }
      out.push_back(std::move(info));
      continue;
    }
    // irreducible, not a permutation matrix: EG
    info.kind = StratumKind::EG;
    info.charpoly = char_poly(info.matrix);
    info.pf_value = pf_eigenvalue(info.matrix);
    info.aperiodic = detail::matrix_is_aperiodic(info.matrix);
    out.push_back(std::move(info));
  }
  return out;
}

// Refine the filtration so that every stratum is irreducible or zero:
// strongly connected components of the crossing relation, topologically
// ordered, ties broken by (old stratum, least edge id).
inline GraphMap build_filtration(const GraphMap& f) {
  const Graph& g = f.graph();
  const int n = g.num_edges();
  std::vector<std::set<int>> crosses(n);
  for (int e = 0; e < n; ++e)
    for (int s : f.edge_images[e].steps) crosses[e].insert(Graph::edge_id(s));

  // Tarjan SCC
  std::vector<int> idx(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> onstack(n, false);
  std::vector<int> stk;
  int counter = 0, ncomp = 0;
  std::function<void(int)> dfs = [&](int v) {
    idx[v] = low[v] = counter++;
    stk.push_back(v);
    onstack[v] = true;
    for (int w : crosses[v]) {
      if (idx[w] == -1) {
        dfs(w);
        low[v] = std::min(low[v], low[w]);
      } else if (onstack[w]) {
        low[v] = std::min(low[v], idx[w]);
      }
    }
    if (low[v] == idx[v]) {
      while (true) {
        int w = stk.back();
        stk.pop_back();
        onstack[w] = false;
        comp[w] = ncomp;
        if (w == v) break;
      }
      ++ncomp;
    }
  };
  for (int v = 0; v < n; ++v)
    if (idx[v] == -1) dfs(v);

  std::vector<std::vector<int>> members(ncomp);
  for (int e = 0; e < n; ++e) members[comp[e]].push_back(e);
  std::vector<std::set<int>> down(ncomp);  // SCC -> SCCs it crosses (below it)
  for (int e = 0; e < n; ++e)
    for (int w : crosses[e])
      if (comp[w] != comp[e]) down[comp[e]].insert(comp[w]);

  // emit bottom-up; a component is ready when everything it crosses is out
  std::vector<std::vector<int>> new_strata;
  std::vector<bool> emitted(ncomp, false);
  auto key = [&](int c) {
    int old_stratum = 0, least = n;
    for (int e : members[c]) {
      old_stratum = std::max(old_stratum, f.stratum_of[e]);
      least = std::min(least, e);
    }
    return std::make_pair(old_stratum, least);
  };
  for (int done = 0; done < ncomp; ++done) {
    int best = -1;
    std::pair<int, int> best_key{};
    for (int c = 0; c < ncomp; ++c) {
      if (emitted[c]) continue;
      bool ready = true;
      for (int d : down[c])
        if (!emitted[d]) ready = false;
      if (!ready) continue;
      auto k = key(c);
      if (best == -1 || k < best_key) {
        best = c;
        best_key = k;
      }
    }
    if (best == -1) throw std::logic_error("build_filtration: cycle in condensation");
    emitted[best] = true;
    new_strata.push_back(members[best]);
  }
  return GraphMap::make(f.domain, f.edge_images, f.vertex_images, new_strata);
}

// ---------------------------------------------------------------------------
// Periodic orbit data and RTT checks
// ---------------------------------------------------------------------------

struct OrbitData {
  // period if periodic, 0 if strictly preperiodic
  std::vector<int> vertex_period;
  std::vector<int> direction_period;  // by direction index

  std::vector<int> periodic_vertices() const {
    std::vector<int> out;
    for (size_t v = 0; v < vertex_period.size(); ++v)
      if (vertex_period[v] > 0) out.push_back(static_cast<int>(v));
    return out;
  }
};

namespace detail {
// periods in a functional graph: > 0 on cycles, 0 off them
inline std::vector<int> functional_periods(const std::vector<int>& next) {
  const int n = static_cast<int>(next.size());
  std::vector<int> period(n, 0);
  std::vector<int> color(n, 0);
  for (int s = 0; s < n; ++s) {
    if (color[s]) continue;
    std::vector<int> path;
    int v = s;
    while (color[v] == 0) {
      color[v] = 1;
      path.push_back(v);
      v = next[v];
    }
    if (color[v] == 1) {
      // found a new cycle; measure its length
      int len = 0, w = v;
      do {
        ++len;
        w = next[w];
      } while (w != v);
      int u = v;
      do {
        period[u] = len;
        u = next[u];
      } while (u != v);
    }
    for (int u : path) color[u] = 2;
  }
  return period;
}
}  // namespace detail

inline OrbitData periodic_orbit_data(const GraphMap& f) {
  OrbitData od;
  od.vertex_period = detail::functional_periods(f.vertex_images);
  const int nd = 2 * f.graph().num_edges();
  std::vector<int> dnext(nd);
  for (int i = 0; i < nd; ++i) dnext[i] = dir_index(f.df[i]);
  od.direction_period = detail::functional_periods(dnext);
  return od;
}

// Is the subpath r-legal: no illegal turn with both directions in H_r.
inline bool is_r_legal(const GraphMap& f, const EdgePath& p, int stratum) {
  for (size_t i = 0; i + 1 < p.steps.size(); ++i) {
    int d1 = -p.steps[i], d2 = p.steps[i + 1];
    if (f.stratum_of_direction(d1) == stratum && f.stratum_of_direction(d2) == stratum &&
        !f.turn_is_legal(d1, d2))
      return false;
  }
  return true;
}

struct RttReport {
  struct StratumCheck {
    int stratum = 0;
    bool rtt_i = true, rtt_ii = true, rtt_iii = true;
    std::string detail;
  };
  std::vector<StratumCheck> eg;
  std::vector<std::string> notes;
  bool pass = true;
};

// Components of G_{r-1} and the induced component dynamics, for RTT-ii.
inline RttReport check_rtt(const GraphMap& f) {
  RttReport rep;
  const Graph& g = f.graph();
  auto infos = classify_strata(f);
  OrbitData od = periodic_orbit_data(f);

  for (const auto& info : infos) {
    if (info.kind == StratumKind::Reducible) {
      rep.pass = false;
      rep.notes.push_back("stratum " + std::to_string(info.index + 1) +
                          " has a reducible transition matrix");
      continue;
    }
    if (info.kind == StratumKind::Zero) {
      // RTT-ii side condition: images of zero-stratum edges must never die
      for (int e : info.edges) {
        EdgePath p{g.edges[e].init, {Graph::oriented(e)}};
        for (int k = 0; k < 2 * g.num_edges() + 2; ++k) {
          p = image_of_path(f, p);
          if (p.is_trivial()) {
            rep.pass = false;
            rep.notes.push_back("zero-stratum edge " + std::to_string(e) +
                                " has a trivial iterated image");
            break;
          }
        }
      }
      continue;
    }
    if (info.kind != StratumKind::EG) continue;

    RttReport::StratumCheck chk;
    chk.stratum = info.index;
    const int r = info.index;

    // RTT-i: Df keeps directions of H_r (based at vertices) in H_r.
    for (int e : info.edges)
      for (int oe : {Graph::oriented(e), Graph::oriented(e, false)}) {
        int im = f.derivative(oe);
        if (f.stratum_of_direction(im) != r) {
          chk.rtt_i = false;
          chk.detail += "Df leaves the stratum at direction " + std::to_string(oe) + "; ";
        }
      }

    // RTT-ii via the finite reduction: for every non-wandering component C of
    // G_{r-1}, the vertices of H_r in C are periodic points.
    {
      std::vector<int> lower_edges;
      for (int s = 0; s < r; ++s)
        lower_edges.insert(lower_edges.end(), f.strata[s].begin(), f.strata[s].end());
      if (!lower_edges.empty()) {
        auto comp = g.edge_components(lower_edges);
        int ncomp = 1 + *std::max_element(comp.begin(), comp.end());
        // component map under f
        std::vector<int> cnext(ncomp, -1);
        for (int e : lower_edges) {
          int target = comp[Graph::edge_id(f.edge_images[e].steps.front())];
          cnext[comp[e]] = target;
        }
        std::vector<int> cperiod = detail::functional_periods(cnext);
        // vertices of each component
        std::vector<std::set<int>> cverts(ncomp);
        for (int e : lower_edges) {
          cverts[comp[e]].insert(g.edges[e].init);
          cverts[comp[e]].insert(g.edges[e].term);
        }
        std::set<int> hr_verts;
        for (int e : info.edges) {
          hr_verts.insert(g.edges[e].init);
          hr_verts.insert(g.edges[e].term);
        }
        for (int c = 0; c < ncomp; ++c) {
          if (cperiod[c] == 0) continue;  // wandering
          for (int v : cverts[c]) {
            if (!hr_verts.count(v)) continue;
            if (od.vertex_period[v] == 0) {
              chk.rtt_ii = false;
              chk.detail += "vertex " + std::to_string(v) +
                            " of the stratum lies in a non-wandering lower component "
                            "but is not periodic; ";
            }
          }
        }
      }
    }

    // RTT-iii checked on edge images.
    for (int e : info.edges) {
      if (!is_r_legal(f, f.edge_images[e], r)) {
        chk.rtt_iii = false;
        chk.detail += "image of edge " + std::to_string(e) + " is not r-legal; ";
      }
    }

    if (!(chk.rtt_i && chk.rtt_ii && chk.rtt_iii)) rep.pass = false;
    rep.eg.push_back(std::move(chk));
  }
  return rep;
}

// f^k as a GraphMap (same graph, same marking, same filtration).
inline GraphMap iterate_map(const GraphMap& f, int k) {
  if (k < 1) throw std::invalid_argument("iterate_map: k must be >= 1");
  std::vector<EdgePath> images;
  const Graph& g = f.graph();
  for (int e = 0; e < g.num_edges(); ++e) {
    EdgePath p{g.edges[e].init, {Graph::oriented(e)}};
    images.push_back(iterate_image(f, p, k));
  }
  std::vector<int> vimg(g.num_vertices);
  for (int v = 0; v < g.num_vertices; ++v) {
    int w = v;
    for (int i = 0; i < k; ++i) w = f.vertex_images[w];
    vimg[v] = w;
  }
  for (const auto& p : images)
    if (p.is_trivial())
      throw std::invalid_argument("iterate_map: an edge image collapses");
  return GraphMap::make(f.domain, images, vimg, f.strata);
}

// The automorphism of F_n induced through the marking (up to inner, pinned
// down by a deterministic path from the base to its image).
inline BasisAutomorphism induced_automorphism(const GraphMap& f) {
  const MarkedGraph& mg = f.domain;
  const Graph& g = mg.graph;
  int b = mg.marking.base, fb = f.vertex_images[b];
  // BFS path from base to f(base)
  EdgePath connect = EdgePath::trivial(b);
  if (b != fb) {
    std::vector<int> prev_dir(g.num_vertices, 0);
    std::vector<int> prev(g.num_vertices, -1);
    std::vector<bool> vis(g.num_vertices, false);
    std::queue<int> q;
    q.push(b);
    vis[b] = true;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int d : g.directions_at(v)) {
        int w = g.term_of(d);
        if (!vis[w]) {
          vis[w] = true;
          prev[w] = v;
          prev_dir[w] = d;
          q.push(w);
        }
      }
    }
    if (!vis[fb]) throw std::logic_error("induced_automorphism: disconnected graph");
    std::vector<int> steps;
    for (int v = fb; v != b; v = prev[v]) steps.push_back(prev_dir[v]);
    std::reverse(steps.begin(), steps.end());
    connect = EdgePath{b, steps};
  }
  BasisAutomorphism phi;
  phi.rank = mg.rank;
  for (int i = 0; i < mg.rank; ++i) {
    EdgePath im = image_of_path(f, mg.marking.forward[i]);
    EdgePath loop = concat_paths(g, connect, im, path_inverse(g, connect));
    phi.images.push_back(read_path(mg, loop));
  }
  return phi;
}

}  // namespace traintrack
