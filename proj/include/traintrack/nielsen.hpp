#pragma once

// Nielsen paths and classes, principal periodic points, rotationless
// detection and the minimal rotationless exponent.  Searches are bounded and
// report their bounds honestly.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "traintrack/graph_map.hpp"

namespace traintrack {

struct NielsenPath {
  EdgePath path;
  int period = 1;   // least p with f^p_#(path) = path
  int height = 0;   // stratum index (0-based)
  bool indivisible = true;
  std::optional<std::pair<EdgePath, EdgePath>> eg_decomposition;  // alpha, beta
};

// The symbolic family E w^k E~ (k != 0) attached to a linear edge, plus the
// per-edge suffix check result.
struct NegNielsenFamily {
  int edge = -1;
  EdgePath root;        // w
  int twist = 0;        // d with f(E) = E w^d
  ConjClass axis;       // unoriented class of w
  EdgePath representative;  // E w E~
  bool suffix_is_nielsen = true;
};

struct NegSuffixCheck {
  int edge = -1;
  bool normal_form = false;
  bool suffix_is_nielsen = false;
  bool linear = false;
};

struct NegNielsenReport {
  std::vector<NegNielsenFamily> families;
  std::vector<NegSuffixCheck> checks;
};

inline NegNielsenReport find_neg_nielsen_paths(const GraphMap& f) {
  NegNielsenReport rep;
  const Graph& g = f.graph();
  auto infos = classify_strata(f);
  for (const auto& info : infos) {
    bool neg = info.kind == StratumKind::NegLinear || info.kind == StratumKind::NegGeneral;
    if (!neg) continue;
    for (int e : info.edges) {
      NegSuffixCheck chk;
      chk.edge = e;
      chk.normal_form = info.normal_form;
      if (info.kind == StratumKind::NegLinear) {
        chk.suffix_is_nielsen = true;
        chk.linear = true;
        const LinearEdgeData& ld = info.linear.front();
        NegNielsenFamily fam;
        fam.edge = e;
        fam.root = ld.root;
        fam.twist = ld.exponent;
        fam.axis = ld.axis;
        EdgePath rep_path{g.edges[e].init, {Graph::oriented(e)}};
        rep_path.steps.insert(rep_path.steps.end(), ld.root.steps.begin(),
                              ld.root.steps.end());
        rep_path.steps.push_back(-Graph::oriented(e));
        fam.representative = tighten_path(g, rep_path);
        rep.families.push_back(std::move(fam));
      }
      rep.checks.push_back(chk);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// EG indivisible Nielsen paths by the two-ray search: an iNp of height r
// decomposes as alpha.beta, the halves grow out of f^p-fixed directions, and
// the overflow of the two rays must cancel exactly at the single illegal
// turn.
// ---------------------------------------------------------------------------

struct EgInpSearchResult {
  std::vector<NielsenPath> paths;
  bool complete_within_bound = true;  // false when a ray was truncated
  int bound = 0;
};

namespace detail {

// the increasing ray from a g-fixed direction, truncated at `bound` steps
inline std::optional<EdgePath> fixed_direction_ray(const GraphMap& g, int d, int bound,
                                                   bool* truncated) {
  EdgePath cur{g.graph().init_of(d), {d}};
  for (int it = 0; it < 64; ++it) {
    EdgePath next = image_of_path(g, cur);
    if (next.size() <= cur.size()) {
      if (next == cur) return cur;  // stabilized (fixed path)
      return std::nullopt;          // not increasing: no ray from here
    }
    if (!std::equal(cur.steps.begin(), cur.steps.end(), next.steps.begin()))
      return std::nullopt;
    cur = next;
    if (static_cast<int>(cur.size()) >= bound) {
      *truncated = true;
      cur.steps.resize(bound);
      return cur;
    }
  }
  *truncated = true;
  return cur;
}

inline std::vector<int> canonical_path_key(const Graph& g, const EdgePath& p) {
  EdgePath r = path_inverse(g, p);
  return std::min(p.steps, r.steps);
}

}  // namespace detail

namespace detail {

// Per prefix a of a ray: the overflow gamma with f_#(a) = a . gamma, when the
// image does begin with a (a necessary shape for a Nielsen-path half).
struct RayOverflows {
  EdgePath ray;
  std::vector<std::optional<std::vector<int>>> gamma;  // by prefix length
};

inline RayOverflows ray_overflows(const GraphMap& gp, const EdgePath& ray) {
  RayOverflows out;
  out.ray = ray;
  out.gamma.resize(ray.size() + 1);
  const Graph& g = gp.graph();
  EdgePath im = EdgePath::trivial(gp.vertex_images[ray.start]);
  for (size_t i = 1; i <= ray.size(); ++i) {
    int s = ray.steps[i - 1];
    EdgePath stepim = s > 0 ? gp.edge_images[Graph::edge_id(s)]
                            : path_inverse(g, gp.edge_images[Graph::edge_id(s)]);
    im = concat_paths(g, im, stepim);
    if (im.size() >= i &&
        std::equal(ray.steps.begin(), ray.steps.begin() + i, im.steps.begin()))
      out.gamma[i] = std::vector<int>(im.steps.begin() + i, im.steps.end());
  }
  return out;
}

}  // namespace detail

inline EgInpSearchResult find_eg_inps(const GraphMap& f, int stratum, int bound = 200) {
  EgInpSearchResult out;
  out.bound = bound;
  const Graph& g = f.graph();
  OrbitData od = periodic_orbit_data(f);

  // candidate periods: lcm of the direction periods (capped)
  long long lcm = 1;
  for (int p : od.direction_period)
    if (p > 0) lcm = std::lcm(lcm, static_cast<long long>(p));
  if (lcm > 24) {
    lcm = 24;
    out.complete_within_bound = false;
  }
  std::set<std::vector<int>> seen;
  for (int p = 1; p <= lcm; ++p) {
    if (lcm % p != 0) continue;
    GraphMap gp = p == 1 ? f : iterate_map(f, p);
    // f^p-fixed directions with edges in the stratum
    std::vector<int> dirs;
    for (int d : g.all_directions())
      if (f.stratum_of_direction(d) == stratum && gp.derivative(d) == d) dirs.push_back(d);
    std::map<int, detail::RayOverflows> rays;
    for (int d : dirs) {
      bool trunc = false;
      auto ray = detail::fixed_direction_ray(gp, d, bound, &trunc);
      if (trunc) out.complete_within_bound = false;
      if (ray) rays[d] = detail::ray_overflows(gp, *ray);
    }
    for (int da : dirs) {
      for (int db : dirs) {
        if (!rays.count(da) || !rays.count(db)) continue;
        const detail::RayOverflows& ra = rays[da];
        const detail::RayOverflows& rb = rays[db];
        // sigma = a . rev(b) is f^p-fixed iff both halves are image prefixes
        // with the same overflow; index the b-side overflows for lookup
        std::map<std::vector<int>, std::vector<size_t>> by_gamma;
        for (size_t j = 1; j <= rb.ray.size(); ++j)
          if (rb.gamma[j]) by_gamma[*rb.gamma[j]].push_back(j);
        for (size_t i = 1; i <= ra.ray.size(); ++i) {
          if (!ra.gamma[i]) continue;
          auto it = by_gamma.find(*ra.gamma[i]);
          if (it == by_gamma.end()) continue;
          for (size_t j : it->second) {
            if (static_cast<int>(i + j) > bound) continue;
            // junction turn: (-ra[i-1], -rb[j-1]) must be the single illegal
            // turn, nondegenerate, inside the stratum
            int t1 = -ra.ray.steps[i - 1], t2 = -rb.ray.steps[j - 1];
            if (t1 == t2) continue;
            if (g.init_of(t1) != g.init_of(t2)) continue;
            if (f.stratum_of_direction(t1) != stratum ||
                f.stratum_of_direction(t2) != stratum)
              continue;
            if (f.turn_is_legal(t1, t2)) continue;
            EdgePath sigma;
            sigma.start = ra.ray.start;
            sigma.steps.assign(ra.ray.steps.begin(), ra.ray.steps.begin() + i);
            for (size_t k = j; k-- > 0;) sigma.steps.push_back(-rb.ray.steps[k]);
            if (!sigma.is_tight()) continue;
            if (image_of_path(gp, sigma) != sigma) continue;
            // exactly one illegal turn in the stratum, halves r-legal
            int illegal = 0;
            for (size_t q = 0; q + 1 < sigma.steps.size(); ++q) {
              int d1 = -sigma.steps[q], d2 = sigma.steps[q + 1];
              if (f.stratum_of_direction(d1) == stratum &&
                  f.stratum_of_direction(d2) == stratum && !f.turn_is_legal(d1, d2))
                ++illegal;
            }
            if (illegal != 1) continue;
            auto key = detail::canonical_path_key(g, sigma);
            if (!seen.insert(key).second) continue;
            NielsenPath np;
            np.path = sigma;
            np.height = stratum;
            np.period = p;
            for (int q = 1; q < p; ++q)
              if (iterate_image(f, sigma, q) == sigma) {
                np.period = q;
                break;
              }
            np.indivisible = true;
            EdgePath alpha{sigma.start,
                           std::vector<int>(sigma.steps.begin(), sigma.steps.begin() + i)};
            EdgePath beta;
            beta.steps.assign(sigma.steps.begin() + i, sigma.steps.end());
            beta.start = alpha.end(g);
            np.eg_decomposition = std::make_pair(alpha, beta);
            out.paths.push_back(std::move(np));
          }
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Nielsen classes of Fix(f^k)
// ---------------------------------------------------------------------------

struct NielsenClasses {
  std::vector<int> fixed_vertices;
  std::vector<std::vector<int>> classes;  // partition of fixed_vertices
  std::vector<NielsenPath> spanning_paths;
  bool complete_within_bound = true;
};

// Solve tau = [u . g_#(tau)] by bounded iteration; the solution, when the
// iteration stabilizes, makes (edge)(tau) a Nielsen path.
inline std::optional<EdgePath> solve_suffix_fixpoint(const GraphMap& g, const EdgePath& u,
                                                     int iterations = 24,
                                                     size_t length_cap = 600) {
  EdgePath tau = EdgePath::trivial(u.start);
  for (int it = 0; it < iterations; ++it) {
    EdgePath next = concat_paths(g.graph(), u, image_of_path(g, tau));
    if (next == tau) return tau;
    if (next.size() > length_cap) return std::nullopt;
    tau = next;
  }
  return std::nullopt;
}

inline NielsenClasses nielsen_classes(const GraphMap& f, int k = 1,
                                      int inp_bound = 200) {
  NielsenClasses out;
  GraphMap g = k == 1 ? f : build_filtration(iterate_map(f, k));
  const Graph& gg = g.graph();
  for (int v = 0; v < gg.num_vertices; ++v)
    if (g.vertex_images[v] == v) out.fixed_vertices.push_back(v);

  std::vector<int> rep(gg.num_vertices);
  std::iota(rep.begin(), rep.end(), 0);
  std::function<int(int)> find = [&](int v) {
    while (rep[v] != v) v = rep[v] = rep[rep[v]];
    return v;
  };
  auto join = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) rep[std::max(a, b)] = std::min(a, b);
  };

  // fixed edges
  for (int e = 0; e < gg.num_edges(); ++e) {
    EdgePath self{gg.edges[e].init, {Graph::oriented(e)}};
    if (g.edge_images[e] == self) {
      join(gg.edges[e].init, gg.edges[e].term);
      NielsenPath np;
      np.path = self;
      np.height = g.stratum_of[e];
      out.spanning_paths.push_back(np);
    }
  }
  // basic NEG-type paths (edge)(tau)
  for (int e = 0; e < gg.num_edges(); ++e) {
    for (int oe : {Graph::oriented(e), Graph::oriented(e, false)}) {
      const EdgePath im = image_of_path(g, EdgePath{gg.init_of(oe), {oe}});
      if (im.steps.empty() || im.steps.front() != oe || im.size() < 2) continue;
      if (g.vertex_images[gg.init_of(oe)] != gg.init_of(oe)) continue;
      EdgePath u;
      u.start = gg.term_of(oe);
      u.steps.assign(im.steps.begin() + 1, im.steps.end());
      auto tau = solve_suffix_fixpoint(g, u);
      if (!tau) continue;
      int endv = tau->end(gg);
      if (g.vertex_images[endv] != endv) continue;
      join(gg.init_of(oe), endv);
      NielsenPath np;
      np.path = concat_paths(gg, EdgePath{gg.init_of(oe), {oe}}, *tau);
      np.height = g.stratum_of[e];
      out.spanning_paths.push_back(np);
    }
  }
  // EG iNps
  auto infos = classify_strata(g);
  for (const auto& info : infos) {
    if (info.kind != StratumKind::EG) continue;
    auto found = find_eg_inps(g, info.index, inp_bound);
    if (!found.complete_within_bound) out.complete_within_bound = false;
    for (const auto& np : found.paths) {
      if (np.period != 1) continue;
      join(np.path.start, np.path.end(gg));
      out.spanning_paths.push_back(np);
    }
  }

  std::map<int, std::vector<int>> cls;
  for (int v : out.fixed_vertices) cls[find(v)].push_back(v);
  for (auto& [r, vs] : cls) out.classes.push_back(vs);
  return out;
}

// ---------------------------------------------------------------------------
// Principal points and rotationless detection
// ---------------------------------------------------------------------------

struct PrincipalityReport {
  struct VertexEntry {
    int vertex = -1;
    int period = 0;
    bool principal = true;
    std::string clause;  // which disqualifying clause applied, if any
    std::vector<std::pair<int, int>> periodic_directions;  // (direction, period)
  };
  std::vector<VertexEntry> vertices;  // one per periodic vertex
  int stabilizing_power = 1;          // lcm of vertex and periodic-edge periods

  const VertexEntry* entry(int v) const {
    for (auto& e : vertices)
      if (e.vertex == v) return &e;
    return nullptr;
  }
};

namespace detail {

// period of each edge under E -> f(E) when images stay single edges
inline std::vector<int> edge_periods(const GraphMap& f) {
  const int n = f.graph().num_edges();
  std::vector<int> next(n, -1);
  for (int e = 0; e < n; ++e) {
    const EdgePath& im = f.edge_images[e];
    if (im.size() == 1) next[e] = Graph::edge_id(im.steps[0]);
  }
  std::vector<int> period(n, 0);
  for (int e = 0; e < n; ++e) {
    int v = e;
    for (int steps = 0; steps <= n; ++steps) {
      if (v == -1) break;
      v = next[v];
      if (v == e) {
        period[e] = steps + 1;
        break;
      }
    }
  }
  return period;
}

}  // namespace detail

inline PrincipalityReport principal_points(const GraphMap& f) {
  PrincipalityReport rep;
  const Graph& g = f.graph();
  OrbitData od = periodic_orbit_data(f);
  std::vector<int> eper = detail::edge_periods(f);

  long long K = 1;
  for (int v = 0; v < g.num_vertices; ++v)
    if (od.vertex_period[v] > 0) K = std::lcm(K, (long long)od.vertex_period[v]);
  for (int e = 0; e < g.num_edges(); ++e)
    if (eper[e] > 0) K = std::lcm(K, (long long)eper[e]);
  if (K > 64) K = 64;  // desk bound; flagged through the clause text below
  rep.stabilizing_power = static_cast<int>(K);

  NielsenClasses cls = nielsen_classes(f, static_cast<int>(K));
  auto class_of = [&](int v) -> const std::vector<int>* {
    for (auto& c : cls.classes)
      for (int u : c)
        if (u == v) return &c;
    return nullptr;
  };

  auto infos = classify_strata(f);

  // circle components of the periodic-edge subgraph
  std::vector<int> per_edges;
  for (int e = 0; e < g.num_edges(); ++e)
    if (eper[e] > 0) per_edges.push_back(e);
  std::set<int> circle_vertices;
  {
    auto comp = g.edge_components(per_edges);
    std::map<int, std::vector<int>> comps;
    for (int e : per_edges) comps[comp[e]].push_back(e);
    for (auto& [c, es] : comps) {
      std::set<int> vs;
      bool circle = true;
      for (int e : es) {
        vs.insert(g.edges[e].init);
        vs.insert(g.edges[e].term);
      }
      for (int v : vs) {
        int val = 0;
        for (int e : es) {
          if (g.edges[e].init == v) ++val;
          if (g.edges[e].term == v) ++val;
        }
        if (val != 2) circle = false;
      }
      if (!circle) continue;
      // every point of the circle must have exactly two periodic directions
      bool all_two = true;
      for (int v : vs) {
        int nper = 0;
        for (int d : g.directions_at(v))
          if (od.direction_period[dir_index(d)] > 0) ++nper;
        if (nper != 2) all_two = false;
      }
      if (all_two)
        for (int v : vs) circle_vertices.insert(v);
    }
  }

  for (int v = 0; v < g.num_vertices; ++v) {
    if (od.vertex_period[v] == 0) continue;
    PrincipalityReport::VertexEntry ent;
    ent.vertex = v;
    ent.period = od.vertex_period[v];
    for (int d : g.directions_at(v))
      if (od.direction_period[dir_index(d)] > 0)
        ent.periodic_directions.push_back({d, od.direction_period[dir_index(d)]});

    // clause 2: circle component of Per(f)
    if (circle_vertices.count(v)) {
      ent.principal = false;
      ent.clause = "circle component of the periodic set with two periodic directions";
      rep.vertices.push_back(std::move(ent));
      continue;
    }
    // clause 1: alone in its Nielsen class with exactly two periodic
    // directions in one EG stratum
    const std::vector<int>* c = class_of(v);
    bool alone = c && c->size() == 1;
    if (alone) {
      for (int e : per_edges)
        if (g.edges[e].init == v || g.edges[e].term == v) alone = false;
    }
    if (alone && ent.periodic_directions.size() == 2) {
      int s1 = f.stratum_of_direction(ent.periodic_directions[0].first);
      int s2 = f.stratum_of_direction(ent.periodic_directions[1].first);
      if (s1 == s2 && infos[s1].kind == StratumKind::EG) {
        ent.principal = false;
        ent.clause = "isolated in its Nielsen class with two periodic directions "
                     "in one EG stratum";
      }
    }
    rep.vertices.push_back(std::move(ent));
  }
  return rep;
}

struct RotationlessVerdict {
  bool rotationless = true;
  std::string witness;
};

inline RotationlessVerdict is_rotationless(const GraphMap& f) {
  RotationlessVerdict out;
  PrincipalityReport rep = principal_points(f);
  for (const auto& ent : rep.vertices) {
    if (!ent.principal) continue;
    if (ent.period != 1) {
      out.rotationless = false;
      out.witness = "principal vertex " + std::to_string(ent.vertex) + " has period " +
                    std::to_string(ent.period);
      return out;
    }
    for (auto [d, p] : ent.periodic_directions)
      if (p != 1) {
        out.rotationless = false;
        out.witness = "direction " + std::to_string(d) + " at principal vertex " +
                      std::to_string(ent.vertex) + " has period " + std::to_string(p);
        return out;
      }
  }
  return out;
}

inline int min_rotationless_exponent(const GraphMap& f) {
  PrincipalityReport rep = principal_points(f);
  long long k = 1;
  for (const auto& ent : rep.vertices) {
    if (!ent.principal) continue;
    k = std::lcm(k, (long long)ent.period);
    for (auto [d, p] : ent.periodic_directions) k = std::lcm(k, (long long)p);
  }
  // verify on the iterate; search upward in multiples if a new principal
  // structure appears (it should not, but the verification is the contract)
  for (int mult = 1; mult <= 16; ++mult) {
    int cand = static_cast<int>(k) * mult;
    GraphMap g = cand == 1 ? f : build_filtration(iterate_map(f, cand));
    if (is_rotationless(g).rotationless) return cand;
  }
  throw std::logic_error("min_rotationless_exponent: verification failed");
}

}  // namespace traintrack
