#pragma once

// Complete splittings: the unit inventory (edges, indivisible Nielsen paths,
// exceptional paths, taken connecting paths), the unique-parse splitter, the
// nine-property CT checker and hard-splitting certification.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "traintrack/moves.hpp"
#include "traintrack/nielsen.hpp"

namespace traintrack {

enum class UnitKind { Edge, NielsenUnit, Exceptional, TakenConnecting };

inline std::string unit_kind_name(UnitKind k) {
  switch (k) {
    case UnitKind::Edge: return "edge";
    case UnitKind::NielsenUnit: return "inp";
    case UnitKind::Exceptional: return "exceptional";
    case UnitKind::TakenConnecting: return "taken";
  }
  return "?";
}

struct SplittingUnit {
  UnitKind kind = UnitKind::Edge;
  int from = 0, to = 0;  // step range [from, to) in the ambient path
  // exceptional data: E_i w^p E_j~
  int exc_edge_i = -1, exc_edge_j = -1, exc_power = 0;
};

struct CompleteSplitting {
  EdgePath path;
  std::vector<SplittingUnit> units;
  int parse_count = 1;  // number of distinct unit parses found (uniqueness check)
};

// Frozen per-map inventory backing the unit matcher.
struct UnitInventory {
  std::vector<StratumInfo> infos;
  std::map<int, LinearEdgeData> linear;   // linear edge -> data
  std::vector<NielsenPath> eg_inps;       // bounded search results
  std::vector<EdgePath> taken;            // maximal zero-stratum connecting paths
  bool inp_complete = true;
  bool taken_complete = true;
};

inline UnitInventory build_unit_inventory(const GraphMap& f, int inp_bound = 200,
                                          int taken_depth = 32) {
  UnitInventory inv;
  inv.infos = classify_strata(f);
  for (const auto& info : inv.infos) {
    if (info.kind == StratumKind::NegLinear)
      for (const auto& ld : info.linear) inv.linear[ld.edge] = ld;
    if (info.kind == StratumKind::EG) {
      auto found = find_eg_inps(f, info.index, inp_bound);
      if (!found.complete_within_bound) inv.inp_complete = false;
      for (auto& np : found.paths) inv.eg_inps.push_back(np);
    }
  }
  // taken connecting paths: maximal zero-stratum subpaths of iterated images
  const Graph& g = f.graph();
  auto is_zero = [&](int step) {
    return inv.infos[f.stratum_of[Graph::edge_id(step)]].kind == StratumKind::Zero;
  };
  std::set<std::vector<int>> seen;
  for (int e = 0; e < g.num_edges(); ++e) {
    if (inv.infos[f.stratum_of[e]].kind == StratumKind::Zero) continue;
    if (inv.infos[f.stratum_of[e]].kind == StratumKind::Reducible) continue;
    EdgePath p{g.edges[e].init, {Graph::oriented(e)}};
    bool grew = true;
    for (int k = 0; k < taken_depth && grew; ++k) {
      p = image_of_path(f, p);
      grew = false;
      size_t i = 0;
      while (i < p.size()) {
        if (!is_zero(p.steps[i])) {
          ++i;
          continue;
        }
        size_t j = i;
        while (j < p.size() && is_zero(p.steps[j])) ++j;
        EdgePath run;
        run.start = g.init_of(p.steps[i]);
        run.steps.assign(p.steps.begin() + i, p.steps.begin() + j);
        auto key = detail::canonical_path_key(g, run);
        if (seen.insert(key).second) {
          inv.taken.push_back(run);
          grew = true;
        }
        i = j;
      }
      if (k + 1 == taken_depth && grew) inv.taken_complete = false;
    }
  }
  return inv;
}

// All unit candidates starting at step position `at` of p.
inline std::vector<SplittingUnit> match_units(const GraphMap& f, const UnitInventory& inv,
                                              const EdgePath& p, int at) {
  std::vector<SplittingUnit> out;
  const Graph& g = f.graph();
  const int n = static_cast<int>(p.size());
  if (at < 0 || at >= n) return out;
  int step = p.steps[at];
  const StratumInfo& info = inv.infos[f.stratum_of[Graph::edge_id(step)]];

  // single edge in an irreducible stratum
  if (info.kind != StratumKind::Zero && info.kind != StratumKind::Reducible)
    out.push_back(SplittingUnit{UnitKind::Edge, at, at + 1, -1, -1, 0});

  // inventoried EG iNps, either orientation
  for (const auto& np : inv.eg_inps) {
    for (const EdgePath& cand : {np.path, path_inverse(g, np.path)}) {
      int len = static_cast<int>(cand.size());
      if (at + len > n) continue;
      if (std::equal(cand.steps.begin(), cand.steps.end(), p.steps.begin() + at))
        out.push_back(SplittingUnit{UnitKind::NielsenUnit, at, at + len, -1, -1, 0});
    }
  }

  // NEG families E_i w^k E_i~ and exceptional paths E_i w^q E_j~.  With
  // w = c.rho.c~ the tight pattern reads E_i c rho^k c~ E_j~.
  if (step > 0 && inv.linear.count(Graph::edge_id(step))) {
    int ei = Graph::edge_id(step);
    const LinearEdgeData& ld = inv.linear.at(ei);
    const std::vector<int>& conj = ld.root_conj.steps;
    const std::vector<int>& rho = ld.root_core.steps;
    const int cl = static_cast<int>(conj.size());
    const int rl = static_cast<int>(rho.size());
    EdgePath rho_rev = path_inverse(g, ld.root_core);
    auto matches_at = [&](const std::vector<int>& block, int q) {
      return q + static_cast<int>(block.size()) <= n &&
             std::equal(block.begin(), block.end(), p.steps.begin() + q);
    };
    std::vector<int> conj_rev;
    for (auto it = conj.rbegin(); it != conj.rend(); ++it) conj_rev.push_back(-*it);
    auto close_here = [&](int q, int power) {
      // expects c~ then E_j~ at q
      if (!matches_at(conj_rev, q)) return;
      int q2 = q + cl;
      if (q2 >= n || p.steps[q2] >= 0) return;
      int ej = Graph::edge_id(p.steps[q2]);
      auto it = inv.linear.find(ej);
      if (it == inv.linear.end() || it->second.root.steps != ld.root.steps) return;
      bool family = (ej == ei);
      if (family && power != 0)
        out.push_back(SplittingUnit{UnitKind::NielsenUnit, at, q2 + 1, ei, ej, power});
      if (!family)
        out.push_back(SplittingUnit{UnitKind::Exceptional, at, q2 + 1, ei, ej, power});
    };
    if (matches_at(conj, at + 1)) {
      for (int sign : {+1, -1}) {
        const std::vector<int>& block = sign > 0 ? rho : rho_rev.steps;
        int q = at + 1 + cl;
        int reps = 0;
        while (true) {
          if (sign > 0 || reps > 0) close_here(q, sign > 0 ? reps : -reps);
          if (rl == 0 || !matches_at(block, q)) break;
          q += rl;
          ++reps;
          if (reps > n) break;
        }
      }
    }
  }

  // maximal zero-stratum run, when it is a taken connecting path
  if (info.kind == StratumKind::Zero) {
    int j = at;
    auto zero_at = [&](int idx) {
      return inv.infos[f.stratum_of[Graph::edge_id(p.steps[idx])]].kind ==
             StratumKind::Zero;
    };
    while (j < n && zero_at(j)) ++j;
    bool maximal_left = (at == 0) || !zero_at(at - 1);
    if (maximal_left) {
      EdgePath run;
      run.start = g.init_of(p.steps[at]);
      run.steps.assign(p.steps.begin() + at, p.steps.begin() + j);
      auto key = detail::canonical_path_key(g, run);
      for (const EdgePath& t : inv.taken)
        if (detail::canonical_path_key(g, t) == key) {
          out.push_back(SplittingUnit{UnitKind::TakenConnecting, at, j, -1, -1, 0});
          break;
        }
    }
  }
  return out;
}

// Parse p into splitting units with legal junction turns.  The parse is
// unique when it exists (parse_count reports how many the DP saw).
inline std::optional<CompleteSplitting> complete_split(const GraphMap& f,
                                                       const UnitInventory& inv,
                                                       const EdgePath& p) {
  const int n = static_cast<int>(p.size());
  if (n == 0) return std::nullopt;
  // reachable[i]: units ending exactly at i with a legal chain before them
  std::vector<std::vector<SplittingUnit>> starts(n);
  for (int i = 0; i < n; ++i) starts[i] = match_units(f, inv, p, i);

  struct State {
    bool reachable = false;
    std::vector<SplittingUnit> preds;
    long long count = 0;
  };
  std::vector<State> st(n + 1);
  st[0].reachable = true;
  st[0].count = 1;
  for (int i = 0; i < n; ++i) {
    if (!st[i].reachable) continue;
    for (const SplittingUnit& u : starts[i]) {
      // junction legality with any predecessor: the turn between units is
      // (-p[i-1], p[i]); it does not depend on which unit ended at i
      if (i > 0) {
        int d1 = -p.steps[i - 1], d2 = p.steps[i];
        if (!f.turn_is_legal(d1, d2)) continue;
      }
      State& nx = st[u.to];
      nx.reachable = true;
      nx.preds.push_back(u);
      nx.count = std::min<long long>(nx.count + st[i].count, 1 << 20);
    }
  }
  if (!st[n].reachable) return std::nullopt;
  CompleteSplitting cs;
  cs.path = p;
  cs.parse_count = static_cast<int>(st[n].count);
  int pos = n;
  while (pos > 0) {
    const SplittingUnit& u = st[pos].preds.front();
    cs.units.push_back(u);
    pos = u.from;
  }
  std::reverse(cs.units.begin(), cs.units.end());
  return cs;
}

inline std::optional<CompleteSplitting> complete_split(const GraphMap& f,
                                                       const EdgePath& p) {
  UnitInventory inv = build_unit_inventory(f);
  return complete_split(f, inv, p);
}

struct CompletelySplitVerdict {
  bool pass = true;
  std::string witness;
  bool scope_complete = true;
};

inline CompletelySplitVerdict check_completely_split_map(const GraphMap& f,
                                                         const UnitInventory& inv) {
  CompletelySplitVerdict out;
  out.scope_complete = inv.inp_complete && inv.taken_complete;
  const Graph& g = f.graph();
  for (int e = 0; e < g.num_edges(); ++e) {
    const StratumInfo& info = inv.infos[f.stratum_of[e]];
    if (info.kind == StratumKind::Zero || info.kind == StratumKind::Reducible) continue;
    auto cs = complete_split(f, inv, f.edge_images[e]);
    if (!cs) {
      out.pass = false;
      out.witness = "image of edge " + std::to_string(e) + " is not completely split";
      return out;
    }
  }
  for (const EdgePath& t : inv.taken) {
    EdgePath im = image_of_path(f, t);
    if (im.is_trivial()) {
      out.pass = false;
      out.witness = "a taken connecting path dies under the map";
      return out;
    }
    auto cs = complete_split(f, inv, im);
    if (!cs) {
      out.pass = false;
      out.witness = "image of a taken connecting path is not completely split";
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// The nine-property CT report
// ---------------------------------------------------------------------------

enum class Verdict { Pass, Fail, PartiallyChecked };

struct PropertyVerdict {
  std::string name;
  Verdict verdict = Verdict::Pass;
  std::string note;
};

struct CtReport {
  std::vector<PropertyVerdict> properties;
  bool failed() const {
    for (auto& p : properties)
      if (p.verdict == Verdict::Fail) return true;
    return false;
  }
  const PropertyVerdict* find(const std::string& name) const {
    for (auto& p : properties)
      if (p.name == name) return &p;
    return nullptr;
  }
};

// Iteratively fold each EG iNp; the property holds when every fold along the
// way is proper (stopping on a repeated block signature or budget).
struct EgFoldTrace {
  bool all_proper = true;
  bool budget_hit = false;
  std::vector<FoldType> folds;
};

inline EgFoldTrace iterated_fold_trace(GraphMap f, EdgePath rho, int stratum,
                                       int budget = 48) {
  EgFoldTrace out;
  std::set<std::vector<std::pair<int, int>>> seen;  // block signatures
  for (int it = 0; it < budget; ++it) {
    // signature: alternating (in-stratum?, block length) profile
    std::vector<std::pair<int, int>> sig;
    for (int s : rho.steps) {
      int in = f.stratum_of[Graph::edge_id(s)] == stratum ? 1 : 0;
      if (!sig.empty() && sig.back().first == in)
        sig.back().second++;
      else
        sig.push_back({in, 1});
    }
    if (!seen.insert(sig).second) return out;  // periodic: done
    ExtendedFoldResult ef;
    try {
      ef = extended_fold(f, rho, stratum);
    } catch (const std::invalid_argument&) {
      out.all_proper = false;
      return out;
    }
    out.folds.push_back(ef.type);
    if (ef.type != FoldType::ProperFull) {
      out.all_proper = false;
      return out;
    }
    f = ef.move->map;
    rho = *ef.new_inp;
    // stratum index may shift under refiltration; follow the first edge of rho
    auto infos = classify_strata(f);
    stratum = -1;
    for (int s : rho.steps) {
      int cand = f.stratum_of[Graph::edge_id(s)];
      if (infos[cand].kind == StratumKind::EG) stratum = std::max(stratum, cand);
    }
    if (stratum < 0) return out;  // degenerated; nothing left to fold
  }
  out.budget_hit = true;
  return out;
}

inline CtReport check_ct(const GraphMap& f,
                         const std::vector<std::vector<int>>& candidate_ffs = {},
                         int inp_bound = 200) {
  CtReport rep;
  const Graph& g = f.graph();
  UnitInventory inv = build_unit_inventory(f, inp_bound);
  OrbitData od = periodic_orbit_data(f);
  PrincipalityReport pr = principal_points(f);
  auto eper = detail::edge_periods(f);

  auto add = [&](std::string name, Verdict v, std::string note = "") {
    rep.properties.push_back({std::move(name), v, std::move(note)});
  };

  // (Rotationless)
  RotationlessVerdict rot = is_rotationless(f);
  add("Rotationless", rot.rotationless ? Verdict::Pass : Verdict::Fail, rot.witness);

  // (Completely Split)
  CompletelySplitVerdict cs = check_completely_split_map(f, inv);
  add("Completely Split",
      cs.pass ? (cs.scope_complete ? Verdict::Pass : Verdict::PartiallyChecked)
              : Verdict::Fail,
      cs.pass ? (cs.scope_complete ? "" : "inventory truncated at the search bound")
              : cs.witness);

  // (Filtration): reduced only against supplied candidates; core clause full
  {
    Verdict v = Verdict::PartiallyChecked;
    std::string note = "reduced: checked against " +
                       std::to_string(candidate_ffs.size()) + " candidate system(s)";
    for (const auto& cand : candidate_ffs) {
      // a candidate refutes reducedness when it is a proper invariant core
      // subgraph strictly between consecutive filtration elements
      std::vector<int> core = core_subgraph(g, cand);
      if (core.empty()) continue;
      std::set<int> cset(core.begin(), core.end());
      bool invariant = true;
      for (int e : core)
        for (int s : f.edge_images[e].steps)
          if (!cset.count(Graph::edge_id(s))) invariant = false;
      if (!invariant) continue;
      for (int r = 0; r < f.num_strata(); ++r) {
        std::set<int> below, upto;
        for (int s = 0; s < r; ++s)
          for (int e : f.strata[s]) below.insert(e);
        upto = below;
        for (int e : f.strata[r]) upto.insert(e);
        bool contains_below = std::includes(cset.begin(), cset.end(), below.begin(), below.end());
        bool inside_upto = std::includes(upto.begin(), upto.end(), cset.begin(), cset.end());
        if (contains_below && inside_upto && cset != below && cset != upto) {
          v = Verdict::Fail;
          note = "candidate invariant subgraph sits strictly between filtration "
                 "elements " + std::to_string(r) + "-1 and " + std::to_string(r);
        }
      }
    }
    // core-of-filtration clause (full check)
    for (int r = 0; r < f.num_strata() && v != Verdict::Fail; ++r) {
      std::vector<int> gi;
      for (int s = 0; s <= r; ++s)
        for (int e : f.strata[s]) gi.push_back(e);
      std::vector<int> core = core_subgraph(g, gi);
      if (core.empty()) continue;
      std::sort(core.begin(), core.end());
      bool is_element = false;
      for (int r2 = 0; r2 < f.num_strata(); ++r2) {
        std::vector<int> gj;
        for (int s = 0; s <= r2; ++s)
          for (int e : f.strata[s]) gj.push_back(e);
        std::sort(gj.begin(), gj.end());
        if (gj == core) is_element = true;
      }
      if (!is_element) {
        v = Verdict::Fail;
        note = "core of filtration element " + std::to_string(r + 1) +
               " is not a filtration element";
      }
    }
    add("Filtration", v, note);
  }

  // (Vertices)
  {
    Verdict v = Verdict::Pass;
    std::string note = "iNp endpoints are vertices by representation; ";
    for (const auto& info : inv.infos) {
      bool neg = info.kind == StratumKind::NegLinear || info.kind == StratumKind::NegGeneral;
      if (!neg) continue;
      for (int e : info.edges) {
        int term = g.edges[e].term;
        const auto* ent = pr.entry(term);
        if (!ent || !ent->principal || ent->period != 1) {
          v = Verdict::Fail;
          note = "terminal vertex of NEG edge " + std::to_string(e) +
                 " is not principal and fixed";
        }
      }
    }
    add("Vertices", v, note);
  }

  // (Periodic Edges)
  {
    Verdict v = Verdict::Pass;
    std::string note;
    for (int e = 0; e < g.num_edges(); ++e) {
      if (eper[e] == 0) continue;
      if (eper[e] != 1 ||
          !(f.edge_images[e].size() == 1 && f.edge_images[e].steps[0] == Graph::oriented(e))) {
        v = Verdict::Fail;
        note = "periodic edge " + std::to_string(e) + " is not fixed";
        break;
      }
      for (int vtx : {g.edges[e].init, g.edges[e].term}) {
        const auto* ent = pr.entry(vtx);
        if (!ent || !ent->principal) {
          v = Verdict::Fail;
          note = "endpoint of fixed edge " + std::to_string(e) + " is not principal";
        }
      }
      if (g.edges[e].init != g.edges[e].term) {
        int r = f.stratum_of[e];
        std::vector<int> below;
        for (int s = 0; s < r; ++s)
          for (int e2 : f.strata[s]) below.push_back(e2);
        std::vector<int> core = core_subgraph(g, below);
        std::sort(below.begin(), below.end());
        std::sort(core.begin(), core.end());
        bool core_graph = below == core;
        std::set<int> bverts;
        for (int e2 : below) {
          bverts.insert(g.edges[e2].init);
          bverts.insert(g.edges[e2].term);
        }
        if (!core_graph || !bverts.count(g.edges[e].init) ||
            !bverts.count(g.edges[e].term)) {
          v = Verdict::Fail;
          note = "non-loop fixed edge " + std::to_string(e) +
                 " is not attached to a lower core graph";
        }
      }
    }
    add("Periodic Edges", v, note);
  }

  // (Zero Strata)
  {
    Verdict v = Verdict::Pass;
    std::string note;
    for (const auto& info : inv.infos) {
      if (info.kind != StratumKind::Zero) continue;
      // find an enveloping EG stratum above
      bool enveloped = false;
      for (const auto& hi : inv.infos) {
        if (hi.kind != StratumKind::EG || hi.index <= info.index) continue;
        std::set<int> hr_verts;
        for (int e : hi.edges) {
          hr_verts.insert(g.edges[e].init);
          hr_verts.insert(g.edges[e].term);
        }
        bool ok = true;
        std::set<int> zero_edges(info.edges.begin(), info.edges.end());
        for (int e : info.edges)
          for (int vtx : {g.edges[e].init, g.edges[e].term}) {
            if (!hr_verts.count(vtx)) ok = false;
            for (int d : g.directions_at(vtx)) {
              int de = Graph::edge_id(d);
              if (!zero_edges.count(de) &&
                  std::find(hi.edges.begin(), hi.edges.end(), de) == hi.edges.end())
                ok = false;
            }
          }
        if (ok) enveloped = true;
      }
      if (!enveloped) {
        v = Verdict::Fail;
        note = "zero stratum " + std::to_string(info.index + 1) + " is not enveloped";
        break;
      }
      // every edge taken
      for (int e : info.edges) {
        EdgePath single{g.edges[e].init, {Graph::oriented(e)}};
        bool taken = false;
        for (const EdgePath& t : inv.taken) {
          auto key = detail::canonical_path_key(g, t);
          // the edge must appear inside some taken path
          for (size_t i = 0; i < t.size(); ++i)
            if (Graph::edge_id(t.steps[i]) == e) taken = true;
          (void)key;
        }
        if (!taken) {
          v = Verdict::Fail;
          note = "zero-stratum edge " + std::to_string(e) + " is not taken";
        }
        (void)single;
      }
    }
    if (v == Verdict::Pass && !inv.taken_complete) {
      v = Verdict::PartiallyChecked;
      note = "taken inventory truncated";
    }
    add("Zero Strata", v, note);
  }

  // (Linear Edges)
  {
    Verdict v = Verdict::Pass;
    std::string note;
    std::map<Word, std::vector<const LinearEdgeData*>> by_axis;
    for (auto& [e, ld] : inv.linear) by_axis[ld.axis.representative].push_back(&ld);
    for (auto& [axis, lds] : by_axis) {
      for (size_t i = 0; i < lds.size(); ++i)
        for (size_t j = i + 1; j < lds.size(); ++j) {
          if (lds[i]->root.steps != lds[j]->root.steps) {
            v = Verdict::Fail;
            note = "linear edges over one axis carry different root paths";
          } else if (lds[i]->exponent == lds[j]->exponent) {
            v = Verdict::Fail;
            note = "two linear edges share axis and exponent";
          }
        }
    }
    // non-linear non-periodic NEG edges violate the property only if their
    // suffix is a Nielsen path in disguise; classification already decided.
    add("Linear Edges", v, note);
  }

  // (NEG Nielsen Paths)
  {
    Verdict v = Verdict::Pass;
    std::string note = "basic-path search bounded";
    for (const auto& info : inv.infos) {
      if (info.kind != StratumKind::NegGeneral || !info.normal_form) continue;
      for (int e : info.edges) {
        // a Nielsen path E tau or E tau E~ for a non-linear NEG edge breaks
        // the property
        const EdgePath& im = f.edge_images[e];
        if (im.steps.front() != Graph::oriented(e)) continue;
        EdgePath u;
        u.start = g.term_of(Graph::oriented(e));
        u.steps.assign(im.steps.begin() + 1, im.steps.end());
        if (solve_suffix_fixpoint(f, u)) {
          v = Verdict::Fail;
          note = "non-linear NEG edge " + std::to_string(e) + " bounds a Nielsen path";
        }
        // E tau E~ type: tau = [u f(tau) u~]
        EdgePath tau = EdgePath::trivial(u.start);
        for (int it = 0; it < 24; ++it) {
          EdgePath next = concat_paths(g, u, image_of_path(f, tau),
                                       path_inverse(g, u));
          if (next == tau) {
            if (!tau.is_trivial()) {
              v = Verdict::Fail;
              note = "non-linear NEG edge " + std::to_string(e) +
                     " bounds a closed Nielsen path";
            }
            break;
          }
          if (next.size() > 600) break;
          tau = next;
        }
      }
    }
    add("NEG Nielsen Paths", v == Verdict::Pass ? Verdict::PartiallyChecked : v, note);
  }

  // (EG Nielsen Paths)
  {
    Verdict v = Verdict::Pass;
    std::string note;
    bool truncated = !inv.inp_complete;
    for (const auto& np : inv.eg_inps) {
      if (np.period != 1) {
        truncated = true;  // periodic iNps are outside the fold trace's scope
        continue;
      }
      EgFoldTrace tr = iterated_fold_trace(f, np.path, np.height);
      if (!tr.all_proper) {
        v = Verdict::Fail;
        note = "an iterated fold is not proper";
        break;
      }
      if (tr.budget_hit) truncated = true;
    }
    if (v == Verdict::Pass && truncated) {
      v = Verdict::PartiallyChecked;
      note = "fold iteration or iNp search truncated";
    }
    add("EG Nielsen Paths", v, note);
  }

  return rep;
}

// ---------------------------------------------------------------------------
// Hard splitting certification
// ---------------------------------------------------------------------------

enum class HardSplitting { Certified, Refuted, Inconclusive };

inline HardSplitting verify_hard_splitting(const GraphMap& f, const EdgePath& p, int cut,
                                           int depth = 16) {
  const Graph& g = f.graph();
  if (cut <= 0 || cut >= static_cast<int>(p.size())) return HardSplitting::Inconclusive;
  EdgePath left{p.start, std::vector<int>(p.steps.begin(), p.steps.begin() + cut)};
  EdgePath right;
  right.steps.assign(p.steps.begin() + cut, p.steps.end());
  right.start = left.end(g);

  std::set<std::pair<int, int>> seen_turns;
  bool cycled = false;
  for (int k = 0; k <= depth; ++k) {
    EdgePath lk = iterate_image(f, left, k);
    EdgePath rk = iterate_image(f, right, k);
    if (lk.is_trivial() || rk.is_trivial()) return HardSplitting::Refuted;
    int d1 = -lk.steps.back(), d2 = rk.steps.front();
    // the junction cancels exactly when the turn degenerates
    if (d1 == d2) return HardSplitting::Refuted;
    auto turn = std::minmax(d1, d2);
    if (!seen_turns.insert({turn.first, turn.second}).second) cycled = true;
  }
  return cycled ? HardSplitting::Certified : HardSplitting::Inconclusive;
}

// Render a splitting as a bracketed unit list.
inline std::string splitting_to_string(const GraphMap& f, const CompleteSplitting& cs,
                                       const std::vector<std::string>& edge_names) {
  std::ostringstream os;
  for (size_t i = 0; i < cs.units.size(); ++i) {
    const SplittingUnit& u = cs.units[i];
    if (i) os << ' ';
    os << '[' << unit_kind_name(u.kind);
    for (int q = u.from; q < u.to; ++q) {
      int s = cs.path.steps[q];
      os << ' ' << edge_names.at(Graph::edge_id(s)) << (s < 0 ? "'" : "");
    }
    os << ']';
  }
  return os.str();
}

}  // namespace traintrack
