#pragma once

// Best-effort pipelines assembling moves toward relative train track and CT
// form.  Success is certified by the independent checkers, never by pipeline
// bookkeeping; failures report the blocking property and the move log so far.

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "traintrack/moves.hpp"
#include "traintrack/nielsen.hpp"
#include "traintrack/splitting.hpp"

namespace traintrack {

struct PipelineOutcome {
  bool success = false;
  GraphMap map;
  std::vector<std::string> move_log;
  std::vector<std::string> certificate;
  std::string blocked;  // why the pipeline stopped, when it did
  int moves_used = 0;
  RttReport rtt;
  CtReport ct;
};

namespace detail {

struct RttProperties {
  bool V = true, P = true, Z = true, NEG = true, F = true;
  std::string detail;
  bool all() const { return V && P && Z && NEG && F; }
};

inline RttProperties check_rtt_properties(const GraphMap& f) {
  RttProperties out;
  const Graph& g = f.graph();
  auto infos = classify_strata(f);
  OrbitData od = periodic_orbit_data(f);
  auto eper = edge_periods(f);

  // (V): every Nielsen-path endpoint our searches can produce is a vertex by
  // representation; nothing to test beyond that.

  // (P) via its consequence: no component of a filtration element is a
  // periodic forest.
  for (int r = 0; r < f.num_strata() && out.P; ++r) {
    std::vector<int> gi;
    for (int s = 0; s <= r; ++s)
      for (int e : f.strata[s]) gi.push_back(e);
    auto comp = g.edge_components(gi);
    std::map<int, std::vector<int>> comps;
    for (int e : gi) comps[comp[e]].push_back(e);
    for (auto& [c, es] : comps) {
      bool periodic = true;
      for (int e : es)
        if (eper[e] == 0) periodic = false;
      if (periodic && is_forest(g, es)) {
        out.P = false;
        out.detail += "periodic forest component inside filtration element " +
                      std::to_string(r + 1) + "; ";
      }
    }
  }

  // (Z): zero strata enveloped by an EG stratum
  for (const auto& info : infos) {
    if (info.kind != StratumKind::Zero) continue;
    bool enveloped = false;
    for (const auto& hi : infos) {
      if (hi.kind != StratumKind::EG || hi.index <= info.index) continue;
      std::set<int> hr_verts;
      for (int e : hi.edges) {
        hr_verts.insert(g.edges[e].init);
        hr_verts.insert(g.edges[e].term);
      }
      bool ok = true;
      std::set<int> zset(info.edges.begin(), info.edges.end());
      for (int e : info.edges)
        for (int vtx : {g.edges[e].init, g.edges[e].term}) {
          if (!hr_verts.count(vtx)) ok = false;
          for (int d : g.directions_at(vtx)) {
            int de = Graph::edge_id(d);
            if (!zset.count(de) &&
                std::find(hi.edges.begin(), hi.edges.end(), de) == hi.edges.end())
              ok = false;
          }
        }
      if (ok) enveloped = true;
    }
    if (!enveloped) {
      out.Z = false;
      out.detail += "zero stratum " + std::to_string(info.index + 1) + " not enveloped; ";
    }
  }

  // (NEG): terminal endpoints of non-periodic NEG edges are periodic and sit
  // in a lower filtration element that is its own core.  Without the normal
  // form the terminal end is not distinguished, so both endpoints are held to
  // the condition.
  for (const auto& info : infos) {
    bool neg = info.kind == StratumKind::NegLinear || info.kind == StratumKind::NegGeneral;
    if (!neg) continue;
    for (int e : info.edges) {
      std::vector<int> ends;
      if (info.normal_form)
        ends.push_back(g.edges[e].term);
      else {
        ends.push_back(g.edges[e].term);
        if (g.edges[e].init != g.edges[e].term) ends.push_back(g.edges[e].init);
      }
      for (int term : ends) {
        if (od.vertex_period[term] == 0) {
          out.NEG = false;
          out.detail +=
              "terminal vertex of NEG edge " + std::to_string(e) + " not periodic; ";
          continue;
        }
        bool found = false;
        for (int r = 0; r < info.index && !found; ++r) {
          std::vector<int> gi;
          for (int s = 0; s <= r; ++s)
            for (int e2 : f.strata[s]) gi.push_back(e2);
          std::vector<int> core = core_subgraph(g, gi);
          std::sort(gi.begin(), gi.end());
          std::sort(core.begin(), core.end());
          if (gi != core) continue;
          for (int e2 : gi)
            if (g.edges[e2].init == term || g.edges[e2].term == term) found = true;
        }
        if (!found) {
          out.NEG = false;
          out.detail += "terminal vertex of NEG edge " + std::to_string(e) +
                        " is not in a lower core filtration element; ";
        }
      }
    }
  }

  // (F): the core of each filtration element is a filtration element
  for (int r = 0; r < f.num_strata(); ++r) {
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
      out.F = false;
      out.detail += "core of filtration element " + std::to_string(r + 1) +
                    " is not an element; ";
    }
  }
  return out;
}

// Put every NEG stratum into the normal form f(E) = E.u: reorient edges whose
// reversed direction is fixed, and subdivide single-edge NEG strata at an
// interior fixed point when the stratum edge is crossed in the middle of its
// own image.
inline bool normalize_neg_strata(GraphMap& f, std::vector<std::string>& log, int& used,
                                 int budget) {
  bool changed = true;
  while (changed && used < budget) {
    changed = false;
    auto infos = classify_strata(f);
    for (const auto& info : infos) {
      bool neg = info.kind == StratumKind::NegLinear ||
                 info.kind == StratumKind::NegGeneral ||
                 info.kind == StratumKind::NegFixed ||
                 info.kind == StratumKind::NegPeriodic;
      if (!neg || info.normal_form) continue;
      if (info.edges.size() != 1) return false;  // multi-edge cycles unsupported
      int e = info.edges[0];
      const EdgePath& im = f.edge_images[e];
      int oe = Graph::oriented(e);
      if (im.steps.back() == oe && im.steps.front() != oe) {
        MoveResult m = reorient_edge(f, e);
        f = m.map;
        log.push_back(m.log);
        ++used;
        changed = true;
        break;
      }
      // interior crossing: split at the fixed point, the halves normalize
      int crossings = 0;
      for (size_t i = 0; i < im.steps.size(); ++i)
        if (Graph::edge_id(im.steps[i]) == e) ++crossings;
      bool interior = false;
      for (size_t i = 1; i + 1 < im.steps.size(); ++i)
        if (im.steps[i] == oe) interior = true;
      if (crossings == 1 && interior) {
        int occ = 0;
        for (size_t i = 0; i < im.steps.size(); ++i)
          if (im.steps[i] == oe && i > 0) break;
        MoveResult m = subdivide_at_fixed_point(f, e, occ);
        f = m.map;
        log.push_back(m.log);
        ++used;
        changed = true;
        break;
      }
      return false;  // orientation-reversing or multi-crossing: unsupported
    }
  }
  return true;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// make_rtt
// ---------------------------------------------------------------------------

inline PipelineOutcome make_rtt(GraphMap f, int budget = 10000) {
  PipelineOutcome out;
  f = build_filtration(f);
  for (int round = 0; out.moves_used <= budget; ++round) {
    out.rtt = check_rtt(f);
    detail::RttProperties props = detail::check_rtt_properties(f);
    if (out.rtt.pass && props.all()) {
      out.success = true;
      out.map = f;
      out.certificate.push_back("relative train track checks pass");
      out.certificate.push_back("(V),(P),(Z),(NEG),(F) pass");
      return out;
    }
    if (out.moves_used >= budget) break;

    // fix an RTT-iii violation by folding the colliding pair of directions
    bool acted = false;
    for (const auto& chk : out.rtt.eg) {
      if (chk.rtt_iii) continue;
      const auto& es = f.strata[chk.stratum];
      for (int e : es) {
        const EdgePath& im = f.edge_images[e];
        for (size_t i = 0; i + 1 < im.steps.size() && !acted; ++i) {
          int d1 = -im.steps[i], d2 = im.steps[i + 1];
          if (f.stratum_of_direction(d1) != chk.stratum ||
              f.stratum_of_direction(d2) != chk.stratum || f.turn_is_legal(d1, d2))
            continue;
          // walk the pair forward until the images collide head-on
          int a = d1, b = d2;
          for (int k = 0; k < 2 * f.graph().num_edges() + 2; ++k) {
            if (f.derivative(a) == f.derivative(b)) break;
            a = f.derivative(a);
            b = f.derivative(b);
          }
          if (a == b) break;  // degenerate already; nothing to fold
          try {
            MoveResult m = elementary_fold(f, a, b);
            f = m.map;
            out.move_log.push_back(m.log);
            ++out.moves_used;
            acted = true;
          } catch (const std::invalid_argument&) {
          }
        }
        if (acted) break;
      }
      if (acted) break;
    }
    if (acted) continue;

    // normal-form repair for NEG strata
    if (!props.NEG) {
      GraphMap before = f;
      if (detail::normalize_neg_strata(f, out.move_log, out.moves_used, budget)) {
        auto props2 = detail::check_rtt_properties(f);
        if (props2.detail != props.detail) continue;
      }
      // slide terminal endpoints to periodic vertices in lower cores
      auto infos = classify_strata(f);
      OrbitData od = periodic_orbit_data(f);
      for (const auto& info : infos) {
        bool neg = info.kind == StratumKind::NegLinear ||
                   info.kind == StratumKind::NegGeneral;
        if (!neg || !info.normal_form || info.edges.size() != 1) continue;
        int e = info.edges[0];
        int term = f.graph().edges[e].term;
        if (od.vertex_period[term] > 0) continue;
        // BFS in the lower strata toward a periodic vertex
        std::vector<int> lower;
        for (int s = 0; s < info.index; ++s)
          for (int e2 : f.strata[s]) lower.push_back(e2);
        std::map<int, EdgePath> seen;
        seen[term] = EdgePath::trivial(term);
        std::vector<int> q{term};
        std::optional<EdgePath> tau;
        for (size_t qi = 0; qi < q.size() && !tau; ++qi) {
          for (int e2 : lower) {
            for (int oe : {Graph::oriented(e2), Graph::oriented(e2, false)}) {
              if (f.graph().init_of(oe) != q[qi]) continue;
              int w = f.graph().term_of(oe);
              if (seen.count(w)) continue;
              EdgePath p = seen[q[qi]];
              p.steps.push_back(oe);
              seen[w] = p;
              q.push_back(w);
              if (od.vertex_period[w] > 0) tau = p;
            }
          }
        }
        if (tau) {
          try {
            MoveResult m = slide(f, e, *tau);
            f = m.map;
            out.move_log.push_back(m.log);
            ++out.moves_used;
            acted = true;
            break;
          } catch (const std::invalid_argument&) {
          }
        }
      }
      if (acted) continue;
    }

    // (P) repair: collapse periodic forest components of filtration elements
    if (!props.P) {
      auto eper = detail::edge_periods(f);
      std::vector<int> forest;
      for (int r = 0; r < f.num_strata() && forest.empty(); ++r) {
        std::vector<int> gi;
        for (int s = 0; s <= r; ++s)
          for (int e : f.strata[s]) gi.push_back(e);
        auto comp = f.graph().edge_components(gi);
        std::map<int, std::vector<int>> comps;
        for (int e : gi) comps[comp[e]].push_back(e);
        for (auto& [c, es] : comps) {
          bool periodic = true;
          for (int e : es)
            if (eper[e] == 0) periodic = false;
          if (periodic && is_forest(f.graph(), es)) {
            forest = es;
            break;
          }
        }
      }
      if (!forest.empty()) {
        try {
          MoveResult m = collapse_move(f, forest);
          f = m.map;
          out.move_log.push_back(m.log);
          ++out.moves_used;
          continue;
        } catch (const std::invalid_argument&) {
        } catch (const std::logic_error&) {
        }
      }
    }

    out.map = f;
    out.blocked = "no applicable move for: " +
                  (out.rtt.pass ? props.detail : std::string("train track checks (") +
                                                     std::to_string(out.rtt.eg.size()) +
                                                     " EG strata)");
    if (!out.rtt.pass && !props.detail.empty()) out.blocked += " and " + props.detail;
    return out;
  }
  out.map = f;
  out.blocked = "budget exhausted";
  return out;
}

// ---------------------------------------------------------------------------
// make_ct
// ---------------------------------------------------------------------------

inline PipelineOutcome make_ct(GraphMap f, int budget = 10000, int inp_bound = 200,
                               const std::vector<std::vector<int>>& candidate_ffs = {}) {
  PipelineOutcome out;
  RotationlessVerdict rot = is_rotationless(f);
  if (!rot.rotationless)
    throw std::invalid_argument("make_ct: map is not rotationless: " + rot.witness);

  f = build_filtration(f);
  // NEG normal form first; everything downstream assumes it
  if (!detail::normalize_neg_strata(f, out.move_log, out.moves_used, budget)) {
    out.map = f;
    out.blocked = "could not normalize an NEG stratum";
    return out;
  }

  // Step 1: (EG Nielsen Paths) by iterated folding with measured reductions
  auto count_inps = [&](const GraphMap& g) {
    int n = 0;
    for (const auto& info : classify_strata(g))
      if (info.kind == StratumKind::EG)
        n += static_cast<int>(find_eg_inps(g, info.index, inp_bound).paths.size());
    return n;
  };
  for (int round = 0; round < 64 && out.moves_used < budget; ++round) {
    bool acted = false;
    auto infos = classify_strata(f);
    for (const auto& info : infos) {
      if (info.kind != StratumKind::EG) continue;
      auto found = find_eg_inps(f, info.index, inp_bound);
      for (const auto& np : found.paths) {
        if (np.period != 1) continue;
        EgFoldTrace tr = iterated_fold_trace(f, np.path, np.height);
        if (tr.all_proper) continue;
        // replay the proper prefix, then reduce the offending fold
        GraphMap cur = f;
        EdgePath rho = np.path;
        int stratum = np.height;
        std::vector<std::string> local_log;
        bool reduced = false;
        for (int k = 0; k < static_cast<int>(tr.folds.size()) + 1; ++k) {
          ExtendedFoldResult ef;
          try {
            ef = extended_fold(cur, rho, stratum);
          } catch (const std::invalid_argument&) {
            break;
          }
          if (ef.type == FoldType::ProperFull) {
            local_log.push_back(ef.move->log);
            cur = ef.move->map;
            rho = *ef.new_inp;
            auto infos2 = classify_strata(cur);
            stratum = -1;
            for (int s : rho.steps) {
              int cand = cur.stratum_of[Graph::edge_id(s)];
              if (infos2[cand].kind == StratumKind::EG) stratum = std::max(stratum, cand);
            }
            if (stratum < 0) break;
            continue;
          }
          // partial or improper: fold the two offending directions directly
          int junction = -1;
          for (size_t i = 0; i + 1 < rho.steps.size(); ++i) {
            int d1 = -rho.steps[i], d2 = rho.steps[i + 1];
            if (cur.stratum_of_direction(d1) == stratum &&
                cur.stratum_of_direction(d2) == stratum && !cur.turn_is_legal(d1, d2))
              junction = static_cast<int>(i);
          }
          if (junction < 0) break;
          int before_measure = ef.type == FoldType::Partial
                                   ? count_inps(cur)
                                   : static_cast<int>(classify_strata(cur)
                                                          .at(stratum)
                                                          .edges.size());
          try {
            MoveResult m = elementary_fold(cur, -rho.steps[junction],
                                           rho.steps[junction + 1]);
            local_log.push_back(m.log);
            cur = m.map;
          } catch (const std::invalid_argument&) {
            break;
          }
          int after_measure = ef.type == FoldType::Partial ? count_inps(cur) : -1;
          if (ef.type == FoldType::Partial && after_measure >= before_measure) break;
          reduced = true;
          break;
        }
        if (reduced) {
          f = cur;
          for (auto& l : local_log) out.move_log.push_back(l);
          out.moves_used += static_cast<int>(local_log.size());
          acted = true;
          break;
        }
      }
      if (acted) break;
    }
    if (!acted) break;
  }

  // Step 2: re-establish the relative train track properties
  {
    PipelineOutcome rtt = make_rtt(f, budget - out.moves_used);
    for (auto& l : rtt.move_log) out.move_log.push_back(l);
    out.moves_used += rtt.moves_used;
    if (!rtt.success) {
      out.map = rtt.map;
      out.blocked = "train track stage: " + rtt.blocked;
      return out;
    }
    f = rtt.map;
  }

  // Step 5: NEG induction with slides
  for (int round = 0; round < 64 && out.moves_used < budget; ++round) {
    bool acted = false;
    auto infos = classify_strata(f);
    UnitInventory inv = build_unit_inventory(f, inp_bound);
    for (const auto& info : infos) {
      bool neg =
          info.kind == StratumKind::NegLinear || info.kind == StratumKind::NegGeneral;
      if (!neg || !info.normal_form || info.edges.size() != 1) continue;
      int e = info.edges[0];
      const Graph& g = f.graph();
      EdgePath u;
      u.start = g.term_of(f.edge_images[e].steps.front());
      u.steps.assign(f.edge_images[e].steps.begin() + 1, f.edge_images[e].steps.end());

      // first case: a slide making the edge fixed
      if (auto tau = solve_suffix_fixpoint(f, u)) {
        if (!tau->is_trivial()) {
          try {
            MoveResult m = slide(f, e, *tau);
            f = m.map;
            out.move_log.push_back(m.log);
            ++out.moves_used;
            acted = true;
            break;
          } catch (const std::invalid_argument&) {
          }
        }
      }
      // degenerate linear pair: E_s E_t~ Nielsen when twists coincide
      if (info.kind == StratumKind::NegLinear) {
        const LinearEdgeData& ld = info.linear.front();
        for (const auto& other : infos) {
          if (other.kind != StratumKind::NegLinear || other.index >= info.index) continue;
          const LinearEdgeData& lo = other.linear.front();
          if (lo.axis == ld.axis && lo.exponent == ld.exponent &&
              lo.root.steps == ld.root.steps &&
              g.edges[lo.edge].term == g.edges[e].term) {
            EdgePath tau{g.edges[e].term, {-Graph::oriented(lo.edge)}};
            try {
              MoveResult m = slide(f, e, tau);
              f = m.map;
              out.move_log.push_back(m.log);
              ++out.moves_used;
              acted = true;
            } catch (const std::invalid_argument&) {
            }
            break;
          }
        }
        if (acted) break;
      }
      // ensure the suffix is completely split; sliding along u replaces the
      // suffix by its image
      auto cs = complete_split(f, inv, u);
      if (!cs) {
        try {
          MoveResult m = slide(f, e, u);
          f = m.map;
          out.move_log.push_back(m.log);
          ++out.moves_used;
          acted = true;
          break;
        } catch (const std::invalid_argument&) {
        }
      }
    }
    if (!acted) break;
  }

  // Step 6: EG induction via marking changes until edge images split
  for (int round = 0; round < 8 && out.moves_used < budget; ++round) {
    UnitInventory inv = build_unit_inventory(f, inp_bound);
    CompletelySplitVerdict cs = check_completely_split_map(f, inv);
    if (cs.pass) break;
    // find the lowest EG stratum whose images fail and remark below it
    auto infos = classify_strata(f);
    bool acted = false;
    for (const auto& info : infos) {
      if (info.kind != StratumKind::EG) continue;
      bool bad = false;
      for (int e : info.edges)
        if (!complete_split(f, inv, f.edge_images[e])) bad = true;
      if (!bad) continue;
      try {
        MoveResult m = change_marking_via_restriction(f, info.index);
        f = m.map;
        out.move_log.push_back(m.log);
        ++out.moves_used;
        acted = true;
      } catch (const std::invalid_argument&) {
      }
      break;
    }
    if (!acted) break;
  }

  out.map = f;
  out.ct = check_ct(f, candidate_ffs, inp_bound);
  out.success = !out.ct.failed();
  if (!out.success) {
    for (auto& p : out.ct.properties)
      if (p.verdict == Verdict::Fail) out.blocked += p.name + ": " + p.note + "; ";
  } else {
    out.certificate.push_back("independent CT checker accepts the result");
  }
  return out;
}

}  // namespace traintrack
