#pragma once

// The Recognition-Theorem invariant bundle: expansion factors per attracting
// lamination, principal-class descriptors (fixed subgroups and attractor
// rays), and axes with twist coordinates.  Extraction normalizes the
// representative first (interior fixed points become vertices, NEG strata go
// to normal form) so the bundle is a property of the outer class at desk
// scale, and comparison follows the theorem's hypotheses with honest
// equal-at-depth / inconclusive verdicts.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "traintrack/pipeline.hpp"

namespace traintrack {

struct LaminationDatum {
  int stratum = 0;
  IntPoly charpoly;
  double pf_value = 0.0;
  std::vector<Word> tile_words;  // readings of high tiles, one per stratum edge
  bool tiles_truncated = false;

  // inverse-closed set of bounded subwords of the tiles
  std::set<Word> fingerprint(int length) const {
    std::set<Word> out;
    for (const Word& w : tile_words) {
      if (static_cast<int>(w.size()) < length) continue;
      for (size_t i = 0; i + length <= w.size(); ++i) {
        Word sub(w.begin() + i, w.begin() + i + length);
        Word inv = inverse(sub);
        out.insert(word_less(sub, inv) ? sub : inv);
      }
    }
    return out;
  }
};

struct AxisDatum {
  ConjClass axis;                          // unoriented, root-free
  std::vector<std::pair<int, int>> twists; // (linear edge id, signed twist)

  std::vector<int> twist_multiset() const {
    std::vector<int> out;
    for (auto [e, d] : twists) out.push_back(d);
    std::sort(out.begin(), out.end());
    return out;
  }
};

struct RayDescriptor {
  int vertex = -1;
  int direction = 0;
  Word prefix;          // reading of the expanded ray, truncated
  bool truncated = false;
};

struct PrincipalClassDescriptor {
  int class_id = 0;
  std::vector<int> vertices;
  std::vector<Word> fixed_subgroup_basis;  // Nielsen-reduced, sorted
  std::vector<RayDescriptor> rays;

  int rank() const { return static_cast<int>(fixed_subgroup_basis.size()); }
  std::vector<Word> basis_conjugacy_key() const {
    std::vector<Word> key;
    for (const Word& b : fixed_subgroup_basis)
      key.push_back(ConjClass::of(b, false).representative);
    std::sort(key.begin(), key.end(), word_less);
    return key;
  }
};

struct InvariantBundle {
  int rank = 0;
  std::vector<LaminationDatum> laminations;
  std::vector<PrincipalClassDescriptor> classes;
  std::vector<AxisDatum> axes;
};

// ---------------------------------------------------------------------------
// Extraction
// ---------------------------------------------------------------------------

namespace detail {

// Normalize the representative for extraction: amalgamate spurious
// non-periodic valence-two vertices, subdivide at interior fixed points, and
// put NEG strata into normal form, so that every principal fixed point is a
// vertex and linear data is visible.
inline GraphMap prepare_for_extraction(GraphMap f) {
  std::vector<std::string> log;
  int used = 0;
  for (int round = 0; round < 64; ++round) {
    bool acted = false;
    // drop non-periodic valence-two vertices (cosmetic subdivisions)
    {
      OrbitData od = periodic_orbit_data(f);
      for (int v = 0; v < f.graph().num_vertices && !acted; ++v) {
        if (od.vertex_period[v] > 0) continue;
        if (f.graph().valence(v) != 2) continue;
        try {
          f = valence_two_homotopy(f, v).map;
          acted = true;
        } catch (const std::invalid_argument&) {
        }
      }
    }
    if (acted) continue;
    normalize_neg_strata(f, log, used, 256);
    // make interior fixed points into vertices
    const Graph& g = f.graph();
    for (int e = 0; e < g.num_edges() && !acted; ++e) {
      const EdgePath& im = f.edge_images[e];
      if (im.size() < 2) continue;
      for (size_t q = 1; q + 1 < im.size(); ++q)
        if (im.steps[q] == Graph::oriented(e)) {
          int occ = 0;
          for (size_t i = 0; i < q; ++i)
            if (im.steps[i] == Graph::oriented(e)) ++occ;
          f = subdivide_at_fixed_point(f, e, occ).map;
          acted = true;
          break;
        }
    }
    if (!acted) break;
  }
  return f;
}

// Nielsen loops and arcs between fixed vertices: the spanning inventory from
// nielsen_classes plus the closed families of linear edges.
struct NielsenGeneratorSet {
  NielsenClasses classes;
  std::vector<EdgePath> loops;  // closed Nielsen paths (families w, E w E~)
};

inline NielsenGeneratorSet collect_nielsen_generators(const GraphMap& f, int inp_bound) {
  NielsenGeneratorSet out;
  out.classes = nielsen_classes(f, 1, inp_bound);
  NegNielsenReport neg = find_neg_nielsen_paths(f);
  const Graph& g = f.graph();
  for (const auto& fam : neg.families) {
    out.loops.push_back(fam.representative);
    // the axis loop itself is a Nielsen path at the terminal vertex
    if (image_of_path(f, fam.root) == fam.root) out.loops.push_back(fam.root);
  }
  // closed EG iNps
  auto infos = classify_strata(f);
  for (const auto& info : infos) {
    if (info.kind != StratumKind::EG) continue;
    for (const auto& np : find_eg_inps(f, info.index, inp_bound).paths)
      if (np.period == 1 && np.path.is_closed(g)) out.loops.push_back(np.path);
  }
  return out;
}

inline EdgePath bfs_path(const Graph& g, const std::vector<EdgePath>& arcs, int from,
                         int to) {
  // path from `from` to `to` through the arc system (arcs join fixed vertices)
  std::map<int, EdgePath> seen;
  seen[from] = EdgePath::trivial(from);
  std::vector<int> q{from};
  for (size_t qi = 0; qi < q.size(); ++qi) {
    int v = q[qi];
    if (v == to) return seen[v];
    for (const EdgePath& a : arcs) {
      for (int dirn : {0, 1}) {
        EdgePath arc = dirn ? path_inverse(g, a) : a;
        if (arc.start != v) continue;
        int w = arc.end(g);
        if (seen.count(w)) continue;
        EdgePath p = seen[v];
        p.steps.insert(p.steps.end(), arc.steps.begin(), arc.steps.end());
        seen[w] = tighten_path(g, p);
        q.push_back(w);
      }
    }
  }
  return EdgePath::trivial(from);
}

}  // namespace detail

inline InvariantBundle extract_bundle(const GraphMap& raw, int inp_bound = 200,
                                      int ray_depth = 64) {
  RotationlessVerdict rot = is_rotationless(raw);
  if (!rot.rotationless)
    throw std::invalid_argument("extract_bundle: map is not rotationless: " + rot.witness);
  GraphMap f = detail::prepare_for_extraction(raw);
  const Graph& g = f.graph();
  InvariantBundle out;
  out.rank = f.domain.rank;

  auto infos = classify_strata(f);

  // laminations
  for (const auto& info : infos) {
    if (info.kind != StratumKind::EG) continue;
    LaminationDatum lam;
    lam.stratum = info.index;
    lam.charpoly = info.charpoly;
    lam.pf_value = info.pf_value;
    for (int e : info.edges) {
      EdgePath tile{g.edges[e].init, {Graph::oriented(e)}};
      for (int k = 0; k < 12; ++k) {
        tile = image_of_path(f, tile);
        if (static_cast<int>(tile.size()) >= 4 * ray_depth) break;
      }
      if (static_cast<int>(tile.size()) < 4 * ray_depth) lam.tiles_truncated = true;
      lam.tile_words.push_back(read_path(f.domain, tile));
    }
    out.laminations.push_back(std::move(lam));
  }
  std::sort(out.laminations.begin(), out.laminations.end(),
            [](const LaminationDatum& a, const LaminationDatum& b) {
              if (a.pf_value != b.pf_value) return a.pf_value < b.pf_value;
              return a.charpoly < b.charpoly;
            });

  // axes with twists
  {
    std::map<Word, AxisDatum> by_axis;
    std::map<Word, ConjClass> oriented_ref;  // reference orientation per axis
    for (const auto& info : infos) {
      if (info.kind != StratumKind::NegLinear) continue;
      for (const auto& ld : info.linear) {
        Word key = ld.axis.representative;
        auto [it, fresh] = by_axis.try_emplace(key);
        if (fresh) {
          it->second.axis = ld.axis;
          oriented_ref.emplace(key, ConjClass::of(read_path(f.domain, ld.root_core)));
        }
        ConjClass mine = ConjClass::of(read_path(f.domain, ld.root_core));
        int sign = (mine == oriented_ref.at(key)) ? +1 : -1;
        it->second.twists.push_back({ld.edge, sign * ld.exponent});
      }
    }
    for (auto& [key, axis] : by_axis) {
      // canonical orientation: prefer a positive twist, smallest first
      auto keyof = [](const std::vector<int>& d) {
        int smallest_pos = 1 << 30;
        for (int x : d)
          if (x > 0) smallest_pos = std::min(smallest_pos, x);
        return std::make_tuple(smallest_pos == (1 << 30) ? 1 : 0, smallest_pos, d);
      };
      std::vector<int> now = axis.twist_multiset();
      std::vector<int> flipped;
      for (int x : now) flipped.push_back(-x);
      std::sort(flipped.begin(), flipped.end());
      if (keyof(flipped) < keyof(now))
        for (auto& [e, d] : axis.twists) d = -d;
      out.axes.push_back(axis);
    }
    std::sort(out.axes.begin(), out.axes.end(),
              [](const AxisDatum& a, const AxisDatum& b) {
                return word_less(a.axis.representative, b.axis.representative);
              });
  }

  // principal classes
  {
    PrincipalityReport pr = principal_points(f);
    detail::NielsenGeneratorSet gens = detail::collect_nielsen_generators(f, inp_bound);
    OrbitData od = periodic_orbit_data(f);
    auto eper = detail::edge_periods(f);
    int cid = 0;
    for (const auto& cls : gens.classes.classes) {
      bool any_principal = false;
      for (int v : cls) {
        const auto* ent = pr.entry(v);
        if (ent && ent->principal) any_principal = true;
      }
      if (!any_principal) continue;
      PrincipalClassDescriptor desc;
      desc.class_id = cid++;
      desc.vertices = cls;
      int base = *std::min_element(cls.begin(), cls.end());

      // spanning tree over the class through the Nielsen arcs
      std::vector<EdgePath> arcs;
      for (const auto& np : gens.classes.spanning_paths) {
        bool endpoints_here =
            std::count(cls.begin(), cls.end(), np.path.start) &&
            std::count(cls.begin(), cls.end(), np.path.end(g));
        if (endpoints_here) arcs.push_back(np.path);
      }
      std::map<int, EdgePath> tree;
      tree[base] = EdgePath::trivial(base);
      std::vector<int> order{base};
      std::vector<const EdgePath*> tree_arcs;
      for (size_t qi = 0; qi < order.size(); ++qi) {
        for (const EdgePath& a : arcs) {
          for (int dirn : {0, 1}) {
            EdgePath arc = dirn ? path_inverse(g, a) : a;
            if (arc.start != order[qi] || tree.count(arc.end(g))) continue;
            EdgePath p = tree[order[qi]];
            p.steps.insert(p.steps.end(), arc.steps.begin(), arc.steps.end());
            tree[arc.end(g)] = tighten_path(g, p);
            order.push_back(arc.end(g));
            tree_arcs.push_back(&a);
          }
        }
      }
      // generators: non-tree arcs and closed Nielsen loops based in the class
      std::vector<Word> raw_gens;
      auto add_gen = [&](const EdgePath& loop_arc) {
        if (!tree.count(loop_arc.start) || !tree.count(loop_arc.end(g))) return;
        EdgePath p = tree[loop_arc.start];
        p.steps.insert(p.steps.end(), loop_arc.steps.begin(), loop_arc.steps.end());
        EdgePath back = path_inverse(g, tree[loop_arc.end(g)]);
        p.steps.insert(p.steps.end(), back.steps.begin(), back.steps.end());
        Word w = read_path(f.domain, tighten_path(g, p));
        if (!w.empty()) raw_gens.push_back(w);
      };
      for (const EdgePath& a : arcs) {
        bool in_tree = false;
        for (const EdgePath* t : tree_arcs)
          if (t->steps == a.steps && t->start == a.start) in_tree = true;
        if (!in_tree) add_gen(a);
      }
      for (const EdgePath& loop : gens.loops)
        if (std::count(cls.begin(), cls.end(), loop.start)) add_gen(loop);

      // Nielsen-reduce to a basis of the fixed subgroup
      {
        std::set<Word> uniq;
        std::vector<Word> tuple;
        for (Word& w : raw_gens) {
          Word n = word_less(w, inverse(w)) ? w : inverse(w);
          if (uniq.insert(n).second) tuple.push_back(n);
        }
        // plain greedy Nielsen reduction; drops redundant generators
        bool changed = true;
        while (changed) {
          changed = false;
          for (size_t i = 0; i < tuple.size() && !changed; ++i)
            for (size_t j = 0; j < tuple.size() && !changed; ++j) {
              if (i == j) continue;
              for (int ei : {1, -1})
                for (int ej : {1, -1}) {
                  Word a = ei > 0 ? tuple[i] : inverse(tuple[i]);
                  Word b = ej > 0 ? tuple[j] : inverse(tuple[j]);
                  Word cand = concat(a, b);
                  if (cand.size() < tuple[i].size()) {
                    if (cand.empty())
                      tuple.erase(tuple.begin() + i);
                    else
                      tuple[i] = word_less(cand, inverse(cand)) ? cand : inverse(cand);
                    changed = true;
                    break;
                  }
                }
            }
        }
        std::sort(tuple.begin(), tuple.end(), word_less);
        tuple.erase(std::unique(tuple.begin(), tuple.end()), tuple.end());
        desc.fixed_subgroup_basis = tuple;
      }

      // attractor rays: fixed directions at class vertices whose edges are
      // neither fixed nor linear
      for (int v : cls) {
        for (int d : g.directions_at(v)) {
          if (f.derivative(d) != d) continue;
          int e = Graph::edge_id(d);
          if (eper[e] > 0) continue;  // fixed or periodic edge
          bool linear = false;
          for (const auto& info : infos)
            if (info.kind == StratumKind::NegLinear)
              for (const auto& ld : info.linear)
                if (ld.edge == e) linear = true;
          if (linear) continue;
          RayDescriptor ray;
          ray.vertex = v;
          ray.direction = d;
          EdgePath cur{v, {d}};
          for (int k = 0; k < 24; ++k) {
            EdgePath next = image_of_path(f, cur);
            if (next == cur) break;
            cur = next;
            Word w = read_path(f.domain, concat_paths(g, tree[v], cur));
            if (static_cast<int>(w.size()) >= ray_depth) break;
          }
          Word w = read_path(f.domain, concat_paths(g, tree[v], cur));
          if (static_cast<int>(w.size()) > ray_depth) {
            w.resize(ray_depth);
            ray.truncated = true;
          }
          ray.prefix = w;
          desc.rays.push_back(std::move(ray));
        }
      }
      std::sort(desc.rays.begin(), desc.rays.end(),
                [](const RayDescriptor& a, const RayDescriptor& b) {
                  return word_less(a.prefix, b.prefix);
                });
      out.classes.push_back(std::move(desc));
    }
    std::sort(out.classes.begin(), out.classes.end(),
              [](const PrincipalClassDescriptor& a, const PrincipalClassDescriptor& b) {
                if (a.rank() != b.rank()) return a.rank() < b.rank();
                auto ka = a.basis_conjugacy_key(), kb = b.basis_conjugacy_key();
                if (ka != kb) return ka < kb;
                if (a.rays.size() != b.rays.size()) return a.rays.size() < b.rays.size();
                for (size_t i = 0; i < a.rays.size(); ++i)
                  if (a.rays[i].prefix != b.rays[i].prefix)
                    return word_less(a.rays[i].prefix, b.rays[i].prefix);
                return false;
              });
    for (size_t i = 0; i < out.classes.size(); ++i)
      out.classes[i].class_id = static_cast<int>(i);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Comparison
// ---------------------------------------------------------------------------

enum class BundleVerdict { Equal, EqualAtDepth, Distinct, Inconclusive };

struct BundleComparison {
  BundleVerdict verdict = BundleVerdict::Equal;
  std::string witness;  // exact witness for Distinct; scope note otherwise
};

namespace detail {

// candidate conjugators g with g x g~ = y, up to a few centralizer powers
inline std::vector<Word> conjugator_candidates(const Word& x, const Word& y) {
  std::vector<Word> out;
  auto [cx, px] = cyclic_reduce(x);
  auto [cy, py] = cyclic_reduce(y);
  if (cx.size() != cy.size()) return out;
  Word rot = cy;
  for (size_t off = 0; off < std::max<size_t>(cx.size(), 1); ++off) {
    if (rot == cx) {
      Word s(cx.begin(), cx.begin() + off);
      // y = py s~ cx s py~  =>  g0 = py s~ px~
      Word g0 = concat(py, inverse(s), inverse(px));
      auto [core, conj] = cyclic_reduce(x);
      for (int k = -2; k <= 2; ++k) {
        Word g = concat(g0, concat(conj, pow(core, k), inverse(conj)));
        if (concat(g, concat(x, inverse(g))) == y) out.push_back(g);
      }
    }
    if (!rot.empty()) std::rotate(rot.begin(), rot.begin() + 1, rot.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

inline BundleComparison compare_bundles(const InvariantBundle& x,
                                        const InvariantBundle& y, int depth = 64) {
  if (x.rank != y.rank)
    throw std::invalid_argument("compare_bundles: rank mismatch");
  BundleComparison out;
  bool truncated = false;
  bool inconclusive = false;
  std::string scope;

  // laminations: expansion factors as algebraic numbers
  if (x.laminations.size() != y.laminations.size()) {
    out.verdict = BundleVerdict::Distinct;
    out.witness = "lamination counts differ: " + std::to_string(x.laminations.size()) +
                  " vs " + std::to_string(y.laminations.size());
    return out;
  }
  {
    std::vector<bool> used(y.laminations.size(), false);
    for (const auto& lx : x.laminations) {
      int match = -1;
      for (size_t j = 0; j < y.laminations.size(); ++j) {
        if (used[j]) continue;
        if (pf_roots_equal(lx.charpoly, lx.pf_value, y.laminations[j].charpoly,
                           y.laminations[j].pf_value)) {
          match = static_cast<int>(j);
          break;
        }
      }
      if (match < 0) {
        out.verdict = BundleVerdict::Distinct;
        out.witness = "expansion factor " + poly_to_string(lx.charpoly) +
                      " has no partner";
        return out;
      }
      used[match] = true;
      const auto& ly = y.laminations[match];
      int fl = std::min(8, depth);
      if (lx.fingerprint(fl) != ly.fingerprint(fl)) {
        inconclusive = true;
        scope = "lamination leaf fingerprints differ at depth " + std::to_string(fl);
      }
      if (lx.tiles_truncated || ly.tiles_truncated) truncated = true;
    }
  }

  // axes and twist coordinates
  {
    std::map<Word, std::vector<int>> ax, ay;
    for (const auto& a : x.axes) ax[a.axis.representative] = a.twist_multiset();
    for (const auto& a : y.axes) ay[a.axis.representative] = a.twist_multiset();
    for (auto& [w, dx] : ax) {
      auto it = ay.find(w);
      if (it == ay.end()) {
        out.verdict = BundleVerdict::Distinct;
        out.witness = "axis present on one side only";
        return out;
      }
      if (dx != it->second) {
        std::ostringstream os;
        os << "twist multiset {";
        for (size_t i = 0; i < dx.size(); ++i) os << (i ? " " : "") << dx[i];
        os << "} != {";
        for (size_t i = 0; i < it->second.size(); ++i)
          os << (i ? " " : "") << it->second[i];
        os << "} on a shared axis";
        out.verdict = BundleVerdict::Distinct;
        out.witness = os.str();
        return out;
      }
    }
    for (auto& [w, dy] : ay)
      if (!ax.count(w)) {
        out.verdict = BundleVerdict::Distinct;
        out.witness = "axis present on one side only";
        return out;
      }
  }

  // principal classes: fixed subgroups up to conjugacy, then rays
  {
    if (x.classes.size() != y.classes.size()) {
      out.verdict = BundleVerdict::Distinct;
      out.witness = "principal class counts differ: " + std::to_string(x.classes.size()) +
                    " vs " + std::to_string(y.classes.size());
      return out;
    }
    std::vector<bool> used(y.classes.size(), false);
    for (const auto& cx : x.classes) {
      int match = -1;
      for (size_t j = 0; j < y.classes.size(); ++j) {
        if (used[j]) continue;
        const auto& cy = y.classes[j];
        if (cx.rank() != cy.rank()) continue;
        if (cx.basis_conjugacy_key() != cy.basis_conjugacy_key()) continue;
        match = static_cast<int>(j);
        break;
      }
      if (match < 0) {
        out.verdict = BundleVerdict::Distinct;
        out.witness = "a principal class (rank " + std::to_string(cx.rank()) +
                      ") has no partner with the same basis classes";
        return out;
      }
      used[match] = true;
      const auto& cy = y.classes[match];
      // membership cross-check through a bounded conjugator search
      if (cx.rank() > 0) {
        bool aligned = false;
        SubgroupGraph hy(cy.fixed_subgroup_basis);
        for (const Word& ycand : cy.fixed_subgroup_basis) {
          for (const Word& gcand :
               detail::conjugator_candidates(cx.fixed_subgroup_basis.front(), ycand)) {
            bool all = true;
            for (const Word& b : cx.fixed_subgroup_basis)
              if (!hy.contains(concat(gcand, concat(b, inverse(gcand))))) all = false;
            if (all) {
              aligned = true;
              break;
            }
          }
          if (aligned) break;
        }
        if (!aligned) {
          inconclusive = true;
          scope = "fixed-subgroup alignment not found within the search bound";
        }
      }
      // rays: compare truncated prefixes
      if (cx.rays.size() != cy.rays.size()) {
        inconclusive = true;
        scope = "attractor ray counts differ (" + std::to_string(cx.rays.size()) +
                " vs " + std::to_string(cy.rays.size()) + ")";
      } else {
        for (size_t r = 0; r < cx.rays.size(); ++r) {
          const auto& rx = cx.rays[r];
          const auto& ry = cy.rays[r];
          size_t n = std::min({rx.prefix.size(), ry.prefix.size(),
                               static_cast<size_t>(depth)});
          if (!std::equal(rx.prefix.begin(), rx.prefix.begin() + n, ry.prefix.begin())) {
            inconclusive = true;
            scope = "ray prefixes differ";
          }
          if (rx.truncated || ry.truncated) truncated = true;
        }
      }
    }
  }

  if (inconclusive) {
    out.verdict = BundleVerdict::Inconclusive;
    out.witness = scope;
  } else if (truncated) {
    out.verdict = BundleVerdict::EqualAtDepth;
    out.witness = "equal to comparison depth " + std::to_string(depth);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization: deterministic line-oriented text
// ---------------------------------------------------------------------------

inline std::string serialize_bundle(const InvariantBundle& b,
                                    const std::vector<std::string>& names) {
  std::ostringstream os;
  os << "format 1\n";
  os << "bundle rank " << b.rank << "\n";
  os << "LAMINATIONS " << b.laminations.size() << "\n";
  for (const auto& lam : b.laminations) {
    os << "lamination pf ";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", lam.pf_value);
    os << buf << " charpoly " << poly_to_string(lam.charpoly) << "\n";
  }
  os << "CLASSES " << b.classes.size() << "\n";
  for (const auto& cls : b.classes) {
    os << "class " << cls.class_id << " rank " << cls.rank() << " rays "
       << cls.rays.size() << "\n";
    for (const Word& w : cls.fixed_subgroup_basis)
      os << "  basis " << word_to_string(w, names) << "\n";
    for (const auto& ray : cls.rays)
      os << "  ray " << word_to_string(ray.prefix, names)
         << (ray.truncated ? " ..." : "") << "\n";
  }
  os << "AXES " << b.axes.size() << "\n";
  for (const auto& axis : b.axes) {
    os << "axis " << word_to_string(axis.axis.representative, names) << " twists";
    for (int d : axis.twist_multiset()) os << " " << d;
    os << "\n";
  }
  return os.str();
}

inline std::string verdict_name(BundleVerdict v) {
  switch (v) {
    case BundleVerdict::Equal: return "equal";
    case BundleVerdict::EqualAtDepth: return "equal-at-depth";
    case BundleVerdict::Distinct: return "distinct";
    case BundleVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

}  // namespace traintrack
