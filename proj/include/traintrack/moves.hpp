#pragma once

// Graph-rewriting moves on topological representatives.  Every move returns
// a new GraphMap plus path correspondences in both directions; the outer
// class is preserved and the transported marking is re-verified on the spot.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "traintrack/graph_map.hpp"

namespace traintrack {

struct MoveResult {
  GraphMap map;
  PathCorrespondence forward;   // old tight paths (vertex endpoints) -> new
  PathCorrespondence backward;  // new -> old; identity-like for remarking
  std::string log;              // one replayable line: name + parameters
  std::vector<std::string> certificate;
};

enum class FoldType { Partial, ProperFull, ImproperFull };

inline std::string fold_type_name(FoldType t) {
  switch (t) {
    case FoldType::Partial: return "partial";
    case FoldType::ProperFull: return "proper";
    case FoldType::ImproperFull: return "improper";
  }
  return "?";
}

namespace detail {

// If reading the forward paths yields c x_i c~ for a common c, conjugate all
// backward words so the marking verifies exactly.
inline bool normalize_marking(MarkedGraph& mg) {
  if (verify_marking(mg)) return true;
  std::vector<Word> rs;
  for (int i = 1; i <= mg.rank; ++i) rs.push_back(read_path(mg, mg.marking.forward[i - 1]));
  auto [core, p] = cyclic_reduce(rs[0]);
  if (core != Word{1}) return false;
  for (int k = -4; k <= 4; ++k) {
    Word c = concat(p, pow(Word{1}, k));
    bool ok = true;
    for (int i = 1; i <= mg.rank && ok; ++i)
      if (rs[i - 1] != concat(c, Word{i}, inverse(c))) ok = false;
    if (ok) {
      Word ci = inverse(c);
      for (Word& w : mg.marking.backward) w = concat(ci, w, c);
      return verify_marking(mg);
    }
  }
  return false;
}

// Group new edges by inherited stratum index and refine.
inline GraphMap finish_map(MarkedGraph mg, std::vector<EdgePath> images,
                           std::vector<int> vimages,
                           const std::vector<int>& inherited_stratum) {
  if (!normalize_marking(mg))
    throw std::logic_error("move broke the marking; this is a bug");
  std::map<int, std::vector<int>> by;
  for (int e = 0; e < static_cast<int>(inherited_stratum.size()); ++e)
    by[inherited_stratum[e]].push_back(e);
  std::vector<std::vector<int>> strata;
  for (auto& [s, es] : by) strata.push_back(es);
  GraphMap g = GraphMap::make(std::move(mg), std::move(images), std::move(vimages),
                              std::move(strata));
  return build_filtration(g);
}

inline PathCorrespondence identity_correspondence(const Graph& g) {
  PathCorrespondence pc;
  pc.vertex_map.resize(g.num_vertices);
  std::iota(pc.vertex_map.begin(), pc.vertex_map.end(), 0);
  for (int e = 0; e < g.num_edges(); ++e)
    pc.edge_paths.push_back(EdgePath{g.edges[e].init, {Graph::oriented(e)}});
  return pc;
}

}  // namespace detail

// m2 applied after m1 (both forward correspondences old->mid->new).
inline PathCorrespondence compose_correspondences(const Graph& final_graph,
                                                  const PathCorrespondence& first,
                                                  const PathCorrespondence& second) {
  PathCorrespondence out;
  out.vertex_map.resize(first.vertex_map.size());
  for (size_t v = 0; v < first.vertex_map.size(); ++v)
    out.vertex_map[v] = second.vertex_map.at(first.vertex_map[v]);
  for (const EdgePath& p : first.edge_paths)
    out.edge_paths.push_back(second.apply(final_graph, p));
  return out;
}

inline MoveResult compose_moves(const Graph& old_graph, const MoveResult& m1,
                                const MoveResult& m2) {
  MoveResult out;
  out.map = m2.map;
  out.forward = compose_correspondences(m2.map.graph(), m1.forward, m2.forward);
  out.backward = compose_correspondences(old_graph, m2.backward, m1.backward);
  out.log = m1.log + "\n" + m2.log;
  out.certificate = m1.certificate;
  out.certificate.insert(out.certificate.end(), m2.certificate.begin(),
                         m2.certificate.end());
  return out;
}

// ---------------------------------------------------------------------------
// Subdivision
// ---------------------------------------------------------------------------

// Subdivide edges at preimages of image-path vertices: for each edge e, cuts
// are positions 0 < k < |f(e)| in its image path.  New vertices map to old
// vertices, so the point set is automatically orbit-closed.
inline MoveResult subdivide(const GraphMap& f, const std::map<int, std::vector<int>>& cuts) {
  const Graph& g = f.graph();
  for (auto& [e, ks] : cuts) {
    if (e < 0 || e >= g.num_edges()) throw std::invalid_argument("subdivide: bad edge");
    for (size_t i = 0; i < ks.size(); ++i) {
      if (ks[i] <= 0 || ks[i] >= static_cast<int>(f.edge_images[e].size()))
        throw std::invalid_argument("subdivide: cut position outside the image");
      if (i && ks[i] <= ks[i - 1]) throw std::invalid_argument("subdivide: cuts not ascending");
    }
  }

  Graph ng;
  ng.num_vertices = g.num_vertices;
  std::vector<std::vector<int>> parts(g.num_edges());  // new edge ids per old edge
  std::vector<int> inherited;                          // stratum per new edge
  std::vector<int> part_owner;                         // old edge per new edge
  std::vector<int> new_vertex_image;                   // images of fresh vertices
  std::vector<std::vector<int>> cut_positions(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) {
    auto it = cuts.find(e);
    std::vector<int> ks = it == cuts.end() ? std::vector<int>{} : it->second;
    cut_positions[e] = ks;
    int prev_vertex = g.edges[e].init;
    for (size_t j = 0; j <= ks.size(); ++j) {
      int tail = (j == ks.size()) ? g.edges[e].term : ng.num_vertices++;
      parts[e].push_back(ng.num_edges());
      ng.edges.push_back({prev_vertex, tail});
      inherited.push_back(f.stratum_of[e]);
      part_owner.push_back(e);
      if (j < ks.size()) {
        // fresh vertex maps to the old vertex at image position ks[j]
        int pos = ks[j];
        int old_target = g.term_of(f.edge_images[e].steps[pos - 1]);
        new_vertex_image.push_back(old_target);
      }
      prev_vertex = tail;
    }
  }

  PathCorrespondence fwd;
  fwd.vertex_map.resize(g.num_vertices);
  std::iota(fwd.vertex_map.begin(), fwd.vertex_map.end(), 0);
  for (int e = 0; e < g.num_edges(); ++e) {
    EdgePath p;
    p.start = g.edges[e].init;
    for (int id : parts[e]) p.steps.push_back(Graph::oriented(id));
    fwd.edge_paths.push_back(p);
  }

  PathCorrespondence bwd;
  bwd.vertex_map.resize(ng.num_vertices);
  for (int v = 0; v < g.num_vertices; ++v) bwd.vertex_map[v] = v;
  for (int v = g.num_vertices; v < ng.num_vertices; ++v) bwd.vertex_map[v] = -1;
  for (int ne = 0; ne < ng.num_edges(); ++ne) {
    int e = part_owner[ne];
    if (ne == parts[e].front())
      bwd.edge_paths.push_back(EdgePath{g.edges[e].init, {Graph::oriented(e)}});
    else
      bwd.edge_paths.push_back(EdgePath::trivial(g.edges[e].term));
  }
  // fresh vertices sit inside old edges; park them on the old terminal vertex
  for (int v = g.num_vertices; v < ng.num_vertices; ++v)
    for (int ne = 0; ne < ng.num_edges(); ++ne)
      if (ng.edges[ne].term == v) bwd.vertex_map[v] = g.edges[part_owner[ne]].term;

  // vertex images
  std::vector<int> vimg(ng.num_vertices);
  for (int v = 0; v < g.num_vertices; ++v) vimg[v] = f.vertex_images[v];
  for (int v = g.num_vertices; v < ng.num_vertices; ++v)
    vimg[v] = new_vertex_image[v - g.num_vertices];

  // edge images: rewrite old image, then split at rewritten cut boundaries
  std::vector<EdgePath> images(ng.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) {
    EdgePath whole = fwd.apply(ng, f.edge_images[e]);
    // prefix lengths in the rewritten path for each old step count
    std::vector<int> acc{0};
    for (int s : f.edge_images[e].steps)
      acc.push_back(acc.back() + static_cast<int>(parts[Graph::edge_id(s)].size()));
    int from = 0;
    for (size_t j = 0; j <= cut_positions[e].size(); ++j) {
      int to = (j == cut_positions[e].size()) ? acc.back() : acc[cut_positions[e][j]];
      EdgePath seg;
      seg.steps.assign(whole.steps.begin() + from, whole.steps.begin() + to);
      seg.start = seg.steps.empty() ? -1 : ng.init_of(seg.steps.front());
      images[parts[e][j]] = seg;
      from = to;
    }
  }

  MarkedGraph nmg;
  nmg.graph = ng;
  nmg.rank = f.domain.rank;
  nmg.marking.base = f.domain.marking.base;
  for (const EdgePath& p : f.domain.marking.forward)
    nmg.marking.forward.push_back(fwd.apply(ng, p));
  for (int ne = 0; ne < ng.num_edges(); ++ne) {
    int e = part_owner[ne];
    nmg.marking.backward.push_back(ne == parts[e].front() ? f.domain.marking.backward[e]
                                                          : Word{});
  }

  MoveResult out;
  out.map = detail::finish_map(nmg, images, vimg, inherited);
  out.forward = fwd;
  out.backward = bwd;
  std::ostringstream os;
  os << "subdivide";
  for (auto& [e, ks] : cuts) {
    os << " " << e << ":";
    for (size_t i = 0; i < ks.size(); ++i) os << (i ? "," : "") << ks[i];
  }
  out.log = os.str();
  out.certificate.push_back("rank preserved");
  return out;
}

// Subdivide edge e at its interior fixed point over the occ-th crossing of
// +e inside f(e); the fresh vertex is fixed by the new map.
inline MoveResult subdivide_at_fixed_point(const GraphMap& f, int e, int occ = 0) {
  const Graph& g = f.graph();
  const EdgePath& im = f.edge_images[e];
  int pos = -1, seen = 0;
  for (size_t i = 0; i < im.steps.size(); ++i)
    if (im.steps[i] == Graph::oriented(e)) {
      if (seen++ == occ) {
        pos = static_cast<int>(i);
        break;
      }
    }
  if (pos == -1)
    throw std::invalid_argument("subdivide_at_fixed_point: no such crossing");

  // one cut; the split is self-referential, so build directly
  Graph ng = g;
  int x = ng.num_vertices++;
  int e_a = e;  // reuse id for the first part
  int e_b = ng.num_edges();
  int old_term = ng.edges[e].term;
  ng.edges[e].term = x;
  ng.edges.push_back({x, old_term});

  PathCorrespondence fwd;
  fwd.vertex_map.resize(g.num_vertices);
  std::iota(fwd.vertex_map.begin(), fwd.vertex_map.end(), 0);
  for (int ee = 0; ee < g.num_edges(); ++ee) {
    if (ee == e)
      fwd.edge_paths.push_back(
          EdgePath{g.edges[e].init, {Graph::oriented(e_a), Graph::oriented(e_b)}});
    else
      fwd.edge_paths.push_back(EdgePath{g.edges[ee].init, {Graph::oriented(ee)}});
  }
  PathCorrespondence bwd;
  bwd.vertex_map.resize(ng.num_vertices);
  for (int v = 0; v < g.num_vertices; ++v) bwd.vertex_map[v] = v;
  bwd.vertex_map[x] = old_term;
  for (int ne = 0; ne < ng.num_edges(); ++ne) {
    if (ne == e_a)
      bwd.edge_paths.push_back(EdgePath{g.edges[e].init, {Graph::oriented(e)}});
    else if (ne == e_b)
      bwd.edge_paths.push_back(EdgePath::trivial(old_term));
    else
      bwd.edge_paths.push_back(EdgePath{g.edges[ne].init, {Graph::oriented(ne)}});
  }

  std::vector<EdgePath> images(ng.num_edges());
  std::vector<int> inherited(ng.num_edges());
  for (int ee = 0; ee < g.num_edges(); ++ee) {
    if (ee == e) continue;
    images[ee] = fwd.apply(ng, f.edge_images[ee]);
    inherited[ee] = f.stratum_of[ee];
  }
  inherited[e_a] = f.stratum_of[e];
  inherited[e_b] = f.stratum_of[e];
  // rewrite f(e) and split around the crossing: prefix . e_a | e_b . suffix
  EdgePath whole = fwd.apply(ng, f.edge_images[e]);
  // position of the e_a e_b pair inside the rewritten path: crossing at old
  // index pos; each old step expands to 1 step except e which expands to 2.
  int rew = 0;
  for (int i = 0; i < pos; ++i)
    rew += (Graph::edge_id(im.steps[i]) == e) ? 2 : 1;
  EdgePath first, second;
  first.steps.assign(whole.steps.begin(), whole.steps.begin() + rew + 1);
  first.start = ng.init_of(first.steps.front());
  second.steps.assign(whole.steps.begin() + rew + 1, whole.steps.end());
  second.start = x;
  images[e_a] = first;
  images[e_b] = second;

  std::vector<int> vimg(ng.num_vertices);
  for (int v = 0; v < g.num_vertices; ++v) vimg[v] = f.vertex_images[v];
  vimg[x] = x;  // the fixed point becomes a fixed vertex

  MarkedGraph nmg;
  nmg.graph = ng;
  nmg.rank = f.domain.rank;
  nmg.marking.base = f.domain.marking.base;
  for (const EdgePath& p : f.domain.marking.forward)
    nmg.marking.forward.push_back(fwd.apply(ng, p));
  nmg.marking.backward = f.domain.marking.backward;
  nmg.marking.backward.push_back(Word{});  // e_b reads trivially

  MoveResult out;
  out.map = detail::finish_map(nmg, images, vimg, inherited);
  out.forward = fwd;
  out.backward = bwd;
  out.log = "subdivide-fixed " + std::to_string(e) + " " + std::to_string(occ);
  out.certificate.push_back("fresh vertex is fixed");
  return out;
}

// ---------------------------------------------------------------------------
// Folds
// ---------------------------------------------------------------------------

namespace detail {

// Identify oriented edge X with the path Q (same initial vertex, equal map
// images).  term(X) merges into Q's endpoint.  The base-side vertex keeps
// its reading.
inline MoveResult fold_identify(const GraphMap& f, int X, const EdgePath& Q) {
  const Graph& g = f.graph();
  if (g.init_of(X) != Q.start) throw std::invalid_argument("fold: initial vertices differ");
  EdgePath xpath{g.init_of(X), {X}};
  if (image_of_path(f, xpath) != image_of_path(f, Q))
    throw std::invalid_argument("fold: images are not identifiable");
  int xe = Graph::edge_id(X);
  for (int s : Q.steps)
    if (Graph::edge_id(s) == xe) throw std::invalid_argument("fold: path crosses the folded edge");
  int z = g.term_of(X), w = Q.end(g);
  if (z == w) throw std::invalid_argument("fold: identification would change the rank");

  int base = f.domain.marking.base;
  int keep = (base == z) ? z : w;  // survivor label for the merged vertex
  int gone = (keep == z) ? w : z;

  // vertex ids: drop `gone`, shift the tail
  Graph ng;
  ng.num_vertices = g.num_vertices - 1;
  auto vmap = [&](int v) {
    if (v == gone) v = keep;
    return v - (v > gone ? 1 : 0);
  };
  std::vector<int> new_edge_id(g.num_edges(), -1);
  for (int e = 0; e < g.num_edges(); ++e) {
    if (e == xe) continue;
    new_edge_id[e] = ng.num_edges();
    ng.edges.push_back({vmap(g.edges[e].init), vmap(g.edges[e].term)});
  }

  PathCorrespondence fwd;
  fwd.vertex_map.resize(g.num_vertices);
  for (int v = 0; v < g.num_vertices; ++v) fwd.vertex_map[v] = vmap(v);
  fwd.edge_paths.resize(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) {
    if (e == xe) continue;
    fwd.edge_paths[e] = EdgePath{vmap(g.edges[e].init), {Graph::oriented(new_edge_id[e])}};
  }
  {  // X maps onto Q's image in the new graph
    EdgePath q;
    q.start = vmap(Q.start);
    for (int s : Q.steps)
      q.steps.push_back(s > 0 ? Graph::oriented(new_edge_id[Graph::edge_id(s)])
                              : -Graph::oriented(new_edge_id[Graph::edge_id(s)]));
    if (X > 0)
      fwd.edge_paths[xe] = q;
    else
      fwd.edge_paths[xe] = path_inverse(ng, q);
  }

  // backward: dress edges at the vanished vertex with the connecting path
  EdgePath z_to_w = concat_paths(g, path_inverse(g, xpath), Q);  // z -> w
  EdgePath keep_to_gone = (keep == w) ? path_inverse(g, z_to_w) : z_to_w;
  PathCorrespondence bwd;
  bwd.vertex_map.resize(ng.num_vertices);
  for (int v = 0; v < g.num_vertices; ++v)
    if (v != gone) bwd.vertex_map[vmap(v)] = v;
  bwd.edge_paths.resize(ng.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) {
    if (e == xe) continue;
    EdgePath p{g.edges[e].init, {Graph::oriented(e)}};
    if (g.edges[e].init == gone) p = concat_paths(g, keep_to_gone, p);
    if (g.edges[e].term == gone)
      p = concat_paths(g, p, path_inverse(g, keep_to_gone));
    bwd.edge_paths[new_edge_id[e]] = p;
  }

  // new map: F . f . s
  std::vector<EdgePath> images(ng.num_edges());
  std::vector<int> inherited(ng.num_edges());
  for (int ne = 0; ne < ng.num_edges(); ++ne) {
    EdgePath s = bwd.edge_paths[ne];
    images[ne] = fwd.apply(ng, image_of_path(f, s));
    if (images[ne].is_trivial())
      throw std::invalid_argument("fold: an edge image becomes trivial");
  }
  for (int e = 0; e < g.num_edges(); ++e)
    if (e != xe) inherited[new_edge_id[e]] = f.stratum_of[e];
  std::vector<int> vimg(ng.num_vertices);
  for (int nv = 0; nv < ng.num_vertices; ++nv)
    vimg[nv] = fwd.vertex_map[f.vertex_images[bwd.vertex_map[nv]]];

  MarkedGraph nmg;
  nmg.graph = ng;
  nmg.rank = f.domain.rank;
  nmg.marking.base = fwd.vertex_map[base];
  for (const EdgePath& p : f.domain.marking.forward)
    nmg.marking.forward.push_back(fwd.apply(ng, p));
  for (int ne = 0; ne < ng.num_edges(); ++ne)
    nmg.marking.backward.push_back(read_path(f.domain, bwd.edge_paths[ne]));

  MoveResult out;
  out.map = detail::finish_map(nmg, images, vimg, inherited);
  out.forward = fwd;
  out.backward = bwd;
  out.log = "fold " + std::to_string(X) + " onto path";
  if (out.map.graph().first_betti() != g.first_betti())
    throw std::logic_error("fold changed the rank; this is a bug");
  out.certificate.push_back("rank preserved");
  return out;
}

}  // namespace detail

// Fold two directions at a common vertex whose maximal initial segments have
// equal images.  Subdivides implicitly when the common image prefix is a
// proper prefix of either image.
inline MoveResult elementary_fold(const GraphMap& f, int d1, int d2) {
  const Graph& g = f.graph();
  if (d1 == d2) throw std::invalid_argument("elementary_fold: degenerate turn");
  if (g.init_of(d1) != g.init_of(d2))
    throw std::invalid_argument("elementary_fold: directions at different vertices");
  EdgePath p1{g.init_of(d1), {d1}}, p2{g.init_of(d2), {d2}};
  EdgePath i1 = image_of_path(f, p1), i2 = image_of_path(f, p2);
  size_t common = 0;
  while (common < i1.size() && common < i2.size() &&
         i1.steps[common] == i2.steps[common])
    ++common;
  if (common == 0) throw std::invalid_argument("elementary_fold: images not identifiable");

  // cut positions within each full edge image (orientation adjusted)
  auto cut_for = [&](int d, size_t len) -> std::optional<std::pair<int, int>> {
    int e = Graph::edge_id(d);
    size_t full = f.edge_images[e].size();
    if (len == full) return std::nullopt;  // whole edge participates
    int pos = d > 0 ? static_cast<int>(len) : static_cast<int>(full - len);
    return std::make_pair(e, pos);
  };
  auto c1 = cut_for(d1, common), c2 = cut_for(d2, common);
  std::map<int, std::vector<int>> cuts;
  if (c1) cuts[c1->first].push_back(c1->second);
  if (c2) {
    auto& v = cuts[c2->first];
    v.push_back(c2->second);
    std::sort(v.begin(), v.end());
    if (v.size() == 2 && v[0] == v[1])
      throw std::invalid_argument("elementary_fold: overlapping segments on one edge");
  }
  if (c1 && c2 && c1->first == c2->first && cuts[c1->first].size() == 2) {
    // both segments on the same edge: they must not overlap
    size_t full = f.edge_images[c1->first].size();
    if (common * 2 > full)
      throw std::invalid_argument("elementary_fold: overlapping segments on one edge");
  }

  GraphMap cur = f;
  MoveResult sub;
  bool did_sub = !cuts.empty();
  if (did_sub) {
    sub = subdivide(f, cuts);
    cur = sub.map;
  }
  // locate the two initial segments in the (possibly subdivided) graph
  auto segment_dir = [&](int d, bool was_cut) -> int {
    if (!did_sub) return d;
    const EdgePath& q = sub.forward.edge_paths[Graph::edge_id(d)];
    (void)was_cut;
    return d > 0 ? q.steps.front() : -q.steps.back();
  };
  int s1 = segment_dir(d1, static_cast<bool>(c1));
  int s2 = segment_dir(d2, static_cast<bool>(c2));
  EdgePath q1{cur.graph().init_of(s1), {s1}};
  MoveResult fold = detail::fold_identify(cur, s2, q1);
  MoveResult out = did_sub ? compose_moves(g, sub, fold) : fold;
  std::ostringstream os;
  os << "fold-directions " << d1 << " " << d2;
  out.log = os.str();
  return out;
}

// Relabel the orientation of an edge.  Trivial on the topology; used to put
// NEG strata into the normal form f(E) = E'.u.
inline MoveResult reorient_edge(const GraphMap& f, int edge) {
  const Graph& g = f.graph();
  Graph ng = g;
  std::swap(ng.edges[edge].init, ng.edges[edge].term);
  auto flip = [&](const EdgePath& p, const Graph& target) {
    EdgePath q = p;
    for (int& s : q.steps)
      if (Graph::edge_id(s) == edge) s = -s;
    (void)target;
    return q;
  };
  PathCorrespondence fwd = detail::identity_correspondence(g);
  fwd.edge_paths[edge] = EdgePath{g.edges[edge].init, {-Graph::oriented(edge)}};
  PathCorrespondence bwd = detail::identity_correspondence(ng);
  bwd.edge_paths[edge] = EdgePath{ng.edges[edge].init, {-Graph::oriented(edge)}};

  std::vector<EdgePath> images(ng.num_edges());
  std::vector<int> inherited(ng.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) {
    EdgePath im = flip(f.edge_images[e], ng);
    if (e == edge) {
      im = path_inverse(ng, im);
    } else {
      im.start = f.edge_images[e].start;
    }
    images[e] = im;
    inherited[e] = f.stratum_of[e];
  }
  MarkedGraph nmg;
  nmg.graph = ng;
  nmg.rank = f.domain.rank;
  nmg.marking.base = f.domain.marking.base;
  for (const EdgePath& p : f.domain.marking.forward)
    nmg.marking.forward.push_back(flip(p, ng));
  nmg.marking.backward = f.domain.marking.backward;
  nmg.marking.backward[edge] = inverse(f.domain.marking.backward[edge]);

  MoveResult out;
  out.map = detail::finish_map(nmg, images, f.vertex_images, inherited);
  out.forward = fwd;
  out.backward = bwd;
  out.log = "reorient " + std::to_string(edge);
  return out;
}

// ---------------------------------------------------------------------------
// Collapse and valence-two homotopy
// ---------------------------------------------------------------------------

inline MoveResult collapse_move(const GraphMap& f, const std::vector<int>& forest) {
  CollapseResult cr = collapse_forest(f.domain, forest);
  const Graph& ng = cr.collapsed.graph;
  std::vector<EdgePath> images(ng.num_edges());
  std::vector<int> inherited(ng.num_edges());
  for (int ne = 0; ne < ng.num_edges(); ++ne) {
    images[ne] = cr.forward.apply(ng, image_of_path(f, cr.backward.edge_paths[ne]));
    if (images[ne].is_trivial())
      throw std::invalid_argument("collapse: an edge image becomes trivial");
    inherited[ne] = f.stratum_of[cr.surviving_edge_of_new[ne]];
  }
  std::vector<int> vimg(ng.num_vertices);
  for (int nv = 0; nv < ng.num_vertices; ++nv)
    vimg[nv] = cr.forward.vertex_map[f.vertex_images[cr.backward.vertex_map[nv]]];

  MoveResult out;
  out.map = detail::finish_map(cr.collapsed, images, vimg, inherited);
  out.forward = cr.forward;
  out.backward = cr.backward;
  std::ostringstream os;
  os << "collapse";
  for (int e : forest) os << " " << e;
  out.log = os.str();
  if (out.map.graph().first_betti() != f.graph().first_betti())
    throw std::logic_error("collapse changed the rank; this is a bug");
  out.certificate.push_back("rank preserved");
  return out;
}

// Amalgamate the two edges at a valence-two vertex by collapsing the edge on
// the absorbed side (never an EG edge, never a loop).
inline MoveResult valence_two_homotopy(const GraphMap& f, int v) {
  const Graph& g = f.graph();
  auto dirs = g.directions_at(v);
  if (dirs.size() != 2) throw std::invalid_argument("valence_two_homotopy: valence != 2");
  int e1 = Graph::edge_id(dirs[0]), e2 = Graph::edge_id(dirs[1]);
  if (e1 == e2) throw std::invalid_argument("valence_two_homotopy: loop vertex");
  auto infos = classify_strata(f);
  auto is_eg = [&](int e) { return infos[f.stratum_of[e]].kind == StratumKind::EG; };
  int absorb;
  if (!is_eg(e2))
    absorb = e2;
  else if (!is_eg(e1))
    absorb = e1;
  else
    throw std::invalid_argument("valence_two_homotopy: both sides are EG edges");
  // prefer absorbing the lower stratum side when both qualify
  if (!is_eg(e1) && !is_eg(e2) && f.stratum_of[e1] < f.stratum_of[e2]) absorb = e1;
  MoveResult out = collapse_move(f, {absorb});
  out.log = "valence-two " + std::to_string(v);
  return out;
}

// ---------------------------------------------------------------------------
// Sliding (single-edge NEG strata)
// ---------------------------------------------------------------------------

inline MoveResult slide(const GraphMap& f, int edge, const EdgePath& tau) {
  const Graph& g = f.graph();
  auto infos = classify_strata(f);
  int s = f.stratum_of.at(edge);
  const StratumInfo& info = infos[s];
  bool neg = info.kind == StratumKind::NegLinear || info.kind == StratumKind::NegGeneral ||
             info.kind == StratumKind::NegFixed || info.kind == StratumKind::NegPeriodic;
  if (!neg || !info.normal_form)
    throw std::invalid_argument("slide: edge is not in a normal-form NEG stratum");
  if (info.edges.size() != 1)
    throw std::invalid_argument("slide: only single-edge NEG strata are supported");
  if (info.kind == StratumKind::NegFixed || info.kind == StratumKind::NegPeriodic)
    throw std::invalid_argument("slide: edge is periodic");
  if (!tau.valid(g) || tau.start != g.edges[edge].term)
    throw std::invalid_argument("slide: path must start at the terminal vertex of the edge");
  for (int st : tau.steps)
    if (f.stratum_of[Graph::edge_id(st)] >= s)
      throw std::invalid_argument("slide: path leaves the lower strata");

  // u with f(E) = E.u
  EdgePath u;
  u.start = g.term_of(f.edge_images[edge].steps.front());
  u.steps.assign(f.edge_images[edge].steps.begin() + 1, f.edge_images[edge].steps.end());

  int w = tau.end(g);
  Graph ng = g;
  ng.edges[edge].term = w;

  // correspondences: E <-> E' tau~ / E' <-> E tau (lower strata shared)
  PathCorrespondence fwd = detail::identity_correspondence(g);
  {
    EdgePath p{g.edges[edge].init, {Graph::oriented(edge)}};
    EdgePath it = path_inverse(ng, tau);
    p.steps.insert(p.steps.end(), it.steps.begin(), it.steps.end());
    fwd.edge_paths[edge] = tighten_path(ng, p);
  }
  PathCorrespondence bwd = detail::identity_correspondence(ng);
  {
    EdgePath p{g.edges[edge].init, {Graph::oriented(edge)}};
    p.steps.insert(p.steps.end(), tau.steps.begin(), tau.steps.end());
    bwd.edge_paths[edge] = tighten_path(g, p);
  }

  // new images: substitute E -> E' tau~ everywhere, then set the slid edge
  std::vector<EdgePath> images(ng.num_edges());
  std::vector<int> inherited(ng.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) {
    inherited[e] = f.stratum_of[e];
    if (e == edge) continue;
    images[e] = fwd.apply(ng, f.edge_images[e]);
  }
  {
    // f'(E') = E' . [tau~ u f(tau)]
    EdgePath ftau = image_of_path(f, tau);  // lower strata: same path in ng
    EdgePath suffix = concat_paths(ng, path_inverse(ng, tau),
                                   EdgePath{u.start, u.steps}, ftau);
    EdgePath p{ng.edges[edge].init, {Graph::oriented(edge)}};
    p.steps.insert(p.steps.end(), suffix.steps.begin(), suffix.steps.end());
    images[edge] = tighten_path(ng, p);
  }
  std::vector<int> vimg = f.vertex_images;

  MarkedGraph nmg;
  nmg.graph = ng;
  nmg.rank = f.domain.rank;
  nmg.marking.base = f.domain.marking.base;
  for (const EdgePath& p : f.domain.marking.forward)
    nmg.marking.forward.push_back(fwd.apply(ng, p));
  nmg.marking.backward = f.domain.marking.backward;
  nmg.marking.backward[edge] = read_path(f.domain, bwd.edge_paths[edge]);

  MoveResult out;
  out.map = detail::finish_map(nmg, images, vimg, inherited);
  out.forward = fwd;
  out.backward = bwd;
  std::ostringstream os;
  os << "slide " << edge;
  for (int st : tau.steps) os << " " << st;
  out.log = os.str();
  out.certificate.push_back("EG strata untouched");
  return out;
}

// ---------------------------------------------------------------------------
// Tree replacement for zero strata
// ---------------------------------------------------------------------------

inline MoveResult tree_replacement(const GraphMap& f, const std::vector<int>& old_edges,
                                   const std::vector<std::pair<int, int>>& new_tree) {
  const Graph& g = f.graph();
  auto infos = classify_strata(f);
  if (old_edges.empty()) throw std::invalid_argument("tree_replacement: empty stratum");
  int stratum = 0;
  for (int e : old_edges) {
    if (infos.at(f.stratum_of.at(e)).kind != StratumKind::Zero)
      throw std::invalid_argument("tree_replacement: an edge is not in a zero stratum");
    stratum = std::max(stratum, f.stratum_of[e]);
  }
  if (!is_forest(g, old_edges))
    throw std::invalid_argument("tree_replacement: zero stratum is not a forest");

  std::set<int> old_verts;
  for (int e : old_edges) {
    old_verts.insert(g.edges[e].init);
    old_verts.insert(g.edges[e].term);
  }
  std::set<int> new_verts;
  for (auto [a, b] : new_tree) {
    new_verts.insert(a);
    new_verts.insert(b);
  }
  if (old_verts != new_verts)
    throw std::invalid_argument("tree_replacement: vertex sets differ");

  // build the new graph: old stratum edges replaced in place order
  Graph ng;
  ng.num_vertices = g.num_vertices;
  std::vector<int> new_id(g.num_edges(), -1);
  std::set<int> removed(old_edges.begin(), old_edges.end());
  for (int e = 0; e < g.num_edges(); ++e) {
    if (removed.count(e)) continue;
    new_id[e] = ng.num_edges();
    ng.edges.push_back(g.edges[e]);
  }
  std::vector<int> tree_ids;
  for (auto [a, b] : new_tree) {
    tree_ids.push_back(ng.num_edges());
    ng.edges.push_back({a, b});
  }
  {
    std::vector<int> chk = tree_ids;
    if (!is_forest(ng, chk))
      throw std::invalid_argument("tree_replacement: replacement is not a forest");
    auto oc = g.edge_components(old_edges);
    auto nc = ng.edge_components(tree_ids);
    std::set<int> ocs(oc.begin(), oc.end()), ncs(nc.begin(), nc.end());
    ocs.erase(-1);
    ncs.erase(-1);
    if (ocs.size() != ncs.size())
      throw std::invalid_argument("tree_replacement: component counts differ");
  }

  // tree paths inside each forest, for the correspondences
  auto path_in_forest = [](const Graph& gg, const std::vector<int>& forest, int a,
                           int b) -> EdgePath {
    if (a == b) return EdgePath::trivial(a);
    std::map<int, std::vector<std::pair<int, int>>> adj;
    for (int e : forest) {
      adj[gg.edges[e].init].push_back({e, gg.edges[e].term});
      adj[gg.edges[e].term].push_back({e, gg.edges[e].init});
    }
    std::map<int, EdgePath> seen;
    seen[a] = EdgePath::trivial(a);
    std::vector<int> q{a};
    for (size_t qi = 0; qi < q.size(); ++qi) {
      int u = q[qi];
      for (auto [e, x] : adj[u]) {
        if (seen.count(x)) continue;
        EdgePath p = seen[u];
        p.steps.push_back(gg.edges[e].init == u ? Graph::oriented(e)
                                                : Graph::oriented(e, false));
        seen[x] = p;
        q.push_back(x);
      }
    }
    auto it = seen.find(b);
    if (it == seen.end())
      throw std::invalid_argument("tree_replacement: endpoints in different components");
    return it->second;
  };

  PathCorrespondence fwd;
  fwd.vertex_map.resize(g.num_vertices);
  std::iota(fwd.vertex_map.begin(), fwd.vertex_map.end(), 0);
  fwd.edge_paths.resize(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) {
    if (removed.count(e))
      fwd.edge_paths[e] = path_in_forest(ng, tree_ids, g.edges[e].init, g.edges[e].term);
    else
      fwd.edge_paths[e] = EdgePath{g.edges[e].init, {Graph::oriented(new_id[e])}};
  }
  PathCorrespondence bwd;
  bwd.vertex_map.resize(ng.num_vertices);
  std::iota(bwd.vertex_map.begin(), bwd.vertex_map.end(), 0);
  bwd.edge_paths.resize(ng.num_edges());
  for (int e = 0; e < g.num_edges(); ++e)
    if (!removed.count(e))
      bwd.edge_paths[new_id[e]] = EdgePath{g.edges[e].init, {Graph::oriented(e)}};
  for (size_t t = 0; t < tree_ids.size(); ++t)
    bwd.edge_paths[tree_ids[t]] =
        path_in_forest(g, old_edges, new_tree[t].first, new_tree[t].second);

  std::vector<EdgePath> images(ng.num_edges());
  std::vector<int> inherited(ng.num_edges());
  for (int ne = 0; ne < ng.num_edges(); ++ne) {
    images[ne] = fwd.apply(ng, image_of_path(f, bwd.edge_paths[ne]));
    if (images[ne].is_trivial())
      throw std::invalid_argument("tree_replacement: an edge image becomes trivial");
  }
  for (int e = 0; e < g.num_edges(); ++e)
    if (!removed.count(e)) inherited[new_id[e]] = f.stratum_of[e];
  for (int t : tree_ids) inherited[t] = stratum;
  std::vector<int> vimg = f.vertex_images;

  MarkedGraph nmg;
  nmg.graph = ng;
  nmg.rank = f.domain.rank;
  nmg.marking.base = f.domain.marking.base;
  for (const EdgePath& p : f.domain.marking.forward)
    nmg.marking.forward.push_back(fwd.apply(ng, p));
  nmg.marking.backward.resize(ng.num_edges());
  for (int ne = 0; ne < ng.num_edges(); ++ne)
    nmg.marking.backward[ne] = read_path(f.domain, bwd.edge_paths[ne]);

  MoveResult out;
  out.map = detail::finish_map(nmg, images, vimg, inherited);
  out.forward = fwd;
  out.backward = bwd;
  std::ostringstream os;
  os << "tree-replacement";
  for (int e : old_edges) os << " " << e;
  os << " ->";
  for (auto [a, b] : new_tree) os << " " << a << "-" << b;
  out.log = os.str();
  out.certificate.push_back("zero stratum replaced");
  return out;
}

// ---------------------------------------------------------------------------
// Changing the marking on G_j via f
// ---------------------------------------------------------------------------

inline MoveResult change_marking_via_restriction(const GraphMap& f, int j) {
  const Graph& g = f.graph();
  if (j < 0 || j > f.num_strata())
    throw std::invalid_argument("change_marking: bad filtration index");
  MoveResult out;
  if (j == 0) {  // identity move
    out.map = f;
    out.forward = detail::identity_correspondence(g);
    out.backward = out.forward;
    out.log = "change-marking 0";
    return out;
  }
  std::set<int> low;  // edges of G_j
  for (int s = 0; s < j; ++s)
    for (int e : f.strata[s]) low.insert(e);
  std::set<int> low_verts;
  for (int e : low) {
    low_verts.insert(g.edges[e].init);
    low_verts.insert(g.edges[e].term);
  }
  // preconditions: components of G_j non-contractible; vertices of G_j whose
  // link leaves G_j are fixed; the base behaves.
  {
    std::vector<int> lowv(low.begin(), low.end());
    auto comp = g.edge_components(lowv);
    std::map<int, std::pair<int, std::set<int>>> stats;  // comp -> (edges, verts)
    for (int e : lowv) {
      auto& st = stats[comp[e]];
      st.first++;
      st.second.insert(g.edges[e].init);
      st.second.insert(g.edges[e].term);
    }
    for (auto& [c, st] : stats)
      if (st.first < static_cast<int>(st.second.size()))
        throw std::invalid_argument("change_marking: a component of G_j is contractible");
    for (int v : low_verts) {
      bool link_inside = true;
      for (int d : g.directions_at(v))
        if (!low.count(Graph::edge_id(d))) link_inside = false;
      if (!link_inside && f.vertex_images[v] != v)
        throw std::invalid_argument(
            "change_marking: a vertex of G_j with outside link is not fixed");
    }
    int b = f.domain.marking.base;
    if (low_verts.count(b) && f.vertex_images[b] != b)
      throw std::invalid_argument("change_marking: base vertex moves under g");
  }

  // g: f on G_j, identity elsewhere
  std::vector<EdgePath> gimages(g.num_edges());
  std::vector<int> gvimg(g.num_vertices);
  for (int v = 0; v < g.num_vertices; ++v)
    gvimg[v] = low_verts.count(v) ? f.vertex_images[v] : v;
  for (int e = 0; e < g.num_edges(); ++e)
    gimages[e] = low.count(e) ? f.edge_images[e]
                              : EdgePath{g.edges[e].init, {Graph::oriented(e)}};
  GraphMap gmap = GraphMap::make(f.domain, gimages, gvimg, f.strata);
  BasisAutomorphism phi_g = induced_automorphism(gmap);
  auto phi_g_inv = invert_automorphism(phi_g);
  if (!phi_g_inv)
    throw std::invalid_argument("change_marking: could not invert the lower-stratum action");

  // f' images
  std::vector<EdgePath> images(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e)
    images[e] = low.count(e) ? f.edge_images[e] : image_of_path(gmap, f.edge_images[e]);
  std::vector<int> vimg(g.num_vertices);
  for (int v = 0; v < g.num_vertices; ++v) {
    bool only_high = true;
    for (int d : g.directions_at(v))
      if (low.count(Graph::edge_id(d))) only_high = false;
    vimg[v] = only_high ? gvimg[f.vertex_images[v]] : f.vertex_images[v];
  }

  MarkedGraph nmg;
  nmg.graph = g;
  nmg.rank = f.domain.rank;
  nmg.marking.base = f.domain.marking.base;
  for (const EdgePath& p : f.domain.marking.forward)
    nmg.marking.forward.push_back(image_of_path(gmap, p));
  for (int e = 0; e < g.num_edges(); ++e)
    nmg.marking.backward.push_back(
        apply_automorphism(*phi_g_inv, f.domain.marking.backward[e]));

  std::vector<int> inherited(g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) inherited[e] = f.stratum_of[e];

  out.map = detail::finish_map(nmg, images, vimg, inherited);
  // forward translation is g_#; the inverse is not materialized as paths
  PathCorrespondence fwd;
  fwd.vertex_map.resize(g.num_vertices);
  for (int v = 0; v < g.num_vertices; ++v) fwd.vertex_map[v] = gvimg[v];
  for (int e = 0; e < g.num_edges(); ++e) fwd.edge_paths.push_back(gimages[e]);
  out.forward = fwd;
  out.backward = detail::identity_correspondence(g);
  out.log = "change-marking " + std::to_string(j);
  out.certificate.push_back("marking re-read through the lower action");
  return out;
}

// ---------------------------------------------------------------------------
// Extended folds of EG indivisible Nielsen paths
// ---------------------------------------------------------------------------

struct ExtendedFoldResult {
  FoldType type;
  std::optional<MoveResult> move;   // present for proper folds
  std::optional<EdgePath> new_inp;  // image of the folded path
};

inline ExtendedFoldResult extended_fold(const GraphMap& f, const EdgePath& rho,
                                        int stratum) {
  const Graph& g = f.graph();
  if (!rho.valid(g) || !rho.is_tight() || rho.size() < 2)
    throw std::invalid_argument("extended_fold: bad path");
  // single illegal turn in H_r
  int junction = -1;
  for (size_t i = 0; i + 1 < rho.steps.size(); ++i) {
    int d1 = -rho.steps[i], d2 = rho.steps[i + 1];
    if (f.stratum_of_direction(d1) == stratum && f.stratum_of_direction(d2) == stratum &&
        !f.turn_is_legal(d1, d2)) {
      if (junction != -1)
        throw std::invalid_argument("extended_fold: more than one illegal turn");
      junction = static_cast<int>(i);
    }
  }
  if (junction == -1)
    throw std::invalid_argument("extended_fold: no illegal turn in the stratum");

  int e1 = -rho.steps[junction];    // initial direction of alpha-bar
  int e2 = rho.steps[junction + 1]; // initial direction of beta
  EdgePath im1 = image_of_path(f, EdgePath{g.init_of(e1), {e1}});
  EdgePath im2 = image_of_path(f, EdgePath{g.init_of(e2), {e2}});

  ExtendedFoldResult out;
  if (im1 == im2) {
    out.type = FoldType::ImproperFull;
    return out;
  }
  bool p12 = im1.size() < im2.size() &&
             std::equal(im1.steps.begin(), im1.steps.end(), im2.steps.begin());
  bool p21 = im2.size() < im1.size() &&
             std::equal(im2.steps.begin(), im2.steps.end(), im1.steps.begin());
  if (!p12 && !p21) {
    out.type = FoldType::Partial;
    return out;
  }
  out.type = FoldType::ProperFull;

  // arrange f(E1) proper prefix of f(E2); otherwise work with the reverse path
  EdgePath work = rho;
  int E1 = e1, E2 = e2;
  int jpos = junction;
  if (p21) {
    work = path_inverse(g, rho);
    jpos = static_cast<int>(work.steps.size()) - 2 - junction;
    E1 = e2;
    E2 = e1;
  }
  // alpha-bar = reverse of work[0..jpos]; starts with E1
  // Q = E1 . b where b is the maximal lower-stratum run following E1
  EdgePath q{g.init_of(E1), {E1}};
  for (int i = jpos - 1; i >= 0; --i) {
    int step = -work.steps[i];
    if (f.stratum_of_direction(step) == stratum) break;
    q.steps.push_back(step);
  }
  EdgePath qim = image_of_path(f, q);
  EdgePath e2im = image_of_path(f, EdgePath{g.init_of(E2), {E2}});
  if (qim.size() >= e2im.size() ||
      !std::equal(qim.steps.begin(), qim.steps.end(), e2im.steps.begin()))
    throw std::invalid_argument("extended_fold: fold segment is not a proper prefix");

  // subdivide E2 so that the initial segment matches f(Q), then fold it onto Q
  int e2edge = Graph::edge_id(E2);
  size_t full = f.edge_images[e2edge].size();
  int pos = E2 > 0 ? static_cast<int>(qim.size())
                   : static_cast<int>(full - qim.size());
  MoveResult sub = subdivide(f, {{e2edge, {pos}}});
  const EdgePath& partpath = sub.forward.edge_paths[e2edge];
  int X = E2 > 0 ? partpath.steps.front() : -partpath.steps.back();
  EdgePath q_new = sub.forward.apply(sub.map.graph(), q);
  MoveResult fold = detail::fold_identify(sub.map, X, q_new);
  MoveResult whole = compose_moves(g, sub, fold);
  whole.log = "extended-fold " + std::to_string(stratum);

  EdgePath rho_new = whole.forward.apply(whole.map.graph(), rho);
  out.move = whole;
  out.new_inp = tighten_path(whole.map.graph(), rho_new);
  return out;
}

}  // namespace traintrack
