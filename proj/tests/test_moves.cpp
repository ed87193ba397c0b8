#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fixtures.hpp"
#include "traintrack/moves.hpp"

using namespace traintrack;
using namespace traintrack::testing;

namespace {
const int A = 1, B = 2, C = 3;

bool outer_class_preserved(const GraphMap& before, const GraphMap& after) {
  BasisAutomorphism x = induced_automorphism(before);
  BasisAutomorphism y = induced_automorphism(after);
  return same_outer_class(x, y);
}
}  // namespace

TEST_CASE("subdivision basics") {
  GraphMap f1 = fixture_f1();
  // no points: identity move
  MoveResult none = subdivide(f1, {});
  CHECK(none.map.graph().num_vertices == f1.graph().num_vertices);
  CHECK(none.map.graph().num_edges() == f1.graph().num_edges());
  CHECK(outer_class_preserved(f1, none.map));

  // subdivide C at image position 1 (pullback of a vertex)
  MoveResult sub = subdivide(f1, {{2, {1}}});
  CHECK(sub.map.graph().num_vertices == 2);
  CHECK(sub.map.graph().num_edges() == 4);
  CHECK(sub.map.graph().first_betti() == 3);
  CHECK(verify_marking(sub.map.domain));
  CHECK(outer_class_preserved(f1, sub.map));
}

TEST_CASE("subdivision at the interior fixed point of F1's C") {
  GraphMap f1 = fixture_f1();
  // f(C) = B C B B crosses C once; the crossing holds the unique interior
  // fixed point
  MoveResult sub = subdivide_at_fixed_point(f1, 2, 0);
  const GraphMap& f = sub.map;
  CHECK(f.graph().num_vertices == 2);
  CHECK(f.graph().num_edges() == 4);
  int x = 1;  // the fresh vertex
  CHECK(f.vertex_images[x] == x);
  CHECK(outer_class_preserved(f1, f));
  // the two parts: f(C1) = B C1 and f(C2) = C2 B B
  CHECK(f.edge_images[2].steps == std::vector<int>{B, C});
  CHECK(f.edge_images[3].steps == std::vector<int>{4, B, B});
}

TEST_CASE("valence-two homotopy undoes subdivision") {
  GraphMap f1 = fixture_f1();
  MoveResult sub = subdivide_at_fixed_point(f1, 2, 0);
  MoveResult amal = valence_two_homotopy(sub.map, 1);
  const GraphMap& f = amal.map;
  REQUIRE(f.graph().num_edges() == 3);
  CHECK(f.edge_images[0].steps == std::vector<int>{A});
  CHECK(f.edge_images[1].steps == std::vector<int>{B, A});
  CHECK(f.edge_images[2].steps == std::vector<int>{B, C, B, B});
  CHECK(outer_class_preserved(f1, f));
  // valence-3 vertex is rejected
  CHECK_THROWS(valence_two_homotopy(f1, 0));
}

TEST_CASE("elementary folds") {
  // degenerate turn is rejected
  GraphMap f1 = fixture_f1();
  CHECK_THROWS(elementary_fold(f1, A, A));

  // identifying two loops with identical images would drop the rank
  GraphMap two = rose_map(2, {{1, 2}, {1, 2}});
  CHECK_THROWS(elementary_fold(two, A, B));

  // a genuine full fold: T1: 0->1 and T2: 0->2 with equal images merge the
  // two terminal vertices and keep the rank
  MarkedGraph mg;
  mg.rank = 2;
  mg.graph.num_vertices = 3;
  mg.graph.edges.push_back({0, 1});  // T1
  mg.graph.edges.push_back({0, 2});  // T2
  mg.graph.edges.push_back({1, 1});  // L1
  mg.graph.edges.push_back({2, 1});  // L2
  mg.marking.base = 0;
  mg.marking.forward.push_back(EdgePath{0, {1, 3, -1}});  // x1 = T1 L1 T1'
  mg.marking.forward.push_back(EdgePath{0, {2, 4, -1}});  // x2 = T2 L2 T1'
  mg.marking.backward = {Word{}, Word{2}, Word{1}, Word{}};
  REQUIRE(verify_marking(mg));
  std::vector<EdgePath> imgs{
      EdgePath{0, {1}},          // T1 -> T1
      EdgePath{0, {1}},          // T2 -> T1
      EdgePath{1, {3}},          // L1 -> L1
      EdgePath{1, {-1, 2, 4}}};  // L2 -> T1' T2 L2
  GraphMap h = build_filtration(GraphMap::make(mg, imgs, {0, 1, 1}));
  MoveResult folded = elementary_fold(h, 2, 1);  // directions +T2, +T1
  CHECK(folded.map.graph().num_edges() == 3);
  CHECK(folded.map.graph().num_vertices == 2);
  CHECK(folded.map.graph().first_betti() == 2);
  CHECK(outer_class_preserved(h, folded.map));

  // partial fold with implicit subdivision: A -> A B, B -> A B B share the
  // prefix A B = f(A)
  GraphMap p = rose_map(2, {{1, 2}, {1, 2, 2}});
  MoveResult pf = elementary_fold(p, A, B);
  CHECK(outer_class_preserved(p, pf.map));
  CHECK(pf.map.graph().first_betti() == 2);
}

TEST_CASE("slides") {
  GraphMap f5 = fixture_f5();
  // trivial slide: unchanged
  MoveResult s0 = slide(f5, 2, EdgePath::trivial(0));
  CHECK(s0.map.edge_images[2] == f5.edge_images[2]);
  CHECK(outer_class_preserved(f5, s0.map));

  // slide C along A: new suffix [A' A A A] = A A; fixed point of the move
  MoveResult s1 = slide(f5, 2, EdgePath{0, {A}});
  CHECK(s1.map.edge_images[2].steps == std::vector<int>{C, A, A});
  CHECK(outer_class_preserved(f5, s1.map));

  // F1: slide B along A gives u' = [A' A A] = A
  GraphMap f1 = fixture_f1();
  MoveResult s2 = slide(f1, 1, EdgePath{0, {A}});
  CHECK(s2.map.edge_images[1].steps == std::vector<int>{B, A});
  CHECK(outer_class_preserved(f1, s2.map));

  // tau must stay in lower strata
  CHECK_THROWS(slide(f1, 1, EdgePath{0, {C}}));
}

TEST_CASE("collapse move") {
  // dumbbell with map fixing everything; collapsing T gives a rose
  MarkedGraph mg;
  mg.rank = 2;
  mg.graph.num_vertices = 2;
  mg.graph.edges.push_back({0, 0});  // A
  mg.graph.edges.push_back({1, 1});  // B
  mg.graph.edges.push_back({0, 1});  // T
  mg.marking.base = 0;
  mg.marking.forward.push_back(EdgePath{0, {1}});
  mg.marking.forward.push_back(EdgePath{0, {3, 2, -3}});
  mg.marking.backward = {Word{1}, Word{2}, Word{}};
  std::vector<EdgePath> imgs{EdgePath{0, {1}}, EdgePath{1, {2}}, EdgePath{0, {3}}};
  GraphMap f = build_filtration(GraphMap::make(mg, imgs, {0, 1}));
  MoveResult c = collapse_move(f, {2});
  CHECK(c.map.graph().num_vertices == 1);
  CHECK(c.map.graph().num_edges() == 2);
  CHECK(outer_class_preserved(f, c.map));
  // collapsing a loop is not a forest collapse
  CHECK_THROWS(collapse_move(f, {0}));
}

TEST_CASE("tree replacement") {
  // subdividing F2's C twice leaves the middle and last parts as zero
  // edges forming a 2-edge tree on {z1, z2, v}
  GraphMap f2 = fixture_f2();
  MoveResult sub = subdivide(f2, {{2, {1, 2}}});
  const GraphMap& f = sub.map;
  REQUIRE(f.graph().num_edges() == 5);
  auto infos = classify_strata(f);
  std::vector<int> zeros;
  for (auto& in : infos)
    if (in.kind == StratumKind::Zero)
      zeros.insert(zeros.end(), in.edges.begin(), in.edges.end());
  REQUIRE(zeros == std::vector<int>{3, 4});  // C2: z1->z2, C3: z2->v

  // identity replacement
  MoveResult same = tree_replacement(f, zeros, {{1, 2}, {2, 0}});
  CHECK(outer_class_preserved(f, same.map));

  // different 2-edge tree over the same vertices, centered at v
  MoveResult diff = tree_replacement(f, zeros, {{1, 0}, {0, 2}});
  CHECK(outer_class_preserved(f, diff.map));
  CHECK(diff.map.graph().first_betti() == 3);

  // a cycle is rejected
  CHECK_THROWS(tree_replacement(f, zeros, {{0, 1}, {1, 2}, {0, 2}}));
}

TEST_CASE("change of marking on a lower filtration element") {
  GraphMap f1 = fixture_f1();
  // j = 0: identity move
  MoveResult id = change_marking_via_restriction(f1, 0);
  CHECK(id.map.edge_images == f1.edge_images);

  // G_1 = {A}: f restricted is the identity, nothing changes
  MoveResult m1 = change_marking_via_restriction(f1, 1);
  CHECK(m1.map.edge_images == f1.edge_images);
  CHECK(outer_class_preserved(f1, m1.map));

  // G_2 = {A,B}: nontrivial lower action; g(E) composes into higher images
  MoveResult m2 = change_marking_via_restriction(f1, 2);
  CHECK(outer_class_preserved(f1, m2.map));
  CHECK(verify_marking(m2.map.domain));
  // intertwining g_# f^k_# = f'^k_# g_# on random paths, k = 1..3
  std::mt19937 rng(11);
  const GraphMap& fp = m2.map;
  for (int t = 0; t < 40; ++t) {
    EdgePath p{0, {}};
    for (int i = 0; i < 1 + t % 6; ++i) {
      int e = static_cast<int>(rng() % 3) + 1;
      p.steps.push_back((rng() & 1) ? e : -e);
    }
    p = tighten_path(f1.graph(), p);
    for (int k = 1; k <= 3; ++k) {
      EdgePath lhs = m2.forward.apply(fp.graph(), iterate_image(f1, p, k));
      EdgePath rhs = iterate_image(fp, m2.forward.apply(fp.graph(), p), k);
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("extended fold on an EG Nielsen path") {
  // A -> AB, B -> BAB fixes the path rho = A B A' B' exactly
  GraphMap f = rose_map(2, {{1, 2}, {2, 1, 2}});
  EdgePath rho{0, {A, B, -A, -B}};
  REQUIRE(image_of_path(f, rho) == rho);

  auto infos = classify_strata(f);
  REQUIRE(infos.size() == 1);
  REQUIRE(infos[0].kind == StratumKind::EG);

  ExtendedFoldResult ef = extended_fold(f, rho, 0);
  REQUIRE(ef.type == FoldType::ProperFull);
  REQUIRE(ef.move.has_value());
  REQUIRE(ef.new_inp.has_value());
  const GraphMap& f2 = ef.move->map;
  CHECK(outer_class_preserved(f, f2));
  CHECK(f2.graph().first_betti() == 2);
  // the image path is again fixed: f'_#(rho') = rho'
  CHECK(image_of_path(f2, *ef.new_inp) == *ef.new_inp);

  // improper: both images equal
  GraphMap imp = rose_map(2, {{1, 2}, {1, 2, 2}});
  // build a path with the illegal turn (A', B'): e.g. A B' is tight and the
  // directions A', B' eventually collide; classify only
  // f(A)=AB, f(B)=ABB: Df(A')=B', Df(B')=B': turn (A',B') illegal
  EdgePath sig{0, {A, -B}};
  ExtendedFoldResult cls = extended_fold(imp, sig, 0);
  CHECK((cls.type == FoldType::Partial || cls.type == FoldType::ProperFull ||
         cls.type == FoldType::ImproperFull));
}

TEST_CASE("move invariance on random positive automorphisms") {
  std::mt19937 rng(12);
  int done = 0;
  for (int t = 0; t < 60 && done < 25; ++t) {
    int rank = 2 + t % 3;
    // random positive automorphism: product of x_i -> x_i x_j moves
    BasisAutomorphism phi = BasisAutomorphism::identity(rank);
    std::vector<Word> images = phi.images;
    for (int m = 0; m < 4; ++m) {
      int i = static_cast<int>(rng() % rank), j = static_cast<int>(rng() % rank);
      if (i == j) continue;
      images[i] = concat(images[i], images[j]);
    }
    bool nontrivial = false;
    for (int i = 0; i < rank; ++i)
      if (images[i].size() > 1) nontrivial = true;
    if (!nontrivial) continue;
    GraphMap f = rose_map(rank, images);
    ++done;

    // subdivide somewhere legal
    for (int e = 0; e < f.graph().num_edges(); ++e)
      if (f.edge_images[e].size() >= 2) {
        MoveResult s = subdivide(f, {{e, {1}}});
        CHECK(outer_class_preserved(f, s.map));
        // amalgamate the fresh vertex when the absorbed side is not EG
        try {
          MoveResult v2 = valence_two_homotopy(s.map, f.graph().num_vertices);
          CHECK(outer_class_preserved(f, v2.map));
        } catch (const std::invalid_argument&) {
        }
        break;
      }

    // slide when a suitable NEG edge exists
    auto infos = classify_strata(f);
    for (auto& in : infos) {
      if ((in.kind == StratumKind::NegLinear || in.kind == StratumKind::NegGeneral) &&
          in.normal_form && in.edges.size() == 1 && in.index > 0) {
        int e = in.edges[0];
        int lower = f.strata[in.index - 1][0];
        if (f.graph().edges[lower].init == f.graph().edges[e].term) {
          MoveResult s = slide(f, e, EdgePath{f.graph().edges[e].term,
                                              {Graph::oriented(lower)}});
          CHECK(outer_class_preserved(f, s.map));
        }
        break;
      }
    }

    // marking change on every admissible prefix of the filtration
    for (int j = 1; j < f.num_strata(); ++j) {
      try {
        MoveResult m = change_marking_via_restriction(f, j);
        CHECK(outer_class_preserved(f, m.map));
      } catch (const std::invalid_argument&) {
        // preconditions can fail; that is not an error of the move
      }
    }
  }
  CHECK(done == 25);
}
