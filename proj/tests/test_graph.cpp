#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fixtures.hpp"
#include "traintrack/graph.hpp"

using namespace traintrack;
using traintrack::testing::path_from_word;

namespace {
// two vertices joined by edge T, loops A at 0 and B at 1
MarkedGraph dumbbell() {
  MarkedGraph mg;
  mg.rank = 2;
  mg.graph.num_vertices = 2;
  mg.graph.edges.push_back({0, 0});  // A (edge 0)
  mg.graph.edges.push_back({1, 1});  // B (edge 1)
  mg.graph.edges.push_back({0, 1});  // T (edge 2)
  mg.marking.base = 0;
  mg.marking.forward.push_back(EdgePath{0, {1}});         // x1 -> A
  mg.marking.forward.push_back(EdgePath{0, {3, 2, -3}});  // x2 -> T B T'
  mg.marking.backward = {Word{1}, Word{2}, Word{}};
  return mg;
}
}  // namespace

TEST_CASE("tighten paths") {
  Graph g = rose(3).graph;
  // E E' -> trivial at init
  EdgePath p{0, {1, -1}};
  EdgePath t = tighten_path(g, p);
  CHECK(t.is_trivial());
  CHECK(t.start == 0);
  // B C C' B' A -> A
  CHECK(tighten_path(g, EdgePath{0, {2, 3, -3, -2, 1}}) == (EdgePath{0, {1}}));
  // idempotent, endpoint preserving
  std::mt19937 rng(7);
  for (int t2 = 0; t2 < 200; ++t2) {
    EdgePath p2{0, {}};
    for (int i = 0; i < t2 % 21; ++i) {
      int e = static_cast<int>(rng() % 3) + 1;
      p2.steps.push_back((rng() & 1) ? e : -e);
    }
    EdgePath q = tighten_path(g, p2);
    CHECK(q.is_tight());
    CHECK(tighten_path(g, q) == q);
    CHECK(q.start == p2.start);
    CHECK(q.end(g) == p2.end(g));
  }
  // malformed path
  Graph h = dumbbell().graph;
  CHECK_THROWS(tighten_path(h, EdgePath{0, {1, 2}}));  // A then B not incident
}

TEST_CASE("tighten circuits") {
  Graph g = rose(2).graph;
  // A B B' (cyclic) -> A
  CHECK(tighten_circuit(g, EdgePath{0, {1, 2, -2}}).steps == std::vector<int>{1});
  // A A' -> trivial circuit error
  CHECK_THROWS(tighten_circuit(g, EdgePath{0, {1, -1}}));
  // rotations share the canonical form
  EdgePath c{0, {1, 2, -1}};
  EdgePath r1 = tighten_circuit(g, c);
  EdgePath r2 = tighten_circuit(g, EdgePath{0, {2, -1, 1}});
  CHECK(r1.steps == r2.steps);
}

TEST_CASE("core subgraph") {
  // a tree has empty core
  MarkedGraph db = dumbbell();
  CHECK(core_subgraph(db.graph, {2}).empty());
  // circle with a tail: the circle survives
  auto core = core_subgraph(db.graph, {0, 2});
  CHECK(core == std::vector<int>{0});
  // rose is its own core
  Graph r3 = rose(3).graph;
  CHECK(core_subgraph(r3, {0, 1, 2}).size() == 3);
  // idempotence; min valence 2 within a nonempty core
  auto c2 = core_subgraph(db.graph, {0, 1, 2});
  CHECK(core_subgraph(db.graph, c2) == c2);
}

TEST_CASE("markings verify") {
  MarkedGraph r = rose(3);
  CHECK(verify_marking(r));
  CHECK(r.graph.first_betti() == 3);
  MarkedGraph bad = rose(2);
  bad.marking.backward[0] = Word{2};  // backward(A) = x2
  CHECK_FALSE(verify_marking(bad));
  MarkedGraph db = dumbbell();
  CHECK(verify_marking(db));
  CHECK(db.graph.first_betti() == 2);
}

TEST_CASE("collapse forest") {
  MarkedGraph db = dumbbell();
  // collapse nothing: isomorphic marked graph
  auto id = collapse_forest(db, {});
  CHECK(id.collapsed.graph.num_edges() == 3);
  CHECK(verify_marking(id.collapsed));

  // collapse T: rose R_2, path A T B maps to A B
  auto res = collapse_forest(db, {2});
  CHECK(res.collapsed.graph.num_vertices == 1);
  CHECK(res.collapsed.graph.num_edges() == 2);
  CHECK(res.collapsed.graph.first_betti() == 2);
  CHECK(verify_marking(res.collapsed));
  EdgePath atb{0, {1, 3, 2}};
  EdgePath image = res.forward.apply(res.collapsed.graph, atb);
  CHECK(image.steps == std::vector<int>{1, 2});

  CHECK_THROWS(collapse_forest(db, {0}));  // loop is not a forest

  // conjugacy classes read through old and new markings agree
  std::mt19937 rng(8);
  for (int t = 0; t < 100; ++t) {
    Word w;
    for (int i = 0; i < 1 + t % 8; ++i) {
      int x = 1 + static_cast<int>(rng() % 2);
      w.push_back((rng() & 1) ? x : -x);
    }
    w = reduce(w);
    if (w.empty()) continue;
    EdgePath loop = path_from_word(db.graph, 0, Word{});
    // spell w through the dumbbell marking: x1 -> A, x2 -> T B T'
    EdgePath p{0, {}};
    for (Letter x : w) {
      const EdgePath& fw = db.marking.forward[generator_index(x) - 1];
      EdgePath seg = x > 0 ? fw : path_inverse(db.graph, fw);
      p.steps.insert(p.steps.end(), seg.steps.begin(), seg.steps.end());
    }
    p = tighten_path(db.graph, p);
    Word before = read_path(db, p);
    EdgePath q = res.forward.apply(res.collapsed.graph, p);
    Word after = read_path(res.collapsed, q);
    CHECK(ConjClass::of(before, false) == ConjClass::of(after, false));
    (void)loop;
  }
}
