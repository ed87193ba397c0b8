#pragma once

// Shared test fixtures: small positive automorphisms on roses, used across
// the suites.  Letters: A=1, B=2, C=3, ...

#include "traintrack/graph_map.hpp"

namespace traintrack::testing {

inline EdgePath path_from_word(const Graph& g, int base, const Word& w) {
  EdgePath p;
  p.start = base;
  for (Letter x : w) p.steps.push_back(x > 0 ? Graph::oriented(x - 1)
                                             : Graph::oriented(-x - 1, false));
  return tighten_path(g, p);
}

// A self-map of the rose R_n given by words; single stratum unless refined.
inline GraphMap rose_map(int rank, const std::vector<Word>& images, bool refine = true) {
  MarkedGraph mg = rose(rank);
  std::vector<EdgePath> eimg;
  for (const Word& w : images) eimg.push_back(path_from_word(mg.graph, 0, w));
  GraphMap f = GraphMap::make(mg, eimg, {0});
  return refine ? build_filtration(f) : f;
}

inline GraphMap fixture_f1() { return rose_map(3, {{1}, {2, 1}, {2, 3, 2, 2}}); }
inline GraphMap fixture_f2() { return rose_map(3, {{1}, {2, 1}, {3, 2, 2}}); }
inline GraphMap fixture_f3() { return rose_map(3, {{1, 3, 2, 1}, {2, 1}, {3, 2, 1}}); }
inline GraphMap fixture_f4() { return rose_map(2, {{2}, {1}}); }
inline GraphMap fixture_f5() { return rose_map(3, {{1}, {2, 1}, {3, 1, 1}}); }

// x_i -> x_i for i < n, x_n -> x_n a^d with a = x_1 x_2.
inline GraphMap fixture_f6(int d, int rank = 3) {
  std::vector<Word> images;
  for (int i = 1; i < rank; ++i) images.push_back({i});
  Word last{rank};
  for (int k = 0; k < d; ++k) {
    last.push_back(1);
    last.push_back(2);
  }
  images.push_back(last);
  return rose_map(rank, images);
}

inline BasisAutomorphism rose_automorphism(const std::vector<Word>& images) {
  BasisAutomorphism phi;
  phi.rank = static_cast<int>(images.size());
  phi.images = images;
  return phi;
}

}  // namespace traintrack::testing
