#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "traintrack/pipeline.hpp"

using namespace traintrack;
using namespace traintrack::testing;

TEST_CASE("make_rtt on maps that already qualify") {
  PipelineOutcome r1 = make_rtt(fixture_f1());
  CHECK(r1.success);
  CHECK(r1.moves_used == 0);
  CHECK(!r1.certificate.empty());

  PipelineOutcome r3 = make_rtt(fixture_f3());
  CHECK(r3.success);
  CHECK(r3.moves_used == 0);

  PipelineOutcome r5 = make_rtt(fixture_f5());
  CHECK(r5.success);
}

TEST_CASE("make_rtt budget and failure reporting") {
  // A -> AB, B -> A'B violates RTT-iii; budget 0 must fail honestly
  GraphMap bad = rose_map(2, {{1, 2}, {-1, 2}});
  PipelineOutcome r0 = make_rtt(bad, 0);
  CHECK_FALSE(r0.success);
  CHECK(r0.blocked.find("budget") != std::string::npos);
}

TEST_CASE("make_rtt reports failure on a degenerate self-map") {
  // A -> AB, B -> A'B is a legitimate graph self-map but not a homotopy
  // equivalence; the fold loop must terminate honestly within budget
  GraphMap bad = rose_map(2, {{1, 2}, {-1, 2}});
  PipelineOutcome r = make_rtt(bad, 40);
  if (!r.success) CHECK(!r.blocked.empty());
  CHECK(r.moves_used <= 40);
}

TEST_CASE("make_rtt is idempotent on its own output") {
  PipelineOutcome once = make_rtt(fixture_f5());
  REQUIRE(once.success);
  PipelineOutcome twice = make_rtt(once.map);
  CHECK(twice.success);
  CHECK(twice.moves_used == 0);
}

TEST_CASE("make_ct rejects non-rotationless input") {
  CHECK_THROWS_AS(make_ct(fixture_f4()), std::invalid_argument);
}

TEST_CASE("make_ct on F3") {
  PipelineOutcome r = make_ct(fixture_f3());
  CHECK(r.success);
  CHECK_FALSE(r.ct.failed());
  BasisAutomorphism before = induced_automorphism(fixture_f3());
  BasisAutomorphism after = induced_automorphism(r.map);
  CHECK(same_outer_class(before, after));
}

TEST_CASE("make_ct on F1 normalizes the last stratum") {
  GraphMap f1 = fixture_f1();
  PipelineOutcome r = make_ct(f1);
  CHECK(r.success);
  CHECK_FALSE(r.ct.failed());
  // the C stratum was split at its fixed point and reoriented
  CHECK(r.map.graph().num_vertices == 2);
  auto infos = classify_strata(r.map);
  for (auto& in : infos) {
    bool neg = in.kind == StratumKind::NegLinear || in.kind == StratumKind::NegGeneral;
    if (neg) CHECK(in.normal_form);
  }
  BasisAutomorphism before = induced_automorphism(f1);
  BasisAutomorphism after = induced_automorphism(r.map);
  CHECK(same_outer_class(before, after));
}

TEST_CASE("make_ct on F5 and F2") {
  PipelineOutcome r5 = make_ct(fixture_f5());
  CHECK(r5.success);
  PipelineOutcome r2 = make_ct(fixture_f2());
  CHECK(r2.success);
}
