#include "doctest.h"
#include "peblab/pebbling.hpp"

using namespace peblab;

namespace {

Vertex V(const Dag& g, const char* name) { return *g.find(name); }

// Builds a black-white pebbling from a move list like "B+ u", starting empty.
BwPebbling moves(const Dag& g, std::string_view text) { return parse_pebbling_trace(g, text).bw; }

std::vector<Dag> corpus() {
  std::vector<Dag> out;
  for (std::size_t n = 1; n <= 8; ++n) out.push_back(build_path(n));
  for (std::size_t h = 0; h <= 2; ++h) out.push_back(build_binary_tree(h));
  for (std::size_t h = 0; h <= 3; ++h) out.push_back(build_pyramid(h));
  return out;
}

}  // namespace

TEST_CASE("single vertex: one placement") {
  Dag g = build_path(1);
  BwPebbling p{{{}, {{0}, {}}}};
  CHECK(validate_bw(g, p, true) == PebblingCost{1, 1});
}

TEST_CASE("classic four-pebble schedule on the height-two pyramid") {
  Dag g = build_pyramid(2);
  auto p = moves(g, "B+ u\nB+ v\nB+ x\nB- u\nB+ w\nB+ y\nB- v\nB- w\nB+ z\nB- x\nB- y\n");
  CHECK(validate_bw(g, p, true) == PebblingCost{11, 4});
}

TEST_CASE("illegal black placement names rule 1") {
  Dag g = build_pyramid(2);
  auto p = moves(g, "B+ v\nB+ x\n");
  try {
    validate_bw(g, p, true);
    FAIL("accepted");
  } catch (const IllegalMove& e) {
    CHECK(e.step() == 2);
    CHECK(e.rule().rfind("rule 1", 0) == 0);
  }
}

TEST_CASE("endpoints and colour restrictions") {
  Dag g = build_path(2);
  CHECK_THROWS_AS(validate_bw(g, moves(g, "B+ v1\n"), false), WrongEndpoints);
  auto white = moves(g, "W+ v1\nB+ v2\nW- v1\n");
  CHECK(validate_bw(g, white, false) == PebblingCost{3, 2});
  CHECK_THROWS_AS(validate_bw(g, white, true), WhitePebbleInBlackOnly);
  // white removal needs its predecessors pebbled
  auto bad = moves(g, "W+ v2\nW- v2\nB+ v1\nB+ v2\nB- v1\n");
  CHECK_THROWS_AS(validate_bw(g, bad, false), IllegalMove);
  auto bad2 = moves(build_path(3), "B+ v1\nW+ v3\nB- v1\nW- v3\n");
  CHECK_THROWS_AS(validate_bw(build_path(3), bad2, false), IllegalMove);
  BwPebbling jump{{{}, {{1}, {}}, {{1}, {}}}};
  CHECK_THROWS_AS(validate_bw(g, jump, true), IllegalMove);
}

TEST_CASE("white removal without covered predecessors is rule 4") {
  Dag g = build_path(3);
  BwPebbling p{{{}, {{}, {1}}, {{}, {}}, {{0}, {}}}};
  try {
    validate_bw(g, p, false);
    FAIL("accepted");
  } catch (const IllegalMove& e) {
    CHECK(e.step() == 2);
    CHECK(e.rule().rfind("rule 4", 0) == 0);
  }
}

TEST_CASE("optimal prices on small graphs") {
  CHECK(optimal_black_price(build_path(1)).price == 1);
  CHECK(optimal_bw_price(build_path(1)).price == 1);
  for (std::size_t n = 2; n <= 8; ++n) CHECK(optimal_black_price(build_path(n)).price == 2);
  CHECK(optimal_black_price(build_pyramid(2)).price == 4);
  CHECK(optimal_bw_price(build_path(3)).price <= 2);
  CHECK(optimal_bw_price(build_pyramid(2)).price <= 4);
  // frozen regression values
  CHECK(optimal_bw_price(build_path(3)).price == 2);
  CHECK(optimal_bw_price(build_pyramid(2)).price == 4);
  CHECK(optimal_black_price(build_pyramid(3)).price == 5);
  CHECK(optimal_black_price(build_binary_tree(2)).price == 4);
}

TEST_CASE("price witnesses validate and are deterministic") {
  for (const auto& g : corpus()) {
    auto black = optimal_black_price(g);
    auto bw = optimal_bw_price(g);
    CHECK(bw.price <= black.price);
    CHECK(validate_bw(g, black.witness, true).space == black.price);
    CHECK(validate_bw(g, bw.witness, false).space == bw.price);
    CHECK(optimal_black_price(g).witness == black.witness);
    CHECK(optimal_bw_price(g).witness == bw.witness);
  }
}

TEST_CASE("search budget is enforced") {
  CHECK_THROWS_AS(optimal_black_price(build_pyramid(3), 10), BudgetExceeded);
}

TEST_CASE("greedy strategy") {
  CHECK(validate_bw(build_path(1), greedy_black_strategy(build_path(1)), true) == PebblingCost{1, 1});
  for (std::size_t n = 2; n <= 10; ++n)
    CHECK(validate_bw(build_path(n), greedy_black_strategy(build_path(n)), true) == PebblingCost{2 * n - 1, 2});
  auto pyr = validate_bw(build_pyramid(2), greedy_black_strategy(build_pyramid(2)), true);
  CHECK(pyr.space <= 6);
  CHECK(pyr == PebblingCost{13, 4});
  for (const auto& g : corpus()) CHECK_NOTHROW(validate_bw(g, greedy_black_strategy(g), true));
}

TEST_CASE("dropping any step breaks a valid pebbling") {
  for (const auto& g : corpus()) {
    auto p = greedy_black_strategy(g);
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
      BwPebbling q = p;
      q.steps.erase(q.steps.begin() + static_cast<std::ptrdiff_t>(i));
      CHECK_THROWS_AS(validate_bw(g, q, true), Error);
    }
  }
}

TEST_CASE("labelled pebbling of a single edge") {
  Dag g = parse_dag("v a\nv z\ne a z");
  auto t = parse_pebbling_trace(g, "game labelled\nI z\nI a\nM 1 2\nE 1\nE 2\n");
  REQUIRE(t.kind == GameKind::Labelled);
  auto cost = validate_labelled(g, t.labelled);
  CHECK(cost.time == 5);
  CHECK(cost.space == 2);
  CHECK(cost.max_subconfigs == 3);
  CHECK(cost.max_support == 1);
  auto report = check_bounded_space_consequence(g, t.labelled);
  CHECK(report.holds());
  CHECK(report.bound == 6);

  // merger on a vertex outside the support
  LabelledPebbling bad = t.labelled;
  bad.steps[3] = {SubConfig{V(g, "z"), {V(g, "a")}}, SubConfig{V(g, "a"), {}}, SubConfig{V(g, "a"), {V(g, "z")}}};
  CHECK_THROWS_AS(validate_labelled(g, bad), IllegalMove);
}

TEST_CASE("(2,1)-bounded labelled pebbling of an edge") {
  Dag g = parse_dag("v a\nv z\ne a z");
  // introduce <a,{}>, introduce <z,{a}>, merge, then erase both parents
  LabelledPebbling p{{{},
                      {SubConfig{0, {}}},
                      {SubConfig{0, {}}, SubConfig{1, {0}}},
                      {SubConfig{0, {}}, SubConfig{1, {0}}, SubConfig{1, {}}},
                      {SubConfig{0, {}}, SubConfig{1, {}}},
                      {SubConfig{1, {}}}}};
  auto cost = validate_labelled(g, p);
  CHECK(cost.space == 2);
  CHECK(cost.max_subconfigs * (cost.max_support + 1) >= cost.space);
}

TEST_CASE("black pebblings render as labelled pebblings") {
  Dag p3 = build_path(3);
  auto black = greedy_black_strategy(p3);
  auto s = validate_bw(p3, black, true).space;
  auto lab = labelled_from_black(p3, black);
  auto cost = validate_labelled(p3, lab);
  CHECK(cost.max_subconfigs == s + 1);
  CHECK(cost.max_support == 1);
  CHECK(check_bounded_space_consequence(p3, lab).holds());

  for (const auto& g : corpus()) {
    auto b = greedy_black_strategy(g);
    auto bs = validate_bw(g, b, true).space;
    auto l = labelled_from_black(g, b);
    auto c = validate_labelled(g, l);
    CHECK(c.max_subconfigs <= bs + 1);
    CHECK(c.max_support <= g.max_indegree());
    CHECK(check_bounded_space_consequence(g, l).holds());
  }
}

TEST_CASE("blob space measures") {
  Dag g = build_pyramid(2);
  BlobConfiguration final{{{V(g, "z")}, {}}};
  CHECK(blob_space(g, final) == 1);
  BlobConfiguration c{{{V(g, "y"), V(g, "z")}, {V(g, "v"), V(g, "w")}}};
  CHECK(blob_black_cost(c) == 1);
  CHECK(blob_white_cost(g, c) == 2);
  CHECK(blob_space(g, c) == 3);
  BlobConfiguration two{{{V(g, "x")}, {}}, {{V(g, "x"), V(g, "y")}, {}}};
  CHECK(blob_black_cost(two) == 2);
  // a white pebble not below every blob vertex is free
  BlobConfiguration partial{{{V(g, "x"), V(g, "y")}, {V(g, "u")}}};
  CHECK(blob_white_cost(g, partial) == 0);
}

TEST_CASE("blob black cost ignores subconfiguration order") {
  Dag g = build_pyramid(3);
  std::vector<BlobSubConfig> subs{{{0, 1}, {}}, {{1, 2}, {}}, {{0, 1, 2}, {}}, {{3}, {}}, {{2}, {4}}};
  std::size_t first = 0;
  std::sort(subs.begin(), subs.end());
  do {
    BlobConfiguration c(subs.begin(), subs.end());
    auto s = blob_space(g, c);
    if (first == 0) first = s;
    CHECK(s == first);
  } while (std::next_permutation(subs.begin(), subs.end()));
  CHECK(blob_black_cost(BlobConfiguration(subs.begin(), subs.end())) == 4);
}

TEST_CASE("blob pebbling of the height-one pyramid") {
  Dag g = build_pyramid(1);  // x, y -> z
  auto t = parse_pebbling_trace(g,
                                "game blob\n"
                                "I z\n"        // 1: <{z}, {x,y}>
                                "I x\n"        // 2: <{x}, {}>
                                "M 1 2\n"      // 3: <{z}, {y}>
                                "F 2 x y /\n"  // 4: <{x,y}, {}>
                                "E 1\nE 2\nE 4\n"
                                "I y\n"        // 5: <{y}, {}>
                                "M 3 5 y\n"    // 6: <{z}, {}>
                                "E 3\nE 5\n");
  REQUIRE(t.kind == GameKind::Blob);
  auto cost = validate_blob(g, t.blob);
  CHECK(cost.time == 11);
  // step 4 holds blobs {x}, {x,y}, {z} plus whites x, y below z
  CHECK(cost.space == 5);
  CHECK(parse_pebbling_trace(g, write_blob_trace(g, t.blob)).blob.steps == t.blob.steps);

  BlobPebbling bad = t.blob;
  bad.steps[1] = {BlobSubConfig{{V(g, "z")}, {V(g, "x")}}};
  CHECK_THROWS_AS(validate_blob(g, bad), IllegalMove);
}

TEST_CASE("trace files round-trip") {
  Dag g = build_pyramid(2);
  auto p = greedy_black_strategy(g);
  CHECK(parse_pebbling_trace(g, write_bw_trace(g, p)).bw == p);
  auto l = labelled_from_black(g, p);
  auto again = parse_pebbling_trace(g, write_labelled_trace(g, l));
  CHECK(again.kind == GameKind::Labelled);
  CHECK(again.labelled.steps == l.steps);
  CHECK_THROWS_AS(parse_pebbling_trace(g, "B+ q\n"), ParseError);
  CHECK_THROWS_AS(parse_pebbling_trace(g, "game labelled\nI u\nE 2\n"), ParseError);
  CHECK_THROWS_AS(parse_pebbling_trace(g, "B+ u\ngame bw\n"), ParseError);
}
