#include <doctest.h>

#include <random>

#include "modal/model.hpp"

using namespace modal;
using nlohmann::json;

namespace {

KripkeModel two_chain() {
  // a --1--> b, p holds at a only.
  return KripkeModel({"a", "b"}, {{1, {{0, 1}}}, {2, {}}}, {{"p", {0}}});
}

KripkeModel from_text(const char* text) {
  return KripkeModel::from_json(json::parse(text));
}

}  // namespace

TEST_CASE("json round trip and strict schema") {
  const char* text =
      R"({"states":["a","b"],"rel":{"1":[["a","b"]],"2":[]},"val":{"p":["a"]}})";
  KripkeModel m = from_text(text);
  CHECK(m.num_states() == 2);
  CHECK(m.state_id("a") == 0);
  CHECK(m.has_edge(1, 0, 1));
  CHECK(!m.has_edge(2, 0, 1));
  CHECK(m.val("p", 0));
  CHECK(!m.val("p", 1));

  KripkeModel again = KripkeModel::from_json(m.to_json());
  CHECK(again.to_json() == m.to_json());

  // Unknown keys, undeclared states and bad rel keys are rejected.
  CHECK_THROWS_AS(from_text(R"({"states":[],"rel":{},"val":{},"x":1})"),
                  ModelError);
  CHECK_THROWS_AS(
      from_text(R"({"states":["a"],"rel":{"1":[["a","zz"]]},"val":{}})"),
      ModelError);
  CHECK_THROWS_AS(from_text(R"({"states":["a"],"rel":{"one":[]},"val":{}})"),
                  ModelError);
  CHECK_THROWS_AS(from_text(R"({"states":["a","a"],"rel":{},"val":{}})"),
                  ModelError);
  CHECK_THROWS_AS(from_text(R"({"states":["a"],"val":{}})"), ModelError);
}

TEST_CASE("relation algebra on a small model") {
  // 1: a->b, b->c;  2: a->b
  KripkeModel m({"a", "b", "c"},
                {{1, {{0, 1}, {1, 2}}}, {2, {{0, 1}}}},
                {});
  CHECK(compose_single(m, 1) == KripkeModel::PairList{{0, 1}, {1, 2}});
  CHECK(compose_cap(m, Index({1, 2})) == KripkeModel::PairList{{0, 1}});
  // Union {a->b, b->c, a->b}, transitively closed: adds a->c.
  CHECK(compose_ucl(m, Index({1, 2})) ==
        KripkeModel::PairList{{0, 1}, {0, 2}, {1, 2}});
  // Singleton cap is just the relation.
  CHECK(compose_cap(m, Index({1})) == m.rel(1));
  CHECK(is_transitive(compose_ucl(m, Index({1, 2}))));
}

TEST_CASE("ucl is the least transitive relation containing the union") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    int n = std::uniform_int_distribution<int>(1, 8)(rng);
    std::vector<std::string> names;
    for (int s = 0; s < n; ++s) names.push_back("w" + std::to_string(s));
    std::map<int, KripkeModel::PairList> rel;
    for (int i = 1; i <= 3; ++i) {
      KripkeModel::PairList r;
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
          if (std::uniform_int_distribution<int>(0, 4)(rng) == 0)
            r.push_back({s, t});
      rel[i] = r;
    }
    KripkeModel m(names, rel, {});
    Index I({1, 3});

    // Independent oracle: OR of boolean matrix powers 1..n of the union.
    std::vector<std::vector<bool>> u(n, std::vector<bool>(n, false));
    for (int i : I.elems())
      for (auto [s, t] : m.rel(i)) u[s][t] = true;
    std::vector<std::vector<bool>> acc = u, pw = u;
    for (int step = 1; step < n; ++step) {
      std::vector<std::vector<bool>> nx(n, std::vector<bool>(n, false));
      for (int s = 0; s < n; ++s)
        for (int k = 0; k < n; ++k)
          if (pw[s][k])
            for (int t = 0; t < n; ++t)
              if (u[k][t]) nx[s][t] = true;
      pw = nx;
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
          if (pw[s][t]) acc[s][t] = true;
    }
    KripkeModel::PairList expect;
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t)
        if (acc[s][t]) expect.push_back({s, t});
    CHECK(compose_ucl(m, I) == expect);
  }
}

TEST_CASE("frame checks") {
  KripkeModel m = two_chain();
  CHECK(frame_check(m, FrameClass::K, {1, 2}));
  CHECK(!frame_check(m, FrameClass::D, {1, 2}));  // b has no 1-successor
  CHECK(!frame_check(m, FrameClass::T, {1}));

  KripkeModel refl({"a", "b"},
                   {{1, {{0, 0}, {0, 1}, {1, 1}}}},
                   {});
  CHECK(frame_check(refl, FrameClass::T, {1}));
  CHECK(frame_check(refl, FrameClass::S4, {1}));  // also transitive here
  CHECK(!frame_check(refl, FrameClass::B, {1}));  // a->b without b->a

  auto viol = frame_violations(m, FrameClass::T, {1});
  REQUIRE(!viol.empty());
  CHECK(viol[0].condition == "reflexive");

  KripkeModel equiv({"a", "b"},
                    {{1, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}}},
                    {});
  CHECK(frame_check(equiv, FrameClass::S5, {1}));
}

TEST_CASE("satisfaction base cases") {
  KripkeModel m = two_chain();
  CHECK(satisfies(m, "a", parse("p")));
  CHECK(!satisfies(m, "b", parse("p")));
  CHECK(satisfies(m, "a", parse("~p -> p")));
  CHECK(satisfies(m, "a", parse("[1]~p")));
  CHECK(satisfies(m, "b", parse("[1]p")));  // no successors: vacuous
  CHECK(satisfies(m, "b", parse("[1]false")));
  CHECK(!valid_on_model(m, parse("p")));
  CHECK(valid_on_model(m, parse("[2]false")));
}

TEST_CASE("cap is intersection, not box-conjunction") {
  // 1: a->b, a->c;  2: a->c, a->d.  p holds at b, c, d but the witness of
  // the intersection is only c.
  KripkeModel m({"a", "b", "c", "d"},
                {{1, {{0, 1}, {0, 2}}}, {2, {{0, 2}, {0, 3}}}},
                {{"p", {2}}});
  CHECK(satisfies(m, "a", parse("[&1 2]p")));
  CHECK(!satisfies(m, "a", parse("[1]p")));
  CHECK(!satisfies(m, "a", parse("[2]p")));
  // Semantic cap-2: widening the index shrinks the relation.
  CHECK(valid_on_model(m, parse("[1]p -> [&1 2]p")));
  CHECK(valid_on_model(m, parse("[&1]p <-> [1]p")));
}

TEST_CASE("ucl satisfaction reaches along mixed steps") {
  // 1: a->b;  2: b->c.  q holds at b and c.
  KripkeModel m({"a", "b", "c"},
                {{1, {{0, 1}}}, {2, {{1, 2}}}},
                {{"q", {1, 2}}});
  CHECK(satisfies(m, "a", parse("[+1 2]q")));
  CHECK(satisfies(m, "a", parse("[+1]q")));  // reaches b only; q holds there
  CHECK(satisfies(m, "a", parse("[+2]q")));  // vacuous: a has no 2-edges
  CHECK(!satisfies(m, "a", parse("[+1 2]~q")));
}

TEST_CASE("ucl counts one or more steps, not zero") {
  // p fails at the start state but holds everywhere reachable.
  KripkeModel m({"a", "b"}, {{1, {{0, 1}, {1, 1}}}}, {{"p", {1}}});
  CHECK(satisfies(m, "a", parse("[+1]p")));
  CHECK(!satisfies(m, "a", parse("p")));
}

TEST_CASE("the cap-without-seriality witness") {
  // Two states, disjoint 1- and 2-edges: [&1 2]p and [&1 2]~p both hold
  // vacuously at a, so the D-style schema for cap fails on a serial frame.
  KripkeModel m({"a", "b"},
                {{1, {{0, 1}, {1, 1}}}, {2, {{0, 0}, {1, 0}}}},
                {{"p", {0}}});
  CHECK(frame_check(m, FrameClass::D, {1, 2}));
  CHECK(satisfies(m, "a", parse("[&1 2]p & [&1 2]~p")));
  CHECK(!valid_on_model(m, parse("[&1 2]p -> ~[&1 2]~p")));
}

TEST_CASE("paths") {
  KripkeModel m({"a", "b", "c"},
                {{1, {{0, 1}, {1, 2}}}, {2, {{0, 1}}}},
                {});
  Path p({0, 1, 2}, {Index({1, 2}), Index({1})});
  CHECK(p.length() == 2);
  CHECK(p.head() == 0);
  CHECK(p.tail() == 2);
  CHECK(p.is_i_path(1));
  CHECK(!p.is_i_path(2));
  CHECK(p.is_I_path(Index({1})));
  CHECK(!p.is_I_path(Index({1, 2})));
  CHECK(is_model_path(m, p));
  CHECK(!is_model_path(m, Path({0, 2}, {Index({1})})));

  Path s({0, 1}, {Index({1, 2})});
  CHECK(s.initial_segment_of(p));
  CHECK(s.proper_initial_segment_of(p));
  CHECK(p.diff_from(s) == Path({1, 2}, {Index({1})}));
  CHECK(p.diff_from(p) == Path::trivial(2));
  CHECK(Path::common_prefix(p, s) == s);
  CHECK(s.extended(Index({1}), 2) == p);
}
