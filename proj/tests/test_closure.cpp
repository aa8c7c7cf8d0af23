#include <doctest.h>

#include "modal/closure.hpp"

using namespace modal;

namespace {

const SystemId kCK{FrameClass::K, LangLevel::CapUcl};

Signature sig(const char* alpha, std::vector<int> iota,
              SystemId logic = kCK) {
  return Signature::make(logic, parse(alpha), Index(std::move(iota)));
}

}  // namespace

TEST_CASE("signature validation") {
  CHECK_NOTHROW(sig("[&1 2]p", {1, 2}));
  CHECK_THROWS_AS(sig("[&1 2]p", {1}), std::invalid_argument);
  CHECK_THROWS_AS(sig("[3]p", {1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(Signature::make({FrameClass::K, LangLevel::Cap}, parse("p"),
                                  Index({1})),
                  std::invalid_argument);
}

TEST_CASE("nonempty_subsets") {
  auto subs = nonempty_subsets(Index({1, 2}));
  CHECK(subs == std::vector<Index>{Index({1}), Index({1, 2}), Index({2})});
  CHECK(nonempty_subsets(Index({3})).size() == 1);
  CHECK(nonempty_subsets(Index({1, 2, 3})).size() == 7);
}

TEST_CASE("closure of a proposition") {
  ClosureSet cl = closure(sig("p", {1}));
  CHECK(cl.members() == std::set<Formula>{parse("p"), parse("~p")});
  CHECK(cl.positives() == std::vector<Formula>{parse("p")});
}

TEST_CASE("closure of a single box") {
  ClosureSet cl = closure(sig("[1]p", {1}));
  CHECK(cl.size() == 6);
  for (const char* s : {"[1]p", "~[1]p", "p", "~p", "[&1]p", "~[&1]p"})
    CHECK(cl.contains(parse(s)));
}

TEST_CASE("closure condition 6, both readings") {
  Signature s = sig("[+1]p", {1, 2});
  ClosureSet lax = closure(s);  // MeetingIndices
  CHECK(lax.contains(parse("[&1][+1]p")));
  CHECK(lax.contains(parse("[&1 2][+1]p")));
  CHECK(lax.contains(parse("[1][+1]p")));  // singleton cap pairs with the box
  CHECK(!lax.contains(parse("[&2][+1]p")));  // J must meet I
  CHECK(lax.size() == 10);

  ClosureSet strict = closure(s, Closure6::StrictSupersets);
  CHECK(strict.contains(parse("[&1 2][+1]p")));
  CHECK(!strict.contains(parse("[&1][+1]p")));
  CHECK(strict.size() == 6);
}

TEST_CASE("cap widening stays inside iota") {
  ClosureSet cl = closure(sig("[&1]p", {1, 2, 3}));
  for (const char* s : {"[&1]p", "[&1 2]p", "[&1 3]p", "[&1 2 3]p", "[1]p"})
    CHECK(cl.contains(parse(s)));
  CHECK(!cl.contains(parse("[&2]p")));
  CHECK(!cl.contains(parse("[&2 3]p")));
}

TEST_CASE("closure is a fixpoint of its conditions") {
  for (const char* alpha :
       {"[+1 2]p", "[&1 2](p -> [1]p)", "[1]p & [+1 2]~p", "~[+1 2](p | [2]p)"}) {
    Signature s = sig(alpha, {1, 2});
    ClosureSet cl = closure(s);
    CHECK(cl.contains(s.alpha));
    for (const Formula& f : cl.members()) {
      // Negation closure, one leading negation only.
      if (!f.is(Kind::Neg)) CHECK(cl.contains(Formula::neg(f)));
      // Subformula closure.
      switch (f.kind()) {
        case Kind::Prop:
          break;
        case Kind::Impl:
          CHECK(cl.contains(f.lhs()));
          CHECK(cl.contains(f.rhs()));
          break;
        default:
          CHECK(cl.contains(f.child()));
      }
      // Box / singleton-cap pairing.
      if (f.is(Kind::Box) && s.iota.contains(f.box_index()))
        CHECK(cl.contains(
            Formula::cap(Index::singleton(f.box_index()), f.child())));
      // Cap widening.
      if (f.is(Kind::Cap) && f.index().subset_of(s.iota))
        for (const Index& J : nonempty_subsets(s.iota))
          if (f.index().subset_of(J))
            CHECK(cl.contains(Formula::cap(J, f.child())));
      // Ucl guards.
      if (f.is(Kind::Ucl))
        for (const Index& J : nonempty_subsets(s.iota))
          if (J.intersects(f.index()))
            CHECK(cl.contains(Formula::cap(J, f)));
    }
    // Deterministic order: sorted() is ordered by rendering and positives()
    // has exactly the non-negated members.
    const auto& v = cl.sorted();
    CHECK(v.size() == cl.size());
    for (std::size_t k = 1; k < v.size(); ++k)
      CHECK(render(v[k - 1]) < render(v[k]));
    std::size_t pos = 0;
    for (const Formula& f : v)
      if (!f.is(Kind::Neg)) ++pos;
    CHECK(cl.positives().size() == pos);
  }
}

TEST_CASE("closure is finite and modest for the working corpus") {
  for (const char* alpha : {"[+1 2]p", "[&1 2]p -> [+1 2]p", "[&1 2][&1]p"}) {
    ClosureSet cl = closure(sig(alpha, {1, 2}));
    CHECK(cl.size() >= 2);
    CHECK(cl.size() <= 64);
    CHECK(cl.positives().size() * 2 == cl.size());
  }
}
