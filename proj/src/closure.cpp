#include "modal/closure.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace modal {

Signature Signature::make(SystemId logic, Formula alpha, Index iota) {
  if (logic.level != LangLevel::CapUcl)
    throw std::invalid_argument(
        "signatures are defined for the full-language logics only");
  for (int i : alpha.index_elements())
    if (!iota.contains(i))
      throw std::invalid_argument("index " + std::to_string(i) +
                                  " of the formula is not in iota");
  return Signature{logic, std::move(alpha), std::move(iota)};
}

std::vector<Index> nonempty_subsets(const Index& iota) {
  const auto& e = iota.elems();
  std::vector<Index> out;
  for (std::uint32_t mask = 1; mask < (1u << e.size()); ++mask) {
    std::vector<int> elems;
    for (std::size_t k = 0; k < e.size(); ++k)
      if (mask & (1u << k)) elems.push_back(e[k]);
    out.emplace_back(std::move(elems));
  }
  std::sort(out.begin(), out.end());
  return out;
}

ClosureSet::ClosureSet(Signature sig, std::set<Formula> members)
    : sig_(std::move(sig)), members_(std::move(members)) {
  std::vector<std::pair<std::string, Formula>> keyed;
  keyed.reserve(members_.size());
  for (const Formula& f : members_) keyed.emplace_back(render(f), f);
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [key, f] : keyed) {
    sorted_.push_back(f);
    if (!f.is(Kind::Neg)) positives_.push_back(f);
  }
}

ClosureSet closure(const Signature& sig, Closure6 mode) {
  const std::vector<Index> subsets = nonempty_subsets(sig.iota);

  std::set<Formula> cl;
  std::deque<Formula> work;
  auto add = [&](const Formula& f) {
    if (cl.insert(f).second) work.push_back(f);
  };

  add(sig.alpha);
  while (!work.empty()) {
    Formula f = work.front();
    work.pop_front();

    // (2) subformulas
    switch (f.kind()) {
      case Kind::Prop:
        break;
      case Kind::Neg:
      case Kind::Box:
      case Kind::Cap:
      case Kind::Ucl:
        add(f.child());
        break;
      case Kind::Impl:
        add(f.lhs());
        add(f.rhs());
        break;
    }

    // (3) single negation of non-negated members
    if (!f.is(Kind::Neg)) add(Formula::neg(f));

    // (4) cap-singleton / box pairing, both directions
    if (f.is(Kind::Box) && sig.iota.contains(f.box_index()))
      add(Formula::cap(Index::singleton(f.box_index()), f.child()));
    if (f.is(Kind::Cap) && f.index().is_singleton() &&
        sig.iota.contains(f.index().elems().front()))
      add(Formula::box(f.index().elems().front(), f.child()));

    // (5) index widening
    if (f.is(Kind::Cap) && f.index().subset_of(sig.iota))
      for (const Index& J : subsets)
        if (f.index().proper_subset_of(J)) add(Formula::cap(J, f.child()));

    // (6) ucl unfolding guards
    if (f.is(Kind::Ucl) && f.index().subset_of(sig.iota)) {
      for (const Index& J : subsets) {
        bool fire = mode == Closure6::MeetingIndices
                        ? J.intersects(f.index())
                        : f.index().proper_subset_of(J);
        if (fire) add(Formula::cap(J, f));
      }
    }
  }
  return ClosureSet(sig, std::move(cl));
}

}  // namespace modal
