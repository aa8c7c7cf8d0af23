#pragma once

#include <compare>
#include <stdexcept>
#include <vector>

#include "modal/formula.hpp"

namespace modal {

/// Alternating sequence s_0, I_0, s_1, ..., I_{n-1}, s_n over integer state
/// ids.  Used both for paths through a Kripke model and for canonical paths
/// over atoms.  length() counts edges, so a single state has length 0.
struct Path {
  std::vector<int> states;
  std::vector<Index> indices;

  Path(std::vector<int> sts, std::vector<Index> idxs)
      : states(std::move(sts)), indices(std::move(idxs)) {
    if (states.empty() || indices.size() + 1 != states.size())
      throw std::invalid_argument("malformed path");
  }
  static Path trivial(int s) { return Path({s}, {}); }

  std::size_t length() const { return indices.size(); }
  int head() const { return states.front(); }
  int tail() const { return states.back(); }

  /// i appears in every index of the path; trivially true for length 0.
  bool is_i_path(int i) const {
    for (const Index& I : indices)
      if (!I.contains(i)) return false;
    return true;
  }

  /// I is a subset of every index of the path.
  bool is_I_path(const Index& I) const {
    for (const Index& J : indices)
      if (!I.subset_of(J)) return false;
    return true;
  }

  bool initial_segment_of(const Path& t) const {
    if (length() > t.length()) return false;
    for (std::size_t x = 0; x <= length(); ++x)
      if (states[x] != t.states[x]) return false;
    for (std::size_t y = 0; y < length(); ++y)
      if (indices[y] != t.indices[y]) return false;
    return true;
  }

  bool proper_initial_segment_of(const Path& t) const {
    return length() < t.length() && initial_segment_of(t);
  }

  /// this \ s.  Keeps tail(s) as the first state; this \ this is the
  /// trivial path at the tail.  Throws if s is not an initial segment.
  Path diff_from(const Path& s) const {
    if (!s.initial_segment_of(*this))
      throw std::invalid_argument("diff: not an initial segment");
    std::size_t m = s.length();
    return Path(std::vector<int>(states.begin() + m, states.end()),
                std::vector<Index>(indices.begin() + m, indices.end()));
  }

  Path extended(const Index& I, int s) const {
    Path t = *this;
    t.indices.push_back(I);
    t.states.push_back(s);
    return t;
  }

  /// Longest common initial segment of two paths over the same state space.
  static Path common_prefix(const Path& a, const Path& b) {
    if (a.states[0] != b.states[0])
      throw std::invalid_argument("paths share no first state");
    std::size_t n = 0;
    std::size_t limit = std::min(a.length(), b.length());
    while (n < limit && a.indices[n] == b.indices[n] &&
           a.states[n + 1] == b.states[n + 1])
      ++n;
    return Path(std::vector<int>(a.states.begin(), a.states.begin() + n + 1),
                std::vector<Index>(a.indices.begin(), a.indices.begin() + n));
  }

  friend bool operator==(const Path&, const Path&) = default;
  friend auto operator<=>(const Path&, const Path&) = default;
};

}  // namespace modal
