#pragma once

#include <compare>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace modal {

/// Error raised by the formula parser, with 1-based position info.
struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(int line_, int col_, const std::string& msg)
      : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                           std::to_string(col_) + ": " + msg),
        line(line_),
        column(col_) {}
};

/// A finite nonempty set of natural numbers labelling a compound modality.
/// Stored sorted and deduplicated so equality is structural.
class Index {
 public:
  explicit Index(std::vector<int> elems);
  static Index singleton(int i) { return Index({i}); }

  const std::vector<int>& elems() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  bool is_singleton() const { return elems_.size() == 1; }
  bool contains(int i) const;
  bool subset_of(const Index& other) const;
  bool proper_subset_of(const Index& other) const {
    return size() < other.size() && subset_of(other);
  }
  bool intersects(const Index& other) const;

  std::string to_string() const;  // elements space-separated, e.g. "1 2"

  friend bool operator==(const Index&, const Index&) = default;
  friend auto operator<=>(const Index&, const Index&) = default;

 private:
  std::vector<int> elems_;
};

enum class Kind { Prop, Neg, Impl, Box, Cap, Ucl };

/// Which constructors a formula uses.  Base = boxes only, Cap adds the
/// intersection modality, CapUcl adds the transitive-closure-of-union
/// modality on top.
enum class LangLevel { Base, Cap, CapUcl };

inline bool level_leq(LangLevel a, LangLevel b) {
  return static_cast<int>(a) <= static_cast<int>(b);
}

/// Immutable formula AST over {Prop, Neg, Impl, Box, Cap, Ucl}.  Derived
/// Boolean connectives are expanded at construction time and never appear
/// as nodes.  Cheap to copy (shared subtrees).
class Formula {
 public:
  struct Node;  // opaque; exposed for the implementation file only

  static Formula prop(std::string name);
  static Formula neg(Formula f);
  static Formula impl(Formula a, Formula b);
  static Formula box(int i, Formula f);
  static Formula cap(Index I, Formula f);
  static Formula ucl(Index I, Formula f);

  // Abbreviations in the {~, ->} encoding.
  static Formula conj(Formula a, Formula b);  // ~(a -> ~b)
  static Formula disj(Formula a, Formula b);  // ~a -> b
  static Formula iff(Formula a, Formula b);   // (a->b) & (b->a)
  static Formula truth();                     // p -> p
  static Formula falsity();                   // ~(p -> p)

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }
  const std::string& prop_name() const;
  int box_index() const;
  const Index& index() const;     // Cap/Ucl
  Formula child() const;          // Neg/Box/Cap/Ucl
  Formula lhs() const;            // Impl
  Formula rhs() const;            // Impl

  int modal_depth() const;
  LangLevel level() const;
  /// All natural numbers appearing as a box subscript or an index element.
  std::set<int> index_elements() const;
  std::set<std::string> propositions() const;

  bool operator==(const Formula& other) const;
  std::strong_ordering operator<=>(const Formula& other) const;

 private:
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

/// Parses the ASCII grammar.  Sugar (&, |, <->, true, false) expands into
/// {~, ->}; indices are canonicalized.  Throws ParseError.
Formula parse(std::string_view text);

/// Canonical rendering; parse(render(f)) is structurally equal to f.
std::string render(const Formula& f);

/// Reflexive-transitive subformula set, including f itself.
std::set<Formula> subformulas(const Formula& f);

/// -f: strips the negation if f is negated, otherwise negates.
Formula closure_negation(const Formula& f);

}  // namespace modal
