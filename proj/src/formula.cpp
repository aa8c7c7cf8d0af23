#include "modal/formula.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace modal {

Index::Index(std::vector<int> elems) : elems_(std::move(elems)) {
  if (elems_.empty()) throw std::invalid_argument("index must be nonempty");
  for (int e : elems_)
    if (e < 0) throw std::invalid_argument("index elements must be naturals");
  std::sort(elems_.begin(), elems_.end());
  elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
}

bool Index::contains(int i) const {
  return std::binary_search(elems_.begin(), elems_.end(), i);
}

bool Index::subset_of(const Index& other) const {
  return std::includes(other.elems_.begin(), other.elems_.end(),
                       elems_.begin(), elems_.end());
}

bool Index::intersects(const Index& other) const {
  for (int e : elems_)
    if (other.contains(e)) return true;
  return false;
}

std::string Index::to_string() const {
  std::string out;
  for (std::size_t k = 0; k < elems_.size(); ++k) {
    if (k) out += ' ';
    out += std::to_string(elems_[k]);
  }
  return out;
}

struct Formula::Node {
  Kind kind;
  std::string name;                      // Prop
  int box_i = 0;                         // Box
  std::shared_ptr<const Index> index;    // Cap/Ucl (canonical)
  std::shared_ptr<const Node> a, b;      // children
};

namespace {
std::shared_ptr<const Formula::Node> make_node(Formula::Node n) {
  return std::make_shared<const Formula::Node>(std::move(n));
}
}  // namespace

Kind Formula::kind() const { return n_->kind; }

Formula Formula::prop(std::string name) {
  Node n;
  n.kind = Kind::Prop;
  n.name = std::move(name);
  return Formula(make_node(std::move(n)));
}

Formula Formula::neg(Formula f) {
  Node n;
  n.kind = Kind::Neg;
  n.a = f.n_;
  return Formula(make_node(std::move(n)));
}

Formula Formula::impl(Formula a, Formula b) {
  Node n;
  n.kind = Kind::Impl;
  n.a = a.n_;
  n.b = b.n_;
  return Formula(make_node(std::move(n)));
}

Formula Formula::box(int i, Formula f) {
  if (i < 0) throw std::invalid_argument("box subscript must be a natural");
  Node n;
  n.kind = Kind::Box;
  n.box_i = i;
  n.a = f.n_;
  return Formula(make_node(std::move(n)));
}

Formula Formula::cap(Index I, Formula f) {
  Node n;
  n.kind = Kind::Cap;
  n.index = std::make_shared<const Index>(std::move(I));
  n.a = f.n_;
  return Formula(make_node(std::move(n)));
}

Formula Formula::ucl(Index I, Formula f) {
  Node n;
  n.kind = Kind::Ucl;
  n.index = std::make_shared<const Index>(std::move(I));
  n.a = f.n_;
  return Formula(make_node(std::move(n)));
}

Formula Formula::conj(Formula a, Formula b) {
  return neg(impl(a, neg(b)));
}
Formula Formula::disj(Formula a, Formula b) { return impl(neg(a), b); }
Formula Formula::iff(Formula a, Formula b) {
  return conj(impl(a, b), impl(b, a));
}
Formula Formula::truth() { return impl(prop("p"), prop("p")); }
Formula Formula::falsity() { return neg(truth()); }

const std::string& Formula::prop_name() const {
  if (!is(Kind::Prop)) throw std::logic_error("prop_name on non-prop");
  return n_->name;
}

int Formula::box_index() const {
  if (!is(Kind::Box)) throw std::logic_error("box_index on non-box");
  return n_->box_i;
}

const Index& Formula::index() const {
  if (!is(Kind::Cap) && !is(Kind::Ucl))
    throw std::logic_error("index on non-indexed modality");
  return *n_->index;
}

Formula Formula::child() const {
  if (is(Kind::Prop) || is(Kind::Impl))
    throw std::logic_error("child on prop/impl");
  return Formula(n_->a);
}

Formula Formula::lhs() const {
  if (!is(Kind::Impl)) throw std::logic_error("lhs on non-impl");
  return Formula(n_->a);
}

Formula Formula::rhs() const {
  if (!is(Kind::Impl)) throw std::logic_error("rhs on non-impl");
  return Formula(n_->b);
}

int Formula::modal_depth() const {
  switch (kind()) {
    case Kind::Prop:
      return 0;
    case Kind::Neg:
      return child().modal_depth();
    case Kind::Impl:
      return std::max(lhs().modal_depth(), rhs().modal_depth());
    case Kind::Box:
    case Kind::Cap:
    case Kind::Ucl:
      return 1 + child().modal_depth();
  }
  return 0;
}

LangLevel Formula::level() const {
  switch (kind()) {
    case Kind::Prop:
      return LangLevel::Base;
    case Kind::Neg:
    case Kind::Box:
      return child().level();
    case Kind::Impl: {
      LangLevel a = lhs().level(), b = rhs().level();
      return level_leq(a, b) ? b : a;
    }
    case Kind::Cap: {
      LangLevel c = child().level();
      return level_leq(c, LangLevel::Cap) ? LangLevel::Cap : c;
    }
    case Kind::Ucl:
      return LangLevel::CapUcl;
  }
  return LangLevel::Base;
}

std::set<int> Formula::index_elements() const {
  std::set<int> out;
  auto walk = [&](auto&& self, const Node* n) -> void {
    switch (n->kind) {
      case Kind::Prop:
        return;
      case Kind::Box:
        out.insert(n->box_i);
        self(self, n->a.get());
        return;
      case Kind::Cap:
      case Kind::Ucl:
        out.insert(n->index->elems().begin(), n->index->elems().end());
        self(self, n->a.get());
        return;
      case Kind::Neg:
        self(self, n->a.get());
        return;
      case Kind::Impl:
        self(self, n->a.get());
        self(self, n->b.get());
        return;
    }
  };
  walk(walk, n_.get());
  return out;
}

std::set<std::string> Formula::propositions() const {
  std::set<std::string> out;
  auto walk = [&](auto&& self, const Node* n) -> void {
    if (n->kind == Kind::Prop) {
      out.insert(n->name);
      return;
    }
    if (n->a) self(self, n->a.get());
    if (n->b) self(self, n->b.get());
  };
  walk(walk, n_.get());
  return out;
}

namespace {

std::strong_ordering cmp_nodes(const Formula::Node* x, const Formula::Node* y) {
  if (x == y) return std::strong_ordering::equal;
  if (auto c = x->kind <=> y->kind; c != 0) return c;
  switch (x->kind) {
    case Kind::Prop:
      return x->name <=> y->name;
    case Kind::Neg:
      return cmp_nodes(x->a.get(), y->a.get());
    case Kind::Impl:
      if (auto c = cmp_nodes(x->a.get(), y->a.get()); c != 0) return c;
      return cmp_nodes(x->b.get(), y->b.get());
    case Kind::Box:
      if (auto c = x->box_i <=> y->box_i; c != 0) return c;
      return cmp_nodes(x->a.get(), y->a.get());
    case Kind::Cap:
    case Kind::Ucl:
      if (auto c = *x->index <=> *y->index; c != 0) return c;
      return cmp_nodes(x->a.get(), y->a.get());
  }
  return std::strong_ordering::equal;
}

}  // namespace

bool Formula::operator==(const Formula& other) const {
  return cmp_nodes(n_.get(), other.n_.get()) == 0;
}

std::strong_ordering Formula::operator<=>(const Formula& other) const {
  return cmp_nodes(n_.get(), other.n_.get());
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

struct Lexer {
  std::string_view text;
  std::size_t pos = 0;
  int line = 1, col = 1;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(line, col, msg);
  }

  void advance() {
    if (pos < text.size()) {
      if (text[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++pos;
    }
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace((unsigned char)text[pos]))
      advance();
  }

  bool eof() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool accept(std::string_view tok) {
    skip_ws();
    if (text.substr(pos, tok.size()) == tok) {
      for (std::size_t k = 0; k < tok.size(); ++k) advance();
      return true;
    }
    return false;
  }

  void expect(std::string_view tok, const std::string& what) {
    if (!accept(tok)) fail("expected '" + std::string(tok) + "' " + what);
  }

  int number() {
    skip_ws();
    if (pos >= text.size() || !std::isdigit((unsigned char)text[pos]))
      fail("expected a number");
    long v = 0;
    while (pos < text.size() && std::isdigit((unsigned char)text[pos])) {
      v = v * 10 + (text[pos] - '0');
      if (v > 1000000) fail("index element too large");
      advance();
    }
    return static_cast<int>(v);
  }

  // Identifier [a-z][a-z0-9_]* or the keywords true/false; empty if next
  // char cannot start one.
  std::string ident() {
    skip_ws();
    if (pos >= text.size() || !std::islower((unsigned char)text[pos]))
      return {};
    std::string out;
    while (pos < text.size() &&
           (std::islower((unsigned char)text[pos]) ||
            std::isdigit((unsigned char)text[pos]) || text[pos] == '_')) {
      out += text[pos];
      advance();
    }
    return out;
  }
};

struct Parser {
  Lexer lx;

  Formula formula() { return iff(); }

  Formula iff() {
    Formula left = implication();
    if (lx.accept("<->")) return Formula::iff(left, iff());
    return left;
  }

  Formula implication() {
    Formula left = disjunction();
    if (lx.accept("->")) return Formula::impl(left, implication());
    return left;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (true) {
      // '|' but careful: nothing else starts with '|'
      if (lx.accept("|"))
        f = Formula::disj(f, conjunction());
      else
        return f;
    }
  }

  Formula conjunction() {
    Formula f = unary();
    while (true) {
      if (lx.peek() == '&')
        (void)lx.accept("&"), f = Formula::conj(f, unary());
      else
        return f;
    }
  }

  std::vector<int> index_elems() {
    std::vector<int> elems;
    while (std::isdigit((unsigned char)lx.peek())) elems.push_back(lx.number());
    if (elems.empty()) lx.fail("empty index");
    return elems;
  }

  Formula unary() {
    if (lx.accept("~")) return Formula::neg(unary());
    if (lx.accept("[")) {
      if (lx.accept("&")) {
        Index I(index_elems());
        lx.expect("]", "after index");
        return Formula::cap(I, unary());
      }
      if (lx.accept("+")) {
        Index I(index_elems());
        lx.expect("]", "after index");
        return Formula::ucl(I, unary());
      }
      int i = lx.number();
      lx.expect("]", "after box subscript");
      return Formula::box(i, unary());
    }
    return atom();
  }

  Formula atom() {
    if (lx.accept("(")) {
      Formula f = formula();
      lx.expect(")", "to close group");
      return f;
    }
    std::string name = lx.ident();
    if (name.empty()) lx.fail("expected a formula");
    if (name == "true") return Formula::truth();
    if (name == "false") return Formula::falsity();
    return Formula::prop(std::move(name));
  }
};

}  // namespace

Formula parse(std::string_view text) {
  Parser p{Lexer{text}};
  Formula f = p.formula();
  if (!p.lx.eof()) p.lx.fail("unexpected trailing input");
  return f;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

void render_to(const Formula& f, std::string& out);

// Parenthesize implications under unary operators and on the left of '->'.
void render_tight(const Formula& f, std::string& out) {
  if (f.is(Kind::Impl)) {
    out += '(';
    render_to(f, out);
    out += ')';
  } else {
    render_to(f, out);
  }
}

void render_to(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case Kind::Prop:
      out += f.prop_name();
      return;
    case Kind::Neg:
      out += '~';
      render_tight(f.child(), out);
      return;
    case Kind::Box:
      out += '[';
      out += std::to_string(f.box_index());
      out += ']';
      render_tight(f.child(), out);
      return;
    case Kind::Cap:
      out += "[&";
      out += f.index().to_string();
      out += ']';
      render_tight(f.child(), out);
      return;
    case Kind::Ucl:
      out += "[+";
      out += f.index().to_string();
      out += ']';
      render_tight(f.child(), out);
      return;
    case Kind::Impl:
      render_tight(f.lhs(), out);
      out += " -> ";
      render_to(f.rhs(), out);
      return;
  }
}

}  // namespace

std::string render(const Formula& f) {
  std::string out;
  render_to(f, out);
  return out;
}

std::set<Formula> subformulas(const Formula& f) {
  std::set<Formula> out;
  auto walk = [&](auto&& self, const Formula& g) -> void {
    if (!out.insert(g).second) return;
    switch (g.kind()) {
      case Kind::Prop:
        return;
      case Kind::Neg:
      case Kind::Box:
      case Kind::Cap:
      case Kind::Ucl:
        self(self, g.child());
        return;
      case Kind::Impl:
        self(self, g.lhs());
        self(self, g.rhs());
        return;
    }
  };
  walk(walk, f);
  return out;
}

Formula closure_negation(const Formula& f) {
  if (f.is(Kind::Neg)) return f.child();
  return Formula::neg(f);
}

}  // namespace modal
