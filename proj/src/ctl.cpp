#include "canrt/ctl.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

#include "canrt/errors.hpp"

namespace canrt {

struct CtlFormula::Node {
  Kind kind;
  std::string label;
  std::optional<CtlFormula> lhs;
  std::optional<CtlFormula> rhs;
};

CtlFormula CtlFormula::truth() { return CtlFormula(std::make_shared<const Node>(Node{Kind::truth, {}, {}, {}})); }
CtlFormula CtlFormula::falsity() {
  return CtlFormula(std::make_shared<const Node>(Node{Kind::falsity, {}, {}, {}}));
}
CtlFormula CtlFormula::atom(std::string label) {
  return CtlFormula(std::make_shared<const Node>(Node{Kind::atom, std::move(label), {}, {}}));
}
CtlFormula CtlFormula::unary(Kind kind, CtlFormula operand) {
  return CtlFormula(std::make_shared<const Node>(Node{kind, {}, std::move(operand), {}}));
}
CtlFormula CtlFormula::binary(Kind kind, CtlFormula lhs, CtlFormula rhs) {
  return CtlFormula(std::make_shared<const Node>(Node{kind, {}, std::move(lhs), std::move(rhs)}));
}

CtlFormula::Kind CtlFormula::kind() const { return node_->kind; }
const std::string& CtlFormula::label() const { return node_->label; }
const CtlFormula& CtlFormula::lhs() const { return *node_->lhs; }
const CtlFormula& CtlFormula::rhs() const { return *node_->rhs; }

void CtlFormula::collect_atoms(std::set<std::string>& out) const {
  if (kind() == Kind::atom) out.insert(label());
  if (node_->lhs) node_->lhs->collect_atoms(out);
  if (node_->rhs) node_->rhs->collect_atoms(out);
}

namespace {

using K = CtlFormula::Kind;

bool is_predicate_word(std::string_view w) {
  return w == "status" || w == "completed" || w == "blocked" || w == "steppable" ||
         w == "believes" || w == "desires" || w == "progress";
}

// Character-level scanner: predicate atoms contain their own operators (`believes(a | b)`,
// `status(x)=active`) so they are captured whole before the CTL operators are looked at.
class CtlParser {
 public:
  explicit CtlParser(std::string_view text) : s_(text) {}

  CtlFormula parse() {
    CtlFormula f = implication();
    skip();
    if (i_ < s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(SourcePos{1, static_cast<int>(i_) + 1}, message);
  }

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  bool accept(std::string_view op) {
    skip();
    if (s_.substr(i_).starts_with(op)) {
      i_ += op.size();
      return true;
    }
    return false;
  }

  void expect(std::string_view op) {
    if (!accept(op)) fail("expected '" + std::string(op) + "'");
  }

  std::string_view peek_word() {
    skip();
    std::size_t j = i_;
    while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) ++j;
    return s_.substr(i_, j - i_);
  }

  std::string_view word_after(std::size_t pos) const {
    while (pos < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos]))) ++pos;
    std::size_t j = pos;
    while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) ++j;
    return s_.substr(pos, j - pos);
  }

  char char_after(std::size_t pos) const {
    while (pos < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos]))) ++pos;
    return pos < s_.size() ? s_[pos] : '\0';
  }

  bool accept_implies() { return accept("->") || accept("=>"); }

  CtlFormula implication() {
    CtlFormula lhs = disjunction();
    if (accept_implies()) return CtlFormula::binary(K::implication, lhs, implication());
    return lhs;
  }

  CtlFormula disjunction() {
    CtlFormula f = conjunction();
    while (accept("|")) f = CtlFormula::binary(K::disjunction, f, conjunction());
    return f;
  }

  CtlFormula conjunction() {
    CtlFormula f = unary();
    while (accept("&")) f = CtlFormula::binary(K::conjunction, f, unary());
    return f;
  }

  static std::optional<K> temporal(char path, char op) {
    static constexpr struct {
      char path, op;
      K kind;
    } table[] = {{'A', 'G', K::ag}, {'A', 'F', K::af}, {'A', 'X', K::ax},
                 {'E', 'G', K::eg}, {'E', 'F', K::ef}, {'E', 'X', K::ex}};
    for (const auto& t : table) {
      if (t.path == path && t.op == op) return t.kind;
    }
    return std::nullopt;
  }

  CtlFormula unary() {
    if (++depth_ > 200) fail("formula nested too deeply");
    CtlFormula f = unary_inner();
    --depth_;
    return f;
  }

  CtlFormula unary_inner() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end of formula");
    if (accept("!")) return CtlFormula::unary(K::negation, unary());
    if (accept("(")) {
      CtlFormula f = implication();
      expect(")");
      return f;
    }
    std::string_view w = peek_word();
    if (w.empty()) fail("unexpected '" + std::string(1, s_[i_]) + "'");

    if (w.size() == 2 && (w[0] == 'A' || w[0] == 'E')) {
      if (auto k = temporal(w[0], w[1])) {
        i_ += 2;
        return CtlFormula::unary(*k, unary());
      }
    }
    if (w == "A" || w == "E") {
      std::size_t after = i_ + 1;
      if (char_after(after) == '[') {
        i_ = after;
        expect("[");
        return bracketed(w[0]);
      }
      std::string_view op = word_after(after);
      if (op.size() == 1) {
        if (auto k = temporal(w[0], op[0])) {
          skip();
          i_ = s_.find(op, after) + 1;
          return CtlFormula::unary(*k, unary());
        }
      }
    }
    if (w == "true") {
      i_ += w.size();
      return CtlFormula::truth();
    }
    if (w == "false") {
      i_ += w.size();
      return CtlFormula::falsity();
    }
    if (is_predicate_word(w) && char_after(i_ + w.size()) == '(') return predicate();
    i_ += w.size();
    return CtlFormula::atom(std::string(w));
  }

  CtlFormula bracketed(char path) {
    CtlFormula lhs = disjunction();
    if (accept_implies()) {
      if (path != 'A') fail("'=>' inside brackets is only defined for A[...]");
      std::string_view op = peek_word();
      if (op != "F" && op != "G" && op != "X") fail("expected F, G or X after '=>'");
      i_ += 1;
      CtlFormula rhs = implication();
      expect("]");
      K inner = op == "F" ? K::af : op == "G" ? K::ag : K::ax;
      return CtlFormula::unary(
          K::ag, CtlFormula::binary(K::implication, lhs, CtlFormula::unary(inner, rhs)));
    }
    if (peek_word() != "U") fail("expected 'U' or '=>'");
    i_ += 1;
    CtlFormula rhs = implication();
    expect("]");
    return CtlFormula::binary(path == 'A' ? K::au : K::eu, lhs, rhs);
  }

  CtlFormula predicate() {
    std::size_t start = i_;
    int depth = 0;
    while (i_ < s_.size()) {
      char c = s_[i_++];
      if (c == '(') ++depth;
      if (c == ')' && --depth == 0) break;
    }
    if (depth != 0) fail("unbalanced parentheses in predicate");
    // Trailing comparison: `=status` or `>=threshold`.
    std::size_t save = i_;
    skip();
    if (s_.substr(i_).starts_with(">=")) {
      i_ += 2;
      skip();
      while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.' ||
                                s_[i_] == '/'))
        ++i_;
    } else if (i_ < s_.size() && s_[i_] == '=' && !s_.substr(i_).starts_with("=>")) {
      ++i_;
      std::string_view w = peek_word();
      i_ += w.size();
    } else {
      i_ = save;
    }
    Predicate p = parse_predicate(s_.substr(start, i_ - start));
    return CtlFormula::atom(to_string(p));
  }

  std::string_view s_;
  std::size_t i_ = 0;
  int depth_ = 0;
};

int precedence(K k) {
  switch (k) {
    case K::implication:
      return 1;
    case K::disjunction:
      return 2;
    case K::conjunction:
      return 3;
    default:
      return 4;
  }
}

std::string render(const CtlFormula& f, int context) {
  std::string out;
  switch (f.kind()) {
    case K::truth:
      return "true";
    case K::falsity:
      return "false";
    case K::atom:
      return f.label();
    case K::negation:
      return "!" + render(f.lhs(), 4);
    case K::ex:
    case K::ef:
    case K::eg:
    case K::ax:
    case K::af:
    case K::ag: {
      static constexpr std::string_view names[] = {"EX", "EF", "EG", "", "AX", "AF", "AG"};
      auto idx = static_cast<int>(f.kind()) - static_cast<int>(K::ex);
      return std::string(names[idx]) + " " + render(f.lhs(), 4);
    }
    case K::eu:
    case K::au:
      return std::string(f.kind() == K::au ? "A[" : "E[") + render(f.lhs(), 2) + " U " +
             render(f.rhs(), 1) + "]";
    case K::conjunction:
    case K::disjunction:
    case K::implication: {
      int p = precedence(f.kind());
      std::string_view op = f.kind() == K::conjunction ? " & " : f.kind() == K::disjunction ? " | " : " -> ";
      // -> is right-associative, & and | left-associative.
      bool right_assoc = f.kind() == K::implication;
      out = render(f.lhs(), right_assoc ? p + 1 : p) + std::string(op) +
            render(f.rhs(), right_assoc ? p : p + 1);
      return p < context ? "(" + out + ")" : out;
    }
  }
  return out;
}

using Bits = std::vector<bool>;

class Checker {
 public:
  explicit Checker(const TransitionSystem& ts) : ts_(ts), pred_(ts.state_count) {
    for (std::size_t s = 0; s < ts.state_count; ++s) {
      for (auto t : ts.successors[s]) pred_[t].push_back(s);
    }
  }

  Bits eval(const CtlFormula& f) const {
    const std::size_t n = ts_.state_count;
    switch (f.kind()) {
      case K::truth:
        return Bits(n, true);
      case K::falsity:
        return Bits(n, false);
      case K::atom:
        return ts_.label(f.label());
      case K::negation:
        return negate(eval(f.lhs()));
      case K::conjunction:
        return combine(eval(f.lhs()), eval(f.rhs()), [](bool a, bool b) { return a && b; });
      case K::disjunction:
        return combine(eval(f.lhs()), eval(f.rhs()), [](bool a, bool b) { return a || b; });
      case K::implication:
        return combine(eval(f.lhs()), eval(f.rhs()), [](bool a, bool b) { return !a || b; });
      case K::ex:
        return ex(eval(f.lhs()));
      case K::ef:
        return eu(Bits(n, true), eval(f.lhs()));
      case K::eg:
        return eg(eval(f.lhs()));
      case K::eu:
        return eu(eval(f.lhs()), eval(f.rhs()));
      case K::ax:
        return negate(ex(negate(eval(f.lhs()))));
      case K::af:
        return negate(eg(negate(eval(f.lhs()))));
      case K::ag:
        return negate(eu(Bits(n, true), negate(eval(f.lhs()))));
      case K::au: {
        Bits p = eval(f.lhs());
        Bits not_q = negate(eval(f.rhs()));
        Bits bad = eu(not_q, combine(negate(p), not_q, [](bool a, bool b) { return a && b; }));
        Bits stuck = eg(not_q);
        return negate(combine(bad, stuck, [](bool a, bool b) { return a || b; }));
      }
    }
    return Bits(n, false);
  }

  Bits ex(const Bits& target) const {
    Bits out(ts_.state_count, false);
    for (std::size_t s = 0; s < ts_.state_count; ++s) {
      for (auto t : ts_.successors[s]) {
        if (target[t]) out[s] = true;
      }
    }
    return out;
  }

  // Least fixed point, grown backwards from q through p-states.
  Bits eu(const Bits& p, const Bits& q) const {
    Bits z = q;
    std::deque<std::size_t> work;
    for (std::size_t s = 0; s < z.size(); ++s) {
      if (z[s]) work.push_back(s);
    }
    while (!work.empty()) {
      std::size_t t = work.front();
      work.pop_front();
      for (auto s : pred_[t]) {
        if (!z[s] && p[s]) {
          z[s] = true;
          work.push_back(s);
        }
      }
    }
    return z;
  }

  // Greatest fixed point: drop f-states until each survivor has a surviving successor.
  Bits eg(const Bits& f) const {
    Bits z = f;
    std::vector<std::size_t> live(ts_.state_count, 0);
    std::deque<std::size_t> work;
    for (std::size_t s = 0; s < z.size(); ++s) {
      if (!z[s]) continue;
      for (auto t : ts_.successors[s]) live[s] += z[t] ? 1 : 0;
      if (live[s] == 0) work.push_back(s);
    }
    while (!work.empty()) {
      std::size_t s = work.front();
      work.pop_front();
      if (!z[s]) continue;
      z[s] = false;
      for (auto p : pred_[s]) {
        if (!z[p]) continue;
        // A state may list the same successor once only, so each edge is counted once.
        if (--live[p] == 0) work.push_back(p);
      }
    }
    return z;
  }

 private:
  static Bits negate(Bits b) {
    b.flip();
    return b;
  }

  template <class Op>
  static Bits combine(const Bits& a, const Bits& b, Op op) {
    Bits out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = op(a[i], b[i]);
    return out;
  }

  const TransitionSystem& ts_;
  std::vector<std::vector<std::size_t>> pred_;
};

std::vector<std::size_t> path_to(const TransitionSystem& ts, const Bits& goal) {
  std::vector<std::size_t> parent(ts.state_count, ts.state_count);
  std::vector<bool> seen(ts.state_count, false);
  std::deque<std::size_t> work{ts.initial};
  seen[ts.initial] = true;
  while (!work.empty()) {
    std::size_t s = work.front();
    work.pop_front();
    if (goal[s]) {
      std::vector<std::size_t> path;
      for (std::size_t v = s; v != ts.state_count; v = parent[v]) path.push_back(v);
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (auto t : ts.successors[s]) {
      if (!seen[t]) {
        seen[t] = true;
        parent[t] = s;
        work.push_back(t);
      }
    }
  }
  return {};
}

// Follows successors inside `region` (every member has one) until a state repeats.
void extend_lasso(const TransitionSystem& ts, const Bits& region, std::vector<std::size_t>& path) {
  std::vector<bool> on_path(ts.state_count, false);
  for (auto s : path) on_path[s] = true;
  std::size_t s = path.back();
  while (true) {
    std::size_t next = ts.state_count;
    for (auto t : ts.successors[s]) {
      if (region[t]) {
        next = t;
        break;
      }
    }
    if (next == ts.state_count) return;
    path.push_back(next);
    if (on_path[next]) return;
    on_path[next] = true;
    s = next;
  }
}

}  // namespace

CtlFormula parse_ctl(std::string_view text) { return CtlParser(text).parse(); }

std::string to_string(const CtlFormula& formula) { return render(formula, 0); }

std::size_t CheckResult::count() const {
  return static_cast<std::size_t>(std::count(satisfying.begin(), satisfying.end(), true));
}

CheckResult check(const TransitionSystem& ts, const CtlFormula& formula) {
  Checker checker(ts);
  CheckResult r;
  r.satisfying = checker.eval(formula);
  r.holds_at_initial = ts.state_count > 0 && r.satisfying[ts.initial];
  return r;
}

std::vector<std::size_t> counterexample(const TransitionSystem& ts, const CtlFormula& formula) {
  Checker checker(ts);
  if (formula.kind() == K::ag) {
    Bits bad = checker.eval(formula.lhs());
    bad.flip();
    auto path = path_to(ts, bad);
    const CtlFormula& inner = formula.lhs();
    // For p -> AF q, continue from the violation along a run that never reaches q.
    if (!path.empty() && inner.kind() == K::implication && inner.rhs().kind() == K::af) {
      Bits avoid = checker.eval(inner.rhs().lhs());
      avoid.flip();
      extend_lasso(ts, checker.eg(avoid), path);
    }
    return path;
  }
  if (formula.kind() == K::af) {
    Bits avoid = checker.eval(formula.lhs());
    avoid.flip();
    Bits region = checker.eg(avoid);
    if (!region[ts.initial]) return {};
    std::vector<std::size_t> path{ts.initial};
    extend_lasso(ts, region, path);
    return path;
  }
  return {};
}

}  // namespace canrt
