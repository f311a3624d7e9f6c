#include "canrt/formula.hpp"

#include "formula_parser.hpp"

namespace canrt {

struct BeliefFormula::Node {
  Kind kind = Kind::truth;
  std::string name;
  BeliefFormula lhs_child;
  BeliefFormula rhs_child;

  Node() : lhs_child(nullptr), rhs_child(nullptr) {}
};

// A null node is the `true` leaf.
BeliefFormula::BeliefFormula() : node_(nullptr) {}
BeliefFormula::BeliefFormula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

BeliefFormula BeliefFormula::truth() { return BeliefFormula(); }

BeliefFormula BeliefFormula::atom(std::string name) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::atom;
  node->name = std::move(name);
  return BeliefFormula(std::move(node));
}

BeliefFormula BeliefFormula::negation(BeliefFormula operand) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::negation;
  node->lhs_child = std::move(operand);
  return BeliefFormula(std::move(node));
}

BeliefFormula BeliefFormula::conjunction(BeliefFormula lhs, BeliefFormula rhs) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::conjunction;
  node->lhs_child = std::move(lhs);
  node->rhs_child = std::move(rhs);
  return BeliefFormula(std::move(node));
}

BeliefFormula BeliefFormula::disjunction(BeliefFormula lhs, BeliefFormula rhs) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::disjunction;
  node->lhs_child = std::move(lhs);
  node->rhs_child = std::move(rhs);
  return BeliefFormula(std::move(node));
}

BeliefFormula::Kind BeliefFormula::kind() const { return node_ ? node_->kind : Kind::truth; }

const std::string& BeliefFormula::name() const {
  static const std::string empty;
  return node_ ? node_->name : empty;
}

const BeliefFormula& BeliefFormula::lhs() const { return node_->lhs_child; }
const BeliefFormula& BeliefFormula::rhs() const { return node_->rhs_child; }

void BeliefFormula::collect_atoms(std::set<std::string>& out) const {
  switch (kind()) {
    case Kind::truth:
      break;
    case Kind::atom:
      out.insert(name());
      break;
    case Kind::negation:
      lhs().collect_atoms(out);
      break;
    case Kind::conjunction:
    case Kind::disjunction:
      lhs().collect_atoms(out);
      rhs().collect_atoms(out);
      break;
  }
}

bool operator==(const BeliefFormula& a, const BeliefFormula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case BeliefFormula::Kind::truth:
      return true;
    case BeliefFormula::Kind::atom:
      return a.name() == b.name();
    case BeliefFormula::Kind::negation:
      return a.lhs() == b.lhs();
    case BeliefFormula::Kind::conjunction:
    case BeliefFormula::Kind::disjunction:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
  return false;
}

namespace {

int precedence(const BeliefFormula& f) {
  switch (f.kind()) {
    case BeliefFormula::Kind::disjunction:
      return 1;
    case BeliefFormula::Kind::conjunction:
      return 2;
    default:
      return 3;
  }
}

void print(const BeliefFormula& f, std::string& out);

// Binary operators parse left-associatively, so a right operand of equal precedence needs parens.
void print_operand(const BeliefFormula& child, int min_prec, std::string& out) {
  bool parens = precedence(child) < min_prec;
  if (parens) out += '(';
  print(child, out);
  if (parens) out += ')';
}

void print(const BeliefFormula& f, std::string& out) {
  switch (f.kind()) {
    case BeliefFormula::Kind::truth:
      out += "true";
      break;
    case BeliefFormula::Kind::atom:
      out += f.name();
      break;
    case BeliefFormula::Kind::negation:
      out += '~';
      print_operand(f.lhs(), 3, out);
      break;
    case BeliefFormula::Kind::conjunction:
      print_operand(f.lhs(), 2, out);
      out += " & ";
      print_operand(f.rhs(), 3, out);
      break;
    case BeliefFormula::Kind::disjunction:
      print_operand(f.lhs(), 1, out);
      out += " | ";
      print_operand(f.rhs(), 2, out);
      break;
  }
}

}  // namespace

std::string to_string(const BeliefFormula& formula) {
  std::string out;
  print(formula, out);
  return out;
}

namespace detail {

namespace {

BeliefFormula parse_disjunction(TokenStream& in);

BeliefFormula parse_unary(TokenStream& in) {
  TokenStream::Nest nest(in);
  if (in.accept("~")) return BeliefFormula::negation(parse_unary(in));
  if (in.accept("(")) {
    BeliefFormula inner = parse_disjunction(in);
    in.expect(")");
    return inner;
  }
  const Token& tok = in.peek();
  if (tok.kind != TokenKind::identifier)
    throw ParseError(tok.pos, "expected a belief formula, found " + describe(tok),
                     {"'~'", "'('", "'true'", "atom"});
  in.next();
  if (tok.text == "true") return BeliefFormula::truth();
  return BeliefFormula::atom(tok.text);
}

BeliefFormula parse_conjunction(TokenStream& in) {
  BeliefFormula lhs = parse_unary(in);
  while (in.accept("&")) lhs = BeliefFormula::conjunction(std::move(lhs), parse_unary(in));
  return lhs;
}

BeliefFormula parse_disjunction(TokenStream& in) {
  BeliefFormula lhs = parse_conjunction(in);
  while (in.peek().is("|")) {
    in.next();
    lhs = BeliefFormula::disjunction(std::move(lhs), parse_conjunction(in));
  }
  return lhs;
}

}  // namespace

BeliefFormula parse_formula(TokenStream& in) { return parse_disjunction(in); }

}  // namespace detail

BeliefFormula parse_formula(std::string_view text) {
  detail::TokenStream in(detail::tokenize(text));
  BeliefFormula f = detail::parse_formula(in);
  if (!in.at_end()) in.unexpected({"&", "|"});
  return f;
}

}  // namespace canrt
