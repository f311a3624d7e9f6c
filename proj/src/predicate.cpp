#include "canrt/predicate.hpp"

#include <cctype>
#include <stdexcept>

#include "canrt/errors.hpp"
#include "lexer.hpp"

namespace canrt {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad(std::string_view text, const std::string& why) {
  throw ParseError(SourcePos{1, 1}, "bad predicate '" + std::string(text) + "': " + why);
}

struct Kw {
  std::string_view word;
  Predicate::Kind kind;
};

constexpr Kw kKeywords[] = {
    {"status", Predicate::Kind::status},       {"completed", Predicate::Kind::completed},
    {"blocked", Predicate::Kind::blocked},     {"steppable", Predicate::Kind::steppable},
    {"believes", Predicate::Kind::believes},   {"desires", Predicate::Kind::desires},
    {"progress", Predicate::Kind::progress},
};

}  // namespace

Predicate parse_predicate(std::string_view text) {
  std::string_view s = trim(text);
  auto open = s.find('(');
  if (open == std::string_view::npos) bad(text, "expected '('");
  std::string_view word = trim(s.substr(0, open));

  Predicate p;
  bool known = false;
  for (const auto& kw : kKeywords) {
    if (kw.word == word) {
      p.kind = kw.kind;
      known = true;
    }
  }
  if (!known) bad(text, "unknown predicate '" + std::string(word) + "'");

  int depth = 0;
  std::size_t close = std::string_view::npos;
  for (std::size_t i = open; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')' && --depth == 0) {
      close = i;
      break;
    }
  }
  if (close == std::string_view::npos) bad(text, "unbalanced parentheses");
  std::string_view inner = trim(s.substr(open + 1, close - open - 1));
  std::string_view rest = trim(s.substr(close + 1));

  if (p.kind == Predicate::Kind::believes) {
    p.formula = parse_formula(inner);
  } else {
    if (!detail::is_identifier(inner)) bad(text, "expected a name inside the parentheses");
    p.argument = std::string(inner);
  }

  if (p.kind == Predicate::Kind::status) {
    if (rest.empty() || rest.front() != '=') bad(text, "expected '=' and a status");
    auto status = parse_status(trim(rest.substr(1)));
    if (!status) bad(text, "status must be pending, active, success or failure");
    p.status = *status;
  } else if (p.kind == Predicate::Kind::progress) {
    if (!rest.starts_with(">=")) bad(text, "expected '>=' and a threshold");
    try {
      p.threshold = Rational::parse(trim(rest.substr(2)));
    } catch (const std::invalid_argument&) {
      bad(text, "threshold must be a fraction such as 3/4 or 0.75");
    }
  } else if (!rest.empty()) {
    bad(text, "unexpected '" + std::string(rest) + "'");
  }
  return p;
}

std::string to_string(const Predicate& p) {
  switch (p.kind) {
    case Predicate::Kind::status:
      return "status(" + p.argument + ")=" + std::string(to_string(p.status));
    case Predicate::Kind::completed:
      return "completed(" + p.argument + ")";
    case Predicate::Kind::blocked:
      return "blocked(" + p.argument + ")";
    case Predicate::Kind::steppable:
      return "steppable(" + p.argument + ")";
    case Predicate::Kind::believes:
      return "believes(" + to_string(p.formula) + ")";
    case Predicate::Kind::desires:
      return "desires(" + p.argument + ")";
    case Predicate::Kind::progress:
      return "progress(" + p.argument + ")>=" + p.threshold.to_string();
  }
  return {};
}

bool holds(const Predicate& p, const Program& program, const AgentConfig& config) {
  switch (p.kind) {
    case Predicate::Kind::status: {
      const EventRecord* r = config.record(p.argument);
      return r != nullptr && r->status == p.status;
    }
    case Predicate::Kind::completed: {
      const Intention* in = config.intention(p.argument);
      return in != nullptr && is_nil(in->body);
    }
    case Predicate::Kind::blocked: {
      const Intention* in = config.intention(p.argument);
      return in != nullptr && !is_nil(in->body) && is_blocked(program, config.beliefs, in->body);
    }
    case Predicate::Kind::steppable: {
      const Intention* in = config.intention(p.argument);
      return in != nullptr && !is_blocked(program, config.beliefs, in->body);
    }
    case Predicate::Kind::believes:
      return entails(config.beliefs, p.formula);
    case Predicate::Kind::desires:
      for (const auto& r : config.events) {
        if (r.event == p.argument) return true;
      }
      return false;
    case Predicate::Kind::progress: {
      const Intention* in = config.intention(p.argument);
      if (in != nullptr) return estimate_progress(in->trace, program.traces()).ratio >= p.threshold;
      // Once the intention is gone only a successful outcome counts as finished.
      const EventRecord* r = config.record(p.argument);
      return r != nullptr && r->status == Status::success && Rational(1) >= p.threshold;
    }
  }
  return false;
}

}  // namespace canrt
