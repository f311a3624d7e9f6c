#include "canrt/progress.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "canrt/errors.hpp"

namespace canrt {

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num, den);
  if (g == 0) g = 1;
  num_ = num / g;
  den_ = den / g;
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  auto digits = [](std::string_view s) {
    if (s.empty() || s.size() > 17) throw std::invalid_argument("bad number");
    std::int64_t v = 0;
    for (char c : s) {
      if (c < '0' || c > '9') throw std::invalid_argument("bad number");
      v = v * 10 + (c - '0');
    }
    return v;
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos)
    return Rational(digits(text.substr(0, slash)), digits(text.substr(slash + 1)));
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 12) throw std::invalid_argument("bad number");
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    return Rational((whole.empty() ? 0 : digits(whole)) * scale + digits(frac), scale);
  }
  return Rational(digits(text));
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  // Cross-multiplication fits easily: numerators and denominators here are trace lengths.
  return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
}

bool CurrentTrace::contains(const std::string& label) const {
  return std::any_of(elements.begin(), elements.end(),
                     [&](const TraceElement& e) { return e.label == label; });
}

void TraceTable::add(const std::string& root, std::vector<FullTrace> traces) {
  auto& sorted = sorted_labels_[root];
  sorted.clear();
  for (const auto& t : traces) {
    std::vector<std::string> labels;
    for (const auto& e : t.elements) labels.push_back(e.label);
    std::sort(labels.begin(), labels.end());
    sorted.push_back(std::move(labels));
  }
  traces_[root] = std::move(traces);
}

const std::vector<FullTrace>* TraceTable::find(const std::string& root) const {
  auto it = traces_.find(root);
  return it == traces_.end() ? nullptr : &it->second;
}

std::vector<const FullTrace*> TraceTable::extending(const CurrentTrace& trace) const {
  std::vector<const FullTrace*> out;
  if (trace.empty()) return out;
  auto it = traces_.find(trace.elements.front().label);
  if (it == traces_.end()) return out;
  std::vector<std::string> wanted;
  for (const auto& e : trace.elements) wanted.push_back(e.label);
  std::sort(wanted.begin(), wanted.end());
  const auto& sorted = sorted_labels_.at(it->first);
  for (std::size_t i = 0; i < it->second.size(); ++i) {
    if (std::includes(sorted[i].begin(), sorted[i].end(), wanted.begin(), wanted.end()))
      out.push_back(&it->second[i]);
  }
  return out;
}

std::string plan_label(const std::string& event_label, std::size_t ordinal) {
  return event_label + ".P" + std::to_string(ordinal);
}

std::string element_label(const std::string& plan_label, const std::string& name,
                          std::size_t position) {
  return plan_label + "." + name + "#" + std::to_string(position);
}

namespace {

using Path = std::vector<TraceElement>;

class TraceCompiler {
 public:
  explicit TraceCompiler(const CompiledAgent& agent) : agent_(agent) {
    for (std::size_t i = 0; i < agent.plans.size(); ++i) by_event_[agent.plans[i].event].push_back(i);
  }

  std::vector<Path> event(const std::string& name, const std::string& label) const {
    auto it = by_event_.find(name);
    if (it == by_event_.end()) return {Path{{ElementKind::event, label}}};
    std::vector<Path> out;
    for (std::size_t k = 0; k < it->second.size(); ++k) {
      std::string pl = plan_label(label, k + 1);
      std::size_t position = 0;
      for (auto& tail : body(agent_.plans[it->second[k]].body, pl, position)) {
        Path path{{ElementKind::event, label}, {ElementKind::plan, pl}};
        path.insert(path.end(), tail.begin(), tail.end());
        out.push_back(std::move(path));
      }
    }
    return out;
  }

 private:
  // Positions are assigned in left-to-right order, matching instantiation at run time.
  std::vector<Path> body(const BodyExpr& b, const std::string& pl, std::size_t& position) const {
    switch (b.kind()) {
      case BodyExpr::Kind::nil:
        return {Path{}};
      case BodyExpr::Kind::action:
        return {Path{{ElementKind::action, element_label(pl, b.name(), ++position)}}};
      case BodyExpr::Kind::post:
      case BodyExpr::Kind::goal:
        return event(b.name(), element_label(pl, b.name(), ++position));
      case BodyExpr::Kind::sequence:
      case BodyExpr::Kind::parallel: {
        auto heads = body(b.first(), pl, position);
        auto tails = body(b.second(), pl, position);
        std::vector<Path> out;
        out.reserve(heads.size() * tails.size());
        for (const auto& h : heads) {
          for (const auto& t : tails) {
            Path p = h;
            p.insert(p.end(), t.begin(), t.end());
            out.push_back(std::move(p));
          }
        }
        return out;
      }
    }
    return {};
  }

  const CompiledAgent& agent_;
  std::map<std::string, std::vector<std::size_t>> by_event_;
};

}  // namespace

TraceTable compile_traces(const CompiledAgent& agent) {
  TraceCompiler compiler(agent);
  TraceTable table;
  for (const auto& name : agent.event_names()) {
    std::vector<FullTrace> traces;
    for (auto& path : compiler.event(name, name)) traces.push_back(FullTrace{std::move(path)});
    table.add(name, std::move(traces));
  }
  return table;
}

CurrentTrace update_trace(const TraceTable& table, CurrentTrace trace, const TraceStep& step) {
  switch (step.kind) {
    case TraceStep::Kind::event:
      if (!trace.contains(step.label)) trace.elements.push_back({ElementKind::event, step.label});
      break;
    case TraceStep::Kind::plan:
    case TraceStep::Kind::action:
      if (trace.contains(step.label))
        throw TraceDesync("element '" + step.label + "' recorded twice");
      trace.elements.push_back(
          {step.kind == TraceStep::Kind::plan ? ElementKind::plan : ElementKind::action, step.label});
      break;
    case TraceStep::Kind::backtrack: {
      if (!trace.contains(step.label))
        throw TraceDesync("cannot backtrack to '" + step.label + "': not in the current trace");
      std::string below = step.label + ".";
      std::erase_if(trace.elements, [&](const TraceElement& e) { return e.label.starts_with(below); });
      break;
    }
  }
  if (table.extending(trace).empty())
    throw TraceDesync("current trace after '" + step.label + "' matches no full trace");
  return trace;
}

Progress estimate_progress(const CurrentTrace& trace, const TraceTable& table) {
  auto matches = table.extending(trace);
  if (matches.empty()) throw NoMatchingTrace("no full trace extends the current trace");
  std::size_t longest = 0;
  std::size_t shortest = matches.front()->length();
  for (const auto* m : matches) {
    longest = std::max(longest, m->length());
    shortest = std::min(shortest, m->length());
  }
  auto k = static_cast<std::int64_t>(trace.elements.size());
  Rational conservative(k, static_cast<std::int64_t>(longest));
  return Progress{conservative, conservative, Rational(k, static_cast<std::int64_t>(shortest))};
}

std::string dump_traces(const TraceTable& table) {
  std::string out;
  for (const auto& [root, traces] : table.entries()) {
    for (const auto& t : traces) {
      for (std::size_t i = 0; i < t.elements.size(); ++i) {
        if (i > 0) out += ';';
        out += t.elements[i].label;
      }
      out += ' ' + std::to_string(t.length()) + '\n';
    }
  }
  return out;
}

}  // namespace canrt
