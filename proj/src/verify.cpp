#include "canrt/verify.hpp"

#include <algorithm>

#include "canrt/errors.hpp"

namespace canrt {

std::vector<Property> parse_properties(std::string_view text) {
  std::vector<Property> out;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;

    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    line = line.substr(first);
    if (line.starts_with("//") || line.starts_with("#")) continue;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.remove_suffix(1);

    auto colon = line.find(':');
    if (colon == std::string_view::npos)
      throw ParseError(SourcePos{line_no, 1}, "expected 'name: formula'");
    std::string name(line.substr(0, colon));
    while (!name.empty() && (name.back() == ' ' || name.back() == '\t')) name.pop_back();
    if (name.empty()) throw ParseError(SourcePos{line_no, 1}, "property has no name");
    std::string formula(line.substr(colon + 1));
    try {
      out.push_back({name, formula, parse_ctl(formula)});
    } catch (const ParseError& e) {
      throw ParseError(SourcePos{line_no, static_cast<int>(colon) + 1 + e.pos().column},
                       "in property '" + name + "': " + e.message(), e.expected());
    }
  }
  return out;
}

bool Verification::all_hold() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.holds; });
}

Verification verify(const Program& program, const std::vector<Property>& properties,
                    ExploreOptions options) {
  std::set<std::string> atoms;
  for (const auto& p : properties) p.formula.collect_atoms(atoms);
  for (const auto& atom : atoms) {
    if (atom.find('(') == std::string::npos) continue;
    Predicate pred = parse_predicate(atom);
    if (std::find(options.predicates.begin(), options.predicates.end(), pred) == options.predicates.end())
      options.predicates.push_back(pred);
  }

  Verification v;
  v.system = explore(program, options);
  for (const auto& p : properties) {
    CheckResult r = check(v.system, p.formula);
    PropertyResult res{p.name, r.holds_at_initial, r.count(), {}};
    if (!res.holds) res.counterexample = counterexample(v.system, p.formula);
    v.results.push_back(std::move(res));
  }
  return v;
}

}  // namespace canrt
