#pragma once

#include <map>
#include <string>
#include <vector>

#include "canrt/agent.hpp"
#include "canrt/rational.hpp"

namespace canrt {

enum class ElementKind { event, plan, action };

/// One node visited by an execution. Labels are path-qualified (`e1`, `e1.P2`, `e1.P2.a4#2`)
/// so the same action reached through different plans is a different element.
struct TraceElement {
  ElementKind kind = ElementKind::event;
  std::string label;

  friend bool operator==(const TraceElement&, const TraceElement&) = default;
  friend auto operator<=>(const TraceElement&, const TraceElement&) = default;
};

struct FullTrace {
  std::vector<TraceElement> elements;

  std::size_t length() const { return elements.size(); }
};

/// Elements completed so far by one intention, in execution order.
struct CurrentTrace {
  std::vector<TraceElement> elements;

  bool empty() const { return elements.empty(); }
  bool contains(const std::string& label) const;

  friend bool operator==(const CurrentTrace&, const CurrentTrace&) = default;
};

/// All complete execution traces per root event, fixed after compilation.
class TraceTable {
 public:
  void add(const std::string& root, std::vector<FullTrace> traces);

  /// Null when the event was never compiled.
  const std::vector<FullTrace>* find(const std::string& root) const;
  const std::map<std::string, std::vector<FullTrace>>& entries() const { return traces_; }

  /// Full traces of the trace's root that contain every element of `trace`. For sequential
  /// execution this is exactly the set of full traces having `trace` as a prefix.
  std::vector<const FullTrace*> extending(const CurrentTrace& trace) const;

 private:
  std::map<std::string, std::vector<FullTrace>> traces_;
  std::map<std::string, std::vector<std::vector<std::string>>> sorted_labels_;
};

struct TraceStep {
  enum class Kind { event, plan, action, backtrack };

  Kind kind = Kind::event;
  std::string label;
};

struct Progress {
  Rational ratio;      // conservative: position over the longest matching full trace
  Rational min_ratio;  // equals ratio
  Rational max_ratio;  // position over the shortest matching full trace
};

std::string plan_label(const std::string& event_label, std::size_t ordinal);
std::string element_label(const std::string& plan_label, const std::string& name, std::size_t position);

/// Enumerates every root-to-leaf execution of every event in the goal-plan tree.
TraceTable compile_traces(const CompiledAgent& agent);

/// `event` appends unless already present; `plan` and `action` append; `backtrack` drops every
/// element below the given event label. Throws TraceDesync if the result matches no full trace.
CurrentTrace update_trace(const TraceTable& table, CurrentTrace trace, const TraceStep& step);

/// Throws NoMatchingTrace when no full trace extends `trace`.
Progress estimate_progress(const CurrentTrace& trace, const TraceTable& table);

/// One line per trace: `;`-joined labels, a space, then the length.
std::string dump_traces(const TraceTable& table);

}  // namespace canrt
