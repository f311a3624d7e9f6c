#include <gtest/gtest.h>

#include <random>

#include "canrt/agent.hpp"
#include "canrt/errors.hpp"
#include "canrt/progress.hpp"
#include "canrt/semantics.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace canrt {
namespace {

const char* kTwoPlans =
    "event e1 [i1]."
    "plan e1 : true <- a1; a2."
    "plan e1 : true <- a3; a4; a5."
    "action a1 : true <- +{d1}. action a2 : true <- +{d2}. action a3 : true <- +{d3}."
    "action a4 : true <- +{d4}. action a5 : true <- +{d5}.";

CurrentTrace trace_of(std::initializer_list<std::pair<ElementKind, const char*>> items) {
  CurrentTrace t;
  for (auto [kind, label] : items) t.elements.push_back({kind, label});
  return t;
}

std::vector<std::string> labels(const FullTrace& t) {
  std::vector<std::string> out;
  for (const auto& e : t.elements) out.push_back(e.label);
  return out;
}

TEST(Rational, Basics) {
  EXPECT_EQ(Rational(6, 8), Rational(3, 4));
  EXPECT_EQ(Rational(3, 4).to_string(), "3/4");
  EXPECT_EQ(Rational(4, 2).to_string(), "2");
  EXPECT_EQ(Rational::parse("0.75"), Rational(3, 4));
  EXPECT_EQ(Rational::parse("3/4"), Rational(3, 4));
  EXPECT_EQ(Rational::parse("1"), Rational(1));
  EXPECT_LT(Rational(2, 5), Rational(1, 2));
  EXPECT_THROW(Rational::parse("x"), std::invalid_argument);
  EXPECT_THROW(Rational(1, 0), std::invalid_argument);
}

TEST(CompileTraces, TwoPlanExample) {
  TraceTable table = compile_traces(parse_program(kTwoPlans));
  const auto* traces = table.find("e1");
  ASSERT_NE(traces, nullptr);
  ASSERT_EQ(traces->size(), 2u);
  EXPECT_EQ(labels((*traces)[0]), (std::vector<std::string>{"e1", "e1.P1", "e1.P1.a1#1", "e1.P1.a2#2"}));
  EXPECT_EQ((*traces)[0].length(), 4u);
  EXPECT_EQ(labels((*traces)[1]),
            (std::vector<std::string>{"e1", "e1.P2", "e1.P2.a3#1", "e1.P2.a4#2", "e1.P2.a5#3"}));
  EXPECT_EQ((*traces)[1].length(), 5u);
}

TEST(CompileTraces, EventWithoutPlans) {
  CompiledAgent agent = parse_program("event lonely [i].");
  TraceTable table = compile_traces(agent);
  ASSERT_EQ(table.find("lonely")->size(), 1u);
  EXPECT_EQ(table.find("lonely")->front().length(), 1u);
}

TEST(CompileTraces, SubEventExpandsInline) {
  CompiledAgent agent = parse_program(
      "event e1 [i]. plan e1 : true <- !e2. plan e2 : true <- a. action a : true <- +{x}.");
  TraceTable table = compile_traces(agent);
  const auto& traces = *table.find("e1");
  ASSERT_EQ(traces.size(), 1u);
  EXPECT_EQ(labels(traces[0]),
            (std::vector<std::string>{"e1", "e1.P1", "e1.P1.e2#1", "e1.P1.e2#1.P1", "e1.P1.e2#1.P1.a#1"}));
  EXPECT_EQ(traces[0].length(), 5u);
}

TEST(CompileTraces, RepeatedActionIsDistinct) {
  CompiledAgent agent = parse_program("event e [i]. plan e : true <- a; a. action a : true <- +{x}.");
  TraceTable table = compile_traces(agent);
  const auto& t = table.find("e")->front();
  EXPECT_EQ(labels(t), (std::vector<std::string>{"e", "e.P1", "e.P1.a#1", "e.P1.a#2"}));
}

TEST(CompileTraces, CountMatchesRecursiveOracle) {
  std::mt19937_64 rng(17);
  testing::AgentShape shape;
  shape.max_events = 5;
  shape.max_plans = 9;
  shape.max_body_items = 4;
  for (int i = 0; i < 300; ++i) {
    CompiledAgent agent = testing::random_agent(rng, shape);
    TraceTable table = compile_traces(agent);
    for (const auto& e : agent.event_names()) {
      ASSERT_EQ(table.find(e)->size(), testing::count_traces(agent, e)) << pretty_print(agent);
    }
  }
}

TEST(EstimateProgress, TwoPlanValues) {
  TraceTable table = compile_traces(parse_program(kTwoPlans));
  auto p1 = estimate_progress(
      trace_of({{ElementKind::event, "e1"}, {ElementKind::plan, "e1.P1"}, {ElementKind::action, "e1.P1.a1#1"}}),
      table);
  EXPECT_EQ(p1.ratio, Rational(3, 4));
  EXPECT_EQ(p1.ratio.to_double(), 0.75);
  auto p2 = estimate_progress(trace_of({{ElementKind::event, "e1"}, {ElementKind::plan, "e1.P2"}}), table);
  EXPECT_EQ(p2.ratio, Rational(2, 5));
  EXPECT_EQ(p2.min_ratio, Rational(2, 5));
  EXPECT_EQ(p2.max_ratio, Rational(2, 5));
}

TEST(EstimateProgress, AmbiguousPrefixBand) {
  TraceTable table = compile_traces(parse_program(kTwoPlans));
  auto p = estimate_progress(trace_of({{ElementKind::event, "e1"}}), table);
  // Oracle: e1 is a prefix of both traces, of lengths 4 and 5.
  EXPECT_EQ(p.ratio, Rational(1, 5));
  EXPECT_EQ(p.min_ratio, Rational(1, 5));
  EXPECT_EQ(p.max_ratio, Rational(1, 4));
}

TEST(EstimateProgress, NoMatch) {
  TraceTable table = compile_traces(parse_program(kTwoPlans));
  EXPECT_THROW(estimate_progress(trace_of({{ElementKind::event, "zz"}}), table), NoMatchingTrace);
  EXPECT_THROW(estimate_progress(CurrentTrace{}, table), NoMatchingTrace);
}

TEST(UpdateTrace, Examples) {
  TraceTable table = compile_traces(parse_program(kTwoPlans));
  CurrentTrace t = update_trace(table, {}, {TraceStep::Kind::event, "e1"});
  EXPECT_EQ(t, trace_of({{ElementKind::event, "e1"}}));

  t = update_trace(table, t, {TraceStep::Kind::plan, "e1.P1"});
  t = update_trace(table, t, {TraceStep::Kind::action, "e1.P1.a1#1"});
  // The rest of P1 fails; recovery drops everything below e1 and P2 is chosen.
  t = update_trace(table, t, {TraceStep::Kind::backtrack, "e1"});
  t = update_trace(table, t, {TraceStep::Kind::plan, "e1.P2"});
  EXPECT_EQ(t, trace_of({{ElementKind::event, "e1"}, {ElementKind::plan, "e1.P2"}}));

  t = update_trace(table, t, {TraceStep::Kind::action, "e1.P2.a3#1"});
  t = update_trace(table, t, {TraceStep::Kind::action, "e1.P2.a4#2"});
  EXPECT_EQ(t.elements.back().label, "e1.P2.a4#2");
  EXPECT_EQ(t.elements.size(), 4u);
}

TEST(UpdateTrace, Desync) {
  TraceTable table = compile_traces(parse_program(kTwoPlans));
  CurrentTrace t = update_trace(table, {}, {TraceStep::Kind::event, "e1"});
  EXPECT_THROW(update_trace(table, t, {TraceStep::Kind::action, "e1.P1.a2#1"}), TraceDesync);
  EXPECT_THROW(update_trace(table, t, {TraceStep::Kind::backtrack, "e9"}), TraceDesync);
  t = update_trace(table, t, {TraceStep::Kind::plan, "e1.P1"});
  EXPECT_THROW(update_trace(table, t, {TraceStep::Kind::plan, "e1.P1"}), TraceDesync);
}

// Drives single intentions through the semantics and checks the progress invariants on every
// reachable configuration.
TEST(ProgressInvariants, RandomAgents) {
  std::mt19937_64 rng(23);
  testing::AgentShape shape;
  shape.max_events = 3;
  shape.max_plans = 5;
  int checked = 0;
  for (int i = 0; i < 100; ++i) {
    Program program(testing::random_agent(rng, shape));
    std::vector<AgentConfig> frontier{program.initial_config()};
    std::vector<AgentConfig> seen;
    while (!frontier.empty() && seen.size() < 3000) {
      AgentConfig cfg = frontier.back();
      frontier.pop_back();
      if (std::find(seen.begin(), seen.end(), cfg) != seen.end()) continue;
      seen.push_back(cfg);
      for (const auto& t : agent_transitions(program, cfg)) {
        for (const auto& in : t.target.intentions) {
          Progress p = estimate_progress(in.trace, program.traces());
          ASSERT_GT(p.ratio, Rational(0));
          ASSERT_LE(p.ratio, Rational(1));
          ASSERT_LE(p.min_ratio, p.max_ratio);
          const Intention* before = cfg.intention(in.identifier);
          if (t.rule == Rule::step && t.identifier == in.identifier && before != nullptr &&
              in.trace.elements.size() == before->trace.elements.size() + 1) {
            // Appending an element strictly increases progress.
            ASSERT_GT(p.ratio, estimate_progress(before->trace, program.traces()).ratio);
          }
          bool complete = false;
          for (const auto* full : program.traces().extending(in.trace))
            complete = complete || full->length() == in.trace.elements.size();
          ASSERT_EQ(p.ratio == Rational(1), complete);
          ++checked;
        }
        frontier.push_back(t.target);
      }
    }
  }
  EXPECT_GT(checked, 1000);
}

}  // namespace
}  // namespace canrt
