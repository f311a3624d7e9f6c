#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "canrt/agent.hpp"
#include "canrt/errors.hpp"
#include "canrt/explorer.hpp"
#include "support/generators.hpp"

namespace canrt {
namespace {

std::string read_agent(const std::string& name) {
  std::ifstream in(std::string(CANRT_SOURCE_DIR) + "/agents/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::set<std::pair<std::string, std::string>> named_edges(const TransitionSystem& ts) {
  std::set<std::pair<std::string, std::string>> out;
  for (std::size_t s = 0; s < ts.state_count; ++s) {
    for (auto t : ts.successors[s]) out.emplace(ts.names[s], ts.names[t]);
  }
  return out;
}

TEST(Explore, SingleActionAgent) {
  // Adopt, select, act, finish: four states in a line, the last one a deadlock.
  Program program(parse_program("event e [i]. plan e : true <- a. action a : true <- +{x}."));
  TransitionSystem ts = explore(program);
  // Oracle by hand: pending; active with !e; select; recover(a); recover(nil); nil; success.
  ASSERT_EQ(ts.state_count, 7u);
  EXPECT_EQ(ts.transition_count(), 7u);
  EXPECT_EQ(ts.deadlocks, (std::set<std::size_t>{6}));
  EXPECT_EQ(ts.successors[6], (std::vector<std::size_t>{6}));
  for (std::size_t s = 0; s + 1 < ts.state_count; ++s)
    EXPECT_EQ(ts.successors[s], (std::vector<std::size_t>{s + 1}));
  EXPECT_EQ(ts.configs.back().record("i")->status, Status::success);
}

TEST(Explore, NoEventsIsOneDeadlockState) {
  Program program(parse_program("belief x."));
  TransitionSystem ts = explore(program);
  EXPECT_EQ(ts.state_count, 1u);
  EXPECT_EQ(ts.deadlocks.size(), 1u);
  auto m = export_explicit(ts);
  EXPECT_EQ(m.tra, "1 1\n0 0\n");
  EXPECT_EQ(m.lab, "0=\"init\" 1=\"deadlock\"\n0: 0 1\n");
}

TEST(Explore, StateLimit) {
  Program program(parse_program(read_agent("uav.can")));
  ExploreOptions options;
  options.max_states = 10;
  try {
    explore(program, options);
    FAIL();
  } catch (const StateLimitExceeded& e) {
    EXPECT_EQ(e.limit(), 10u);
  }
}

TEST(Explore, UavIsSmallAndTerminates) {
  Program program(parse_program(read_agent("uav.can")));
  TransitionSystem ts = explore(program);
  EXPECT_LT(ts.state_count, 1000u);
  // Every deadlock has the main task finished.
  for (auto d : ts.deadlocks) {
    Status s = ts.configs[d].record("identifier1")->status;
    EXPECT_TRUE(s == Status::success || s == Status::failure);
  }
}

TEST(Explore, BfsAndDfsAreIsomorphic) {
  std::mt19937_64 rng(51);
  testing::AgentShape shape;
  shape.motivations = true;
  shape.max_events = 3;
  std::vector<Program> programs;
  programs.emplace_back(parse_program(read_agent("uav.can")));
  for (int i = 0; i < 40; ++i) programs.emplace_back(testing::random_agent(rng, shape));
  int compared = 0;
  for (const auto& program : programs) {
    ExploreOptions bfs_options;
    bfs_options.max_states = 20000;
    TransitionSystem bfs;
    try {
      bfs = explore(program, bfs_options);
    } catch (const StateLimitExceeded&) {
      continue;
    }
    ++compared;
    ExploreOptions dfs_options = bfs_options;
    dfs_options.depth_first = true;
    TransitionSystem dfs = explore(program, dfs_options);
    ASSERT_EQ(bfs.state_count, dfs.state_count);
    EXPECT_EQ(std::set<std::string>(bfs.names.begin(), bfs.names.end()),
              std::set<std::string>(dfs.names.begin(), dfs.names.end()));
    EXPECT_EQ(named_edges(bfs), named_edges(dfs));
    EXPECT_EQ(bfs.names[bfs.initial], dfs.names[dfs.initial]);
  }
  EXPECT_GE(compared, 30);
}

TEST(Explore, CanonicalFormIsInjectiveOnUav) {
  Program program(parse_program(read_agent("uav.can")));
  TransitionSystem ts = explore(program);
  for (std::size_t a = 0; a < ts.state_count; ++a) {
    for (std::size_t b = a + 1; b < ts.state_count; ++b) EXPECT_FALSE(ts.configs[a] == ts.configs[b]);
  }
}

TEST(Explore, ExportsAreByteIdentical) {
  Program program(parse_program(read_agent("uav.can")));
  ExploreOptions options;
  options.predicates = {parse_predicate("status(identifier1)=success"), parse_predicate("believes(parked)")};
  auto a = export_explicit(explore(program, options));
  auto b = export_explicit(explore(program, options));
  EXPECT_EQ(a.sta, b.sta);
  EXPECT_EQ(a.tra, b.tra);
  EXPECT_EQ(a.lab, b.lab);
  EXPECT_EQ(export_dot(explore(program)), export_dot(explore(program)));
  EXPECT_EQ(a.lab.substr(0, a.lab.find('\n')),
            "0=\"init\" 1=\"deadlock\" 2=\"status(identifier1)=success\" 3=\"believes(parked)\"");
}

TEST(Explore, TraFormat) {
  Program program(parse_program(read_agent("uav.can")));
  TransitionSystem ts = explore(program);
  std::istringstream tra(export_explicit(ts).tra);
  std::size_t n = 0, m = 0;
  tra >> n >> m;
  EXPECT_EQ(n, ts.state_count);
  EXPECT_EQ(m, ts.transition_count());
  std::pair<std::size_t, std::size_t> prev{0, 0}, cur;
  std::size_t lines = 0;
  while (tra >> cur.first >> cur.second) {
    if (lines > 0) EXPECT_LT(prev, cur);
    prev = cur;
    ++lines;
  }
  EXPECT_EQ(lines, m);
}

TEST(Explore, DotEscapesQuotes) {
  TransitionSystem ts;
  ts.state_count = 1;
  ts.successors = {{0}};
  ts.names = {"a\"b"};
  EXPECT_NE(export_dot(ts).find("a\\\"b"), std::string::npos);
}

TEST(Predicates, ParseAndPrint) {
  EXPECT_EQ(to_string(parse_predicate("status( identifier1 )=active")), "status(identifier1)=active");
  EXPECT_EQ(to_string(parse_predicate("believes(a|b & ~c)")), "believes(a | b & ~c)");
  EXPECT_EQ(to_string(parse_predicate("progress(i) >= 0.75")), "progress(i)>=3/4");
  EXPECT_EQ(parse_predicate("progress(i)>=3/4"), parse_predicate("progress(i)>=0.75"));
  EXPECT_THROW(parse_predicate("status(i)=done"), ParseError);
  EXPECT_THROW(parse_predicate("wants(i)"), ParseError);
  EXPECT_THROW(parse_predicate("completed(i"), ParseError);
  EXPECT_THROW(parse_predicate("progress(i)>=x"), ParseError);
}

TEST(Predicates, Evaluate) {
  Program program(parse_program(read_agent("uav.can")));
  AgentConfig cfg = program.initial_config();
  EXPECT_TRUE(holds(parse_predicate("status(identifier1)=pending"), program, cfg));
  EXPECT_TRUE(holds(parse_predicate("desires(e_retrv)"), program, cfg));
  EXPECT_FALSE(holds(parse_predicate("desires(e_parked)"), program, cfg));
  EXPECT_FALSE(holds(parse_predicate("steppable(identifier1)"), program, cfg));
  cfg = agent_step(program, cfg).front();
  EXPECT_TRUE(holds(parse_predicate("steppable(identifier1)"), program, cfg));
  EXPECT_TRUE(holds(parse_predicate("progress(identifier1)>=1/7"), program, cfg));
  EXPECT_FALSE(holds(parse_predicate("progress(identifier1)>=1/2"), program, cfg));
  EXPECT_FALSE(holds(parse_predicate("completed(identifier1)"), program, cfg));
  EXPECT_FALSE(holds(parse_predicate("blocked(identifier1)"), program, cfg));
  EXPECT_TRUE(holds(parse_predicate("believes(~flying)"), program, cfg));
}

}  // namespace
}  // namespace canrt
