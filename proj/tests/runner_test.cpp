#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "canrt/agent.hpp"
#include "canrt/explorer.hpp"
#include "canrt/predicate.hpp"
#include "canrt/runner.hpp"

namespace canrt {
namespace {

std::string read_agent(const std::string& name) {
  std::ifstream in(std::string(CANRT_SOURCE_DIR) + "/agents/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string dump(const std::vector<StepRecord>& records) {
  std::string out;
  for (const auto& r : records) out += to_json(r).dump() + "\n";
  return out;
}

TEST(Run, FifoFinishesMainTask) {
  Program program(parse_program(read_agent("uav.can")));
  auto records = run(program, Policy::fifo, 0, 1000);
  ASSERT_FALSE(records.empty());
  const StepRecord& last = records.back();
  EXPECT_TRUE(last.quiescent);
  EXPECT_EQ(last.rule, Rule::update_success);
  ASSERT_EQ(last.records.size(), 1u);
  EXPECT_EQ(last.records[0].status, Status::success);
  for (std::size_t i = 0; i < records.size(); ++i) EXPECT_EQ(records[i].step, i);
}

TEST(Run, SeededRunsAreIdentical) {
  Program program(parse_program(read_agent("uav.can")));
  for (std::uint64_t seed : {1u, 2u, 3u, 99u}) {
    EXPECT_EQ(dump(run(program, Policy::random, seed, 500)), dump(run(program, Policy::random, seed, 500)));
  }
}

TEST(Run, RandomPolicyReachesDifferentOutcomes) {
  Program program(parse_program(read_agent("uav.can")));
  std::set<std::string> finals;
  for (std::uint64_t seed = 0; seed < 40; ++seed) finals.insert(run(program, Policy::random, seed, 500).back().config);
  EXPECT_GT(finals.size(), 1u);
}

TEST(Run, MaxStepsBounds) {
  Program program(parse_program(read_agent("uav.can")));
  EXPECT_EQ(run(program, Policy::fifo, 0, 3).size(), 3u);
  EXPECT_TRUE(run(program, Policy::fifo, 0, 0).empty());
}

TEST(Run, ReportIsHonest) {
  Program program(parse_program(read_agent("uav.can")));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Runner runner(program, Policy::random, seed);
    while (auto rec = runner.step()) {
      const AgentConfig& cfg = runner.config();
      ASSERT_EQ(rec->config, canonical_form(cfg));
      ASSERT_EQ(rec->records.size(), cfg.events.size());
      for (const auto& r : rec->records) {
        ASSERT_TRUE(holds(parse_predicate("status(" + r.identifier + ")=" + std::string(to_string(r.status))),
                          program, cfg));
        const Intention* in = cfg.intention(r.identifier);
        ASSERT_EQ(r.progress.has_value(), in != nullptr);
        if (in != nullptr) {
          Progress p = estimate_progress(in->trace, program.traces());
          ASSERT_EQ(r.progress->ratio, p.ratio);
          ASSERT_EQ(r.progress->max_ratio, p.max_ratio);
          ASSERT_TRUE(holds(parse_predicate("progress(" + r.identifier + ")>=" + p.ratio.to_string()), program, cfg));
        }
      }
      ASSERT_EQ(rec->quiescent, runner.quiescent());
      ASSERT_EQ(!rec->attention.empty(), rec->rule == Rule::motive);
    }
  }
}

TEST(Run, JsonRecordShape) {
  Program program(parse_program(read_agent("uav.can")));
  auto first = to_json(run(program, Policy::fifo, 0, 1).front());
  EXPECT_EQ(first["step"], 0);
  EXPECT_EQ(first["rule"], "event");
  EXPECT_EQ(first["identifier"], "identifier1");
  EXPECT_EQ(first["records"][0]["status"], "active");
  EXPECT_EQ(first["records"][0]["progress"]["ratio"], "1/7");
  EXPECT_EQ(first["status_changes"][0]["from"], "pending");
  EXPECT_EQ(first["status_changes"][0]["to"], "active");
  EXPECT_TRUE(first["attention"].empty());
  EXPECT_FALSE(first["quiescent"]);
}

TEST(Run, AttentionInSameStepAsMotive) {
  Program program(parse_program(read_agent("uav.can")));
  bool seen = false;
  for (std::uint64_t seed = 0; seed < 60 && !seen; ++seed) {
    for (const auto& r : run(program, Policy::random, seed, 500)) {
      if (r.rule != Rule::motive) continue;
      ASSERT_EQ(r.attention.size(), 1u);
      EXPECT_EQ(r.attention[0].identifier, "identifier2");
      EXPECT_EQ(r.attention[0].event, "e_parked");
      seen = true;
    }
  }
  EXPECT_TRUE(seen);
}

}  // namespace
}  // namespace canrt
