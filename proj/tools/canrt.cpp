#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "canrt/agent.hpp"
#include "canrt/explorer.hpp"
#include "canrt/runner.hpp"
#include "canrt/service.hpp"
#include "canrt/verify.hpp"

namespace {

constexpr int kExitError = 1;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitProperty = 4;

struct Failure {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitError, "cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{kExitError, "cannot write " + path};
  out << content;
}

canrt::CompiledAgent load_agent(const std::string& path) {
  std::string source = read_file(path);
  try {
    return canrt::parse_program(source);
  } catch (const canrt::ParseError& e) {
    throw Failure{kExitParse, e.render(path)};
  } catch (const canrt::ValidationError& e) {
    throw Failure{kExitValidation, e.render(path)};
  }
}

std::vector<canrt::Predicate> load_predicates(const std::string& path) {
  std::vector<canrt::Predicate> out;
  std::istringstream in(read_file(path));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line.compare(first, 2, "//") == 0 || line[first] == '#') continue;
    try {
      out.push_back(canrt::parse_predicate(line));
    } catch (const canrt::ParseError& e) {
      throw Failure{kExitParse, path + ":" + std::to_string(line_no) + ": " + e.message()};
    }
  }
  return out;
}

canrt::Service* g_service = nullptr;

void on_signal(int) {
  if (g_service != nullptr) g_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Runtime and verifier for BDI agents with intention status, progress and attention."};
  app.require_subcommand(1);

  std::string file;
  bool dump = false;
  auto* check_cmd = app.add_subcommand("check", "Parse and validate an agent");
  check_cmd->add_option("file", file, "Agent source (.can)")->required();
  check_cmd->add_flag("--dump-traces", dump, "Also print every execution trace");

  auto* traces_cmd = app.add_subcommand("traces", "Print every execution trace with its length");
  traces_cmd->add_option("file", file, "Agent source (.can)")->required();

  std::string policy_name = "fifo";
  std::uint64_t seed = 0;
  std::size_t max_steps = 1000;
  auto* run_cmd = app.add_subcommand("run", "Execute the agent and print one JSON record per step");
  run_cmd->add_option("file", file, "Agent source (.can)")->required();
  run_cmd->add_option("--policy", policy_name, "fifo or random")->check(CLI::IsMember({"fifo", "random"}));
  run_cmd->add_option("--seed", seed, "Seed for the random policy");
  run_cmd->add_option("--max-steps", max_steps, "Stop after this many steps");

  std::string dot_path, explicit_prefix, predicates_path;
  std::size_t max_states = 100000;
  bool dfs = false, legacy = false;
  auto* explore_cmd = app.add_subcommand("explore", "Build the full state space");
  explore_cmd->add_option("file", file, "Agent source (.can)")->required();
  explore_cmd->add_option("--dot", dot_path, "Write a Graphviz file");
  explore_cmd->add_option("--explicit", explicit_prefix, "Write PREFIX.sta, PREFIX.tra and PREFIX.lab");
  explore_cmd->add_option("--max-states", max_states, "Give up beyond this many states");
  explore_cmd->add_option("--predicates", predicates_path, "Predicates to label, one per line");
  explore_cmd->add_flag("--dfs", dfs, "Depth-first search order");
  explore_cmd->add_flag("--legacy", legacy, "Original rules without statuses or motivations");

  std::string props_path;
  auto* verify_cmd = app.add_subcommand("verify", "Model-check CTL properties");
  verify_cmd->add_option("file", file, "Agent source (.can)")->required();
  verify_cmd->add_option("props", props_path, "Properties, one `name: formula` per line")->required();
  verify_cmd->add_option("--max-states", max_states, "Give up beyond this many states");

  std::string host = "127.0.0.1", journal_dir;
  int port = 8080;
  auto* serve_cmd = app.add_subcommand("serve", "Serve interactive sessions over HTTP");
  serve_cmd->add_option("file", file, "Default agent for new sessions");
  serve_cmd->add_option("--host", host, "Address to bind");
  serve_cmd->add_option("--port", port, "Port to bind");
  serve_cmd->add_option("--journal-dir", journal_dir, "Write one replayable journal per session here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check_cmd->parsed()) {
      auto agent = load_agent(file);
      std::cout << file << ": ok (" << agent.external_events.size() << " events, "
                << agent.motivations.size() << " motivations, " << agent.plans.size() << " plans, "
                << agent.actions.size() << " actions, " << agent.negative_assertions.size()
                << " negative assertions)\n";
      if (dump) std::cout << canrt::dump_traces(canrt::compile_traces(agent));
    } else if (traces_cmd->parsed()) {
      std::cout << canrt::dump_traces(canrt::compile_traces(load_agent(file)));
    } else if (run_cmd->parsed()) {
      canrt::Program program(load_agent(file));
      auto records = canrt::run(program, *canrt::parse_policy(policy_name), seed, max_steps);
      for (const auto& r : records) std::cout << canrt::to_json(r).dump() << '\n';
    } else if (explore_cmd->parsed()) {
      canrt::Program program(load_agent(file));
      canrt::ExploreOptions options;
      options.max_states = max_states;
      options.depth_first = dfs;
      options.legacy = legacy;
      if (!predicates_path.empty()) options.predicates = load_predicates(predicates_path);
      auto ts = canrt::explore(program, options);
      std::cout << "states " << ts.state_count << "\ntransitions " << ts.transition_count()
                << "\ndeadlocks " << ts.deadlocks.size() << '\n';
      if (!dot_path.empty()) write_file(dot_path, canrt::export_dot(ts));
      if (!explicit_prefix.empty()) {
        auto m = canrt::export_explicit(ts);
        write_file(explicit_prefix + ".sta", m.sta);
        write_file(explicit_prefix + ".tra", m.tra);
        write_file(explicit_prefix + ".lab", m.lab);
      }
    } else if (verify_cmd->parsed()) {
      canrt::Program program(load_agent(file));
      std::vector<canrt::Property> props;
      try {
        props = canrt::parse_properties(read_file(props_path));
      } catch (const canrt::ParseError& e) {
        throw Failure{kExitParse, e.render(props_path)};
      }
      canrt::ExploreOptions options;
      options.max_states = max_states;
      auto v = canrt::verify(program, props, options);
      std::cout << "states " << v.system.state_count << ", transitions " << v.system.transition_count()
                << '\n';
      std::size_t width = 8;
      for (const auto& r : v.results) width = std::max(width, r.name.size());
      for (const auto& r : v.results) {
        std::cout << r.name << std::string(width - r.name.size() + 2, ' ') << (r.holds ? "PASS" : "FAIL")
                  << "  " << r.satisfying << '/' << v.system.state_count << '\n';
        if (!r.holds && !r.counterexample.empty()) {
          std::cout << "  counterexample:\n";
          for (auto s : r.counterexample) std::cout << "    " << s << ": " << v.system.names[s] << '\n';
        }
      }
      if (!v.all_hold()) return kExitProperty;
    } else if (serve_cmd->parsed()) {
      std::optional<std::string> source;
      if (!file.empty()) {
        load_agent(file);
        source = read_file(file);
      }
      std::optional<std::filesystem::path> journals;
      if (!journal_dir.empty()) journals = journal_dir;
      canrt::SessionManager sessions(source, journals);
      canrt::Service service(sessions);
      g_service = &service;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on http://" << host << ':' << port << "/v1\n";
      if (!service.listen(host, port)) throw Failure{kExitError, "cannot listen on " + host + ":" + std::to_string(port)};
      g_service = nullptr;
    }
  } catch (const Failure& f) {
    std::cerr << "canrt: " << f.message << '\n';
    return f.code;
  } catch (const canrt::UnknownLabel& e) {
    std::cerr << "canrt: unknown label '" << e.label() << "'\n";
    return kExitError;
  } catch (const canrt::StateLimitExceeded& e) {
    std::cerr << "canrt: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "canrt: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
