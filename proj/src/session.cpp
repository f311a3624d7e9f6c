#include "canrt/session.hpp"

#include <fstream>

#include "canrt/agent.hpp"
#include "canrt/explorer.hpp"

namespace canrt {

namespace {

std::string_view op_name(Injection::Op op) {
  switch (op) {
    case Injection::Op::add_belief:
      return "add-belief";
    case Injection::Op::remove_belief:
      return "remove-belief";
    case Injection::Op::post_event:
      return "post-event";
    case Injection::Op::ack:
      return "ack";
  }
  return "?";
}

std::string required_string(const nlohmann::json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || !it->is_string() || it->get<std::string>().empty())
    throw MalformedRequest(std::string("field '") + key + "' must be a non-empty string");
  return it->get<std::string>();
}

}  // namespace

Injection parse_injection(const nlohmann::json& body) {
  if (!body.is_object()) throw MalformedRequest("injection must be a JSON object");
  std::string op = required_string(body, "op");
  Injection in;
  if (op == "add-belief" || op == "remove-belief") {
    in.op = op == "add-belief" ? Injection::Op::add_belief : Injection::Op::remove_belief;
    in.name = required_string(body, "atom");
  } else if (op == "post-event") {
    in.op = Injection::Op::post_event;
    in.name = required_string(body, "event");
    in.identifier = required_string(body, "identifier");
  } else if (op == "ack") {
    in.op = Injection::Op::ack;
    if (auto it = body.find("note"); it != body.end()) {
      if (!it->is_string()) throw MalformedRequest("field 'note' must be a string");
      in.note = it->get<std::string>();
    }
  } else {
    throw MalformedRequest("unknown op '" + op + "'");
  }
  return in;
}

nlohmann::ordered_json to_json(const Injection& in) {
  nlohmann::ordered_json j;
  j["op"] = op_name(in.op);
  switch (in.op) {
    case Injection::Op::add_belief:
    case Injection::Op::remove_belief:
      j["atom"] = in.name;
      break;
    case Injection::Op::post_event:
      j["event"] = in.name;
      j["identifier"] = in.identifier;
      break;
    case Injection::Op::ack:
      j["note"] = in.note;
      break;
  }
  return j;
}

Session::Session(std::string id, std::string source, Policy policy, std::uint64_t seed,
                 std::optional<std::filesystem::path> journal)
    : id_(std::move(id)),
      source_(std::move(source)),
      policy_(policy),
      seed_(seed),
      program_(std::make_unique<Program>(parse_program(source_))),
      runner_(std::make_unique<Runner>(*program_, policy, seed)),
      journal_path_(std::move(journal)) {
  if (journal_path_) {
    std::ofstream(*journal_path_, std::ios::trunc);
    nlohmann::ordered_json entry;
    entry["op"] = "create";
    entry["source"] = source_;
    entry["policy"] = to_string(policy_);
    entry["seed"] = seed_;
    append_journal(entry);
  }
}

std::unique_ptr<Session> Session::replay(const std::filesystem::path& path, std::optional<std::string> id) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open journal " + path.string());
  std::unique_ptr<Session> session;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto entry = nlohmann::json::parse(line);
    std::string op = entry.at("op");
    if (op == "create") {
      auto policy = parse_policy(entry.at("policy").get<std::string>());
      if (!policy) throw Error("journal has an unknown policy");
      session = std::make_unique<Session>(id.value_or("replay"), entry.at("source").get<std::string>(),
                                          *policy, entry.at("seed").get<std::uint64_t>());
    } else if (session == nullptr) {
      throw Error("journal does not start with a create entry");
    } else if (op == "inject") {
      session->inject(parse_injection(entry.at("injection")));
    } else if (op == "step") {
      session->step(entry.at("count").get<std::size_t>());
    } else {
      throw Error("unknown journal entry '" + op + "'");
    }
  }
  if (session == nullptr) throw Error("empty journal " + path.string());
  return session;
}

void Session::append_journal(const nlohmann::ordered_json& entry) {
  if (!journal_path_) return;
  std::ofstream out(*journal_path_, std::ios::app);
  out << entry.dump() << '\n';
}

void Session::publish(std::string type, nlohmann::ordered_json data) {
  events_.push_back({events_.size(), std::move(type), std::move(data)});
}

nlohmann::ordered_json Session::snapshot() const {
  std::lock_guard lock(mutex_);
  return snapshot_locked();
}

nlohmann::ordered_json Session::snapshot_locked() const {
  const AgentConfig& cfg = runner_->config();
  nlohmann::ordered_json j;
  j["id"] = id_;
  j["policy"] = to_string(policy_);
  j["seed"] = seed_;
  j["steps"] = runner_->steps_taken();
  j["quiescent"] = queue_.empty() && runner_->quiescent();
  j["beliefs"] = cfg.beliefs.atoms();
  j["records"] = nlohmann::ordered_json::array();
  for (const auto& r : report_records(*program_, cfg)) j["records"].push_back(to_json(r));
  j["intentions"] = nlohmann::ordered_json::array();
  for (const auto& in : cfg.intentions) {
    nlohmann::ordered_json ij;
    ij["identifier"] = in.identifier;
    ij["event"] = in.event;
    ij["body"] = describe(in.body);
    std::vector<std::string> trace;
    for (const auto& e : in.trace.elements) trace.push_back(e.label);
    ij["trace"] = trace;
    ij["progress"] = to_json(estimate_progress(in.trace, program_->traces()));
    j["intentions"].push_back(std::move(ij));
  }
  j["attention"] = attention_;
  j["pending_injections"] = queue_.size();
  j["config"] = canonical_form(cfg);
  return j;
}

void Session::inject(const Injection& in) {
  std::lock_guard lock(mutex_);
  const CompiledAgent& agent = program_->agent();
  switch (in.op) {
    case Injection::Op::add_belief:
    case Injection::Op::remove_belief:
      if (!agent.atoms().contains(in.name))
        throw RejectedRequest("atom '" + in.name + "' is not declared by the agent");
      break;
    case Injection::Op::post_event: {
      if (!agent.event_names().contains(in.name))
        throw RejectedRequest("event '" + in.name + "' is not declared by the agent");
      bool taken = runner_->config().record(in.identifier) != nullptr ||
                   runner_->config().fired_motivations.contains(in.identifier);
      for (const auto& m : agent.motivations) taken = taken || m.identifier == in.identifier;
      for (const auto& e : agent.external_events) taken = taken || e.identifier == in.identifier;
      for (const auto& q : queue_) taken = taken || q.identifier == in.identifier;
      if (taken) throw RejectedRequest("identifier '" + in.identifier + "' is already in use");
      break;
    }
    case Injection::Op::ack:
      break;
  }
  queue_.push_back(in);
  append_journal({{"op", "inject"}, {"injection", to_json(in)}});
}

void Session::drain_locked() {
  if (queue_.empty()) return;
  AgentConfig cfg = runner_->config();
  std::set<std::string> atoms = cfg.beliefs.atoms();
  for (const auto& in : queue_) {
    switch (in.op) {
      case Injection::Op::add_belief:
        atoms.insert(in.name);
        break;
      case Injection::Op::remove_belief:
        atoms.erase(in.name);
        break;
      case Injection::Op::post_event:
        cfg.events.push_back({in.name, in.identifier, Status::pending});
        break;
      case Injection::Op::ack:
        break;
    }
  }
  cfg.beliefs = BeliefBase(std::move(atoms));
  queue_.clear();
  runner_->set_config(std::move(cfg));
}

nlohmann::ordered_json Session::step(std::size_t count) {
  std::lock_guard lock(mutex_);
  append_journal({{"op", "step"}, {"count", count}});
  std::size_t first_event = events_.size();
  bool had_queue = !queue_.empty();
  drain_locked();
  if (had_queue) was_quiescent_ = false;

  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < count; ++i) {
    auto rec = runner_->step();
    if (!rec) break;
    auto data = to_json(*rec);
    publish("step", data);
    for (const auto& a : rec->attention) {
      nlohmann::ordered_json flag{{"step", rec->step}, {"identifier", a.identifier}, {"event", a.event}};
      attention_.push_back(flag);
      publish("attention", std::move(flag));
    }
    for (const auto& c : rec->status_changes) {
      publish("status-change", {{"step", rec->step},
                                {"identifier", c.identifier},
                                {"event", c.event},
                                {"from", c.from ? nlohmann::ordered_json(to_string(*c.from))
                                                : nlohmann::ordered_json()},
                                {"to", to_string(c.to)}});
    }
    records.push_back(std::move(data));
  }

  bool quiescent = runner_->quiescent();
  if (quiescent && !was_quiescent_) publish("quiescent", {{"step", runner_->steps_taken()}});
  was_quiescent_ = quiescent;
  if (events_.size() != first_event) changed_.notify_all();

  nlohmann::ordered_json j;
  j["records"] = std::move(records);
  j["quiescent"] = quiescent;
  j["state"] = snapshot_locked();
  return j;
}

std::vector<StreamEvent> Session::events_from(std::size_t from, std::chrono::milliseconds wait) const {
  std::unique_lock lock(mutex_);
  if (wait.count() > 0)
    changed_.wait_for(lock, wait, [&] { return closed_ || events_.size() > from; });
  if (from >= events_.size()) return {};
  return {events_.begin() + static_cast<std::ptrdiff_t>(from), events_.end()};
}

std::size_t Session::event_count() const {
  std::lock_guard lock(mutex_);
  return events_.size();
}

void Session::close() {
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
  }
  changed_.notify_all();
}

bool Session::closed() const {
  std::lock_guard lock(mutex_);
  return closed_;
}

SessionManager::SessionManager(std::optional<std::string> default_source,
                               std::optional<std::filesystem::path> journal_dir)
    : default_source_(std::move(default_source)), journal_dir_(std::move(journal_dir)) {
  if (default_source_) parse_program(*default_source_);
  if (journal_dir_) std::filesystem::create_directories(*journal_dir_);
}

SessionManager::~SessionManager() { close_all(); }

std::string SessionManager::create(std::optional<std::string> source, Policy policy, std::uint64_t seed) {
  if (!source) source = default_source_;
  if (!source) throw MalformedRequest("no agent source given and the service has no default agent");
  std::string id;
  {
    std::lock_guard lock(mutex_);
    id = "s" + std::to_string(next_++);
  }
  std::optional<std::filesystem::path> journal;
  if (journal_dir_) journal = *journal_dir_ / (id + ".jsonl");
  auto session = std::make_shared<Session>(id, *source, policy, seed, journal);
  std::lock_guard lock(mutex_);
  sessions_[id] = std::move(session);
  return id;
}

std::shared_ptr<Session> SessionManager::get(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw SessionNotFound("no session '" + id + "'");
  return it->second;
}

std::vector<std::string> SessionManager::ids() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, _] : sessions_) out.push_back(id);
  return out;
}

void SessionManager::close_all() {
  std::lock_guard lock(mutex_);
  for (auto& [_, s] : sessions_) s->close();
}

}  // namespace canrt
