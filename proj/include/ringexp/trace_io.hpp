#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ringexp/engine.hpp"

// JSON Lines trace format. First line is a header
//   {"n":9,"k":4,"seed":7,"policy":"round-robin","initial":"1,0,2,1,0,0,0,0,0"}
// followed by one record per step
//   {"t":0,"activated":[0],"coins":{"1":true},"adversary":{"2":5},"config":"..."}
// where "config" is the configuration after the step. Robot ids are assigned
// by increasing node index in the initial configuration.

namespace ringexp {

using ordered_json = nlohmann::ordered_json;

struct TraceHeader {
  int n = 0;
  int k = 0;
  std::uint64_t seed = 0;
  std::string policy;
  Configuration initial;
};

inline ordered_json header_json(const TraceHeader& h) {
  ordered_json j;
  j["n"] = h.n;
  j["k"] = h.k;
  j["seed"] = h.seed;
  j["policy"] = h.policy;
  j["initial"] = h.initial.to_string();
  return j;
}

inline ordered_json step_json(const StepRecord& s) {
  ordered_json j;
  j["t"] = s.t;
  j["activated"] = s.activated;
  ordered_json coins = ordered_json::object();
  for (auto [r, c] : s.coins) coins[std::to_string(r)] = c;
  j["coins"] = coins;
  ordered_json adv = ordered_json::object();
  for (auto [r, v] : s.adversary) adv[std::to_string(r)] = v;
  j["adversary"] = adv;
  j["config"] = s.after.to_string();
  return j;
}

inline void write_jsonl(std::ostream& out, const TraceHeader& header, const Trace& trace) {
  out << header_json(header).dump() << '\n';
  for (const auto& s : trace.steps) out << step_json(s).dump() << '\n';
}

struct ParsedStep {
  std::int64_t t = 0;
  std::vector<int> activated;
  std::map<int, bool> coins;
  std::map<int, int> adversary;
  Configuration config;
};

struct ParsedTrace {
  TraceHeader header;
  std::vector<ParsedStep> steps;
};

inline ParsedTrace read_jsonl(std::istream& in) {
  ParsedTrace out;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    if (!have_header) {
      out.header.n = j.at("n").get<int>();
      out.header.k = j.at("k").get<int>();
      out.header.seed = j.at("seed").get<std::uint64_t>();
      out.header.policy = j.at("policy").get<std::string>();
      out.header.initial = Configuration::parse(j.at("initial").get<std::string>());
      have_header = true;
      continue;
    }
    ParsedStep s;
    s.t = j.at("t").get<std::int64_t>();
    s.activated = j.at("activated").get<std::vector<int>>();
    for (auto& [key, v] : j.at("coins").items()) s.coins[std::stoi(key)] = v.get<bool>();
    for (auto& [key, v] : j.at("adversary").items()) s.adversary[std::stoi(key)] = v.get<int>();
    s.config = Configuration::parse(j.at("config").get<std::string>());
    out.steps.push_back(std::move(s));
  }
  if (!have_header) throw RingError("trace has no header line");
  return out;
}

// Re-executes a parsed trace and returns the first step index whose recorded
// configuration disagrees with the replay, or -1 when it replays exactly.
template <DecisionRule P>
std::int64_t replay(const ParsedTrace& trace, const P& protocol) {
  Swarm swarm = Swarm::from(trace.header.initial);
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    const auto rec = resolved_step(swarm, s.activated, s.coins, s.adversary, protocol, s.t);
    if (rec.after != s.config || rec.coins != s.coins || rec.adversary != s.adversary) {
      return static_cast<std::int64_t>(i);
    }
  }
  return -1;
}

}  // namespace ringexp
