#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ringexp/ringexp.hpp"

namespace {

using ringexp::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Writes to --output when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw UsageError("cannot open output file " + path);
    }
  }
  std::ostream& out() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void require_protocol_domain(int n, int k) {
  if (k != ringexp::kProtocolRobots) {
    throw UsageError("--k must be 4 for the four-robot protocol (got " + std::to_string(k) + ")");
  }
  if (n < ringexp::kMinProtocolNodes) {
    throw UsageError("--n must be greater than 8 for the four-robot protocol (got " + std::to_string(n) + ")");
  }
}

ringexp::SchedulerPolicy policy_from(const std::string& name) {
  try {
    return ringexp::SchedulerPolicy::parse(name);
  } catch (const ringexp::RingError& e) {
    throw UsageError(e.what());
  }
}

struct Common {
  int n = 0;
  int k = 4;
  std::uint64_t seed = 0;
  std::string policy;
  std::int64_t max_steps = 100'000;
  std::string output;
  int threads = ringexp::default_threads();
};

int simulate(const Common& o, const std::string& initial_arg) {
  Common opt = o;
  ringexp::Rng rng(opt.seed);
  ringexp::Configuration initial;
  if (initial_arg == "random") {
    require_protocol_domain(opt.n, opt.k);
    initial = ringexp::sample_towerless(opt.n, opt.k, rng);
  } else {
    try {
      initial = ringexp::Configuration::parse(initial_arg);
    } catch (const ringexp::RingError& e) {
      throw UsageError(std::string("--initial: ") + e.what());
    }
    if (opt.n != 0 && opt.n != initial.size()) {
      throw UsageError("--n (" + std::to_string(opt.n) + ") does not match the length of --initial (" +
                       std::to_string(initial.size()) + ")");
    }
    opt.n = initial.size();
    if (initial.robots() != opt.k) {
      throw UsageError("--initial holds " + std::to_string(initial.robots()) + " robots but --k is " +
                       std::to_string(opt.k));
    }
    require_protocol_domain(opt.n, opt.k);
  }
  const auto policy = policy_from(opt.policy);
  const auto trace = ringexp::resume(initial, policy, ringexp::FourRobotProtocol{}, rng,
                                     ringexp::RandomAdversary(ringexp::derive_seed(opt.seed, 1)),
                                     {opt.max_steps, true});
  Sink sink(opt.output);
  ringexp::write_jsonl(sink.out(), {opt.n, opt.k, opt.seed, policy.name(), initial}, trace);
  std::cerr << "status=" << ringexp::to_string(trace.status) << " steps=" << trace.step_count
            << " final=" << trace.final_configuration.to_string() << "\n";
  return 0;
}

int campaign(const Common& opt, int trials, const std::string& mutation) {
  require_protocol_domain(opt.n, opt.k);
  if (trials < 1) throw UsageError("--trials must be at least 1");
  ringexp::CampaignOptions copt{opt.max_steps, opt.threads, ringexp::Mutation::None};
  if (mutation == "phase1-short-holes") copt.mutation = ringexp::Mutation::Phase1IntoShortHoles;
  else if (mutation == "phase3-reversed") copt.mutation = ringexp::Mutation::Phase3Reversed;
  else if (mutation != "none") throw UsageError("unknown --mutation " + mutation);
  const auto stats = ringexp::campaign(opt.n, trials, policy_from(opt.policy), opt.seed, copt);
  Sink sink(opt.output);
  sink.out() << ringexp::to_json(stats).dump(2) << "\n";
  return stats.all_passed() ? 0 : 1;
}

int verify(const Common& opt, int traces, bool allow_large) {
  require_protocol_domain(opt.n, opt.k);
  if (opt.n > ringexp::ExhaustiveOptions::kDefaultMaxNodes && !allow_large) {
    throw UsageError("--n above 12 needs --allow-large for exhaustive checks");
  }
  ringexp::ExhaustiveOptions eopt{allow_large, opt.threads};
  std::vector<ringexp::CheckReport> reports;
  reports.push_back(ringexp::check_no_tower_one_step(opt.n, ringexp::FourRobotProtocol{}, eopt));
  reports.push_back(ringexp::check_four_segment_step(opt.n, ringexp::FourRobotProtocol{}, eopt));
  reports.push_back(ringexp::check_phase3_monotone(opt.n, ringexp::FourRobotProtocol{}, eopt));
  reports.push_back(ringexp::check_mrp_batch(opt.n, traces, opt.seed, opt.max_steps));
  ordered_json j;
  j["n"] = opt.n;
  j["k"] = opt.k;
  j["seed"] = opt.seed;
  bool ok = true;
  ordered_json arr = ordered_json::array();
  for (const auto& r : reports) {
    arr.push_back(ringexp::to_json(r));
    ok &= r.passed();
  }
  j["reports"] = arr;
  j["passed"] = ok;
  Sink sink(opt.output);
  sink.out() << j.dump(2) << "\n";
  return ok ? 0 : 1;
}

int count(const Common& opt, int n_max, const std::string& format) {
  if (opt.k < 2) throw UsageError("--k must be at least 2 for a tower of fewer than k robots");
  const int lo = opt.n != 0 ? opt.n : std::max(3, opt.k);
  const int hi = n_max != 0 ? n_max : lo;
  if (lo < 3) throw UsageError("--n must be at least 3");
  if (lo < opt.k) throw UsageError("--n must be at least --k so a towerless configuration exists");
  if (hi < lo) throw UsageError("--n-max must be at least --n");
  if (format != "json" && format != "text") throw UsageError("--format must be json or text");
  ordered_json rows = ordered_json::array();
  std::ostringstream text;
  for (int n = lo; n <= hi; ++n) {
    const int classes = ringexp::count_tower_classes(n, opt.k);
    rows.push_back({{"n", n}, {"k", opt.k}, {"classes", classes}, {"n_minus_k_plus_1", n - opt.k + 1}});
    text << (lo == hi ? "" : std::to_string(n) + " ") << classes << "\n";
  }
  Sink sink(opt.output);
  if (format == "json") {
    sink.out() << rows.dump(2) << "\n";
  } else {
    sink.out() << text.str();
  }
  return 0;
}

int impossible(const Common& opt, const std::string& mode) {
  namespace im = ringexp::impossibility;
  if (opt.n != 0 && opt.n != im::kRingNodes) throw UsageError("impossible is fixed to n = 4");
  if (opt.k != 4 && opt.k != im::kRingRobots) throw UsageError("impossible is fixed to k = 3");
  std::vector<im::Mode> modes;
  if (mode == "distributed" || mode == "both") modes.push_back(im::Mode::Distributed);
  if (mode == "sequential" || mode == "both") modes.push_back(im::Mode::Sequential);
  if (modes.empty()) throw UsageError("--mode must be distributed, sequential or both");
  const im::Refuter refuter;
  bool ok = true;
  ordered_json out = ordered_json::array();
  for (auto m : modes) {
    const auto summary = im::refute_all(refuter, m, opt.threads);
    ok &= m == im::Mode::Distributed ? summary.unrefuted == 0 : summary.unrefuted >= 1;
    out.push_back(im::to_json(refuter, summary));
  }
  Sink sink(opt.output);
  sink.out() << (out.size() == 1 ? out[0] : out).dump(2) << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator and checkers for probabilistic ring exploration by oblivious robots"};
  app.require_subcommand(1);

  Common opt;
  auto add_common = [&](CLI::App* sub, bool with_policy) {
    sub->add_option("--n", opt.n, "ring size");
    sub->add_option("--k", opt.k, "number of robots")->capture_default_str();
    sub->add_option("--seed", opt.seed, "random seed")->capture_default_str();
    sub->add_option("--max-steps", opt.max_steps, "step limit per run")->capture_default_str();
    sub->add_option("--output", opt.output, "write to this file instead of stdout");
    sub->add_option("--threads", opt.threads, "worker threads (default RING_EXPLORER_THREADS or all cores)");
    if (with_policy) {
      sub->add_option("--policy", opt.policy, "round-robin, sequential-random or random-subset")->capture_default_str();
    }
  };

  std::string initial = "random";
  auto* sim = app.add_subcommand("simulate", "run one computation and print a JSONL trace");
  add_common(sim, true);
  sim->add_option("--initial", initial, "multiplicity string such as 1,0,2,1,0,0,0,0,0, or random")->capture_default_str();
  std::string format = "json";
  sim->add_option("--format", format, "jsonl only")->check(CLI::IsMember({"json", "jsonl"}));

  int trials = 500;
  std::string mutation = "none";
  auto* camp = app.add_subcommand("campaign", "run seeded trials and print aggregate statistics");
  add_common(camp, true);
  camp->add_option("--trials", trials, "number of trials")->capture_default_str();
  camp->add_option("--mutation", mutation, "none, phase1-short-holes or phase3-reversed")->capture_default_str();

  int traces = 100;
  bool allow_large = false;
  auto* ver = app.add_subcommand("verify", "run the exhaustive lemma checks and the MRP batch");
  add_common(ver, false);
  ver->add_option("--traces", traces, "sequential traces for the MRP bounds")->capture_default_str();
  ver->add_flag("--allow-large", allow_large, "permit exhaustive checks above n = 12");

  int n_max = 0;
  auto* cnt = app.add_subcommand("count", "count classes of configurations with a tower of fewer than k robots");
  add_common(cnt, false);
  cnt->add_option("--n-max", n_max, "count every ring size from --n up to this one");
  cnt->add_option("--format", format, "json or text")->capture_default_str();

  std::string mode = "both";
  auto* imp = app.add_subcommand("impossible", "refute every support-level protocol for 3 robots on 4 nodes");
  add_common(imp, false);
  imp->add_option("--mode", mode, "distributed, sequential or both")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      if (opt.policy.empty()) opt.policy = "round-robin";
      return simulate(opt, initial);
    }
    if (*camp) {
      if (opt.policy.empty()) opt.policy = "random-subset";
      return campaign(opt, trials, mutation);
    }
    if (*ver) return verify(opt, traces, allow_large);
    if (*cnt) return count(opt, n_max, format);
    if (*imp) return impossible(opt, mode);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
