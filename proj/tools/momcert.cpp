#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "momcert/dsl.hpp"
#include "momcert/report.hpp"

using namespace momcert;

namespace {

enum Exit : int { kOk = 0, kImproper = 1, kParseError = 2, kMissingInit = 3, kBadArguments = 4 };

struct BadArguments : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

IntVector parse_init(const std::string& text, std::size_t n) {
  IntVector x;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const auto v = std::stoll(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument("");
      x.push_back(v);
    } catch (const std::exception&) {
      throw BadArguments("--init entries must be nonnegative integers, got '" + item + "'");
    }
  }
  if (x.size() != n)
    throw BadArguments("--init has " + std::to_string(x.size()) + " entries, network has " + std::to_string(n) +
                       " species");
  return x;
}

std::vector<unsigned> parse_orders(const std::string& text) {
  std::vector<unsigned> r;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      const auto v = std::stoul(item, &used);
      if (used != item.size() || v < 1) throw std::invalid_argument("");
      r.push_back(static_cast<unsigned>(v));
    } catch (const std::exception&) {
      throw BadArguments("--orders entries must be positive integers, got '" + item + "'");
    }
  }
  if (r.empty()) throw BadArguments("--orders is empty");
  return r;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw BadArguments("cannot write '" + path + "'");
  out << content;
}

std::string state_text(const IntVector& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? "," : "") + std::to_string(x[i]);
  return s + ")";
}

// Prints improper reactions; returns true when all are proper.
bool report_properness(const ReactionNetwork& net, std::ostream& err) {
  const auto verdicts = validate_properness(net);
  for (std::size_t j = 0; j < verdicts.size(); ++j) {
    const auto& v = verdicts[j];
    if (v.proper) continue;
    err << "improper reaction '" << net.reaction(j).name << "'";
    if (v.species) err << " (consumes " << net.species_names()[*v.species] << ")";
    if (v.witness) err << ": a = " << net.propensity(j).to_string() << " is nonzero at x=" << state_text(*v.witness);
    err << "\n";
  }
  return all_proper(verdicts);
}

struct Common {
  std::string file;
  std::string init;
  std::int64_t box = 25;
  std::string json_path;
  std::optional<std::uint64_t> seed;
};

AnalyzeOptions analyze_options(const Common& c, const ReactionNetwork& net) {
  AnalyzeOptions o;
  if (!c.init.empty()) o.init = parse_init(c.init, net.n_species());
  if (c.box < 0) throw BadArguments("--box must be nonnegative");
  o.check_box = c.box;
  if (c.seed) {
    o.master_seed = *c.seed;
  } else {
    o.master_seed = (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^ std::random_device{}();
    o.seed_generated = true;
  }
  return o;
}

int run(int argc, char** argv) {
  CLI::App app{"Certified moment analysis of jump Markov reaction networks"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("file", common.file, "network description file")->required();
    sub->add_option("--init", common.init, "initial state a,b,...");
    sub->add_option("--box", common.box, "regularity check box bound B for {0..B}^N");
  };

  auto* validate = app.add_subcommand("validate", "parse and check properness and regularity");
  add_common(validate);

  auto* analyze_cmd = app.add_subcommand("analyze", "boundedness, critical partition and moment certificates");
  add_common(analyze_cmd);
  analyze_cmd->add_option("--json", common.json_path, "write the JSON report here");
  analyze_cmd->add_option("--seed", common.seed, "master seed recorded in the report");

  double t_end = 1.0;
  std::size_t grid_n = 10;
  std::string orders_text = "1";
  long long n_traj = 1000;
  std::uint64_t event_cap = 1'000'000;
  std::string csv_path;
  auto* simulate_cmd = app.add_subcommand("simulate", "ensemble SSA moment estimates");
  add_common(simulate_cmd);
  simulate_cmd->add_option("--t-end", t_end, "final time")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--grid", grid_n, "number of equally spaced grid times in (0, t_end]")
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--orders", orders_text, "moment orders r, e.g. 1,2,3");
  simulate_cmd->add_option("--n-traj", n_traj, "number of trajectories (>= 2)");
  simulate_cmd->add_option("--seed", common.seed, "master seed");
  simulate_cmd->add_option("--event-cap", event_cap, "events per trajectory before censoring")
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--json", common.json_path, "write the JSON report here");
  simulate_cmd->add_option("--csv", csv_path, "write the moment CSV here instead of stdout");

  ExplorationCaps caps;
  bool witness = false;
  auto* access = app.add_subcommand("access", "breadth-first sample of the accessible set");
  add_common(access);
  access->add_option("--max-states", caps.max_states, "state cap");
  access->add_option("--max-coord", caps.max_coord, "coordinate cap");
  access->add_flag("--witness", witness, "print a firing path to every state");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadArguments;
  }

  ReactionNetwork net({"_"});
  try {
    net = load_network(common.file);
  } catch (const ParseError& e) {
    std::cerr << common.file << ": " << e.what() << "\n";
    return kParseError;
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << "\n";
    return kParseError;
  }

  try {
    if (!report_properness(net, std::cerr)) return kImproper;

    if (validate->parsed()) {
      if (common.box < 0) throw BadArguments("--box must be nonnegative");
      std::cout << net.n_species() << " species, " << net.n_reactions() << " reactions, all proper\n";
      const auto reg = check_regularity(net, common.box);
      for (std::size_t j = 0; j < reg.size(); ++j) {
        std::cout << "  " << net.reaction(j).name << ": regularity " << to_string(reg[j].status);
        if (!reg[j].violations.empty()) std::cout << " at " << state_text(reg[j].violations.front());
        std::cout << "\n";
      }
      const auto nonneg = check_nonnegativity(net, common.box);
      for (std::size_t j = 0; j < nonneg.size(); ++j)
        if (!nonneg[j].nonnegative_on_box)
          std::cout << "  " << net.reaction(j).name << ": NEGATIVE propensity at " << state_text(*nonneg[j].witness)
                    << "\n";
      return kOk;
    }

    if (analyze_cmd->parsed()) {
      const auto report = analyze(net, analyze_options(common, net));
      std::cout << render_text(report);
      if (!common.json_path.empty()) write_file(common.json_path, emit_json(report));
      return kOk;
    }

    if (simulate_cmd->parsed()) {
      auto opts = analyze_options(common, net);
      if (!opts.init && !net.initial_state()) {
        std::cerr << "simulate needs an initial state (--init or an init line)\n";
        return kMissingInit;
      }
      if (n_traj < 2) throw BadArguments("--n-traj must be at least 2");
      const IntVector x0 = opts.init ? *opts.init : *net.initial_state();
      EnsembleOptions eo;
      for (std::size_t k = 1; k <= grid_n; ++k) eo.grid.push_back(t_end * static_cast<double>(k) / grid_n);
      eo.grid.back() = t_end;
      eo.orders = parse_orders(orders_text);
      eo.n_traj = static_cast<std::size_t>(n_traj);
      eo.master_seed = opts.master_seed;
      eo.event_cap = event_cap;
      auto report = analyze(net, opts);
      report.simulation = estimate_moments(net, x0, eo);
      const auto csv = report.simulation->to_csv();
      if (csv_path.empty()) std::cout << csv;
      else {
        write_file(csv_path, csv);
        std::cout << render_text(report);
      }
      if (!common.json_path.empty()) write_file(common.json_path, emit_json(report));
      return kOk;
    }

    if (access->parsed()) {
      if (common.init.empty() && !net.initial_state()) {
        std::cerr << "access needs an initial state (--init or an init line)\n";
        return kMissingInit;
      }
      const IntVector x0 = common.init.empty() ? *net.initial_state() : parse_init(common.init, net.n_species());
      const auto sample = explore_accessible(net, x0, caps);
      std::cout << (sample.frontier_exhausted ? "COMPLETE" : "SAMPLE") << ": " << sample.states.size()
                << " states explored from " << state_text(x0);
      if (sample.cap_hit) std::cout << " (cap hit: max_states=" << caps.max_states << ", max_coord=" << caps.max_coord << ")";
      std::cout << "\n";
      const auto reg = check_regularity(net, common.box);
      for (const auto& v : reg)
        if (v.status == RegularityStatus::Violation || v.status == RegularityStatus::Unchecked) {
          std::cout << "warning: regularity not established on the box; paths are exact but completeness is not\n";
          break;
        }
      for (std::size_t k = 0; k < sample.states.size(); ++k) {
        std::cout << state_text(sample.states[k]);
        if (witness) {
          std::cout << " <=";
          const auto path = sample.path_to(k);
          if (path.empty()) std::cout << " (initial)";
          for (auto j : path) std::cout << ' ' << net.reaction(j).name;
        }
        std::cout << "\n";
      }
      return kOk;
    }
  } catch (const BadArguments& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadArguments;
  } catch (const DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadArguments;
  }
  return kBadArguments;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 70;
  }
}
