#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "momcert/boundedness.hpp"
#include "momcert/moments.hpp"
#include "momcert/network.hpp"
#include "momcert/simulation.hpp"

namespace momcert {

inline constexpr const char* kToolVersion = "momcert 0.1.0";

struct ReactionSummary {
  std::string name;
  IntVector jump;
  std::string propensity;  // canonical text form
  std::string kinetics;    // "mass_action <rate>" or "poly"
  std::uint32_t degree = 0;
  bool operator==(const ReactionSummary&) const = default;
};

struct NetworkSummary {
  std::vector<std::string> species;
  std::vector<ReactionSummary> reactions;
  std::optional<IntVector> init;
  bool operator==(const NetworkSummary&) const = default;
};

struct AssumptionFlags {
  // Some reaction is not regular analytically nor on the checked box, so any
  // accessibility statement relies on regularity as an assumption.
  bool regularity_assumed = false;
  // Some raw-polynomial propensity was checked for nonnegativity only on the box.
  bool nonnegativity_checked_on_box = false;
  bool operator==(const AssumptionFlags&) const = default;
};

struct AnalysisReport {
  std::string tool_version = kToolVersion;
  std::uint64_t master_seed = 0;
  bool seed_generated = false;  // true when no --seed was given

  NetworkSummary network;
  std::vector<ProperVerdict> properness;
  std::int64_t check_box = 0;
  std::vector<RegularityVerdict> regularity;
  std::vector<NonnegativityVerdict> nonnegativity;

  std::vector<SpeciesBoundedness> species;
  std::vector<std::size_t> critical_species;
  std::vector<std::size_t> critical_reactions;
  bool sign_mixed = false;

  MomentOutcome t1;
  MomentOutcome t2;
  std::optional<BlowupOutcome> t3;  // nullopt: skipped for lack of an initial state

  std::optional<EnsembleStats> simulation;
  AssumptionFlags assumptions;

  bool operator==(const AnalysisReport&) const = default;
};

struct AnalyzeOptions {
  std::optional<IntVector> init;  // overrides the network's init line
  std::int64_t check_box = 25;    // regularity and nonnegativity box {0..B}^N
  std::uint64_t master_seed = 0;
  bool seed_generated = false;
};

/// Runs properness, regularity, boundedness, classification and T1/T2/T3.
/// Throws std::invalid_argument if the network is improper.
AnalysisReport analyze(const ReactionNetwork& net, const AnalyzeOptions& options = {});

/// One-word verdicts, shared by the text and JSON renderings.
std::string t1_verdict(const MomentOutcome& o);
std::string t2_verdict(const MomentOutcome& o);
std::string t3_verdict(const std::optional<BlowupOutcome>& o);
std::string species_verdict(const SpeciesBoundedness& s);

nlohmann::ordered_json to_json(const AnalysisReport& report);
AnalysisReport report_from_json(const nlohmann::ordered_json& j);
/// Pretty-printed JSON with a trailing newline.
std::string emit_json(const AnalysisReport& report);
/// Throws std::invalid_argument on malformed input.
AnalysisReport parse_report(const std::string& text);

std::string render_text(const AnalysisReport& report);

}  // namespace momcert
