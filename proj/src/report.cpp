#include "momcert/report.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace momcert {

using json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------------------
// Scalar and vector encodings

json rat(const Rational& q) { return to_string(q); }
Rational rat_from(const json& j) { return parse_rational(j.get<std::string>()); }

json rvec(const RationalVector& v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(rat(q));
  return a;
}
RationalVector rvec_from(const json& j) {
  RationalVector v;
  for (const auto& e : j) v.push_back(rat_from(e));
  return v;
}

json ivec(const IntVector& v) { return json(v); }
IntVector ivec_from(const json& j) { return j.get<IntVector>(); }

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}
template <class T>
std::optional<T> opt_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

json num(double d) { return std::isnan(d) ? json(nullptr) : json(d); }
double num_from(const json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

std::string vec_text(const IntVector& v) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
  out << ')';
  return out.str();
}
std::string vec_text(const RationalVector& v) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << to_string(v[i]);
  out << ')';
  return out.str();
}

RegularityStatus regularity_from(const std::string& s) {
  for (auto st : {RegularityStatus::Analytic, RegularityStatus::RegularOnBox, RegularityStatus::Violation,
                  RegularityStatus::Unchecked})
    if (to_string(st) == s) return st;
  throw std::invalid_argument("unknown regularity status '" + s + "'");
}

MomentTheorem theorem_from(const std::string& s) {
  for (auto t : {MomentTheorem::T1, MomentTheorem::T2, MomentTheorem::T3})
    if (to_string(t) == s) return t;
  throw std::invalid_argument("unknown theorem tag '" + s + "'");
}

// ---------------------------------------------------------------------------
// Certificates and failures

json ray_json(const std::optional<DualRay>& ray) {
  if (!ray) return nullptr;
  return json{{"ineq_weights", rvec(ray->ineq_weights)}, {"eq_weights", rvec(ray->eq_weights)}};
}
std::optional<DualRay> ray_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return DualRay{rvec_from(j.at("ineq_weights")), rvec_from(j.at("eq_weights"))};
}

json failure_json(const std::string& verdict, const CheckFailure& f) {
  return json{{"verdict", verdict},
              {"reason", f.reason},
              {"ray", ray_json(f.ray)},
              {"offending_reactions", f.offending_reactions}};
}
CheckFailure failure_from(const json& j) {
  return CheckFailure{j.at("reason").get<std::string>(), ray_from(j.at("ray")),
                      j.at("offending_reactions").get<std::vector<std::size_t>>()};
}

json moment_json(const MomentOutcome& o, const std::string& verdict) {
  if (const auto* f = std::get_if<CheckFailure>(&o)) return failure_json(verdict, *f);
  const auto& c = std::get<MomentCertificate>(o);
  if (!c.verified) throw std::logic_error("refusing to emit an unverified certificate");
  json cert{{"theorem", to_string(c.theorem)},
            {"gamma", rvec(c.gamma)},
            {"C", rat(c.C)},
            {"alpha_exp", nullptr},
            {"r_min", nullptr},
            {"verified", c.verified},
            {"spot_checks", c.spot_checks},
            {"norm_weights", ivec(c.norm_weights)},
            {"vacuous", c.vacuous},
            {"neutral_reactions", c.neutral_reactions}};
  return json{{"verdict", verdict}, {"certificate", std::move(cert)}};
}
MomentOutcome moment_from(const json& j) {
  if (!j.contains("certificate")) return failure_from(j);
  const auto& c = j.at("certificate");
  MomentCertificate cert;
  cert.theorem = theorem_from(c.at("theorem").get<std::string>());
  cert.gamma = rvec_from(c.at("gamma"));
  cert.C = rat_from(c.at("C"));
  cert.verified = c.at("verified").get<bool>();
  cert.spot_checks = c.at("spot_checks").get<std::size_t>();
  cert.norm_weights = ivec_from(c.at("norm_weights"));
  cert.vacuous = c.at("vacuous").get<bool>();
  cert.neutral_reactions = c.at("neutral_reactions").get<std::vector<std::size_t>>();
  return cert;
}

json blowup_json(const std::optional<BlowupOutcome>& o) {
  const auto verdict = t3_verdict(o);
  if (!o) return json{{"verdict", verdict}, {"reason", "no initial state given"}};
  if (const auto* f = std::get_if<CheckFailure>(&*o)) return failure_json(verdict, *f);
  const auto& c = std::get<BlowupCertificate>(*o);
  if (!c.verified) throw std::logic_error("refusing to emit an unverified certificate");
  json cert{{"theorem", "T3"},
            {"gamma", rvec(c.gamma)},
            {"C", rat(c.C)},
            {"alpha_exp", c.alpha_exp},
            {"r_min", c.r_min},
            {"verified", c.verified},
            {"spot_checks", c.spot_checks},
            {"notes", c.notes}};
  return json{{"verdict", verdict}, {"certificate", std::move(cert)}};
}
std::optional<BlowupOutcome> blowup_from(const json& j) {
  if (j.at("verdict") == "SKIPPED") return std::nullopt;
  if (!j.contains("certificate")) return BlowupOutcome{failure_from(j)};
  const auto& c = j.at("certificate");
  BlowupCertificate cert;
  cert.gamma = rvec_from(c.at("gamma"));
  cert.C = rat_from(c.at("C"));
  cert.alpha_exp = c.at("alpha_exp").get<std::uint32_t>();
  cert.r_min = c.at("r_min").get<std::uint32_t>();
  cert.verified = c.at("verified").get<bool>();
  cert.spot_checks = c.at("spot_checks").get<std::size_t>();
  cert.notes = c.at("notes").get<std::string>();
  return BlowupOutcome{cert};
}

json species_json(const SpeciesBoundedness& s, const std::string& name, std::size_t index) {
  json j{{"species", name}, {"index", index}, {"verdict", species_verdict(s)}};
  if (const auto* c = std::get_if<BoundednessCertificate>(&s)) {
    j["alpha"] = ivec(c->alpha);
    j["covered"] = c->covered;
  } else {
    const auto& w = std::get<UnboundednessWitness>(s);
    j["w"] = ivec(w.w);
    j["growth"] = ivec(w.growth);
  }
  return j;
}
SpeciesBoundedness species_from(const json& j) {
  if (j.at("verdict") == "BOUNDED")
    return BoundednessCertificate{ivec_from(j.at("alpha")), j.at("covered").get<std::vector<std::size_t>>()};
  return UnboundednessWitness{ivec_from(j.at("w")), j.at("index").get<std::size_t>(), ivec_from(j.at("growth"))};
}

json simulation_json(const EnsembleStats& s) {
  json rows = json::array();
  for (const auto& r : s.rows)
    rows.push_back(json{{"t", r.t},
                        {"r", r.r},
                        {"mean", num(r.mean)},
                        {"stderr", num(r.std_error)},
                        {"n_effective", r.n_effective},
                        {"censored_frac", r.censored_frac},
                        {"biased_low", r.censored_frac > 0}});
  return json{{"norm", s.norm},
              {"n_traj", s.n_traj},
              {"master_seed", s.master_seed},
              {"event_cap", s.event_cap},
              {"n_absorbed", s.n_absorbed},
              {"n_time_reached", s.n_time_reached},
              {"n_censored", s.n_censored},
              {"grid", s.grid},
              {"orders", s.orders},
              {"rows", std::move(rows)}};
}
EnsembleStats simulation_from(const json& j) {
  EnsembleStats s;
  s.norm = j.at("norm").get<std::string>();
  s.n_traj = j.at("n_traj").get<std::size_t>();
  s.master_seed = j.at("master_seed").get<std::uint64_t>();
  s.event_cap = j.at("event_cap").get<std::uint64_t>();
  s.n_absorbed = j.at("n_absorbed").get<std::size_t>();
  s.n_time_reached = j.at("n_time_reached").get<std::size_t>();
  s.n_censored = j.at("n_censored").get<std::size_t>();
  s.grid = j.at("grid").get<std::vector<double>>();
  s.orders = j.at("orders").get<std::vector<unsigned>>();
  for (const auto& r : j.at("rows"))
    s.rows.push_back(MomentEstimate{r.at("t").get<double>(), r.at("r").get<unsigned>(), num_from(r.at("mean")),
                                    num_from(r.at("stderr")), r.at("n_effective").get<std::size_t>(),
                                    r.at("censored_frac").get<double>()});
  return s;
}

std::string names_of(const std::vector<std::size_t>& idx, auto name_of) {
  if (idx.empty()) return "{}";
  std::string out = "{";
  for (std::size_t k = 0; k < idx.size(); ++k) out += (k ? "," : "") + name_of(idx[k]);
  return out + "}";
}

}  // namespace

// ---------------------------------------------------------------------------

std::string t1_verdict(const MomentOutcome& o) {
  return std::holds_alternative<MomentCertificate>(o) ? "FEASIBLE" : "INFEASIBLE";
}
std::string t2_verdict(const MomentOutcome& o) {
  return std::holds_alternative<MomentCertificate>(o) ? "FEASIBLE" : "INAPPLICABLE";
}
std::string t3_verdict(const std::optional<BlowupOutcome>& o) {
  if (!o) return "SKIPPED";
  return std::holds_alternative<BlowupCertificate>(*o) ? "FEASIBLE" : "INAPPLICABLE";
}
std::string species_verdict(const SpeciesBoundedness& s) { return is_bounded(s) ? "BOUNDED" : "UNBOUNDED"; }

AnalysisReport analyze(const ReactionNetwork& net, const AnalyzeOptions& options) {
  AnalysisReport r;
  r.master_seed = options.master_seed;
  r.seed_generated = options.seed_generated;
  r.network.species = net.species_names();
  for (const auto& rx : net.reactions()) {
    ReactionSummary s{rx.name, rx.jump, rx.propensity.to_string(), "poly", rx.propensity.degree()};
    if (rx.mass_action) s.kinetics = "mass_action " + to_string(rx.mass_action->rate);
    r.network.reactions.push_back(std::move(s));
  }
  r.network.init = options.init ? options.init : net.initial_state();
  if (r.network.init && r.network.init->size() != net.n_species())
    throw DimensionMismatch("initial state has wrong length");

  r.properness = validate_properness(net);
  if (!all_proper(r.properness)) throw std::invalid_argument("network has improper propensities");
  r.check_box = options.check_box;
  r.regularity = check_regularity(net, options.check_box);
  r.nonnegativity = check_nonnegativity(net, options.check_box);
  for (const auto& v : r.regularity)
    if (v.status != RegularityStatus::Analytic) r.assumptions.regularity_assumed = true;
  for (const auto& rx : net.reactions())
    if (!rx.mass_action) r.assumptions.nonnegativity_checked_on_box = true;

  const auto partition = classify(net);
  r.species = partition.species_outcomes;
  r.critical_species = partition.critical_species;
  r.critical_reactions = partition.critical_reactions;
  r.sign_mixed = partition.sign_mixed;
  r.t1 = check_t1(net, partition);
  r.t2 = check_t2(net);
  if (r.network.init) r.t3 = check_t3(net, *r.network.init);
  return r;
}

json to_json(const AnalysisReport& r) {
  json reactions = json::array();
  for (const auto& s : r.network.reactions)
    reactions.push_back(json{{"name", s.name},
                             {"jump", ivec(s.jump)},
                             {"propensity", s.propensity},
                             {"kinetics", s.kinetics},
                             {"degree", s.degree}});
  const auto rname = [&](std::size_t j) { return r.network.reactions.at(j).name; };

  json proper = json::array();
  for (std::size_t j = 0; j < r.properness.size(); ++j) {
    const auto& v = r.properness[j];
    proper.push_back(
        json{{"reaction", rname(j)}, {"proper", v.proper}, {"species", opt(v.species)}, {"witness", opt(v.witness)}});
  }
  json regular = json::array();
  for (std::size_t j = 0; j < r.regularity.size(); ++j)
    regular.push_back(json{{"reaction", rname(j)},
                           {"status", std::string(to_string(r.regularity[j].status))},
                           {"violations", r.regularity[j].violations}});
  json nonneg = json::array();
  for (std::size_t j = 0; j < r.nonnegativity.size(); ++j) {
    const auto& v = r.nonnegativity[j];
    nonneg.push_back(json{{"reaction", rname(j)},
                          {"nonnegative_on_box", v.nonnegative_on_box},
                          {"checked", v.checked},
                          {"witness", opt(v.witness)}});
  }
  json species = json::array();
  for (std::size_t i = 0; i < r.species.size(); ++i)
    species.push_back(species_json(r.species[i], r.network.species.at(i), i));

  json out;
  out["tool_version"] = r.tool_version;
  out["master_seed"] = r.master_seed;
  out["seed_generated"] = r.seed_generated;
  out["network"] = json{{"species", r.network.species}, {"reactions", std::move(reactions)}, {"init", opt(r.network.init)}};
  out["check_box"] = r.check_box;
  out["properness"] = std::move(proper);
  out["regularity"] = std::move(regular);
  out["nonnegativity"] = std::move(nonneg);
  out["species"] = std::move(species);
  out["partition"] = json{{"critical_species", r.critical_species},
                          {"critical_reactions", r.critical_reactions},
                          {"sign_mixed", r.sign_mixed}};
  out["t1"] = moment_json(r.t1, t1_verdict(r.t1));
  out["t2"] = moment_json(r.t2, t2_verdict(r.t2));
  out["t3"] = blowup_json(r.t3);
  out["simulation"] = r.simulation ? simulation_json(*r.simulation) : json(nullptr);
  out["assumptions"] = json{{"regularity_assumed", r.assumptions.regularity_assumed},
                            {"nonnegativity_checked_on_box", r.assumptions.nonnegativity_checked_on_box}};
  return out;
}

AnalysisReport report_from_json(const json& j) {
  AnalysisReport r;
  r.tool_version = j.at("tool_version").get<std::string>();
  r.master_seed = j.at("master_seed").get<std::uint64_t>();
  r.seed_generated = j.at("seed_generated").get<bool>();
  const auto& net = j.at("network");
  r.network.species = net.at("species").get<std::vector<std::string>>();
  for (const auto& s : net.at("reactions"))
    r.network.reactions.push_back(ReactionSummary{s.at("name").get<std::string>(), ivec_from(s.at("jump")),
                                                  s.at("propensity").get<std::string>(),
                                                  s.at("kinetics").get<std::string>(),
                                                  s.at("degree").get<std::uint32_t>()});
  r.network.init = opt_from<IntVector>(net.at("init"));
  r.check_box = j.at("check_box").get<std::int64_t>();
  for (const auto& v : j.at("properness"))
    r.properness.push_back(ProperVerdict{v.at("proper").get<bool>(), opt_from<std::size_t>(v.at("species")),
                                         opt_from<IntVector>(v.at("witness"))});
  for (const auto& v : j.at("regularity"))
    r.regularity.push_back(RegularityVerdict{regularity_from(v.at("status").get<std::string>()),
                                             v.at("violations").get<std::vector<IntVector>>()});
  for (const auto& v : j.at("nonnegativity"))
    r.nonnegativity.push_back(NonnegativityVerdict{v.at("nonnegative_on_box").get<bool>(),
                                                   v.at("checked").get<bool>(), opt_from<IntVector>(v.at("witness"))});
  for (const auto& s : j.at("species")) r.species.push_back(species_from(s));
  const auto& p = j.at("partition");
  r.critical_species = p.at("critical_species").get<std::vector<std::size_t>>();
  r.critical_reactions = p.at("critical_reactions").get<std::vector<std::size_t>>();
  r.sign_mixed = p.at("sign_mixed").get<bool>();
  r.t1 = moment_from(j.at("t1"));
  r.t2 = moment_from(j.at("t2"));
  r.t3 = blowup_from(j.at("t3"));
  if (!j.at("simulation").is_null()) r.simulation = simulation_from(j.at("simulation"));
  const auto& a = j.at("assumptions");
  r.assumptions.regularity_assumed = a.at("regularity_assumed").get<bool>();
  r.assumptions.nonnegativity_checked_on_box = a.at("nonnegativity_checked_on_box").get<bool>();
  return r;
}

std::string emit_json(const AnalysisReport& report) { return to_json(report).dump(2) + "\n"; }

AnalysisReport parse_report(const std::string& text) {
  try {
    return report_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Text

std::string render_text(const AnalysisReport& r) {
  std::ostringstream out;
  const auto& species = r.network.species;
  const auto sname = [&](std::size_t i) { return species.at(i); };
  const auto rname = [&](std::size_t j) { return r.network.reactions.at(j).name; };

  out << r.tool_version << "\n";
  out << "network: " << species.size() << " species, " << r.network.reactions.size() << " reactions, "
      << (all_proper(r.properness) ? "all proper" : "IMPROPER") << "\n";
  out << "species:";
  for (const auto& s : species) out << ' ' << s;
  out << "\n";
  for (const auto& s : r.network.reactions)
    out << "  " << s.name << ": jump " << vec_text(s.jump) << ", a = " << s.propensity << " [" << s.kinetics
        << ", degree " << s.degree << "]\n";
  out << "init: " << (r.network.init ? vec_text(*r.network.init) : std::string("none")) << "\n";

  out << "\nregularity on {0.." << r.check_box << "}^N:\n";
  for (std::size_t j = 0; j < r.regularity.size(); ++j) {
    out << "  " << rname(j) << ": " << to_string(r.regularity[j].status);
    if (!r.regularity[j].violations.empty()) out << " at " << vec_text(r.regularity[j].violations.front());
    out << "\n";
  }
  for (std::size_t j = 0; j < r.nonnegativity.size(); ++j)
    if (!r.nonnegativity[j].nonnegative_on_box)
      out << "  " << rname(j) << ": NEGATIVE propensity at " << vec_text(*r.nonnegativity[j].witness) << "\n";

  out << "\nstoichiometric boundedness:\n";
  for (std::size_t i = 0; i < r.species.size(); ++i) {
    out << "  " << sname(i) << ": " << species_verdict(r.species[i]);
    if (const auto* c = std::get_if<BoundednessCertificate>(&r.species[i]))
      out << " alpha=" << vec_text(c->alpha);
    else {
      const auto& w = std::get<UnboundednessWitness>(r.species[i]);
      out << " witness w=" << vec_text(w.w) << " nu*w=" << vec_text(w.growth);
    }
    out << "\n";
  }
  out << "critical species: " << names_of(r.critical_species, sname) << "\n";
  out << "critical reactions: " << names_of(r.critical_reactions, rname) << "\n";
  if (r.sign_mixed) out << "note: some propensity has negative coefficients; the degree test is conservative\n";

  out << "\nT1: " << t1_verdict(r.t1);
  if (const auto* c = std::get_if<MomentCertificate>(&r.t1)) {
    if (c->vacuous) out << " (vacuous: no critical reactions)";
    out << " gamma=" << vec_text(c->gamma) << " norm weights=" << vec_text(c->norm_weights);
  } else {
    out << " (" << std::get<CheckFailure>(r.t1).reason << ")";
  }
  out << "\nT2: " << t2_verdict(r.t2);
  if (const auto* c = std::get_if<MomentCertificate>(&r.t2)) {
    out << " gamma=" << vec_text(c->gamma) << " C=" << to_string(c->C);
    if (!c->neutral_reactions.empty()) out << " neutral=" << names_of(c->neutral_reactions, rname);
  } else {
    out << " (" << std::get<CheckFailure>(r.t2).reason << ")";
  }
  out << "\nT3: " << t3_verdict(r.t3);
  if (!r.t3) {
    out << " (no initial state given)";
  } else if (const auto* c = std::get_if<BlowupCertificate>(&*r.t3)) {
    out << " gamma=" << vec_text(c->gamma) << " alpha_exp=" << c->alpha_exp << " C=" << to_string(c->C)
        << " r_min=" << c->r_min;
  } else {
    out << " (" << std::get<CheckFailure>(*r.t3).reason << ")";
  }
  out << "\n";
  if (std::holds_alternative<MomentCertificate>(r.t1) || std::holds_alternative<MomentCertificate>(r.t2))
    out << "conclusion: every moment E||X(t)||^r is finite with an exponential-in-time bound\n";
  if (r.t3 && std::holds_alternative<BlowupCertificate>(*r.t3))
    out << "conclusion: E||X(t)||^r = infinity at some finite t for every r >= "
        << std::get<BlowupCertificate>(*r.t3).r_min << "\n";

  if (r.simulation) {
    const auto& s = *r.simulation;
    out << "\nsimulation: " << s.n_traj << " trajectories, " << s.norm << ", event cap " << s.event_cap << "\n";
    out << "  absorbed " << s.n_absorbed << ", reached t_end " << s.n_time_reached << ", censored " << s.n_censored
        << "\n";
    std::ostringstream rows;
    rows.precision(6);
    for (const auto& e : s.rows) {
      rows << "  t=" << e.t << " r=" << e.r << " mean=" << e.mean << " se=" << e.std_error
           << " censored=" << e.censored_frac;
      if (e.censored_frac > 0) rows << " (biased low)";
      rows << "\n";
    }
    out << rows.str();
  }

  out << "\nassumptions: regularity " << (r.assumptions.regularity_assumed ? "assumed" : "proved analytically")
      << ", nonnegativity " << (r.assumptions.nonnegativity_checked_on_box ? "checked on box only" : "analytic")
      << "\n";
  out << "master seed: " << r.master_seed << (r.seed_generated ? " (generated)" : "") << "\n";
  return out.str();
}

}  // namespace momcert
