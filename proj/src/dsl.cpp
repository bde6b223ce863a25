#include "momcert/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace momcert {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> words;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

bool valid_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

// Removes a '#' comment that is not inside a double-quoted string.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    else if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

class NetworkParser {
 public:
  ReactionNetwork parse(std::string_view text) {
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      ++line_no;
      line_ = line_no;
      handle_line(trim(strip_comment(text.substr(start, end - start))));
      start = end + 1;
    }
    if (!net_) throw ParseError(line_no, "no species declaration");
    if (net_->n_reactions() == 0) throw ParseError(line_no, "network has no reactions");
    return std::move(*net_);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, msg); }

  void handle_line(std::string_view line) {
    if (line.empty()) return;
    const auto space = line.find_first_of(" \t");
    const auto keyword = line.substr(0, space);
    const auto rest = space == std::string_view::npos ? std::string_view{} : trim(line.substr(space));
    if (keyword == "species") declare_species(rest);
    else if (keyword == "reaction") declare_reaction(rest);
    else if (keyword == "init") declare_init(rest);
    else fail("unknown keyword '" + std::string(keyword) + "'");
  }

  void declare_species(std::string_view rest) {
    if (net_) fail("species declared twice");
    auto names = split_words(rest);
    if (names.empty()) fail("species list is empty");
    std::set<std::string> seen;
    for (const auto& n : names) {
      if (!valid_identifier(n)) fail("invalid species name '" + n + "'");
      if (!seen.insert(n).second) fail("duplicate species '" + n + "'");
    }
    net_.emplace(std::move(names));
  }

  void declare_init(std::string_view rest) {
    require_species();
    if (net_->initial_state()) fail("init declared twice");
    IntVector x0;
    for (const auto& w : split_words(rest)) {
      try {
        const auto q = parse_rational(w);
        if (q.get_den() != 1 || q < 0) fail("init counts must be nonnegative integers");
        x0.push_back(to_int64(q));
      } catch (const ParseError&) {
        throw;
      } catch (const std::exception&) {
        fail("malformed init count '" + w + "'");
      }
    }
    if (x0.size() != net_->n_species())
      fail("init has " + std::to_string(x0.size()) + " counts, expected " + std::to_string(net_->n_species()));
    net_->set_initial_state(std::move(x0));
  }

  void declare_reaction(std::string_view rest) {
    require_species();
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) fail("expected 'reaction NAME: LHS -> RHS @ KINETICS'");
    const std::string name(trim(rest.substr(0, colon)));
    if (!valid_identifier(name)) fail("invalid reaction name '" + name + "'");
    if (!reaction_names_.insert(name).second) fail("duplicate reaction '" + name + "'");
    auto body = rest.substr(colon + 1);
    const auto at = body.find('@');
    if (at == std::string_view::npos) fail("missing '@ kinetics'");
    const auto scheme = body.substr(0, at);
    const auto kinetics = trim(body.substr(at + 1));
    const auto arrow = scheme.find("->");
    if (arrow == std::string_view::npos) fail("missing '->'");
    const auto reactants = parse_side(scheme.substr(0, arrow));
    const auto products = parse_side(scheme.substr(arrow + 2));

    const auto kspace = kinetics.find_first_of(" \t");
    const auto kind = kinetics.substr(0, kspace);
    const auto arg = kspace == std::string_view::npos ? std::string_view{} : trim(kinetics.substr(kspace));
    if (kind == "mass_action") {
      Rational rate;
      try {
        rate = parse_rational(arg);
      } catch (const std::exception& e) {
        fail("malformed rate '" + std::string(arg) + "'");
      }
      if (rate <= 0) fail("rate must be positive, got " + to_string(rate));
      net_->add_mass_action(name, reactants, products, rate);
    } else if (kind == "poly") {
      if (arg.size() < 2 || arg.front() != '"' || arg.back() != '"')
        fail("poly kinetics expects a double-quoted polynomial");
      const auto text = arg.substr(1, arg.size() - 2);
      Polynomial p(net_->n_species());
      try {
        p = parse_polynomial(text, net_->n_species(), net_->species_names());
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
      IntVector jump(reactants.size());
      for (std::size_t i = 0; i < jump.size(); ++i) jump[i] = products[i] - reactants[i];
      net_->add_polynomial(name, std::move(jump), std::move(p));
    } else {
      fail("unknown kinetics '" + std::string(kind) + "' (expected mass_action or poly)");
    }
  }

  IntVector parse_side(std::string_view side) {
    IntVector counts(net_->n_species(), 0);
    side = trim(side);
    if (side.empty()) fail("empty reaction side (use '.' for nothing)");
    if (side == ".") return counts;
    std::size_t start = 0;
    for (;;) {
      const auto plus = side.find('+', start);
      auto term = trim(side.substr(start, plus == std::string_view::npos ? side.npos : plus - start));
      if (term.empty()) fail("empty term in reaction side");
      std::int64_t coeff = 1;
      std::size_t k = 0;
      while (k < term.size() && std::isdigit(static_cast<unsigned char>(term[k]))) ++k;
      if (k > 0) {
        coeff = std::stoll(std::string(term.substr(0, k)));
        term = trim(term.substr(k));
        if (!term.empty() && term.front() == '*') term = trim(term.substr(1));
      }
      const auto& names = net_->species_names();
      const auto it = std::find(names.begin(), names.end(), term);
      if (it == names.end()) fail("unknown species '" + std::string(term) + "'");
      counts[static_cast<std::size_t>(it - names.begin())] += coeff;
      if (plus == std::string_view::npos) break;
      start = plus + 1;
    }
    return counts;
  }

  void require_species() const {
    if (!net_) fail("'species' must be declared first");
  }

  std::optional<ReactionNetwork> net_;
  std::set<std::string> reaction_names_;
  std::size_t line_ = 0;
};

}  // namespace

ReactionNetwork parse_network(std::string_view text) { return NetworkParser().parse(text); }

ReactionNetwork load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_network(buf.str());
}

}  // namespace momcert
