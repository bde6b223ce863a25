#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "momcert/network.hpp"

namespace momcert {

/// Line-numbered error from the network description language.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Parses the network language:
///
///   species S1 S2
///   reaction r1: S1 + S2 -> 2 S1 + S2 @ mass_action 1
///   reaction r2: . -> S1 @ poly "x2^2"     # '.' is the empty side
///   init 10 10
///
/// Polynomial propensities may use x1..xN or species names as variables.
ReactionNetwork parse_network(std::string_view text);

/// Reads and parses a file. Throws std::runtime_error if unreadable.
ReactionNetwork load_network(const std::filesystem::path& path);

}  // namespace momcert
