#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rcsn/instance.hpp"

namespace rcsn {

/// Text format, one directive per line:
///   RCSN 1
///   node <id> [<x> <y>]
///   root <id>
///   terminal <id>
///   arc <id> <tail> <head> <capacity> <cost>
/// '#' starts a comment. Costs are written with six fractional digits.
void write_instance(const Instance &inst, std::ostream &out);
std::string instance_to_string(const Instance &inst);

/// Parses and validates; errors carry the offending line number.
Instance read_instance(std::istream &in);
Instance read_instance_file(const std::string &path);
void write_instance_file(const Instance &inst, const std::string &path);

struct SolutionFlowEntry {
  std::string scenario_tag;
  ArcId arc = -1;
  long long flow = 0;
};

struct SolutionFile {
  double objective = 0.0;
  std::vector<ArcId> selected;
  std::vector<ArcId> protected_arcs;
  std::vector<SolutionFlowEntry> flows;
};

/// Companion format:
///   solution 1
///   objective <decimal>
///   select <arc-id>
///   protect <arc-id>
///   flow <scenario-tag> <arc-id> <units>
void write_solution(const SolutionFile &sol, std::ostream &out);
SolutionFile read_solution(std::istream &in);
SolutionFile read_solution_file(const std::string &path);
void write_solution_file(const SolutionFile &sol, const std::string &path);

} // namespace rcsn
