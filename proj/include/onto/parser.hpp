#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "onto/concept.hpp"

namespace onto {

struct ParseError : std::runtime_error {
  ParseError(size_t offset, const std::string& what)
      : std::runtime_error("syntax error at byte " + std::to_string(offset) +
                           ": " + what),
        offset(offset) {}
  size_t offset;
};

// Parses one line of the rule grammar:
//   rule    := concept "SubClassOf" concept
//   concept := term ("and" term)*
//   term    := NAME | NAME "some" term | "(" concept ")" | "Nothing"
// "Nothing" is only legal as the full head. With allowPlaceholders, the
// tokens ?X and ?Y are accepted as terms (template patterns).
Rule parse_rule(std::string_view text, bool allowPlaceholders = false);

// Parses a .dlr stream: one rule per line, '#' starts a comment, blank
// lines ignored. Errors are prefixed "<name>:<line>:".
std::vector<Rule> parse_rule_stream(std::istream& in, const std::string& name);
Ontology load_ontology(const std::string& path);
void save_rules(const std::vector<Rule>& rules, const std::string& path);

}  // namespace onto
