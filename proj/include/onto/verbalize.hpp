#pragma once

#include <string>
#include <vector>

#include "onto/concept.hpp"

namespace onto {

// Splits a concept or role name into word segments on underscores,
// lowercase-to-uppercase boundaries, letter/digit boundaries, and
// acronym-to-word boundaries ("UKScientist" -> "UK", "Scientist").
// Hyphens stay inside a segment ("Ready-To-Eat").
std::vector<std::string> split_name(const std::string& name);

// Rendering style for atomic names.
//  Description: every segment lowercased, all-caps acronyms kept verbatim
//    ("RedWine" -> "red wine").
//  Statement: segments keep their original casing; a lone single letter is
//    lowercased ("CheninBlanc" -> "Chenin Blanc", "A" -> "a").
enum class CaseStyle { Description, Statement };

struct VerbalizerOptions {
  CaseStyle style = CaseStyle::Statement;
  // Appendix-style "Contradiction" by default; the lowercase variant is
  // selectable because both spellings occur in the wild.
  bool lowercaseContradiction = false;
};

struct Verbalization {
  std::string bodyText;
  std::string headText;
  std::string statement;  // bodyText + " implies " + headText
};

std::string verbalize_name(const std::string& name, CaseStyle style);

// Standalone concept descriptions default to the lowercase style; rule
// statements default to the casing-preserving style.
std::string verbalize_concept(
    const ConceptPtr& c,
    const VerbalizerOptions& options = {CaseStyle::Description, false});

Verbalization verbalize_rule(
    const Rule& rule,
    const VerbalizerOptions& options = {CaseStyle::Statement, false});

}  // namespace onto
