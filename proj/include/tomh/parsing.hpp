#pragma once

#include <map>
#include <string>
#include <string_view>

#include "tomh/trial_model.hpp"

namespace tomh::parsing {

struct AnswerSet {
  std::map<int, std::string> answers;  // question 1..16 -> nonempty text

  bool operator==(const AnswerSet&) const = default;
};

// Extracts "A<n>: <response>" segments for n = 1..16, tolerant of surrounding
// prose, blank lines and markdown bullets. A response runs to the next marker
// or end of text. Throws MissingAnswer / DuplicateAnswer with the affected
// question numbers.
AnswerSet parse_answers(std::string_view raw);

// Extracts "{A<n>: <x> points}" scores (tolerant variants "A<n>: <x> points"
// and "A<n>: <x>"), requiring all 16 with integer x in {0, 1, 2}.
ScoreSheet parse_scores(std::string_view raw, RoleId scorer_role);

// Total: case-insensitive search for the three canonical referee responses;
// anything ambiguous or unmatched is Noncompliant, never an exception.
RefereeVerdict parse_verdict(std::string_view raw);

// Canonical renderings; reparsing them reproduces the input exactly.
std::string render_answers(const AnswerSet& set);
std::string render_scores(const ScoreSheet& sheet);

}  // namespace tomh::parsing
