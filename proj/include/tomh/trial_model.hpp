#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace tomh {

using Json = nlohmann::json;

// One of the nine instance roles in a trial.
//   1 advisor (generic)        2 advisor (clone-aware)   3 referee
//   4 taker (unaided)          5 taker (instructions 1)  6 taker (instructions 2)
//   7/8/9 scorers of 4/5/6
class RoleId {
 public:
  static constexpr int kCount = 9;

  explicit RoleId(int ordinal);

  int ordinal() const { return ordinal_; }

  bool is_advisor() const { return ordinal_ == 1 || ordinal_ == 2; }
  bool is_referee() const { return ordinal_ == 3; }
  bool is_taker() const { return ordinal_ >= 4 && ordinal_ <= 6; }
  bool is_scorer() const { return ordinal_ >= 7 && ordinal_ <= 9; }

  // Scorer 7 grades taker 4, 8 grades 5, 9 grades 6.
  RoleId scored_taker() const;

  auto operator<=>(const RoleId&) const = default;

 private:
  int ordinal_;
};

struct RoleSpec {
  RoleId role;
  std::string prompt_template_id;
  double temperature = 1.0;
  std::string model_name;

  bool operator==(const RoleSpec&) const = default;
};

// Scorers run deterministically, everything else at the sampling default.
double default_temperature(RoleId role);

struct Transcript {
  RoleId role;
  std::string request_text;
  std::string response_text;  // stored raw, never normalized
  std::int64_t started_at_ms = 0;
  std::int64_t ended_at_ms = 0;
  std::string backend_id;

  bool operator==(const Transcript&) const = default;
};

struct InstructionArtifact {
  RoleId source_role;  // 1 or 2
  std::string text;    // raw advisor output
  bool is_empty = false;
  std::int64_t char_length = 0;
  double entropy_bits = 0.0;

  // Builds the artifact from raw advisor output: emptiness is judged on the
  // whitespace-trimmed text, the metrics on the raw text.
  static InstructionArtifact from_text(RoleId source_role, std::string text);

  bool operator==(const InstructionArtifact&) const = default;
};

enum class VerdictKind { UsefulPassage1, UsefulPassage2, NotUseful, Noncompliant };

const char* to_string(VerdictKind kind);
std::optional<VerdictKind> verdict_kind_from_string(std::string_view name);

// Canonical-phrase scan behind RefereeVerdict's invariant: the verdict kind
// is the unique canonical phrase found case-insensitively in the text, or
// Noncompliant when none or several occur.
VerdictKind classify_verdict_text(std::string_view raw);

struct RefereeVerdict {
  VerdictKind kind = VerdictKind::Noncompliant;
  std::string raw_text;

  static RefereeVerdict from_text(std::string raw);

  bool operator==(const RefereeVerdict&) const = default;
};

inline constexpr int kQuestionCount = 16;

struct ScoreSheet {
  RoleId scorer_role;            // 7, 8 or 9
  std::map<int, int> scores;     // question 1..16 -> 0..2

  bool operator==(const ScoreSheet&) const = default;
};

enum class TrialStatus { Complete, Failed };

struct TrialRecord {
  std::string trial_id;
  std::string config_hash;
  std::vector<Transcript> transcripts;                    // one per attempted role
  std::map<int, InstructionArtifact> instructions;        // keyed by source role 1, 2
  std::optional<RefereeVerdict> verdict;
  std::map<int, std::map<int, std::string>> answers;      // taker role -> question -> text
  std::map<int, ScoreSheet> sheets;                       // scorer role -> sheet
  TrialStatus status = TrialStatus::Failed;
  int failed_stage = 0;          // role ordinal of the failing stage, 0 if Complete
  std::string failure_reason;    // diagnostic, empty if Complete

  const Transcript* transcript_for(int role) const;

  bool operator==(const TrialRecord&) const = default;
};

// Fit summary shared by the logistic and least-squares routes.
struct RegressionFit {
  std::vector<double> coef;
  std::vector<double> se;
  std::vector<double> stat;  // Wald z (logit) or Student t (OLS)
  std::vector<double> p;     // two-sided, in [0, 1]
  std::optional<double> log_likelihood;  // logit only
  std::optional<double> llr_p;           // logit only
  std::size_t n = 0;
  std::vector<bool> degenerate;  // per coefficient: se was 0, p not meaningful

  bool operator==(const RegressionFit&) const = default;
};

// Returns every invariant violation in the record; empty means valid.
std::vector<std::string> validate_record(const TrialRecord& record);

Json encode_record(const TrialRecord& record);
TrialRecord decode_record(const Json& j);

// Field-wise equality ignoring transcript timestamps; used to compare runs
// that differ only in scheduling.
bool records_equivalent(const TrialRecord& a, const TrialRecord& b);

}  // namespace tomh
