#include "tomh/trial_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

#include "tomh/errors.hpp"
#include "tomh/metrics.hpp"
#include "tomh/numeric.hpp"

namespace tomh {

RoleId::RoleId(int ordinal) : ordinal_(ordinal) {
  if (ordinal < 1 || ordinal > kCount) {
    throw HarnessError(ErrorKind::DomainError,
                       "role ordinal must be 1..9, got " + std::to_string(ordinal));
  }
}

RoleId RoleId::scored_taker() const {
  if (!is_scorer()) {
    throw HarnessError(ErrorKind::DomainError,
                       "role " + std::to_string(ordinal_) + " does not score a taker");
  }
  return RoleId(ordinal_ - 3);
}

double default_temperature(RoleId role) { return role.is_scorer() ? 0.0 : 1.0; }

InstructionArtifact InstructionArtifact::from_text(RoleId source_role, std::string text) {
  InstructionArtifact a{.source_role = source_role, .text = std::move(text)};
  a.is_empty = is_blank(a.text);
  const auto m = metrics::text_metrics(a.text);
  a.char_length = m.char_length;
  a.entropy_bits = m.entropy_bits;
  return a;
}

const char* to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::UsefulPassage1: return "useful_passage_1";
    case VerdictKind::UsefulPassage2: return "useful_passage_2";
    case VerdictKind::NotUseful: return "not_useful";
    case VerdictKind::Noncompliant: return "noncompliant";
  }
  return "noncompliant";
}

std::optional<VerdictKind> verdict_kind_from_string(std::string_view name) {
  if (name == "useful_passage_1") return VerdictKind::UsefulPassage1;
  if (name == "useful_passage_2") return VerdictKind::UsefulPassage2;
  if (name == "not_useful") return VerdictKind::NotUseful;
  if (name == "noncompliant") return VerdictKind::Noncompliant;
  return std::nullopt;
}

namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool contains_phrase(const std::string& lowered, std::string_view phrase) {
  return lowered.find(phrase) != std::string::npos;
}

}  // namespace

VerdictKind classify_verdict_text(std::string_view raw) {
  const std::string lowered = ascii_lower(raw);
  int found = 0;
  VerdictKind kind = VerdictKind::Noncompliant;
  if (contains_phrase(lowered, "useful, passage 1")) {
    ++found;
    kind = VerdictKind::UsefulPassage1;
  }
  if (contains_phrase(lowered, "useful, passage 2")) {
    ++found;
    kind = VerdictKind::UsefulPassage2;
  }
  if (contains_phrase(lowered, "not useful")) {
    ++found;
    kind = VerdictKind::NotUseful;
  }
  return found == 1 ? kind : VerdictKind::Noncompliant;
}

RefereeVerdict RefereeVerdict::from_text(std::string raw) {
  RefereeVerdict v;
  v.kind = classify_verdict_text(raw);
  v.raw_text = std::move(raw);
  return v;
}

const Transcript* TrialRecord::transcript_for(int role) const {
  for (const auto& t : transcripts) {
    if (t.role.ordinal() == role) return &t;
  }
  return nullptr;
}

namespace {

void check_artifact(const InstructionArtifact& a, int key, std::vector<std::string>& out) {
  const std::string label = "instructions[" + std::to_string(key) + "]";
  if (a.source_role.ordinal() != key) {
    out.push_back(label + ": source_role " + std::to_string(a.source_role.ordinal()) +
                  " does not match key");
  }
  if (key != 1 && key != 2) {
    out.push_back(label + ": instruction source must be role 1 or 2");
  }
  if (a.is_empty != is_blank(a.text)) {
    out.push_back(label + ": is_empty flag inconsistent with whitespace-trimmed text");
  }
  const auto m = metrics::text_metrics(a.text);
  if (a.char_length != m.char_length) {
    out.push_back(label + ": char_length " + std::to_string(a.char_length) +
                  " does not match raw text (" + std::to_string(m.char_length) + ")");
  }
  if (std::abs(a.entropy_bits - m.entropy_bits) > 1e-9 || a.entropy_bits < 0.0) {
    out.push_back(label + ": entropy_bits inconsistent with raw text");
  }
}

void check_scores(const ScoreSheet& sheet, int key, bool require_complete,
                  std::vector<std::string>& out) {
  const std::string label = "sheet " + std::to_string(key);
  if (sheet.scorer_role.ordinal() != key) {
    out.push_back(label + ": scorer_role does not match key");
  }
  if (!sheet.scorer_role.is_scorer()) {
    out.push_back(label + ": scorer_role must be 7, 8 or 9");
  }
  for (const auto& [q, score] : sheet.scores) {
    if (q < 1 || q > kQuestionCount) {
      out.push_back(label + ": question " + std::to_string(q) + " out of 1..16");
    }
    if (score < 0 || score > 2) {
      out.push_back(label + ": score for question " + std::to_string(q) + " is " +
                    std::to_string(score) + ", outside 0..2");
    }
  }
  if (require_complete) {
    for (int q = 1; q <= kQuestionCount; ++q) {
      if (!sheet.scores.contains(q)) {
        out.push_back(label + ": missing score for question " + std::to_string(q));
      }
    }
  }
}

}  // namespace

std::vector<std::string> validate_record(const TrialRecord& record) {
  std::vector<std::string> out;
  if (record.trial_id.empty()) out.push_back("trial_id is empty");
  if (record.config_hash.empty()) out.push_back("config_hash is empty");

  std::set<int> seen_roles;
  for (const auto& t : record.transcripts) {
    if (!seen_roles.insert(t.role.ordinal()).second) {
      out.push_back("duplicate transcript for role " + std::to_string(t.role.ordinal()));
    }
    if (t.ended_at_ms < t.started_at_ms) {
      out.push_back("transcript role " + std::to_string(t.role.ordinal()) +
                    ": ended_at precedes started_at");
    }
  }

  for (const auto& [key, artifact] : record.instructions) check_artifact(artifact, key, out);

  if (record.verdict) {
    const VerdictKind expected = classify_verdict_text(record.verdict->raw_text);
    if (record.verdict->kind != expected) {
      out.push_back(std::string("verdict kind '") + to_string(record.verdict->kind) +
                    "' inconsistent with raw text (expected '" + to_string(expected) + "')");
    }
  }

  const bool complete = record.status == TrialStatus::Complete;
  for (const auto& [role, answer_map] : record.answers) {
    const std::string label = "answers[" + std::to_string(role) + "]";
    if (role < 4 || role > 6) out.push_back(label + ": answers must come from roles 4..6");
    for (const auto& [q, text] : answer_map) {
      if (q < 1 || q > kQuestionCount) {
        out.push_back(label + ": question " + std::to_string(q) + " out of 1..16");
      }
      if (text.empty()) {
        out.push_back(label + ": empty answer for question " + std::to_string(q));
      }
    }
    if (complete) {
      for (int q = 1; q <= kQuestionCount; ++q) {
        if (!answer_map.contains(q)) {
          out.push_back(label + ": missing answer for question " + std::to_string(q));
        }
      }
    }
  }

  for (const auto& [key, sheet] : record.sheets) check_scores(sheet, key, complete, out);

  if (complete) {
    for (int role = 1; role <= RoleId::kCount; ++role) {
      if (record.transcript_for(role) == nullptr) {
        out.push_back("missing transcript for role " + std::to_string(role));
      }
    }
    for (int source : {1, 2}) {
      if (!record.instructions.contains(source)) {
        out.push_back("missing instruction artifact for source role " + std::to_string(source));
      }
    }
    if (!record.verdict) out.push_back("missing referee verdict");
    for (int role : {4, 5, 6}) {
      if (!record.answers.contains(role)) {
        out.push_back("missing answer set for role " + std::to_string(role));
      }
    }
    for (int role : {7, 8, 9}) {
      if (!record.sheets.contains(role)) {
        out.push_back("missing score sheet for role " + std::to_string(role));
      }
    }
    if (record.failed_stage != 0) out.push_back("Complete record names a failed stage");
  } else {
    if (record.failed_stage < 1 || record.failed_stage > RoleId::kCount) {
      out.push_back("Failed record must name the failing stage (role 1..9)");
    }
  }
  return out;
}

namespace {

Json encode_transcript(const Transcript& t) {
  return Json{{"role", t.role.ordinal()},
              {"request_text", t.request_text},
              {"response_text", t.response_text},
              {"started_at_ms", t.started_at_ms},
              {"ended_at_ms", t.ended_at_ms},
              {"backend_id", t.backend_id}};
}

Transcript decode_transcript(const Json& j) {
  return Transcript{.role = RoleId(j.at("role").get<int>()),
                    .request_text = j.at("request_text").get<std::string>(),
                    .response_text = j.at("response_text").get<std::string>(),
                    .started_at_ms = j.at("started_at_ms").get<std::int64_t>(),
                    .ended_at_ms = j.at("ended_at_ms").get<std::int64_t>(),
                    .backend_id = j.at("backend_id").get<std::string>()};
}

}  // namespace

Json encode_record(const TrialRecord& record) {
  Json transcripts = Json::array();
  for (const auto& t : record.transcripts) transcripts.push_back(encode_transcript(t));

  Json instructions = Json::object();
  for (const auto& [key, a] : record.instructions) {
    instructions[std::to_string(key)] = Json{{"source_role", a.source_role.ordinal()},
                                             {"text", a.text},
                                             {"is_empty", a.is_empty},
                                             {"char_length", a.char_length},
                                             {"entropy_bits", a.entropy_bits}};
  }

  Json answers = Json::object();
  for (const auto& [role, answer_map] : record.answers) {
    Json one = Json::object();
    for (const auto& [q, text] : answer_map) one[std::to_string(q)] = text;
    answers[std::to_string(role)] = std::move(one);
  }

  Json sheets = Json::object();
  for (const auto& [role, sheet] : record.sheets) {
    Json scores = Json::object();
    for (const auto& [q, s] : sheet.scores) scores[std::to_string(q)] = s;
    sheets[std::to_string(role)] =
        Json{{"scorer_role", sheet.scorer_role.ordinal()}, {"scores", std::move(scores)}};
  }

  Json j{{"trial_id", record.trial_id},
         {"config_hash", record.config_hash},
         {"transcripts", std::move(transcripts)},
         {"instructions", std::move(instructions)},
         {"answers", std::move(answers)},
         {"sheets", std::move(sheets)},
         {"status", record.status == TrialStatus::Complete ? "complete" : "failed"},
         {"failed_stage", record.failed_stage},
         {"failure_reason", record.failure_reason}};
  if (record.verdict) {
    j["verdict"] =
        Json{{"kind", to_string(record.verdict->kind)}, {"raw_text", record.verdict->raw_text}};
  } else {
    j["verdict"] = nullptr;
  }
  return j;
}

TrialRecord decode_record(const Json& j) {
  TrialRecord r;
  r.trial_id = j.at("trial_id").get<std::string>();
  r.config_hash = j.at("config_hash").get<std::string>();
  for (const auto& t : j.at("transcripts")) r.transcripts.push_back(decode_transcript(t));
  for (const auto& [key, a] : j.at("instructions").items()) {
    InstructionArtifact artifact{.source_role = RoleId(a.at("source_role").get<int>()),
                                 .text = a.at("text").get<std::string>(),
                                 .is_empty = a.at("is_empty").get<bool>(),
                                 .char_length = a.at("char_length").get<std::int64_t>(),
                                 .entropy_bits = a.at("entropy_bits").get<double>()};
    r.instructions.emplace(std::stoi(key), std::move(artifact));
  }
  if (!j.at("verdict").is_null()) {
    const auto& v = j.at("verdict");
    const auto kind = verdict_kind_from_string(v.at("kind").get<std::string>());
    if (!kind) {
      throw HarnessError(ErrorKind::ProtocolError,
                         "unknown verdict kind '" + v.at("kind").get<std::string>() + "'");
    }
    r.verdict = RefereeVerdict{.kind = *kind, .raw_text = v.at("raw_text").get<std::string>()};
  }
  for (const auto& [role, answer_map] : j.at("answers").items()) {
    std::map<int, std::string> one;
    for (const auto& [q, text] : answer_map.items()) {
      one.emplace(std::stoi(q), text.get<std::string>());
    }
    r.answers.emplace(std::stoi(role), std::move(one));
  }
  for (const auto& [role, sheet] : j.at("sheets").items()) {
    ScoreSheet s{.scorer_role = RoleId(sheet.at("scorer_role").get<int>()), .scores = {}};
    for (const auto& [q, score] : sheet.at("scores").items()) {
      s.scores.emplace(std::stoi(q), score.get<int>());
    }
    r.sheets.emplace(std::stoi(role), std::move(s));
  }
  const std::string status = j.at("status").get<std::string>();
  if (status == "complete") {
    r.status = TrialStatus::Complete;
  } else if (status == "failed") {
    r.status = TrialStatus::Failed;
  } else {
    throw HarnessError(ErrorKind::ProtocolError, "unknown trial status '" + status + "'");
  }
  r.failed_stage = j.at("failed_stage").get<int>();
  r.failure_reason = j.at("failure_reason").get<std::string>();
  return r;
}

bool records_equivalent(const TrialRecord& a, const TrialRecord& b) {
  TrialRecord ta = a;
  TrialRecord tb = b;
  for (auto* rec : {&ta, &tb}) {
    for (auto& t : rec->transcripts) {
      t.started_at_ms = 0;
      t.ended_at_ms = 0;
    }
  }
  return ta == tb;
}

}  // namespace tomh
