#include "tomh/metrics.hpp"

#include <cmath>
#include <cstdint>
#include <map>

#include "tomh/errors.hpp"
#include "tomh/numeric.hpp"

namespace tomh::metrics {

std::int64_t char_length(std::string_view utf8) {
  return static_cast<std::int64_t>(decode_utf8(utf8).size());
}

namespace {

double entropy_of_counts(const std::map<char32_t, std::int64_t>& counts, std::int64_t total) {
  // Iteration over the ordered map keeps the summation order deterministic,
  // so repeated texts reproduce the exact same double.
  CompensatedSum acc;
  const double n = static_cast<double>(total);
  for (const auto& [cp, count] : counts) {
    const double p = static_cast<double>(count) / n;
    acc.add(-p * std::log2(p));
  }
  const double h = acc.value();
  return h < 0.0 ? 0.0 : h;
}

}  // namespace

double shannon_entropy(std::string_view utf8) {
  if (utf8.empty()) {
    throw HarnessError(ErrorKind::EmptyText, "entropy of empty text is undefined");
  }
  std::map<char32_t, std::int64_t> counts;
  const auto cps = decode_utf8(utf8);
  for (char32_t cp : cps) ++counts[cp];
  return entropy_of_counts(counts, static_cast<std::int64_t>(cps.size()));
}

TextMetrics text_metrics(std::string_view utf8) {
  TextMetrics m;
  m.char_length = char_length(utf8);
  m.entropy_bits = utf8.empty() ? 0.0 : shannon_entropy(utf8);
  return m;
}

}  // namespace tomh::metrics
