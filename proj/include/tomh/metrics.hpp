#pragma once

#include <cstdint>
#include <string_view>

namespace tomh::metrics {

struct TextMetrics {
  std::int64_t char_length = 0;
  double entropy_bits = 0.0;

  bool operator==(const TextMetrics&) const = default;
};

// Number of Unicode scalar values in the text.
std::int64_t char_length(std::string_view utf8);

// Per-character Shannon entropy in bits: H = -sum p_c log2 p_c over the
// relative frequencies of distinct scalar values. Throws EmptyText on "".
double shannon_entropy(std::string_view utf8);

// Both metrics in one pass; entropy is 0 for empty text.
TextMetrics text_metrics(std::string_view utf8);

}  // namespace tomh::metrics
