#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tomh {

// Kahan compensated accumulator; keeps long sums of small terms honest.
class CompensatedSum {
 public:
  void add(double value) {
    const double y = value - compensation_;
    const double t = sum_ + y;
    compensation_ = (t - sum_) - y;
    sum_ = t;
  }

  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double compensated_total(std::span<const double> values);

// Sample mean and standard deviation (n-1 denominator).
struct SampleMoments {
  double mean = 0.0;
  double sd = 0.0;
  std::size_t n = 0;
};
SampleMoments sample_moments(std::span<const double> values);

// FNV-1a over bytes; stable fingerprint for config provenance.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

// Minimal UTF-8 handling: decode to Unicode scalar values. Invalid bytes
// decode to U+FFFD, one scalar per offending byte.
std::vector<char32_t> decode_utf8(std::string_view utf8);
bool is_unicode_whitespace(char32_t cp);
std::string trim_whitespace(std::string_view utf8);
bool is_blank(std::string_view utf8);

}  // namespace tomh
