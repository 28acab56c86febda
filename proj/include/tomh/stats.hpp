#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tomh/trial_model.hpp"

namespace tomh::stats {

struct TwoSampleResult {
  double t = 0.0;
  int df = 0;
  double p_two_sided = 1.0;

  bool operator==(const TwoSampleResult&) const = default;
};

// Row-major design matrix whose first column is the intercept.
class DesignMatrix {
 public:
  DesignMatrix(std::size_t rows, std::size_t cols);

  // Prepends a column of ones to the given predictor columns.
  static DesignMatrix with_intercept(const std::vector<std::vector<double>>& predictor_columns);

  // A lone intercept column.
  static DesignMatrix intercept_only(std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double at(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
  double& at(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

// Pooled (Student) two-sample t-test from summary statistics.
TwoSampleResult pooled_t_from_summary(double mean1, double sd1, std::size_t n1, double mean2,
                                      double sd2, std::size_t n2);

// Same test from raw samples (n-1 standard deviations).
TwoSampleResult t_test(std::span<const double> sample1, std::span<const double> sample2);

// Welch variant, provided for completeness; the default report uses the
// pooled form.
TwoSampleResult welch_t_from_summary(double mean1, double sd1, std::size_t n1, double mean2,
                                     double sd2, std::size_t n2);

// Exact two-sided "minlike" binomial test: sums P(X = x) over every x whose
// point probability does not exceed P(X = k). No normal approximation.
double binomial_two_sided(int k, int n, double p0);

// Maximum-likelihood logistic regression via Newton/IRLS with Wald z
// inference and a likelihood-ratio test against the intercept-only model.
RegressionFit fit_logistic(const DesignMatrix& X, std::span<const double> y);

// Ordinary least squares via Householder QR with Student-t inference.
RegressionFit fit_ols(const DesignMatrix& X, std::span<const double> y);

struct Distribution {
  enum class Kind { Normal, StudentT, ChiSquare };
  Kind kind;
  int df = 0;  // unused for Normal

  static Distribution normal() { return {Kind::Normal, 0}; }
  static Distribution student_t(int df) { return {Kind::StudentT, df}; }
  static Distribution chi_square(int df) { return {Kind::ChiSquare, df}; }
};

enum class Tail { Upper, TwoSided };

// Upper-tail (or doubled symmetric two-sided) probability via regularized
// incomplete beta/gamma functions. For the chi-square, whose tests are
// one-sided, both flags return the upper tail.
double tail_probability(Distribution dist, double x, Tail tail);

// Special-function primitives, exposed for direct testing.
double regularized_incomplete_beta(double a, double b, double x);
double regularized_gamma_q(double a, double x);  // upper tail Q(a, x)
double log_binomial_pmf(int n, int k, double p);

}  // namespace tomh::stats
