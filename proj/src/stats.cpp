#include "tomh/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tomh/errors.hpp"
#include "tomh/numeric.hpp"

namespace tomh::stats {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxSpecialIterations = 300;

double lgamma_safe(double x) { return std::lgamma(x); }

// Continued fraction for the incomplete beta (Lentz's method).
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < 1e-300) d = 1e-300;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxSpecialIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = 1.0 + aa / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = 1.0 + aa / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 10.0 * kEps) break;
  }
  return h;
}

// Lower regularized incomplete gamma P(a, x) by series expansion.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < kMaxSpecialIterations * 4; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - lgamma_safe(a));
}

// Upper regularized incomplete gamma Q(a, x) by continued fraction.
double gamma_q_continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1e300;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxSpecialIterations * 4; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 10.0 * kEps) break;
  }
  return h * std::exp(-x + a * std::log(x) - lgamma_safe(a));
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw HarnessError(ErrorKind::DomainError, "incomplete beta requires a, b > 0");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front =
      lgamma_safe(a + b) - lgamma_safe(a) - lgamma_safe(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) {
    throw HarnessError(ErrorKind::DomainError, "incomplete gamma requires a > 0, x >= 0");
  }
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_continued_fraction(a, x);
}

double log_binomial_pmf(int n, int k, double p) {
  return lgamma_safe(n + 1.0) - lgamma_safe(k + 1.0) - lgamma_safe(n - k + 1.0) +
         k * std::log(p) + (n - k) * std::log1p(-p);
}

namespace {

double normal_two_sided(double z) {
  // erfc(|z|/sqrt(2)) expressed through the upper incomplete gamma.
  const double az = std::abs(z);
  if (az == 0.0) return 1.0;
  return regularized_gamma_q(0.5, 0.5 * az * az);
}

double student_t_two_sided(double t, int df) {
  if (t == 0.0) return 1.0;
  const double v = static_cast<double>(df);
  return regularized_incomplete_beta(v / 2.0, 0.5, v / (v + t * t));
}

}  // namespace

double tail_probability(Distribution dist, double x, Tail tail) {
  using Kind = Distribution::Kind;
  if (dist.kind != Kind::Normal && dist.df < 1) {
    throw HarnessError(ErrorKind::DomainError, "degrees of freedom must be >= 1");
  }
  if (!std::isfinite(x)) {
    throw HarnessError(ErrorKind::DomainError, "tail evaluation point must be finite");
  }
  switch (dist.kind) {
    case Kind::Normal: {
      const double two = normal_two_sided(x);
      if (tail == Tail::TwoSided) return two;
      return x >= 0.0 ? 0.5 * two : 1.0 - 0.5 * two;
    }
    case Kind::StudentT: {
      const double two = student_t_two_sided(x, dist.df);
      if (tail == Tail::TwoSided) return two;
      return x >= 0.0 ? 0.5 * two : 1.0 - 0.5 * two;
    }
    case Kind::ChiSquare: {
      if (x <= 0.0) return 1.0;
      return regularized_gamma_q(dist.df / 2.0, x / 2.0);
    }
  }
  throw HarnessError(ErrorKind::DomainError, "unknown distribution");
}

TwoSampleResult pooled_t_from_summary(double mean1, double sd1, std::size_t n1, double mean2,
                                      double sd2, std::size_t n2) {
  if (n1 < 2 || n2 < 2) {
    throw HarnessError(ErrorKind::SampleTooSmall, "pooled t-test needs n >= 2 per sample");
  }
  if (sd1 < 0.0 || sd2 < 0.0) {
    throw HarnessError(ErrorKind::DomainError, "standard deviations must be nonnegative");
  }
  if (sd1 == 0.0 && sd2 == 0.0) {
    throw HarnessError(ErrorKind::DegenerateVariance, "both samples have zero variance");
  }
  const double fn1 = static_cast<double>(n1);
  const double fn2 = static_cast<double>(n2);
  const int df = static_cast<int>(n1 + n2) - 2;
  const double pooled_var = ((fn1 - 1.0) * sd1 * sd1 + (fn2 - 1.0) * sd2 * sd2) / df;
  const double t = (mean1 - mean2) / std::sqrt(pooled_var * (1.0 / fn1 + 1.0 / fn2));
  return TwoSampleResult{
      .t = t, .df = df, .p_two_sided = tail_probability(Distribution::student_t(df), t, Tail::TwoSided)};
}

TwoSampleResult welch_t_from_summary(double mean1, double sd1, std::size_t n1, double mean2,
                                     double sd2, std::size_t n2) {
  if (n1 < 2 || n2 < 2) {
    throw HarnessError(ErrorKind::SampleTooSmall, "Welch t-test needs n >= 2 per sample");
  }
  if (sd1 == 0.0 && sd2 == 0.0) {
    throw HarnessError(ErrorKind::DegenerateVariance, "both samples have zero variance");
  }
  const double v1 = sd1 * sd1 / static_cast<double>(n1);
  const double v2 = sd2 * sd2 / static_cast<double>(n2);
  const double t = (mean1 - mean2) / std::sqrt(v1 + v2);
  const double df_real = (v1 + v2) * (v1 + v2) /
                         (v1 * v1 / (static_cast<double>(n1) - 1.0) +
                          v2 * v2 / (static_cast<double>(n2) - 1.0));
  const int df = std::max(1, static_cast<int>(std::floor(df_real)));
  return TwoSampleResult{
      .t = t, .df = df, .p_two_sided = tail_probability(Distribution::student_t(df), t, Tail::TwoSided)};
}

TwoSampleResult t_test(std::span<const double> sample1, std::span<const double> sample2) {
  if (sample1.size() < 2 || sample2.size() < 2) {
    throw HarnessError(ErrorKind::SampleTooSmall, "t-test needs at least 2 values per sample");
  }
  const auto m1 = sample_moments(sample1);
  const auto m2 = sample_moments(sample2);
  return pooled_t_from_summary(m1.mean, m1.sd, m1.n, m2.mean, m2.sd, m2.n);
}

double binomial_two_sided(int k, int n, double p0) {
  if (k < 0 || n < 0 || k > n) {
    throw HarnessError(ErrorKind::DomainError, "binomial test requires 0 <= k <= n");
  }
  if (!(p0 > 0.0) || !(p0 < 1.0)) {
    throw HarnessError(ErrorKind::DomainError, "binomial test requires 0 < p0 < 1");
  }
  if (n == 0) return 1.0;
  const double log_pk = log_binomial_pmf(n, k, p0);
  // Relative slack absorbs rounding when the symmetric twin outcome has the
  // mathematically identical point probability.
  const double cutoff = log_pk + std::log1p(1e-7);
  CompensatedSum total;
  for (int x = 0; x <= n; ++x) {
    const double lp = log_binomial_pmf(n, x, p0);
    if (lp <= cutoff) total.add(std::exp(lp));
  }
  return std::min(1.0, total.value());
}

namespace {

// Dense symmetric positive-definite solve/inverse via Cholesky.
struct Cholesky {
  std::size_t dim;
  std::vector<double> lower;  // row-major lower triangle
  bool ok = false;

  explicit Cholesky(const std::vector<double>& matrix, std::size_t p) : dim(p), lower(p * p, 0.0) {
    ok = true;
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        double sum = matrix[i * p + j];
        for (std::size_t k = 0; k < j; ++k) sum -= lower[i * p + k] * lower[j * p + k];
        if (i == j) {
          if (sum <= 0.0 || !std::isfinite(sum)) {
            ok = false;
            return;
          }
          lower[i * p + i] = std::sqrt(sum);
        } else {
          lower[i * p + j] = sum / lower[j * p + j];
        }
      }
    }
  }

  std::vector<double> solve(std::vector<double> b) const {
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t k = 0; k < i; ++k) b[i] -= lower[i * dim + k] * b[k];
      b[i] /= lower[i * dim + i];
    }
    for (std::size_t ii = dim; ii-- > 0;) {
      for (std::size_t k = ii + 1; k < dim; ++k) b[ii] -= lower[k * dim + ii] * b[k];
      b[ii] /= lower[ii * dim + ii];
    }
    return b;
  }

  std::vector<double> inverse_diagonal() const {
    std::vector<double> diag(dim, 0.0);
    for (std::size_t j = 0; j < dim; ++j) {
      std::vector<double> e(dim, 0.0);
      e[j] = 1.0;
      const auto col = solve(std::move(e));
      diag[j] = col[j];
    }
    return diag;
  }
};

// Householder QR decomposition; detects rank deficiency on the R diagonal.
struct QrDecomposition {
  std::size_t n, p;
  std::vector<double> work;  // packed Householder vectors + R
  std::vector<double> r_diag;
  bool full_rank = true;

  QrDecomposition(const DesignMatrix& X) : n(X.rows()), p(X.cols()), work(n * p), r_diag(p) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < p; ++j) work[i * p + j] = X.at(i, j);
    }
    double max_norm = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      double norm = 0.0;
      for (std::size_t i = j; i < n; ++i) norm = std::hypot(norm, work[i * p + j]);
      max_norm = std::max(max_norm, norm);
      if (norm == 0.0) {
        full_rank = false;
        r_diag[j] = 0.0;
        continue;
      }
      if (work[j * p + j] < 0.0) norm = -norm;
      for (std::size_t i = j; i < n; ++i) work[i * p + j] /= norm;
      work[j * p + j] += 1.0;
      for (std::size_t kcol = j + 1; kcol < p; ++kcol) {
        double s = 0.0;
        for (std::size_t i = j; i < n; ++i) s += work[i * p + j] * work[i * p + kcol];
        s = -s / work[j * p + j];
        for (std::size_t i = j; i < n; ++i) work[i * p + kcol] += s * work[i * p + j];
      }
      r_diag[j] = -norm;
    }
    for (std::size_t j = 0; j < p && full_rank; ++j) {
      if (std::abs(r_diag[j]) <= 1e-12 * std::max(1.0, max_norm)) full_rank = false;
    }
  }

  // Least-squares solution for X b = y.
  std::vector<double> solve(std::vector<double> y) const {
    for (std::size_t j = 0; j < p; ++j) {
      double s = 0.0;
      for (std::size_t i = j; i < n; ++i) s += work[i * p + j] * y[i];
      s = -s / work[j * p + j];
      for (std::size_t i = j; i < n; ++i) y[i] += s * work[i * p + j];
    }
    std::vector<double> beta(p, 0.0);
    for (std::size_t jj = p; jj-- > 0;) {
      double s = y[jj];
      for (std::size_t k = jj + 1; k < p; ++k) s -= r_for(jj, k) * beta[k];
      beta[jj] = s / r_diag[jj];
    }
    return beta;
  }

  double r_for(std::size_t i, std::size_t j) const {
    return i == j ? r_diag[i] : work[i * p + j];
  }

  // Diagonal of (X^T X)^-1 = R^-1 R^-T.
  std::vector<double> xtx_inverse_diagonal() const {
    // Columns of R^-1 by back substitution.
    std::vector<double> diag(p, 0.0);
    for (std::size_t col = 0; col < p; ++col) {
      std::vector<double> e(p, 0.0);
      e[col] = 1.0;
      std::vector<double> x(p, 0.0);
      for (std::size_t jj = p; jj-- > 0;) {
        double s = e[jj];
        for (std::size_t k = jj + 1; k < p; ++k) s -= r_for(jj, k) * x[k];
        x[jj] = s / r_diag[jj];
      }
      // row `row` of R^-1 contributes x[row]^2 ... accumulate by rows
      for (std::size_t row = 0; row < p; ++row) diag[row] += x[row] * x[row];
    }
    return diag;
  }
};

double logistic(double eta) {
  if (eta >= 0.0) {
    const double e = std::exp(-eta);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

double bernoulli_log_likelihood(const DesignMatrix& X, std::span<const double> y,
                                const std::vector<double>& beta) {
  CompensatedSum ll;
  for (std::size_t i = 0; i < X.rows(); ++i) {
    double eta = 0.0;
    for (std::size_t j = 0; j < X.cols(); ++j) eta += X.at(i, j) * beta[j];
    // y*eta - log(1 + exp(eta)), branch-stable for large |eta|
    const double log1pexp = eta > 30.0 ? eta : std::log1p(std::exp(eta));
    ll.add(y[i] * eta - log1pexp);
  }
  return ll.value();
}

void require_design(const DesignMatrix& X, std::size_t n_y) {
  if (X.rows() != n_y) {
    throw HarnessError(ErrorKind::DomainError, "design rows and response length differ");
  }
  if (X.rows() <= X.cols()) {
    throw HarnessError(ErrorKind::SampleTooSmall, "need more observations than parameters");
  }
  for (std::size_t i = 0; i < X.rows(); ++i) {
    if (X.at(i, 0) != 1.0) {
      throw HarnessError(ErrorKind::DomainError, "first design column must be the intercept");
    }
  }
}

}  // namespace

DesignMatrix::DesignMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

DesignMatrix DesignMatrix::intercept_only(std::size_t rows) {
  DesignMatrix X(rows, 1);
  for (std::size_t i = 0; i < rows; ++i) X.at(i, 0) = 1.0;
  return X;
}

DesignMatrix DesignMatrix::with_intercept(
    const std::vector<std::vector<double>>& predictor_columns) {
  if (predictor_columns.empty()) {
    throw HarnessError(ErrorKind::DomainError, "need at least one predictor column");
  }
  const std::size_t n = predictor_columns.front().size();
  for (const auto& col : predictor_columns) {
    if (col.size() != n) {
      throw HarnessError(ErrorKind::DomainError, "predictor columns have unequal lengths");
    }
  }
  DesignMatrix X(n, predictor_columns.size() + 1);
  for (std::size_t i = 0; i < n; ++i) {
    X.at(i, 0) = 1.0;
    for (std::size_t j = 0; j < predictor_columns.size(); ++j) {
      X.at(i, j + 1) = predictor_columns[j][i];
    }
  }
  return X;
}

RegressionFit fit_logistic(const DesignMatrix& X, std::span<const double> y) {
  const std::size_t n = X.rows();
  const std::size_t p = X.cols();
  require_design(X, y.size());
  bool has_zero = false;
  bool has_one = false;
  for (double v : y) {
    if (v == 0.0) {
      has_zero = true;
    } else if (v == 1.0) {
      has_one = true;
    } else {
      throw HarnessError(ErrorKind::DomainError, "logistic response must be 0 or 1");
    }
  }
  if (!has_zero || !has_one) {
    throw HarnessError(ErrorKind::MissingClass, "both response classes must be present");
  }
  {
    QrDecomposition qr(X);
    if (!qr.full_rank) {
      throw HarnessError(ErrorKind::RankDeficient, "design matrix is rank deficient");
    }
  }

  std::vector<double> beta(p, 0.0);
  std::vector<double> info(p * p, 0.0);
  for (int iter = 0; iter < 100; ++iter) {
    std::fill(info.begin(), info.end(), 0.0);
    std::vector<double> grad(p, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double eta = 0.0;
      for (std::size_t j = 0; j < p; ++j) eta += X.at(i, j) * beta[j];
      const double mu = logistic(eta);
      const double w = mu * (1.0 - mu);
      for (std::size_t j = 0; j < p; ++j) {
        grad[j] += X.at(i, j) * (y[i] - mu);
        for (std::size_t k = 0; k <= j; ++k) info[j * p + k] += w * X.at(i, j) * X.at(i, k);
      }
    }
    for (std::size_t j = 0; j < p; ++j) {
      for (std::size_t k = j + 1; k < p; ++k) info[j * p + k] = info[k * p + j];
    }
    Cholesky chol(info, p);
    if (!chol.ok) {
      throw HarnessError(ErrorKind::Separation,
                         "observed information is numerically singular (separated data?)");
    }
    const auto step = chol.solve(grad);
    double max_step = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      beta[j] += step[j];
      max_step = std::max(max_step, std::abs(step[j]));
      if (std::abs(beta[j]) > 1e6) {
        throw HarnessError(ErrorKind::Separation, "coefficients diverged (separated data?)");
      }
    }
    if (max_step < 1e-10) break;
  }

  // Observed information at the optimum for the standard errors.
  std::fill(info.begin(), info.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double eta = 0.0;
    for (std::size_t j = 0; j < p; ++j) eta += X.at(i, j) * beta[j];
    const double mu = logistic(eta);
    const double w = mu * (1.0 - mu);
    for (std::size_t j = 0; j < p; ++j) {
      for (std::size_t k = 0; k <= j; ++k) info[j * p + k] += w * X.at(i, j) * X.at(i, k);
    }
  }
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = j + 1; k < p; ++k) info[j * p + k] = info[k * p + j];
  }
  Cholesky chol(info, p);
  if (!chol.ok) {
    throw HarnessError(ErrorKind::Separation, "observed information singular at the optimum");
  }

  RegressionFit fit;
  fit.n = n;
  fit.coef = beta;
  const auto var_diag = chol.inverse_diagonal();
  fit.se.resize(p);
  fit.stat.resize(p);
  fit.p.resize(p);
  fit.degenerate.assign(p, false);
  for (std::size_t j = 0; j < p; ++j) {
    fit.se[j] = std::sqrt(var_diag[j]);
    fit.stat[j] = fit.coef[j] / fit.se[j];
    fit.p[j] = tail_probability(Distribution::normal(), fit.stat[j], Tail::TwoSided);
  }
  const double ll_full = bernoulli_log_likelihood(X, y, beta);
  fit.log_likelihood = ll_full;
  if (p > 1) {
    double ones = 0.0;
    for (double v : y) ones += v;
    const double phat = ones / static_cast<double>(n);
    const double ll_null = ones * std::log(phat) +
                           (static_cast<double>(n) - ones) * std::log1p(-phat);
    const double lr = 2.0 * (ll_full - ll_null);
    fit.llr_p = tail_probability(Distribution::chi_square(static_cast<int>(p) - 1),
                                 std::max(0.0, lr), Tail::Upper);
  } else {
    fit.llr_p = 1.0;
  }
  return fit;
}

RegressionFit fit_ols(const DesignMatrix& X, std::span<const double> y) {
  const std::size_t n = X.rows();
  const std::size_t p = X.cols();
  require_design(X, y.size());
  QrDecomposition qr(X);
  if (!qr.full_rank) {
    throw HarnessError(ErrorKind::RankDeficient, "design matrix is rank deficient");
  }
  const auto beta = qr.solve(std::vector<double>(y.begin(), y.end()));

  CompensatedSum rss_acc;
  CompensatedSum tss_acc;
  const double y_mean = compensated_total(y) / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    double fitted = 0.0;
    for (std::size_t j = 0; j < p; ++j) fitted += X.at(i, j) * beta[j];
    const double r = y[i] - fitted;
    rss_acc.add(r * r);
    const double c = y[i] - y_mean;
    tss_acc.add(c * c);
  }
  const double rss = std::max(0.0, rss_acc.value());
  const double tss = std::max(0.0, tss_acc.value());
  const int df = static_cast<int>(n - p);
  const double sigma2 = rss / df;
  const bool exact_fit = rss <= 1e-24 * std::max(1.0, tss);

  RegressionFit fit;
  fit.n = n;
  fit.coef = beta;
  fit.se.resize(p);
  fit.stat.resize(p);
  fit.p.resize(p);
  fit.degenerate.assign(p, exact_fit);
  const auto xtx_inv_diag = qr.xtx_inverse_diagonal();
  for (std::size_t j = 0; j < p; ++j) {
    if (exact_fit) {
      fit.se[j] = 0.0;
      fit.stat[j] = 0.0;
      fit.p[j] = 0.0;
      continue;
    }
    fit.se[j] = std::sqrt(sigma2 * xtx_inv_diag[j]);
    fit.stat[j] = fit.coef[j] / fit.se[j];
    fit.p[j] = tail_probability(Distribution::student_t(df), fit.stat[j], Tail::TwoSided);
  }
  return fit;
}

}  // namespace tomh::stats
