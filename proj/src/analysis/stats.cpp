#include "deadeye/analysis/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "deadeye/core/error.hpp"

namespace deadeye {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Continued fraction for I_x(a, b), modified Lentz.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 100000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw Error(ErrorKind::domain, "incomplete beta continued fraction did not converge");
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

double mean(const std::vector<double>& v) { return sum(v) / static_cast<double>(v.size()); }

double sample_variance(const std::vector<double>& v) {
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

void check_finite(const std::vector<double>& v) {
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorKind::domain, "samples must be finite");
  }
}

TestResult degenerate_t(TestKind kind, double difference, double df, const char* what) {
  TestResult r;
  r.kind = kind;
  r.df1 = df;
  r.degenerate = true;
  if (difference == 0.0) {
    r.statistic = 0.0;
    r.p_value = 1.0;
    r.note = std::string("zero ") + what + " and zero mean difference";
  } else {
    r.statistic = difference > 0 ? kInf : -kInf;
    r.p_value = 0.0;
    r.note = std::string("zero ") + what + " with nonzero mean difference; p is the limit";
  }
  return r;
}

void check_groups(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) throw Error(ErrorKind::domain, "t test needs at least two samples per group");
  check_finite(a);
  check_finite(b);
}

}  // namespace

double incomplete_beta(double a, double b, double x, double y) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorKind::domain, "incomplete beta needs a, b > 0");
  if (x < 0.0 || y < 0.0 || std::fabs(x + y - 1.0) > 1e-12) throw Error(ErrorKind::domain, "incomplete beta needs x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (y == 0.0) return 1.0;
  const double log_front = a * std::log(x) + b * std::log(y) - (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  if (x < (a + 1.0) / (a + b + 2.0)) return std::exp(log_front) * beta_continued_fraction(a, b, x) / a;
  return 1.0 - std::exp(log_front) * beta_continued_fraction(b, a, y) / b;
}

double incomplete_beta(double a, double b, double x) { return incomplete_beta(a, b, x, 1.0 - x); }

double t_two_tailed_p(double t, double df) {
  if (!(df > 0.0)) throw Error(ErrorKind::domain, "t distribution needs df > 0");
  if (std::isnan(t)) throw Error(ErrorKind::domain, "t statistic is NaN");
  if (std::isinf(t)) return 0.0;
  const double t2 = t * t;
  return incomplete_beta(0.5 * df, 0.5, df / (df + t2), t2 / (df + t2));
}

double f_upper_p(double f, double df1, double df2) {
  if (!(df1 > 0.0) || !(df2 > 0.0)) throw Error(ErrorKind::domain, "F distribution needs positive df");
  if (std::isnan(f) || f < 0.0) throw Error(ErrorKind::domain, "F statistic must be non-negative");
  if (std::isinf(f)) return 0.0;
  if (f == 0.0) return 1.0;
  const double denom = df2 + df1 * f;
  return incomplete_beta(0.5 * df2, 0.5 * df1, df2 / denom, df1 * f / denom);
}

Descriptive describe(const std::vector<double>& values) {
  if (values.empty()) throw Error(ErrorKind::domain, "no values to describe");
  Descriptive d;
  d.n = values.size();
  d.mean = mean(values);
  d.sd = values.size() > 1 ? std::sqrt(sample_variance(values)) : 0.0;
  return d;
}

const char* to_string(TestKind kind) {
  switch (kind) {
    case TestKind::paired_t: return "paired_t";
    case TestKind::welch_t: return "welch_t";
    case TestKind::pooled_t: return "pooled_t";
    case TestKind::rm_anova: return "rm_anova";
  }
  return "?";
}

TestResult t_test_paired(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::domain, "paired samples differ in length");
  if (a.size() < 2) throw Error(ErrorKind::domain, "paired t test needs at least two pairs");
  check_finite(a);
  check_finite(b);
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  const double n = static_cast<double>(d.size());
  const double md = mean(d);
  const double var = sample_variance(d);
  if (var == 0.0) return degenerate_t(TestKind::paired_t, md, n - 1.0, "variance of differences");
  TestResult r;
  r.kind = TestKind::paired_t;
  r.statistic = md / std::sqrt(var / n);
  r.df1 = n - 1.0;
  r.p_value = t_two_tailed_p(r.statistic, r.df1);
  return r;
}

TestResult t_test_welch(const std::vector<double>& a, const std::vector<double>& b) {
  check_groups(a, b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double va = sample_variance(a) / na;
  const double vb = sample_variance(b) / nb;
  const double diff = mean(a) - mean(b);
  if (va + vb == 0.0) return degenerate_t(TestKind::welch_t, diff, na + nb - 2.0, "variance in both groups");
  TestResult r;
  r.kind = TestKind::welch_t;
  r.statistic = diff / std::sqrt(va + vb);
  r.df1 = (va + vb) * (va + vb) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  r.p_value = t_two_tailed_p(r.statistic, r.df1);
  return r;
}

TestResult t_test_pooled(const std::vector<double>& a, const std::vector<double>& b) {
  check_groups(a, b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double df = na + nb - 2.0;
  const double sp2 = ((na - 1.0) * sample_variance(a) + (nb - 1.0) * sample_variance(b)) / df;
  const double diff = mean(a) - mean(b);
  if (sp2 == 0.0) return degenerate_t(TestKind::pooled_t, diff, df, "pooled variance");
  TestResult r;
  r.kind = TestKind::pooled_t;
  r.statistic = diff / std::sqrt(sp2 * (1.0 / na + 1.0 / nb));
  r.df1 = df;
  r.p_value = t_two_tailed_p(r.statistic, r.df1);
  return r;
}

TestResult rm_anova_oneway(const std::vector<std::vector<double>>& data, const AnovaOptions& options) {
  const std::size_t n = data.size();
  if (n < 2) throw Error(ErrorKind::domain, "repeated-measures ANOVA needs at least two participants");
  const std::size_t k = data[0].size();
  if (k < 2) throw Error(ErrorKind::domain, "repeated-measures ANOVA needs at least two conditions");
  for (const auto& row : data) {
    if (row.size() != k) throw Error(ErrorKind::domain, "ANOVA matrix is incomplete");
    check_finite(row);
  }

  std::vector<double> row_mean(n, 0.0), col_mean(k, 0.0);
  double grand = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      row_mean[i] += data[i][j];
      col_mean[j] += data[i][j];
      grand += data[i][j];
      sum_sq += data[i][j] * data[i][j];
    }
  }
  for (double& m : row_mean) m /= static_cast<double>(k);
  for (double& m : col_mean) m /= static_cast<double>(n);
  grand /= static_cast<double>(n * k);

  double ss_cond = 0.0;
  for (double m : col_mean) ss_cond += (m - grand) * (m - grand);
  ss_cond *= static_cast<double>(n);
  double ss_error = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double e = data[i][j] - row_mean[i] - col_mean[j] + grand;
      ss_error += e * e;
    }
  }

  TestResult r;
  r.kind = TestKind::rm_anova;
  r.df1 = static_cast<double>(k - 1);
  r.df2 = static_cast<double>((k - 1) * (n - 1));

  // Sums of squares below this are rounding residue of an exact zero.
  const double zero = 1e-24 * std::max(sum_sq, 1e-300);
  if (ss_error <= zero) {
    r.degenerate = true;
    if (ss_cond <= zero) {
      r.statistic = 0.0;
      r.p_value = 1.0;
      r.note = "zero error variance and no condition effect";
    } else {
      r.statistic = kInf;
      r.p_value = 0.0;
      r.note = "zero error variance with a condition effect; p is the limit";
    }
    return r;
  }
  r.statistic = (ss_cond / r.df1) / (ss_error / r.df2);

  if (options.greenhouse_geisser) {
    // Epsilon from the double-centered covariance matrix of the conditions.
    std::vector<std::vector<double>> cov(k, std::vector<double>(k, 0.0));
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += (data[i][a] - col_mean[a]) * (data[i][b] - col_mean[b]);
        cov[a][b] = s / static_cast<double>(n - 1);
      }
    }
    std::vector<double> cm(k, 0.0);
    double cg = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) cm[a] += cov[a][b];
      cm[a] /= static_cast<double>(k);
      cg += cm[a];
    }
    cg /= static_cast<double>(k);
    double trace = 0.0, frob = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        const double v = cov[a][b] - cm[a] - cm[b] + cg;
        frob += v * v;
        if (a == b) trace += v;
      }
    }
    const double lower = 1.0 / static_cast<double>(k - 1);
    r.epsilon = frob > 0.0 ? std::clamp(trace * trace / (static_cast<double>(k - 1) * frob), lower, 1.0) : 1.0;
    r.corrected = true;
    r.df1 *= r.epsilon;
    r.df2 *= r.epsilon;
  }
  r.p_value = f_upper_p(r.statistic, r.df1, r.df2);
  return r;
}

}  // namespace deadeye
