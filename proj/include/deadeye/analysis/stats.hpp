#pragma once

#include <string>
#include <vector>

namespace deadeye {

/// Regularized incomplete beta I_x(a, b). `y` must equal 1 - x; passing it
/// separately keeps precision when x is close to 1.
double incomplete_beta(double a, double b, double x, double y);
double incomplete_beta(double a, double b, double x);

/// Two-tailed p of Student's t.
double t_two_tailed_p(double t, double df);
/// Upper-tail p of the F distribution.
double f_upper_p(double f, double df1, double df2);

struct Descriptive {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample (n - 1); 0 for a single value
};

/// Throws a domain error on empty input.
Descriptive describe(const std::vector<double>& values);

enum class TestKind { paired_t, welch_t, pooled_t, rm_anova };

const char* to_string(TestKind kind);

struct TestResult {
  TestKind kind = TestKind::paired_t;
  double statistic = 0.0;
  double df1 = 0.0;
  double df2 = 0.0;  // F tests only
  double p_value = 1.0;
  /// Zero error variance: the statistic is 0 with p = 1 when the effect is
  /// also zero, otherwise +-infinity with p = 0.
  bool degenerate = false;
  /// Sphericity correction applied (rm_anova); epsilon is 1 otherwise.
  bool corrected = false;
  double epsilon = 1.0;
  std::string note;
};

/// Paired t on a - b. Throws a domain error on unequal lengths or n < 2.
TestResult t_test_paired(const std::vector<double>& a, const std::vector<double>& b);
/// Welch's unequal-variance t with Welch-Satterthwaite df.
TestResult t_test_welch(const std::vector<double>& a, const std::vector<double>& b);
/// Student's pooled-variance t.
TestResult t_test_pooled(const std::vector<double>& a, const std::vector<double>& b);

struct AnovaOptions {
  bool greenhouse_geisser = false;
};

/// One-way repeated-measures ANOVA over a participants x conditions matrix.
/// df = (k - 1, (k - 1)(n - 1)), scaled by the Greenhouse-Geisser epsilon
/// when requested.
TestResult rm_anova_oneway(const std::vector<std::vector<double>>& data, const AnovaOptions& options = {});

}  // namespace deadeye
