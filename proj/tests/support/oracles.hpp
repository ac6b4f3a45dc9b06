#pragma once

// Independent reference computations for the statistics tests: 50-digit
// arithmetic and Boost.Math distributions, written from the textbook
// definitions rather than from the library code under test.

#include <cmath>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using Big = boost::multiprecision::cpp_bin_float_50;

struct Ref {
  double statistic = 0.0;
  double df1 = 0.0;
  double df2 = 0.0;
  double p = 1.0;
};

inline Big big_mean(const std::vector<double>& v) {
  Big s = 0;
  for (double x : v) s += Big(x);
  return s / Big(v.size());
}

inline Big big_var(const std::vector<double>& v) {
  const Big m = big_mean(v);
  Big s = 0;
  for (double x : v) s += (Big(x) - m) * (Big(x) - m);
  return s / Big(v.size() - 1);
}

// P(|T| > |t|) = I_{df/(df+t^2)}(df/2, 1/2)
inline double t_p(const Big& t, const Big& df) {
  const Big x = df / (df + t * t);
  return static_cast<double>(boost::math::ibeta(df / 2, Big(0.5), x));
}

// P(F > f) = I_{d2/(d2+d1 f)}(d2/2, d1/2)
inline double f_p(const Big& f, const Big& d1, const Big& d2) {
  const Big x = d2 / (d2 + d1 * f);
  return static_cast<double>(boost::math::ibeta(d2 / 2, d1 / 2, x));
}

inline Ref paired(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d;
  Big sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += Big(a[i]) - Big(b[i]);
  const Big n = Big(a.size());
  const Big m = sum / n;
  Big ss = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Big e = Big(a[i]) - Big(b[i]) - m;
    ss += e * e;
  }
  const Big t = m / sqrt(ss / (n - 1) / n);
  return {static_cast<double>(t), static_cast<double>(n - 1), 0.0, t_p(t, n - 1)};
}

inline Ref welch(const std::vector<double>& a, const std::vector<double>& b) {
  const Big na = Big(a.size()), nb = Big(b.size());
  const Big va = big_var(a) / na, vb = big_var(b) / nb;
  const Big t = (big_mean(a) - big_mean(b)) / sqrt(va + vb);
  const Big df = (va + vb) * (va + vb) / (va * va / (na - 1) + vb * vb / (nb - 1));
  return {static_cast<double>(t), static_cast<double>(df), 0.0, t_p(t, df)};
}

inline Ref pooled(const std::vector<double>& a, const std::vector<double>& b) {
  const Big na = Big(a.size()), nb = Big(b.size());
  const Big sp2 = ((na - 1) * big_var(a) + (nb - 1) * big_var(b)) / (na + nb - 2);
  const Big t = (big_mean(a) - big_mean(b)) / sqrt(sp2 * (1 / na + 1 / nb));
  return {static_cast<double>(t), static_cast<double>(na + nb - 2), 0.0, t_p(t, na + nb - 2)};
}

// Brute-force sums of squares: SS_error = SS_total - SS_conditions - SS_subjects.
inline Ref rm_anova(const std::vector<std::vector<double>>& x) {
  const std::size_t n = x.size(), k = x[0].size();
  Big grand = 0;
  for (const auto& row : x) {
    for (double v : row) grand += Big(v);
  }
  grand /= Big(n * k);
  Big ss_total = 0, ss_cond = 0, ss_subj = 0;
  for (const auto& row : x) {
    for (double v : row) ss_total += (Big(v) - grand) * (Big(v) - grand);
  }
  for (std::size_t j = 0; j < k; ++j) {
    Big m = 0;
    for (std::size_t i = 0; i < n; ++i) m += Big(x[i][j]);
    m /= Big(n);
    ss_cond += Big(n) * (m - grand) * (m - grand);
  }
  for (std::size_t i = 0; i < n; ++i) {
    Big m = 0;
    for (double v : x[i]) m += Big(v);
    m /= Big(k);
    ss_subj += Big(k) * (m - grand) * (m - grand);
  }
  const Big ss_error = ss_total - ss_cond - ss_subj;
  const Big d1 = Big(k - 1), d2 = Big((k - 1) * (n - 1));
  const Big f = (ss_cond / d1) / (ss_error / d2);
  return {static_cast<double>(f), static_cast<double>(d1), static_cast<double>(d2), f_p(f, d1, d2)};
}

inline double rel_err(double got, double want) {
  if (got == want) return 0.0;
  return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

}  // namespace oracle
