#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ued::stats {

// Survival functions via the regularized incomplete beta function.
double student_t_sf(double t, double dof);
double f_dist_sf(double f, double d1, double d2);

double mean(std::span<const double> values);
/// Sample variance (n - 1 denominator).
double sample_variance(std::span<const double> values);

/// 1-based ranks; ties get the average of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

/// Spearman rank correlation with average ranks on ties. Throws
/// UndefinedCorrelation when either series is constant, ArgumentError on a
/// length mismatch or fewer than two values.
double spearman(std::span<const double> a, std::span<const double> b);

struct TestResult {
  double statistic = 0.0;
  /// Two-sided.
  double p_value = 1.0;
  double dof = 0.0;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  double mean_a = 0.0;
  double mean_b = 0.0;
};

/// Unequal-variance two-sample t-test with Welch–Satterthwaite degrees of freedom.
TestResult welch_t_test(std::span<const double> a, std::span<const double> b);
/// Equal-variance (pooled) two-sample t-test.
TestResult pooled_t_test(std::span<const double> a, std::span<const double> b);

struct MultipleTestResult {
  std::vector<bool> reject;
  std::vector<double> adjusted;
};

/// Benjamini–Hochberg step-up procedure.
MultipleTestResult benjamini_hochberg(std::span<const double> p_values, double alpha);
MultipleTestResult bonferroni(std::span<const double> p_values, double alpha);

struct AnovaRow {
  double sum_of_squares = 0.0;
  double dof = 0.0;
  /// Absent for the residual row.
  std::optional<double> f;
  std::optional<double> p_value;
};

struct AnovaTable {
  AnovaRow factor_a;
  AnovaRow factor_b;
  AnovaRow interaction;
  AnovaRow residual;
  std::vector<std::string> levels_a;
  std::vector<std::string> levels_b;
};

/// Two-way ANOVA with interaction and Type II sums of squares, so unbalanced
/// designs do not depend on factor order. Every cell must be nonempty.
AnovaTable two_way_anova(std::span<const double> values, std::span<const std::string> factor_a,
                         std::span<const std::string> factor_b);

/// Quantile by linear interpolation between order statistics (position
/// p * (n - 1) in the sorted sample).
double quantile(std::span<const double> sorted, double p);

struct LabeledValue {
  std::string label;
  double value = 0.0;
};

struct OutlierReport {
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
  double low_fence = 0.0;
  double high_fence = 0.0;
  std::vector<LabeledValue> low_outliers;
  std::vector<LabeledValue> high_outliers;
};

inline constexpr double kWhiskerFactor = 1.5;

/// Box-plot rule: values strictly outside [q1 - 1.5 iqr, q3 + 1.5 iqr].
/// Needs at least four values.
OutlierReport iqr_outliers(std::span<const LabeledValue> values);

}  // namespace ued::stats
