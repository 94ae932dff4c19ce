#include "ued/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>
#include <boost/math/special_functions/beta.hpp>

#include "ued/error.hpp"

namespace ued::stats {

double student_t_sf(double t, double dof) {
  if (!(dof > 0.0)) throw ArgumentError("student_t_sf: degrees of freedom must be positive");
  if (std::isnan(t)) throw ArgumentError("student_t_sf: NaN statistic");
  if (t == 0.0) return 0.5;
  if (std::isinf(t)) return t > 0 ? 0.0 : 1.0;
  const double x = dof / (dof + t * t);
  // P(|T| > |t|) = I_x(dof/2, 1/2); for large |t| the complement route keeps precision.
  const double tail = 0.5 * boost::math::ibeta(dof / 2.0, 0.5, x);
  return t > 0 ? tail : 1.0 - tail;
}

double f_dist_sf(double f, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw ArgumentError("f_dist_sf: degrees of freedom must be positive");
  if (std::isnan(f)) throw ArgumentError("f_dist_sf: NaN statistic");
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  const double x = d2 / (d2 + d1 * f);
  return boost::math::ibeta(d2 / 2.0, d1 / 2.0, x);
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double sq = 0.0;
  for (double v : values) sq += (v - m) * (v - m);
  return sq / static_cast<double>(values.size() - 1);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ArgumentError("spearman: series lengths differ");
  if (a.size() < 2) throw ArgumentError("spearman: need at least two values");
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  // Average ranks always have mean (n + 1) / 2.
  const double center = 0.5 * static_cast<double>(a.size() + 1);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const double da = ra[i] - center;
    const double db = rb[i] - center;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) throw UndefinedCorrelation("spearman: constant series");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

namespace {

void check_group(std::span<const double> values, const char* name) {
  if (values.size() < 2) throw ArgumentError(std::string("t-test: group ") + name + " has fewer than 2 values");
}

TestResult finish(double diff, double se, double dof, std::span<const double> a, std::span<const double> b) {
  TestResult r;
  r.n_a = a.size();
  r.n_b = b.size();
  r.mean_a = mean(a);
  r.mean_b = mean(b);
  r.dof = dof;
  if (diff == 0.0) {
    r.statistic = 0.0;
    r.p_value = 1.0;
    return r;
  }
  r.statistic = diff / se;
  r.p_value = std::min(1.0, 2.0 * student_t_sf(std::fabs(r.statistic), dof));
  return r;
}

}  // namespace

TestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  check_group(a, "a");
  check_group(b, "b");
  const double va = sample_variance(a) / static_cast<double>(a.size());
  const double vb = sample_variance(b) / static_cast<double>(b.size());
  if (va == 0.0 && vb == 0.0) throw ArgumentError("t-test: both groups a and b have zero variance");
  const double se = std::sqrt(va + vb);
  const double dof = (va + vb) * (va + vb) /
                     (va * va / static_cast<double>(a.size() - 1) + vb * vb / static_cast<double>(b.size() - 1));
  return finish(mean(a) - mean(b), se, dof, a, b);
}

TestResult pooled_t_test(std::span<const double> a, std::span<const double> b) {
  check_group(a, "a");
  check_group(b, "b");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double dof = na + nb - 2.0;
  const double pooled = ((na - 1.0) * sample_variance(a) + (nb - 1.0) * sample_variance(b)) / dof;
  if (pooled == 0.0) throw ArgumentError("t-test: both groups a and b have zero variance");
  const double se = std::sqrt(pooled * (1.0 / na + 1.0 / nb));
  return finish(mean(a) - mean(b), se, dof, a, b);
}

MultipleTestResult benjamini_hochberg(std::span<const double> p_values, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("benjamini_hochberg: alpha must be in (0, 1)");
  const std::size_t m = p_values.size();
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("benjamini_hochberg: p-value outside [0, 1]");
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });

  MultipleTestResult out{std::vector<bool>(m, false), std::vector<double>(m, 1.0)};
  double running_min = 1.0;
  for (std::size_t k = m; k-- > 0;) {
    const std::size_t idx = order[k];
    const double scaled =
        std::max(p_values[idx], p_values[idx] * static_cast<double>(m) / static_cast<double>(k + 1));
    running_min = std::min(running_min, scaled);
    out.adjusted[idx] = std::min(1.0, running_min);
  }
  for (std::size_t i = 0; i < m; ++i) out.reject[i] = out.adjusted[i] <= alpha;
  return out;
}

MultipleTestResult bonferroni(std::span<const double> p_values, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("bonferroni: alpha must be in (0, 1)");
  const double m = static_cast<double>(p_values.size());
  MultipleTestResult out{std::vector<bool>(p_values.size()), std::vector<double>(p_values.size())};
  for (std::size_t i = 0; i < p_values.size(); ++i) {
    out.adjusted[i] = std::min(1.0, p_values[i] * m);
    out.reject[i] = out.adjusted[i] <= alpha;
  }
  return out;
}

namespace {

/// Residual sum of squares of the least-squares fit of `y` on `design`.
double residual_ss(const Eigen::MatrixXd& design, const Eigen::VectorXd& y) {
  const Eigen::VectorXd beta = design.colPivHouseholderQr().solve(y);
  return (y - design * beta).squaredNorm();
}

/// Sum of squared deviations from the group means.
double within_ss(std::span<const double> values, const std::vector<std::size_t>& group, std::size_t groups) {
  std::vector<double> sum(groups, 0.0);
  std::vector<double> count(groups, 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum[group[i]] += values[i];
    count[group[i]] += 1.0;
  }
  double ss = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - sum[group[i]] / count[group[i]];
    ss += d * d;
  }
  return ss;
}

std::vector<std::string> levels_of(std::span<const std::string> labels) {
  std::vector<std::string> levels(labels.begin(), labels.end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  return levels;
}

std::vector<std::size_t> index_of(std::span<const std::string> labels, const std::vector<std::string>& levels) {
  std::vector<std::size_t> idx;
  idx.reserve(labels.size());
  for (const auto& l : labels) {
    idx.push_back(static_cast<std::size_t>(std::lower_bound(levels.begin(), levels.end(), l) - levels.begin()));
  }
  return idx;
}

}  // namespace

AnovaTable two_way_anova(std::span<const double> values, std::span<const std::string> factor_a,
                         std::span<const std::string> factor_b) {
  const std::size_t n = values.size();
  if (factor_a.size() != n || factor_b.size() != n) throw ArgumentError("two_way_anova: label counts differ");

  AnovaTable table;
  table.levels_a = levels_of(factor_a);
  table.levels_b = levels_of(factor_b);
  const std::size_t la = table.levels_a.size();
  const std::size_t lb = table.levels_b.size();
  if (la < 2 || lb < 2) throw ArgumentError("two_way_anova: each factor needs at least 2 levels");

  const auto ia = index_of(factor_a, table.levels_a);
  const auto ib = index_of(factor_b, table.levels_b);
  std::vector<std::size_t> cell(n);
  std::vector<std::size_t> cell_count(la * lb, 0);
  for (std::size_t i = 0; i < n; ++i) {
    cell[i] = ia[i] * lb + ib[i];
    ++cell_count[cell[i]];
  }
  for (std::size_t a = 0; a < la; ++a) {
    for (std::size_t b = 0; b < lb; ++b) {
      if (cell_count[a * lb + b] == 0) {
        throw ArgumentError("two_way_anova: empty cell (" + table.levels_a[a] + ", " + table.levels_b[b] + ")");
      }
    }
  }
  const double dof_res = static_cast<double>(n) - static_cast<double>(la * lb);
  if (dof_res < 1.0) throw ArgumentError("two_way_anova: no residual degrees of freedom");

  // Additive model: intercept plus treatment-coded dummies for both factors.
  Eigen::MatrixXd additive(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(la + lb - 1));
  additive.setZero();
  Eigen::VectorXd y(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    y(row) = values[i];
    additive(row, 0) = 1.0;
    if (ia[i] > 0) additive(row, static_cast<Eigen::Index>(ia[i])) = 1.0;
    if (ib[i] > 0) additive(row, static_cast<Eigen::Index>(la - 1 + ib[i])) = 1.0;
  }

  const double rss_a = within_ss(values, ia, la);
  const double rss_b = within_ss(values, ib, lb);
  const double rss_ab = residual_ss(additive, y);
  const double rss_full = within_ss(values, cell, la * lb);

  const double ms_res = rss_full / dof_res;
  auto effect = [&](double ss, double dof) {
    AnovaRow row;
    row.sum_of_squares = std::max(0.0, ss);
    row.dof = dof;
    if (ms_res > 0.0) {
      row.f = (row.sum_of_squares / dof) / ms_res;
      row.p_value = f_dist_sf(*row.f, dof, dof_res);
    } else {
      row.f = row.sum_of_squares > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
      row.p_value = row.sum_of_squares > 0.0 ? 0.0 : 1.0;
    }
    return row;
  };
  // Relative noise below this is rounding in the least-squares solve.
  const double scale = 1e-12 * std::max(1.0, rss_a + rss_b);
  auto clean = [&](double ss) { return std::fabs(ss) < scale ? 0.0 : ss; };

  table.factor_a = effect(clean(rss_b - rss_ab), static_cast<double>(la - 1));
  table.factor_b = effect(clean(rss_a - rss_ab), static_cast<double>(lb - 1));
  table.interaction = effect(clean(rss_ab - rss_full), static_cast<double>((la - 1) * (lb - 1)));
  table.residual.sum_of_squares = rss_full;
  table.residual.dof = dof_res;
  return table;
}

double quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ArgumentError("quantile: empty sample");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

OutlierReport iqr_outliers(std::span<const LabeledValue> values) {
  if (values.size() < 4) throw ArgumentError("iqr_outliers: need at least 4 values");
  std::vector<double> sorted;
  sorted.reserve(values.size());
  for (const auto& v : values) sorted.push_back(v.value);
  std::sort(sorted.begin(), sorted.end());

  OutlierReport report;
  report.q1 = quantile(sorted, 0.25);
  report.q3 = quantile(sorted, 0.75);
  report.iqr = report.q3 - report.q1;
  report.low_fence = report.q1 - kWhiskerFactor * report.iqr;
  report.high_fence = report.q3 + kWhiskerFactor * report.iqr;
  for (const auto& v : values) {
    if (v.value < report.low_fence) report.low_outliers.push_back(v);
    if (v.value > report.high_fence) report.high_outliers.push_back(v);
  }
  return report;
}

}  // namespace ued::stats
