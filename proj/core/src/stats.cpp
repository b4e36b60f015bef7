#include "ldfs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "ldfs/error.hpp"

namespace ldfs {

namespace {

// Midranks of the combined sample; returns (rank sum of a, tie term
// sum(t^3 - t) over tie groups).
std::pair<double, double> rank_sum_a(std::span<const double> a,
                                     std::span<const double> b) {
  struct Obs {
    double v;
    int group;
  };
  std::vector<Obs> all;
  all.reserve(a.size() + b.size());
  for (double v : a) all.push_back({v, 0});
  for (double v : b) all.push_back({v, 1});
  std::sort(all.begin(), all.end(),
            [](const Obs& x, const Obs& y) { return x.v < y.v; });

  double r1 = 0.0;
  double tie_term = 0.0;
  std::size_t i = 0;
  const std::size_t n = all.size();
  while (i < n) {
    std::size_t j = i;
    while (j < n && all[j].v == all[i].v) ++j;
    const double midrank = 0.5 * double(i + 1 + j);
    const double t = double(j - i);
    if (t > 1) tie_term += t * t * t - t;
    for (std::size_t k = i; k < j; ++k) {
      if (all[k].group == 0) r1 += midrank;
    }
    i = j;
  }
  return {r1, tie_term};
}

// Null distribution of U for sample sizes (n1, n2) without ties:
// counts[u] = number of arrangements with statistic u, u in 0..n1*n2.
// Recurrence c(i, j, u) = c(i-1, j, u-j) + c(i, j-1, u).
std::vector<unsigned long long> u_null_counts(std::size_t n1, std::size_t n2) {
  const std::size_t umax = n1 * n2;
  std::vector<std::vector<unsigned long long>> dp(
      n2 + 1, std::vector<unsigned long long>(umax + 1, 0));
  for (std::size_t j = 0; j <= n2; ++j) dp[j][0] = 1;  // i = 0
  for (std::size_t i = 1; i <= n1; ++i) {
    std::vector<std::vector<unsigned long long>> next(
        n2 + 1, std::vector<unsigned long long>(umax + 1, 0));
    next[0][0] = 1;
    for (std::size_t j = 1; j <= n2; ++j) {
      for (std::size_t u = 0; u <= i * j; ++u) {
        unsigned long long c = next[j - 1][u];  // c(i, j-1, u)
        if (u >= j) c += dp[j][u - j];          // c(i-1, j, u-j)
        next[j][u] = c;
      }
    }
    dp = std::move(next);
  }
  return dp[n2];
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

MannWhitneyResult mann_whitney_u(std::span<const double> sample_a,
                                 std::span<const double> sample_b) {
  if (sample_a.empty() || sample_b.empty()) {
    raise(errc::empty_sample, "both samples must be non-empty");
  }
  const std::size_t n1 = sample_a.size();
  const std::size_t n2 = sample_b.size();
  const auto [r1, tie_term] = rank_sum_a(sample_a, sample_b);

  MannWhitneyResult out;
  out.n1 = n1;
  out.n2 = n2;
  out.u1 = r1 - double(n1) * double(n1 + 1) / 2.0;
  out.u2 = double(n1) * double(n2) - out.u1;

  const bool has_ties = tie_term > 0.0;
  if (!has_ties && n1 + n2 <= 20) {
    // Exact two-sided p over the null distribution; U is symmetric about
    // n1 n2 / 2 so p = 2 P(U <= min(u1, u2)), clamped at 1.
    const auto counts = u_null_counts(n1, n2);
    unsigned long long total = 0;
    for (auto c : counts) total += c;
    const auto u_small =
        std::size_t(std::llround(std::min(out.u1, out.u2)));
    unsigned long long cum = 0;
    for (std::size_t u = 0; u <= u_small && u < counts.size(); ++u) {
      cum += counts[u];
    }
    out.p_value = std::min(1.0, 2.0 * double(cum) / double(total));
    out.exact = true;
    return out;
  }

  // Normal approximation: mean n1 n2 / 2, tie-corrected variance, continuity
  // correction of 0.5 toward the mean.
  const double nn = double(n1 + n2);
  const double mu = double(n1) * double(n2) / 2.0;
  const double var = double(n1) * double(n2) / 12.0 *
                     ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
  if (var <= 0.0) {
    out.p_value = 1.0;  // fully tied samples carry no evidence
    return out;
  }
  const double z = std::max(0.0, std::abs(out.u1 - mu) - 0.5) / std::sqrt(var);
  out.p_value = std::min(1.0, 2.0 * normal_sf(z));
  if (out.p_value <= 0.0) out.p_value = std::numeric_limits<double>::min();
  return out;
}

double percentile(std::span<const double> values, double q) {
  if (values.empty()) raise(errc::empty_group, "percentile of empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = double(sorted.size() - 1) * q;
  const std::size_t lo = std::size_t(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - double(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

GroupSummary group_summary(std::span<const double> values) {
  if (values.empty()) raise(errc::empty_group, "summary of empty group");
  GroupSummary out;
  out.n = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / double(values.size());
  out.lo = percentile(values, 0.025);
  out.hi = percentile(values, 0.975);
  return out;
}

GroupComparison compare_groups(const std::string& feature,
                               std::span<const double> group_a,
                               std::span<const double> group_b) {
  GroupComparison out;
  out.feature = feature;
  out.group_a = group_summary(group_a);
  out.group_b = group_summary(group_b);
  out.test = mann_whitney_u(group_a, group_b);
  return out;
}

ConditionPrevalence prevalence_report(
    std::span<const DasScores> per_participant) {
  ConditionPrevalence out;
  out.n_participants = per_participant.size();
  if (per_participant.empty()) return out;
  const double n = double(per_participant.size());
  for (const auto& s : per_participant) {
    if (s.stress_level != Severity::normal) out.stress += 1.0;
    if (s.anxiety_level != Severity::normal) out.anxiety += 1.0;
    if (s.depression_level != Severity::normal) out.depression += 1.0;
    if (s.any_abnormal()) out.any += 1.0;
    out.severity_fraction[0][int(s.stress_level)] += 1.0;
    out.severity_fraction[1][int(s.anxiety_level)] += 1.0;
    out.severity_fraction[2][int(s.depression_level)] += 1.0;
  }
  out.stress /= n;
  out.anxiety /= n;
  out.depression /= n;
  out.any /= n;
  for (auto& cond : out.severity_fraction) {
    for (auto& f : cond) f /= n;
  }
  return out;
}

}  // namespace ldfs
