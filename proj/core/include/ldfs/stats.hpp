#pragma once

#include <span>
#include <string>
#include <vector>

#include "ldfs/das21.hpp"

namespace ldfs {

struct MannWhitneyResult {
  double u1 = 0.0;       // U statistic of sample a
  double u2 = 0.0;       // n1*n2 - u1
  double p_value = 1.0;  // two-sided
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  bool exact = false;    // exact enumeration vs normal approximation
};

// Rank-sum U with midrank ties. The p-value is exact (null-distribution
// enumeration) when n1+n2 <= 20 and there are no ties, otherwise the normal
// approximation with tie and continuity corrections. Throws EmptySample.
MannWhitneyResult mann_whitney_u(std::span<const double> sample_a,
                                 std::span<const double> sample_b);

struct GroupSummary {
  double mean = 0.0;
  double lo = 0.0;  // 2.5th percentile
  double hi = 0.0;  // 97.5th percentile
  std::size_t n = 0;
};

// Empirical central 95% interval, linear-interpolated percentiles.
// Throws EmptyGroup.
GroupSummary group_summary(std::span<const double> values);

// q in [0, 1]; sorted linear interpolation at rank (n-1) q.
double percentile(std::span<const double> values, double q);

struct GroupComparison {
  std::string feature;
  GroupSummary group_a;  // e.g. wellbeing
  GroupSummary group_b;  // e.g. non-wellbeing
  MannWhitneyResult test;
};

GroupComparison compare_groups(const std::string& feature,
                               std::span<const double> group_a,
                               std::span<const double> group_b);

struct ConditionPrevalence {
  double stress = 0.0;      // fraction of participants above Normal
  double anxiety = 0.0;
  double depression = 0.0;
  double any = 0.0;
  // Fraction of participants at each severity per condition, indexed
  // [condition][severity] with condition order stress, anxiety, depression.
  std::array<std::array<double, 5>, 3> severity_fraction{};
  std::size_t n_participants = 0;
};

// Participant-level prevalence from per-participant scores (one entry per
// participant; callers aggregate multi-session data first).
ConditionPrevalence prevalence_report(std::span<const DasScores> per_participant);

}  // namespace ldfs
