#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ldfs {

enum class SplitScheme { split_8020, kfold_patient, lopo };

const char* split_scheme_name(SplitScheme s) noexcept;
SplitScheme parse_split_scheme(const std::string& name);

struct FoldAssignment {
  std::vector<std::size_t> train;  // row indices, ascending
  std::vector<std::size_t> test;
};

struct SplitPlan {
  SplitScheme scheme = SplitScheme::split_8020;
  std::uint64_t seed = 0;
  int k = 0;  // kfold only
  std::vector<FoldAssignment> folds;
};

// Row-wise shuffled 80:20 split (one fold, test size = round(0.2 n)).
// Throws TooFewRows when n < 5.
SplitPlan split_8020(std::size_t n_rows, std::uint64_t seed);

// Patient-wise 80:20: patients are shuffled and ~20% of them form the test
// side, keeping each patient's rows together.
SplitPlan split_8020_patientwise(std::span<const std::string> patient_ids,
                                 std::uint64_t seed);

// Patients (not rows) shuffled and partitioned into k groups balanced within
// one patient; fold i tests every row of group i. Throws TooFewPatients.
SplitPlan kfold_patientwise(std::span<const std::string> patient_ids, int k,
                            std::uint64_t seed);

// One fold per distinct patient (sorted order); the fold tests all of that
// patient's rows. Throws SinglePatient.
SplitPlan lopo(std::span<const std::string> patient_ids);

// Audit serialization: {scheme, seed, folds: [{train, test}]}.
std::string serialize_plan(const SplitPlan& plan);
SplitPlan deserialize_plan(const std::string& text);

}  // namespace ldfs
