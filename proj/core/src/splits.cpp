#include "ldfs/splits.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <nlohmann/json.hpp>

#include "ldfs/csv.hpp"
#include "ldfs/error.hpp"
#include "ldfs/rng.hpp"

namespace ldfs {

const char* split_scheme_name(SplitScheme s) noexcept {
  switch (s) {
    case SplitScheme::split_8020: return "split_8020";
    case SplitScheme::kfold_patient: return "kfold_patient";
    case SplitScheme::lopo: return "lopo";
  }
  return "?";
}

SplitScheme parse_split_scheme(const std::string& name) {
  const std::string v = csv::to_lower(csv::trim(name));
  if (v == "8020" || v == "split_8020" || v == "split8020" || v == "holdout") {
    return SplitScheme::split_8020;
  }
  if (v == "kfold" || v == "kfold_patient" || v == "k-fold") {
    return SplitScheme::kfold_patient;
  }
  if (v == "lopo" || v == "leave_one_patient_out") return SplitScheme::lopo;
  raise(errc::config_error, "unknown split scheme '" + name + "'");
}

namespace {

// Distinct patients in first-appearance order with their row indices.
std::vector<std::pair<std::string, std::vector<std::size_t>>> group_rows(
    std::span<const std::string> patient_ids) {
  std::vector<std::pair<std::string, std::vector<std::size_t>>> groups;
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < patient_ids.size(); ++i) {
    auto [it, inserted] = pos.emplace(patient_ids[i], groups.size());
    if (inserted) groups.push_back({patient_ids[i], {}});
    groups[it->second].second.push_back(i);
  }
  return groups;
}

FoldAssignment fold_from_test_groups(
    std::size_t n_rows,
    const std::vector<std::pair<std::string, std::vector<std::size_t>>>& groups,
    std::span<const std::size_t> test_group_idx) {
  std::vector<char> in_test(n_rows, 0);
  for (std::size_t g : test_group_idx) {
    for (std::size_t r : groups[g].second) in_test[r] = 1;
  }
  FoldAssignment fold;
  for (std::size_t r = 0; r < n_rows; ++r) {
    (in_test[r] ? fold.test : fold.train).push_back(r);
  }
  return fold;
}

}  // namespace

SplitPlan split_8020(std::size_t n_rows, std::uint64_t seed) {
  if (n_rows < 5) {
    raise(errc::too_few_rows,
          std::to_string(n_rows) + " rows; an 80:20 split needs at least 5");
  }
  std::vector<std::size_t> order(n_rows);
  for (std::size_t i = 0; i < n_rows; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);
  const std::size_t n_test = std::size_t(std::llround(0.2 * double(n_rows)));

  SplitPlan plan{SplitScheme::split_8020, seed, 0, {}};
  FoldAssignment fold;
  fold.test.assign(order.begin(), order.begin() + n_test);
  fold.train.assign(order.begin() + n_test, order.end());
  std::sort(fold.test.begin(), fold.test.end());
  std::sort(fold.train.begin(), fold.train.end());
  plan.folds.push_back(std::move(fold));
  return plan;
}

SplitPlan split_8020_patientwise(std::span<const std::string> patient_ids,
                                 std::uint64_t seed) {
  const auto groups = group_rows(patient_ids);
  if (groups.size() < 5) {
    raise(errc::too_few_patients, std::to_string(groups.size()) +
                                      " patients; patient-wise 80:20 needs 5");
  }
  std::vector<std::size_t> order(groups.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);
  const std::size_t n_test =
      std::size_t(std::llround(0.2 * double(groups.size())));

  SplitPlan plan{SplitScheme::split_8020, seed, 0, {}};
  plan.folds.push_back(fold_from_test_groups(
      patient_ids.size(), groups, {order.data(), std::max<std::size_t>(n_test, 1)}));
  return plan;
}

SplitPlan kfold_patientwise(std::span<const std::string> patient_ids, int k,
                            std::uint64_t seed) {
  if (k < 2) raise(errc::config_error, "k must be >= 2");
  const auto groups = group_rows(patient_ids);
  if (groups.size() < std::size_t(k)) {
    raise(errc::too_few_patients,
          std::to_string(groups.size()) + " distinct patients < k = " +
              std::to_string(k));
  }
  std::vector<std::size_t> order(groups.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);

  // Groups balanced within one patient: the first (p mod k) folds take
  // ceil(p/k) patients, the rest floor(p/k).
  const std::size_t p = groups.size();
  const std::size_t base = p / std::size_t(k);
  const std::size_t rem = p % std::size_t(k);

  SplitPlan plan{SplitScheme::kfold_patient, seed, k, {}};
  std::size_t offset = 0;
  for (int f = 0; f < k; ++f) {
    const std::size_t take = base + (std::size_t(f) < rem ? 1 : 0);
    plan.folds.push_back(fold_from_test_groups(
        patient_ids.size(), groups, {order.data() + offset, take}));
    offset += take;
  }
  return plan;
}

SplitPlan lopo(std::span<const std::string> patient_ids) {
  auto groups = group_rows(patient_ids);
  if (groups.size() < 2) {
    raise(errc::single_patient,
          "leave-one-patient-out needs at least 2 distinct patients");
  }
  std::sort(groups.begin(), groups.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SplitPlan plan{SplitScheme::lopo, 0, 0, {}};
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const std::size_t idx[] = {g};
    plan.folds.push_back(fold_from_test_groups(patient_ids.size(), groups, idx));
  }
  return plan;
}

std::string serialize_plan(const SplitPlan& plan) {
  nlohmann::json j;
  j["scheme"] = split_scheme_name(plan.scheme);
  j["seed"] = plan.seed;
  if (plan.scheme == SplitScheme::kfold_patient) j["k"] = plan.k;
  j["folds"] = nlohmann::json::array();
  for (const auto& f : plan.folds) {
    j["folds"].push_back({{"train", f.train}, {"test", f.test}});
  }
  return j.dump(2);
}

SplitPlan deserialize_plan(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    raise(errc::corrupt_payload, std::string("split plan: ") + e.what());
  }
  SplitPlan plan;
  plan.scheme = parse_split_scheme(j.at("scheme").get<std::string>());
  plan.seed = j.at("seed").get<std::uint64_t>();
  plan.k = j.value("k", 0);
  for (const auto& f : j.at("folds")) {
    FoldAssignment fold;
    fold.train = f.at("train").get<std::vector<std::size_t>>();
    fold.test = f.at("test").get<std::vector<std::size_t>>();
    plan.folds.push_back(std::move(fold));
  }
  return plan;
}

}  // namespace ldfs
