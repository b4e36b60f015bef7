#pragma once

#include <stdexcept>
#include <string>

namespace ldfs {

// Library-wide error codes. Each value corresponds to one failure mode of a
// public operation; messages carry the row/column/band context.
enum class errc {
  // tabular ingestion
  missing_column,
  bad_value,
  empty_file,
  unknown_feature_set,
  all_rows_dropped,
  // raw signals
  non_uniform_sampling,
  too_short,
  non_monotonic_time,
  // das-21
  invalid_item_value,
  // wavelet
  nyquist_violation,
  duration_too_short_for_band,
  band_not_covered,
  empty_coi,
  zero_mean_perfusion,
  aliased_component,
  // fluorescence
  zero_backscatter,
  // splits
  too_few_rows,
  too_few_patients,
  single_patient,
  // models
  degenerate_labels,
  shape_mismatch,
  non_finite_feature,
  schema_mismatch,
  not_a_tree_model,
  version_mismatch,
  corrupt_payload,
  // explanation
  missing_cover,
  too_many_features,
  // metrics
  single_class,
  no_positives,
  degenerate_classes,
  // statistics
  empty_sample,
  empty_group,
  // cli / orchestration
  config_error,
  data_error,
  partial_grid_failure,
  io_error,
};

const char* errc_name(errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace ldfs
