#include "ldfs/error.hpp"

namespace ldfs {

const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::missing_column: return "MissingColumn";
    case errc::bad_value: return "BadValue";
    case errc::empty_file: return "EmptyFile";
    case errc::unknown_feature_set: return "UnknownFeatureSet";
    case errc::all_rows_dropped: return "AllRowsDropped";
    case errc::non_uniform_sampling: return "NonUniformSampling";
    case errc::too_short: return "TooShort";
    case errc::non_monotonic_time: return "NonMonotonicTime";
    case errc::invalid_item_value: return "InvalidItemValue";
    case errc::nyquist_violation: return "NyquistViolation";
    case errc::duration_too_short_for_band: return "DurationTooShortForBand";
    case errc::band_not_covered: return "BandNotCovered";
    case errc::empty_coi: return "EmptyCoi";
    case errc::zero_mean_perfusion: return "ZeroMeanPerfusion";
    case errc::aliased_component: return "AliasedComponent";
    case errc::zero_backscatter: return "ZeroBackscatter";
    case errc::too_few_rows: return "TooFewRows";
    case errc::too_few_patients: return "TooFewPatients";
    case errc::single_patient: return "SinglePatient";
    case errc::degenerate_labels: return "DegenerateLabels";
    case errc::shape_mismatch: return "ShapeMismatch";
    case errc::non_finite_feature: return "NonFiniteFeature";
    case errc::schema_mismatch: return "SchemaMismatch";
    case errc::not_a_tree_model: return "NotATreeModel";
    case errc::version_mismatch: return "VersionMismatch";
    case errc::corrupt_payload: return "CorruptPayload";
    case errc::missing_cover: return "MissingCover";
    case errc::too_many_features: return "TooManyFeatures";
    case errc::single_class: return "SingleClass";
    case errc::no_positives: return "NoPositives";
    case errc::degenerate_classes: return "DegenerateClasses";
    case errc::empty_sample: return "EmptySample";
    case errc::empty_group: return "EmptyGroup";
    case errc::config_error: return "ConfigError";
    case errc::data_error: return "DataError";
    case errc::partial_grid_failure: return "PartialGridFailure";
    case errc::io_error: return "IoError";
  }
  return "UnknownError";
}

}  // namespace ldfs
