#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "auditkit/numerics.hpp"

namespace auditkit {

enum class FeatureKind { continuous, categorical };

struct TargetRule {
    enum class Direction { greater, less };
    double threshold = 0.0;
    Direction direction = Direction::greater;
};

struct FeatureSchema {
    std::vector<std::string> feature_names;
    std::vector<FeatureKind> feature_kinds;  // parallel to feature_names
    std::string target_column;
    TargetRule target_rule;
    std::optional<std::string> group_column;
    std::optional<std::string> sensitive_column;
    std::string sensitive_privileged_value;  // meaningful when sensitive_column is set

    FeatureKind kind_of(std::size_t feature_index) const {
        return feature_index < feature_kinds.size() ? feature_kinds[feature_index]
                                                    : FeatureKind::continuous;
    }
};

// Immutable tabular dataset after ingestion: label-encoded categoricals,
// binarized target, optional group labels and privileged-member indicator.
struct Dataset {
    FeatureSchema schema;
    Matrix X;                                  // one column per schema feature
    std::vector<int> y;                        // {0,1}
    std::optional<std::vector<int>> groups;    // encoded group label per row
    std::vector<std::string> group_names;      // encoded label -> original value
    std::optional<std::vector<int>> sensitive; // 1 = privileged
    std::map<std::string, std::map<std::string, int>> category_maps;  // feature -> value -> code
    std::size_t dropped_rows = 0;

    std::size_t n() const { return X.rows; }
    std::size_t n_features() const { return X.cols; }
    int group_count() const { return static_cast<int>(group_names.size()); }
};

struct TrainTestSplit {
    Dataset train;
    Dataset test;
    std::uint64_t seed = 0;
    double test_fraction = 0.0;
    std::vector<std::size_t> train_indices;  // row indices into the source dataset
    std::vector<std::size_t> test_indices;
};

struct FeatureStats {
    double mean = 0.0;
    double std_dev = 0.0;  // population
    double min = 0.0;
    double max = 0.0;
    double mad = 0.0;  // mean absolute deviation from the median
};

Dataset load_csv(const std::string& path, const FeatureSchema& schema);

// Deterministic split, stratified by group label when groups exist. Test size
// is round(n * test_fraction), apportioned across groups by largest remainder.
TrainTestSplit split(const Dataset& d, double test_fraction, std::uint64_t seed);

std::vector<FeatureStats> feature_stats(const Dataset& d);

// Restrict a dataset to the given rows (used by split and per-group slicing).
Dataset take_rows(const Dataset& d, const std::vector<std::size_t>& rows);

double median(std::vector<double> values);

}  // namespace auditkit
