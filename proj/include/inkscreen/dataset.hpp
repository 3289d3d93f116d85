#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "inkscreen/features.hpp"
#include "inkscreen/learn/common.hpp"
#include "inkscreen/stroke_model.hpp"

namespace inkscreen::dataset {

struct LabelRow {
  std::string session_id;
  std::optional<Diagnosis> diagnosis;
  std::optional<int> mmse;
  std::optional<double> mtl_atrophy_z;
};

// session_id,diagnosis,mmse,mtl_atrophy_z; missing values are empty fields.
void write_labels_csv(std::ostream& out, std::span<const LabelRow> rows);
std::vector<LabelRow> read_labels_csv(std::istream& in);

// One row per session: session_id followed by the 190 registry columns.
struct FeatureTable {
  std::vector<std::string> ids;
  learn::Matrix values;  // NaN where missing
};

void write_features_csv(std::ostream& out, std::span<const features::SessionFeatureVector> rows);
void write_features_csv(std::ostream& out, const FeatureTable& table);
// Throws MalformedInput unless the header matches the registry exactly.
FeatureTable read_features_csv(std::istream& in);

enum class Target { Diagnosis, CnVsMci, CnVsDementia, MciVsDementia, Mmse, Mtl };

std::string_view target_name(Target t);
std::optional<Target> parse_target(std::string_view name);

struct LabeledData {
  std::vector<std::string> ids;
  learn::Matrix X;
  learn::Vector y;
  learn::Task task = learn::Task::Classification;
  int n_classes = 0;
};

// Joins features and labels by session id. Classes are encoded CN=0, MCI=1,
// DEMENTIA=2; binary targets encode the more impaired group as 1. Rows whose
// label is absent (or outside a binary pair) are dropped. Throws IdMismatch
// when the id sets of the two tables differ or contain duplicates.
LabeledData build_target(const FeatureTable& features, std::span<const LabelRow> labels, Target target);

// FNV-1a over ids and value bit patterns; recorded in trained bundles.
std::uint64_t fingerprint(const FeatureTable& table);

// RFC 4180 field splitting for one logical record; exposed for tests.
std::vector<std::string> split_csv_record(std::istream& in, bool& ok);
std::string csv_escape(std::string_view field);

}  // namespace inkscreen::dataset
