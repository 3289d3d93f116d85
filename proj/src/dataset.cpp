#include "inkscreen/dataset.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <unordered_map>

#include "inkscreen/error.hpp"

namespace inkscreen::dataset {

namespace {

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

std::optional<double> parse_double(const std::string& field, const char* what) {
  if (field.empty()) return std::nullopt;
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::MalformedInput, std::string("bad ") + what + " value '" + field + "'");
  }
  return v;
}

void write_record(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_escape(fields[i]);
  }
  out << "\r\n";
}

bool blank(const std::vector<std::string>& record) {
  return record.size() == 1 && record[0].empty();
}

}  // namespace

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_csv_record(std::istream& in, bool& ok) {
  std::vector<std::string> fields(1);
  ok = false;
  bool quoted = false;
  bool any = false;
  for (int ch; (ch = in.get()) != std::char_traits<char>::eof();) {
    any = true;
    const char c = static_cast<char>(ch);
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get();
          fields.back() += '"';
        } else {
          quoted = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c == '\n') {
      ok = true;
      return fields;
    } else if (c == '\r') {
      if (in.peek() == '\n') in.get();
      ok = true;
      return fields;
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw Error(ErrorCode::MalformedInput, "unterminated quoted CSV field");
  ok = any;
  return fields;
}

void write_labels_csv(std::ostream& out, std::span<const LabelRow> rows) {
  write_record(out, {"session_id", "diagnosis", "mmse", "mtl_atrophy_z"});
  for (const LabelRow& r : rows) {
    write_record(out, {r.session_id, r.diagnosis ? std::string(diagnosis_name(*r.diagnosis)) : "",
                       r.mmse ? std::to_string(*r.mmse) : "",
                       r.mtl_atrophy_z ? format_double(*r.mtl_atrophy_z) : ""});
  }
}

std::vector<LabelRow> read_labels_csv(std::istream& in) {
  bool ok = false;
  const auto header = split_csv_record(in, ok);
  if (!ok) throw Error(ErrorCode::MalformedInput, "labels CSV is empty");
  std::unordered_map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* name : {"session_id", "diagnosis", "mmse", "mtl_atrophy_z"}) {
    if (!col.contains(name)) {
      throw Error(ErrorCode::MalformedInput, std::string("labels CSV lacks column '") + name + "'");
    }
  }
  std::vector<LabelRow> rows;
  for (std::size_t line = 2;; ++line) {
    const auto rec = split_csv_record(in, ok);
    if (!ok) break;
    if (blank(rec)) continue;
    if (rec.size() != header.size()) {
      throw Error(ErrorCode::MalformedInput, "labels CSV line " + std::to_string(line) + ": wrong field count");
    }
    LabelRow r;
    r.session_id = rec[col["session_id"]];
    if (const std::string& d = rec[col["diagnosis"]]; !d.empty()) {
      r.diagnosis = parse_diagnosis(d);
      if (!r.diagnosis) throw Error(ErrorCode::MalformedInput, "unknown diagnosis '" + d + "'");
    }
    if (const auto m = parse_double(rec[col["mmse"]], "mmse")) {
      if (*m != std::floor(*m) || *m < 0.0 || *m > 30.0) {
        throw Error(ErrorCode::RangeViolation, "mmse must be an integer in [0,30]");
      }
      r.mmse = static_cast<int>(*m);
    }
    r.mtl_atrophy_z = parse_double(rec[col["mtl_atrophy_z"]], "mtl_atrophy_z");
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_features_csv(std::ostream& out, std::span<const features::SessionFeatureVector> rows) {
  std::vector<std::string> header{"session_id"};
  for (const std::string& c : features::session_column_names()) header.push_back(c);
  write_record(out, header);
  for (const auto& row : rows) {
    std::vector<std::string> rec{row.session_id};
    for (Eigen::Index j = 0; j < row.values.size(); ++j) {
      rec.push_back(row.missing[static_cast<std::size_t>(j)] ? "" : format_double(row.values(j)));
    }
    write_record(out, rec);
  }
}

void write_features_csv(std::ostream& out, const FeatureTable& table) {
  std::vector<features::SessionFeatureVector> rows;
  for (std::size_t i = 0; i < table.ids.size(); ++i) {
    features::SessionFeatureVector v;
    v.session_id = table.ids[i];
    v.values = table.values.row(static_cast<Eigen::Index>(i)).transpose();
    for (Eigen::Index j = 0; j < v.values.size(); ++j) v.missing.push_back(std::isnan(v.values(j)));
    rows.push_back(std::move(v));
  }
  write_features_csv(out, rows);
}

FeatureTable read_features_csv(std::istream& in) {
  bool ok = false;
  const auto header = split_csv_record(in, ok);
  const auto columns = features::session_column_names();
  if (!ok || header.size() != columns.size() + 1 || header[0] != "session_id" ||
      !std::equal(columns.begin(), columns.end(), header.begin() + 1)) {
    throw Error(ErrorCode::MalformedInput, "features CSV header does not match the feature registry");
  }
  std::vector<std::vector<double>> data;
  FeatureTable t;
  for (std::size_t line = 2;; ++line) {
    const auto rec = split_csv_record(in, ok);
    if (!ok) break;
    if (blank(rec)) continue;
    if (rec.size() != header.size()) {
      throw Error(ErrorCode::MalformedInput, "features CSV line " + std::to_string(line) + ": wrong field count");
    }
    t.ids.push_back(rec[0]);
    std::vector<double> row;
    for (std::size_t j = 1; j < rec.size(); ++j) {
      row.push_back(parse_double(rec[j], "feature").value_or(std::numeric_limits<double>::quiet_NaN()));
    }
    data.push_back(std::move(row));
  }
  t.values.resize(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      t.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = data[i][j];
    }
  }
  return t;
}

namespace {
constexpr std::array<std::string_view, 6> kTargetNames = {
    "diagnosis", "cn_vs_mci", "cn_vs_dementia", "mci_vs_dementia", "mmse", "mtl"};
}

std::string_view target_name(Target t) { return kTargetNames[static_cast<std::size_t>(t)]; }

std::optional<Target> parse_target(std::string_view name) {
  for (std::size_t i = 0; i < kTargetNames.size(); ++i) {
    if (kTargetNames[i] == name) return static_cast<Target>(i);
  }
  return std::nullopt;
}

LabeledData build_target(const FeatureTable& features, std::span<const LabelRow> labels, Target target) {
  std::unordered_map<std::string, const LabelRow*> by_id;
  for (const LabelRow& r : labels) {
    if (!by_id.emplace(r.session_id, &r).second) {
      throw Error(ErrorCode::IdMismatch, "duplicate label id '" + r.session_id + "'");
    }
  }
  std::set<std::string> feature_ids;
  for (const std::string& id : features.ids) {
    if (!feature_ids.insert(id).second) throw Error(ErrorCode::IdMismatch, "duplicate feature id '" + id + "'");
    if (!by_id.contains(id)) throw Error(ErrorCode::IdMismatch, "no label row for session '" + id + "'");
  }
  for (const LabelRow& r : labels) {
    if (!feature_ids.contains(r.session_id)) {
      throw Error(ErrorCode::IdMismatch, "no feature row for session '" + r.session_id + "'");
    }
  }

  LabeledData out;
  out.task = (target == Target::Mmse || target == Target::Mtl) ? learn::Task::Regression
                                                                : learn::Task::Classification;
  out.n_classes = target == Target::Diagnosis ? 3 : (out.task == learn::Task::Classification ? 2 : 0);
  std::vector<Eigen::Index> rows;
  std::vector<double> y;
  for (std::size_t i = 0; i < features.ids.size(); ++i) {
    const LabelRow& r = *by_id.at(features.ids[i]);
    std::optional<double> value;
    switch (target) {
      case Target::Diagnosis:
        if (r.diagnosis) value = static_cast<double>(*r.diagnosis);
        break;
      case Target::CnVsMci:
      case Target::CnVsDementia:
      case Target::MciVsDementia: {
        if (!r.diagnosis) break;
        const Diagnosis neg = target == Target::MciVsDementia ? Diagnosis::MCI : Diagnosis::CN;
        const Diagnosis pos = target == Target::CnVsMci ? Diagnosis::MCI : Diagnosis::Dementia;
        if (*r.diagnosis == neg) value = 0.0;
        if (*r.diagnosis == pos) value = 1.0;
        break;
      }
      case Target::Mmse:
        if (r.mmse) value = *r.mmse;
        break;
      case Target::Mtl:
        value = r.mtl_atrophy_z;
        break;
    }
    if (!value) continue;
    rows.push_back(static_cast<Eigen::Index>(i));
    y.push_back(*value);
    out.ids.push_back(features.ids[i]);
  }
  out.X = learn::select_rows(features.values, rows);
  out.y = Eigen::Map<const learn::Vector>(y.data(), static_cast<Eigen::Index>(y.size()));
  return out;
}

std::uint64_t fingerprint(const FeatureTable& table) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (std::size_t i = 0; i < table.ids.size(); ++i) {
    mix(table.ids[i].data(), table.ids[i].size() + 0);
    mix("\0", 1);
    for (Eigen::Index j = 0; j < table.values.cols(); ++j) {
      const double v = table.values(static_cast<Eigen::Index>(i), j);
      std::uint64_t bits = 0;
      if (!std::isnan(v)) std::memcpy(&bits, &v, sizeof bits);
      else bits = 0x7ff8000000000000ULL;
      mix(&bits, sizeof bits);
    }
  }
  return h;
}

}  // namespace inkscreen::dataset
