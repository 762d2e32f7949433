#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qcorr/channel.hpp"
#include "qcorr/recovery.hpp"

namespace qcorr {

using json = nlohmann::json;

// State files: {labels:[...], dims:[...], matrix:[[re,im],...]} row-major.
json state_to_json(const MultipartiteState& s);
MultipartiteState state_from_json(const json& j);
void write_state(const MultipartiteState& s, const std::string& path);
MultipartiteState read_state(const std::string& path);

// Channel files: {in_dims, out_dims, kraus:[matrix,...], kind,
// in_labels?, out_labels?}.
json channel_to_json(const QuantumChannel& ch);
QuantumChannel channel_from_json(const json& j);
void write_channel(const QuantumChannel& ch, const std::string& path);
QuantumChannel read_channel(const std::string& path);

json measure_record(const std::string& measure, const std::string& partition,
                    const MeasureValue& value, const json& bounds = {});

json recovery_report_to_json(const RecoveryReport& r);

/// Doubles formatted with round-trippable precision, for byte-stable CSV.
std::string format_double(double v);

struct CsvWriter {
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  std::string str() const { return buffer_; }
  void save(const std::string& path) const;

 private:
  std::string buffer_;
  std::size_t columns_;
};

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

/// Flat TOML subset: `key = value` lines with strings, numbers, booleans
/// and arrays of numbers/strings; '#' comments; sections flatten to
/// dotted keys. Enough for run configuration files.
json parse_toml_subset(const std::string& text);

}  // namespace qcorr
