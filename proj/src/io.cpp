#include "qcorr/io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qcorr {

namespace {

json matrix_to_json(const Mat& m) {
  json rows = json::array();
  for (long r = 0; r < m.rows(); ++r)
    for (long c = 0; c < m.cols(); ++c)
      rows.push_back({m(r, c).real(), m(r, c).imag()});
  return rows;
}

Mat matrix_from_json(const json& j, long rows, long cols) {
  if (static_cast<long>(j.size()) != rows * cols)
    throw layout_error("matrix: element count mismatch");
  Mat m(rows, cols);
  long i = 0;
  for (const auto& cell : j) {
    m(i / cols, i % cols) = cxd(cell.at(0).get<double>(),
                                cell.at(1).get<double>());
    ++i;
  }
  return m;
}

}  // namespace

json state_to_json(const MultipartiteState& s) {
  return {{"labels", s.layout().labels()},
          {"dims", s.layout().dims()},
          {"matrix", matrix_to_json(s.matrix())}};
}

MultipartiteState state_from_json(const json& j) {
  SubsystemLayout layout(j.at("labels").get<std::vector<std::string>>(),
                         j.at("dims").get<std::vector<int>>());
  const long d = layout.total_dim();
  return MultipartiteState(matrix_from_json(j.at("matrix"), d, d), layout);
}

void write_state(const MultipartiteState& s, const std::string& path) {
  write_text(path, state_to_json(s).dump(2) + "\n");
}

MultipartiteState read_state(const std::string& path) {
  return state_from_json(json::parse(read_text(path)));
}

json channel_to_json(const QuantumChannel& ch) {
  json kraus = json::array();
  for (const auto& k : ch.kraus()) kraus.push_back(matrix_to_json(k));
  return {{"in_dims", ch.in_layout().dims()},
          {"out_dims", ch.out_layout().dims()},
          {"in_labels", ch.in_layout().labels()},
          {"out_labels", ch.out_layout().labels()},
          {"kind", ch.kind() == ChannelKind::channel ? "channel" : "operation"},
          {"kraus", kraus}};
}

QuantumChannel channel_from_json(const json& j) {
  const auto in_dims = j.at("in_dims").get<std::vector<int>>();
  const auto out_dims = j.at("out_dims").get<std::vector<int>>();
  std::vector<std::string> in_labels, out_labels;
  if (j.contains("in_labels"))
    in_labels = j.at("in_labels").get<std::vector<std::string>>();
  else
    for (std::size_t i = 0; i < in_dims.size(); ++i)
      in_labels.push_back("A" + std::to_string(i));
  if (j.contains("out_labels"))
    out_labels = j.at("out_labels").get<std::vector<std::string>>();
  else
    for (std::size_t i = 0; i < out_dims.size(); ++i)
      out_labels.push_back("B" + std::to_string(i));
  SubsystemLayout in(in_labels, in_dims);
  SubsystemLayout out(out_labels, out_dims);

  std::vector<Mat> kraus;
  for (const auto& k : j.at("kraus"))
    kraus.push_back(matrix_from_json(k, out.total_dim(), in.total_dim()));
  const bool is_op =
      j.contains("kind") && j.at("kind").get<std::string>() == "operation";
  return is_op ? QuantumChannel::operation(std::move(kraus), in, out)
               : QuantumChannel::channel(std::move(kraus), in, out);
}

void write_channel(const QuantumChannel& ch, const std::string& path) {
  write_text(path, channel_to_json(ch).dump(2) + "\n");
}

QuantumChannel read_channel(const std::string& path) {
  return channel_from_json(json::parse(read_text(path)));
}

json measure_record(const std::string& measure, const std::string& partition,
                    const MeasureValue& value, const json& bounds) {
  json rec = {{"measure", measure},
              {"partition", partition},
              {"value_nats", value.is_infinite() ? json("inf")
                                                 : json(value.value)},
              {"formula_tag", value.formula_tag}};
  if (!bounds.is_null() && !bounds.empty()) rec["bounds"] = bounds;
  return rec;
}

json recovery_report_to_json(const RecoveryReport& r) {
  return {{"channel", channel_to_json(r.channel)},
          {"fidelity", r.fidelity},
          {"cmi", r.cmi},
          {"fr_lhs", r.fr_lhs},
          {"marginal_residual_B", r.marginal_residual_b},
          {"marginal_residual_C", r.marginal_residual_c},
          {"pass", r.pass},
          {"ascent_restarts_used", r.ascent_restarts_used}};
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header)
    : columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += header[i];
  }
  buffer_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw layout_error("csv: column count mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += cells[i];
  }
  buffer_ += '\n';
}

void CsvWriter::save(const std::string& path) const {
  write_text(path, buffer_);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::string strip(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

json toml_scalar(const std::string& raw) {
  const std::string v = strip(raw);
  if (v.empty()) throw std::runtime_error("toml: empty value");
  if (v.front() == '"' && v.back() == '"' && v.size() >= 2)
    return v.substr(1, v.size() - 2);
  if (v == "true") return true;
  if (v == "false") return false;
  if (v.find_first_of(".eE") != std::string::npos ||
      v.find("inf") != std::string::npos) {
    return std::stod(v);
  }
  try {
    std::size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (pos == v.size()) return i;
  } catch (...) {
  }
  return std::stod(v);
}

}  // namespace

json parse_toml_subset(const std::string& text) {
  json out = json::object();
  std::istringstream in(text);
  std::string line, section;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = strip(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = strip(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("toml: expected key = value: " + line);
    std::string key = strip(line.substr(0, eq));
    if (!section.empty()) key = section + "." + key;
    const std::string value = strip(line.substr(eq + 1));
    if (!value.empty() && value.front() == '[') {
      if (value.back() != ']') throw std::runtime_error("toml: bad array");
      json arr = json::array();
      std::string body = value.substr(1, value.size() - 2);
      std::istringstream items(body);
      std::string item;
      while (std::getline(items, item, ',')) {
        if (!strip(item).empty()) arr.push_back(toml_scalar(item));
      }
      out[key] = arr;
    } else {
      out[key] = toml_scalar(value);
    }
  }
  return out;
}

}  // namespace qcorr
