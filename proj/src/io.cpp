#include "jumpest/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "jumpest/model_json.hpp"

namespace jumpest {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    if (!field.empty() && field.back() == '\r') field.pop_back();
    out.push_back(field);
  }
  if (!line.empty() && (line.back() == ',')) out.emplace_back();
  return out;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

double parse_real(const std::string& field, const fs::path& path, std::size_t line) {
  if (field.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != field.size())
    throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": not a number: '" + field + "'");
  return v;
}

bool looks_numeric(const std::string& field) {
  if (field.empty()) return false;
  char* end = nullptr;
  std::strtod(field.c_str(), &end);
  return end == field.c_str() + field.size();
}

std::ofstream open_for_write(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json summary_to_json(const ExperimentSummary& s) {
  json agg = json::object();
  for (const auto& [k, v] : s.aggregates) agg[k] = v;  // NaN is emitted as null
  return json{{"artifact_version", kArtifactVersion},
              {"config", config_to_json(s.config)},
              {"aggregates", agg},
              {"columns", s.per_replicate.columns},
              {"rows", s.per_replicate.rows.size()}};
}

void emit(const ExperimentSummary& s, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());

  const fs::path csv_path = out_dir / "replicates.csv";
  {
    auto out = open_for_write(csv_path);
    const auto& cols = s.per_replicate.columns;
    for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
    out << "\r\n";
    for (const auto& row : s.per_replicate.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_real(row[c]);
      out << "\r\n";
    }
    finish(out, csv_path);
  }

  const fs::path json_path = out_dir / "summary.json";
  {
    auto out = open_for_write(json_path);
    out << summary_to_json(s).dump(2) << '\n';
    finish(out, json_path);
  }
}

ResultTable read_replicates_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  ResultTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": missing header row");
  t.columns = split_fields(strip_cr(line));
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != t.columns.size())
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected " +
                               std::to_string(t.columns.size()) + " fields");
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_real(f, path, line_no));
    t.rows.push_back(std::move(row));
  }
  return t;
}

json path_metadata_json(const PathRecord& p, const ModelSpec& model) {
  return json{{"n", p.n},
              {"master_seed", p.master_seed},
              {"replicate_index", p.replicate_index},
              {"model", model_to_json(model)},
              {"jump_times", p.jump_times},
              {"marks", p.marks},
              {"grid_index", p.grid_index},
              {"frac", p.frac},
              {"x_pre", p.x_pre},
              {"x_post", p.x_post},
              {"jumps", p.jumps},
              {"w_before", p.w_before},
              {"w_after", p.w_after}};
}

void write_path(const PathRecord& p, const ModelSpec& model, const fs::path& csv_path) {
  if (csv_path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(csv_path.parent_path(), ec);
    if (ec) throw std::runtime_error("cannot create " + csv_path.parent_path().string() + ": " + ec.message());
  }
  {
    auto out = open_for_write(csv_path);
    out << "i,t,X\r\n";
    const double dn = static_cast<double>(p.n);
    for (std::size_t i = 0; i < p.obs.size(); ++i)
      out << i << ',' << format_real(static_cast<double>(i) / dn) << ',' << format_real(p.obs[i]) << "\r\n";
    finish(out, csv_path);
  }
  fs::path side = csv_path;
  side.replace_extension(".json");
  auto out = open_for_write(side);
  out << path_metadata_json(p, model).dump(2) << '\n';
  finish(out, side);
}

std::vector<double> read_observations_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<double> obs;
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> column;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (!column) {
      if (!looks_numeric(fields.back())) {  // header row
        column = fields.size() - 1;
        for (std::size_t c = 0; c < fields.size(); ++c)
          if (fields[c] == "X") column = c;
        continue;
      }
      column = fields.size() - 1;
    }
    if (*column >= fields.size())
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": missing column");
    obs.push_back(parse_real(fields[*column], path, line_no));
  }
  if (obs.empty()) throw std::runtime_error(path.string() + ": no observations");
  return obs;
}

json detection_to_json(const DetectionResult& det) {
  json j{{"n", det.n},
         {"threshold", det.threshold},
         {"detected_indices", det.detected_indices},
         {"k_hat", det.k_hat},
         {"j_hat", det.j_hat}};
  if (det.varpi > 0.0) {
    j["varpi"] = det.varpi;
    j["alpha"] = det.alpha;
  }
  return j;
}

}  // namespace jumpest
