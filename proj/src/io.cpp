#include "wcs/io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace wcs::io {
namespace {

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field, const std::string& what) {
  const std::string t = trim(field);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.empty() || used != t.size()) {
    throw FormatError(what + ": not a number: '" + t + "'");
  }
  return v;
}

// Splits one CSV line, honoring double-quoted fields with "" escapes.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        fields.back() += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  return fields;
}

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

template <typename T>
T get_field(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(what + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw FormatError(what + ": bad field '" + key + "': " + e.what());
  }
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw FormatError(what + ": expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Matrix();
  if (!j[0].is_array()) throw FormatError(what + ": expected an array of rows");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw FormatError(what + ": ragged matrix at row " + std::to_string(i));
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      if (!row[k].is_number()) {
        throw FormatError(what + ": non-numeric entry at row " +
                          std::to_string(i));
      }
      m(i, k) = row[k].get<double>();
    }
  }
  return m;
}

Json graph_to_json(const WeightedGraph& g) {
  Json j;
  j["size"] = g.size();
  j["labels"] = g.has_labels() ? matrix_to_json(g.labels()) : Json(nullptr);
  j["adjacency"] = matrix_to_json(g.adjacency());
  return j;
}

WeightedGraph graph_from_json(const Json& j) {
  const int size = get_field<int>(j, "size", "graph");
  if (!j.contains("adjacency")) throw FormatError("graph: missing adjacency");
  Matrix adjacency = matrix_from_json(j.at("adjacency"), "graph adjacency");
  if (adjacency.rows() != size || adjacency.cols() != size) {
    throw FormatError("graph: adjacency is not size x size");
  }
  Matrix labels;
  if (j.contains("labels") && !j.at("labels").is_null()) {
    labels = matrix_from_json(j.at("labels"), "graph labels");
    if (labels.rows() != size) {
      throw FormatError("graph: expected one label per vertex");
    }
  }
  try {
    return WeightedGraph(std::move(adjacency), std::move(labels));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("graph: ") + e.what());
  }
}

void write_graph(const std::filesystem::path& path, const WeightedGraph& g) {
  write_json_file(path, graph_to_json(g));
}

WeightedGraph read_graph(const std::filesystem::path& path) {
  try {
    return graph_from_json(read_json_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_matrix_csv(std::ostream& out, const Matrix& m) {
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
}

Matrix read_matrix_csv(std::istream& in, const std::string& what) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<double> row;
    for (const std::string& f : split_csv(line)) {
      row.push_back(parse_double(f, what));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw FormatError(what + ": ragged row " + std::to_string(rows.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError(what + ": empty matrix");
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void write_cost_csv(const std::filesystem::path& path, const CostMatrix& c) {
  auto out = open_out(path);
  write_matrix_csv(out, c.entries());
}

CostMatrix read_cost_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  Matrix m = read_matrix_csv(in, path.string());
  try {
    return CostMatrix(std::move(m));
  } catch (const std::invalid_argument& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

Json permutation_to_json(const PartialPermutation& p) {
  Json pairs = Json::array();
  for (const auto& [i, j] : p.pairs()) pairs.push_back({i, j});
  return {{"L", p.target_size()}, {"M", p.rows()}, {"N", p.cols()},
          {"pairs", std::move(pairs)}};
}

PartialPermutation permutation_from_json(
    const Json& j, std::optional<std::pair<int, int>> dims) {
  const int l = get_field<int>(j, "L", "partial permutation");
  int rows = 0, cols = 0;
  if (j.contains("M") && j.contains("N")) {
    rows = get_field<int>(j, "M", "partial permutation");
    cols = get_field<int>(j, "N", "partial permutation");
    if (dims && (dims->first != rows || dims->second != cols)) {
      throw FormatError("partial permutation: dimensions do not match");
    }
  } else if (dims) {
    std::tie(rows, cols) = *dims;
  } else {
    throw FormatError("partial permutation: missing M and N");
  }
  const auto pairs = get_field<std::vector<std::pair<int, int>>>(
      j, "pairs", "partial permutation");
  if (static_cast<int>(pairs.size()) != l) {
    throw FormatError("partial permutation: pair count differs from L");
  }
  try {
    return PartialPermutation(rows, cols, pairs);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("partial permutation: ") + e.what());
  }
}

void write_permutation(const std::filesystem::path& path,
                       const PartialPermutation& p) {
  write_json_file(path, permutation_to_json(p));
}

PartialPermutation read_permutation(const std::filesystem::path& path,
                                    std::optional<std::pair<int, int>> dims) {
  try {
    return permutation_from_json(read_json_file(path), dims);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

Json params_to_json(const GeneratorParams& p) {
  return {{"M", p.m},
          {"N", p.n},
          {"L", p.l},
          {"sigma", p.sigma},
          {"density", p.density},
          {"seed", p.seed},
          {"perturbation",
           p.perturbation == PerturbationCount::kEach ? "each" : "total"},
          {"perturb_edges", p.perturb_edges},
          {"alpha", 1.0}};
}

GeneratorParams params_from_json(const Json& j) {
  GeneratorParams p;
  p.m = get_field<int>(j, "M", "params");
  p.n = get_field<int>(j, "N", "params");
  p.l = get_field<int>(j, "L", "params");
  p.sigma = get_field<double>(j, "sigma", "params");
  p.density = get_field<double>(j, "density", "params");
  p.seed = get_field<std::uint64_t>(j, "seed", "params");
  if (j.contains("perturbation")) {
    const auto mode = get_field<std::string>(j, "perturbation", "params");
    if (mode != "each" && mode != "total") {
      throw FormatError("params: perturbation must be 'each' or 'total'");
    }
    p.perturbation =
        mode == "each" ? PerturbationCount::kEach : PerturbationCount::kTotal;
  }
  if (j.contains("perturb_edges")) {
    p.perturb_edges = get_field<bool>(j, "perturb_edges", "params");
  }
  return p;
}

Json trace_step_to_json(const TraceStep& step) {
  return {{"zeta", step.zeta},
          {"J", step.value},
          {"fw_iters", step.fw_iterations},
          {"gap", step.gap},
          {"binarity", step.binarity}};
}

void write_trace_jsonl(std::ostream& out, const std::vector<TraceStep>& trace) {
  for (const TraceStep& step : trace) out << trace_step_to_json(step).dump() << '\n';
}

Json match_result_to_json(const MatchResult& result) {
  Json j = permutation_to_json(result.assignment);
  j["objective_h0"] = result.objective_h0;
  j["objective_f"] = result.objective_f;
  j["discretized_by_fallback"] = result.discretized_by_fallback;
  j["zeta_steps"] = result.trace.size();
  j["final_zeta"] = result.trace.empty() ? 1.0 : result.trace.back().zeta;
  int fw_total = 0;
  for (const TraceStep& s : result.trace) fw_total += s.fw_iterations;
  j["fw_iterations"] = fw_total;
  j["wall_time_s"] = result.wall_time.count();
  return j;
}

namespace {

constexpr const char* kRecordHeader =
    "scenario,mode,sweep_value,trial,method,M,N,L,sigma,density,seed,"
    "accuracy,objective,wall_time_s,fallback,error";

}  // namespace

void write_records_csv(std::ostream& out,
                       const std::vector<TrialRecord>& records) {
  out << kRecordHeader << '\n' << std::setprecision(17);
  for (const TrialRecord& r : records) {
    out << r.scenario << ',' << r.mode << ',' << r.sweep_value << ','
        << r.trial << ',' << quote_csv(r.method) << ',' << r.params.m << ','
        << r.params.n << ',' << r.params.l << ',' << r.params.sigma << ','
        << r.params.density << ',' << r.params.seed << ',' << r.accuracy
        << ',' << r.objective << ',' << r.wall_time_s << ','
        << (r.fallback ? 1 : 0) << ',' << quote_csv(r.error) << '\n';
  }
}

std::vector<TrialRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kRecordHeader) {
    throw FormatError("records: missing or unexpected header");
  }
  std::vector<TrialRecord> records;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 16) {
      throw FormatError("records: expected 16 fields, got " +
                        std::to_string(f.size()));
    }
    const std::string what = "records";
    TrialRecord r;
    r.scenario = f[0];
    r.mode = f[1];
    r.sweep_value = parse_double(f[2], what);
    r.trial = static_cast<int>(parse_double(f[3], what));
    r.method = f[4];
    r.params.m = static_cast<int>(parse_double(f[5], what));
    r.params.n = static_cast<int>(parse_double(f[6], what));
    r.params.l = static_cast<int>(parse_double(f[7], what));
    r.params.sigma = parse_double(f[8], what);
    r.params.density = parse_double(f[9], what);
    try {
      r.params.seed = std::stoull(trim(f[10]));
    } catch (const std::exception&) {
      throw FormatError("records: bad seed '" + f[10] + "'");
    }
    r.accuracy = parse_double(f[11], what);
    r.objective = parse_double(f[12], what);
    r.wall_time_s = parse_double(f[13], what);
    r.fallback = trim(f[14]) == "1";
    r.error = f[15];
    records.push_back(std::move(r));
  }
  return records;
}

Json summary_to_json(const std::vector<SummaryRow>& rows) {
  Json out = Json::array();
  for (const SummaryRow& r : rows) {
    out.push_back({{"scenario", r.scenario},
                   {"mode", r.mode},
                   {"sweep_value", r.sweep_value},
                   {"method", r.method},
                   {"mean_acc", r.mean_acc},
                   {"std_acc", r.std_acc},
                   {"mean_time", r.mean_time},
                   {"trials", r.trials},
                   {"failed", r.failed}});
  }
  return out;
}

Json read_json_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

}  // namespace wcs::io
