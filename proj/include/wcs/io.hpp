#pragma once

#include "wcs/gnccp.hpp"
#include "wcs/synthbench.hpp"
#include "wcs/types.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wcs::io {

using Json = nlohmann::json;

// Thrown for malformed files; the message names the offending file or field.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& what);

// {"size": n, "labels": [[...], ...] | null, "adjacency": [[...], ...]}
Json graph_to_json(const WeightedGraph& g);
WeightedGraph graph_from_json(const Json& j);
void write_graph(const std::filesystem::path& path, const WeightedGraph& g);
WeightedGraph read_graph(const std::filesystem::path& path);

// Rows of comma separated values, 17 significant digits.
void write_matrix_csv(std::ostream& out, const Matrix& m);
Matrix read_matrix_csv(std::istream& in, const std::string& what);
void write_cost_csv(const std::filesystem::path& path, const CostMatrix& c);
CostMatrix read_cost_csv(const std::filesystem::path& path);

// {"L": l, "M": rows, "N": cols, "pairs": [[i, j], ...]}. M and N may be
// omitted on input when dims are supplied by the caller.
Json permutation_to_json(const PartialPermutation& p);
PartialPermutation permutation_from_json(
    const Json& j, std::optional<std::pair<int, int>> dims = {});
void write_permutation(const std::filesystem::path& path,
                       const PartialPermutation& p);
PartialPermutation read_permutation(
    const std::filesystem::path& path,
    std::optional<std::pair<int, int>> dims = {});

Json params_to_json(const GeneratorParams& p);
GeneratorParams params_from_json(const Json& j);

// One JSON object per line: {zeta, J, fw_iters, gap, binarity}.
Json trace_step_to_json(const TraceStep& step);
void write_trace_jsonl(std::ostream& out, const std::vector<TraceStep>& trace);

Json match_result_to_json(const MatchResult& result);

void write_records_csv(std::ostream& out,
                       const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_records_csv(std::istream& in);

// [{scenario, mode, sweep_value, method, mean_acc, std_acc, mean_time,
//   trials, failed}, ...]
Json summary_to_json(const std::vector<SummaryRow>& rows);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace wcs::io
