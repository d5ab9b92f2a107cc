#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qht/fcs.hpp"
#include "qht/ldp.hpp"
#include "qht/models.hpp"
#include "qht/operator.hpp"
#include "qht/quasifree.hpp"
#include "qht/state.hpp"
#include "qht/testing.hpp"

namespace qht::io {

using json = nlohmann::json;

/// Library version string.
const char* version();

/// Matrix JSON: {"dim": n, "entries": [[re, im], ...]} in row-major order.
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);
HermitianOperator hermitian_from_json(const json& j);

/// Matrix JSON plus {"faithful": true}.
json functional_to_json(const PositiveFunctional& f);
PositiveFunctional functional_from_json(const json& j);

/// Complex vector as [[re, im], ...].
json vector_to_json(const Vector& v);
Vector vector_from_json(const json& j);

/// {"H": matrix, "omega": matrix, "tri_basis": matrix (optional)}.
FiniteSystem system_from_json(const json& j);

/// {"h_sample": matrix, "reservoirs": [{"h", "n", "beta", "mu"}], "couplings": [matrix]}.
OpenSystemSpec open_spec_from_json(const json& j);

/// {"h_sample": matrix, "chi": [vector], "lambda": x, "leads": [{"beta", "mu"}]}.
EbbSpec ebb_spec_from_json(const json& j);
json ebb_spec_to_json(const EbbSpec& spec);

/// {"J", "lambda", "beta_left", "beta_right", "beta", "n", "m"}; absent keys keep defaults.
XySpec xy_spec_from_json(const json& j);
json xy_spec_to_json(const XySpec& spec);

/// {"site_dim": d, "terms": [{"range": r, "matrix": matrix}]}.
Interaction interaction_from_json(const json& j);

json report_to_json(const TestReport& r);

/// Parses a JSON file. Throws ValidationError if it is missing or malformed.
json read_json_file(const std::string& path);

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double x);

std::uint64_t fnv1a(std::string_view bytes);

/// 16 hex digits of fnv1a over the compact dump of `config`.
std::string config_hash(const json& config);

/// CSV file whose first line is "# qht <version> config=<hash>" followed by a
/// header row and comma-separated rows of 17-significant-digit numbers.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header, const json& config);
  void row(const std::vector<double>& values);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::size_t columns_;
  std::ofstream out_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of the named column; throws ValidationError if absent.
  std::size_t column(const std::string& name) const;
};

/// Reads a numeric CSV, skipping blank lines and lines starting with '#'.
CsvTable read_csv(const std::string& path);

/// EntropicFunction from a CSV with columns s,e on a uniform grid.
EntropicFunction read_entropic_csv(const std::string& path);
void write_entropic_csv(const std::string& path, const std::vector<double>& s, const std::vector<double>& e,
                        const json& config);

/// Scattering table with columns k, re_11, im_11, re_12, im_12, ... (row-major).
struct ScatteringTable {
  std::vector<double> k;
  std::vector<Matrix> s;
};
ScatteringTable read_scattering_csv(const std::string& path);
void write_scattering_csv(const std::string& path, const ScatteringTable& table, const json& config);

}  // namespace qht::io
