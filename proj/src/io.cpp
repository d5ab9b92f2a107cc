#include "qht/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qht/error.hpp"

#ifndef QHT_VERSION
#define QHT_VERSION "0.0.0"
#endif

namespace qht::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw ValidationError(what); }

const json& member(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing key \"") + key + "\"");
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) fail(std::string(what) + " must be a number");
  return j.get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? number(j.at(key), key) : fallback;
}

int integer_or(const json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) fail(std::string(key) + " must be an integer");
  return j.at(key).get<int>();
}

Complex complex_from_json(const json& j, const char* what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail(std::string(what) + " entries must be [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return out;
}

double parse_double(const std::string& cell, const std::string& path, std::size_t line) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = first + cell.size();
  if (!cell.empty() && cell.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    std::ostringstream os;
    os << path << ":" << line << ": cannot parse \"" << cell << "\" as a number";
    fail(os.str());
  }
  return v;
}

}  // namespace

const char* version() { return QHT_VERSION; }

json matrix_to_json(const Matrix& m) {
  if (m.rows() != m.cols()) fail("matrix_to_json: matrix must be square");
  json entries = json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index k = 0; k < m.cols(); ++k) entries.push_back({m(i, k).real(), m(i, k).imag()});
  return {{"dim", m.rows()}, {"entries", entries}};
}

Matrix matrix_from_json(const json& j) {
  const json& dim = member(j, "dim");
  if (!dim.is_number_integer() || dim.get<long>() < 1) fail("matrix \"dim\" must be a positive integer");
  const Index n = dim.get<Index>();
  const json& entries = member(j, "entries");
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(n * n)) {
    std::ostringstream os;
    os << "matrix of dim " << n << " needs " << n * n << " entries";
    fail(os.str());
  }
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < n; ++k) m(i, k) = complex_from_json(entries[static_cast<std::size_t>(i * n + k)], "matrix");
  return m;
}

HermitianOperator hermitian_from_json(const json& j) { return HermitianOperator(matrix_from_json(j)); }

json functional_to_json(const PositiveFunctional& f) {
  json j = matrix_to_json(f.op().matrix());
  j["faithful"] = true;
  return j;
}

PositiveFunctional functional_from_json(const json& j) {
  if (j.contains("faithful") && j.at("faithful") != true) fail("only faithful functionals are supported");
  return PositiveFunctional(hermitian_from_json(j));
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

Vector vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) fail("vector must be a non-empty array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = complex_from_json(j[i], "vector");
  return v;
}

FiniteSystem system_from_json(const json& j) {
  std::optional<Matrix> basis;
  if (j.contains("tri_basis") && !j.at("tri_basis").is_null()) basis = matrix_from_json(j.at("tri_basis"));
  return FiniteSystem(hermitian_from_json(member(j, "H")), functional_from_json(member(j, "omega")), basis);
}

OpenSystemSpec open_spec_from_json(const json& j) {
  OpenSystemSpec spec;
  spec.h_sample = hermitian_from_json(member(j, "h_sample"));
  const json& res = member(j, "reservoirs");
  if (!res.is_array()) fail("\"reservoirs\" must be an array");
  for (const json& r : res) {
    Reservoir reservoir;
    reservoir.h = hermitian_from_json(member(r, "h"));
    reservoir.n = r.contains("n") ? hermitian_from_json(r.at("n")) : HermitianOperator::zero(reservoir.h.dim());
    reservoir.beta = number(member(r, "beta"), "beta");
    reservoir.mu = number_or(r, "mu", 0.0);
    spec.reservoirs.push_back(std::move(reservoir));
  }
  const json& couplings = member(j, "couplings");
  if (!couplings.is_array()) fail("\"couplings\" must be an array");
  for (const json& c : couplings) spec.couplings.push_back(hermitian_from_json(c));
  return spec;
}

EbbSpec ebb_spec_from_json(const json& j) {
  EbbSpec spec;
  spec.h_sample = hermitian_from_json(member(j, "h_sample"));
  const json& chi = member(j, "chi");
  if (!chi.is_array()) fail("\"chi\" must be an array of vectors");
  for (const json& c : chi) spec.chi.push_back(vector_from_json(c));
  spec.lambda = number(member(j, "lambda"), "lambda");
  const json& leads = member(j, "leads");
  if (!leads.is_array()) fail("\"leads\" must be an array");
  for (const json& l : leads) spec.leads.push_back({number(member(l, "beta"), "beta"), number_or(l, "mu", 0.0)});
  spec.validate();
  return spec;
}

json ebb_spec_to_json(const EbbSpec& spec) {
  json chi = json::array();
  for (const Vector& c : spec.chi) chi.push_back(vector_to_json(c));
  json leads = json::array();
  for (const Lead& l : spec.leads) leads.push_back({{"beta", l.beta}, {"mu", l.mu}});
  return {{"h_sample", matrix_to_json(spec.h_sample.matrix())}, {"chi", chi}, {"lambda", spec.lambda}, {"leads", leads}};
}

XySpec xy_spec_from_json(const json& j) {
  if (!j.is_object()) fail("XY spec must be a JSON object");
  XySpec spec;
  spec.J = number_or(j, "J", spec.J);
  spec.lambda = number_or(j, "lambda", spec.lambda);
  spec.beta_left = number_or(j, "beta_left", spec.beta_left);
  spec.beta_right = number_or(j, "beta_right", spec.beta_right);
  spec.beta = number_or(j, "beta", spec.beta);
  spec.n = integer_or(j, "n", spec.n);
  spec.m = integer_or(j, "m", spec.m);
  spec.validate();
  return spec;
}

json xy_spec_to_json(const XySpec& spec) {
  return {{"J", spec.J},       {"lambda", spec.lambda}, {"beta_left", spec.beta_left}, {"beta_right", spec.beta_right},
          {"beta", spec.beta}, {"n", spec.n},           {"m", spec.m}};
}

Interaction interaction_from_json(const json& j) {
  Interaction phi;
  const json& d = member(j, "site_dim");
  if (!d.is_number_integer()) fail("\"site_dim\" must be an integer");
  phi.site_dim = d.get<Index>();
  const json& terms = member(j, "terms");
  if (!terms.is_array()) fail("\"terms\" must be an array");
  for (const json& t : terms) {
    const json& r = member(t, "range");
    if (!r.is_number_integer()) fail("term \"range\" must be an integer");
    phi.terms.push_back({r.get<int>(), hermitian_from_json(member(t, "matrix"))});
  }
  phi.validate();
  return phi;
}

json report_to_json(const TestReport& r) {
  json bounds = json::array();
  for (const auto& [s, v] : r.upper_bounds) bounds.push_back({{"s", s}, {"value", v}});
  return {{"type1", r.type1},
          {"type2", r.type2},
          {"total", r.total},
          {"optimal_total", r.optimal_total},
          {"lower_bound", r.lower_bound},
          {"upper_bounds", bounds}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(path + ": " + e.what());
  }
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash(const json& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(config.dump())));
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header, const json& config)
    : path_(path), columns_(header.size()), out_(path) {
  if (!out_) fail("cannot write " + path);
  out_ << "# qht " << version() << " config=" << config_hash(config) << "\n";
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) fail("CSV row has the wrong number of columns");
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
  out_ << "\n";
  if (!out_) fail("write to " + path_ + " failed");
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  fail("CSV has no column \"" + name + "\"");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  CsvTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line.front() == '#') continue;
    std::vector<std::string> cells = split(line);
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      std::ostringstream os;
      os << path << ":" << lineno << ": expected " << table.header.size() << " columns, found " << cells.size();
      fail(os.str());
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_double(c, path, lineno));
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) fail(path + " has no header row");
  return table;
}

EntropicFunction read_entropic_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  const std::size_t cs = t.column("s");
  const std::size_t ce = t.column("e");
  if (t.rows.size() < 2) fail(path + " needs at least two rows");
  const double a = t.rows.front()[cs];
  const double b = t.rows.back()[cs];
  const std::size_t n = t.rows.size() - 1;
  std::vector<double> values;
  for (std::size_t i = 0; i <= n; ++i) {
    const double expected = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
    if (std::abs(t.rows[i][cs] - expected) > 1e-9 * std::max(1.0, std::abs(b - a))) {
      std::ostringstream os;
      os << path << ": s values are not a uniform grid (row " << i << " has s = " << t.rows[i][cs] << ")";
      fail(os.str());
    }
    values.push_back(t.rows[i][ce]);
  }
  return EntropicFunction(a, b, std::move(values));
}

void write_entropic_csv(const std::string& path, const std::vector<double>& s, const std::vector<double>& e,
                        const json& config) {
  if (s.size() != e.size()) fail("write_entropic_csv: s and e differ in length");
  CsvWriter w(path, {"s", "e"}, config);
  for (std::size_t i = 0; i < s.size(); ++i) w.row({s[i], e[i]});
}

ScatteringTable read_scattering_csv(const std::string& path) {
  const CsvTable t = read_csv(path);
  if (t.header.empty() || t.header[0] != "k") fail(path + ": first column must be k");
  const std::size_t pairs = (t.header.size() - 1) / 2;
  const Index n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(pairs))));
  if (t.header.size() % 2 == 0 || n < 1 || static_cast<std::size_t>(n * n) != pairs)
    fail(path + ": expected k followed by re/im columns of a square matrix");
  ScatteringTable table;
  for (const auto& row : t.rows) {
    table.k.push_back(row[0]);
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        const std::size_t c = 1 + 2 * static_cast<std::size_t>(i * n + j);
        m(i, j) = {row[c], row[c + 1]};
      }
    table.s.push_back(std::move(m));
  }
  return table;
}

void write_scattering_csv(const std::string& path, const ScatteringTable& table, const json& config) {
  if (table.k.size() != table.s.size() || table.s.empty()) fail("write_scattering_csv: malformed table");
  const Index n = table.s.front().rows();
  std::vector<std::string> header{"k"};
  for (Index i = 1; i <= n; ++i)
    for (Index j = 1; j <= n; ++j) {
      header.push_back("re_" + std::to_string(i) + std::to_string(j));
      header.push_back("im_" + std::to_string(i) + std::to_string(j));
    }
  CsvWriter w(path, header, config);
  for (std::size_t r = 0; r < table.k.size(); ++r) {
    std::vector<double> row{table.k[r]};
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) {
        row.push_back(table.s[r](i, j).real());
        row.push_back(table.s[r](i, j).imag());
      }
    w.row(row);
  }
}

}  // namespace qht::io
