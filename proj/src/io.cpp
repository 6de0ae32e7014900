#include "funss/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>
#include <utility>

#include <json.hpp>

#include "funss/errors.hpp"
#include "funss/kernels.hpp"

namespace funss {

namespace {

constexpr char kMagic[4] = {'F', 'D', 'S', '1'};
constexpr std::uint16_t kVersion = 1;

void put_bytes(std::ostream& out, const void* data, std::size_t size) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
}

void get_bytes(std::istream& in, void* data, std::size_t size, std::size_t offset,
               const char* what) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(size));
  if (static_cast<std::size_t>(in.gcount()) != size) {
    throw FormatError(std::string("dataset file truncated reading ") + what + " at byte offset " +
                      std::to_string(offset));
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> parse_csv_line(const std::string& line, std::size_t lineno) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t next = line.find(',', pos);
    if (next == std::string::npos) next = line.size();
    const std::string field = line.substr(pos, next - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(field, &used));
      if (used != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw FormatError("csv: unparseable number '" + field + "' on line " +
                        std::to_string(lineno));
    }
    pos = next + 1;
    if (next == line.size()) break;
  }
  return out;
}

/// Midpoint-cell quadrature weights from the grid points alone. For points
/// produced by the uniform builder this recovers the (b-a)/L weights.
Eigen::VectorXd weights_from_points(const Eigen::VectorXd& points) {
  const Eigen::Index l = points.size();
  Eigen::VectorXd w(l);
  if (l == 1) {
    w(0) = 1.0;
    return w;
  }
  w(0) = points(1) - points(0);
  w(l - 1) = points(l - 1) - points(l - 2);
  for (Eigen::Index i = 1; i + 1 < l; ++i) w(i) = (points(i + 1) - points(i - 1)) / 2.0;
  return w;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

void write_dataset_binary(const std::string& path, const FunctionalDataset& dataset) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  put_bytes(out, kMagic, 4);
  const std::uint16_t version = kVersion;
  const std::uint16_t flags = dataset.centered() ? 1 : 0;
  const std::uint64_t n = static_cast<std::uint64_t>(dataset.n());
  const std::uint64_t l = static_cast<std::uint64_t>(dataset.l());
  put_bytes(out, &version, 2);
  put_bytes(out, &flags, 2);
  put_bytes(out, &n, 8);
  put_bytes(out, &l, 8);
  put_bytes(out, dataset.grid().points().data(), sizeof(double) * l);
  put_bytes(out, dataset.grid().weights().data(), sizeof(double) * l);
  for (int row = 0; row < dataset.n(); ++row) {
    const Eigen::VectorXd r = dataset.values().row(row).transpose();
    put_bytes(out, r.data(), sizeof(double) * l);
  }
  if (!out) throw FormatError("write failed for '" + path + "'");
}

FunctionalDataset read_dataset_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "' for reading");
  char magic[4];
  get_bytes(in, magic, 4, 0, "magic");
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError("'" + path + "': bad magic at byte offset 0 (not an FDS1 file)");
  }
  std::uint16_t version = 0, flags = 0;
  std::uint64_t n = 0, l = 0;
  get_bytes(in, &version, 2, 4, "version");
  if (version != kVersion) {
    throw FormatError("'" + path + "': unsupported version " + std::to_string(version) +
                      " at byte offset 4");
  }
  get_bytes(in, &flags, 2, 6, "flags");
  get_bytes(in, &n, 8, 8, "sample count");
  get_bytes(in, &l, 8, 16, "grid length");
  if (n < 1 || l < 2 || n > (1ULL << 40) || l > (1ULL << 32)) {
    throw FormatError("'" + path + "': implausible dimensions N=" + std::to_string(n) +
                      " L=" + std::to_string(l));
  }
  Eigen::VectorXd points(static_cast<Eigen::Index>(l)), weights(static_cast<Eigen::Index>(l));
  std::size_t offset = 24;
  get_bytes(in, points.data(), sizeof(double) * l, offset, "grid points");
  offset += sizeof(double) * l;
  for (Eigen::Index i = 1; i < points.size(); ++i) {
    if (!(points(i) > points(i - 1))) {
      throw FormatError("'" + path + "': non-monotone grid at byte offset " +
                        std::to_string(24 + 8 * static_cast<std::size_t>(i)) + " (point index " +
                        std::to_string(i) + ")");
    }
  }
  get_bytes(in, weights.data(), sizeof(double) * l, offset, "weights");
  offset += sizeof(double) * l;
  Eigen::MatrixXd values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(l));
  std::vector<double> row(l);
  for (std::uint64_t r = 0; r < n; ++r) {
    get_bytes(in, row.data(), sizeof(double) * l, offset, "values");
    offset += sizeof(double) * l;
    for (std::uint64_t j = 0; j < l; ++j) {
      values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = row[j];
    }
  }
  char extra;
  in.read(&extra, 1);
  if (in.gcount() != 0) {
    throw FormatError("'" + path + "': trailing bytes beyond the declared N*L payload at offset " +
                      std::to_string(offset));
  }
  return FunctionalDataset(Grid(std::move(points), std::move(weights)), std::move(values),
                           (flags & 1) != 0);
}

void write_dataset_csv(const std::string& path, const FunctionalDataset& dataset) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  for (int j = 0; j < dataset.l(); ++j) {
    out << (j ? ",t_" : "t_") << j;
  }
  out << "\n";
  auto write_row = [&](const Eigen::VectorXd& v) {
    for (Eigen::Index j = 0; j < v.size(); ++j) {
      if (j) out << ',';
      out << format_double(v(j));
    }
    out << "\n";
  };
  write_row(dataset.grid().points());
  for (int r = 0; r < dataset.n(); ++r) write_row(dataset.values().row(r).transpose());
  if (!out) throw FormatError("write failed for '" + path + "'");
}

FunctionalDataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line) || line.empty()) {
    throw FormatError("'" + path + "': empty file, expected a t_0,... header on line 1");
  }
  if (line.rfind("t_0", 0) != 0) {
    throw FormatError("'" + path + "': line 1 is not a t_0,... header");
  }
  const std::size_t l = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
  if (!std::getline(in, line)) {
    throw FormatError("'" + path + "': missing grid row on line 2");
  }
  const std::vector<double> pts = parse_csv_line(line, 2);
  if (pts.size() != l) {
    throw FormatError("'" + path + "': grid row has " + std::to_string(pts.size()) +
                      " fields, header declares " + std::to_string(l));
  }
  Eigen::VectorXd points = Eigen::Map<const Eigen::VectorXd>(pts.data(), pts.size());
  for (Eigen::Index i = 1; i < points.size(); ++i) {
    if (!(points(i) > points(i - 1))) {
      throw FormatError("'" + path + "': non-monotone grid on line 2, point index " +
                        std::to_string(i));
    }
  }
  std::vector<std::vector<double>> rows;
  std::size_t lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> v = parse_csv_line(line, lineno);
    if (v.size() != l) {
      throw FormatError("'" + path + "': line " + std::to_string(lineno) + " has " +
                        std::to_string(v.size()) + " fields, expected " + std::to_string(l));
    }
    rows.push_back(std::move(v));
  }
  if (rows.empty()) {
    throw FormatError("'" + path + "': no value rows after the grid row");
  }
  Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(l));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t j = 0; j < l; ++j) values(static_cast<Eigen::Index>(r),
                                               static_cast<Eigen::Index>(j)) = rows[r][j];
  }
  Eigen::VectorXd weights = weights_from_points(points);
  return FunctionalDataset(Grid(std::move(points), std::move(weights)), std::move(values), false);
}

void write_dataset(const std::string& path, const FunctionalDataset& dataset) {
  if (ends_with(path, ".csv")) {
    write_dataset_csv(path, dataset);
  } else {
    write_dataset_binary(path, dataset);
  }
}

FunctionalDataset read_dataset(const std::string& path) {
  return ends_with(path, ".csv") ? read_dataset_csv(path) : read_dataset_binary(path);
}

void write_response_csv(const std::string& path, const ResponseVector& y) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out << "y\n";
  for (Eigen::Index i = 0; i < y.values.size(); ++i) out << format_double(y.values(i)) << "\n";
  if (!out) throw FormatError("write failed for '" + path + "'");
}

ResponseVector read_response_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line) || line != "y") {
    throw FormatError("'" + path + "': expected a 'y' header on line 1");
  }
  std::vector<double> vals;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<double> v = parse_csv_line(line, lineno);
    if (v.size() != 1) {
      throw FormatError("'" + path + "': line " + std::to_string(lineno) +
                        " must hold a single value");
    }
    vals.push_back(v[0]);
  }
  if (vals.empty()) throw FormatError("'" + path + "': no response values");
  ResponseVector y;
  y.values = Eigen::Map<const Eigen::VectorXd>(vals.data(), vals.size());
  return y;
}

void ResultTable::append(std::string method, long c, long replicate, std::string metric,
                         double value, std::string note) {
  rows.push_back(
      ResultRow{std::move(method), c, replicate, std::move(metric), value, std::move(note)});
}

void write_results(const std::string& path, const ResultTable& table) {
  std::set<std::tuple<std::string, long, long, std::string>> seen;
  for (const ResultRow& row : table.rows) {
    if (!seen.emplace(row.method, row.c, row.replicate, row.metric).second) {
      throw DataError("result table: duplicate key (" + row.method + ", " +
                      std::to_string(row.c) + ", " + std::to_string(row.replicate) + ", " +
                      row.metric + ")");
    }
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out << "method,c,replicate,metric,value,note\n";
  for (const ResultRow& row : table.rows) {
    out << row.method << ',' << row.c << ',' << row.replicate << ',' << row.metric << ','
        << (std::isnan(row.value) ? std::string("nan") : format_double(row.value)) << ','
        << row.note << "\n";
  }
  if (!out) throw FormatError("write failed for '" + path + "'");

  std::ofstream meta(path + ".json", std::ios::trunc);
  if (!meta) throw FormatError("cannot open '" + path + ".json' for writing");
  nlohmann::json j;
  j["seed"] = table.seed;
  j["design"] = table.design;
  j["timestamp"] = table.timestamp;
  j["version"] = table.version;
  meta << j.dump(2) << "\n";
}

void write_gnuplot_medians(const std::string& path, const ResultTable& table) {
  const std::string suffix = "_median";
  std::set<long> cs;
  std::set<std::string> series;
  std::map<std::pair<long, std::string>, double> cells;
  for (const ResultRow& row : table.rows) {
    if (row.replicate != -1 || !ends_with(row.metric, suffix)) continue;
    const std::string name =
        row.method + ":" + row.metric.substr(0, row.metric.size() - suffix.size());
    cs.insert(row.c);
    series.insert(name);
    cells[{row.c, name}] = row.value;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  out << "# c";
  for (const std::string& name : series) out << ' ' << name;
  out << "\n";
  for (long c : cs) {
    out << c;
    for (const std::string& name : series) {
      const auto it = cells.find({c, name});
      out << ' ' << (it == cells.end() ? "nan" : format_double(it->second));
    }
    out << "\n";
  }
}

FunctionalDataset preprocess_spectra(const FunctionalDataset& dataset,
                                     PreprocessOptions options) {
  Eigen::MatrixXd values = dataset.values();
  if (options.unit_norm) {
    const Eigen::VectorXd norms = dataset.row_sq_norms();
    for (int r = 0; r < dataset.n(); ++r) {
      if (!(norms(r) > 0.0)) {
        throw DataError("preprocess: row " + std::to_string(r) +
                        " has zero norm, cannot scale to unit norm");
      }
      values.row(r) /= std::sqrt(norms(r));
    }
  }
  FunctionalDataset scaled(dataset.grid(), std::move(values), false);
  return options.center ? center(scaled) : scaled;
}

}  // namespace funss
