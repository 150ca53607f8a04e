#include "gramsample/io.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace gramsample {

namespace {

std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  const std::size_t b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  const std::size_t e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream iss(s);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

bool parse_double(const std::string& tok, double& out) {
  if (tok.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtod(tok.c_str(), &end);
  return end == tok.c_str() + tok.size() && errno == 0;
}

bool parse_index(const std::string& tok, long long& out) {
  if (tok.empty()) return false;
  errno = 0;
  char* end = nullptr;
  out = std::strtoll(tok.c_str(), &end, 10);
  return end == tok.c_str() + tok.size() && errno == 0;
}

double entry_value(const std::string& tok, std::size_t line) {
  double v = 0.0;
  if (!parse_double(tok, v)) throw ParseError("malformed value '" + tok + "'", line);
  if (!std::isfinite(v)) throw ParseError("non-finite value '" + tok + "'", line);
  return v;
}

/// Line-oriented reader that skips comments and blank lines and remembers
/// the current line number for error reporting.
class LineReader {
public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next_raw(std::string& out) {
    if (!std::getline(in_, out)) return false;
    ++line_no_;
    return true;
  }

  bool next_content(std::string& out) {
    std::string raw;
    while (next_raw(raw)) {
      const std::string t = trim(raw);
      if (t.empty() || t[0] == '%') continue;
      out = t;
      return true;
    }
    return false;
  }

  std::size_t line_no() const { return line_no_; }

private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

struct MmHeader {
  bool coordinate = false;
  bool symmetric = false;
};

MmHeader parse_banner(const std::string& banner, std::size_t line) {
  const std::vector<std::string> tok = split_ws(lower(banner));
  if (tok.size() != 5 || tok[0] != "%%matrixmarket") {
    throw ParseError("malformed MatrixMarket banner", line);
  }
  if (tok[1] != "matrix") throw ParseError("unsupported object '" + tok[1] + "'", line);

  MmHeader h;
  if (tok[2] == "coordinate") {
    h.coordinate = true;
  } else if (tok[2] == "array") {
    h.coordinate = false;
  } else {
    throw ParseError("unsupported format '" + tok[2] + "'", line);
  }

  if (tok[3] == "complex" || tok[3] == "pattern") {
    throw UnsupportedFieldError("unsupported MatrixMarket field '" + tok[3] + "'");
  }
  if (tok[3] != "real" && tok[3] != "integer") {
    throw ParseError("unknown field '" + tok[3] + "'", line);
  }

  if (tok[4] == "general") {
    h.symmetric = false;
  } else if (tok[4] == "symmetric") {
    h.symmetric = true;
  } else if (tok[4] == "skew-symmetric" || tok[4] == "hermitian") {
    throw UnsupportedFieldError("unsupported MatrixMarket symmetry '" + tok[4] + "'");
  } else {
    throw ParseError("unknown symmetry '" + tok[4] + "'", line);
  }
  return h;
}

Matrix<double> read_coordinate(LineReader& reader, const MmHeader& h, Index rows, Index cols,
                               long long nnz) {
  Matrix<double> a = Matrix<double>::Zero(rows, cols);
  std::string line;
  for (long long e = 0; e < nnz; ++e) {
    if (!reader.next_content(line)) {
      throw ParseError("expected " + std::to_string(nnz) + " entries, got " + std::to_string(e),
                       reader.line_no());
    }
    const std::vector<std::string> tok = split_ws(line);
    if (tok.size() != 3) throw ParseError("expected 'row col value'", reader.line_no());
    long long i = 0;
    long long j = 0;
    if (!parse_index(tok[0], i) || !parse_index(tok[1], j)) {
      throw ParseError("malformed entry indices", reader.line_no());
    }
    if (i < 1 || i > rows || j < 1 || j > cols) {
      throw ParseError("entry index out of range", reader.line_no());
    }
    if (h.symmetric && i < j) {
      throw ParseError("symmetric storage must list lower-triangle entries", reader.line_no());
    }
    const double v = entry_value(tok[2], reader.line_no());
    a(i - 1, j - 1) += v;
    if (h.symmetric && i != j) a(j - 1, i - 1) += v;
  }
  if (reader.next_content(line)) {
    throw ParseError("trailing content after last entry", reader.line_no());
  }
  return a;
}

Matrix<double> read_array(LineReader& reader, const MmHeader& h, Index rows, Index cols) {
  const long long expected = h.symmetric ? static_cast<long long>(rows) * (rows + 1) / 2
                                         : static_cast<long long>(rows) * cols;
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(expected));
  std::string line;
  while (reader.next_content(line)) {
    for (const std::string& tok : split_ws(line)) {
      if (static_cast<long long>(values.size()) == expected) {
        throw ParseError("trailing content after last entry", reader.line_no());
      }
      values.push_back(entry_value(tok, reader.line_no()));
    }
  }
  if (static_cast<long long>(values.size()) != expected) {
    throw ParseError("expected " + std::to_string(expected) + " values, got " +
                         std::to_string(values.size()),
                     reader.line_no());
  }

  Matrix<double> a(rows, cols);
  std::size_t idx = 0;
  if (h.symmetric) {
    for (Index j = 0; j < cols; ++j) {
      for (Index i = j; i < rows; ++i) {
        a(i, j) = values[idx];
        a(j, i) = values[idx];
        ++idx;
      }
    }
  } else {
    for (Index j = 0; j < cols; ++j) {
      for (Index i = 0; i < rows; ++i) a(i, j) = values[idx++];
    }
  }
  return a;
}

}  // namespace

Matrix<double> read_matrix_market(std::istream& in) {
  LineReader reader(in);
  std::string banner;
  if (!reader.next_raw(banner)) throw ParseError("empty input", 1);
  const MmHeader h = parse_banner(banner, reader.line_no());

  std::string size_line;
  if (!reader.next_content(size_line)) throw ParseError("missing size line", reader.line_no());
  const std::vector<std::string> tok = split_ws(size_line);
  const std::size_t want = h.coordinate ? 3 : 2;
  if (tok.size() != want) throw ParseError("malformed size line", reader.line_no());

  long long rows = 0;
  long long cols = 0;
  long long nnz = 0;
  if (!parse_index(tok[0], rows) || !parse_index(tok[1], cols) ||
      (h.coordinate && !parse_index(tok[2], nnz))) {
    throw ParseError("malformed size line", reader.line_no());
  }
  if (rows < 1 || cols < 1 || (h.coordinate && nnz < 0)) {
    throw ParseError("matrix dimensions out of range", reader.line_no());
  }
  if (h.symmetric && rows != cols) {
    throw ParseError("symmetric matrix must be square", reader.line_no());
  }

  if (h.coordinate) {
    return read_coordinate(reader, h, static_cast<Index>(rows), static_cast<Index>(cols), nnz);
  }
  return read_array(reader, h, static_cast<Index>(rows), static_cast<Index>(cols));
}

Matrix<double> read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_matrix_market(in);
}

Matrix<double> read_dense_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (trim(raw).empty()) continue;
    std::vector<double> row;
    std::size_t begin = 0;
    for (;;) {
      const std::size_t comma = raw.find(',', begin);
      const std::string tok =
          trim(comma == std::string::npos ? raw.substr(begin) : raw.substr(begin, comma - begin));
      row.push_back(entry_value(tok, line_no));
      if (comma == std::string::npos) break;
      begin = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("ragged rows: expected " + std::to_string(rows.front().size()) +
                           " values, got " + std::to_string(row.size()),
                       line_no);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty input", line_no);

  Matrix<double> a(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) a(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return a;
}

Matrix<double> read_dense_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_dense_csv(in);
}

void write_dense_csv(const Matrix<double>& a, std::ostream& out) {
  char buf[64];
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", a(i, j));
      if (j > 0) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

void write_dense_csv(const Matrix<double>& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_dense_csv(a, out);
}

Matrix<double> load_matrix(const std::string& path) {
  const std::size_t dot = path.find_last_of('.');
  const std::string ext = dot == std::string::npos ? "" : lower(path.substr(dot));
  if (ext == ".mtx" || ext == ".mm") return read_matrix_market(path);
  if (ext == ".csv") return read_dense_csv(path);

  std::ifstream probe(path);
  if (!probe) throw Error("cannot open '" + path + "'");
  std::string first;
  std::getline(probe, first);
  if (lower(trim(first)).rfind("%%matrixmarket", 0) == 0) return read_matrix_market(path);
  return read_dense_csv(path);
}

}  // namespace gramsample
