#include "cesscm/matrix_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cesscm/error.hpp"

namespace cesscm {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view field, std::size_t line_no) {
  field = trim(field);
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || field.empty()) {
    throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) +
                                       ": not a number: '" +
                                       std::string(field) + "'");
  }
  return value;
}

Index parse_count(std::istringstream& in, const char* what) {
  long long v = -1;
  if (!(in >> v) || v < 0) {
    throw Error(ErrorKind::kParse, std::string("bad shape prefix: ") + what);
  }
  return static_cast<Index>(v);
}

}  // namespace

std::string format_double(double x, int significant_digits) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x,
                                       std::chars_format::general,
                                       significant_digits);
  if (ec != std::errc()) {
    throw Error(ErrorKind::kIo, "failed to format double");
  }
  return std::string(buf.data(), ptr);
}

void write_complex_csv(std::ostream& out, const ComplexMatrix& a) {
  out << "# " << a.rows() << ' ' << a.cols() << '\n';
  for (Index j = 0; j < a.cols(); ++j) {
    if (j > 0) out << ',';
    out << "re_" << (j + 1) << ",im_" << (j + 1);
  }
  out << '\n';
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(a(i, j).real()) << ',' << format_double(a(i, j).imag());
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorKind::kIo, "write failed");
}

ComplexMatrix read_complex_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!trim(line).empty()) return true;
    }
    return false;
  };

  if (!next_line() || trim(line).substr(0, 1) != "#") {
    throw Error(ErrorKind::kParse, "missing '# rows cols' shape prefix");
  }
  std::istringstream shape(std::string(trim(line).substr(1)));
  const Index rows = parse_count(shape, "rows");
  const Index cols = parse_count(shape, "cols");
  std::string rest;
  if (shape >> rest) {
    throw Error(ErrorKind::kParse, "trailing text after shape prefix");
  }

  if (!next_line()) {
    throw Error(ErrorKind::kParse, "missing column header");
  }
  {
    std::size_t fields = 1;
    for (char c : line) fields += (c == ',');
    const std::string_view head = trim(line);
    if (head.substr(0, 3) != "re_" ||
        fields != static_cast<std::size_t>(2 * cols)) {
      throw Error(ErrorKind::kParse, "column header does not match " +
                                         std::to_string(cols) + " columns");
    }
  }

  ComplexMatrix a(rows, cols);
  std::vector<std::string_view> fields;
  for (Index i = 0; i < rows; ++i) {
    if (!next_line()) {
      throw Error(ErrorKind::kParse, "expected " + std::to_string(rows) +
                                         " data rows, found " + std::to_string(i));
    }
    fields.clear();
    std::string_view sv = line;
    std::size_t start = 0;
    for (std::size_t k = 0; k <= sv.size(); ++k) {
      if (k == sv.size() || sv[k] == ',') {
        fields.push_back(sv.substr(start, k - start));
        start = k + 1;
      }
    }
    if (fields.size() != static_cast<std::size_t>(2 * cols)) {
      throw Error(ErrorKind::kParse,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(2 * cols) + " fields, found " +
                      std::to_string(fields.size()));
    }
    for (Index j = 0; j < cols; ++j) {
      a(i, j) = Complex(parse_double(fields[2 * j], line_no),
                        parse_double(fields[2 * j + 1], line_no));
    }
  }
  if (next_line()) {
    throw Error(ErrorKind::kParse,
                "line " + std::to_string(line_no) + ": unexpected extra row");
  }
  require_finite(a, "CSV matrix");
  return a;
}

void write_complex_csv(const std::filesystem::path& path, const ComplexMatrix& a) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot open " + path.string() + " for writing");
  write_complex_csv(out, a);
}

ComplexMatrix read_complex_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return read_complex_csv(in);
}

}  // namespace cesscm
