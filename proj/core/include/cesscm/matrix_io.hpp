#pragma once

#include <filesystem>
#include <iosfwd>

#include "cesscm/linalg.hpp"

namespace cesscm {

// Complex matrix CSV:
//
//   # <rows> <cols>
//   re_1,im_1,re_2,im_2,...,re_<cols>,im_<cols>
//   <one line per row: real/imag pairs, row-major, 17 significant digits>
//
// Writing then reading reproduces every double bit for bit.
void write_complex_csv(std::ostream& out, const ComplexMatrix& a);
ComplexMatrix read_complex_csv(std::istream& in);

void write_complex_csv(const std::filesystem::path& path, const ComplexMatrix& a);
ComplexMatrix read_complex_csv(const std::filesystem::path& path);

// Shortest-safe decimal text for a double (17 significant digits).
std::string format_double(double x, int significant_digits = 17);

}  // namespace cesscm
