#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <sstream>

#include "cesscm/matrix_io.hpp"
#include "error_matchers.hpp"
#include "oracles.hpp"

using namespace cesscm;

namespace {

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

ComplexMatrix round_trip(const ComplexMatrix& a) {
  std::stringstream s;
  write_complex_csv(s, a);
  return read_complex_csv(s);
}

ComplexMatrix parse(const std::string& text) {
  std::istringstream in(text);
  return read_complex_csv(in);
}

}  // namespace

TEST(MatrixIo, WritesShapePrefixAndHeader) {
  ComplexMatrix a(1, 2);
  a << Complex(1.5, -2.0), Complex(0.0, 0.25);
  std::ostringstream out;
  write_complex_csv(out, a);
  EXPECT_EQ(out.str(), "# 1 2\nre_1,im_1,re_2,im_2\n1.5,-2,0,0.25\n");
}

TEST(MatrixIo, RoundTripIsBitExact) {
  ComplexMatrix a = oracle::random_complex(7, 5, 99);
  a(0, 0) = Complex(1.0 / 3.0, -std::numeric_limits<double>::denorm_min());
  a(0, 1) = Complex(std::numeric_limits<double>::max(), -0.0);
  a(0, 2) = Complex(std::numeric_limits<double>::min(), 1e-300);
  a(1, 0) = Complex(0.1 + 0.2, 123456789.123456789);
  const ComplexMatrix b = round_trip(a);
  ASSERT_EQ(b.rows(), a.rows());
  ASSERT_EQ(b.cols(), a.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      EXPECT_TRUE(bit_equal(a(i, j).real(), b(i, j).real())) << i << "," << j;
      EXPECT_TRUE(bit_equal(a(i, j).imag(), b(i, j).imag())) << i << "," << j;
    }
  }
}

TEST(MatrixIo, ToleratesBlankLinesCarriageReturnsAndPlusSigns) {
  const ComplexMatrix a = parse("\n# 2 1\r\nre_1,im_1\r\n+1, 2\r\n\n3e0,-4\n");
  EXPECT_EQ(a(0, 0), Complex(1.0, 2.0));
  EXPECT_EQ(a(1, 0), Complex(3.0, -4.0));
}

TEST(MatrixIo, RejectsMalformedInput) {
  EXPECT_CESSCM_ERROR(parse("re_1,im_1\n1,2\n"), ErrorKind::kParse);
  EXPECT_CESSCM_ERROR(parse("# 1\nre_1,im_1\n1,2\n"), ErrorKind::kParse);
  EXPECT_CESSCM_ERROR(parse("# 1 1 x\nre_1,im_1\n1,2\n"), ErrorKind::kParse);
  EXPECT_CESSCM_ERROR(parse("# 1 2\nre_1,im_1\n1,2\n"), ErrorKind::kParse);
  EXPECT_CESSCM_ERROR(parse("# 1 1\nre_1,im_1\n1,2,3\n"), ErrorKind::kParse);
  EXPECT_CESSCM_ERROR(parse("# 1 1\nre_1,im_1\n1,two\n"), ErrorKind::kParse);
  EXPECT_CESSCM_ERROR(parse("# 1 1\nre_1,im_1\n1,\n"), ErrorKind::kParse);
  EXPECT_CESSCM_ERROR(parse("# 2 1\nre_1,im_1\n1,2\n"), ErrorKind::kParse);
  EXPECT_CESSCM_ERROR(parse("# 1 1\nre_1,im_1\n1,2\n3,4\n"), ErrorKind::kParse);
  EXPECT_CESSCM_ERROR(parse("# -1 1\nre_1,im_1\n"), ErrorKind::kParse);
}

TEST(MatrixIo, RejectsNonFiniteEntries) {
  EXPECT_CESSCM_ERROR(parse("# 1 1\nre_1,im_1\nnan,0\n"), ErrorKind::kInvalidArgument);
  EXPECT_CESSCM_ERROR(parse("# 1 1\nre_1,im_1\n0,inf\n"), ErrorKind::kInvalidArgument);
}

TEST(MatrixIo, PathOverloads) {
  const auto dir = std::filesystem::temp_directory_path() / "cesscm_matrix_io_test";
  std::filesystem::create_directories(dir);
  const auto file = dir / "m.csv";
  const ComplexMatrix a = oracle::random_complex(3, 3, 5);
  write_complex_csv(file, a);
  EXPECT_EQ(read_complex_csv(file), a);
  std::filesystem::remove_all(dir);
  EXPECT_CESSCM_ERROR(read_complex_csv(dir / "missing.csv"), ErrorKind::kIo);
}

TEST(FormatDouble, SignificantDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(0.1, 12), "0.1");
  EXPECT_EQ(format_double(9.0 / 14.0, 12), "0.642857142857");
  EXPECT_EQ(format_double(3.0, 12), "3");
  EXPECT_EQ(format_double(-1.0 / 11.0, 12), "-0.0909090909091");
}
