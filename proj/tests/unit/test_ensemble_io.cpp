#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <string>

#include "generators.hpp"
#include "pathrisk/ensemble_io.hpp"

using namespace pathrisk;

namespace {

PathEnsemble small_ensemble() {
  return PathEnsemble(TimeGrid({0.0, 0.25, 1.0}), {0.0, 0.1, -0.2, 0.0, 1.0 / 3.0, 0.5}, {0.25, 0.75});
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "pathrisk_io_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Prsk, LayoutIsLittleEndianWithFixedHeader) {
  const std::string bytes = encode_prsk(small_ensemble());
  ASSERT_EQ(bytes.size(), 5u + 8 + 8 + 8 * 3 + 8 * 2 + 8 * 6);
  EXPECT_EQ(bytes.substr(0, 5), "PRSK1");
  EXPECT_EQ(static_cast<unsigned char>(bytes[5]), 2u);  // n_paths
  EXPECT_EQ(static_cast<unsigned char>(bytes[13]), 2u); // n_steps
  double t1 = 0.0;
  std::memcpy(&t1, bytes.data() + 21 + 8, 8);
  EXPECT_EQ(t1, 0.25);
}

TEST(Prsk, RoundTripIsExact) {
  test::Gen g(21);
  for (int trial = 0; trial < 200; ++trial) {
    const PathEnsemble e = test::random_ensemble(g, 6, 9);
    EXPECT_EQ(decode_prsk(encode_prsk(e)), e);
  }
}

TEST(Prsk, RejectsCorruption) {
  const std::string good = encode_prsk(small_ensemble());
  EXPECT_THROW(decode_prsk(good.substr(0, good.size() - 1)), FormatError);
  EXPECT_THROW(decode_prsk(good + '\0'), FormatError);
  std::string bad_magic = good;
  bad_magic[4] = '2';
  EXPECT_THROW(decode_prsk(bad_magic), FormatError);
  EXPECT_THROW(decode_prsk("PRS"), FormatError);
  std::string huge = good;
  for (int i = 0; i < 8; ++i) huge[5 + i] = '\xff';
  EXPECT_THROW(decode_prsk(huge), FormatError);
  std::string bad_probs = good;
  const double p = 0.9;
  std::memcpy(bad_probs.data() + 21 + 24, &p, 8);
  EXPECT_THROW(decode_prsk(bad_probs), FormatError);
}

TEST(Csv, RoundTripIsExact) {
  test::Gen g(22);
  for (int trial = 0; trial < 200; ++trial) {
    const PathEnsemble e = test::random_ensemble(g, 6, 9);
    EXPECT_EQ(decode_csv(encode_csv(e)), e);
  }
}

TEST(Csv, SinglePathIsOneRow) {
  const PathEnsemble e(TimeGrid::uniform(1.0, 2), {0.0, 0.5, 1.0}, {1.0});
  const std::string text = encode_csv(e);
  EXPECT_EQ(text, "prob,0,0.5,1\n1,0,0.5,1\n");
}

TEST(Csv, RejectsMalformedText) {
  EXPECT_THROW(decode_csv(""), FormatError);
  EXPECT_THROW(decode_csv("prob,0,1\n1,0\n"), FormatError);
  EXPECT_THROW(decode_csv("prob,0,1\n1,0,x\n"), FormatError);
  EXPECT_THROW(decode_csv("time,0,1\n1,0,1\n"), FormatError);
}

TEST(Files, SaveLoadDetectsFormat) {
  const PathEnsemble e = small_ensemble();
  const auto bin = scratch("small.prsk");
  const auto csv = scratch("small.csv");
  save_ensemble(e, bin);
  save_ensemble(e, csv);
  EXPECT_EQ(format_for(csv), EnsembleFormat::csv);
  EXPECT_EQ(format_for(bin), EnsembleFormat::prsk);
  EXPECT_EQ(load_ensemble(bin), e);
  EXPECT_EQ(load_ensemble(csv), e);
  EXPECT_THROW(load_ensemble(scratch("missing.prsk")), std::runtime_error);
  EXPECT_THROW(write_file_bytes("/nonexistent-dir/x.prsk", "x"), std::runtime_error);
}

TEST(Crc32, StandardCheckValue) {
  EXPECT_EQ(crc32("123456789"), 0xCBF43926u);
  EXPECT_EQ(crc32(""), 0u);
}

TEST(FormatDouble, SeventeenSignificantDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}
