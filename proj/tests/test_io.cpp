#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>

#include "cchlab/errors.hpp"
#include "cchlab/linearization.hpp"
#include "cchlab/phase_plane.hpp"
#include "cchlab/profile_io.hpp"

using namespace cch;

TEST(ProfileCsv, RoundTripIsExact) {
  const auto fams = enumerate_families(10.0, 64);
  const auto& p = fams.profiles.at(1);
  const auto text = format_profile_csv(p);
  EXPECT_EQ(text.rfind("# L=10 N=64 c1=", 0), 0u);
  EXPECT_NE(text.find("\nx,u\n"), std::string::npos);
  const auto back = parse_profile_csv(text);
  EXPECT_EQ(back.length, 10.0);
  EXPECT_EQ(back.family_id, 1);
  EXPECT_EQ(back.k, 1);
  EXPECT_EQ(back.c.c2, p.c.c2);
  for (int j = 0; j < 64; ++j) EXPECT_EQ(back.field.values()[j], p.field.values()[j]);
}

TEST(ProfileCsv, FileRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "cchlab_io_test";
  std::filesystem::remove_all(dir);
  const auto p = trivial_profile(5.0, 32);
  write_profile_csv(dir / "nested" / "t.csv", p);
  const auto back = read_profile_csv(dir / "nested" / "t.csv");
  EXPECT_EQ(back.field.grid().points(), 32);
  EXPECT_EQ(max_abs(back.field), 0.0);
  std::filesystem::remove_all(dir);
}

TEST(ProfileCsv, MalformedInputRejected) {
  EXPECT_THROW(parse_profile_csv("garbage"), DomainError);
  EXPECT_THROW(parse_profile_csv("# L=10 N=4 c1=0 c2=0 k=1 family=0\nx,u\n0,1\n"), DomainError);
  EXPECT_THROW(parse_profile_csv("# L=10 N=16 c1=0 c2=0 k=1 family=0\nx,u\n0,abc\n"), DomainError);
  EXPECT_THROW(read_profile_csv("/nonexistent/file.csv"), std::exception);
}

TEST(ProfileCsv, SnapshotsCarryNoParameters) {
  const SpectralGrid g(6.0, 16);
  const auto p = field_profile(Field::zero(g));
  EXPECT_TRUE(std::isnan(p.c.c1));
  EXPECT_EQ(p.family_id, -1);
  const auto back = parse_profile_csv(format_profile_csv(p));
  EXPECT_TRUE(std::isnan(back.c.c1));
}

TEST(SpectrumJson, RejectsMalformed) {
  EXPECT_THROW(spectrum_from_json("{not json"), std::exception);
}
