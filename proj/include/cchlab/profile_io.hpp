#pragma once

#include <filesystem>
#include <string>

#include "cchlab/phase_plane.hpp"

namespace cch {

/// Profile CSV: one header line
///   # L=<val> N=<val> c1=<val> c2=<val> k=<val> family=<id>
/// followed by an `x,u` row per sample, 17 significant digits.
std::string format_profile_csv(const Profile& p);
Profile parse_profile_csv(const std::string& text);

void write_profile_csv(const std::filesystem::path& path, const Profile& p);
Profile read_profile_csv(const std::filesystem::path& path);

/// A Profile wrapping an arbitrary field (snapshots): c is NaN, family -1.
Profile field_profile(const Field& f, int family_id = -1);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace cch
