#include "cchlab/profile_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "cchlab/errors.hpp"

namespace cch {

std::string format_profile_csv(const Profile& p) {
  const auto& g = p.field.grid();
  std::string out = fmt::format("# L={:.17g} N={} c1={:.17g} c2={:.17g} k={} family={}\n", p.length, g.points(),
                                p.c.c1, p.c.c2, p.k, p.family_id);
  out += "x,u\n";
  const auto v = p.field.values();
  for (int j = 0; j < g.points(); ++j) out += fmt::format("{:.17g},{:.17g}\n", g.x(j), v[j]);
  return out;
}

namespace {

std::string header_value(const std::string& header, const std::string& key) {
  const std::string tag = " " + key + "=";
  const auto pos = header.find(tag);
  if (pos == std::string::npos) throw DomainError("profile CSV: header is missing " + key);
  const auto begin = pos + tag.size();
  const auto end = header.find(' ', begin);
  return header.substr(begin, end == std::string::npos ? std::string::npos : end - begin);
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw DomainError("profile CSV: malformed number '" + s + "'");
  return v;
}

}  // namespace

Profile parse_profile_csv(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header) || header.rfind("#", 0) != 0) {
    throw DomainError("profile CSV: first line must be the # header");
  }
  try {
    const double length = parse_double(header_value(header, "L"));
    const int points = std::stoi(header_value(header, "N"));
    const PhaseParams c{parse_double(header_value(header, "c1")), parse_double(header_value(header, "c2"))};
    const int k = std::stoi(header_value(header, "k"));
    const int family = std::stoi(header_value(header, "family"));
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line == "x,u") continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos) throw DomainError("profile CSV: row without comma");
      values.push_back(parse_double(line.substr(comma + 1)));
    }
    if (static_cast<int>(values.size()) != points) throw DomainError("profile CSV: row count differs from N");
    const SpectralGrid grid(length, points);
    return Profile{Field::from_values(grid, values), length, c, k, family, 0.0};
  } catch (const std::invalid_argument& e) {
    throw DomainError(std::string("profile CSV: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw DomainError(std::string("profile CSV: ") + e.what());
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string() + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

void write_profile_csv(const std::filesystem::path& path, const Profile& p) {
  write_text_file(path, format_profile_csv(p));
}

Profile read_profile_csv(const std::filesystem::path& path) { return parse_profile_csv(read_text_file(path)); }

Profile field_profile(const Field& f, int family_id) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return Profile{f, f.grid().length(), {nan, nan}, 1, family_id, 0.0};
}

}  // namespace cch
