// Policy file format, version 1 (text, '\n' line endings, doubles as %.17g):
//
//   toggle-policy <version>
//   axis1 <n> <e_0> ... <e_{n-1}>
//   axis2 <n> <e_0> ... <e_{n-1}>
//   phi_levels <k> <phi_0> ... <phi_{k-1}>
//   u_max <u1_max> <u2_max>
//   hyper <alpha> <epsilon> <gamma>
//   seed <uint64>
//   episodes <int>
//   trial <int>
//   q <rows> <cols>
//   <rows lines of <cols> space-separated values, row-major>
//   end

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "toggle/agent.hpp"

namespace toggle {

namespace {

constexpr const char* kMagic = "toggle-policy";

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_list(std::ostream& out, const char* tag, std::span<const double> values) {
  out << tag << ' ' << values.size();
  for (double v : values) {
    out << ' ' << fmt(v);
  }
  out << '\n';
}

class LineReader {
public:
  explicit LineReader(std::istream& in) : in_(in) {}

  std::istringstream expect(const std::string& tag) {
    std::string line;
    if (!std::getline(in_, line)) {
      throw PolicyFormatError("policy file truncated: expected '" + tag + "'");
    }
    std::istringstream fields(line);
    std::string got;
    fields >> got;
    if (got != tag) {
      throw PolicyFormatError("policy file corrupted: expected '" + tag + "', found '" + got + "'");
    }
    return fields;
  }

  bool next_line(std::string& line) { return static_cast<bool>(std::getline(in_, line)); }

private:
  std::istream& in_;
};

template <typename T>
T read_value(std::istringstream& fields, const std::string& what) {
  T value{};
  if (!(fields >> value)) {
    throw PolicyFormatError("policy file corrupted: bad value for " + what);
  }
  return value;
}

// strtod handles every %.17g spelling, including inf/nan which are rejected.
double read_double(std::istringstream& fields, const std::string& what) {
  std::string token;
  if (!(fields >> token)) {
    throw PolicyFormatError("policy file corrupted: missing value for " + what);
  }
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size() || !std::isfinite(v)) {
    throw PolicyFormatError("policy file corrupted: bad number '" + token + "' for " + what);
  }
  return v;
}

void expect_end_of_line(std::istringstream& fields, const std::string& what) {
  std::string extra;
  if (fields >> extra) {
    throw PolicyFormatError("policy file corrupted: trailing data after " + what);
  }
}

std::vector<double> read_list(LineReader& reader, const std::string& tag) {
  auto fields = reader.expect(tag);
  const auto n = read_value<std::size_t>(fields, tag + " length");
  if (n > 1'000'000) {
    throw PolicyFormatError("policy file corrupted: implausible " + tag + " length");
  }
  std::vector<double> values(n);
  for (auto& v : values) {
    v = read_double(fields, tag);
  }
  expect_end_of_line(fields, tag);
  return values;
}

}  // namespace

void save_policy(const PolicyTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << kMagic << ' ' << kPolicyFormatVersion << '\n';
  write_list(out, "axis1", table.grid.edges1);
  write_list(out, "axis2", table.grid.edges2);
  write_list(out, "phi_levels", table.actions.phi_levels);
  out << "u_max " << fmt(table.actions.u1_max) << ' ' << fmt(table.actions.u2_max) << '\n';
  out << "hyper " << fmt(table.alpha) << ' ' << fmt(table.epsilon) << ' ' << fmt(table.gamma) << '\n';
  out << "seed " << table.seed << '\n';
  out << "episodes " << table.episodes << '\n';
  out << "trial " << table.trial << '\n';
  out << "q " << table.q.rows() << ' ' << table.q.cols() << '\n';
  for (Eigen::Index r = 0; r < table.q.rows(); ++r) {
    for (Eigen::Index c = 0; c < table.q.cols(); ++c) {
      out << (c == 0 ? "" : " ") << fmt(table.q(r, c));
    }
    out << '\n';
  }
  out << "end\n";
  if (!out.flush()) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

PolicyTable load_policy(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw PolicyFormatError("cannot open policy file " + path.string());
  }
  LineReader reader(in);
  PolicyTable t;

  auto header = reader.expect(kMagic);
  const int version = read_value<int>(header, "format version");
  if (version != kPolicyFormatVersion) {
    throw PolicyVersionError("unsupported policy format version " + std::to_string(version) + " (expected " +
                             std::to_string(kPolicyFormatVersion) + ")");
  }
  t.grid.edges1 = read_list(reader, "axis1");
  t.grid.edges2 = read_list(reader, "axis2");
  if (t.grid.edges1.size() < 2 || t.grid.edges2.size() < 2) {
    throw PolicyFormatError("policy file corrupted: grid needs at least two edges per axis");
  }
  const auto levels = read_list(reader, "phi_levels");
  if (levels.size() != kActionCount) {
    throw PolicyFormatError("policy file corrupted: expected " + std::to_string(kActionCount) + " phi levels");
  }
  std::copy(levels.begin(), levels.end(), t.actions.phi_levels.begin());
  {
    auto f = reader.expect("u_max");
    t.actions.u1_max = read_double(f, "u1_max");
    t.actions.u2_max = read_double(f, "u2_max");
    expect_end_of_line(f, "u_max");
  }
  {
    auto f = reader.expect("hyper");
    t.alpha = read_double(f, "alpha");
    t.epsilon = read_double(f, "epsilon");
    t.gamma = read_double(f, "gamma");
    expect_end_of_line(f, "hyper");
  }
  {
    auto f = reader.expect("seed");
    t.seed = read_value<std::uint64_t>(f, "seed");
    expect_end_of_line(f, "seed");
  }
  {
    auto f = reader.expect("episodes");
    t.episodes = read_value<int>(f, "episodes");
    expect_end_of_line(f, "episodes");
  }
  {
    auto f = reader.expect("trial");
    t.trial = read_value<int>(f, "trial");
    expect_end_of_line(f, "trial");
  }
  auto qf = reader.expect("q");
  const auto rows = read_value<Eigen::Index>(qf, "q rows");
  const auto cols = read_value<Eigen::Index>(qf, "q cols");
  expect_end_of_line(qf, "q");
  if (rows != static_cast<Eigen::Index>(t.grid.size()) || cols != static_cast<Eigen::Index>(kActionCount)) {
    throw PolicyFormatError("policy file corrupted: Q shape does not match grid and action count");
  }
  t.q.resize(rows, cols);
  std::string line;
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!reader.next_line(line)) {
      throw PolicyFormatError("policy file truncated inside the Q matrix");
    }
    std::istringstream fields(line);
    for (Eigen::Index c = 0; c < cols; ++c) {
      t.q(r, c) = read_double(fields, "Q entry");
    }
    expect_end_of_line(fields, "Q row");
  }
  reader.expect("end");
  if (reader.next_line(line) && !line.empty()) {
    throw PolicyFormatError("policy file corrupted: data after 'end'");
  }
  return t;
}

void check_compatible(const PolicyTable& table, const StateGrid& grid, const ActionSpec& actions) {
  if (!(table.grid == grid)) {
    throw PolicyMismatchError("policy grid does not match the grid implied by the current configuration (z_ref)");
  }
  if (!(table.actions == actions)) {
    throw PolicyMismatchError("policy action set does not match the current configuration (u1_max/u2_max)");
  }
}

}  // namespace toggle
