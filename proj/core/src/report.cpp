#include "codazzi/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "codazzi/errors.hpp"

namespace codazzi {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void KeyValueReport::add(const std::string& key, const std::string& value) {
  items.emplace_back(key, value);
}

void KeyValueReport::add(const std::string& key, double value) {
  items.emplace_back(key, fmt_double(value));
}

void KeyValueReport::add(const std::string& key, int value) {
  items.emplace_back(key, std::to_string(value));
}

std::string KeyValueReport::serialize() const {
  std::string out;
  for (const auto& [k, v] : items) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("line " + std::to_string(lineno) + ": expected 'key = value'");
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string dump_field(const std::string& name, const TorusSpec& spec,
                       const std::vector<ScalarField>& comps) {
  std::string out = "# codazzi-field " + name + " dim " + std::to_string(spec.dim) + " grid";
  for (int n : spec.grid) out += " " + std::to_string(n);
  out += " comps " + std::to_string(comps.size()) + "\n";
  for (const auto& c : comps)
    for (Eigen::Index i = 0; i < c.size(); ++i) {
      out += fmt_double(c[i]);
      out += '\n';
    }
  return out;
}

std::vector<ScalarField> parse_field_dump(const std::string& text, const TorusSpec& spec,
                                          int expected_comps) {
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header) || header.rfind("# codazzi-field", 0) != 0)
    throw config_error("field dump: missing header");
  {
    std::istringstream hs(header);
    std::string tok;
    std::vector<std::string> toks;
    while (hs >> tok) toks.push_back(tok);
    // # codazzi-field <name> dim <d> grid <N...> comps <c>
    auto find = [&](const std::string& key) -> int {
      for (size_t i = 0; i < toks.size(); ++i)
        if (toks[i] == key) return static_cast<int>(i);
      return -1;
    };
    const int di = find("dim"), gi = find("grid"), ci = find("comps");
    if (di < 0 || gi < 0 || ci < 0) throw config_error("field dump: malformed header");
    if (std::stoi(toks[di + 1]) != spec.dim)
      throw config_error("field dump: dimension mismatch");
    for (int a = 0; a < spec.dim; ++a)
      if (std::stoi(toks[gi + 1 + a]) != spec.grid[a])
        throw config_error("field dump: grid shape mismatch");
    if (std::stoi(toks[ci + 1]) != expected_comps)
      throw config_error("field dump: component count mismatch");
  }
  const int nodes = spec.node_count();
  std::vector<ScalarField> comps(expected_comps, ScalarField::Zero(nodes));
  for (int c = 0; c < expected_comps; ++c)
    for (int i = 0; i < nodes; ++i) {
      std::string line;
      if (!std::getline(in, line)) throw config_error("field dump: truncated data");
      comps[c][i] = std::stod(line);
    }
  return comps;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open for writing: " + path);
  out << contents;
  if (!out) throw config_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace codazzi
