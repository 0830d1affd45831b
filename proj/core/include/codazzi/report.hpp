#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "codazzi/torus.hpp"

namespace codazzi {

// %.17g formatting: round-trips doubles and keeps report bytes deterministic.
std::string fmt_double(double v);

// Ordered key = value report. Keys keep insertion order; values are strings.
struct KeyValueReport {
  std::vector<std::pair<std::string, std::string>> items;

  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, double value);
  void add(const std::string& key, int value);
  std::string serialize() const;
};

// Parses a serialized report; throws config_error on malformed lines.
std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text);

// FNV-1a 64-bit over raw bytes, for config provenance hashes.
std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t v);

// Flat text dump of grid fields: a header with the grid shape, then one value
// per line, components concatenated in order, nodes row-major inside each.
std::string dump_field(const std::string& name, const TorusSpec& spec,
                       const std::vector<ScalarField>& comps);
// Inverse of dump_field; checks the grid shape and component count.
std::vector<ScalarField> parse_field_dump(const std::string& text, const TorusSpec& spec,
                                          int expected_comps);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace codazzi
