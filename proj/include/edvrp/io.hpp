#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "edvrp/ga.hpp"
#include "edvrp/instgen.hpp"
#include "edvrp/model.hpp"

namespace edvrp::io {

/// Instance JSON. Coordinates are rounded to 1e-3 m on write; lengths and the
/// flat tensor (row-major, diagonal written as 0) keep full precision.
std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);

struct SolutionFile {
  Solution solution;
  std::string algorithm;
  std::uint64_t seed = 0;
  std::optional<ga::RunTrace> trace;  // final_best duplicates solution
};

std::string solution_to_json(const SolutionFile& file);
SolutionFile solution_from_json(const std::string& text);

struct ManifestCase {
  std::string case_id;
  std::uint64_t seed = 0;
  instgen::GenParams params;
  std::string path;  // relative to the manifest's directory
};

struct Manifest {
  std::uint64_t suite_seed = 0;
  std::vector<ManifestCase> cases;
};

std::string manifest_to_json(const Manifest& m);
Manifest manifest_from_json(const std::string& text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

Instance load_instance(const std::filesystem::path& path);
Manifest load_manifest(const std::filesystem::path& path);

}  // namespace edvrp::io
