#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "hemb/algebra.hpp"
#include "hemb/compiler.hpp"
#include "hemb/errors.hpp"
#include "hemb/rydberg.hpp"
#include "hemb/simulators.hpp"

namespace hemb {

using json = nlohmann::json;

json to_json(const PauliSum& p);
PauliSum pauli_sum_from_json(const json& j);

/// {"dim": n, "entries": [[row, col, re, im], ...]} (upper triangle), or
/// {"dense": [[...], ...]} with real rows on input.
json to_json(const SparseHermitian& a);
SparseHermitian matrix_from_json(const json& j);

json to_json(const Code& c);
json to_json(const EmbeddingArtifact& a);
json to_json(const Circuit& c);
json to_json(const GateCountReport& r);
json to_json(const EvolutionPlan& p);
EvolutionPlan plan_from_json(const json& j);
json to_json(const PerturbationReport& r);
json to_json(const SimResult& r);

json to_json(const Waveform& w);
Waveform waveform_from_json(const json& j);
json to_json(const Pulse& p);
Pulse pulse_from_json(const json& j);
json to_json(const AtomArray& a);
AtomArray atoms_from_json(const json& j);

/// Shortest round-trip decimal form, so identical runs produce identical bytes.
std::string format_number(double x);
std::string csv_row(const std::vector<std::string>& cells);
std::string csv_row(const std::vector<double>& cells);

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

/// One bitstring per line; blank lines and lines starting with '#' are skipped.
std::vector<std::string> read_shot_file(const std::filesystem::path& path);

}  // namespace hemb
