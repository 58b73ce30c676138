#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hmtk/dyadic.hpp"
#include "hmtk/space.hpp"
#include "hmtk/wavelets.hpp"

namespace hmtk {

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

using json = nlohmann::ordered_json;

// Serializes with every float printed at 17 significant digits, which
// round-trips IEEE doubles exactly and keeps report bytes reproducible.
std::string dump_json_17(const json& j, int indent = 2);

std::string base64_encode(const unsigned char* data, size_t len);
std::vector<unsigned char> base64_decode(const std::string& text);
// Little-endian IEEE doubles <-> base64 payload.
std::string doubles_to_base64(const std::vector<double>& xs);
std::vector<double> base64_to_doubles(const std::string& text);

json space_to_json(const FiniteHomSpace& space);
FiniteHomSpace space_from_json(const json& j);
void save_space(const FiniteHomSpace& space, const std::string& path);
FiniteHomSpace load_space(const std::string& path);  // .csv files need load_space_csv
FiniteHomSpace load_space_csv(const std::string& path, const MetricSpec& metric,
                              const std::string& name = "csv-space");

json tree_to_json(const DyadicTree& tree, const std::string& space_name);
DyadicTree tree_from_json(const json& j, const FiniteHomSpace& space);
void save_tree(const DyadicTree& tree, const FiniteHomSpace& space, const std::string& path);
DyadicTree load_tree(const std::string& path, const FiniteHomSpace& space);

// The basis file embeds its tree so downstream consumers are self-contained.
// Value arrays are dense length-n doubles, base64 by default with a plain
// JSON fallback flag.
json basis_to_json(const WaveletBasis& basis, const DyadicTree& tree,
                   const std::string& space_name, bool plain_fallback = false);
struct LoadedBasis {
  DyadicTree tree;
  WaveletBasis basis;
};
LoadedBasis basis_from_json(const json& j, const FiniteHomSpace& space);
void save_basis(const WaveletBasis& basis, const DyadicTree& tree, const FiniteHomSpace& space,
                const std::string& path, bool plain_fallback = false);
LoadedBasis load_basis(const std::string& path, const FiniteHomSpace& space);

// One value per row, or "id,value" rows; length must match n.
std::vector<double> load_values_csv(const std::string& path, int n);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace hmtk
