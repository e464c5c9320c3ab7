#pragma once

#include <string>

#include <json.hpp>

#include "mixtopo/curvature.hpp"
#include "mixtopo/em.hpp"
#include "mixtopo/model.hpp"
#include "mixtopo/oracle.hpp"
#include "mixtopo/piplot.hpp"
#include "mixtopo/topo.hpp"

namespace mixtopo {

using json = nlohmann::json;

// Model file schema: {"dim": D, "weights": [K], "components":
// [{"mean": [D], "cov": [D][D] row-major}, ...]}.

RawModel raw_model_from_json(const json& j);
json to_json(const Mixture& m);

/// Parses and validates a model file.
Mixture load_model(const std::string& path);
void save_model(const Mixture& m, const std::string& path);

/// Reads a whole file into memory (IoError on failure).
std::string read_file(const std::string& path);
/// Writes atomically: temp file in the same directory, then rename.
void atomic_write(const std::string& path, const std::string& content);

json to_json(const CriticalPoint& cp);
json to_json(const TopographyReport& rep);
/// Component indices are 1-based in serialized band reports.
json to_json(const ModalityBands& bands, int i, int j);
json to_json(const SpecialCaseReport& rep);
json to_json(const LinkageGraph& g);
json to_json(const Diagnostics& d);
json to_json(const PairReport& pr);

/// Linkage graph in DOT syntax with 1-based node labels.
std::string to_dot(const LinkageGraph& g);

} // namespace mixtopo
