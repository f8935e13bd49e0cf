// Field exchange format and JSON wiring.
//
// A field set on disk is a JSON header `<base>.fields.json` describing the
// grid plus one payload file per field: either row-major CSV (one node per
// line, components comma-separated, round-trip precision) or little-endian
// binary float64 (`.f64`), component-interleaved per node.
#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "horolab/cmc_solver.hpp"
#include "horolab/codim2.hpp"
#include "horolab/estimate_lab.hpp"
#include "horolab/grid.hpp"

namespace horolab::io {

using json = nlohmann::ordered_json;

struct NamedField {
    std::string name;
    int components = 1;
    std::vector<double> values;  // size = domain.n * components, node-major
};

struct FieldSet {
    GridDomain domain;
    std::vector<NamedField> fields;
    json provenance;  // free-form, echoed back on read

    const NamedField& get(const std::string& name) const;
    bool has(const std::string& name) const;
};

// Writes `<base>.fields.json` plus one payload per field
// (`<base>.<field>.f64` or `.csv`).  Returns the header path.
std::filesystem::path write_fields(const std::filesystem::path& base, const FieldSet& fs,
                                   bool binary = true);

FieldSet read_fields(const std::filesystem::path& header_path);

// ---- grid / problem / comparison-function JSON --------------------------

GridDomain domain_from_json(const json& j);
json domain_to_json(const GridDomain& dom);

// Closed-form boundary families addressable from problem files:
// "hyperboloid" {H, center, shift}, "plane" {a, b},
// "tilted_plane_bump" {tilt, amp, width}.
solver::FieldGenerator generator_from_json(const json& j, int m);

solver::DirichletProblem problem_from_json(const json& j,
                                           const std::filesystem::path& base_dir);

solver::SolverConfig solver_config_from_json(const json& j);  // missing keys keep defaults

estimate::ComparisonFn comparison_from_json(const json& j, const GridDomain& dom,
                                            const std::filesystem::path& base_dir);

// ---- report serialization ------------------------------------------------

json to_json(const solver::SolveReport& rep);
json to_json(const solver::ConvergenceReport& rep);
json to_json(const estimate::SuperharmonicReport& rep);
json to_json(const estimate::EstimateReport& rep);
json to_json(const estimate::BochnerReport& rep);
json to_json(const estimate::KeyInequalityReport& rep);
json to_json(const estimate::VanishingReport& rep);
json to_json(const estimate::ScalarLiouvilleReport& rep);
json to_json(const estimate::RigidityTrendReport& rep);
json to_json(const codim2::EquivalenceReport& rep);

// Aligned-text rendering of a report tree; numbers are printed through the
// same serializer as the JSON output so both carry identical content.
std::string render_text(const json& j);

// Strict accessors: missing key or wrong type throws DimensionError with
// the key path, so config schema violations surface as exit code 2.
double require_number(const json& j, const std::string& key);
std::string require_string(const json& j, const std::string& key);
const json& require_member(const json& j, const std::string& key);

}  // namespace horolab::io
