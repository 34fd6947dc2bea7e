#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qplexkit/reference.hpp"
#include "qplexkit/prob_rep.hpp"

namespace qplexkit::io {

using json = nlohmann::json;

/// {"d": int, "re": [[...]], "im": [[...]]}, row-major d x d. Parsing
/// rejects ragged or mis-sized arrays.
json operator_to_json(const CMatrix& m);
CMatrix operator_from_json(const json& j);

/// {"d": int, "effects": [operator, ...]}.
json povm_to_json(const Povm& povm);
Povm povm_from_json(const json& j);

/// SIC fixture: {"d": int, "fiducial": {"re": [...], "im": [...]},
/// "effects": [...]}. Loading rebuilds the Weyl-Heisenberg orbit from the
/// fiducial; precomputed effects, when present, are cross-checked.
json sic_fixture_to_json(const CVector& fiducial, int d,
                         bool include_effects = false);
SicPovm sic_fixture_from_json(const json& j);

/// The fixture's raw fiducial and dimension, with no orbit validation —
/// what a verifier needs to assess a candidate that may not be a SIC.
std::pair<CVector, int> sic_fixture_fiducial(const json& j);

/// One row of comma-separated decimals, 17 significant digits.
std::string prob_to_csv(const ProbVector& p);
ProbVector prob_from_csv(const std::string& text);

/// M rows x N columns.
std::string cond_to_csv(const CondProbMatrix& c);
CondProbMatrix cond_from_csv(const std::string& text);

std::string format_real(Real x);

json load_json_file(const std::filesystem::path& path);
std::string load_text_file(const std::filesystem::path& path);
void save_text_file(const std::filesystem::path& path,
                    const std::string& content);

}  // namespace qplexkit::io
