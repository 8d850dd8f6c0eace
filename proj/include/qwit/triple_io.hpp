#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qwit/witness.hpp"

namespace qwit {

/// On-disk form of a WitnessTriple. Version 1 layout:
///   { "version": 1,
///     "A": {"a11":., "a22":., "a12_re":., "a12_im":.},
///     "B": {...},
///     "state": {"kind":"pure", "alpha_re":., "alpha_im":., "beta_re":., "beta_im":.}
///            | {"kind":"mixed", "rho11":., "rho22":., "rho12_re":., "rho12_im":.},
///     "metadata": { ... } }
/// Unknown top-level fields are preserved by moving them into metadata;
/// unknown versions are rejected. Pure amplitudes are rescaled to unit norm
/// on load, mixed matrices to unit trace.
struct TripleDocument {
  int version = 1;
  WitnessTriple triple{{Hermitian2{}, "A"}, {Hermitian2{}, "B"},
                       QubitState::mixed(Density2::maximally_mixed())};
  nlohmann::ordered_json metadata = nlohmann::ordered_json::object();
};

nlohmann::ordered_json matrix_to_json(const Hermitian2& m);
nlohmann::ordered_json state_to_json(const QubitState& s);

/// Parses and validates a document; throws ParseError with a field-level
/// diagnostic on any defect.
TripleDocument parse_triple_document(const std::string& text);

TripleDocument load_triple_document(const std::filesystem::path& path);

/// Deterministic serialization: fixed key order, shortest exact number
/// representation, two-space indentation, trailing newline.
std::string serialize_triple_document(const TripleDocument& doc);

}  // namespace qwit
