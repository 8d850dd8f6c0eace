#include "qwit/triple_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace qwit {

namespace {

using json = nlohmann::ordered_json;

double number_field(const json& obj, const std::string& owner, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError("document: missing field " + owner + "." + key);
  if (!it->is_number()) throw ParseError("document: field " + owner + "." + key + " must be a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw ParseError("document: field " + owner + "." + key + " must be finite");
  return v;
}

Hermitian2 matrix_field(const json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end() || !it->is_object()) {
    throw ParseError(std::string("document: missing object ") + key);
  }
  return {number_field(*it, key, "a11"), number_field(*it, key, "a22"),
          Complex(number_field(*it, key, "a12_re"), number_field(*it, key, "a12_im"))};
}

QubitState state_field(const json& doc) {
  const auto it = doc.find("state");
  if (it == doc.end() || !it->is_object()) throw ParseError("document: missing object state");
  const auto kind = it->find("kind");
  if (kind == it->end() || !kind->is_string()) {
    throw ParseError("document: state.kind must be \"pure\" or \"mixed\"");
  }
  if (*kind == "pure") {
    try {
      return QubitState::pure(
          Complex(number_field(*it, "state", "alpha_re"), number_field(*it, "state", "alpha_im")),
          Complex(number_field(*it, "state", "beta_re"), number_field(*it, "state", "beta_im")));
    } catch (const NormalizationError& e) {
      throw ParseError(std::string("document: state: ") + e.what());
    }
  }
  if (*kind == "mixed") {
    Hermitian2 rho{number_field(*it, "state", "rho11"), number_field(*it, "state", "rho22"),
                   Complex(number_field(*it, "state", "rho12_re"),
                           number_field(*it, "state", "rho12_im"))};
    const double tr = rho.trace();
    if (!(tr > 1e-300)) throw ParseError("document: state: density trace must be positive");
    rho = (1.0 / tr) * rho;
    try {
      return QubitState::mixed(Density2::from(rho));
    } catch (const Error& e) {
      throw ParseError(std::string("document: state: ") + e.what());
    }
  }
  throw ParseError("document: state.kind must be \"pure\" or \"mixed\"");
}

}  // namespace

nlohmann::ordered_json matrix_to_json(const Hermitian2& m) {
  json j = json::object();
  j["a11"] = m.a11;
  j["a22"] = m.a22;
  j["a12_re"] = m.a12.real();
  j["a12_im"] = m.a12.imag();
  return j;
}

nlohmann::ordered_json state_to_json(const QubitState& s) {
  json j = json::object();
  if (s.is_pure()) {
    j["kind"] = "pure";
    j["alpha_re"] = s.alpha().real();
    j["alpha_im"] = s.alpha().imag();
    j["beta_re"] = s.beta().real();
    j["beta_im"] = s.beta().imag();
  } else {
    const Hermitian2& r = s.rho().matrix();
    j["kind"] = "mixed";
    j["rho11"] = r.a11;
    j["rho22"] = r.a22;
    j["rho12_re"] = r.a12.real();
    j["rho12_im"] = r.a12.imag();
  }
  return j;
}

TripleDocument parse_triple_document(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("document: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("document: top level must be an object");

  const auto ver = doc.find("version");
  if (ver == doc.end() || !ver->is_number_integer()) {
    throw ParseError("document: missing integer field version");
  }
  TripleDocument out;
  out.version = ver->get<int>();
  if (out.version != 1) {
    throw ParseError("document: unsupported version " + std::to_string(out.version));
  }

  out.triple.A = {matrix_field(doc, "A"), "A"};
  out.triple.B = {matrix_field(doc, "B"), "B"};
  out.triple.state = state_field(doc);

  out.metadata = json::object();
  const auto meta = doc.find("metadata");
  if (meta != doc.end()) {
    if (!meta->is_object()) throw ParseError("document: metadata must be an object");
    out.metadata = *meta;
  }
  // Unknown top-level fields survive round trips inside metadata.
  for (const auto& [key, value] : doc.items()) {
    if (key == "version" || key == "A" || key == "B" || key == "state" || key == "metadata") {
      continue;
    }
    out.metadata[key] = value;
  }
  return out;
}

TripleDocument load_triple_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("document: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_triple_document(buf.str());
}

std::string serialize_triple_document(const TripleDocument& doc) {
  json j = json::object();
  j["version"] = doc.version;
  j["A"] = matrix_to_json(doc.triple.A.m);
  j["B"] = matrix_to_json(doc.triple.B.m);
  j["state"] = state_to_json(doc.triple.state);
  j["metadata"] = doc.metadata.is_object() ? doc.metadata : json::object();
  return j.dump(2) + "\n";
}

}  // namespace qwit
