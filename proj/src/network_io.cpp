#include <fstream>
#include <sstream>

#include "homogenlab/error.hpp"
#include "homogenlab/network.hpp"
#include "json.hpp"

namespace homogenlab {

using nlohmann::json;

namespace {

json activation_to_json(const ActivationSpec& a) {
  if (a.is_relu_family()) {
    return {{"relu_family", {{"alpha", a.family().alpha}, {"beta", a.family().beta}}}};
  }
  return {{"named", std::string(to_string(a.named()))}};
}

[[noreturn]] void malformed(const std::string& where, const std::string& what) {
  reject("malformed_document", where + ": " + what);
}

double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) malformed(where, "expected a number");
  return j.get<double>();
}

Vector vector_at(const json& j, const std::string& where) {
  if (!j.is_array()) malformed(where, "expected an array of numbers");
  Vector v;
  v.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(number_at(j[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

ActivationSpec activation_from_json(const json& j) {
  const std::string where = "activation";
  if (!j.is_object() || j.size() != 1) malformed(where, "expected an object with one key");
  if (j.contains("relu_family")) {
    const json& f = j["relu_family"];
    if (!f.is_object() || !f.contains("alpha") || !f.contains("beta"))
      malformed(where + ".relu_family", "expected {\"alpha\": number, \"beta\": number}");
    return ActivationSpec::relu_family(number_at(f["alpha"], where + ".relu_family.alpha"),
                                       number_at(f["beta"], where + ".relu_family.beta"));
  }
  if (j.contains("named")) {
    if (!j["named"].is_string()) malformed(where + ".named", "expected a string");
    const auto name = j["named"].get<std::string>();
    if (name == "tanh") return NamedActivation::tanh;
    if (name == "softplus") return NamedActivation::softplus;
    malformed(where + ".named", "unknown activation '" + name + "'");
  }
  malformed(where, "expected key 'relu_family' or 'named'");
}

}  // namespace

std::string serialize(const NetworkSpec& net) {
  json layers = json::array();
  for (const auto& l : net.layers()) {
    json rows = json::array();
    for (std::size_t i = 0; i < l.weights.rows(); ++i) {
      auto r = l.weights.row(i);
      rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    layers.push_back({{"weights", std::move(rows)}, {"bias", l.bias ? json(*l.bias) : json(nullptr)}});
  }
  json doc = {{"activation", activation_to_json(net.activation())},
              {"unbiased", net.unbiased()},
              {"layers", std::move(layers)}};
  return doc.dump(2) + "\n";
}

NetworkSpec deserialize(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    reject("malformed_document", std::string("document: ") + e.what());
  }
  if (!doc.is_object()) malformed("document", "expected a JSON object");
  for (const char* key : {"activation", "unbiased", "layers"}) {
    if (!doc.contains(key)) malformed("document", std::string("missing key '") + key + "'");
  }
  const ActivationSpec activation = activation_from_json(doc["activation"]);
  if (!doc["unbiased"].is_boolean()) malformed("unbiased", "expected a boolean");
  const bool unbiased = doc["unbiased"].get<bool>();
  const json& jl = doc["layers"];
  if (!jl.is_array() || jl.empty()) malformed("layers", "expected a non-empty array");

  std::vector<LayerSpec> layers;
  for (std::size_t i = 0; i < jl.size(); ++i) {
    const std::string where = "layers[" + std::to_string(i) + "]";
    const json& l = jl[i];
    if (!l.is_object() || !l.contains("weights")) malformed(where, "expected an object with 'weights'");
    const json& w = l["weights"];
    if (!w.is_array() || w.empty()) malformed(where + ".weights", "expected a non-empty array of rows");
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < w.size(); ++r) {
      rows.push_back(vector_at(w[r], where + ".weights[" + std::to_string(r) + "]"));
      if (rows.back().size() != rows.front().size())
        malformed(where + ".weights[" + std::to_string(r) + "]", "row length differs from row 0");
    }
    LayerSpec layer{Matrix::from_rows(rows), std::nullopt};
    if (l.contains("bias") && !l["bias"].is_null()) {
      if (unbiased) reject("bias_in_unbiased", where + ".bias: present although \"unbiased\" is true");
      layer.bias = vector_at(l["bias"], where + ".bias");
    }
    layers.push_back(std::move(layer));
  }
  return NetworkSpec(std::move(layers), activation, unbiased);
}

NetworkSpec load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) reject("io_error", "cannot open network file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str());
}

void save_network(const NetworkSpec& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) reject("io_error", "cannot write network file '" + path + "'");
  out << serialize(net);
}

}  // namespace homogenlab
