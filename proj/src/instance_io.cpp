// Copyright 2026 The nnmip authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nnmip/instance_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace nnmip {

namespace {

using Json = nlohmann::ordered_json;

Json vector_to_json(const Vector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

const Json& require(const Json& node, const std::string& key,
                    const std::string& where) {
  if (!node.contains(key)) {
    throw ParseError("missing field '" + key + "' in section " + where);
  }
  return node.at(key);
}

double to_double(const Json& node, const std::string& where) {
  if (!node.is_number()) {
    throw ParseError("expected a number at " + where);
  }
  const double v = node.get<double>();
  if (!std::isfinite(v)) throw ParseError("non-finite value at " + where);
  return v;
}

Vector json_to_vector(const Json& node, const std::string& where) {
  if (!node.is_array()) throw ParseError("expected an array at " + where);
  Vector v(node.size());
  for (size_t i = 0; i < node.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) =
        to_double(node[i], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

Matrix json_to_matrix(const Json& node, const std::string& where,
                      Eigen::Index expected_cols) {
  if (!node.is_array()) {
    throw ParseError("expected an array of rows at " + where);
  }
  const Eigen::Index rows = static_cast<Eigen::Index>(node.size());
  Matrix m(rows, rows == 0 ? expected_cols : 0);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Vector row =
        json_to_vector(node[i], where + "[" + std::to_string(i) + "]");
    if (i == 0) m.resize(rows, row.size());
    if (row.size() != m.cols()) {
      throw ParseError("ragged rows at " + where);
    }
    m.row(i) = row.transpose();
  }
  return m;
}

}  // namespace

ProblemInstance load_instance(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("instance file is not well-formed: ") +
                     e.what());
  }
  for (const char* section : {"meta", "mip", "nn_block", "network"}) {
    if (!doc.contains(section)) {
      throw ParseError(std::string("missing section '") + section + "'");
    }
  }

  ProblemInstance inst;
  try {
  const Json& meta = doc["meta"];
  inst.name = require(meta, "name", "meta").get<std::string>();
  inst.sense = require(meta, "sense", "meta").get<std::string>();
  if (inst.sense != "min" && inst.sense != "max") {
    throw ParseError("meta.sense must be 'min' or 'max'");
  }
  if (meta.contains("info")) {
    for (const auto& [key, value] : meta["info"].items()) {
      inst.info[key] = value.get<std::string>();
    }
  }

  const Json& mip = doc["mip"];
  inst.c = json_to_vector(require(mip, "c", "mip"), "mip.c");
  const Eigen::Index p = inst.c.size();
  inst.a_mip = json_to_matrix(require(mip, "a_mip", "mip"), "mip.a_mip", p);
  inst.b_mip = json_to_vector(require(mip, "b_mip", "mip"), "mip.b_mip");
  inst.lower = json_to_vector(require(mip, "lower", "mip"), "mip.lower");
  inst.upper = json_to_vector(require(mip, "upper", "mip"), "mip.upper");
  const Json& integrality = require(mip, "integrality", "mip");
  if (!integrality.is_array()) {
    throw ParseError("expected an array at mip.integrality");
  }
  for (const Json& flag : integrality) {
    if (!flag.is_boolean()) {
      throw ParseError("expected booleans in mip.integrality");
    }
    inst.integrality.push_back(flag.get<bool>());
  }

  const Json& nn = doc["nn_block"];
  inst.d = json_to_vector(require(nn, "d", "nn_block"), "nn_block.d");
  inst.a_nn = json_to_matrix(require(nn, "a_nn", "nn_block"), "nn_block.a_nn",
                             p + inst.d.size());
  inst.b_nn = json_to_vector(require(nn, "b_nn", "nn_block"), "nn_block.b_nn");

  const Json& network = doc["network"];
  const Json& layers = require(network, "layers", "network");
  if (!layers.is_array()) {
    throw ParseError("expected an array at network.layers");
  }
  for (size_t l = 0; l < layers.size(); ++l) {
    const std::string where = "network.layers[" + std::to_string(l) + "]";
    const Json& node = layers[l];
    Layer layer;
    layer.w = json_to_matrix(require(node, "weights", where), where + ".weights",
                             0);
    layer.b = json_to_vector(require(node, "bias", where), where + ".bias");
    const std::string act =
        require(node, "activation", where).get<std::string>();
    if (act == "relu") {
      layer.activation = Activation::kRelu;
    } else if (act == "identity") {
      layer.activation = Activation::kIdentity;
    } else {
      throw ParseError("unknown activation '" + act + "' at " + where);
    }
    inst.network.layers.push_back(std::move(layer));
  }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed instance field: ") + e.what());
  }

  if (inst.sense == "max") {
    inst.c = -inst.c;
    inst.d = -inst.d;
  }
  validate_or_throw(inst);
  return inst;
}

std::string save_instance(const ProblemInstance& inst) {
  validate_or_throw(inst);

  Vector c = inst.c;
  Vector d = inst.d;
  if (inst.sense == "max") {
    c = -c;
    d = -d;
  }

  Json doc;
  Json meta;
  meta["name"] = inst.name;
  meta["sense"] = inst.sense;
  if (!inst.info.empty()) {
    Json info;
    for (const auto& [key, value] : inst.info) info[key] = value;
    meta["info"] = std::move(info);
  }
  doc["meta"] = std::move(meta);

  Json mip;
  mip["c"] = vector_to_json(c);
  mip["a_mip"] = matrix_to_json(inst.a_mip);
  mip["b_mip"] = vector_to_json(inst.b_mip);
  mip["lower"] = vector_to_json(inst.lower);
  mip["upper"] = vector_to_json(inst.upper);
  Json flags = Json::array();
  for (const bool f : inst.integrality) flags.push_back(f);
  mip["integrality"] = std::move(flags);
  doc["mip"] = std::move(mip);

  Json nn;
  nn["d"] = vector_to_json(d);
  nn["a_nn"] = matrix_to_json(inst.a_nn);
  nn["b_nn"] = vector_to_json(inst.b_nn);
  doc["nn_block"] = std::move(nn);

  Json layers = Json::array();
  for (const Layer& layer : inst.network.layers) {
    Json node;
    node["weights"] = matrix_to_json(layer.w);
    node["bias"] = vector_to_json(layer.b);
    node["activation"] =
        layer.activation == Activation::kRelu ? "relu" : "identity";
    layers.push_back(std::move(node));
  }
  Json network;
  network["layers"] = std::move(layers);
  doc["network"] = std::move(network);

  return doc.dump(2) + "\n";
}

ProblemInstance load_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open instance file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return load_instance(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void save_instance_file(const ProblemInstance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  out << save_instance(inst);
  if (!out) throw Error("failed writing instance file: " + path);
}

}  // namespace nnmip
