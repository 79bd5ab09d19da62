// SPDX-License-Identifier: Apache-2.0

#include "argsim/model_io.hpp"

#include <fstream>

#include <json.hpp>

#include "argsim/common.hpp"

namespace argsim::ml {

using nlohmann::json;

void save_model(std::ostream& out, const RegressionModel& model) {
  json j;
  j["schema"] = kModelSchema;
  j["kind"] = std::string(kind_name(model.kind));
  j["fingerprint"] = model.fingerprint;
  if (model.kind == ModelKind::ridge) {
    j["hyperparams"] = {{"alpha", model.params.alpha}};
    j["ridge"] = {{"weights", model.weights}, {"intercept", model.intercept}};
  } else {
    j["hyperparams"] = {{"C", model.params.C},
                        {"gamma", model.params.gamma},
                        {"epsilon", model.params.epsilon}};
    json sv = json::array();
    for (std::size_t i = 0; i < model.support_vectors.rows; ++i) {
      const double* r = model.support_vectors.row(i);
      sv.push_back(std::vector<double>(r, r + model.support_vectors.cols));
    }
    j["svr"] = {{"support_vectors", std::move(sv)},
                {"dual_coefs", model.dual_coefs},
                {"bias", model.bias},
                {"n_features", model.support_vectors.cols},
                {"converged", model.converged}};
  }
  if (model.standardizer) {
    j["standardizer"] = {{"mean", model.standardizer->mean},
                         {"sd", model.standardizer->sd},
                         {"zero_var", std::vector<int>(model.standardizer->zero_var.begin(),
                                                       model.standardizer->zero_var.end())}};
  }
  out << j.dump(2) << '\n';
}

void save_model_file(const std::string& path, const RegressionModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file: " + path);
  save_model(out, model);
}

RegressionModel load_model(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!j.contains("schema") || j["schema"] != kModelSchema) {
    throw Error("model file has unknown schema");
  }
  RegressionModel model;
  model.kind = kind_from_name(j.at("kind").get<std::string>());
  model.fingerprint = j.value("fingerprint", std::string());
  if (model.kind == ModelKind::ridge) {
    model.params.alpha = j.at("hyperparams").at("alpha").get<double>();
    model.weights = j.at("ridge").at("weights").get<std::vector<double>>();
    model.intercept = j.at("ridge").at("intercept").get<double>();
  } else {
    const auto& hp = j.at("hyperparams");
    model.params.C = hp.at("C").get<double>();
    model.params.gamma = hp.at("gamma").get<double>();
    model.params.epsilon = hp.at("epsilon").get<double>();
    const auto& svr = j.at("svr");
    model.dual_coefs = svr.at("dual_coefs").get<std::vector<double>>();
    model.bias = svr.at("bias").get<double>();
    model.converged = svr.value("converged", true);
    const auto& sv = svr.at("support_vectors");
    const std::size_t cols = svr.at("n_features").get<std::size_t>();
    model.support_vectors = Matrix(sv.size(), cols);
    for (std::size_t i = 0; i < sv.size(); ++i) {
      const auto row = sv[i].get<std::vector<double>>();
      if (row.size() != cols) throw Error("model file: ragged support vector matrix");
      std::copy(row.begin(), row.end(), model.support_vectors.row(i));
    }
    if (model.dual_coefs.size() != model.support_vectors.rows) {
      throw Error("model file: dual coefficient count mismatch");
    }
  }
  if (j.contains("standardizer")) {
    Standardizer st;
    st.mean = j["standardizer"].at("mean").get<std::vector<double>>();
    st.sd = j["standardizer"].at("sd").get<std::vector<double>>();
    const auto zv = j["standardizer"].at("zero_var").get<std::vector<int>>();
    st.zero_var.assign(zv.begin(), zv.end());
    if (st.mean.size() != st.sd.size() || st.mean.size() != st.zero_var.size()) {
      throw Error("model file: inconsistent standardizer");
    }
    model.standardizer = std::move(st);
  }
  return model;
}

RegressionModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file: " + path);
  return load_model(in);
}

}  // namespace argsim::ml
