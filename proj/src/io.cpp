/*
 * Copyright 2026 The coalex Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "coalex/io.hpp"

#include <fstream>
#include <sstream>

#include "coalex/dataset.hpp"
#include "coalex/error.hpp"

namespace coalex {

namespace {

template <typename T>
T field(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) throw_input(what + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw_input(what + ": field '" + key + "' has the wrong type");
  }
}

Json rows_to_json(const std::vector<double>& v, std::size_t rows, std::size_t cols) {
  Json out = Json::array();
  for (std::size_t r = 0; r < rows; ++r) {
    out.push_back(std::vector<double>(v.begin() + r * cols, v.begin() + (r + 1) * cols));
  }
  return out;
}

std::vector<double> rows_from_json(const Json& j, std::size_t rows, std::size_t cols,
                                   const std::string& what) {
  std::vector<double> out;
  if (!j.is_array() || j.size() != rows) throw_input(what + ": wrong number of rows");
  for (const auto& row : j) {
    const auto r = row.get<std::vector<double>>();
    if (r.size() != cols) throw_input(what + ": wrong number of columns");
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

}  // namespace

Json game_to_json(const Game& v) {
  const Game d = v.materialize();
  const auto t = d.table();
  return Json{{"n", v.size()}, {"values", std::vector<double>(t.begin(), t.end())}};
}

Game game_from_json(const Json& j) {
  const int n = field<int>(j, "n", "game");
  if (n < 1 || n > kDenseCap) throw_input("game: n must lie in 1.." + std::to_string(kDenseCap));
  auto values = field<std::vector<double>>(j, "values", "game");
  if (values.size() != (std::size_t{1} << n)) {
    throw_input("game: expected " + std::to_string(std::size_t{1} << n) + " values, got " +
                std::to_string(values.size()));
  }
  return Game::dense(n, std::move(values));
}

Json value_to_json(const ValueVector& values) { return Json(values); }

Json partition_to_json(const Partition& p) { return Json(p.to_indices()); }

Partition partition_from_json(const Json& j, int n) {
  if (!j.is_array()) throw_input("partition: expected an array of index arrays");
  std::vector<std::vector<int>> blocks;
  int count = 0;
  try {
    for (const auto& b : j) {
      blocks.push_back(b.get<std::vector<int>>());
      count += static_cast<int>(blocks.back().size());
    }
  } catch (const Json::exception&) {
    throw_input("partition: blocks must be arrays of integers");
  }
  try {
    return Partition::from_blocks(n > 0 ? n : count, blocks);
  } catch (const InvalidArgument& e) {
    throw_input(std::string("partition: ") + e.what());
  }
}

Json axiom_report_to_json(const AxiomReport& r) {
  Json j{{"axiom", to_string(r.axiom)},
         {"trials", r.trials},
         {"failures", r.failures},
         {"max_deviation", r.max_deviation},
         {"passed", r.passed()}};
  if (r.witness) {
    j["witness"] = game_to_json(*r.witness);
    j["witness_note"] = r.witness_note;
  }
  return j;
}

Json coalitional_result_to_json(const CoalitionalResult& r) {
  return Json{{"spec_name", r.spec_name},
              {"partition", partition_to_json(r.partition)},
              {"per_player", r.per_player},
              {"per_block", r.per_block},
              {"quotient", r.quotient}};
}

Json tree_to_json(const PartitionTree& t) {
  Json nodes = Json::array();
  for (const auto& n : t.nodes()) {
    Json j{{"id", n.id}, {"height", n.height}, {"children", n.children}};
    j["parent"] = n.parent ? Json(*n.parent) : Json(nullptr);
    j["leaf_player"] = n.leaf_player ? Json(*n.leaf_player) : Json(nullptr);
    if (n.raw_height) j["raw_height"] = *n.raw_height;
    nodes.push_back(std::move(j));
  }
  return Json{{"nodes", nodes}};
}

PartitionTree tree_from_json(const Json& j) {
  const Json nodes = field<Json>(j, "nodes", "tree");
  if (!nodes.is_array()) throw_input("tree: 'nodes' must be an array");
  std::vector<TreeNode> out;
  for (const auto& n : nodes) {
    TreeNode t;
    t.id = field<int>(n, "id", "tree node");
    t.height = field<double>(n, "height", "tree node");
    if (n.contains("children")) t.children = field<std::vector<int>>(n, "children", "tree node");
    if (n.contains("parent") && !n["parent"].is_null()) t.parent = n["parent"].get<int>();
    if (n.contains("leaf_player") && !n["leaf_player"].is_null()) {
      t.leaf_player = n["leaf_player"].get<int>();
    }
    if (n.contains("raw_height") && !n["raw_height"].is_null()) {
      t.raw_height = n["raw_height"].get<double>();
    }
    out.push_back(std::move(t));
  }
  try {
    return PartitionTree(std::move(out));
  } catch (const InvalidArgument& e) {
    throw_input(std::string("tree: ") + e.what());
  }
}

Json explanation_meta_to_json(const ExplanationMeta& m) {
  Json j{{"game", m.game},           {"method", m.method},
         {"value", m.value},         {"structure", m.structure},
         {"model", m.model},         {"data_hash", m.data_hash},
         {"background_hash", m.background_hash},
         {"family", m.family},       {"efficient", m.efficient},
         {"quotient_property", m.quotient_property}};
  j["alpha"] = m.alpha ? Json(*m.alpha) : Json(nullptr);
  return j;
}

Json explanation_to_json(const ExplanationMatrix& m) {
  const std::size_t n = m.features(), k = m.blocks();
  Json j{{"meta", explanation_meta_to_json(m.meta)},
         {"samples", m.samples},
         {"feature_labels", m.feature_labels},
         {"block_labels", m.block_labels},
         {"partition", partition_to_json(m.partition)},
         {"individual", rows_to_json(m.individual, m.samples, n)},
         {"group", rows_to_json(m.group, m.samples, k)},
         {"quotient", rows_to_json(m.quotient, m.samples, k)},
         {"prediction", m.prediction},
         {"baseline", m.baseline},
         {"weights", m.weights},
         {"max_efficiency_gap", m.max_efficiency_gap}};
  if (!m.individual_se.empty()) {
    j["individual_se"] = rows_to_json(m.individual_se, m.samples, n);
    j["group_se"] = rows_to_json(m.group_se, m.samples, k);
    j["quotient_se"] = rows_to_json(m.quotient_se, m.samples, k);
  }
  return j;
}

ExplanationMatrix explanation_from_json(const Json& j) {
  const std::string what = "explanation";
  ExplanationMatrix m;
  m.samples = field<std::size_t>(j, "samples", what);
  m.feature_labels = field<std::vector<std::string>>(j, "feature_labels", what);
  m.block_labels = field<std::vector<std::string>>(j, "block_labels", what);
  m.partition = partition_from_json(field<Json>(j, "partition", what),
                                    static_cast<int>(m.feature_labels.size()));
  const std::size_t n = m.features(), k = m.blocks();
  m.individual = rows_from_json(field<Json>(j, "individual", what), m.samples, n, what);
  m.group = rows_from_json(field<Json>(j, "group", what), m.samples, k, what);
  m.quotient = rows_from_json(field<Json>(j, "quotient", what), m.samples, k, what);
  m.prediction = field<std::vector<double>>(j, "prediction", what);
  m.baseline = field<std::vector<double>>(j, "baseline", what);
  m.weights = field<std::vector<double>>(j, "weights", what);
  if (m.prediction.size() != m.samples || m.baseline.size() != m.samples ||
      m.weights.size() != m.samples) {
    throw_input(what + ": per-sample arrays have the wrong length");
  }
  if (j.contains("individual_se")) {
    m.individual_se = rows_from_json(j["individual_se"], m.samples, n, what);
    m.group_se = rows_from_json(field<Json>(j, "group_se", what), m.samples, k, what);
    m.quotient_se = rows_from_json(field<Json>(j, "quotient_se", what), m.samples, k, what);
  }
  m.max_efficiency_gap = j.value("max_efficiency_gap", 0.0);
  const Json meta = field<Json>(j, "meta", what);
  m.meta.game = meta.value("game", "");
  m.meta.method = meta.value("method", "");
  m.meta.value = meta.value("value", "");
  m.meta.structure = meta.value("structure", "");
  m.meta.model = meta.value("model", "");
  m.meta.data_hash = meta.value("data_hash", "");
  m.meta.background_hash = meta.value("background_hash", "");
  m.meta.family = meta.value("family", "");
  m.meta.efficient = meta.value("efficient", false);
  m.meta.quotient_property = meta.value("quotient_property", false);
  if (meta.contains("alpha") && !meta["alpha"].is_null()) m.meta.alpha = meta["alpha"].get<double>();
  return m;
}

void write_explanation_csv(const ExplanationMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw_input("cannot write " + path);
  const int n = m.features(), k = m.blocks();
  const bool se = !m.individual_se.empty();
  out << "prediction,baseline";
  for (const auto& l : m.feature_labels) out << ",phi:" << l;
  for (const auto& l : m.block_labels) out << ",group:" << l;
  for (const auto& l : m.block_labels) out << ",quotient:" << l;
  if (se) {
    for (const auto& l : m.feature_labels) out << ",se:phi:" << l;
    for (const auto& l : m.block_labels) out << ",se:group:" << l;
    for (const auto& l : m.block_labels) out << ",se:quotient:" << l;
  }
  out << "\n";
  for (std::size_t r = 0; r < m.samples; ++r) {
    out << format_double(m.prediction[r]) << "," << format_double(m.baseline[r]);
    for (int i = 0; i < n; ++i) out << "," << format_double(m.individual[r * n + i]);
    for (int b = 0; b < k; ++b) out << "," << format_double(m.group[r * k + b]);
    for (int b = 0; b < k; ++b) out << "," << format_double(m.quotient[r * k + b]);
    if (se) {
      for (int i = 0; i < n; ++i) out << "," << format_double(m.individual_se[r * n + i]);
      for (int b = 0; b < k; ++b) out << "," << format_double(m.group_se[r * k + b]);
      for (int b = 0; b < k; ++b) out << "," << format_double(m.quotient_se[r * k + b]);
    }
    out << "\n";
  }
  if (!out) throw_input("error writing " + path);
}

Json stability_report_to_json(const StabilityReport& r) {
  auto energy = [](const StabilityReport::Energy& e) {
    return Json{{"model", e.model},
                {"individual", e.individual},
                {"group", e.group},
                {"quotient", e.quotient},
                {"individual_ratio", e.individual_ratio},
                {"quotient_ratio", e.quotient_ratio}};
  };
  return Json{{"feature_labels", r.feature_labels},
              {"block_labels", r.block_labels},
              {"model_difference_norm", r.model_difference_norm},
              {"individual_difference", r.individual_difference},
              {"block_rss_difference", r.block_rss_difference},
              {"group_difference", r.group_difference},
              {"quotient_difference", r.quotient_difference},
              {"individual_ratio", r.individual_ratio},
              {"group_ratio", r.group_ratio},
              {"quotient_ratio", r.quotient_ratio},
              {"energy_a", energy(r.energy_a)},
              {"energy_b", energy(r.energy_b)}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_input("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw_input(path + ": " + e.what());
  }
}

void write_json_file(const Json& j, const std::string& path) {
  write_text_file(j.dump(2) + "\n", path);
}

void write_text_file(const std::string& text, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw_input("cannot write " + path);
  out << text;
  if (!out) throw_input("error writing " + path);
}

}  // namespace coalex
