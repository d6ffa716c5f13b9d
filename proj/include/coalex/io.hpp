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

#ifndef COALEX_IO_HPP_
#define COALEX_IO_HPP_

#include <string>

#include "json.hpp"

#include "coalex/coalitional.hpp"
#include "coalex/diagnostics.hpp"
#include "coalex/explain.hpp"
#include "coalex/game.hpp"
#include "coalex/partition_tree.hpp"
#include "coalex/values.hpp"

namespace coalex {

using Json = nlohmann::json;

// {"n": n, "values": [2^n reals in bitmask order]}
Json game_to_json(const Game& v);
Game game_from_json(const Json& j);

Json value_to_json(const ValueVector& values);

// [[0, 1], [2]]
Json partition_to_json(const Partition& p);
Partition partition_from_json(const Json& j, int n = 0);

Json axiom_report_to_json(const AxiomReport& r);
Json coalitional_result_to_json(const CoalitionalResult& r);

// {"nodes": [{"id", "height", "parent", "children", "leaf_player"}]}
Json tree_to_json(const PartitionTree& t);
PartitionTree tree_from_json(const Json& j);

Json explanation_meta_to_json(const ExplanationMeta& m);
Json explanation_to_json(const ExplanationMatrix& m);
ExplanationMatrix explanation_from_json(const Json& j);
// One row per sample; columns prediction, baseline, then phi:, group:,
// quotient: units, then standard errors when present.
void write_explanation_csv(const ExplanationMatrix& m, const std::string& path);

Json stability_report_to_json(const StabilityReport& r);

Json read_json_file(const std::string& path);
void write_json_file(const Json& j, const std::string& path);
void write_text_file(const std::string& text, const std::string& path);

}  // namespace coalex

#endif  // COALEX_IO_HPP_
