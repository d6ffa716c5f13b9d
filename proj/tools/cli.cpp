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

#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coalex/clustering.hpp"
#include "coalex/coalitional.hpp"
#include "coalex/dataset.hpp"
#include "coalex/diagnostics.hpp"
#include "coalex/error.hpp"
#include "coalex/explain.hpp"
#include "coalex/io.hpp"
#include "coalex/mic.hpp"
#include "coalex/model.hpp"
#include "coalex/partition_tree.hpp"
#include "coalex/synthetic.hpp"
#include "coalex/values.hpp"
#include "reference_oracles.hpp"

namespace coalex::cli {

namespace fs = std::filesystem;

namespace {

// Worker default from the environment, read once per run().
int env_workers = 1;

int default_workers() {
  if (const char* env = std::getenv("GROUP_EXPLAIN_WORKERS")) {
    try {
      const int w = std::stoi(env);
      if (w >= 1) return w;
    } catch (const std::exception&) {
    }
    throw InputError(std::string("GROUP_EXPLAIN_WORKERS must be a positive integer, got '") +
                     env + "'");
  }
  return 1;
}

std::string fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

// Every option of a subcommand, its resolved value as text.
Json effective_config(const CLI::App& sub) {
  Json j = Json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config") continue;
    const auto& res = opt->results();
    if (res.empty()) {
      if (!opt->get_default_str().empty()) j[name] = opt->get_default_str();
      continue;
    }
    if (opt->get_expected_max() > 1) {
      j[name] = res;
    } else {
      j[name] = res.back();
    }
  }
  return j;
}

// Fills options that were not given on the command line from a JSON
// document whose keys are the long option names.
void apply_config_file(CLI::App& sub, const std::string& path) {
  const Json doc = read_json_file(path);
  if (!doc.is_object()) throw InputError(path + ": config must be a JSON object");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    CLI::Option* opt = nullptr;
    try {
      opt = sub.get_option("--" + it.key());
    } catch (const CLI::OptionNotFound&) {
      throw InputError(path + ": unknown config key '" + it.key() + "' for " + sub.get_name());
    }
    if (opt->count() > 0) continue;  // flag wins
    std::vector<std::string> values;
    auto as_text = [&](const Json& v) {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_boolean()) return std::string(v.get<bool>() ? "true" : "false");
      return v.dump();
    };
    if (it.value().is_array()) {
      for (const auto& v : it.value()) values.push_back(as_text(v));
    } else {
      values.push_back(as_text(it.value()));
    }
    for (auto& v : values) opt->add_result(v);
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw InputError(path + ": bad value for '" + it.key() + "': " + e.what());
    }
  }
}

void write_manifest(const CLI::App& sub, const std::string& out_dir, std::uint64_t seed,
                    const std::vector<std::string>& outputs) {
  const Json config = effective_config(sub);
  Json m{{"command", sub.get_name()},
         {"config", config},
         {"config_hash", fnv1a(config.dump())},
         {"seed", seed},
         {"outputs", outputs}};
  write_json_file(m, (fs::path(out_dir) / "manifest.json").string());
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory '" + dir + "': " + ec.message());
}

std::string join_path(const std::string& dir, const std::string& file) {
  return (fs::path(dir) / file).string();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

Dataset load_data(const std::string& path, const std::string& features) {
  Dataset d = read_csv(path);
  if (features.empty()) return d;
  std::vector<int> cols;
  for (const auto& name : split(features, ',')) {
    const auto& names = d.names();
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw InputError(path + ": no column named '" + name + "'");
    cols.push_back(static_cast<int>(it - names.begin()));
  }
  return d.select_columns(cols);
}

MicConfig mic_config(double b_exponent) {
  MicConfig cfg;
  if (!(b_exponent > 0.0 && b_exponent < 1.0)) {
    throw InputError("--mic-b-exponent must lie in (0, 1)");
  }
  cfg.b_exponent = b_exponent;
  return cfg;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string family;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  std::string out;
  bool response = false;
};

int cmd_generate(const CLI::App& sub, const GenerateArgs& a) {
  const auto family = make_family(a.family);
  const Dataset d = a.response ? family->sample_with_response(a.samples, a.seed)
                               : family->sample(a.samples, a.seed);
  ensure_dir(a.out);
  write_csv(d, join_path(a.out, "data.csv"));
  write_manifest(sub, a.out, a.seed, {"data.csv"});
  std::cerr << "wrote " << d.rows() << " rows of " << family->name() << " to "
            << join_path(a.out, "data.csv") << "\n";
  return kOk;
}

// ----------------------------------------------------------------- cluster

struct ClusterArgs {
  std::string data;
  std::string features;
  double threshold = 0.7;
  double b_exponent = 0.6;
  int workers = 1;
  std::string out;
};

struct Clustered {
  DissimilarityMatrix d;
  ClusteringResult result;
};

Clustered cluster_data(const Dataset& data, double b_exponent, int workers) {
  if (data.cols() < 2) throw InputError("clustering needs at least two columns");
  Clustered c;
  c.d = dissimilarity_matrix(data, mic_config(b_exponent), workers);
  c.result = average_linkage(c.d);
  return c;
}

int cmd_cluster(const CLI::App& sub, const ClusterArgs& a) {
  const Dataset data = load_data(a.data, a.features);
  const Clustered c = cluster_data(data, a.b_exponent, a.workers);
  const PartitionTree& tree = c.result.tree;
  const Partition p = tree.cut(a.threshold);
  ensure_dir(a.out);
  write_dissimilarity_csv(c.d, join_path(a.out, "dissimilarity.csv"));
  Json tj = tree_to_json(tree);
  tj["feature_names"] = data.names();
  Json merges = Json::array();
  for (const Merge& m : c.result.merges) {
    merges.push_back({{"left", m.left}, {"right", m.right}, {"node", m.node},
                      {"raw_height", m.raw_height}, {"size", m.size}});
  }
  tj["merges"] = merges;
  tj["notes"] = c.result.notes;
  write_json_file(tj, join_path(a.out, "tree.json"));
  write_text_file(to_newick(tree, data.names()) + "\n", join_path(a.out, "tree.nwk"));
  write_text_file(to_dot(tree, data.names()), join_path(a.out, "tree.dot"));
  write_json_file(partition_to_json(p), join_path(a.out, "partition.json"));
  write_manifest(sub, a.out, 0,
                 {"dissimilarity.csv", "tree.json", "tree.nwk", "tree.dot", "partition.json"});
  for (const auto& note : c.result.notes) std::cerr << "note: " << note << "\n";
  std::cout << to_string(p) << "\n";
  return kOk;
}

// ----------------------------------------------------------------- explain

struct ExplainArgs {
  std::string data;
  std::string background;
  std::string features;
  std::size_t background_rows = 0;
  std::string model;
  std::string model_b;
  std::string value = "shapley";
  std::string game = "ME";
  std::string method = "auto";
  std::size_t mc_draws = 4000;
  std::string partition;
  std::string tree;
  std::vector<double> alphas;
  std::optional<double> threshold;
  std::uint64_t seed = 1;
  int workers = 1;
  std::size_t batch = 4096;
  double b_exponent = 0.6;
  std::string out;
  std::string expl_a;
  std::string expl_b;
};

void add_explain_options(CLI::App* sub, ExplainArgs& a, bool diagnose) {
  sub->add_option("--data", a.data, "CSV of explicands");
  sub->add_option("--background", a.background, "CSV of background rows (default: --data)");
  sub->add_option("--features", a.features, "comma-separated column names to use");
  sub->add_option("--background-rows", a.background_rows, "use only the first N background rows");
  if (diagnose) {
    sub->add_option("--model-a", a.model, "first model spec");
    sub->add_option("--model-b", a.model_b, "second model spec");
    sub->add_option("--explanations-a", a.expl_a, "explanations JSON of the first model");
    sub->add_option("--explanations-b", a.expl_b, "explanations JSON of the second model");
  } else {
    sub->add_option("--model", a.model, "model spec: poly:<expr>, rect:<box>, cmd:<command>")
        ->required();
  }
  sub->add_option("--value", a.value, "shapley, banzhaf, owen, banzhaf-owen, "
                                      "two-step-shapley, symmetric-banzhaf");
  sub->add_option("--game", a.game, "ME, ME:<family> or CE:<family>");
  sub->add_option("--method", a.method, "auto, empirical, closed, mc");
  sub->add_option("--mc-draws", a.mc_draws, "Monte Carlo draws per coalition");
  sub->add_option("--partition", a.partition, "partition JSON file");
  sub->add_option("--tree", a.tree, "partition tree JSON file");
  sub->add_option("--alpha", a.alphas, "tree cut level(s)");
  sub->add_option("--threshold", a.threshold, "cluster the background by MIC and cut here");
  sub->add_option("--seed", a.seed, "random seed");
  sub->add_option("--workers", a.workers, "worker threads")->default_val(env_workers);
  sub->add_option("--batch-size", a.batch, "rows per subprocess batch");
  sub->add_option("--mic-b-exponent", a.b_exponent, "MIC grid exponent");
  sub->add_option("--out", a.out, "output directory")->required();
}

struct Prepared {
  Dataset data;
  Dataset background;
  std::unique_ptr<SyntheticFamily> family;
  ExplainOptions opts;
};

Prepared prepare(const ExplainArgs& a) {
  if (a.data.empty()) throw InputError("--data is required");
  Prepared p;
  p.data = load_data(a.data, a.features);
  p.background = a.background.empty() ? p.data : load_data(a.background, a.features);
  if (a.background_rows > 0 && a.background_rows < p.background.rows()) {
    p.background = p.background.head(a.background_rows);
  }
  if (p.background.cols() != p.data.cols()) {
    throw InputError("data and background have different column counts");
  }
  ExplainOptions& o = p.opts;
  o.value = a.value;
  if (o.value != "shapley" && o.value != "banzhaf") {
    try {
      CoalitionalValueSpec::by_name(o.value);
    } catch (const InvalidArgument& e) {
      throw InputError(e.what());
    }
  }
  const auto colon = a.game.find(':');
  o.game = game_kind_from_string(a.game.substr(0, colon));
  if (colon != std::string::npos) {
    p.family = make_family(a.game.substr(colon + 1));
    if (p.family->dimension() != static_cast<int>(p.data.cols())) {
      throw InputError("family '" + p.family->name() + "' has " +
                       std::to_string(p.family->dimension()) + " predictors but the data has " +
                       std::to_string(p.data.cols()) + " columns");
    }
    o.family = p.family.get();
  } else if (o.game == GameKind::kConditional) {
    throw InputError("--game CE needs a family, e.g. CE:correlated:0.5");
  }
  o.method = game_method_from_string(a.method);
  o.mc_draws = a.mc_draws;
  o.seed = a.seed;
  o.workers = a.workers;
  const int sources = !a.partition.empty() + !a.tree.empty() + a.threshold.has_value();
  if (sources > 1) throw InputError("give at most one of --partition, --tree, --threshold");
  const int n = static_cast<int>(p.data.cols());
  if (!a.partition.empty()) o.partition = partition_from_json(read_json_file(a.partition), n);
  if (!a.tree.empty()) o.tree = tree_from_json(read_json_file(a.tree));
  if (a.threshold) {
    const Clustered c = cluster_data(p.background, a.b_exponent, a.workers);
    if (a.alphas.empty()) {
      o.partition = c.result.tree.cut(*a.threshold);
    } else {
      o.tree = c.result.tree;
    }
  }
  if (!a.alphas.empty() && !o.tree) throw InputError("--alpha needs --tree or --threshold");
  o.alphas = a.alphas;
  if (o.tree && o.tree->num_players() != n) {
    throw InputError("tree has " + std::to_string(o.tree->num_players()) +
                     " leaves but the data has " + std::to_string(n) + " columns");
  }
  return p;
}

std::string alpha_suffix(const ExplanationMatrix& m, std::size_t count) {
  if (count <= 1 || !m.meta.alpha) return "";
  return "_alpha_" + format_double(*m.meta.alpha);
}

std::vector<std::string> write_explanations(const std::vector<ExplanationMatrix>& ms,
                                            const std::string& out, const std::string& stem) {
  std::vector<std::string> files;
  for (const auto& m : ms) {
    const std::string base = stem + alpha_suffix(m, ms.size());
    write_explanation_csv(m, join_path(out, base + ".csv"));
    Json meta = explanation_meta_to_json(m.meta);
    meta["partition"] = partition_to_json(m.partition);
    meta["feature_labels"] = m.feature_labels;
    meta["block_labels"] = m.block_labels;
    meta["samples"] = m.samples;
    meta["max_efficiency_gap"] = m.max_efficiency_gap;
    write_json_file(meta, join_path(out, base + ".meta.json"));
    write_json_file(explanation_to_json(m), join_path(out, base + ".json"));
    files.insert(files.end(), {base + ".csv", base + ".meta.json", base + ".json"});
  }
  return files;
}

void log_efficiency(const ExplanationMatrix& m) {
  if (m.meta.efficient) {
    std::cerr << "efficiency: max |sum - (f(x) - v(empty))| = "
              << format_double(m.max_efficiency_gap) << " over " << m.samples << " rows\n";
  } else {
    std::cerr << "efficiency: value '" << m.meta.value << "' is not efficient; not checked\n";
  }
}

int cmd_explain(const CLI::App& sub, const ExplainArgs& a) {
  Prepared p = prepare(a);
  const auto model = make_model(a.model, static_cast<int>(p.data.cols()), a.batch);
  const auto ms = explain_sweep(p.data, &p.background, *model, p.opts);
  ensure_dir(a.out);
  auto files = write_explanations(ms, a.out, "explanations");
  log_efficiency(ms.front());
  write_manifest(sub, a.out, a.seed, files);
  return kOk;
}

// ---------------------------------------------------------------- diagnose

void print_report(const StabilityReport& r) {
  std::cout << "model difference norm " << format_double(r.model_difference_norm) << "\n";
  for (std::size_t i = 0; i < r.individual_difference.size(); ++i) {
    std::cout << "  phi  " << r.feature_labels[i] << "  "
              << format_double(r.individual_difference[i]) << "\n";
  }
  for (std::size_t j = 0; j < r.quotient_difference.size(); ++j) {
    std::cout << "  quot " << r.block_labels[j] << "  "
              << format_double(r.quotient_difference[j]) << "\n";
  }
}

int cmd_diagnose(const CLI::App& sub, const ExplainArgs& a) {
  ExplanationMatrix ea, eb;
  std::vector<std::string> files;
  if (!a.expl_a.empty() || !a.expl_b.empty()) {
    if (a.expl_a.empty() || a.expl_b.empty()) {
      throw InputError("give both --explanations-a and --explanations-b");
    }
    ea = explanation_from_json(read_json_file(a.expl_a));
    eb = explanation_from_json(read_json_file(a.expl_b));
    ensure_dir(a.out);
  } else {
    if (a.model.empty() || a.model_b.empty()) {
      throw InputError("give --model-a and --model-b, or two explanation files");
    }
    Prepared p = prepare(a);
    const int n = static_cast<int>(p.data.cols());
    const auto fa = make_model(a.model, n, a.batch);
    const auto fb = make_model(a.model_b, n, a.batch);
    if (!p.opts.alphas.empty() && p.opts.alphas.size() > 1) {
      throw InputError("diagnose takes a single --alpha");
    }
    ea = explain(p.data, &p.background, *fa, p.opts);
    eb = explain(p.data, &p.background, *fb, p.opts);
    ensure_dir(a.out);
    auto fa_files = write_explanations({ea}, a.out, "explanations_a");
    auto fb_files = write_explanations({eb}, a.out, "explanations_b");
    files.insert(files.end(), fa_files.begin(), fa_files.end());
    files.insert(files.end(), fb_files.begin(), fb_files.end());
  }
  StabilityReport r;
  try {
    r = stability_report(ea, eb);
  } catch (const InvalidArgument& e) {
    throw InputError(std::string("cannot compare explanations: ") + e.what());
  }
  write_json_file(stability_report_to_json(r), join_path(a.out, "stability.json"));
  files.push_back("stability.json");
  write_manifest(sub, a.out, a.seed, files);
  print_report(r);
  return kOk;
}

// --------------------------------------------------------------- gamecheck

struct GamecheckArgs {
  std::string value;
  std::string weights;
  int trials = 1000;
  std::uint64_t seed = 1;
  std::string out;
};

struct Row {
  std::string property;
  bool passed = false;
  std::optional<bool> expected;
  std::string detail;
};

GameValue value_from_json(const Json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "shapley") return shapley_value();
    if (name == "banzhaf") return banzhaf_value();
    throw InputError(path + ": unknown value '" + name + "'");
  }
  if (!j.is_object() || !j.contains("weights")) {
    throw InputError(path + ": a value is a name or an object with 'weights'");
  }
  // weights[n-1][s] = w(S, n) for |S| = s.
  std::vector<std::vector<double>> table;
  try {
    table = j["weights"].get<std::vector<std::vector<double>>>();
  } catch (const Json::exception&) {
    throw InputError(path + ": 'weights' must be an array of arrays of numbers");
  }
  for (std::size_t n = 1; n <= table.size(); ++n) {
    if (table[n - 1].size() != n) {
      throw InputError(path + ": weights for n=" + std::to_string(n) + " need " +
                       std::to_string(n) + " entries");
    }
  }
  WeightedValueSpec spec;
  spec.name = j.value("name", std::string("custom"));
  spec.weight = [table](Mask s, int n) {
    if (n < 1 || n > static_cast<int>(table.size())) {
      throw_invalid("custom weights undefined for n=" + std::to_string(n));
    }
    return table[n - 1][cardinality(s)];
  };
  return weighted_game_value(spec);
}

int max_players(const Json& j) {
  if (j.is_object() && j.contains("weights")) return static_cast<int>(j["weights"].size());
  return 8;
}

std::map<Axiom, bool> expected_single(const std::string& name) {
  using A = Axiom;
  if (name == "shapley") {
    return {{A::kLP, true}, {A::kEP, true}, {A::kSP, true}, {A::kNPP, true},
            {A::kCDP, true}, {A::kSEP, true}};
  }
  if (name == "banzhaf") {
    return {{A::kLP, true}, {A::kEP, false}, {A::kSP, true}, {A::kTPP, true},
            {A::kNPP, true}, {A::kCDP, true}, {A::kSEP, true}};
  }
  return {};
}

void single_checks(const GameValue& h, int max_n, const GamecheckArgs& a,
                   std::vector<Row>& rows, Json& report) {
  const auto expected = expected_single(h.name);
  const Axiom all[] = {Axiom::kLP, Axiom::kEP,  Axiom::kSP, Axiom::kTPP,
                       Axiom::kNPP, Axiom::kCDP, Axiom::kSEP};
  for (Axiom ax : all) {
    const int lo = std::min(2, max_n);
    const AxiomReport r = axiom_check(h, ax, a.trials, a.seed, lo, std::min(8, max_n));
    Row row{to_string(ax), r.passed(), std::nullopt,
            "max deviation " + format_double(r.max_deviation)};
    if (auto it = expected.find(ax); it != expected.end()) row.expected = it->second;
    if (!r.passed()) row.detail += "; witness " + r.witness_note;
    rows.push_back(row);
    report["axioms"].push_back(axiom_report_to_json(r));
  }
}

Partition random_partition(int n, int max_blocks, std::uint64_t& state) {
  std::vector<Mask> blocks(max_blocks, 0);
  for (int i = 0; i < n; ++i) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    blocks[(state >> 33) % max_blocks] |= bit(i);
  }
  std::vector<Mask> nonempty;
  for (Mask b : blocks) {
    if (b) nonempty.push_back(b);
  }
  return Partition::from_masks(n, nonempty);
}

void coalitional_checks(const CoalitionalValueSpec& spec, const GamecheckArgs& a,
                        std::vector<Row>& rows, Json& report) {
  // Efficiency, total power and the quotient property on random pairs.
  double ep_dev = 0.0, tpp_dev = 0.0, qp_dev = 0.0;
  std::optional<Json> qp_witness;
  std::uint64_t state = a.seed;
  for (int t = 0; t < a.trials; ++t) {
    const int n = 2 + static_cast<int>(t % 5);
    const Game v = random_game(n, a.seed * 1000003ULL + t);
    const Partition p = random_partition(n, std::min(n, 4), state);
    const ValueVector g = coalitional_value(spec, v, p);
    double sum = 0.0;
    for (double x : g) sum += x;
    ep_dev = std::max(ep_dev, std::abs(sum - (v(v.grand()) - v.empty_value())));
    double power = 0.0;
    for (double x : banzhaf(v)) power += x;
    tpp_dev = std::max(tpp_dev, std::abs(sum - power));
    const QuotientPropertyReport q = quotient_property_check(spec, v, p);
    if (q.max_deviation > qp_dev) qp_dev = q.max_deviation;
    if (!q.passed && !qp_witness) {
      qp_witness = Json{{"game", game_to_json(v)}, {"partition", partition_to_json(p)},
                        {"block", q.worst_block}, {"deviation", q.max_deviation}};
    }
  }
  auto row = [&](const std::string& name, double dev, double tol, std::optional<bool> exp) {
    rows.push_back({name, dev <= tol, exp, "max deviation " + format_double(dev)});
    report["properties"][name] = {{"max_deviation", dev}, {"passed", dev <= tol}};
  };
  const bool named = spec.kind() != CoalitionalKind::kCustom;
  row("EP", ep_dev, kAxiomTolerance, named ? std::optional<bool>(spec.efficient()) : std::nullopt);
  row("TPP", tpp_dev, kAxiomTolerance, std::nullopt);
  row("QP", qp_dev, kQuotientTolerance,
      named ? std::optional<bool>(spec.quotient_property()) : std::nullopt);
  if (qp_witness) {
    report["properties"]["QP"]["witness"] = *qp_witness;
    rows.back().detail += "; witness " + qp_witness->dump();
  }
  const int cross_trials = std::max(1, std::min(a.trials, 40));
  const oracle::OracleReport cr = oracle::crosscheck(spec, cross_trials, a.seed);
  rows.push_back({"oracle", cr.max_abs_deviation <= 1e-10, true,
                  "max deviation " + format_double(cr.max_abs_deviation) + " over " +
                      std::to_string(cr.comparisons) + " comparisons"});
  report["oracle"] = Json::parse(oracle::to_json(cr));
}

int cmd_gamecheck(const CLI::App& sub, const GamecheckArgs& a) {
  if (a.value.empty() == a.weights.empty()) {
    throw InputError("give exactly one of --value and --weights");
  }
  if (a.trials < 1) throw InputError("--trials must be positive");
  std::vector<Row> rows;
  Json report{{"trials", a.trials}, {"seed", a.seed}};
  if (!a.value.empty()) {
    report["value"] = a.value;
    if (a.value == "shapley" || a.value == "banzhaf") {
      single_checks(a.value == "shapley" ? shapley_value() : banzhaf_value(), 8, a, rows,
                    report);
    } else {
      CoalitionalValueSpec spec;
      try {
        spec = CoalitionalValueSpec::by_name(a.value);
      } catch (const InvalidArgument& e) {
        throw InputError(e.what());
      }
      coalitional_checks(spec, a, rows, report);
    }
  } else {
    const Json doc = read_json_file(a.weights);
    report["value"] = doc.value("name", std::string("custom"));
    if (doc.contains("outer")) {
      const GameValue h1 = value_from_json(doc["outer"], a.weights);
      const GameValue h2 = value_from_json(doc.value("inner", Json("shapley")), a.weights);
      const std::string fam = doc.value("intermediate", std::string("modified-quotient"));
      IntermediateFamily family;
      if (fam == "modified-quotient") {
        family = IntermediateFamily::kModifiedQuotient;
      } else if (fam == "tsh-intermediate") {
        family = IntermediateFamily::kTshIntermediate;
      } else {
        throw InputError(a.weights + ": unknown intermediate '" + fam + "'");
      }
      CoalitionalValueSpec spec;
      try {
        spec = CoalitionalValueSpec::custom(report["value"], h1, h2, family, a.seed);
      } catch (const InvalidArgument& e) {
        throw InputError(std::string("custom value rejected: ") + e.what());
      }
      coalitional_checks(spec, a, rows, report);
    } else {
      single_checks(value_from_json(doc, a.weights), max_players(doc), a, rows, report);
    }
  }
  bool ok = true;
  std::cout << "property  result  expected  detail\n";
  for (const Row& r : rows) {
    const bool as_expected = !r.expected || *r.expected == r.passed;
    ok = ok && as_expected;
    std::cout << r.property << std::string(10 - std::min<std::size_t>(9, r.property.size()), ' ')
              << (r.passed ? "pass    " : "fail    ")
              << (r.expected ? (*r.expected ? "pass      " : "fail      ") : "-         ")
              << r.detail << (as_expected ? "" : "  UNEXPECTED") << "\n";
    report["table"].push_back({{"property", r.property},
                               {"passed", r.passed},
                               {"expected", r.expected ? Json(*r.expected) : Json(nullptr)},
                               {"detail", r.detail}});
  }
  report["all_expected"] = ok;
  if (!a.out.empty()) {
    ensure_dir(a.out);
    write_json_file(report, join_path(a.out, "gamecheck.json"));
    write_manifest(sub, a.out, a.seed, {"gamecheck.json"});
  }
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Group explanations of models from cooperative game values"};
  try {
    env_workers = default_workers();
  } catch (const InputError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kInputError;
  }
  app.require_subcommand(1);
  std::string config_path;

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "sample a synthetic dataset");
  g->add_option("--family", gen.family,
                "mictest, pedagogical[:delta], correlated:<rho>, near-duplicates:<delta>")
      ->required();
  g->add_option("--samples", gen.samples, "number of rows");
  g->add_option("--seed", gen.seed, "random seed");
  g->add_option("--out", gen.out, "output directory")->required();
  g->add_flag("--response", gen.response, "append the response column when defined");

  ClusterArgs cl;
  auto* c = app.add_subcommand("cluster", "MIC dissimilarity and average-linkage tree");
  c->add_option("--data", cl.data, "CSV of predictors")->required();
  c->add_option("--features", cl.features, "comma-separated column names to use");
  c->add_option("--threshold", cl.threshold, "cut level for the reported partition");
  c->add_option("--mic-b-exponent", cl.b_exponent, "MIC grid exponent");
  c->add_option("--workers", cl.workers, "worker threads")->default_val(env_workers);
  c->add_option("--out", cl.out, "output directory")->required();

  ExplainArgs ex;
  auto* e = app.add_subcommand("explain", "explanation matrices for a model");
  add_explain_options(e, ex, false);

  ExplainArgs dg;
  auto* d = app.add_subcommand("diagnose", "stability of explanations between two models");
  add_explain_options(d, dg, true);

  GamecheckArgs gc;
  auto* k = app.add_subcommand("gamecheck", "axiom and oracle checks for a value");
  k->add_option("--value", gc.value, "value name");
  k->add_option("--weights", gc.weights, "custom value JSON file");
  k->add_option("--trials", gc.trials, "random trials per property");
  k->add_option("--seed", gc.seed, "random seed");
  k->add_option("--out", gc.out, "optional output directory");

  for (CLI::App* sub : {g, c, e, d, k}) {
    sub->add_option("--config", config_path, "JSON file with option values (flags win)");
  }

  try {
    // Required options may come from the config file, so they are checked
    // after it is merged.
    std::vector<std::pair<CLI::App*, CLI::Option*>> required;
    for (CLI::App* sub : app.get_subcommands({})) {
      for (CLI::Option* opt : sub->get_options()) {
        if (opt->get_required()) {
          required.emplace_back(sub, opt);
          opt->required(false);
        }
      }
    }
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& h) {
      return app.exit(h);
    } catch (const CLI::ParseError& pe) {
      app.exit(pe);
      return kInputError;
    }
    CLI::App* active = app.get_subcommands().front();
    if (!config_path.empty()) apply_config_file(*active, config_path);
    for (auto& [owner, opt] : required) {
      if (owner == active && opt->count() == 0) {
        throw InputError(opt->get_name() + " is required");
      }
    }
    const std::string name = active->get_name();
    if (name == "generate") return cmd_generate(*active, gen);
    if (name == "cluster") return cmd_cluster(*active, cl);
    if (name == "explain") return cmd_explain(*active, ex);
    if (name == "diagnose") return cmd_diagnose(*active, dg);
    return cmd_gamecheck(*active, gc);
  } catch (const InputError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kInputError;
  } catch (const InvalidArgument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kInputError;
  } catch (const Unsupported& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kInputError;
  } catch (const ProtocolError& err) {
    std::cerr << "model protocol error: " << err.what() << "\n";
    return kProtocolError;
  } catch (const InvariantError& err) {
    std::cerr << "invariant violated: " << err.what() << "\n";
    return kInternal;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << "\n";
    return kInternal;
  }
}

}  // namespace coalex::cli
