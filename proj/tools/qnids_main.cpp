// SPDX-License-Identifier: Apache-2.0
//
// qnids — hybrid quantum/classical intrusion-detection workbench.
//
// One binary, seven verbs:
//   synth      generate a synthetic labeled dataset csv
//   prepare    ingest + clean + scale + reduce, write train/test splits
//   train      fit the configured model grid on the train split
//   evaluate   score trained models on the test split, emit report + alerts
//   kernel     dump a quantum model's Gram matrix over the train split
//   transpile  show circuit rewriting at optimization levels 0-3
//   report     render collected reports as an aligned table and csv
//
// Exit codes: 0 success, 1 usage or config-semantics error, 2 input-data
// error (missing/malformed files, unknown labels), 3 numerical failure.
#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qnids/circuit.hpp"
#include "qnids/dataset.hpp"
#include "qnids/errors.hpp"
#include "qnids/experiment.hpp"
#include "qnids/kernel.hpp"
#include "qnids/models_io.hpp"
#include "qnids/param_expr.hpp"
#include "qnids/preprocess.hpp"
#include "qnids/synthetic.hpp"
#include "qnids/transpiler.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qnids;

namespace {

// ---------------------------------------------------------------------------
// Options shared by every verb.

struct CliOptions {
  std::string config_path;
  std::vector<std::string> overrides;  // --set key=value, applied in order
  std::string out_dir = "out";
  std::string presets_path;  // --noise-presets; empty = search default spots
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  bool exact = false;
  std::optional<long long> shots;
  std::string noise;  // preset name or "ideal"
};

void add_common_options(CLI::App* cmd, CliOptions& opt) {
  cmd->add_option("-c,--config", opt.config_path, "experiment config json file");
  cmd->add_option("--set", opt.overrides,
                  "override a config key, dotted path (e.g. eval.shots=1024, "
                  "models.0.C=0.5); value is parsed as json, else kept as a string")
      ->type_name("KEY=VALUE");
  cmd->add_option("-o,--out", opt.out_dir, "artifact directory [out]");
  cmd->add_option("--noise-presets", opt.presets_path,
                  "noise preset table [configs/noise_presets.json]");
  cmd->add_option("--seed", opt.seed, "master seed; every stage derives from it");
  cmd->add_option("--jobs", opt.jobs, "worker threads");
  auto* exact = cmd->add_flag("--exact", opt.exact, "exact expectation values (no sampling)");
  cmd->add_option("--shots", opt.shots, "sample with this many shots per estimate")
      ->excludes(exact);
  cmd->add_option("--noise", opt.noise, "noise preset name (see --noise-presets file)");
}

// ---------------------------------------------------------------------------
// Config assembly: file, then --set overrides, then dedicated flags.  The
// manifest hashes the fully resolved json, so reruns with the same inputs
// hash identically no matter how the values were supplied.

json parse_override_value(const std::string& raw) {
  json parsed = json::parse(raw, nullptr, /*allow_exceptions=*/false);
  if (!parsed.is_discarded()) return parsed;
  return raw;
}

bool is_index(const std::string& part) {
  return !part.empty() &&
         std::all_of(part.begin(), part.end(), [](unsigned char c) { return std::isdigit(c); });
}

void apply_override(json& root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw std::invalid_argument("--set expects KEY=VALUE, got '" + assignment + "'");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  std::vector<std::string> parts;
  std::stringstream stream(key);
  for (std::string part; std::getline(stream, part, '.');) {
    if (part.empty()) throw std::invalid_argument("--set: empty path segment in '" + key + "'");
    parts.push_back(part);
  }
  if (parts.empty()) throw std::invalid_argument("--set: empty key in '" + assignment + "'");

  json* node = &root;
  for (const std::string& part : parts) {
    if (node->is_array() && is_index(part)) {
      const std::size_t index = std::stoul(part);
      if (index >= node->size()) {
        throw std::invalid_argument("--set: index " + part + " out of range in '" + key + "'");
      }
      node = &(*node)[index];
      continue;
    }
    if (node->is_null()) *node = json::object();
    if (!node->is_object()) {
      throw std::invalid_argument("--set: '" + part + "' does not address an object in '" + key +
                                  "'");
    }
    node = &(*node)[part];
  }
  *node = parse_override_value(value);
}

json resolve_config_json(const CliOptions& opt) {
  json j = opt.config_path.empty() ? json::object() : load_json(opt.config_path);
  if (!j.is_object()) throw DataError("config file must hold a json object: " + opt.config_path);
  for (const std::string& assignment : opt.overrides) apply_override(j, assignment);
  if (opt.seed) j["seed"] = *opt.seed;
  if (opt.jobs) j["eval"]["jobs"] = *opt.jobs;
  if (opt.exact) j["eval"]["exec"] = "exact";
  if (opt.shots) {
    j["eval"]["exec"] = "shots";
    j["eval"]["shots"] = *opt.shots;
  }
  if (!opt.noise.empty()) j["eval"]["noise"] = opt.noise;
  return j;
}

// Built-in table first, then the preset file overrides and extends it.
std::map<std::string, NoiseParams> resolve_noise_presets(const CliOptions& opt) {
  std::map<std::string, NoiseParams> presets = builtin_noise_presets();
  std::vector<std::string> candidates;
  if (!opt.presets_path.empty()) {
    if (!fs::exists(opt.presets_path)) {
      throw DataError("noise presets file not found: " + opt.presets_path);
    }
    candidates.push_back(opt.presets_path);
  } else {
    candidates.push_back("configs/noise_presets.json");
#ifdef QNIDS_BUNDLED_PRESETS
    candidates.push_back(QNIDS_BUNDLED_PRESETS);
#endif
  }
  for (const std::string& candidate : candidates) {
    if (!fs::exists(candidate)) continue;
    for (const auto& [name, params] : load_noise_presets(candidate)) presets[name] = params;
    break;
  }
  return presets;
}

// Everything a verb needs, resolved once after parsing.
struct VerbContext {
  json config_json;
  ExperimentConfig config;
  fs::path out;
  std::string command;  // the invocation, for the manifest
};

VerbContext make_context(const CliOptions& opt, const std::string& command) {
  VerbContext ctx;
  ctx.config_json = resolve_config_json(opt);
  ctx.config = experiment_config_from_json(ctx.config_json, resolve_noise_presets(opt));
  ctx.out = opt.out_dir;
  ctx.command = command;
  return ctx;
}

void write_manifest(const VerbContext& ctx, const std::string& verb) {
  json m;
  m["verb"] = verb;
  m["command"] = ctx.command;
  m["config_hash"] = config_hash(ctx.config_json);
  m["defaults_hash"] = defaults_hash();
  m["seed"] = ctx.config.seed;
  fs::create_directories(ctx.out);
  save_json(m, (ctx.out / ("manifest_" + verb + ".json")).string());
}

// ---------------------------------------------------------------------------
// Dataset plumbing shared by synth / prepare / train / kernel.

std::string dataset_display_name(const VerbContext& ctx) {
  if (!ctx.config.dataset_name.empty()) return ctx.config.dataset_name;
  if (!ctx.config.dataset_path.empty()) return fs::path(ctx.config.dataset_path).stem().string();
  if (ctx.config.generate) return synthetic_kind_name(ctx.config.generate->kind);
  return "dataset";
}

Dataset resolve_dataset(const VerbContext& ctx) {
  if (!ctx.config.dataset_path.empty()) {
    return ingest_csv(ctx.config.dataset_path, ctx.config.preprocess);
  }
  const fs::path synth_csv = ctx.out / "dataset.csv";
  if (fs::exists(synth_csv)) return ingest_csv(synth_csv.string(), ctx.config.preprocess);
  if (ctx.config.generate) return make_synthetic(*ctx.config.generate);
  throw DataError(
      "no dataset: set dataset.path, add a dataset.generate block, or run synth first");
}

struct Prepared {
  Dataset train;
  Dataset test;
  std::string dataset_name;
};

Prepared prepare_splits(const VerbContext& ctx, bool verbose) {
  const Dataset full = resolve_dataset(ctx);
  auto [train, test] = preprocess(full, ctx.config.preprocess);
  fs::create_directories(ctx.out);
  write_dataset_csv(train, (ctx.out / "train.csv").string());
  write_dataset_csv(test, (ctx.out / "test.csv").string());

  json meta;
  meta["dataset_name"] = dataset_display_name(ctx);
  meta["source"] = full.source;
  meta["class_names"] = train.class_names;
  meta["feature_names"] = train.feature_names;
  meta["train_rows"] = train.size();
  meta["test_rows"] = test.size();
  meta["transform_log"] = train.transform_log;
  save_json(meta, (ctx.out / "meta.json").string());

  if (verbose) {
    std::cout << "prepared " << train.size() << " train / " << test.size() << " test rows, "
              << train.dim() << " features -> " << (ctx.out / "train.csv").string() << ", "
              << (ctx.out / "test.csv").string() << '\n';
  }
  return Prepared{std::move(train), std::move(test), meta["dataset_name"].get<std::string>()};
}

Prepared load_or_prepare(const VerbContext& ctx) {
  const fs::path meta_path = ctx.out / "meta.json";
  if (!fs::exists(meta_path) || !fs::exists(ctx.out / "train.csv") ||
      !fs::exists(ctx.out / "test.csv")) {
    return prepare_splits(ctx, /*verbose=*/true);
  }
  const json meta = load_json(meta_path.string());
  const auto class_names = meta.at("class_names").get<std::vector<std::string>>();
  Prepared p;
  p.train = read_labeled_csv((ctx.out / "train.csv").string(), "label", class_names);
  p.test = read_labeled_csv((ctx.out / "test.csv").string(), "label", class_names);
  p.dataset_name = meta.value("dataset_name", std::string("dataset"));
  return p;
}

void require_models(const VerbContext& ctx) {
  if (ctx.config.models.empty()) {
    throw DataError("config declares no models; add a 'models' array");
  }
}

// ---------------------------------------------------------------------------
// Verbs.

int cmd_synth(const VerbContext& ctx) {
  if (!ctx.config.generate) {
    throw DataError("synth needs a dataset.generate block in the config");
  }
  const Dataset ds = make_synthetic(*ctx.config.generate);
  fs::create_directories(ctx.out);
  const fs::path path = ctx.out / "dataset.csv";
  write_dataset_csv(ds, path.string());
  write_manifest(ctx, "synth");

  std::cout << "wrote " << path.string() << ": " << ds.size() << " rows, "
            << ds.class_names.size() << " classes (";
  for (std::size_t c = 0; c < ds.class_names.size(); ++c) {
    std::cout << (c ? ", " : "") << ds.class_names[c];
  }
  std::cout << ")\n";
  return 0;
}

int cmd_prepare(const VerbContext& ctx) {
  prepare_splits(ctx, /*verbose=*/true);
  write_manifest(ctx, "prepare");
  return 0;
}

std::string trace_path(const VerbContext& ctx, const TrainedModel& model, std::size_t index) {
  std::string name = "trace_" + model.spec.id;
  if (model.mode == "multiclass") name += "_" + model.class_names[index];
  return (ctx.out / "traces" / (name + ".csv")).string();
}

int cmd_train(const VerbContext& ctx) {
  require_models(ctx);
  const Prepared data = load_or_prepare(ctx);

  const std::string mode = resolve_mode(ctx.config, data.train);
  BinaryMapping mapping;
  if (mode == "binary") {
    mapping = binary_mapping(data.train, ctx.config.preprocess.positive_classes);
  }
  const Executor exec(ctx.config.eval);

  fs::create_directories(ctx.out / "models");
  fs::create_directories(ctx.out / "traces");
  for (const ModelSpec& spec : ctx.config.models) {
    const TrainedModel model = train_model(spec, data.train, mode, mapping, exec);
    save_json(trained_model_to_json(model),
              (ctx.out / "models" / (spec.id + ".json")).string());
    for (std::size_t k = 0; k < model.traces.size(); ++k) {
      write_loss_trace_csv(trace_path(ctx, model, k), model.traces[k]);
    }

    std::cout << "trained " << spec.id << " (" << spec.type << ", " << mode << ")";
    if (!model.traces.empty()) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.6g", model.traces.back().loss);
      std::cout << ": final loss " << buf << " after " << model.traces.back().iterations
                << " iterations";
    } else if (spec.type == "rf") {
      std::cout << ": " << model.forest->trees.size() << " trees";
    } else {
      std::size_t support = 0;
      for (const auto& m : model.qsvm) support += m.support_rows.size();
      for (const auto& m : model.svm) support += m.support_rows.size();
      std::cout << ": " << support << " support rows";
    }
    std::cout << '\n';
  }
  write_manifest(ctx, "train");
  std::cout << "saved " << ctx.config.models.size() << " model(s) under "
            << (ctx.out / "models").string() << '\n';
  return 0;
}

int cmd_evaluate(const VerbContext& ctx) {
  require_models(ctx);
  const fs::path meta_path = ctx.out / "meta.json";
  if (!fs::exists(meta_path) || !fs::exists(ctx.out / "test.csv")) {
    throw DataError("no prepared splits under " + ctx.out.string() + "; run train first");
  }
  const json meta = load_json(meta_path.string());
  const auto class_names = meta.at("class_names").get<std::vector<std::string>>();
  const Dataset test = read_labeled_csv((ctx.out / "test.csv").string(), "label", class_names);
  const std::string dataset_name = meta.value("dataset_name", std::string("dataset"));
  const Executor exec(ctx.config.eval);

  json reports = json::array();
  for (const ModelSpec& spec : ctx.config.models) {
    const fs::path model_path = ctx.out / "models" / (spec.id + ".json");
    if (!fs::exists(model_path)) {
      throw DataError("missing trained model " + model_path.string() + "; run train first");
    }
    ModelReport report;
    try {
      const TrainedModel model = trained_model_from_json(load_json(model_path.string()));
      report = evaluate_model(model, test, exec);
    } catch (const std::exception& e) {
      report.model_id = spec.id;
      report.model_type = spec.type;
      report.mode = ctx.config.mode;
      report.error = e.what();
    }
    report.dataset = dataset_name;

    std::ofstream alerts((ctx.out / ("alerts_" + spec.id + ".ndjson")).string());
    for (const AlertRecord& alert : report.alerts) {
      alerts << json{{"row_index", alert.row_index},
                     {"predicted_class", alert.predicted_class},
                     {"score", alert.score}}
                    .dump()
             << '\n';
    }

    if (report.failed()) {
      std::cout << spec.id << ": failed (" << report.error << ")\n";
    } else {
      char f1[32], acc[32];
      std::snprintf(f1, sizeof(f1), "%.4f", report.metrics.macro_f1);
      std::snprintf(acc, sizeof(acc), "%.4f", report.metrics.accuracy);
      std::cout << spec.id << ": macro_f1 " << f1 << "  accuracy " << acc << "  alerts "
                << report.alerts.size() << '\n';
    }
    reports.push_back(model_report_to_json(report));
  }

  json out;
  out["dataset"] = dataset_name;
  out["reports"] = std::move(reports);
  save_json(out, (ctx.out / "report.json").string());
  write_manifest(ctx, "evaluate");
  std::cout << "wrote " << (ctx.out / "report.json").string() << '\n';
  return 0;
}

int cmd_kernel(const VerbContext& ctx, const std::string& model_id) {
  require_models(ctx);
  const ModelSpec* chosen = nullptr;
  for (const ModelSpec& spec : ctx.config.models) {
    const bool quantum = spec.type == "vqc" || spec.type == "qsvm" || spec.type == "qcnn";
    if (!quantum) continue;
    if (model_id.empty() || spec.id == model_id) {
      chosen = &spec;
      break;
    }
  }
  if (!chosen) {
    throw DataError(model_id.empty() ? "config has no quantum model to take a kernel from"
                                     : "no quantum model with id '" + model_id + "'");
  }

  const Prepared data = load_or_prepare(ctx);
  const Executor exec(ctx.config.eval);
  const KernelMatrix gram = kernel_matrix(chosen->feature_map, data.train.x, exec);

  const fs::path path = ctx.out / ("kernel_" + chosen->id + ".csv");
  std::ofstream out(path.string());
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& row : gram.values) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c ? "," : "") << format_double(row[c]);
    }
    out << '\n';
  }
  if (!out) throw DataError("write failed: " + path.string());
  write_manifest(ctx, "kernel");
  std::cout << "wrote " << path.string() << ": " << gram.rows() << " x " << gram.cols() << " ("
            << exec_mode_name(gram.mode) << ")\n";
  return 0;
}

int cmd_transpile(const VerbContext& ctx, const std::string& circuit_path) {
  std::ifstream in(circuit_path);
  if (!in) throw DataError("cannot read circuit file: " + circuit_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const Circuit circuit = Circuit::from_text(buffer.str());

  TranspileConfig base;
  if (ctx.config.eval.transpile) base = *ctx.config.eval.transpile;
  TranspileResult last;
  for (int level = 0; level <= 3; ++level) {
    TranspileConfig cfg = base;
    cfg.optimization_level = level;
    last = transpile(circuit, cfg);
    std::cout << "level " << level << ": " << circuit.size() << " -> "
              << last.circuit.size() << " instructions\n";
  }

  fs::create_directories(ctx.out);
  const fs::path out_path = ctx.out / "transpiled.txt";
  std::ofstream out(out_path.string());
  out << last.circuit.to_text();
  write_manifest(ctx, "transpile");
  std::cout << "wrote " << out_path.string() << " (level 3, initial layout "
            << layout_to_json(last.initial_layout) << ", final layout "
            << layout_to_json(last.final_layout) << ")\n";
  return 0;
}

int cmd_report(const VerbContext& ctx, std::vector<std::string> inputs) {
  if (inputs.empty()) inputs.push_back((ctx.out / "report.json").string());

  // model id -> dataset -> cell; insertion order preserved for rows/columns.
  std::vector<std::string> model_order;
  std::vector<std::string> dataset_order;
  std::map<std::string, std::map<std::string, std::string>> cells;
  auto note = [](std::vector<std::string>& order, const std::string& name) {
    if (std::find(order.begin(), order.end(), name) == order.end()) order.push_back(name);
  };

  for (const std::string& input : inputs) {
    const json j = load_json(input);
    const json rows = j.is_array() ? j : j.value("reports", json::array());
    for (const json& row : rows) {
      const std::string model = row.value("model_id", std::string("?"));
      const std::string dataset = row.value("dataset", std::string("dataset"));
      std::string cell = "failed";
      if (!row.contains("error")) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4f", row.value("macro_f1", 0.0));
        cell = buf;
      }
      note(model_order, model);
      note(dataset_order, dataset);
      cells[model][dataset] = cell;
    }
  }
  if (model_order.empty()) throw DataError("no model reports found in the given inputs");

  // Aligned text: first column model ids, one macro-F1 column per dataset.
  std::size_t id_width = std::string("model").size();
  for (const std::string& model : model_order) id_width = std::max(id_width, model.size());
  std::vector<std::size_t> widths;
  for (const std::string& ds : dataset_order) widths.push_back(std::max<std::size_t>(ds.size(), 6));

  std::ostringstream table;
  table << std::left << std::setw(static_cast<int>(id_width)) << "model";
  for (std::size_t c = 0; c < dataset_order.size(); ++c) {
    table << "  " << std::right << std::setw(static_cast<int>(widths[c])) << dataset_order[c];
  }
  table << '\n';
  for (const std::string& model : model_order) {
    table << std::left << std::setw(static_cast<int>(id_width)) << model;
    for (std::size_t c = 0; c < dataset_order.size(); ++c) {
      const auto& per_dataset = cells[model];
      const auto it = per_dataset.find(dataset_order[c]);
      table << "  " << std::right << std::setw(static_cast<int>(widths[c]))
            << (it == per_dataset.end() ? "-" : it->second);
    }
    table << '\n';
  }
  std::cout << table.str();

  fs::create_directories(ctx.out);
  std::ofstream text((ctx.out / "report.txt").string());
  text << table.str();
  std::ofstream csv((ctx.out / "report.csv").string());
  csv << "model";
  for (const std::string& ds : dataset_order) csv << ',' << ds;
  csv << '\n';
  for (const std::string& model : model_order) {
    csv << model;
    for (const std::string& ds : dataset_order) {
      const auto it = cells[model].find(ds);
      csv << ',' << (it == cells[model].end() ? "" : it->second);
    }
    csv << '\n';
  }
  write_manifest(ctx, "report");
  std::cout << "wrote " << (ctx.out / "report.csv").string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hybrid quantum/classical intrusion-detection workbench"};
  app.require_subcommand(1);

  CliOptions opt;
  auto* synth = app.add_subcommand("synth", "generate a synthetic labeled dataset");
  auto* prepare = app.add_subcommand("prepare", "build train/test splits from the dataset");
  auto* train = app.add_subcommand("train", "fit the configured model grid");
  auto* evaluate = app.add_subcommand("evaluate", "score trained models on the test split");
  auto* kernel = app.add_subcommand("kernel", "write a quantum model's Gram matrix");
  auto* transpile = app.add_subcommand("transpile", "rewrite a circuit at levels 0-3");
  auto* report = app.add_subcommand("report", "tabulate model x dataset scores");
  for (CLI::App* cmd : {synth, prepare, train, evaluate, kernel, transpile, report}) {
    add_common_options(cmd, opt);
  }
  std::string kernel_model_id;
  kernel->add_option("--model", kernel_model_id, "model id to take the feature map from");
  std::string circuit_path;
  transpile->add_option("--circuit", circuit_path, "circuit text file")->required();
  std::vector<std::string> report_inputs;
  report->add_option("inputs", report_inputs, "report.json files to merge [out/report.json]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  std::string command;
  for (int a = 0; a < argc; ++a) {
    command += a ? " " : "";
    command += a == 0 ? fs::path(argv[0]).filename().string() : argv[a];
  }

  try {
    const VerbContext ctx = make_context(opt, command);
    if (app.got_subcommand(synth)) return cmd_synth(ctx);
    if (app.got_subcommand(prepare)) return cmd_prepare(ctx);
    if (app.got_subcommand(train)) return cmd_train(ctx);
    if (app.got_subcommand(evaluate)) return cmd_evaluate(ctx);
    if (app.got_subcommand(kernel)) return cmd_kernel(ctx, kernel_model_id);
    if (app.got_subcommand(transpile)) return cmd_transpile(ctx, circuit_path);
    if (app.got_subcommand(report)) return cmd_report(ctx, report_inputs);
    return 1;  // unreachable: require_subcommand(1)
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return 3;
  }
}
