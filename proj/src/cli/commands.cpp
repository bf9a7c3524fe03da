#include "pulsom/cli/commands.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "pulsom/cli/config.hpp"
#include "pulsom/error.hpp"
#include "pulsom/eval.hpp"

namespace pulsom::cli {

namespace fs = std::filesystem;

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw IoError("SHA-256 computation failed");
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i)
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return hex.str();
}

namespace {

/// Writes files under the output directory and records their hashes.
class OutputDir {
 public:
  explicit OutputDir(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_))
      throw IoError("cannot create output directory " + dir_.string());
  }

  fs::path path(const std::string& name) const { return dir_ / name; }

  void write(const std::string& name, const std::string& content) {
    const fs::path p = path(name);
    std::ofstream out(p, std::ios::binary);
    if (!out) throw IoError("cannot write " + p.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("failed writing " + p.string());
    hashes_[name] = sha256_hex(content);
  }

  void write_manifest(const std::string& command) {
    std::ostringstream m;
    m << "command " << command << '\n';
    for (const auto& [name, hash] : hashes_) m << "sha256 " << hash << ' ' << name << '\n';
    const std::string content = m.str();
    std::ofstream out(path("run-manifest"), std::ios::binary);
    if (!out) throw IoError("cannot write " + path("run-manifest").string());
    out << content;
  }

 private:
  fs::path dir_;
  std::map<std::string, std::string> hashes_;
};

std::vector<SequenceSample> read_dataset(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw IoError("cannot open " + p.string());
  return read_dataset_csv(in, p.string());
}

SynthSpec test_spec(const RunConfig& cfg) {
  SynthSpec spec = cfg.synth;
  spec.samples_per_class = cfg.synth_test_samples_per_class;
  return spec;
}

std::vector<SequenceSample> train_split(const RunConfig& cfg) {
  if (cfg.source == DataSource::Synth) return synth_generate(cfg.synth, 0);
  if (cfg.train_csv.empty()) throw ConfigError("data.train_csv is required when data.source = csv");
  return read_dataset(cfg.train_csv);
}

std::vector<SequenceSample> test_split(const RunConfig& cfg) {
  if (cfg.source == DataSource::Synth) return synth_generate(test_spec(cfg), 1);
  return read_dataset(cfg.test_csv.empty() ? cfg.train_csv : cfg.test_csv);
}

std::string render(const auto& fn) {
  std::ostringstream s;
  fn(s);
  return s.str();
}

void cmd_features(const RunConfig& cfg, OutputDir& dir, std::ostream& out) {
  if (cfg.corpus_root.empty()) throw ConfigError("corpus.root is required by the features command");
  const auto utts = find_utterances(cfg.corpus_root, cfg.corpus_kind, cfg.corpus_filter);
  if (utts.empty())
    throw CorpusError(cfg.corpus_root.string(), 0, "no utterances with audio and alignment found");
  const CorpusFeatures features = extract_corpus(utts, cfg.corpus_kind, cfg.mfcc, cfg.corpus_frames);
  std::size_t n_frames = 0;
  for (const auto& [id, list] : features.frames) n_frames += list.size();
  dir.write("frames.csv", render([&](std::ostream& s) { write_frames_csv(s, features.frames); }));
  dir.write("dataset.csv", render([&](std::ostream& s) { write_dataset_csv(s, features.samples); }));
  out << "utterances " << utts.size() << "\nframes " << n_frames << "\nsegments "
      << features.samples.size() << '\n';
}

void cmd_synth(const RunConfig& cfg, OutputDir& dir, std::ostream& out) {
  const auto train = synth_generate(cfg.synth, 0);
  const auto test = synth_generate(test_spec(cfg), 1);
  dir.write("dataset.csv", render([&](std::ostream& s) { write_dataset_csv(s, train); }));
  dir.write("dataset_test.csv", render([&](std::ostream& s) { write_dataset_csv(s, test); }));
  out << "train sequences " << train.size() << "\ntest sequences " << test.size() << '\n';
}

void cmd_train(const RunConfig& cfg, OutputDir& dir, std::ostream& out) {
  const auto data = train_split(cfg);
  TrainingLog log;
  const Model model = train_model(cfg.model, data, cfg.seed, &log);
  dir.write("model.pulsom", render([&](std::ostream& s) { save_model(s, model); }));
  dir.write("training_log.csv", render([&](std::ostream& s) { log.write_csv(s); }));
  out << "trained " << to_string(model.params.type) << " on " << data.size() << " sequences for "
      << log.epochs.size() << " epochs\n";
  if (!log.epochs.empty()) out << "final quantization error " << format_real(log.epochs.back().qe) << '\n';
}

void cmd_eval(const RunConfig& cfg, const fs::path& model_path, OutputDir& dir, std::ostream& out) {
  std::ifstream in(model_path);
  if (!in) throw IoError("cannot open model " + model_path.string());
  const Model model = load_model(in);
  if (model.params.type != cfg.model.type)
    throw ConfigError("model file " + model_path.string() + " holds a " +
                      std::string(to_string(model.params.type)) + " map but run.model is " +
                      std::string(to_string(cfg.model.type)));

  const auto train = train_split(cfg);
  const auto test = test_split(cfg);
  const UnitLabelMap labels = calibrate(model, train, cfg.frame_vote);

  ClassOf class_of = [](const std::string& s) { return s; };
  std::vector<std::string> known;
  if (cfg.report_by == ReportBy::Macro) {
    class_of = [](const std::string& s) {
      try {
        return macro_class(s);
      } catch (const DomainError&) {
        return s;
      }
    };
    known = macro_class_names();
  }
  const EvalReport rep = report(model, labels, test, class_of, cfg.frame_vote, known);
  const std::string title = std::string(to_string(model.params.type));
  dir.write("report.txt", render([&](std::ostream& s) { rep.write_table(s, title); }));
  dir.write("report.csv", render([&](std::ostream& s) { rep.write_csv(s); }));
  dir.write("confusion.csv", render([&](std::ostream& s) { rep.write_confusion_csv(s); }));
  rep.write_table(out, title);
}

void cmd_report(const RunConfig& cfg, OutputDir& dir, std::ostream& out) {
  if (cfg.report_inputs.empty()) throw ConfigError("report.inputs is required by the report command");
  std::vector<EvalReport> reports;
  std::vector<std::string> columns = cfg.report_columns;
  for (const auto& p : cfg.report_inputs) {
    std::ifstream in(p);
    if (!in) throw IoError("cannot open " + p.string());
    reports.push_back(read_report_csv(in, p.string()));
    if (cfg.report_columns.empty()) columns.push_back(p.parent_path().filename().string());
  }
  const std::string table = render([&](std::ostream& s) { write_comparison_table(s, columns, reports); });
  dir.write("comparison.txt", table);
  out << table;
}

std::string keys_help() {
  std::ostringstream s;
  s << "Config keys (section.key = value; '#' starts a comment):\n";
  std::size_t width = 0;
  for (const auto& k : config_keys()) width = std::max(width, k.key.size());
  for (const auto& k : config_keys())
    s << "  " << std::left << std::setw(static_cast<int>(width) + 2) << k.key << k.description << '\n';
  s << "\nExit codes: 0 ok, 2 config, 3 I/O, 4 malformed corpus, 5 training divergence.";
  return s.str();
}

int run(const std::string& command, const fs::path& config_path, const std::string& model_arg,
        std::ostream& out) {
  const RunConfig cfg = load_config(config_path);
  OutputDir dir(cfg.output_dir);
  dir.write("effective-config", render([&](std::ostream& s) { write_effective_config(s, cfg); }));
  if (command == "features") {
    cmd_features(cfg, dir, out);
  } else if (command == "synth") {
    cmd_synth(cfg, dir, out);
  } else if (command == "train") {
    cmd_train(cfg, dir, out);
  } else if (command == "eval") {
    const fs::path model_path = model_arg.empty() ? dir.path("model.pulsom") : fs::path(model_arg);
    cmd_eval(cfg, model_path, dir, out);
  } else {
    cmd_report(cfg, dir, out);
  }
  dir.write_manifest(command);
  return kOk;
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"pulsom: spiking self-organising maps for speech sequences"};
  app.footer(keys_help());
  app.require_subcommand(1);

  std::string config_path;
  std::string model_path;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"features", "extract MFCC frames and segment samples from a corpus"},
      {"synth", "generate synthetic train/test datasets"},
      {"train", "train the configured map"},
      {"eval", "calibrate on the training split and score the test split"},
      {"report", "compare several report.csv files side by side"},
  };
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "run configuration file")->required();
    if (name == "eval") sub->add_option("--model", model_path, "model file (default <output_dir>/model.pulsom)");
    sub->footer(keys_help());
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, config_path, model_path, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DimensionError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const CorpusError& e) {
    err << "corpus error: " << e.what() << '\n';
    return kCorpusError;
  } catch (const DivergenceError& e) {
    err << "divergence: " << e.what() << '\n';
    return kDivergence;
  } catch (const fs::filesystem_error& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoError;
  }
}

}  // namespace pulsom::cli
