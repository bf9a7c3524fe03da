#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pulsom/corpus.hpp"
#include "pulsom/mfcc.hpp"
#include "pulsom/model.hpp"

namespace pulsom::cli {

/// One documented configuration key.
struct KeyDoc {
  std::string key;
  std::string description;
};

/// Every accepted `section.key`, in file order.
const std::vector<KeyDoc>& config_keys();

enum class DataSource { Csv, Synth };
enum class ReportBy { Label, Macro };

/// Fully resolved run configuration. Fields not set in the file keep the
/// library defaults.
struct RunConfig {
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "out";

  ModelParams model;

  MfccConfig mfcc;

  DataSource source = DataSource::Synth;
  std::filesystem::path train_csv;
  std::filesystem::path test_csv;

  std::filesystem::path corpus_root;
  std::string corpus_filter;
  AlignmentKind corpus_kind = AlignmentKind::Phone;
  std::size_t corpus_frames = 9;

  SynthSpec synth;
  std::size_t synth_test_samples_per_class = 20;

  bool frame_vote = false;
  ReportBy report_by = ReportBy::Label;

  std::vector<std::filesystem::path> report_inputs;
  std::vector<std::string> report_columns;
};

/// Parse `section.key = value` lines (`#` starts a comment). Relative paths
/// resolve against the config file's directory. Throws ConfigError naming the
/// offending key or line.
RunConfig parse_config(std::istream& in, const std::string& name,
                       const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Every key with its effective value, in `config_keys()` order.
void write_effective_config(std::ostream& out, const RunConfig& cfg);

}  // namespace pulsom::cli
