#include "pulsom/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "pulsom/error.hpp"

namespace pulsom::cli {

namespace fs = std::filesystem;

namespace {

struct ParseState {
  RunConfig cfg;
  double radius_start = 0.0;  // 0: half the larger lattice side
  fs::path base_dir;
};

using Setter = std::function<void(ParseState&, const std::string&)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct KeyDef {
  KeyDoc doc;
  Setter set;
  Getter get;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::ranges::transform(s, s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

double to_double(const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError("expected a number, got '" + v + "'");
  return out;
}

std::uint64_t to_uint(const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("expected a non-negative integer, got '" + v + "'");
  return out;
}

int to_int(const std::string& v) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("expected an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& v) {
  const std::string s = lower(v);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("expected true or false, got '" + v + "'");
}

fs::path to_path(const ParseState& st, const std::string& v) {
  if (v.empty()) return {};
  const fs::path p(v);
  return p.is_absolute() || st.base_dir.empty() ? p : st.base_dir / p;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= v.size()) {
    const auto comma = v.find(',', pos);
    const std::string item = trim(v.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
  return out;
}

std::string str(double v) { return format_real(v); }
std::string str(bool v) { return v ? "true" : "false"; }
std::string str(std::size_t v) { return std::to_string(v); }

#define PULSOM_REAL(key, field, doc)                                              \
  KeyDef {                                                                        \
    {key, doc}, [](ParseState& st, const std::string& v) { st.cfg.field = to_double(v); }, \
        [](const RunConfig& c) { return str(c.field); }                           \
  }
#define PULSOM_SIZE(key, field, doc)                                                       \
  KeyDef {                                                                                 \
    {key, doc}, [](ParseState& st, const std::string& v) {                                 \
      st.cfg.field = static_cast<std::size_t>(to_uint(v));                                 \
    },                                                                                     \
        [](const RunConfig& c) { return str(static_cast<std::size_t>(c.field)); }          \
  }
#define PULSOM_BOOL(key, field, doc)                                                     \
  KeyDef {                                                                               \
    {key, doc}, [](ParseState& st, const std::string& v) { st.cfg.field = to_bool(v); }, \
        [](const RunConfig& c) { return str(c.field); }                                  \
  }

const std::vector<KeyDef>& key_defs() {
  static const std::vector<KeyDef> defs = {
      {{"run.model", "model type: som, ssom, rssom or lin"},
       [](ParseState& st, const std::string& v) {
         try {
           st.cfg.model.type = parse_model_type(v);
         } catch (const Error& e) {
           throw ConfigError(e.what());
         }
       },
       [](const RunConfig& c) { return lower(std::string(to_string(c.model.type))); }},
      {{"run.seed", "seed for initialisation and sample order"},
       [](ParseState& st, const std::string& v) { st.cfg.seed = to_uint(v); },
       [](const RunConfig& c) { return std::to_string(c.seed); }},
      {{"run.output_dir", "directory receiving every output file"},
       [](ParseState& st, const std::string& v) { st.cfg.output_dir = to_path(st, v); },
       [](const RunConfig& c) { return c.output_dir.string(); }},

      PULSOM_SIZE("lattice.rows", model.rows, "lattice rows"),
      PULSOM_SIZE("lattice.cols", model.cols, "lattice columns"),

      {{"schedule.epochs", "training epochs"},
       [](ParseState& st, const std::string& v) { st.cfg.model.schedule.epochs = to_int(v); },
       [](const RunConfig& c) { return std::to_string(c.model.schedule.epochs); }},
      PULSOM_REAL("schedule.lr_start", model.schedule.lr_start, "learning rate at the first epoch"),
      PULSOM_REAL("schedule.lr_end", model.schedule.lr_end, "learning rate at the last epoch"),
      {{"schedule.radius_start", "neighbourhood radius at the first epoch; 0 uses half the larger lattice side"},
       [](ParseState& st, const std::string& v) { st.radius_start = to_double(v); },
       [](const RunConfig& c) { return str(c.model.schedule.radius_start); }},
      PULSOM_REAL("schedule.radius_end", model.schedule.radius_end, "neighbourhood radius at the last epoch"),

      {{"stdp.variant", "plasticity law: additive, panchev, soula or multiplicative"},
       [](ParseState& st, const std::string& v) {
         try {
           st.cfg.model.stdp.variant = parse_stdp_variant(lower(v));
         } catch (const Error& e) {
           throw ConfigError(e.what());
         }
       },
       [](const RunConfig& c) { return std::string(to_string(c.model.stdp.variant)); }},
      PULSOM_REAL("stdp.a_plus", model.stdp.window.a_plus, "window amplitude for pre-before-post pairs"),
      PULSOM_REAL("stdp.a_minus", model.stdp.window.a_minus, "window amplitude for post-before-pre pairs"),
      PULSOM_REAL("stdp.tau_plus_ms", model.stdp.window.tau_plus, "window time constant (ms), pre-before-post side"),
      PULSOM_REAL("stdp.tau_minus_ms", model.stdp.window.tau_minus, "window time constant (ms), post-before-pre side"),
      PULSOM_REAL("stdp.eta", model.stdp.eta, "learning rate of the multiplicative laws, in (0, 1]"),
      PULSOM_REAL("stdp.w_max", model.stdp.w_max, "upper weight bound"),
      PULSOM_BOOL("stdp.flip_branches", model.stdp.flip_branches,
                  "apply the target-seeking form on the pre-before-post side"),

      PULSOM_REAL("ssom.t_max_ms", model.spiking.timing.t_max, "latency-code horizon (ms)"),
      PULSOM_REAL("ssom.t_ref_ms", model.spiking.timing.t_ref, "units firing later than this are silent (ms)"),
      PULSOM_REAL("ssom.s_radius", model.spiking.timing.s_radius,
                  "spatial learning radius in lattice units; 0 follows the schedule radius"),
      PULSOM_REAL("ssom.sim_step_ms", model.spiking.timing.sim_step, "simulation step (ms)"),
      PULSOM_REAL("ssom.tau_psp_ms", model.spiking.timing.tau_psp, "postsynaptic trace time constant (ms)"),

      PULSOM_REAL("lateral.excite_radius", model.spiking.lateral.excite_radius,
                  "excitatory radius in lattice units; 0 follows the schedule radius"),
      PULSOM_REAL("lateral.excite_gain", model.spiking.lateral.excite_gain, "pull toward the winner's firing time"),
      PULSOM_REAL("lateral.inhibit_gain", model.spiking.lateral.inhibit_gain,
                  "delay per lattice unit beyond the excitatory radius (in simulation steps)"),

      PULSOM_REAL("rssom.alpha", model.alpha, "leaking coefficient, in (0, 1]"),
      PULSOM_REAL("lin.lambda", model.lambda, "memory depth, in [0, 1]"),
      PULSOM_BOOL("lin.scale_input_by_lambda", model.scale_input_by_lambda,
                  "multiply the matching term by lambda"),
      PULSOM_BOOL("som.concat", model.concat, "plain SOM: train on whole sequences concatenated into one vector"),

      PULSOM_REAL("mfcc.preemph", mfcc.preemph_a, "pre-emphasis coefficient, in [0.9, 1.0]"),
      PULSOM_SIZE("mfcc.frame_len", mfcc.frame_len, "samples per frame"),
      PULSOM_SIZE("mfcc.hop", mfcc.hop, "frame shift; must be half of frame_len"),
      PULSOM_SIZE("mfcc.n_filters", mfcc.n_filters, "mel filters"),
      PULSOM_SIZE("mfcc.n_coeffs", mfcc.n_coeffs, "cepstral coefficients kept per frame"),
      PULSOM_SIZE("mfcc.fft_size", mfcc.fft_size, "FFT length (power of two, >= frame_len)"),
      PULSOM_BOOL("mfcc.use_power", mfcc.use_power, "feed |X|^2 (true) or |X| (false) to the filterbank"),

      {{"data.source", "training/test data: csv or synth"},
       [](ParseState& st, const std::string& v) {
         const std::string s = lower(v);
         if (s == "csv") {
           st.cfg.source = DataSource::Csv;
         } else if (s == "synth") {
           st.cfg.source = DataSource::Synth;
         } else {
           throw ConfigError("data.source must be csv or synth, got '" + v + "'");
         }
       },
       [](const RunConfig& c) { return std::string(c.source == DataSource::Csv ? "csv" : "synth"); }},
      {{"data.train_csv", "dataset CSV used for training and calibration"},
       [](ParseState& st, const std::string& v) { st.cfg.train_csv = to_path(st, v); },
       [](const RunConfig& c) { return c.train_csv.string(); }},
      {{"data.test_csv", "dataset CSV used for evaluation; empty evaluates on the training set"},
       [](ParseState& st, const std::string& v) { st.cfg.test_csv = to_path(st, v); },
       [](const RunConfig& c) { return c.test_csv.string(); }},

      {{"corpus.root", "corpus root laid out as <dialect>/<speaker>/<utt>.{wav,phn,wrd}"},
       [](ParseState& st, const std::string& v) { st.cfg.corpus_root = to_path(st, v); },
       [](const RunConfig& c) { return c.corpus_root.string(); }},
      {{"corpus.filter", "keep utterances whose relative path contains this text"},
       [](ParseState& st, const std::string& v) { st.cfg.corpus_filter = v; },
       [](const RunConfig& c) { return c.corpus_filter; }},
      {{"corpus.kind", "segment labels: phn or wrd"},
       [](ParseState& st, const std::string& v) {
         const std::string s = lower(v);
         if (s == "phn") {
           st.cfg.corpus_kind = AlignmentKind::Phone;
         } else if (s == "wrd") {
           st.cfg.corpus_kind = AlignmentKind::Word;
         } else {
           throw ConfigError("corpus.kind must be phn or wrd, got '" + v + "'");
         }
       },
       [](const RunConfig& c) { return std::string(c.corpus_kind == AlignmentKind::Phone ? "phn" : "wrd"); }},
      PULSOM_SIZE("corpus.frames", corpus_frames, "frames taken from the middle of each segment"),

      PULSOM_SIZE("synth.n_classes", synth.n_classes, "classes (the order task always has 2)"),
      PULSOM_SIZE("synth.samples_per_class", synth.samples_per_class, "training sequences per class"),
      PULSOM_SIZE("synth.test_samples_per_class", synth_test_samples_per_class, "test sequences per class"),
      PULSOM_SIZE("synth.dim", synth.dim, "feature dimension"),
      PULSOM_SIZE("synth.frames", synth.frames, "frames per sequence"),
      PULSOM_REAL("synth.separation", synth.separation, "minimum distance between frame means, in noise sigmas"),
      PULSOM_BOOL("synth.order_task", synth.order_task, "two classes with the same frames in reversed order"),
      {{"synth.seed", "seed of the synthetic generator"},
       [](ParseState& st, const std::string& v) { st.cfg.synth.seed = to_uint(v); },
       [](const RunConfig& c) { return std::to_string(c.synth.seed); }},

      PULSOM_BOOL("eval.frame_vote", frame_vote, "calibrate and classify by every frame's winner instead of the last"),
      {{"eval.report_by", "score by label or by phoneme macro-class (macro)"},
       [](ParseState& st, const std::string& v) {
         const std::string s = lower(v);
         if (s == "label") {
           st.cfg.report_by = ReportBy::Label;
         } else if (s == "macro") {
           st.cfg.report_by = ReportBy::Macro;
         } else {
           throw ConfigError("eval.report_by must be label or macro, got '" + v + "'");
         }
       },
       [](const RunConfig& c) { return std::string(c.report_by == ReportBy::Label ? "label" : "macro"); }},

      {{"report.inputs", "comma-separated report.csv files to compare"},
       [](ParseState& st, const std::string& v) {
         st.cfg.report_inputs.clear();
         for (const auto& item : split_list(v)) st.cfg.report_inputs.push_back(to_path(st, item));
       },
       [](const RunConfig& c) {
         std::vector<std::string> items;
         for (const auto& p : c.report_inputs) items.push_back(p.string());
         return join(items);
       }},
      {{"report.columns", "comma-separated column titles, one per input"},
       [](ParseState& st, const std::string& v) { st.cfg.report_columns = split_list(v); },
       [](const RunConfig& c) { return join(c.report_columns); }},
  };
  return defs;
}

#undef PULSOM_REAL
#undef PULSOM_SIZE
#undef PULSOM_BOOL

void check_exists(const fs::path& p, const std::string& key) {
  if (!p.empty() && !fs::exists(p)) throw IoError(key + ": " + p.string() + " does not exist");
}

void validate(const RunConfig& c) {
  auto wrap = [](const char* key, auto&& fn) {
    try {
      fn();
    } catch (const DomainError& e) {
      throw ConfigError(std::string(key) + ": " + e.what());
    }
  };
  if (c.model.rows == 0 || c.model.cols == 0) throw ConfigError("lattice: rows and cols must be positive");
  wrap("schedule", [&] { c.model.schedule.validate(); });
  wrap("stdp", [&] {
    c.model.stdp.window.validate();
    c.model.stdp.validate();
  });
  wrap("ssom", [&] { c.model.spiking.timing.validate(); });
  wrap("lateral", [&] { c.model.spiking.lateral.validate(); });
  if (!(c.model.alpha > 0.0 && c.model.alpha <= 1.0)) throw ConfigError("rssom.alpha must lie in (0, 1]");
  if (!(c.model.lambda >= 0.0 && c.model.lambda <= 1.0)) throw ConfigError("lin.lambda must lie in [0, 1]");
  wrap("mfcc", [&] { c.mfcc.validate(); });
  if (c.corpus_frames == 0) throw ConfigError("corpus.frames must be positive");
  wrap("synth", [&] { c.synth.validate(); });
  if (c.synth_test_samples_per_class == 0)
    throw ConfigError("synth.test_samples_per_class must be positive");
  if (!c.report_columns.empty() && c.report_columns.size() != c.report_inputs.size())
    throw ConfigError("report.columns needs one title per entry of report.inputs");

  check_exists(c.train_csv, "data.train_csv");
  check_exists(c.test_csv, "data.test_csv");
  check_exists(c.corpus_root, "corpus.root");
  for (const auto& p : c.report_inputs) check_exists(p, "report.inputs");
}

}  // namespace

const std::vector<KeyDoc>& config_keys() {
  static const std::vector<KeyDoc> docs = [] {
    std::vector<KeyDoc> out;
    for (const auto& d : key_defs()) out.push_back(d.doc);
    return out;
  }();
  return docs;
}

RunConfig parse_config(std::istream& in, const std::string& name, const fs::path& base_dir) {
  std::map<std::string, const KeyDef*> index;
  for (const auto& d : key_defs()) index.emplace(d.doc.key, &d);

  ParseState st;
  st.base_dir = base_dir;
  std::set<std::string> seen;
  std::size_t lineno = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(name + ":" + std::to_string(lineno) + ": expected 'section.key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = index.find(key);
    if (it == index.end())
      throw ConfigError(name + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (!seen.insert(key).second)
      throw ConfigError(name + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    try {
      it->second->set(st, value);
    } catch (const ConfigError& e) {
      throw ConfigError(name + ":" + std::to_string(lineno) + ": " + key + ": " + e.what());
    }
  }

  RunConfig cfg = std::move(st.cfg);
  Schedule& s = cfg.model.schedule;
  s.radius_start = st.radius_start > 0.0
                       ? st.radius_start
                       : Schedule::for_lattice(cfg.model.rows, cfg.model.cols, s.epochs).radius_start;
  validate(cfg);
  return cfg;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  return parse_config(in, path.string(), path.parent_path());
}

void write_effective_config(std::ostream& out, const RunConfig& cfg) {
  for (const auto& d : key_defs()) out << d.doc.key << " = " << d.get(cfg) << '\n';
}

}  // namespace pulsom::cli
