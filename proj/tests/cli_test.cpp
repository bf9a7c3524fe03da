#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "pulsom/cli/commands.hpp"
#include "pulsom/cli/config.hpp"
#include "pulsom/error.hpp"
#include "test_util.hpp"

namespace pulsom {
namespace {

namespace fs = std::filesystem;
using testing::read_text;
using testing::run_cli;
using testing::temp_dir;
using testing::write_text;

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

// ---------------------------------------------------------------------------
// Config parsing

TEST(Config, DefaultsAndOverrides) {
  std::istringstream in("# comment\nrun.model = ssom   # trailing\nlattice.rows = 10\n\nstdp.variant = panchev\n");
  const cli::RunConfig cfg = cli::parse_config(in, "t.cfg");
  EXPECT_EQ(cfg.model.type, ModelType::Ssom);
  EXPECT_EQ(cfg.model.rows, 10u);
  EXPECT_EQ(cfg.model.cols, 8u);
  EXPECT_EQ(cfg.model.stdp.variant, StdpVariant::Panchev);
  EXPECT_EQ(cfg.model.schedule.epochs, 80);
  EXPECT_DOUBLE_EQ(cfg.model.schedule.radius_start, 5.0);  // half the larger side
}

TEST(Config, ExplicitRadiusWins) {
  std::istringstream in("schedule.radius_start = 2.5\nlattice.cols = 20\n");
  EXPECT_DOUBLE_EQ(cli::parse_config(in, "t").model.schedule.radius_start, 2.5);
}

TEST(Config, RejectsUnknownDuplicateAndMalformed) {
  auto fails_with = [](const std::string& text, const std::string& needle) {
    std::istringstream in(text);
    try {
      cli::parse_config(in, "t.cfg");
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
      return;
    }
    ADD_FAILURE() << "accepted: " << text;
  };
  fails_with("lattice.depth = 3\n", "lattice.depth");
  fails_with("run.seed = 1\nrun.seed = 2\n", "duplicate");
  fails_with("lattice.rows = many\n", "lattice.rows");
  fails_with("run.model\n", "t.cfg:1");
  fails_with("run.model = kohonen\n", "run.model");
  fails_with("schedule.epochs = 0\n", "schedule");
  fails_with("rssom.alpha = 0\n", "alpha");
  fails_with("lin.lambda = 1.5\n", "lambda");
  fails_with("synth.separation = -1\n", "synth");
  fails_with("stdp.eta = 2\n", "stdp");
  fails_with("mfcc.hop = 100\n", "mfcc");
  fails_with("report.columns = a,b\n", "report.columns");
}

TEST(Config, MissingReferencedFileIsIoError) {
  std::istringstream in("data.train_csv = /nonexistent/train.csv\n");
  EXPECT_THROW(cli::parse_config(in, "t"), IoError);
}

TEST(Config, RelativePathsResolveAgainstConfigDir) {
  const fs::path dir = temp_dir("cfg_rel");
  write_text(dir / "train.csv", "utt_id,label,macro_class\n");
  write_text(dir / "run.cfg", "data.train_csv = train.csv\nrun.output_dir = out\n");
  const cli::RunConfig cfg = cli::load_config(dir / "run.cfg");
  EXPECT_EQ(cfg.train_csv, dir / "train.csv");
  EXPECT_EQ(cfg.output_dir, dir / "out");
}

TEST(Config, EffectiveConfigListsEveryKeyAndReparses) {
  std::istringstream in("run.model = lin\nlin.lambda = 0.25\nreport.columns = \nsynth.order_task = yes\n");
  const cli::RunConfig cfg = cli::parse_config(in, "t");
  std::ostringstream first;
  cli::write_effective_config(first, cfg);
  EXPECT_EQ(count_lines(first.str()), cli::config_keys().size());
  for (const auto& k : cli::config_keys())
    EXPECT_NE(first.str().find(k.key + " = "), std::string::npos) << k.key;

  std::istringstream again(first.str());
  std::ostringstream second;
  cli::write_effective_config(second, cli::parse_config(again, "effective"));
  EXPECT_EQ(first.str(), second.str());
}

// ---------------------------------------------------------------------------
// Commands

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& body) {
  const fs::path p = dir / name;
  write_text(p, body);
  return p;
}

TEST(Cli, HelpExitsZeroAndDocumentsEveryKey) {
  const auto r = run_cli({"--help"});
  EXPECT_EQ(r.code, 0);
  for (const auto& k : cli::config_keys()) {
    EXPECT_NE(r.out.find(k.key), std::string::npos) << k.key;
    EXPECT_FALSE(k.description.empty()) << k.key;
  }
  EXPECT_EQ(run_cli({"train", "--help"}).code, 0);
}

TEST(Cli, UsageErrorsAreConfigErrors) {
  EXPECT_EQ(run_cli({}).code, cli::kConfigError);
  EXPECT_EQ(run_cli({"train"}).code, cli::kConfigError);
  EXPECT_EQ(run_cli({"fly", "--config", "x"}).code, cli::kConfigError);
}

TEST(Cli, UnknownKeyExitsTwoNamingTheKey) {
  const fs::path dir = temp_dir("cli_unknown");
  const auto cfg = write_config(dir, "run.cfg", "run.model = som\nlattice.shape = hex\n");
  const auto r = run_cli({"train", "--config", cfg.string()});
  EXPECT_EQ(r.code, cli::kConfigError);
  EXPECT_NE(r.err.find("lattice.shape"), std::string::npos);
}

TEST(Cli, MissingConfigFileExitsThree) {
  EXPECT_EQ(run_cli({"train", "--config", "/nonexistent/run.cfg"}).code, cli::kIoError);
}

TEST(Cli, EpochsZeroExitsTwo) {
  const fs::path dir = temp_dir("cli_epochs");
  const auto cfg = write_config(dir, "run.cfg", "schedule.epochs = 0\nrun.output_dir = out\n");
  EXPECT_EQ(run_cli({"train", "--config", cfg.string()}).code, cli::kConfigError);
}

TEST(Cli, SynthWritesOneRowPerSequence) {
  const fs::path dir = temp_dir("cli_synth");
  const auto cfg = write_config(dir, "run.cfg",
                                "run.output_dir = out\nsynth.n_classes = 3\nsynth.samples_per_class = 50\n"
                                "synth.test_samples_per_class = 7\n");
  const auto r = run_cli({"synth", "--config", cfg.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(read_text(dir / "out/dataset.csv")), 151u);
  EXPECT_EQ(count_lines(read_text(dir / "out/dataset_test.csv")), 22u);
  EXPECT_NE(read_text(dir / "out/dataset.csv"), read_text(dir / "out/dataset_test.csv"));
}

TEST(Cli, SynthNonPositiveSeparationExitsTwo) {
  const fs::path dir = temp_dir("cli_sep");
  for (const char* sep : {"0", "-2"}) {
    const auto cfg = write_config(dir, "run.cfg", std::string("run.output_dir = out\nsynth.separation = ") + sep + "\n");
    EXPECT_EQ(run_cli({"synth", "--config", cfg.string()}).code, cli::kConfigError) << sep;
  }
}

TEST(Cli, RerunsAreByteIdentical) {
  const fs::path dir = temp_dir("cli_rerun");
  const auto cfg = write_config(dir, "run.cfg",
                                "run.model = rssom\nschedule.epochs = 5\nsynth.samples_per_class = 10\n"
                                "run.output_dir = out\n");
  const char* files[] = {"dataset.csv", "dataset_test.csv", "model.pulsom", "training_log.csv",
                         "effective-config", "run-manifest"};
  std::vector<std::string> first;
  for (int pass = 0; pass < 2; ++pass) {
    ASSERT_EQ(run_cli({"synth", "--config", cfg.string()}).code, 0);
    ASSERT_EQ(run_cli({"train", "--config", cfg.string()}).code, 0);
    for (std::size_t i = 0; i < std::size(files); ++i) {
      const std::string bytes = read_text(dir / "out" / files[i]);
      if (pass == 0) {
        first.push_back(bytes);
      } else {
        EXPECT_EQ(bytes, first[i]) << files[i];
      }
    }
    if (pass == 0) fs::remove_all(dir / "out");
  }
}

TEST(Cli, TrainWritesModelLogAndManifest) {
  const fs::path dir = temp_dir("cli_train");
  const auto cfg = write_config(dir, "run.cfg", "run.model = som\nrun.output_dir = out\n");
  const auto r = run_cli({"train", "--config", cfg.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(read_text(dir / "out/training_log.csv")), 81u);  // header + 80 epochs
  const std::string manifest = read_text(dir / "out/run-manifest");
  EXPECT_EQ(manifest.rfind("command train\n", 0), 0u);
  for (const char* f : {"effective-config", "model.pulsom", "training_log.csv"})
    EXPECT_NE(manifest.find(std::string(" ") + f + "\n"), std::string::npos) << f;
  // Nothing outside the output directory.
  std::vector<std::string> entries;
  for (const auto& e : fs::directory_iterator(dir)) entries.push_back(e.path().filename().string());
  std::ranges::sort(entries);
  EXPECT_EQ(entries, (std::vector<std::string>{"out", "run.cfg"}));
}

TEST(Cli, Sha256KnownVectors) {
  // FIPS 180-2 examples.
  EXPECT_EQ(cli::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(cli::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(cli::sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"),
            "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST(Cli, ManifestHashesMatchFileContents) {
  const fs::path dir = temp_dir("cli_hash");
  const auto cfg = write_config(dir, "run.cfg", "run.output_dir = out\nsynth.samples_per_class = 3\n");
  ASSERT_EQ(run_cli({"synth", "--config", cfg.string()}).code, 0);
  std::istringstream manifest(read_text(dir / "out/run-manifest"));
  std::string line;
  std::getline(manifest, line);
  EXPECT_EQ(line, "command synth");
  std::size_t listed = 0;
  for (std::string tag, hash, name; manifest >> tag >> hash >> name; ++listed) {
    EXPECT_EQ(tag, "sha256");
    EXPECT_EQ(hash, cli::sha256_hex(read_text(dir / "out" / name))) << name;
  }
  EXPECT_EQ(listed, 3u);  // effective-config and the two datasets
}

TEST(Cli, EvalSeparableTaskScoresHundred) {
  const fs::path dir = temp_dir("cli_eval");
  const auto cfg = write_config(dir, "run.cfg", "run.model = som\nrun.output_dir = out\n");
  ASSERT_EQ(run_cli({"train", "--config", cfg.string()}).code, 0);
  const auto r = run_cli({"eval", "--config", cfg.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("Average    100.00"), std::string::npos) << r.out;
  for (const char* f : {"report.txt", "report.csv", "confusion.csv"}) EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
}

TEST(Cli, EvalMissingModelExitsThree) {
  const fs::path dir = temp_dir("cli_nomodel");
  const auto cfg = write_config(dir, "run.cfg", "run.output_dir = out\n");
  EXPECT_EQ(run_cli({"eval", "--config", cfg.string()}).code, cli::kIoError);
  EXPECT_EQ(run_cli({"eval", "--config", cfg.string(), "--model", (dir / "none.pulsom").string()}).code,
            cli::kIoError);
}

TEST(Cli, EvalModelTypeMismatchExitsTwo) {
  const fs::path dir = temp_dir("cli_mismatch");
  const std::string common = "schedule.epochs = 2\nsynth.samples_per_class = 5\nrun.output_dir = out\n";
  const auto ssom = write_config(dir, "ssom.cfg", "run.model = ssom\n" + common);
  const auto lin = write_config(dir, "lin.cfg", "run.model = lin\n" + common);
  ASSERT_EQ(run_cli({"train", "--config", ssom.string()}).code, 0);
  const auto r = run_cli({"eval", "--config", lin.string(), "--model", (dir / "out/model.pulsom").string()});
  EXPECT_EQ(r.code, cli::kConfigError);
  EXPECT_NE(r.err.find("SSOM"), std::string::npos) << r.err;
}

TEST(Cli, FeaturesOnFixtureCorpus) {
  const fs::path dir = temp_dir("cli_features");
  testing::write_fixture_corpus(dir / "corpus");
  const auto cfg = write_config(dir, "run.cfg", "corpus.root = corpus\nrun.output_dir = out\n");
  const auto r = run_cli({"features", "--config", cfg.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("utterances 2"), std::string::npos);
  EXPECT_NE(r.out.find("segments 6"), std::string::npos);
  EXPECT_EQ(count_lines(read_text(dir / "out/dataset.csv")), 7u);
  EXPECT_EQ(count_lines(read_text(dir / "out/frames.csv")), 1u + 2u * 61u);
}

TEST(Cli, FeaturesMissingRootExitsThree) {
  const fs::path dir = temp_dir("cli_noroot");
  const auto cfg = write_config(dir, "run.cfg", "corpus.root = missing\nrun.output_dir = out\n");
  EXPECT_EQ(run_cli({"features", "--config", cfg.string()}).code, cli::kIoError);
}

TEST(Cli, FeaturesMalformedAlignmentExitsFourNamingFileAndLine) {
  const fs::path dir = temp_dir("cli_badphn");
  testing::write_fixture_corpus(dir / "corpus");
  write_text(dir / "corpus/dr2/mdef0/sa2.phn", "0 1600 h#\n1600 oops aa\n");
  const auto cfg = write_config(dir, "run.cfg", "corpus.root = corpus\nrun.output_dir = out\n");
  const auto r = run_cli({"features", "--config", cfg.string()});
  EXPECT_EQ(r.code, cli::kCorpusError);
  EXPECT_NE(r.err.find("sa2.phn:2"), std::string::npos) << r.err;
}

TEST(Cli, ReportComparesColumns) {
  const fs::path dir = temp_dir("cli_report");
  write_text(dir / "som/report.csv", "class,correct,total,rate\na,1,2,50\nb,2,2,100\n");
  write_text(dir / "lin/report.csv", "class,correct,total,rate\na,2,2,100\nb,2,2,100\n");
  const auto cfg = write_config(dir, "run.cfg",
                                "report.inputs = som/report.csv, lin/report.csv\nrun.output_dir = out\n");
  const auto r = run_cli({"report", "--config", cfg.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("som"), std::string::npos);
  EXPECT_NE(r.out.find("lin"), std::string::npos);
  EXPECT_EQ(read_text(dir / "out/comparison.txt"), r.out);
}

}  // namespace
}  // namespace pulsom
