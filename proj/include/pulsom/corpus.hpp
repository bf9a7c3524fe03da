#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pulsom/error.hpp"
#include "pulsom/mfcc.hpp"
#include "pulsom/sequence.hpp"

namespace pulsom {

// ---------------------------------------------------------------------------
// NIST SPHERE audio

class SphereError : public CorpusError {
 public:
  enum class Kind { BadMagic, BadHeader, UnsupportedEncoding, Truncated };

  SphereError(Kind kind, const std::string& file, const std::string& what)
      : CorpusError(file, 0, what), kind_(kind) {}

  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// 16-bit single-channel PCM SPHERE file; samples scaled by 1/32768.
AudioBuffer read_sphere(const std::filesystem::path& path);
AudioBuffer parse_sphere(std::istream& in, const std::string& name);

/// Writes a 1024-byte-header SPHERE file with little-endian 16-bit PCM samples.
void write_sphere(const std::filesystem::path& path, const std::vector<std::int16_t>& samples,
                  int sample_rate);

// ---------------------------------------------------------------------------
// Time alignments

struct Segment {
  std::string utt_id;
  std::string label;
  std::int64_t start_sample = 0;
  std::int64_t end_sample = 0;
};

enum class AlignmentKind { Phone, Word };

/// `start end label` per line; segments must be ordered and non-overlapping.
std::vector<Segment> read_alignment(const std::filesystem::path& path, AlignmentKind kind);
std::vector<Segment> parse_alignment(std::istream& in, const std::string& name,
                                     const std::string& utt_id = {});

/// The k frames centred on the middle frame of the segment's span; short
/// spans are padded by replicating their edge frames.
SequenceSample middle_frames(const Segment& seg, const std::vector<Vector>& frames,
                             std::size_t hop, std::size_t frame_len, std::size_t k = 9);

// ---------------------------------------------------------------------------
// Phoneme macro-classes

/// The seven broad classes, in table order.
const std::vector<std::string>& macro_class_names();
/// Every phone symbol with its class, in table order.
const std::vector<std::pair<std::string, std::string>>& macro_class_table();

/// Macro-class of a phone symbol (with or without slashes). Throws DomainError if unknown.
std::string macro_class(std::string_view phone);

// ---------------------------------------------------------------------------
// Corpus traversal

struct Utterance {
  std::string utt_id;  // path relative to the root, without extension
  std::filesystem::path audio;
  std::filesystem::path alignment;
};

/// Utterances under `<root>/<dialect>/<speaker>/<utt>.{wav,phn,wrd}` whose relative
/// path contains `filter` (empty matches all), sorted by path.
std::vector<Utterance> find_utterances(const std::filesystem::path& root, AlignmentKind kind,
                                       std::string_view filter = {});

struct CorpusFeatures {
  std::vector<SequenceSample> samples;
  std::vector<std::pair<std::string, std::vector<Vector>>> frames;  // utt_id -> per-frame MFCCs
};

/// MFCC extraction and segment sampling for every utterance. `h#` and other
/// labels are kept; phones gain their macro-class when known.
CorpusFeatures extract_corpus(const std::vector<Utterance>& utterances, AlignmentKind kind,
                              const MfccConfig& cfg, std::size_t k = 9);

// ---------------------------------------------------------------------------
// Dataset cache: utt_id,label,macro_class,f0c1..f<k-1>c<dim>

void write_dataset_csv(std::ostream& out, const std::vector<SequenceSample>& data);
std::vector<SequenceSample> read_dataset_csv(std::istream& in, const std::string& name);

/// `utt_id,frame_idx,c1..c<dim>`
void write_frames_csv(std::ostream& out,
                      const std::vector<std::pair<std::string, std::vector<Vector>>>& frames);

// ---------------------------------------------------------------------------
// Synthetic sequences

struct SynthSpec {
  std::size_t n_classes = 3;
  std::size_t samples_per_class = 50;
  std::size_t dim = 12;
  std::size_t frames = 9;
  double separation = 5.0;  // minimum distance between frame means, in units of sigma
  bool order_task = false;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Per-class frame-mean sequences. With order_task there are two classes whose
/// mean lists are reverses of each other and share their first and last mean.
std::vector<std::vector<Vector>> synth_class_means(const SynthSpec& spec);

/// `samples_per_class` noisy sequences (unit variance) per class, grouped by class.
/// Different `stream` values share the class means but draw independent noise.
std::vector<SequenceSample> synth_generate(const SynthSpec& spec, std::uint64_t stream = 0);

/// Class labels used by the generator: "c0", "c1", ...
std::string synth_label(std::size_t cls);

}  // namespace pulsom
