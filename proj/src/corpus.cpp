#include "pulsom/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "pulsom/som.hpp"

namespace pulsom {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::ranges::transform(out, out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ls(line);
  while (std::getline(ls, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::vector<Segment> parse_alignment(std::istream& in, const std::string& name,
                                     const std::string& utt_id) {
  std::vector<Segment> segments;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    Segment seg;
    seg.utt_id = utt_id;
    std::string extra;
    if (!(ls >> seg.start_sample >> seg.end_sample >> seg.label) || (ls >> extra))
      throw CorpusError(name, lineno, "expected 'start end label'");
    if (seg.start_sample < 0 || seg.start_sample >= seg.end_sample)
      throw CorpusError(name, lineno, "segment start must precede its end");
    if (!segments.empty() && seg.start_sample < segments.back().end_sample)
      throw CorpusError(name, lineno, "segment overlaps or precedes the previous one");
    segments.push_back(std::move(seg));
  }
  return segments;
}

std::vector<Segment> read_alignment(const std::filesystem::path& path, AlignmentKind) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_alignment(in, path.string(), path.stem().string());
}

SequenceSample middle_frames(const Segment& seg, const std::vector<Vector>& frames,
                             std::size_t hop, std::size_t frame_len, std::size_t k) {
  if (k == 0) throw DomainError("need at least one frame per sample");
  if (hop == 0) throw DomainError("hop must be positive");
  const auto start = static_cast<std::size_t>(std::max<std::int64_t>(0, seg.start_sample));
  const auto end = static_cast<std::size_t>(std::max<std::int64_t>(0, seg.end_sample));
  // Frame i covers [i hop, i hop + frame_len) and belongs to the segment if it overlaps it.
  const std::size_t first = start < frame_len ? 0 : (start - frame_len) / hop + 1;
  std::size_t last = end == 0 ? 0 : (end - 1) / hop;
  if (end == 0 || frames.empty() || first >= frames.size() || first > last)
    throw DomainError("segment '" + seg.label + "' [" + std::to_string(seg.start_sample) + ", " +
                      std::to_string(seg.end_sample) + ") overlaps no frames");
  last = std::min(last, frames.size() - 1);

  const std::size_t count = last - first + 1;
  const auto center = static_cast<std::int64_t>(first + count / 2);
  SequenceSample sample;
  sample.label = seg.label;
  sample.utt_id = seg.utt_id;
  sample.replicated = count < k;
  for (std::size_t j = 0; j < k; ++j) {
    const std::int64_t idx = center - static_cast<std::int64_t>(k / 2) + static_cast<std::int64_t>(j);
    const auto clamped = std::clamp<std::int64_t>(idx, static_cast<std::int64_t>(first),
                                                  static_cast<std::int64_t>(last));
    sample.frames.push_back(frames[static_cast<std::size_t>(clamped)]);
  }
  return sample;
}

const std::vector<std::string>& macro_class_names() {
  static const std::vector<std::string> names = {"affricates", "stops",      "others", "nasals",
                                                 "semi-vowels", "fricatives", "vowels"};
  return names;
}

const std::vector<std::pair<std::string, std::string>>& macro_class_table() {
  static const std::vector<std::pair<std::string, std::string>> table = [] {
    const std::vector<std::pair<std::string, std::vector<std::string>>> groups = {
        {"affricates", {"jh", "ch"}},
        {"stops",
         {"b", "d", "g", "p", "t", "k", "dx", "q", "bcl", "dcl", "gcl", "pcl", "tcl", "kcl"}},
        {"others", {"pau", "epi", "h#"}},
        {"nasals", {"m", "n", "ng", "em", "en", "eng", "nx"}},
        {"semi-vowels", {"l", "r", "w", "y", "hh", "hv", "el"}},
        {"fricatives", {"s", "sh", "z", "zh", "f", "th", "v", "dh"}},
        {"vowels", {"iy", "ih", "eh", "ey", "ae", "aa", "aw", "ay", "ah", "ao",
                    "oy", "ow", "uh", "uw", "ux", "er", "ax", "ix", "axr", "axh"}},
    };
    std::vector<std::pair<std::string, std::string>> flat;
    for (const auto& [cls, phones] : groups) {
      for (const auto& p : phones) flat.emplace_back(p, cls);
    }
    return flat;
  }();
  return table;
}

std::string macro_class(std::string_view phone) {
  std::string key = lower(phone);
  if (key.size() >= 2 && key.front() == '/' && key.back() == '/') key = key.substr(1, key.size() - 2);
  if (key == "ax-h") key = "axh";  // TIMIT transcription spelling
  static const std::unordered_map<std::string, std::string> index = [] {
    std::unordered_map<std::string, std::string> m;
    for (const auto& [p, c] : macro_class_table()) m.emplace(p, c);
    return m;
  }();
  const auto it = index.find(key);
  if (it == index.end()) throw DomainError("unknown phone '" + std::string(phone) + "'");
  return it->second;
}

std::vector<Utterance> find_utterances(const std::filesystem::path& root, AlignmentKind kind,
                                       std::string_view filter) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) throw IoError("corpus root " + root.string() + " is not a directory");
  const std::string align_ext = kind == AlignmentKind::Phone ? ".phn" : ".wrd";
  const std::string needle = lower(filter);
  std::vector<Utterance> out;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file() || lower(entry.path().extension().string()) != ".wav") continue;
    const fs::path rel = fs::relative(entry.path(), root).replace_extension();
    const std::string rel_str = rel.generic_string();
    if (!needle.empty() && lower(rel_str).find(needle) == std::string::npos) continue;
    fs::path align = entry.path();
    align.replace_extension(align_ext);
    if (!fs::exists(align)) {
      std::string upper_ext = align_ext;
      std::ranges::transform(upper_ext, upper_ext.begin(), [](unsigned char c) { return std::toupper(c); });
      align.replace_extension(upper_ext);
      if (!fs::exists(align)) continue;
    }
    out.push_back({rel_str, entry.path(), align});
  }
  std::ranges::sort(out, {}, &Utterance::utt_id);
  return out;
}

CorpusFeatures extract_corpus(const std::vector<Utterance>& utterances, AlignmentKind kind,
                              const MfccConfig& cfg, std::size_t k) {
  CorpusFeatures out;
  for (const auto& utt : utterances) {
    const AudioBuffer audio = read_sphere(utt.audio);
    std::vector<Vector> frames;
    try {
      frames = mfcc_pipeline(audio, cfg);
    } catch (const DomainError& e) {
      throw CorpusError(utt.audio.string(), 0, e.what());
    }
    std::ifstream in(utt.alignment);
    if (!in) throw IoError("cannot open " + utt.alignment.string());
    for (const auto& seg : parse_alignment(in, utt.alignment.string(), utt.utt_id)) {
      SequenceSample sample;
      try {
        sample = middle_frames(seg, frames, cfg.hop, cfg.frame_len, k);
      } catch (const DomainError& e) {
        throw CorpusError(utt.alignment.string(), 0, e.what());
      }
      if (kind == AlignmentKind::Phone) {
        try {
          sample.macro_class = macro_class(seg.label);
        } catch (const DomainError&) {
          sample.macro_class.clear();
        }
      }
      out.samples.push_back(std::move(sample));
    }
    out.frames.emplace_back(utt.utt_id, std::move(frames));
  }
  return out;
}

void write_dataset_csv(std::ostream& out, const std::vector<SequenceSample>& data) {
  const std::size_t n_frames = data.empty() ? 0 : data.front().frames.size();
  const std::size_t dim = n_frames == 0 ? 0 : data.front().frames.front().size();
  out << "utt_id,label,macro_class";
  for (std::size_t f = 0; f < n_frames; ++f) {
    for (std::size_t c = 1; c <= dim; ++c) out << ",f" << f << 'c' << c;
  }
  out << '\n';
  for (const auto& s : data) {
    for (const auto* text : {&s.utt_id, &s.label, &s.macro_class}) {
      if (text->find_first_of(",\n") != std::string::npos)
        throw DomainError("dataset field '" + *text + "' contains a separator");
    }
    if (s.frames.size() != n_frames) throw DimensionError(n_frames, s.frames.size());
    out << s.utt_id << ',' << s.label << ',' << s.macro_class;
    for (const auto& f : s.frames) {
      if (f.size() != dim) throw DimensionError(dim, f.size());
      for (double v : f) out << ',' << format_real(v);
    }
    out << '\n';
  }
}

std::vector<SequenceSample> read_dataset_csv(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) throw CorpusError(name, 1, "missing header");
  const auto header = split(line, ',');
  if (header.size() < 3 || header[0] != "utt_id" || header[1] != "label" || header[2] != "macro_class")
    throw CorpusError(name, 1, "header must start with utt_id,label,macro_class");
  std::size_t n_frames = 0;
  std::size_t dim = 0;
  for (std::size_t i = 3; i < header.size(); ++i) {
    std::size_t f = 0, c = 0;
    char tag_f = 0, tag_c = 0;
    std::istringstream hs(header[i]);
    if (!(hs >> tag_f >> f >> tag_c >> c) || tag_f != 'f' || tag_c != 'c')
      throw CorpusError(name, 1, "bad feature column '" + header[i] + "'");
    n_frames = std::max(n_frames, f + 1);
    dim = std::max(dim, c);
  }
  if (n_frames * dim != header.size() - 3) throw CorpusError(name, 1, "feature columns are not a full grid");

  std::vector<SequenceSample> data;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size())
      throw CorpusError(name, lineno, "expected " + std::to_string(header.size()) + " columns");
    SequenceSample s;
    s.utt_id = cells[0];
    s.label = cells[1];
    s.macro_class = cells[2];
    if (s.label.empty()) throw CorpusError(name, lineno, "empty label");
    s.frames.assign(n_frames, Vector(dim));
    for (std::size_t i = 0; i < n_frames * dim; ++i) {
      const std::string& cell = cells[3 + i];
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != cell.size() || !std::isfinite(v))
        throw CorpusError(name, lineno, "bad feature value '" + cell + "'");
      s.frames[i / dim][i % dim] = v;
    }
    data.push_back(std::move(s));
  }
  return data;
}

void write_frames_csv(std::ostream& out,
                      const std::vector<std::pair<std::string, std::vector<Vector>>>& frames) {
  const std::size_t dim =
      frames.empty() || frames.front().second.empty() ? 0 : frames.front().second.front().size();
  out << "utt_id,frame_idx";
  for (std::size_t c = 1; c <= dim; ++c) out << ",c" << c;
  out << '\n';
  for (const auto& [utt, list] : frames) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      out << utt << ',' << i;
      for (double v : list[i]) out << ',' << format_real(v);
      out << '\n';
    }
  }
}

}  // namespace pulsom
