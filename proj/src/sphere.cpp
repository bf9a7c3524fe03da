#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "pulsom/corpus.hpp"

namespace pulsom {

namespace {

using Kind = SphereError::Kind;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

AudioBuffer parse_sphere(std::istream& in, const std::string& name) {
  std::string magic;
  if (!std::getline(in, magic) || trim(magic) != "NIST_1A")
    throw SphereError(Kind::BadMagic, name, "not a SPHERE file");
  std::string size_line;
  if (!std::getline(in, size_line)) throw SphereError(Kind::BadHeader, name, "missing header size");
  std::size_t header_size = 0;
  try {
    header_size = std::stoul(trim(size_line));
  } catch (const std::exception&) {
    throw SphereError(Kind::BadHeader, name, "bad header size '" + trim(size_line) + "'");
  }

  std::map<std::string, std::string> fields;
  for (std::string line; std::getline(in, line);) {
    line = trim(line);
    if (line == "end_head") break;
    if (line.empty() || line[0] == ';') continue;
    std::istringstream ls(line);
    std::string key, type, value;
    if (!(ls >> key >> type)) throw SphereError(Kind::BadHeader, name, "bad header line '" + line + "'");
    std::getline(ls >> std::ws, value);
    fields[key] = trim(value);
    if (static_cast<std::size_t>(in.tellg()) > header_size)
      throw SphereError(Kind::BadHeader, name, "header runs past its declared size");
  }

  auto int_field = [&](const std::string& key, long fallback) {
    const auto it = fields.find(key);
    if (it == fields.end()) return fallback;
    try {
      return std::stol(it->second);
    } catch (const std::exception&) {
      throw SphereError(Kind::BadHeader, name, "field " + key + " is not an integer");
    }
  };

  const long n_bytes = int_field("sample_n_bytes", 2);
  const long channels = int_field("channel_count", 1);
  const long sample_rate = int_field("sample_rate", 16000);
  if (n_bytes != 2)
    throw SphereError(Kind::UnsupportedEncoding, name,
                      "only 16-bit samples are supported (sample_n_bytes=" + std::to_string(n_bytes) + ")");
  if (channels != 1)
    throw SphereError(Kind::UnsupportedEncoding, name,
                      "only single-channel audio is supported (channel_count=" + std::to_string(channels) + ")");
  if (sample_rate <= 0) throw SphereError(Kind::BadHeader, name, "sample_rate must be positive");
  if (const auto it = fields.find("sample_coding"); it != fields.end() && it->second != "pcm")
    throw SphereError(Kind::UnsupportedEncoding, name, "unsupported sample_coding '" + it->second + "'");

  bool big_endian = false;
  if (const auto it = fields.find("sample_byte_format"); it != fields.end()) {
    if (it->second == "10") {
      big_endian = true;
    } else if (it->second != "01") {
      throw SphereError(Kind::UnsupportedEncoding, name,
                        "unsupported sample_byte_format '" + it->second + "'");
    }
  }

  in.clear();
  in.seekg(static_cast<std::streamoff>(header_size));
  std::string payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const long declared = int_field("sample_count", -1);
  const std::size_t available = payload.size() / 2;
  std::size_t count = available;
  if (declared >= 0) {
    if (static_cast<std::size_t>(declared) > available)
      throw SphereError(Kind::Truncated, name,
                        "expected " + std::to_string(declared) + " samples, found " +
                            std::to_string(available));
    count = static_cast<std::size_t>(declared);
  }

  AudioBuffer buf;
  buf.sample_rate = static_cast<int>(sample_rate);
  buf.samples.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto b0 = static_cast<unsigned char>(payload[2 * i]);
    const auto b1 = static_cast<unsigned char>(payload[2 * i + 1]);
    const auto bits = static_cast<std::uint16_t>(big_endian ? (b0 << 8) | b1 : (b1 << 8) | b0);
    buf.samples[i] = static_cast<double>(static_cast<std::int16_t>(bits)) / 32768.0;
  }
  return buf;
}

AudioBuffer read_sphere(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_sphere(in, path.string());
}

void write_sphere(const std::filesystem::path& path, const std::vector<std::int16_t>& samples,
                  int sample_rate) {
  std::ostringstream head;
  head << "NIST_1A\n   1024\n"
       << "sample_count -i " << samples.size() << '\n'
       << "sample_rate -i " << sample_rate << '\n'
       << "channel_count -i 1\n"
       << "sample_n_bytes -i 2\n"
       << "sample_byte_format -s2 01\n"
       << "sample_coding -s3 pcm\n"
       << "end_head\n";
  std::string header = head.str();
  header.resize(1024, ' ');

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  for (std::int16_t s : samples) {
    const auto u = static_cast<std::uint16_t>(s);
    const char bytes[2] = {static_cast<char>(u & 0xff), static_cast<char>(u >> 8)};
    out.write(bytes, 2);
  }
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace pulsom
