#include "pulsom/model.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "pulsom/error.hpp"

namespace pulsom {

namespace {

constexpr std::uint64_t kTrainSeedMix = 0x9E3779B97F4A7C15ULL;

void write_values(std::ostream& out, std::string_view key, std::span<const double> values) {
  out << key;
  for (double v : values) out << ' ' << format_real(v);
  out << '\n';
}

}  // namespace

std::string_view to_string(ModelType type) {
  switch (type) {
    case ModelType::Som: return "SOM";
    case ModelType::Ssom: return "SSOM";
    case ModelType::Rssom: return "RSSOM";
    case ModelType::Lin: return "LIN";
  }
  return "UNKNOWN";
}

ModelType parse_model_type(std::string_view name) {
  std::string upper(name);
  std::ranges::transform(upper, upper.begin(), [](unsigned char c) { return std::toupper(c); });
  if (upper == "SOM") return ModelType::Som;
  if (upper == "SSOM") return ModelType::Ssom;
  if (upper == "RSSOM") return ModelType::Rssom;
  if (upper == "LIN") return ModelType::Lin;
  throw DomainError("unknown model type '" + std::string(name) + "'");
}

std::vector<SequenceSample> concat_frames(const std::vector<SequenceSample>& data) {
  std::vector<SequenceSample> out;
  out.reserve(data.size());
  for (const auto& s : data) {
    SequenceSample c = s;
    Vector joined;
    for (const auto& f : s.frames) joined.insert(joined.end(), f.begin(), f.end());
    c.frames = {std::move(joined)};
    out.push_back(std::move(c));
  }
  return out;
}

Model train_model(const ModelParams& params, const std::vector<SequenceSample>& data,
                  std::uint64_t seed, TrainingLog* log) {
  if (data.empty()) throw DomainError("training data is empty");
  const bool concat = params.type == ModelType::Som && params.concat;
  const std::vector<SequenceSample> prepared = concat ? concat_frames(data) : data;
  const std::vector<Vector> frames = flatten_frames(prepared);
  const std::uint64_t train_seed = seed ^ kTrainSeedMix;

  Model model{params, Lattice(params.rows, params.cols, frames.front().size(), seed), {}};
  TrainingLog result;
  if (params.type == ModelType::Som) {
    model.lattice = Lattice::random_from_data(params.rows, params.cols, frames, seed);
    result = train_som(frames, model.lattice, params.schedule, train_seed);
  } else {
    model.range = FeatureRange::of(frames);
    const Vector zeros(model.range.dim(), 0.0);
    const Vector ones(model.range.dim(), 1.0);
    model.lattice = Lattice::random_in_range(params.rows, params.cols, zeros, ones, seed);
    switch (params.type) {
      case ModelType::Ssom:
        result = train_ssom(prepared, model.lattice, params.schedule, params.spiking, params.stdp,
                            model.range, train_seed);
        break;
      case ModelType::Rssom:
        result = train_rssom(prepared, model.lattice, params.schedule, params.spiking, params.stdp,
                             model.range, params.alpha, train_seed);
        break;
      case ModelType::Lin:
        result = train_lin(prepared, model.lattice, params.schedule, params.spiking, params.stdp,
                           model.range, params.lambda, params.scale_input_by_lambda, train_seed);
        break;
      case ModelType::Som: break;
    }
  }
  if (log) *log = std::move(result);
  return model;
}

std::vector<std::optional<UnitIndex>> frame_winners(const Model& model,
                                                    const SequenceSample& sample) {
  const auto& p = model.params;
  std::vector<std::optional<UnitIndex>> winners;
  if (p.type == ModelType::Som) {
    if (p.concat) {
      winners.push_back(find_bmu(concat_frames({sample}).front().frames.front(), model.lattice));
    } else {
      for (const auto& f : sample.frames) winners.push_back(find_bmu(f, model.lattice));
    }
    return winners;
  }

  const SsomConfig& cfg = p.spiking.timing;
  std::optional<DifferenceState> diff;
  std::optional<PotentialState> pot;
  if (p.type == ModelType::Rssom) diff.emplace(model.lattice, p.alpha);
  if (p.type == ModelType::Lin) pot.emplace(model.lattice, p.lambda, p.scale_input_by_lambda);

  for (const auto& f : sample.frames) {
    const EncodedInput e = encode_latency(f, model.range, cfg.t_max);
    FiringRecord record;
    switch (p.type) {
      case ModelType::Ssom: record = compute_firing_times(e, model.lattice, cfg); break;
      case ModelType::Rssom:
        update_difference(decode_latency(e), model.lattice, *diff);
        record = rssom_firing_times(*diff, model.lattice, cfg);
        break;
      case ModelType::Lin:
        update_potential(decode_latency(e), model.lattice, *pot);
        record = lin_firing_times(*pot, model.lattice, cfg);
        break;
      case ModelType::Som: break;
    }
    winners.push_back(record.winner);
  }
  return winners;
}

void save_model(std::ostream& out, const Model& model) {
  const auto& p = model.params;
  write_lattice(out, model.lattice);
  out << "model " << to_string(p.type) << '\n';
  const auto& s = p.schedule;
  out << "schedule " << s.epochs << ' ' << format_real(s.lr_start) << ' ' << format_real(s.lr_end)
      << ' ' << format_real(s.radius_start) << ' ' << format_real(s.radius_end) << '\n';
  if (p.type == ModelType::Som) {
    out << "concat " << (p.concat ? 1 : 0) << '\n';
    return;
  }
  write_values(out, "range_lo", model.range.lo);
  write_values(out, "range_hi", model.range.hi);
  const auto& r = p.stdp;
  out << "stdp " << to_string(r.variant) << ' ' << format_real(r.eta) << ' '
      << format_real(r.w_max) << ' ' << format_real(r.window.a_plus) << ' '
      << format_real(r.window.a_minus) << ' ' << format_real(r.window.tau_plus) << ' '
      << format_real(r.window.tau_minus) << ' ' << (r.flip_branches ? 1 : 0) << '\n';
  const auto& t = p.spiking.timing;
  const auto& l = p.spiking.lateral;
  write_values(out, "timing",
               std::vector<double>{t.t_max, t.t_ref, t.s_radius, t.sim_step, t.tau_psp});
  write_values(out, "lateral",
               std::vector<double>{l.excite_radius, l.excite_gain, l.inhibit_gain});
  if (p.type == ModelType::Rssom) out << "alpha " << format_real(p.alpha) << '\n';
  if (p.type == ModelType::Lin) {
    out << "lambda " << format_real(p.lambda) << '\n';
    out << "scale_input_by_lambda " << (p.scale_input_by_lambda ? 1 : 0) << '\n';
  }
}

Model load_model(std::istream& in) {
  Lattice lattice = read_lattice(in);
  std::map<std::string, std::vector<std::string>> fields;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::vector<std::string> values;
    for (std::string v; ls >> v;) values.push_back(v);
    fields[key] = std::move(values);
  }

  auto get = [&](const std::string& key, std::size_t n) -> const std::vector<std::string>& {
    const auto it = fields.find(key);
    if (it == fields.end()) throw Error("model file lacks '" + key + "'");
    if (it->second.size() != n) throw Error("model field '" + key + "' has wrong arity");
    return it->second;
  };
  auto real = [](const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw Error("malformed value '" + s + "' in model file");
    return v;
  };

  ModelParams p;
  p.type = parse_model_type(get("model", 1)[0]);
  p.rows = lattice.rows();
  p.cols = lattice.cols();
  const auto& s = get("schedule", 5);
  p.schedule = {std::stoi(s[0]), real(s[1]), real(s[2]), real(s[3]), real(s[4])};

  Model model{p, std::move(lattice), {}};
  if (p.type == ModelType::Som) {
    model.params.concat = get("concat", 1)[0] == "1";
    return model;
  }
  const std::size_t dim = model.lattice.dim();
  for (const auto& v : get("range_lo", dim)) model.range.lo.push_back(real(v));
  for (const auto& v : get("range_hi", dim)) model.range.hi.push_back(real(v));
  const auto& r = get("stdp", 8);
  auto& rule = model.params.stdp;
  rule.variant = parse_stdp_variant(r[0]);
  rule.eta = real(r[1]);
  rule.w_max = real(r[2]);
  rule.window = {real(r[3]), real(r[4]), real(r[5]), real(r[6])};
  rule.flip_branches = r[7] == "1";
  const auto& t = get("timing", 5);
  model.params.spiking.timing = {real(t[0]), real(t[1]), real(t[2]), real(t[3]), real(t[4])};
  const auto& l = get("lateral", 3);
  model.params.spiking.lateral = {real(l[0]), real(l[1]), real(l[2])};
  if (p.type == ModelType::Rssom) model.params.alpha = real(get("alpha", 1)[0]);
  if (p.type == ModelType::Lin) {
    model.params.lambda = real(get("lambda", 1)[0]);
    model.params.scale_input_by_lambda = get("scale_input_by_lambda", 1)[0] == "1";
  }
  return model;
}

}  // namespace pulsom
