#include "pulsom/eval.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "pulsom/error.hpp"

namespace pulsom {

namespace {

std::optional<std::string> majority(const std::map<std::string, std::size_t>& hist) {
  std::optional<std::string> best;
  std::size_t best_count = 0;
  // std::map iterates in lexicographic order, so strict '>' keeps the smallest label on ties.
  for (const auto& [label, count] : hist) {
    if (count > best_count) {
      best = label;
      best_count = count;
    }
  }
  return best;
}

}  // namespace

UnitLabelMap label_units(std::size_t units,
                         const std::vector<std::pair<std::size_t, std::string>>& hits) {
  UnitLabelMap map;
  map.hits.resize(units);
  map.labels.resize(units);
  for (const auto& [unit, label] : hits) {
    if (unit >= units) throw DomainError("hit on unit outside the lattice");
    ++map.hits[unit][label];
  }
  for (std::size_t i = 0; i < units; ++i) map.labels[i] = majority(map.hits[i]);
  return map;
}

UnitLabelMap calibrate(const Model& model, const std::vector<SequenceSample>& train,
                       bool frame_vote) {
  if (train.empty()) throw DomainError("calibration data is empty");
  std::vector<std::pair<std::size_t, std::string>> hits;
  for (const auto& sample : train) {
    const auto winners = frame_winners(model, sample);
    if (frame_vote) {
      for (const auto& w : winners) {
        if (w) hits.emplace_back(w->flat, sample.label);
      }
    } else if (!winners.empty() && winners.back()) {
      hits.emplace_back(winners.back()->flat, sample.label);
    }
  }
  return label_units(model.lattice.size(), hits);
}

std::optional<std::string> resolve_label(const UnitLabelMap& labels, const Lattice& lattice,
                                         std::size_t unit) {
  if (labels.labels[unit]) return labels.labels[unit];
  std::optional<std::size_t> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < labels.labels.size(); ++i) {
    if (!labels.labels[i]) continue;
    const double d = lattice.grid_distance(unit, i);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  if (!best) return std::nullopt;
  return labels.labels[*best];
}

std::string classify(const Model& model, const UnitLabelMap& labels, const SequenceSample& sample,
                     bool frame_vote) {
  const auto winners = frame_winners(model, sample);
  if (!frame_vote) {
    if (winners.empty() || !winners.back()) return kRejected;
    return resolve_label(labels, model.lattice, winners.back()->flat).value_or(kRejected);
  }
  std::map<std::string, std::size_t> votes;
  for (const auto& w : winners) {
    if (!w) continue;
    if (auto label = resolve_label(labels, model.lattice, w->flat)) ++votes[*label];
  }
  return majority(votes).value_or(kRejected);
}

double average_rate(const std::vector<ClassRate>& rows) {
  if (rows.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : rows) sum += r.rate;
  return sum / static_cast<double>(rows.size());
}

EvalReport report_from_rates(const std::vector<std::pair<std::string, double>>& rates) {
  EvalReport out;
  for (const auto& [label, rate] : rates) {
    if (rate < 0.0 || rate > 100.0) throw DomainError("rates are percentages in [0, 100]");
    out.rows.push_back({label, 0, 0, rate});
  }
  out.average = average_rate(out.rows);
  return out;
}

EvalReport report(const Model& model, const UnitLabelMap& labels,
                  const std::vector<SequenceSample>& data, const ClassOf& class_of,
                  bool frame_vote, const std::vector<std::string>& known_classes) {
  if (data.empty()) throw DomainError("evaluation data is empty");
  EvalReport out;
  std::map<std::string, ClassRate> rows;
  for (const auto& sample : data) {
    const std::string truth = class_of(sample.label);
    const std::string predicted = classify(model, labels, sample, frame_vote);
    const std::string predicted_class = predicted == kRejected ? kRejected : class_of(predicted);
    auto& row = rows[truth];
    row.label = truth;
    ++row.total;
    if (predicted_class == truth) ++row.correct;
    ++out.confusion[{truth, predicted_class}];
  }
  for (auto& [label, row] : rows) {
    row.rate = 100.0 * static_cast<double>(row.correct) / static_cast<double>(row.total);
    out.rows.push_back(row);
  }
  for (const auto& cls : known_classes) {
    if (!rows.contains(cls)) out.empty_classes.push_back(cls);
  }
  out.average = average_rate(out.rows);
  return out;
}

void EvalReport::write_table(std::ostream& out, const std::string& title) const {
  std::size_t width = std::string("Average").size();
  for (const auto& r : rows) width = std::max(width, r.label.size());
  if (!title.empty()) out << title << '\n';
  out << std::left << std::setw(static_cast<int>(width) + 2) << "Class" << std::right
      << std::setw(8) << "Rate" << std::setw(10) << "Correct" << std::setw(8) << "Total" << '\n';
  out << std::fixed << std::setprecision(2);
  std::size_t correct = 0, total = 0;
  for (const auto& r : rows) {
    out << std::left << std::setw(static_cast<int>(width) + 2) << r.label << std::right
        << std::setw(8) << r.rate << std::setw(10) << r.correct << std::setw(8) << r.total << '\n';
    correct += r.correct;
    total += r.total;
  }
  out << std::left << std::setw(static_cast<int>(width) + 2) << "Average" << std::right
      << std::setw(8) << average << std::setw(10) << correct << std::setw(8) << total << '\n';
  for (const auto& c : empty_classes) out << "(no samples: " << c << ")\n";
  out.unsetf(std::ios::floatfield);
}

void EvalReport::write_csv(std::ostream& out) const {
  out << "class,correct,total,rate\n";
  for (const auto& r : rows) {
    out << r.label << ',' << r.correct << ',' << r.total << ',' << format_real(r.rate) << '\n';
  }
}

void EvalReport::write_confusion_csv(std::ostream& out) const {
  out << "true,predicted,count\n";
  for (const auto& [key, count] : confusion) out << key.first << ',' << key.second << ',' << count << '\n';
}

EvalReport read_report_csv(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line) || line != "class,correct,total,rate")
    throw CorpusError(name, 1, "expected header class,correct,total,rate");
  EvalReport out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    ClassRate row;
    std::string correct, total, rate;
    if (!std::getline(ls, row.label, ',') || !std::getline(ls, correct, ',') ||
        !std::getline(ls, total, ',') || !std::getline(ls, rate))
      throw CorpusError(name, lineno, "expected 4 columns");
    try {
      row.correct = std::stoul(correct);
      row.total = std::stoul(total);
      row.rate = std::stod(rate);
    } catch (const std::exception&) {
      throw CorpusError(name, lineno, "bad numeric column");
    }
    out.rows.push_back(row);
  }
  out.average = average_rate(out.rows);
  return out;
}

void write_comparison_table(std::ostream& out, const std::vector<std::string>& columns,
                            const std::vector<EvalReport>& reports) {
  std::vector<std::string> classes;
  for (const auto& rep : reports) {
    for (const auto& r : rep.rows) {
      if (std::ranges::find(classes, r.label) == classes.end()) classes.push_back(r.label);
    }
  }
  std::size_t width = std::string("Average").size();
  for (const auto& c : classes) width = std::max(width, c.size());
  std::size_t col_width = 8;
  for (const auto& c : columns) col_width = std::max(col_width, c.size() + 2);

  const auto w = static_cast<int>(width + 2);
  const auto cw = static_cast<int>(col_width);
  out << std::left << std::setw(w) << "Class" << std::right;
  for (const auto& c : columns) out << std::setw(cw) << c;
  out << '\n' << std::fixed << std::setprecision(2);
  for (const auto& cls : classes) {
    out << std::left << std::setw(w) << cls << std::right;
    for (const auto& rep : reports) {
      const auto it = std::ranges::find(rep.rows, cls, &ClassRate::label);
      if (it == rep.rows.end()) {
        out << std::setw(cw) << "-";
      } else {
        out << std::setw(cw) << it->rate;
      }
    }
    out << '\n';
  }
  out << std::left << std::setw(w) << "Average" << std::right;
  for (const auto& rep : reports) out << std::setw(cw) << rep.average;
  out << '\n';
  out.unsetf(std::ios::floatfield);
}

}  // namespace pulsom
