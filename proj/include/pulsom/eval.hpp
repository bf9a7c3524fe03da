#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pulsom/model.hpp"

namespace pulsom {

inline const std::string kRejected = "rejected";

/// Per-unit hit histograms and the majority label of each unit.
struct UnitLabelMap {
  std::vector<std::map<std::string, std::size_t>> hits;
  std::vector<std::optional<std::string>> labels;
};

/// Majority vote per unit; ties go to the lexicographically smallest label.
UnitLabelMap label_units(std::size_t units,
                         const std::vector<std::pair<std::size_t, std::string>>& hits);

/// Every training sample's terminal winner (every frame's winner with
/// `frame_vote`) votes for the sample's label.
UnitLabelMap calibrate(const Model& model, const std::vector<SequenceSample>& train,
                       bool frame_vote = false);

/// Label of `unit`, or of the nearest labelled unit on the lattice (lowest flat index on ties).
std::optional<std::string> resolve_label(const UnitLabelMap& labels, const Lattice& lattice,
                                         std::size_t unit);

/// Predicted label for one sequence, or kRejected.
std::string classify(const Model& model, const UnitLabelMap& labels, const SequenceSample& sample,
                     bool frame_vote = false);

struct ClassRate {
  std::string label;
  std::size_t correct = 0;
  std::size_t total = 0;
  double rate = 0.0;  // percent
};

struct EvalReport {
  std::vector<ClassRate> rows;  // classes with at least one sample, sorted by label
  double average = 0.0;         // unweighted mean of row rates
  std::vector<std::string> empty_classes;
  std::map<std::pair<std::string, std::string>, std::size_t> confusion;  // (true, predicted)

  /// Aligned text table with an Average row.
  void write_table(std::ostream& out, const std::string& title = {}) const;
  /// CSV `class,correct,total,rate`.
  void write_csv(std::ostream& out) const;
  /// CSV `true,predicted,count`.
  void write_confusion_csv(std::ostream& out) const;
};

/// Unweighted mean of per-class rates.
double average_rate(const std::vector<ClassRate>& rows);

/// Build a report from rates given directly (percent); counts are left at zero.
EvalReport report_from_rates(const std::vector<std::pair<std::string, double>>& rates);

using ClassOf = std::function<std::string(const std::string&)>;

/// Per-class recognition rates; a prediction counts as correct when
/// class_of(predicted) == class_of(true). `known_classes` lists classes that
/// should appear even with zero test samples.
EvalReport report(const Model& model, const UnitLabelMap& labels,
                  const std::vector<SequenceSample>& data, const ClassOf& class_of,
                  bool frame_vote = false, const std::vector<std::string>& known_classes = {});

/// Read a `class,correct,total,rate` CSV back.
EvalReport read_report_csv(std::istream& in, const std::string& name);

/// Side-by-side comparison table: one row per class, one column per report.
void write_comparison_table(std::ostream& out, const std::vector<std::string>& columns,
                            const std::vector<EvalReport>& reports);

}  // namespace pulsom
