#include "ple/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ple/errors.hpp"

namespace ple {

namespace {

void check_ids(const TypeSets& predictions, const TypeSets& gold) {
  if (predictions.empty()) throw FormatError("empty evaluation set");
  if (predictions.size() != gold.size())
    throw FormatError("prediction and gold mention sets differ in size");
  for (const auto& [id, _] : predictions)
    if (!gold.count(id))
      throw FormatError("mention " + std::to_string(id) + " missing from gold");
}

int overlap(const std::set<TypeId>& a, const std::set<TypeId>& b) {
  int n = 0;
  for (TypeId t : a)
    if (b.count(t)) ++n;
  return n;
}

double f1(double p, double r) { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; }

}  // namespace

double strict_accuracy(const TypeSets& predictions, const TypeSets& gold) {
  check_ids(predictions, gold);
  int exact = 0;
  for (const auto& [id, pred] : predictions)
    if (pred == gold.at(id)) ++exact;
  return static_cast<double>(exact) / predictions.size();
}

Prf loose_macro(const TypeSets& predictions, const TypeSets& gold) {
  check_ids(predictions, gold);
  double p_sum = 0, r_sum = 0;
  for (const auto& [id, pred] : predictions) {
    const auto& g = gold.at(id);
    int common = overlap(pred, g);
    p_sum += pred.empty() ? (g.empty() ? 1.0 : 0.0)
                          : static_cast<double>(common) / pred.size();
    r_sum += g.empty() ? (pred.empty() ? 1.0 : 0.0)
                       : static_cast<double>(common) / g.size();
  }
  Prf out;
  out.precision = p_sum / predictions.size();
  out.recall = r_sum / predictions.size();
  out.f1 = f1(out.precision, out.recall);
  return out;
}

Prf loose_micro(const TypeSets& predictions, const TypeSets& gold) {
  check_ids(predictions, gold);
  long common = 0, predicted = 0, truth = 0;
  for (const auto& [id, pred] : predictions) {
    const auto& g = gold.at(id);
    common += overlap(pred, g);
    predicted += static_cast<long>(pred.size());
    truth += static_cast<long>(g.size());
  }
  Prf out;
  out.precision = predicted > 0 ? static_cast<double>(common) / predicted : 0.0;
  out.recall = truth > 0 ? static_cast<double>(common) / truth : 0.0;
  out.f1 = f1(out.precision, out.recall);
  return out;
}

EvalReport evaluate(const TypeSets& predictions, const TypeSets& gold,
                    const TypeHierarchy& hierarchy) {
  EvalReport report;
  report.strict = strict_accuracy(predictions, gold);
  report.macro = loose_macro(predictions, gold);
  report.micro = loose_micro(predictions, gold);

  // Per-level accuracy: did the prediction pick the right type at each depth?
  std::map<int, int> total, correct;
  for (const auto& [id, pred] : predictions) {
    const auto& g = gold.at(id);
    std::map<int, TypeId> gold_at, pred_at;
    for (TypeId t : g) gold_at[hierarchy.depth(t)] = t;
    for (TypeId t : pred) pred_at[hierarchy.depth(t)] = t;
    for (const auto& [level, gt] : gold_at) {
      ++total[level];
      auto it = pred_at.find(level);
      if (it != pred_at.end() && it->second == gt) ++correct[level];
    }
  }
  for (const auto& [level, n] : total)
    report.accuracy_by_level[level] = static_cast<double>(correct[level]) / n;
  return report;
}

std::string format_report(const EvalReport& r) {
  std::ostringstream out;
  out.precision(4);
  out << std::fixed;
  out << "Acc    " << r.strict << "\n";
  out << "Ma-P   " << r.macro.precision << "\nMa-R   " << r.macro.recall
      << "\nMa-F1  " << r.macro.f1 << "\n";
  out << "Mi-P   " << r.micro.precision << "\nMi-R   " << r.micro.recall
      << "\nMi-F1  " << r.micro.f1 << "\n";
  for (const auto& [level, acc] : r.accuracy_by_level)
    out << "Acc@L" << level << " " << acc << "\n";
  return out.str();
}

void save_report(const std::string& path, const EvalReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write report file: " + path);
  out << format_report(report);
}

}  // namespace ple
