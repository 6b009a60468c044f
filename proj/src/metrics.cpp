#include "sieve/metrics.hpp"

#include <charconv>
#include <sstream>

#include "json.hpp"
#include "sieve/error.hpp"

namespace sieve {

namespace {

std::string shortest(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

double ratio(std::int64_t num, std::int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& other) noexcept {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  tn += other.tn;
  return *this;
}

ConfusionCounts confusion(std::span<const int> predicted, std::span<const int> actual) {
  if (predicted.size() != actual.size()) {
    throw DataError("confusion: " + std::to_string(predicted.size()) + " predictions for " +
                    std::to_string(actual.size()) + " labels");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const bool p = predicted[i] == 1;
    const bool a = actual[i] == 1;
    if (p && a) ++c.tp;
    else if (p) ++c.fp;
    else if (a) ++c.fn;
    else ++c.tn;
  }
  return c;
}

std::string MetricReport::to_key_value() const {
  std::ostringstream out;
  for (const auto& [k, v] : accuracy_at_k) out << "accuracy@" << k << '=' << shortest(v) << '\n';
  if (precision) out << "precision=" << shortest(*precision) << '\n';
  if (recall) out << "recall=" << shortest(*recall) << '\n';
  if (f_measure) out << "f_measure=" << shortest(*f_measure) << '\n';
  if (kappa) out << "kappa=" << shortest(*kappa) << '\n';
  if (counts) {
    out << "tp=" << counts->tp << "\nfp=" << counts->fp << "\nfn=" << counts->fn
        << "\ntn=" << counts->tn << '\n';
  }
  return out.str();
}

std::string MetricReport::to_json() const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  if (!accuracy_at_k.empty()) {
    auto& acc = j["accuracy_at_k"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : accuracy_at_k) acc[std::to_string(k)] = v;
  }
  if (precision) j["precision"] = *precision;
  if (recall) j["recall"] = *recall;
  if (f_measure) j["f_measure"] = *f_measure;
  if (kappa) j["kappa"] = *kappa;
  if (counts) {
    j["confusion"] = {{"tp", counts->tp}, {"fp", counts->fp}, {"fn", counts->fn}, {"tn", counts->tn}};
  }
  return j.dump(2) + "\n";
}

double accuracy_at_k(const RankedList& ranked,
                     const std::unordered_map<std::string, bool>& labels, std::size_t k) {
  if (k == 0) throw DataError("accuracy@K: K must be >= 1");
  if (k > ranked.entries.size()) {
    throw DataError("accuracy@K: K = " + std::to_string(k) + " exceeds the " +
                    std::to_string(ranked.entries.size()) + " ranked items");
  }
  std::size_t relevant = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const auto& id = ranked.entries[i].tweet_id;
    auto it = labels.find(id);
    if (it == labels.end()) throw DataError("accuracy@K: no label for id '" + id + "'");
    relevant += it->second;
  }
  return static_cast<double>(relevant) / static_cast<double>(k);
}

MetricReport accuracy_report(const RankedList& ranked,
                             const std::unordered_map<std::string, bool>& labels,
                             std::span<const std::size_t> ks) {
  MetricReport report;
  for (std::size_t k : ks) report.accuracy_at_k[k] = accuracy_at_k(ranked, labels, k);
  return report;
}

MetricReport prf(const ConfusionCounts& c) {
  MetricReport report;
  report.precision = ratio(c.tp, c.tp + c.fp);
  report.recall = ratio(c.tp, c.tp + c.fn);
  // 2PR/(P+R) with the common factors cancelled.
  report.f_measure = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
  report.counts = c;
  return report;
}

double cohen_kappa(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) {
    throw DataError("kappa: label lists differ in length (" + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
  }
  if (a.empty()) throw DataError("kappa: no labels");
  std::int64_t agree = 0;
  std::int64_t a1 = 0;
  std::int64_t b1 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a[i] != 0 && a[i] != 1) || (b[i] != 0 && b[i] != 1)) {
      throw DataError("kappa: labels must be 0 or 1 (item " + std::to_string(i + 1) + ")");
    }
    agree += a[i] == b[i];
    a1 += a[i];
    b1 += b[i];
  }
  const auto n = static_cast<std::int64_t>(a.size());
  // kappa = (p_o - p_e) / (1 - p_e), scaled by n^2 to stay in integers.
  const std::int64_t chance = a1 * b1 + (n - a1) * (n - b1);
  if (chance == n * n) return agree == n ? 1.0 : 0.0;
  return static_cast<double>(agree * n - chance) / static_cast<double>(n * n - chance);
}

}  // namespace sieve
