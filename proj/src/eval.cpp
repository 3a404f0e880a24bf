#include "bitalign/eval.hpp"

#include <algorithm>
#include <iostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bitalign/errors.hpp"
#include "bitalign/format.hpp"

namespace bitalign {

namespace {

using nlohmann::json;

void warn(std::vector<std::string>* warnings, const std::string& msg) {
  if (warnings)
    warnings->push_back(msg);
  else
    std::cerr << "warning: " << msg << "\n";
}

std::string bead_key(const Bead& bead) {
  std::string key;
  for (int idx : bead.src) {
    key += std::to_string(idx);
    key += ',';
  }
  key += ':';
  for (int idx : bead.tgt) {
    key += std::to_string(idx);
    key += ',';
  }
  return key;
}

json counts_json(const StrictCounts& counts, const Metrics& metrics) {
  return json{{"tp", counts.tp},         {"hyp", counts.hyp},
              {"ref", counts.ref},       {"p", metrics.precision},
              {"r", metrics.recall},     {"f1", metrics.f1}};
}

}  // namespace

StrictCounts strict_compare(const Ladder& hyp, const Ladder& ref,
                            bool include_null) {
  auto included = [include_null](const Bead& bead) {
    return include_null || !bead.has_null_side();
  };

  std::set<std::string> ref_keys;
  StrictCounts counts;
  for (const Bead& bead : ref.beads) {
    if (!included(bead)) continue;
    ++counts.ref;
    ref_keys.insert(bead_key(bead));
  }
  for (const Bead& bead : hyp.beads) {
    if (!included(bead)) continue;
    ++counts.hyp;
    if (ref_keys.count(bead_key(bead))) ++counts.tp;
  }
  return counts;
}

StrictCounts strict_compare_checked(const Ladder& hyp, const Ladder& ref,
                                    std::size_t src_len, std::size_t tgt_len,
                                    bool include_null) {
  for (const auto* ladder : {&hyp, &ref}) {
    const ValidationReport report =
        validate_ladder(*ladder, src_len, tgt_len);
    if (!report.out_of_range.empty())
      throw Error(ErrorCode::ShapeMismatch,
                  "ladder \"" + ladder->pair_id + "\" references indices "
                  "outside a " + std::to_string(src_len) + "x" +
                      std::to_string(tgt_len) + " document pair");
  }
  return strict_compare(hyp, ref, include_null);
}

Metrics prf(const StrictCounts& counts) {
  Metrics m;
  m.precision = counts.hyp == 0 ? 0.0
                                : static_cast<double>(counts.tp) /
                                      static_cast<double>(counts.hyp);
  m.recall = counts.ref == 0 ? 0.0
                             : static_cast<double>(counts.tp) /
                                   static_cast<double>(counts.ref);
  m.f1 = (m.precision + m.recall) == 0.0
             ? 0.0
             : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

Metrics micro_average(const std::vector<StrictCounts>& per_doc) {
  if (per_doc.empty())
    throw Error(ErrorCode::EmptyInput, "micro_average of zero documents");
  StrictCounts total;
  for (const StrictCounts& counts : per_doc) {
    total.tp += counts.tp;
    total.hyp += counts.hyp;
    total.ref += counts.ref;
  }
  return prf(total);
}

EvalReport evaluate_set(const std::string& method_name,
                        const std::map<std::string, Ladder>& gold,
                        const std::map<std::string, Ladder>& hyp,
                        bool include_null,
                        std::vector<std::string>* warnings) {
  EvalReport report;
  report.method_name = method_name;
  for (const auto& [pair_id, gold_ladder] : gold) {
    const auto it = hyp.find(pair_id);
    if (it == hyp.end())
      throw Error(ErrorCode::MissingPair,
                  "method \"" + method_name + "\" has no ladder for pair \"" +
                      pair_id + "\"");
    PairEval pe;
    pe.counts = strict_compare(it->second, gold_ladder, include_null);
    pe.metrics = prf(pe.counts);
    report.total.tp += pe.counts.tp;
    report.total.hyp += pe.counts.hyp;
    report.total.ref += pe.counts.ref;
    report.per_doc.emplace(pair_id, pe);
  }
  for (const auto& [pair_id, ladder] : hyp)
    if (!gold.count(pair_id))
      warn(warnings, "method \"" + method_name + "\": pair \"" + pair_id +
                         "\" has no gold ladder, ignored");
  report.overall = prf(report.total);
  return report;
}

CompareReport compare_report(
    const std::map<std::string, Ladder>& gold,
    const std::vector<std::pair<std::string, std::map<std::string, Ladder>>>&
        methods,
    bool include_null, std::vector<std::string>* warnings) {
  CompareReport report;
  for (const auto& [pair_id, ladder] : gold) report.pair_ids.push_back(pair_id);
  for (const auto& [name, hyp] : methods)
    report.methods.push_back(
        evaluate_set(name, gold, hyp, include_null, warnings));
  return report;
}

std::string format_compare_table(const CompareReport& report) {
  std::ostringstream out;

  std::size_t name_width = 7;  // "Overall"
  for (const std::string& pid : report.pair_ids)
    name_width = std::max(name_width, pid.size());
  std::vector<std::size_t> col_width;
  for (const EvalReport& method : report.methods)
    col_width.push_back(std::max<std::size_t>(method.method_name.size(), 6));

  out << std::string(name_width, ' ') << "  Metric";
  for (std::size_t c = 0; c < report.methods.size(); ++c) {
    out << "  ";
    const std::string& name = report.methods[c].method_name;
    out << name << std::string(col_width[c] - name.size(), ' ');
  }
  out << "\n";

  auto emit_rows = [&](const std::string& label,
                       const std::vector<Metrics>& cells) {
    const char* metric_names[3] = {"P", "R", "F1"};
    for (int mi = 0; mi < 3; ++mi) {
      std::vector<double> values;
      for (const Metrics& m : cells)
        values.push_back(mi == 0 ? m.precision : mi == 1 ? m.recall : m.f1);
      const double best =
          values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
      out << label << std::string(name_width - label.size(), ' ') << "  "
          << metric_names[mi] << std::string(6 - std::string(metric_names[mi]).size(), ' ');
      for (std::size_t c = 0; c < values.size(); ++c) {
        std::string cell = format_fixed(values[c], 3);
        if (values[c] == best && values.size() > 1) cell += '*';
        out << "  " << cell << std::string(col_width[c] > cell.size()
                                               ? col_width[c] - cell.size()
                                               : 0,
                                           ' ');
      }
      out << "\n";
    }
  };

  for (const std::string& pid : report.pair_ids) {
    std::vector<Metrics> cells;
    for (const EvalReport& method : report.methods)
      cells.push_back(method.per_doc.at(pid).metrics);
    emit_rows(pid, cells);
  }
  std::vector<Metrics> overall;
  for (const EvalReport& method : report.methods)
    overall.push_back(method.overall);
  emit_rows("Overall", overall);
  if (report.methods.size() > 1) out << "(* best in row)\n";
  return out.str();
}

std::string eval_report_json(const EvalReport& report) {
  json j;
  j["method"] = report.method_name;
  j["per_doc"] = json::object();
  for (const auto& [pair_id, pe] : report.per_doc)
    j["per_doc"][pair_id] = counts_json(pe.counts, pe.metrics);
  j["overall"] = counts_json(report.total, report.overall);
  return j.dump(2) + "\n";
}

std::string compare_report_json(const CompareReport& report) {
  json j;
  j["pairs"] = report.pair_ids;
  j["methods"] = json::array();
  for (const EvalReport& method : report.methods) {
    json m;
    m["method"] = method.method_name;
    m["per_doc"] = json::object();
    for (const auto& [pair_id, pe] : method.per_doc)
      m["per_doc"][pair_id] = counts_json(pe.counts, pe.metrics);
    m["overall"] = counts_json(method.total, method.overall);
    j["methods"].push_back(std::move(m));
  }
  return j.dump(2) + "\n";
}

}  // namespace bitalign
