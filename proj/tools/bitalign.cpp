// bitalign: align, evaluate and inspect sentence-aligned document pairs.
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bitalign/beads.hpp"
#include "bitalign/config.hpp"
#include "bitalign/corpus.hpp"
#include "bitalign/errors.hpp"
#include "bitalign/eval.hpp"
#include "bitalign/format.hpp"
#include "bitalign/gale_church.hpp"
#include "bitalign/llm_align.hpp"

namespace fs = std::filesystem;
using namespace bitalign;

namespace {

void write_file_atomic(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::random_device rd;
  const fs::path tmp = path.string() + ".tmp" + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out)
      throw Error(ErrorCode::FileNotWritable, "cannot write " + tmp.string());
    out << content;
    if (!out.flush())
      throw Error(ErrorCode::FileNotWritable, "short write on " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec)
    throw Error(ErrorCode::FileNotWritable,
                "cannot move " + tmp.string() + " to " + path.string() + ": " +
                    ec.message());
}

std::string stem_of(const fs::path& path) { return path.stem().string(); }

/// Read every regular file of a directory as a ladder keyed by file stem.
std::map<std::string, Ladder> load_ladder_dir(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    throw Error(ErrorCode::FileNotReadable,
                dir.string() + " is not a readable directory");
  std::map<std::string, Ladder> ladders;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (!name.empty() && name[0] == '.') continue;
    ladders[stem_of(entry.path())] = load_ladder(entry.path());
  }
  if (ladders.empty())
    throw Error(ErrorCode::EmptyInput,
                "no ladder files found under " + dir.string());
  return ladders;
}

// ----------------------------------------------------------------- align

struct AlignArgs {
  std::string src_path, tgt_path, out_path;
  std::string method = "llm";
  std::string batch_path, out_dir = ".";
  std::string pair_id;
};

struct BatchEntry {
  std::string pair_id;
  fs::path src, tgt, out;
  std::optional<fs::path> gold;
};

std::vector<BatchEntry> load_manifest(const fs::path& path,
                                      const fs::path& out_dir) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::FileNotReadable,
                "cannot read manifest " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const nlohmann::json j = nlohmann::json::parse(buf.str(), nullptr, false);
  if (j.is_discarded() || !j.is_array())
    throw Error(ErrorCode::ConfigInvalid,
                "manifest " + path.string() + " must be a JSON array");

  const fs::path base = path.parent_path();
  auto resolve = [&base](const std::string& p) {
    const fs::path fp = p;
    return fp.is_absolute() ? fp : base / fp;
  };

  std::vector<BatchEntry> entries;
  std::map<std::string, bool> seen;
  for (const auto& item : j) {
    if (!item.is_object())
      throw Error(ErrorCode::ConfigInvalid,
                  "manifest entries must be objects");
    BatchEntry entry;
    std::string out;
    for (const auto& [key, value] : item.items()) {
      if (!value.is_string())
        throw Error(ErrorCode::ConfigInvalid,
                    "manifest key \"" + key + "\" must be a string");
      if (key == "pair_id")
        entry.pair_id = value.get<std::string>();
      else if (key == "src")
        entry.src = resolve(value.get<std::string>());
      else if (key == "tgt")
        entry.tgt = resolve(value.get<std::string>());
      else if (key == "gold")
        entry.gold = resolve(value.get<std::string>());
      else if (key == "out")
        out = value.get<std::string>();
      else
        throw Error(ErrorCode::ConfigInvalid,
                    "unknown manifest key \"" + key + "\"");
    }
    if (entry.pair_id.empty() || entry.src.empty() || entry.tgt.empty())
      throw Error(ErrorCode::ConfigInvalid,
                  "manifest entries need pair_id, src and tgt");
    if (seen[entry.pair_id])
      throw Error(ErrorCode::ConfigInvalid,
                  "duplicate manifest pair_id \"" + entry.pair_id + "\"");
    seen[entry.pair_id] = true;
    if (out.empty()) out = entry.pair_id + ".ladder";
    const fs::path out_fp = out;
    entry.out = out_fp.is_absolute() ? out_fp : out_dir / out_fp;
    entries.push_back(std::move(entry));
  }
  if (entries.empty())
    throw Error(ErrorCode::EmptyInput,
                "manifest " + path.string() + " lists no document pairs");
  return entries;
}

/// Align one loaded pair with the configured method; returns the ladder and a
/// one-line summary of its validation report.
std::pair<Ladder, std::string> align_pair(const Document& src,
                                          const Document& tgt,
                                          const std::string& method,
                                          const std::string& pair_id,
                                          const AppConfig& config,
                                          const PromptTemplate& tmpl) {
  if (method == "gale-church") {
    GaleChurchParams params = config.baseline;
    if (config.baseline_estimate_ratio)
      params.c = estimate_length_ratio(src, tgt);
    Ladder ladder = gale_church_align(src, tgt, params);
    ladder.pair_id = pair_id;
    const ValidationReport report =
        validate_ladder(ladder, src.size(), tgt.size());
    return {std::move(ladder), summarize_report(report)};
  }
  AlignOptions options;
  options.policy.mode = config.repair_mode;
  options.chunk_size_src = config.chunk_size_src;
  options.tgt_margin = config.tgt_margin;
  options.max_concurrency = config.run_max_concurrency;
  options.pair_id = pair_id;
  auto [ladder, report] = align_document(src, tgt, tmpl, config.llm, options);
  return {std::move(ladder), summarize_report(report)};
}

int cmd_align(const AlignArgs& args, const AppConfig& config) {
  const PromptTemplate tmpl = args.method == "llm"
                                  ? resolve_prompt_template(config)
                                  : PromptTemplate{};

  if (args.batch_path.empty()) {
    const Document src =
        load_document(args.src_path, config.io_allow_blank, "", "src");
    const Document tgt =
        load_document(args.tgt_path, config.io_allow_blank, "", "tgt");
    const std::string pair_id =
        args.pair_id.empty() ? stem_of(args.src_path) : args.pair_id;
    auto [ladder, summary] =
        align_pair(src, tgt, args.method, pair_id, config, tmpl);
    write_file_atomic(args.out_path, render_ladder(ladder));
    std::cout << pair_id << ": " << ladder.beads.size() << " beads -> "
              << args.out_path << "\n" << summary << "\n";
    return 0;
  }

  const std::vector<BatchEntry> entries =
      load_manifest(args.batch_path, args.out_dir);
  struct JobResult {
    std::string line;
    std::exception_ptr failure;
  };
  std::vector<JobResult> results(entries.size());

  auto run_entry = [&](std::size_t i) {
    const BatchEntry& entry = entries[i];
    try {
      const Document src =
          load_document(entry.src, config.io_allow_blank, "", "src");
      const Document tgt =
          load_document(entry.tgt, config.io_allow_blank, "", "tgt");
      auto [ladder, summary] =
          align_pair(src, tgt, args.method, entry.pair_id, config, tmpl);
      write_file_atomic(entry.out, render_ladder(ladder));
      results[i].line = entry.pair_id + ": " +
                        std::to_string(ladder.beads.size()) + " beads -> " +
                        entry.out.string() + " (" + summary + ")";
    } catch (...) {
      results[i].failure = std::current_exception();
    }
  };

  const std::size_t workers = std::min(
      std::max<std::size_t>(config.run_max_concurrency, 1), entries.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < entries.size(); ++i) run_entry(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < entries.size();
             i = next.fetch_add(1))
          run_entry(i);
      });
    for (std::thread& t : pool) t.join();
  }

  int exit_code = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!results[i].failure) {
      std::cout << results[i].line << "\n";
      continue;
    }
    try {
      std::rethrow_exception(results[i].failure);
    } catch (const Error& e) {
      std::cerr << entries[i].pair_id << ": error [" << error_name(e.code())
                << "]: " << e.what() << "\n";
      if (exit_code == 0) exit_code = exit_code_for(e.code());
    } catch (const std::exception& e) {
      std::cerr << entries[i].pair_id << ": error: " << e.what() << "\n";
      if (exit_code == 0) exit_code = 1;
    }
  }
  return exit_code;
}

// ------------------------------------------------------------------- eval

struct EvalArgs {
  std::string gold_path, hyp_path;
  std::string src_path, tgt_path;  // optional, enable shape checking
  bool include_null = false;
  bool json = false;
};

int cmd_eval(const EvalArgs& args, const AppConfig& config) {
  const bool include_null = args.include_null || config.eval_include_null;
  const Ladder gold = load_ladder(args.gold_path);
  const Ladder hyp = load_ladder(args.hyp_path);

  StrictCounts counts;
  if (!args.src_path.empty() || !args.tgt_path.empty()) {
    if (args.src_path.empty() || args.tgt_path.empty())
      throw Error(ErrorCode::UsageError,
                  "--src and --tgt must be given together");
    const Document src =
        load_document(args.src_path, config.io_allow_blank, "", "src");
    const Document tgt =
        load_document(args.tgt_path, config.io_allow_blank, "", "tgt");
    counts = strict_compare_checked(hyp, gold, src.size(), tgt.size(),
                                    include_null);
  } else {
    counts = strict_compare(hyp, gold, include_null);
  }
  const Metrics metrics = prf(counts);

  if (args.json) {
    EvalReport report;
    report.method_name = stem_of(args.hyp_path);
    report.per_doc.emplace(stem_of(args.gold_path),
                           PairEval{counts, metrics});
    report.total = counts;
    report.overall = metrics;
    std::cout << eval_report_json(report);
  } else {
    std::cout << "P " << format_fixed(metrics.precision, 3) << " R "
              << format_fixed(metrics.recall, 3) << " F1 "
              << format_fixed(metrics.f1, 3) << "\n";
  }
  return 0;
}

// ------------------------------------------------------------------ stats

int cmd_stats(const std::string& src_path, const std::string& tgt_path,
              const std::string& gold_path, const AppConfig& config) {
  const Document src =
      load_document(src_path, config.io_allow_blank, "", "src");
  const Document tgt =
      load_document(tgt_path, config.io_allow_blank, "", "tgt");
  std::optional<Ladder> gold;
  if (!gold_path.empty()) gold = load_ladder(gold_path);

  const CorpusStats stats =
      corpus_stats(src, tgt, gold ? &*gold : nullptr);
  std::cout << "src sentences " << stats.src_sentences << "\n"
            << "tgt sentences " << stats.tgt_sentences << "\n"
            << "src tokens " << stats.src_tokens << " [unicode-whitespace]\n"
            << "tgt tokens " << stats.tgt_tokens << " [unicode-whitespace]\n"
            << "SENT% " << format_fixed(stats.sent_ratio_pct, 2) << "\n";
  if (stats.one_to_one_pct)
    std::cout << "1-1 " << format_fixed(*stats.one_to_one_pct, 2) << "\n";
  return 0;
}

// ---------------------------------------------------------------- compare

int cmd_compare(const std::string& gold_dir,
                const std::vector<std::string>& hyp_specs, bool include_null,
                bool json, const AppConfig& config) {
  const std::map<std::string, Ladder> gold = load_ladder_dir(gold_dir);
  std::vector<std::pair<std::string, std::map<std::string, Ladder>>> methods;
  for (const std::string& spec : hyp_specs) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
      throw Error(ErrorCode::UsageError,
                  "--hyp takes NAME=DIR, got \"" + spec + "\"");
    methods.emplace_back(spec.substr(0, eq),
                         load_ladder_dir(spec.substr(eq + 1)));
  }
  const CompareReport report = compare_report(
      gold, methods, include_null || config.eval_include_null);
  std::cout << (json ? compare_report_json(report)
                     : format_compare_table(report));
  return 0;
}

// --------------------------------------------------------------- validate

int cmd_validate(const std::string& ladder_path, std::size_t src_len,
                 std::size_t tgt_len, const std::string& src_path,
                 const std::string& tgt_path, const AppConfig& config) {
  if (!src_path.empty() != !tgt_path.empty())
    throw Error(ErrorCode::UsageError, "--src and --tgt must be given together");
  if (!src_path.empty()) {
    src_len = load_document(src_path, config.io_allow_blank).size();
    tgt_len = load_document(tgt_path, config.io_allow_blank).size();
  } else if (src_len == 0 || tgt_len == 0) {
    throw Error(ErrorCode::UsageError,
                "give either --src/--tgt files or positive --src-len/--tgt-len");
  }
  const Ladder ladder = load_ladder(ladder_path);
  const ValidationReport report = validate_ladder(ladder, src_len, tgt_len);
  std::cout << summarize_report(report) << "\n";
  return report.is_gold_valid ? 0 : exit_code_for(ErrorCode::LadderInvalid);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sentence alignment toolkit for parallel documents"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file");

  AlignArgs align_args;
  CLI::App* align = app.add_subcommand(
      "align", "Align a document pair (or a batch manifest) into ladder files");
  align->add_option("--src", align_args.src_path, "Source document");
  align->add_option("--tgt", align_args.tgt_path, "Target document");
  align->add_option("--out", align_args.out_path, "Output ladder file");
  align
      ->add_option("--method", align_args.method,
                   "Alignment method: llm or gale-church")
      ->check(CLI::IsMember({"llm", "gale-church"}));
  align->add_option("--batch", align_args.batch_path,
                    "Manifest of document pairs to align");
  align->add_option("--out-dir", align_args.out_dir,
                    "Directory for batch outputs (default .)");
  align->add_option("--pair-id", align_args.pair_id,
                    "Pair id (default: source file stem)");
  std::string align_backend, align_mock_dir, align_replay_dir, align_prompt;
  bool align_strict = false, align_record = false, align_estimate = false;
  bool align_allow_blank = false;
  long long align_chunk = -1, align_margin = -1, align_conc = -1;
  align->add_option("--backend", align_backend,
                    "LLM backend: http_chat, replay or mock");
  align->add_option("--mock-dir", align_mock_dir, "Mock fixture directory");
  align->add_option("--replay-dir", align_replay_dir, "Replay store directory");
  align->add_flag("--record", align_record,
                  "Record http_chat responses into the replay store");
  align->add_option("--prompt", align_prompt, "Prompt template JSON file");
  align->add_flag("--strict", align_strict,
                  "Error on invalid model output instead of repairing");
  align->add_flag("--estimate-ratio", align_estimate,
                  "Estimate the length ratio from the documents themselves");
  align->add_flag("--allow-blank", align_allow_blank,
                  "Skip blank input lines instead of failing");
  align->add_option("--chunk-size", align_chunk,
                    "Source sentences per request (0 = whole document)");
  align->add_option("--tgt-margin", align_margin,
                    "Extra target lines around each chunk window");
  align->add_option("--max-concurrency", align_conc,
                    "Concurrent requests bound");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand(
      "eval", "Score a hypothesis ladder against a gold ladder");
  eval->add_option("--gold", eval_args.gold_path, "Gold ladder")->required();
  eval->add_option("--hyp", eval_args.hyp_path, "Hypothesis ladder")
      ->required();
  eval->add_option("--src", eval_args.src_path,
                   "Source document (enables shape checking)");
  eval->add_option("--tgt", eval_args.tgt_path,
                   "Target document (enables shape checking)");
  eval->add_flag("--include-null", eval_args.include_null,
                 "Count beads with an empty side too");
  eval->add_flag("--json", eval_args.json, "Emit a JSON report");

  std::string stats_src, stats_tgt, stats_gold;
  CLI::App* stats =
      app.add_subcommand("stats", "Corpus statistics for a document pair");
  stats->add_option("--src", stats_src, "Source document")->required();
  stats->add_option("--tgt", stats_tgt, "Target document")->required();
  stats->add_option("--gold", stats_gold,
                    "Gold ladder (adds the 1-1 percentage)");

  std::string cmp_gold_dir;
  std::vector<std::string> cmp_hyps;
  bool cmp_include_null = false, cmp_json = false;
  CLI::App* compare = app.add_subcommand(
      "compare", "Compare methods' ladder directories against gold");
  compare->add_option("--gold-dir", cmp_gold_dir, "Gold ladder directory")
      ->required();
  compare->add_option("--hyp", cmp_hyps, "Method as NAME=DIR (repeatable)")
      ->required();
  compare->add_flag("--include-null", cmp_include_null,
                    "Count beads with an empty side too");
  compare->add_flag("--json", cmp_json, "Emit a JSON report");

  std::string val_ladder, val_src, val_tgt;
  long long val_src_len = 0, val_tgt_len = 0;
  CLI::App* validate = app.add_subcommand(
      "validate", "Check a ladder against document lengths");
  validate->add_option("--ladder", val_ladder, "Ladder file")->required();
  validate->add_option("--src-len", val_src_len, "Source sentence count");
  validate->add_option("--tgt-len", val_tgt_len, "Target sentence count");
  validate->add_option("--src", val_src, "Source document (counts lines)");
  validate->add_option("--tgt", val_tgt, "Target document (counts lines)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage errors are exit 2 regardless of CLI11's default
  }

  try {
    AppConfig config = load_app_config(
        config_path.empty()
            ? std::optional<fs::path>{}
            : std::optional<fs::path>{fs::path(config_path)});
    apply_env_overrides(config);

    if (align->parsed()) {
      // Flags override config and environment.
      if (!align_backend.empty())
        config.llm.backend = backend_kind_from_name(align_backend);
      if (!align_mock_dir.empty()) config.llm.mock_dir = align_mock_dir;
      if (!align_replay_dir.empty()) config.llm.replay_dir = align_replay_dir;
      if (align_record) config.llm.record = true;
      if (!align_prompt.empty()) config.prompt_file = align_prompt;
      if (align_strict) config.repair_mode = RepairMode::Strict;
      if (align_estimate) config.baseline_estimate_ratio = true;
      if (align_allow_blank) config.io_allow_blank = true;
      if (align_chunk >= 0)
        config.chunk_size_src = static_cast<std::size_t>(align_chunk);
      if (align_margin >= 0)
        config.tgt_margin = static_cast<std::size_t>(align_margin);
      if (align_conc >= 0)
        config.run_max_concurrency = static_cast<std::size_t>(align_conc);

      if (align_args.batch_path.empty()) {
        if (align_args.src_path.empty() || align_args.tgt_path.empty() ||
            align_args.out_path.empty())
          throw Error(ErrorCode::UsageError,
                      "align needs --src, --tgt and --out (or --batch)");
      } else if (!align_args.src_path.empty() ||
                 !align_args.tgt_path.empty() ||
                 !align_args.out_path.empty()) {
        throw Error(ErrorCode::UsageError,
                    "--batch excludes --src/--tgt/--out");
      }
      return cmd_align(align_args, config);
    }
    if (eval->parsed()) return cmd_eval(eval_args, config);
    if (stats->parsed()) return cmd_stats(stats_src, stats_tgt, stats_gold, config);
    if (compare->parsed())
      return cmd_compare(cmp_gold_dir, cmp_hyps, cmp_include_null, cmp_json,
                         config);
    if (validate->parsed()) {
      if (val_src_len < 0 || val_tgt_len < 0)
        throw Error(ErrorCode::UsageError, "lengths must not be negative");
      return cmd_validate(val_ladder, static_cast<std::size_t>(val_src_len),
                          static_cast<std::size_t>(val_tgt_len), val_src,
                          val_tgt, config);
    }
    throw Error(ErrorCode::UsageError, "no subcommand given");
  } catch (const Error& e) {
    std::cerr << "error [" << error_name(e.code()) << "]: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
