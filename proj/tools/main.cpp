#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "lexitrend/dictionary.hpp"
#include "lexitrend/error.hpp"
#include "lexitrend/matcher.hpp"
#include "lexitrend/pipeline.hpp"
#include "lexitrend/synth.hpp"
#include "oracles.hpp"

using namespace lexitrend;

namespace {

// Options shared by the pipeline subcommands. Values given on the command
// line override the config file.
struct ConfigOptions {
  std::string config_file;
  std::map<std::string, std::string> values;
  bool count_per_doc = false;

  void attach(CLI::App& app, const std::vector<std::string>& keys) {
    app.add_option("-c,--config", config_file, "key = value config file")->check(CLI::ExistingFile);
    for (const auto& key : keys) {
      if (key == "count-per-doc") {
        app.add_flag("--count-per-doc", count_per_doc, "count each term at most once per event");
        continue;
      }
      app.add_option("--" + key, values[key]);
    }
  }

  RunConfig build() const {
    RunConfig c;
    if (!config_file.empty()) c.load_file(config_file);
    for (const auto& [k, v] : values)
      if (!v.empty()) c.set(k, v);
    if (count_per_doc) c.count_per_doc = true;
    return c;
  }
};

const std::vector<std::string> kMatchKeys = {"window", "events", "dict", "stopwords", "out", "lang",
                                             "min-term-length", "count-per-doc", "time-keys", "text-key",
                                             "lang-key", "error-budget", "threads"};
const std::vector<std::string> kAnalyzeKeys = {
    "window",     "dict",          "stopwords",    "lexicon",          "out",    "events",
    "lang",       "min-term-length", "min-occurrences", "min-overlap-months", "k-min", "k-max",
    "alpha",      "alpha-trend",   "pelt-penalty", "ccf-mode",         "count-per-doc", "error-budget",
    "support-floor", "log-base",   "max-missing-days", "seed",         "threads", "time-keys",
    "text-key",   "lang-key"};

int run(int argc, char** argv) {
  CLI::App app{"lexitrend: slang term matching and cross-platform trend analysis"};
  app.require_subcommand(1);

  ConfigOptions match_opts, analyze_opts, plot_opts;
  auto* match = app.add_subcommand("match", "count dictionary terms in event files");
  match_opts.attach(*match, kMatchKeys);
  auto* analyze = app.add_subcommand("analyze", "correlate, segment and summarize matched terms");
  analyze_opts.attach(*analyze, kAnalyzeKeys);

  auto* plot = app.add_subcommand("plotdata", "per-term aligned series for plotting");
  plot_opts.attach(*plot, {"out", "window"});
  std::string plot_term, plot_platform;
  plot->add_option("term", plot_term, "analyzed term")->required();
  plot->add_option("--platform", plot_platform, "ud or twitter: single-series month,value,trending_flag output");

  auto* selftest = app.add_subcommand("selftest", "run the built-in oracle suites");
  oracle::SelftestOptions st;
  std::string st_manifest, st_dir;
  selftest->add_option("--seed", st.seed);
  selftest->add_option("--rounds", st.rounds, "multiplier on randomized case counts");
  selftest->add_option("--manifest", st_manifest, "synth manifest.json to check planted lags against");
  selftest->add_option("--out", st_dir, "analyze output directory for --manifest");

  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic corpus with planted ground truth");
  synth::SynthSpec spec;
  std::string synth_out, synth_window;
  synth_cmd->add_option("--out", synth_out)->required();
  synth_cmd->add_option("--window", synth_window, "YYYY-MM:YYYY-MM");
  synth_cmd->add_option("--terms", spec.n_terms);
  synth_cmd->add_option("--filler-terms", spec.n_filler_terms);
  synth_cmd->add_option("--lags", spec.lags, "per-term lags")->delimiter(',');
  synth_cmd->add_option("--negative-fraction", spec.negative_fraction);
  synth_cmd->add_option("--noise", spec.noise);
  synth_cmd->add_option("--dropout", spec.dropout);
  synth_cmd->add_option("--ramps", spec.ramps_per_term);
  synth_cmd->add_option("--ramp-length", spec.ramp_length);
  synth_cmd->add_option("--base-daily", spec.base_daily);
  synth_cmd->add_option("--p-def-trending", spec.p_def_trending);
  synth_cmd->add_option("--p-def-baseline", spec.p_def_baseline);
  synth_cmd->add_option("--target-bytes", spec.target_bytes);
  synth_cmd->add_option("--seed", spec.seed);

  auto* scan = app.add_subcommand("scan", "print term_id, start and end of each match in text lines (stdin)");
  std::string scan_dict, scan_stopwords, scan_text;
  std::size_t scan_min_len = 3;
  scan->add_option("--dict", scan_dict)->required()->check(CLI::ExistingFile);
  scan->add_option("--stopwords", scan_stopwords)->check(CLI::ExistingFile);
  scan->add_option("--min-term-length", scan_min_len);
  scan->add_option("--text", scan_text, "scan this line instead of stdin");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (match->parsed()) {
    auto s = cmd_match(match_opts.build());
    std::cerr << "matched " << s.stats.matches << " occurrences of " << s.patterns << " terms in " << s.stats.events
              << " events from " << s.files << " files (" << s.stats.malformed_lines << " malformed lines, "
              << s.stats.invalid_utf8 << " invalid UTF-8)\n";
  } else if (analyze->parsed()) {
    auto s = cmd_analyze(analyze_opts.build());
    std::cerr << "selected " << s.selected << ", analyzed " << s.analyzed << ": " << s.categories[Category::positive]
              << " positive, " << s.categories[Category::negative] << " negative, " << s.categories[Category::none]
              << " uncorrelated\n";
  } else if (plot->parsed()) {
    auto c = plot_opts.build();
    if (plot_platform.empty())
      cmd_plotdata(c, plot_term, std::cout);
    else
      cmd_plotdata_platform(c, plot_term, plot_platform, std::cout);
  } else if (selftest->parsed()) {
    st.manifest = st_manifest;
    st.analysis_dir = st_dir;
    return oracle::run_selftest(st, std::cout) ? 0 : 2;
  } else if (synth_cmd->parsed()) {
    if (!synth_window.empty()) {
      auto w = MonthRange::parse(synth_window);
      if (!w) throw ConfigError("invalid window '" + synth_window + "'");
      spec.window = *w;
    }
    auto truth = synth::generate(spec, synth_out);
    std::cerr << "wrote " << truth.event_files.size() << " event files (" << truth.event_bytes << " bytes), "
              << truth.terms.size() << " planted terms\n";
  } else if (scan->parsed()) {
    SelectionCriteria criteria;
    criteria.min_term_length = scan_min_len;
    if (!scan_stopwords.empty()) criteria.stopwords = load_word_list(scan_stopwords);
    auto dict = load_dictionary(scan_dict);
    Matcher m{PatternSet(filter_terms(dict.terms(), criteria))};
    auto emit = [&](const std::string& line) {
      for (const auto& e : m.scan(line, 0))
        std::cout << m.patterns().pattern(e.term) << '\t' << e.span.start << '\t' << e.span.end << '\n';
    };
    if (!scan_text.empty()) {
      emit(scan_text);
    } else {
      for (std::string line; std::getline(std::cin, line);) emit(line);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
}
