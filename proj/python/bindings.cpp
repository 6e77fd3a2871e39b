#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "lexitrend/association.hpp"
#include "lexitrend/correlation.hpp"
#include "lexitrend/error.hpp"
#include "lexitrend/matcher.hpp"
#include "lexitrend/pipeline.hpp"
#include "lexitrend/text.hpp"
#include "lexitrend/trends.hpp"

namespace py = pybind11;
using namespace lexitrend;

namespace {

Month month_arg(const std::string& s) {
  auto m = Month::parse(s);
  if (!m) throw ConfigError("invalid month '" + s + "'; expected YYYY-MM");
  return *m;
}

MonthlySeries series_arg(const std::string& first, std::vector<double> values) {
  MonthlySeries s;
  s.first = month_arg(first);
  s.provenance.assign(values.size(), Provenance::observed);
  s.values = std::move(values);
  return s;
}

RunConfig config_arg(const std::map<std::string, std::string>& settings) {
  RunConfig c;
  for (const auto& [k, v] : settings) c.set(k, v);
  return c;
}

}  // namespace

PYBIND11_MODULE(_lexitrend, m) {
  m.doc() = "Core routines of the lexitrend pipeline";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);

  m.def("lowercase", [](const std::string& s) {
    auto out = text::lowercase(s);
    if (!out) throw DataError("invalid UTF-8");
    return *out;
  });

  m.def(
      "scan",
      [](std::vector<std::string> patterns, const std::string& text) {
        Matcher matcher{PatternSet(std::move(patterns))};
        std::vector<std::tuple<std::string, std::size_t, std::size_t>> out;
        for (const auto& e : matcher.scan(text, 0))
          out.emplace_back(matcher.patterns().pattern(e.term), e.span.start, e.span.end);
        return out;
      },
      py::arg("patterns"), py::arg("text"),
      "Whole-word matches as (pattern, start, end) byte offsets into the lowercased text.");

  m.def("significance", &significance, py::arg("r"), py::arg("n"));

  m.def(
      "benjamini_hochberg",
      [](const std::vector<double>& p, double alpha) {
        auto r = benjamini_hochberg(p, alpha);
        return std::make_pair(r.q_values, r.rejected);
      },
      py::arg("p_values"), py::arg("alpha") = 0.01);

  m.def(
      "cross_correlation",
      [](const std::string& ud_first, std::vector<double> ud, const std::string& tw_first, std::vector<double> tw,
         int k_min, int k_max, int min_overlap) {
        auto cc = cross_correlation(series_arg(ud_first, std::move(ud)), series_arg(tw_first, std::move(tw)),
                                    LagOptions{k_min, k_max, min_overlap, CcfMode::per_lag_pearson});
        std::map<int, double> r;
        for (const auto& [k, c] : cc.by_lag) r[k] = c.r;
        return r;
      },
      py::arg("ud_first"), py::arg("ud"), py::arg("tw_first"), py::arg("tw"), py::arg("k_min") = -3,
      py::arg("k_max") = 3, py::arg("min_overlap") = 12);

  m.def(
      "best_lag",
      [](const std::map<int, double>& r) {
        auto b = best_lag(r);
        return std::make_pair(b.lag, b.r);
      },
      py::arg("r_by_lag"));

  m.def(
      "pelt",
      [](const std::vector<double>& x, std::optional<double> penalty, std::size_t min_segment) {
        auto r = pelt_changepoints(x, penalty ? *penalty : default_penalty(x), min_segment);
        return std::make_pair(r.change_points, r.cost);
      },
      py::arg("x"), py::arg("penalty") = py::none(), py::arg("min_segment") = 2);

  m.def(
      "trending_months",
      [](const std::string& first, std::vector<double> values, std::optional<double> penalty) {
        auto report = detect_trends(series_arg(first, std::move(values)), Platform::twitter, penalty);
        std::vector<std::string> out;
        for (Month mo : report.trending_months) out.push_back(mo.to_string());
        return out;
      },
      py::arg("first"), py::arg("values"), py::arg("penalty") = py::none());

  m.def("pmi", &pmi_from_counts, py::arg("joint"), py::arg("tag_count"), py::arg("group_count"), py::arg("total"),
        py::arg("log_base") = 0.0);

  m.def(
      "config_hash", [](const std::map<std::string, std::string>& settings) { return config_arg(settings).hash(); },
      py::arg("settings"));

  m.def(
      "match",
      [](const std::map<std::string, std::string>& settings) {
        auto config = config_arg(settings);
        MatchSummary s;
        {
          py::gil_scoped_release release;
          s = cmd_match(config);
        }
        return py::make_tuple(s.files, s.patterns);
      },
      py::arg("settings"), "Runs the match stage; returns (files, patterns).");

  m.def(
      "analyze",
      [](const std::map<std::string, std::string>& settings) {
        auto config = config_arg(settings);
        AnalyzeSummary s;
        {
          py::gil_scoped_release release;
          s = cmd_analyze(config);
        }
        py::dict out;
        out["selected"] = s.selected;
        out["analyzed"] = s.analyzed;
        out["excluded"] = s.excluded;
        for (auto c : {Category::positive, Category::negative, Category::none})
          out[py::str(std::string(to_string(c)))] = s.categories.count(c) ? s.categories.at(c) : 0;
        return out;
      },
      py::arg("settings"));

  m.def(
      "plotdata",
      [](const std::map<std::string, std::string>& settings, const std::string& term,
         std::optional<std::string> platform) {
        auto config = config_arg(settings);
        std::ostringstream os;
        if (platform) cmd_plotdata_platform(config, term, *platform, os);
        else cmd_plotdata(config, term, os);
        return os.str();
      },
      py::arg("settings"), py::arg("term"), py::arg("platform") = py::none());
}
