#include <ttinherit/outputs.hpp>

#include <algorithm>
#include <limits>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <ttinherit/errors.hpp>

#ifndef TTINHERIT_VERSION
#define TTINHERIT_VERSION "0.0.0"
#endif
#ifndef TTINHERIT_GIT_DESCRIBE
#define TTINHERIT_GIT_DESCRIBE "unknown"
#endif

namespace ttinherit {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    fields.emplace_back();
  }
  return fields;
}

template <typename T>
T parse_number(const std::string& text, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw IoError(std::string("trials.csv: bad ") + what + " '" + text + "'");
  }
  return value;
}

double parse_real(const std::string& text) {
  if (text == "nan") {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return parse_number<double>(text, "number");
}

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  out << text;
  if (!out) {
    throw IoError("write to " + path.string() + " failed");
  }
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
    case '&':
      out += "&amp;";
      break;
    case '<':
      out += "&lt;";
      break;
    case '>':
      out += "&gt;";
      break;
    case '"':
      out += "&quot;";
      break;
    default:
      out += c;
    }
  }
  return out;
}

bool is_row_family(const std::string& label) {
  // alpha_<i>_<t> has two underscores.
  return std::count(label.begin(), label.end(), '_') == 2;
}

struct Panel {
  std::string name;
  std::string title;
  std::vector<const BoxplotSummary*> boxes;
};

constexpr double kPlotTop = 50.0;
constexpr double kPlotBottom = 370.0;
constexpr double kBoxSpacing = 56.0;
constexpr double kBoxWidth = 28.0;
constexpr double kPanelMargin = 70.0;

void render_panel(std::ostringstream& svg, const Panel& panel, double x0, double width) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const BoxplotSummary* b : panel.boxes) {
    lo = std::min({lo, b->whisker_low, b->mean});
    hi = std::max({hi, b->whisker_high, b->mean});
    for (const double o : b->outliers) {
      lo = std::min(lo, o);
      hi = std::max(hi, o);
    }
  }
  if (hi - lo <= 0.0) {
    const double pad = std::max(std::abs(lo) * 0.1, 0.5);
    lo -= pad;
    hi += pad;
  } else {
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  auto y = [&](double v) { return kPlotBottom - (v - lo) / (hi - lo) * (kPlotBottom - kPlotTop); };

  svg << "  <g class=\"panel\" data-panel=\"" << panel.name << "\" data-axis-min=\"" << format_real(lo)
      << "\" data-axis-max=\"" << format_real(hi) << "\" data-plot-top=\"" << fixed(kPlotTop)
      << "\" data-plot-bottom=\"" << fixed(kPlotBottom) << "\">\n";
  svg << "    <text x=\"" << fixed(x0 + width / 2) << "\" y=\"30\" text-anchor=\"middle\" font-size=\"14\">"
      << escape_xml(panel.title) << "</text>\n";
  svg << "    <line class=\"axis\" x1=\"" << fixed(x0) << "\" y1=\"" << fixed(kPlotTop) << "\" x2=\"" << fixed(x0)
      << "\" y2=\"" << fixed(kPlotBottom) << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * k / 4.0;
    svg << "    <line class=\"tick\" x1=\"" << fixed(x0 - 4) << "\" y1=\"" << fixed(y(v)) << "\" x2=\"" << fixed(x0)
        << "\" y2=\"" << fixed(y(v)) << "\" stroke=\"black\"/>\n";
    char label[32];
    std::snprintf(label, sizeof label, "%.3g", v);
    svg << "    <text x=\"" << fixed(x0 - 6) << "\" y=\"" << fixed(y(v) + 4)
        << "\" text-anchor=\"end\" font-size=\"10\">" << label << "</text>\n";
  }
  for (std::size_t k = 0; k < panel.boxes.size(); ++k) {
    const BoxplotSummary& b = *panel.boxes[k];
    const double cx = x0 + kBoxSpacing * (static_cast<double>(k) + 0.5);
    const double left = cx - kBoxWidth / 2;
    const double right = cx + kBoxWidth / 2;
    svg << "    <g class=\"box\" data-label=\"" << escape_xml(b.label) << "\" data-x=\"" << fixed(cx) << "\">\n";
    svg << "      <line class=\"whisker\" x1=\"" << fixed(cx) << "\" y1=\"" << fixed(y(b.q3)) << "\" x2=\""
        << fixed(cx) << "\" y2=\"" << fixed(y(b.whisker_high)) << "\" stroke=\"black\" stroke-dasharray=\"2,2\"/>\n";
    svg << "      <line class=\"whisker\" x1=\"" << fixed(cx) << "\" y1=\"" << fixed(y(b.q1)) << "\" x2=\""
        << fixed(cx) << "\" y2=\"" << fixed(y(b.whisker_low)) << "\" stroke=\"black\" stroke-dasharray=\"2,2\"/>\n";
    svg << "      <line class=\"cap-high\" x1=\"" << fixed(left + 6) << "\" y1=\"" << fixed(y(b.whisker_high))
        << "\" x2=\"" << fixed(right - 6) << "\" y2=\"" << fixed(y(b.whisker_high)) << "\" stroke=\"black\"/>\n";
    svg << "      <line class=\"cap-low\" x1=\"" << fixed(left + 6) << "\" y1=\"" << fixed(y(b.whisker_low))
        << "\" x2=\"" << fixed(right - 6) << "\" y2=\"" << fixed(y(b.whisker_low)) << "\" stroke=\"black\"/>\n";
    svg << "      <rect class=\"iqr\" x=\"" << fixed(left) << "\" y=\"" << fixed(y(b.q3)) << "\" width=\""
        << fixed(kBoxWidth) << "\" height=\"" << fixed(y(b.q1) - y(b.q3))
        << "\" fill=\"white\" stroke=\"blue\"/>\n";
    svg << "      <line class=\"median\" x1=\"" << fixed(left) << "\" y1=\"" << fixed(y(b.median)) << "\" x2=\""
        << fixed(right) << "\" y2=\"" << fixed(y(b.median)) << "\" stroke=\"red\" stroke-width=\"2\"/>\n";
    svg << "      <line class=\"mean\" x1=\"" << fixed(left) << "\" y1=\"" << fixed(y(b.mean)) << "\" x2=\""
        << fixed(right) << "\" y2=\"" << fixed(y(b.mean)) << "\" stroke=\"blue\" stroke-dasharray=\"4,3\"/>\n";
    for (const double o : b.outliers) {
      svg << "      <path class=\"outlier\" d=\"M " << fixed(cx - 4) << ' ' << fixed(y(o)) << " H " << fixed(cx + 4)
          << " M " << fixed(cx) << ' ' << fixed(y(o) - 4) << " V " << fixed(y(o) + 4)
          << "\" stroke=\"red\"/>\n";
    }
    svg << "      <text x=\"" << fixed(cx) << "\" y=\"" << fixed(kPlotBottom + 18)
        << "\" text-anchor=\"middle\" font-size=\"10\">" << escape_xml(b.label) << "</text>\n";
    svg << "    </g>\n";
  }
  svg << "  </g>\n";
}

} // namespace

std::string format_real(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::vector<TrialRow> trial_rows(const std::vector<TrialResult>& trials) {
  std::vector<TrialRow> rows;
  for (const TrialResult& tr : trials) {
    if (!tr.ok) {
      continue;
    }
    for (const ParameterValue& p : tr.parameters) {
      rows.push_back({to_string(tr.generator), tr.trial, p.label, p.i, p.t, p.value, p.bound_pass, p.resamples,
                      tr.wall_seconds});
    }
  }
  return rows;
}

void write_trials_csv(const std::filesystem::path& path, const std::vector<TrialRow>& rows) {
  std::ostringstream out;
  out << kTrialsCsvHeader << '\n';
  for (const TrialRow& r : rows) {
    out << r.generator << ',' << r.trial << ',' << r.parameter_label << ',' << r.i << ','
        << (r.t == 0 ? std::string() : std::to_string(r.t)) << ',' << format_real(r.value) << ','
        << (r.bound_pass ? "true" : "false") << ',' << r.resamples << ',' << format_real(r.wall_time_s) << '\n';
  }
  write_text(path, out.str());
}

std::vector<TrialRow> read_trials_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::string line;
  if (!std::getline(in, line) || line != kTrialsCsvHeader) {
    throw IoError(path.string() + ": unexpected header");
  }
  std::vector<TrialRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    const auto f = split_csv_line(line);
    if (f.size() != 9) {
      throw IoError(path.string() + ": expected 9 fields in '" + line + "'");
    }
    TrialRow r;
    r.generator = f[0];
    r.trial = parse_number<std::size_t>(f[1], "trial");
    r.parameter_label = f[2];
    r.i = parse_number<std::size_t>(f[3], "i");
    r.t = f[4].empty() ? 0 : parse_number<std::size_t>(f[4], "t");
    r.value = parse_real(f[5]);
    if (f[6] != "true" && f[6] != "false") {
      throw IoError(path.string() + ": bad bound_pass '" + f[6] + "'");
    }
    r.bound_pass = f[6] == "true";
    r.resamples = parse_number<int>(f[7], "resamples");
    r.wall_time_s = parse_real(f[8]);
    rows.push_back(std::move(r));
  }
  return rows;
}

nlohmann::json to_json(const BoxplotSummary& s) {
  return {{"label", s.label},   {"count", s.count},           {"median", s.median},
          {"q1", s.q1},         {"q3", s.q3},                 {"whisker_low", s.whisker_low},
          {"whisker_high", s.whisker_high}, {"outliers", s.outliers}, {"mean", s.mean}};
}

BoxplotSummary boxplot_from_json(const nlohmann::json& j) {
  BoxplotSummary s;
  s.label = j.at("label").get<std::string>();
  s.count = j.at("count").get<std::size_t>();
  s.median = j.at("median").get<double>();
  s.q1 = j.at("q1").get<double>();
  s.q3 = j.at("q3").get<double>();
  s.whisker_low = j.at("whisker_low").get<double>();
  s.whisker_high = j.at("whisker_high").get<double>();
  s.outliers = j.at("outliers").get<std::vector<double>>();
  s.mean = j.at("mean").get<double>();
  return s;
}

std::string version_string() { return std::string("ttinherit ") + TTINHERIT_VERSION + " (" + TTINHERIT_GIT_DESCRIBE + ")"; }

nlohmann::json summary_document(const nlohmann::json& config,
                                const std::map<std::string, std::vector<BoxplotSummary>>& summaries,
                                std::size_t violations, std::size_t failed_trials, double rank_tol) {
  nlohmann::json groups = nlohmann::json::object();
  for (const auto& [generator, boxes] : summaries) {
    nlohmann::json list = nlohmann::json::array();
    for (const BoxplotSummary& b : boxes) {
      list.push_back(to_json(b));
    }
    groups[generator] = std::move(list);
  }
  return {{"version", version_string()},
          {"quartile_method", kQuartileMethod},
          {"rank_tol", rank_tol},
          {"config", config},
          {"bound_violations", violations},
          {"failed_trials", failed_trials},
          {"summaries", groups}};
}

std::string render_boxplot_svg(const std::string& title, const std::vector<BoxplotSummary>& summaries) {
  std::vector<Panel> panels;
  Panel row{"row", "alpha_{i,t} (row sampling)", {}};
  Panel col{"column", "alpha_i, beta_i (column sampling)", {}};
  for (const BoxplotSummary& s : summaries) {
    (is_row_family(s.label) ? row : col).boxes.push_back(&s);
  }
  for (Panel* p : {&row, &col}) {
    if (!p->boxes.empty()) {
      panels.push_back(std::move(*p));
    }
  }
  double total_width = kPanelMargin;
  for (const Panel& p : panels) {
    total_width += kBoxSpacing * static_cast<double>(p.boxes.size()) + kPanelMargin;
  }
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fixed(total_width)
      << "\" height=\"410\" viewBox=\"0 0 " << fixed(total_width) << " 410\">\n";
  svg << "  <title>" << escape_xml(title) << "</title>\n";
  svg << "  <rect x=\"0\" y=\"0\" width=\"" << fixed(total_width) << "\" height=\"410\" fill=\"white\"/>\n";
  double x0 = kPanelMargin;
  for (const Panel& p : panels) {
    const double width = kBoxSpacing * static_cast<double>(p.boxes.size());
    render_panel(svg, p, x0, width);
    x0 += width + kPanelMargin;
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_outputs(const ExperimentResult& result) {
  const std::filesystem::path dir = result.config.output_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create " + dir.string() + ": " + ec.message());
  }
  write_trials_csv(dir / "trials.csv", trial_rows(result.trials));
  const nlohmann::json doc = summary_document(to_json(result.config), result.summaries, result.violations,
                                              result.failed_trials, result.config.rank_tol);
  write_text(dir / "summary.json", doc.dump(2) + "\n");
  if (result.config.emit_svg) {
    for (const auto& [generator, boxes] : result.summaries) {
      write_text(dir / ("boxplot_" + generator + ".svg"), render_boxplot_svg(generator + " generation", boxes));
    }
  }
}

std::map<std::string, std::vector<BoxplotSummary>> report_from_directory(const std::filesystem::path& dir,
                                                                         bool emit_svg) {
  const std::vector<TrialRow> rows = read_trials_csv(dir / "trials.csv");

  // Group by generator and label, both in order of first appearance.
  std::vector<std::string> generators;
  std::map<std::string, std::vector<std::string>> labels;
  std::map<std::pair<std::string, std::string>, std::vector<double>> values;
  std::size_t violations = 0;
  for (const TrialRow& r : rows) {
    if (std::find(generators.begin(), generators.end(), r.generator) == generators.end()) {
      generators.push_back(r.generator);
    }
    auto& ls = labels[r.generator];
    if (std::find(ls.begin(), ls.end(), r.parameter_label) == ls.end()) {
      ls.push_back(r.parameter_label);
    }
    if (std::isfinite(r.value)) {
      values[{r.generator, r.parameter_label}].push_back(r.value);
    }
    violations += r.bound_pass ? 0 : 1;
  }
  std::map<std::string, std::vector<BoxplotSummary>> summaries;
  for (const std::string& g : generators) {
    auto& group = summaries[g];
    for (const std::string& label : labels[g]) {
      const auto& v = values[{g, label}];
      if (!v.empty()) {
        group.push_back(summarize_boxplot(v, label));
      }
    }
  }

  nlohmann::json config = nullptr;
  double rank_tol = linalg::kDefaultRankTol;
  std::size_t failed = 0;
  if (std::ifstream previous(dir / "summary.json"); previous) {
    try {
      const nlohmann::json old = nlohmann::json::parse(previous);
      config = old.value("config", nlohmann::json(nullptr));
      rank_tol = old.value("rank_tol", rank_tol);
      failed = old.value("failed_trials", std::size_t{0});
    } catch (const nlohmann::json::exception&) {
      // An unreadable summary is replaced wholesale.
    }
  }
  write_text(dir / "summary.json", summary_document(config, summaries, violations, failed, rank_tol).dump(2) + "\n");
  if (emit_svg) {
    for (const auto& [generator, boxes] : summaries) {
      write_text(dir / ("boxplot_" + generator + ".svg"), render_boxplot_svg(generator + " generation", boxes));
    }
  }
  return summaries;
}

} // namespace ttinherit
