#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include <fixtures.hpp>
#include <ttinherit/errors.hpp>
#include <ttinherit/outputs.hpp>

using namespace ttinherit;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double attr(const std::string& line, const std::string& name) {
  const std::regex re(name + "=\"([-0-9.eE+]+)\"");
  std::smatch m;
  if (!std::regex_search(line, m, re)) {
    ADD_FAILURE() << "no " << name << " in " << line;
    return NAN;
  }
  return std::stod(m[1].str());
}

struct DrawnBox {
  double q1 = NAN, q3 = NAN, median = NAN, mean = NAN, lo = NAN, hi = NAN;
  double span = NAN;
};

// Maps drawn y coordinates back to data values through each panel's axis.
std::map<std::string, DrawnBox> parse_svg(const std::string& svg) {
  std::map<std::string, DrawnBox> out;
  std::istringstream in(svg);
  std::string line;
  double lo = 0, hi = 1, top = 50, bottom = 370;
  std::string label;
  const std::regex label_re("data-label=\"([^\"]+)\"");
  auto value = [&](double y) { return lo + (bottom - y) / (bottom - top) * (hi - lo); };
  while (std::getline(in, line)) {
    std::smatch m;
    if (line.find("class=\"panel\"") != std::string::npos) {
      lo = attr(line, "data-axis-min");
      hi = attr(line, "data-axis-max");
      top = attr(line, "data-plot-top");
      bottom = attr(line, "data-plot-bottom");
    } else if (std::regex_search(line, m, label_re)) {
      label = m[1].str();
      out[label].span = hi - lo;
    } else if (line.find("class=\"iqr\"") != std::string::npos) {
      out[label].q3 = value(attr(line, "y"));
      out[label].q1 = value(attr(line, "y") + attr(line, "height"));
    } else if (line.find("class=\"median\"") != std::string::npos) {
      out[label].median = value(attr(line, "y1"));
    } else if (line.find("class=\"mean\"") != std::string::npos) {
      out[label].mean = value(attr(line, "y1"));
    } else if (line.find("class=\"cap-high\"") != std::string::npos) {
      out[label].hi = value(attr(line, "y1"));
    } else if (line.find("class=\"cap-low\"") != std::string::npos) {
      out[label].lo = value(attr(line, "y1"));
    }
  }
  return out;
}

ExperimentResult small_run(const std::filesystem::path& dir) {
  auto c = fixtures::small_config({7, 7, 7, 7}, {2, 3, 2}, 6, 5);
  c.output_dir = dir.string();
  c.emit_svg = true;
  return run_experiment(c);
}

} // namespace

TEST(FormatReal, SeventeenDigits) {
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(format_real(2.0), "2");
  EXPECT_EQ(format_real(NAN), "nan");
  EXPECT_EQ(std::stod(format_real(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Outputs, TrialsCsvCardinalityAndRoundTrip) {
  const auto dir = fixtures::scratch_dir("outputs_csv");
  const auto r = small_run(dir);
  write_outputs(r);
  const auto rows = read_trials_csv(dir / "trials.csv");
  EXPECT_EQ(rows.size(), 6u * 3u * 11u);
  const auto expected = trial_rows(r.trials);
  ASSERT_EQ(rows.size(), expected.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(rows[k].generator, expected[k].generator);
    EXPECT_EQ(rows[k].parameter_label, expected[k].parameter_label);
    EXPECT_EQ(rows[k].value, expected[k].value);
    EXPECT_EQ(rows[k].t, expected[k].t);
    EXPECT_EQ(rows[k].bound_pass, expected[k].bound_pass);
  }
  const std::string text = slurp(dir / "trials.csv");
  EXPECT_EQ(text.substr(0, text.find('\n')), kTrialsCsvHeader);
}

TEST(Outputs, SummaryJsonRoundTrips) {
  const auto dir = fixtures::scratch_dir("outputs_json");
  const auto r = small_run(dir);
  write_outputs(r);
  const auto doc = nlohmann::json::parse(slurp(dir / "summary.json"));
  EXPECT_EQ(doc.at("bound_violations"), 0);
  EXPECT_EQ(doc.at("rank_tol"), r.config.rank_tol);
  EXPECT_FALSE(doc.at("version").get<std::string>().empty());
  EXPECT_EQ(doc.at("config"), to_json(r.config));
  for (const auto& [gen, boxes] : r.summaries) {
    const auto& arr = doc.at("summaries").at(gen);
    ASSERT_EQ(arr.size(), boxes.size());
    for (std::size_t k = 0; k < boxes.size(); ++k) {
      EXPECT_EQ(boxplot_from_json(arr[k]), boxes[k]);
    }
  }
}

TEST(Outputs, SvgBoxesMatchSummaries) {
  const auto dir = fixtures::scratch_dir("outputs_svg");
  const auto r = small_run(dir);
  write_outputs(r);
  for (const auto& [gen, boxes] : r.summaries) {
    const std::string svg = slurp(dir / ("boxplot_" + gen + ".svg"));
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    const auto drawn = parse_svg(svg);
    ASSERT_EQ(drawn.size(), boxes.size());
    for (const auto& b : boxes) {
      const DrawnBox& d = drawn.at(b.label);
      const double tol = 1e-5 * d.span;
      EXPECT_NEAR(d.q1, b.q1, tol) << b.label;
      EXPECT_NEAR(d.q3, b.q3, tol) << b.label;
      EXPECT_NEAR(d.median, b.median, tol) << b.label;
      EXPECT_NEAR(d.mean, b.mean, tol) << b.label;
      EXPECT_NEAR(d.lo, b.whisker_low, tol) << b.label;
      EXPECT_NEAR(d.hi, b.whisker_high, tol) << b.label;
    }
    std::size_t outliers = 0;
    for (const auto& b : boxes) {
      outliers += b.outliers.size();
    }
    std::size_t markers = 0;
    for (std::size_t pos = 0; (pos = svg.find("class=\"outlier\"", pos)) != std::string::npos; ++pos) {
      ++markers;
    }
    EXPECT_EQ(markers, outliers);
  }
}

TEST(Outputs, ReportRecomputesSameSummaries) {
  const auto dir = fixtures::scratch_dir("outputs_report");
  const auto r = small_run(dir);
  write_outputs(r);
  const std::string before = slurp(dir / "summary.json");
  std::filesystem::remove(dir / "boxplot_gaussian.svg");
  const auto again = report_from_directory(dir);
  EXPECT_EQ(again, r.summaries);
  EXPECT_TRUE(std::filesystem::exists(dir / "boxplot_gaussian.svg"));
  const auto doc = nlohmann::json::parse(slurp(dir / "summary.json"));
  EXPECT_EQ(doc.at("config"), nlohmann::json::parse(before).at("config"));
}

TEST(Outputs, UnwritableDirectoryIsIoError) {
  const auto dir = fixtures::scratch_dir("outputs_bad");
  {
    std::ofstream f(dir / "file");
    f << "x";
  }
  auto r = small_run(dir);
  r.config.output_dir = (dir / "file" / "sub").string();
  EXPECT_THROW(write_outputs(r), IoError);
  EXPECT_THROW((void)read_trials_csv(dir / "absent.csv"), IoError);
}
