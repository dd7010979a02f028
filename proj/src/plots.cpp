#include "drivesense/plots.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace drivesense {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 320;
constexpr int kMargin = 48;

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

}  // namespace

std::string render_line_svg(const std::string& title,
                            const std::vector<double>& t_seconds,
                            const std::vector<double>& values) {
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";

  if (!t_seconds.empty() && t_seconds.size() == values.size()) {
    double t0 = *std::min_element(t_seconds.begin(), t_seconds.end());
    double t1 = *std::max_element(t_seconds.begin(), t_seconds.end());
    double v0 = *std::min_element(values.begin(), values.end());
    double v1 = *std::max_element(values.begin(), values.end());
    if (t1 - t0 < 1e-12) t1 = t0 + 1.0;
    if (v1 - v0 < 1e-12) {
      v0 -= 0.5;
      v1 += 0.5;
    }
    auto px = [&](double t) {
      return kMargin + (t - t0) / (t1 - t0) * (kWidth - 2 * kMargin);
    };
    auto py = [&](double v) {
      return kHeight - kMargin - (v - v0) / (v1 - v0) * (kHeight - 2 * kMargin);
    };
    svg << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\""
        << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin
        << "\" stroke=\"#888\"/>\n";
    svg << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin
        << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"#888\"/>\n";
    svg << "<text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 16
        << "\" font-family=\"sans-serif\" font-size=\"10\">" << fmt(t0) << " s</text>\n";
    svg << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kHeight - kMargin + 16
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
        << fmt(t1) << " s</text>\n";
    svg << "<text x=\"" << kMargin - 4 << "\" y=\"" << kHeight - kMargin
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
        << fmt(v0) << "</text>\n";
    svg << "<text x=\"" << kMargin - 4 << "\" y=\"" << kMargin + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
        << fmt(v1) << "</text>\n";
    svg << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < t_seconds.size(); ++i) {
      svg << fmt(px(t_seconds[i])) << "," << fmt(py(values[i])) << " ";
    }
    svg << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string render_bar_svg(const std::string& title,
                           const std::vector<std::pair<std::string, double>>& bars) {
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
  const double x_zero = kWidth / 2.0;
  const double span = (kWidth - 2 * kMargin) / 2.0;
  const double bar_h = bars.empty() ? 0.0
                                    : std::min(32.0, (kHeight - 2.0 * kMargin) /
                                                         static_cast<double>(bars.size()));
  svg << "<line x1=\"" << x_zero << "\" y1=\"" << kMargin << "\" x2=\"" << x_zero
      << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"#888\"/>\n";
  for (size_t i = 0; i < bars.size(); ++i) {
    const double r = std::clamp(bars[i].second, -1.0, 1.0);
    const double y = kMargin + i * bar_h + 2;
    const double w = std::abs(r) * span;
    const double x = r >= 0 ? x_zero : x_zero - w;
    svg << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(w)
        << "\" height=\"" << fmt(bar_h - 4)
        << "\" fill=\"" << (r >= 0 ? "#2ca02c" : "#d62728") << "\"/>\n";
    svg << "<text x=\"" << kMargin - 40 << "\" y=\"" << fmt(y + bar_h / 2)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << bars[i].first << "</text>\n";
    svg << "<text x=\"" << fmt(x_zero + (r >= 0 ? w + 4 : -w - 34)) << "\" y=\""
        << fmt(y + bar_h / 2) << "\" font-family=\"sans-serif\" font-size=\"10\">"
        << fmt(r) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::string> emit_plots(const RunReport& report,
                                    const SignalSeries& physiology,
                                    const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> written;

  if (report.params.windows.empty()) {
    written.push_back("parameter plots skipped: empty estimation series");
  } else {
    const char* names[5] = {"s0", "v0", "T", "a", "b"};
    for (int p = 0; p < 5; ++p) {
      std::vector<double> t, v;
      std::ostringstream csv;
      csv << "t_center_s," << names[p] << "\n";
      for (const ParamWindow& w : report.params.windows) {
        const double vals[5] = {w.params.s0, w.params.v0, w.params.T, w.params.a,
                                w.params.b};
        t.push_back(w.t_center_us * 1e-6);
        v.push_back(vals[p]);
        csv << fmt(w.t_center_us * 1e-6) << "," << fmt(vals[p]) << "\n";
      }
      const std::string base = std::string("param_") + names[p];
      write_text_file(fs::path(out_dir) / (base + ".svg"),
                      render_line_svg(std::string(names[p]) + " over time", t, v));
      write_text_file(fs::path(out_dir) / (base + ".csv"), csv.str());
      written.push_back(base + ".svg");
      written.push_back(base + ".csv");
    }
  }

  if (physiology.size() > 0) {
    std::vector<double> t, v;
    std::ostringstream csv;
    csv << "t_s,value\n";
    for (size_t i = 0; i < physiology.size(); ++i) {
      t.push_back(physiology.timestamps_us[i] * 1e-6);
      v.push_back(physiology.values[i]);
      csv << fmt(t.back()) << "," << fmt(v.back()) << "\n";
    }
    write_text_file(fs::path(out_dir) / "physiology.svg",
                    render_line_svg("physiology signal", t, v));
    write_text_file(fs::path(out_dir) / "physiology.csv", csv.str());
    written.push_back("physiology.svg");
    written.push_back("physiology.csv");
  }

  if (!report.correlations.empty()) {
    std::ostringstream csv;
    csv << "parameter,r\n";
    for (const auto& [name, r] : report.correlations) {
      csv << name << "," << fmt(r) << "\n";
    }
    write_text_file(fs::path(out_dir) / "correlation.svg",
                    render_bar_svg("parameter/physiology correlation", report.correlations));
    write_text_file(fs::path(out_dir) / "correlation.csv", csv.str());
    written.push_back("correlation.svg");
    written.push_back("correlation.csv");
  }
  return written;
}

}  // namespace drivesense
