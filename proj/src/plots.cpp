#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "dagp/experiment.hpp"

namespace dagp {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 160.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

struct ChartSpec {
  const char* file;
  const char* field;
  const char* title;
  bool log_y;
};

constexpr ChartSpec kCharts[] = {
    {"objective.svg", "objective", "Objective value", false},
    {"feasibility_gap.svg", "feasibility_gap", "Feasibility gap", true},
    {"consensus_error.svg", "consensus_error", "Consensus error", true},
    {"grad_sum_norm.svg", "grad_sum_norm", "Norm of tracker sum", true},
    {"optimality_gap.svg", "optimality_gap", "Optimality gap", true},
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string render_chart(const ChartSpec& spec,
                         const std::vector<std::pair<std::string, Trace>>& traces) {
  auto usable = [&](double y) { return std::isfinite(y) && (!spec.log_y || y > 0.0); };
  auto ty = [&](double y) { return spec.log_y ? std::log10(y) : y; };

  double x_max = 1.0;
  double y_lo = std::numeric_limits<double>::infinity();
  double y_hi = -std::numeric_limits<double>::infinity();
  for (const auto& [name, trace] : traces) {
    for (const auto& r : trace.records) {
      x_max = std::max(x_max, static_cast<double>(r.n));
      const double y = trace_field(r, spec.field);
      if (!usable(y)) continue;
      y_lo = std::min(y_lo, ty(y));
      y_hi = std::max(y_hi, ty(y));
    }
  }
  if (!std::isfinite(y_lo)) {
    y_lo = 0.0;
    y_hi = 1.0;
  }
  if (spec.log_y) {
    y_lo = std::floor(y_lo);
    y_hi = std::ceil(y_hi);
  }
  if (y_hi - y_lo < 1e-12) {
    y_lo -= 0.5;
    y_hi += 0.5;
  }

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double n) { return kLeft + plot_w * n / x_max; };
  auto py = [&](double v) { return kTop + plot_h * (1.0 - (v - y_lo) / (y_hi - y_lo)); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" fill=\"white\"/>\n"
     << "<text x=\"" << kLeft << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">"
     << escape(spec.title) << (spec.log_y ? " (log scale)" : "") << "</text>\n"
     << "<g stroke=\"black\" stroke-width=\"1\">\n"
     << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
     << "\" y2=\"" << kTop + plot_h << "\"/>\n"
     << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
     << kTop + plot_h << "\"/>\n"
     << "</g>\n";

  os << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int k = 0; k <= 4; ++k) {
    const double n = x_max * k / 4.0;
    os << "<text x=\"" << num(px(n)) << "\" y=\"" << num(kTop + plot_h + 18)
       << "\" text-anchor=\"middle\">" << num(std::round(n)) << "</text>\n";
    const double v = y_lo + (y_hi - y_lo) * k / 4.0;
    const std::string label = spec.log_y ? "1e" + num(v) : num(v);
    os << "<text x=\"" << num(kLeft - 6) << "\" y=\"" << num(py(v) + 4)
       << "\" text-anchor=\"end\">" << label << "</text>\n";
  }
  os << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 10)
     << "\" text-anchor=\"middle\">iteration n</text>\n</g>\n";

  std::size_t series = 0;
  for (const auto& [name, trace] : traces) {
    const char* color = kPalette[series % std::size(kPalette)];
    std::vector<std::vector<std::pair<double, double>>> segments(1);
    for (const auto& r : trace.records) {
      const double y = trace_field(r, spec.field);
      if (!usable(y)) {
        if (!segments.back().empty()) segments.emplace_back();
        continue;
      }
      segments.back().emplace_back(px(static_cast<double>(r.n)), py(ty(y)));
    }
    for (const auto& seg : segments) {
      if (seg.empty()) continue;
      os << "<polyline data-series=\"" << escape(name) << "\" fill=\"none\" stroke=\"" << color
         << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t k = 0; k < seg.size(); ++k) {
        if (k > 0) os << ' ';
        os << num(seg[k].first) << ',' << num(seg[k].second);
      }
      os << "\"/>\n";
    }
    const double ly = kTop + 16.0 * static_cast<double>(series) + 8.0;
    os << "<line x1=\"" << num(kLeft + plot_w + 12) << "\" y1=\"" << num(ly) << "\" x2=\""
       << num(kLeft + plot_w + 36) << "\" y2=\"" << num(ly) << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << num(kLeft + plot_w + 42) << "\" y=\"" << num(ly + 4)
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(name) << "</text>\n";
    ++series;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace

std::vector<std::filesystem::path> emit_plots(
    const std::vector<std::pair<std::string, Trace>>& traces, const std::filesystem::path& output_dir) {
  if (traces.empty()) throw std::invalid_argument("emit_plots: no traces");
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) throw IoError("cannot create '" + output_dir.string() + "': " + ec.message());

  std::vector<std::filesystem::path> written;
  for (const auto& spec : kCharts) {
    const auto path = output_dir / spec.file;
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << render_chart(spec, traces);
    if (!out) throw IoError("write failed for '" + path.string() + "'");
    written.push_back(path);
  }
  return written;
}

}  // namespace dagp
