/* Copyright 2026 The timeslit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "timeslit/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "timeslit/errors.hpp"

namespace timeslit {

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::string column_name(const std::string& header) {
  std::string name = header.substr(0, header.find('['));
  name.erase(std::remove(name.begin(), name.end(), ' '), name.end());
  return name;
}

double parse_number(const std::string& text, std::size_t line) {
  double v = 0.0;
  const char* b = text.data();
  const char* e = b + text.size();
  while (b < e && *b == ' ') ++b;
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e) {
    throw DomainError("trace CSV line " + std::to_string(line) + ": bad number \"" + text + "\"");
  }
  return v;
}

std::string nice(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string field_csv(const Field2D& field) {
  std::string out = std::string("x[") + kLengthUnit + "],t[" + kTimeUnit +
                    "],re_psi[" + kAmplitudeUnit + "],im_psi[" + kAmplitudeUnit + "],abs2[" + kDensityUnit + "]\n";
  for (std::size_t m = 0; m < field.grid.t.n; ++m) {
    for (std::size_t i = 0; i < field.grid.x.n; ++i) {
      const cplx v = field.at(i, m);
      out += format_number(field.grid.x.at(i)) + ',' + format_number(field.grid.t.at(m)) + ',' +
             format_number(v.real()) + ',' + format_number(v.imag()) + ',' +
             format_number(std::norm(v)) + '\n';
    }
  }
  return out;
}

std::string trace_csv(const IntensityTrace& trace, double time_scale) {
  std::string out = std::string("t[") + kTimeUnit + "]";
  if (time_scale > 0.0) out += ",t_lab[s]";
  out += std::string(",intensity[") + kDensityUnit + "]";
  if (trace.incoherent) out += std::string(",intensity_incoherent[") + kDensityUnit + "]";
  out += '\n';
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    out += format_number(trace.times[i]);
    if (time_scale > 0.0) out += ',' + format_number(trace.times[i] * time_scale);
    out += ',' + format_number(trace.intensity[i]);
    if (trace.incoherent) out += ',' + format_number((*trace.incoherent)[i]);
    out += '\n';
  }
  return out;
}

std::string peaks_csv(const FringeReport& report) {
  std::string out = std::string("index[1],t[") + kTimeUnit + "],intensity[" + kDensityUnit + "]\n";
  for (std::size_t q = 0; q < report.peak_times.size(); ++q) {
    out += std::to_string(q) + ',' + format_number(report.peak_times[q]) + ',' +
           format_number(report.peak_intensities[q]) + '\n';
  }
  return out;
}

std::string scan_csv(const std::vector<ScanRow>& rows, ScanParameter parameter) {
  const std::string name(to_string(parameter));
  std::string out = std::string("parameter[-],gate_spacing[") +
                    kTimeUnit + "],flight_distance[" + kLengthUnit + "],visibility[1],spacing_T[" +
                    kTimeUnit + "],spacing_T_predicted[" + kTimeUnit + "],epsilon_T[(" +
                    kTimeUnit + ")^2],relative_error[1],peaks[1],norm_drift[1],status[-]\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : rows) {
    const bool ok = r.fringes.has_value();
    out += name + ',' + format_number(r.gate_spacing) + ',' +
           format_number(r.flight_distance) + ',' + format_number(r.visibility) + ',' +
           format_number(ok ? r.fringes->spacing_T : nan) + ',' +
           format_number(r.predicted_spacing) + ',' + format_number(r.epsilon_T()) + ',' +
           format_number(ok && r.fringes->relative_error ? *r.fringes->relative_error : nan) + ',' +
           std::to_string(ok ? r.fringes->peak_times.size() : 0) + ',' +
           format_number(r.norm_drift) + ',' + (r.error ? r.error_name : std::string("ok")) + '\n';
  }
  return out;
}

std::string estimate_csv(const std::vector<EstimateRow>& rows) {
  std::string out = "label[-],formula[-],cp[eV],epsilon_T[s^2],T[s],flight_distance[m]\n";
  for (const auto& r : rows) {
    out += r.label + ',' + std::string(to_string(r.report.formula)) + ',' +
           format_number(r.cp_ev) + ',' + format_number(r.report.epsilon_T_product) + ',' +
           format_number(r.report.equal_spacing_T) + ',' +
           format_number(r.report.inputs_echo.flight_distance_m) + '\n';
  }
  return out;
}

IntensityTrace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read trace file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw DomainError("trace CSV is empty: " + path.string());
  const auto header = split(line, ',');
  int ct = -1, ci = -1, cinc = -1;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string name = column_name(header[c]);
    if (name == "t") ct = static_cast<int>(c);
    if (name == "intensity") ci = static_cast<int>(c);
    if (name == "intensity_incoherent") cinc = static_cast<int>(c);
  }
  if (ct < 0 || ci < 0) throw DomainError("trace CSV needs 't' and 'intensity' columns");
  IntensityTrace trace;
  std::vector<double> inc;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size()) {
      throw DomainError("trace CSV line " + std::to_string(lineno) + ": wrong column count");
    }
    trace.times.push_back(parse_number(cells[static_cast<std::size_t>(ct)], lineno));
    trace.intensity.push_back(parse_number(cells[static_cast<std::size_t>(ci)], lineno));
    if (cinc >= 0) inc.push_back(parse_number(cells[static_cast<std::size_t>(cinc)], lineno));
  }
  if (cinc >= 0) trace.incoherent = std::move(inc);
  trace.validate();
  return trace;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string render_svg(const SvgPlot& plot) {
  constexpr double W = 800, H = 500, left = 80, right = 20, top = 40, bottom = 70;
  const double pw = W - left - right, ph = H - top - bottom;
  auto ty = [&](double y) { return plot.log_y ? std::log10(y) : y; };

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& s : plot.series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (plot.log_y && !(s.y[i] > 0.0))) {
        continue;
      }
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, ty(s.y[i]));
      ymax = std::max(ymax, ty(s.y[i]));
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (!(xmax > xmin)) xmin -= 0.5, xmax += 0.5;
  if (!plot.log_y) ymin = std::min(ymin, 0.0);
  if (!(ymax > ymin)) ymin -= 0.5, ymax += 0.5;
  const double pad = 0.05 * (ymax - ymin);
  ymax += pad;
  if (plot.log_y) ymin -= pad;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double y) { return top + (1.0 - (ty(y) - ymin) / (ymax - ymin)) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  o << "<metadata>scenario-hash: " << xml_escape(plot.hash) << "</metadata>\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
    << xml_escape(plot.title) << "</text>\n";
  o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int q = 0; q <= 4; ++q) {
    const double fx = xmin + (xmax - xmin) * q / 4.0;
    const double fy = ymin + (ymax - ymin) * q / 4.0;
    const double gx = px(fx), gy = top + (1.0 - q / 4.0) * ph;
    o << "<line x1=\"" << gx << "\" y1=\"" << top + ph << "\" x2=\"" << gx << "\" y2=\""
      << top + ph + 5 << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << gx << "\" y=\"" << top + ph + 20
      << "\" text-anchor=\"middle\" font-size=\"11\">" << nice(fx) << "</text>\n";
    o << "<line x1=\"" << left - 5 << "\" y1=\"" << gy << "\" x2=\"" << left << "\" y2=\"" << gy
      << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << left - 8 << "\" y=\"" << gy + 4
      << "\" text-anchor=\"end\" font-size=\"11\">" << nice(plot.log_y ? std::pow(10.0, fy) : fy)
      << "</text>\n";
  }
  o << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 30
    << "\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(plot.x_label) << "</text>\n";
  o << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
    << "transform=\"rotate(-90 18 " << top + ph / 2 << ")\">" << xml_escape(plot.y_label)
    << "</text>\n";

  double legend_y = top + 16;
  for (const auto& s : plot.series) {
    if (s.points) {
      o << "<g class=\"markers\" fill=\"" << s.color << "\">\n";
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(ty(s.y[i]))) continue;
        o << "<circle class=\"peak\" cx=\"" << px(s.x[i]) << "\" cy=\"" << py(s.y[i])
          << "\" r=\"4\"/>\n";
      }
      o << "</g>\n";
    } else {
      o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\" points=\"";
      for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(ty(s.y[i]))) continue;
        o << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
      }
      o << "\"/>\n";
    }
    if (!s.label.empty()) {
      o << "<text x=\"" << left + pw - 8 << "\" y=\"" << legend_y
        << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << s.color << "\">"
        << xml_escape(s.label) << "</text>\n";
      legend_y += 16;
    }
  }
  o << "<text x=\"" << W - 8 << "\" y=\"" << H - 8
    << "\" text-anchor=\"end\" font-size=\"10\" fill=\"#555\">scenario " << xml_escape(plot.hash)
    << "</text>\n";
  o << "</svg>\n";
  return o.str();
}

}  // namespace timeslit
