#include "sbnoise/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace sbnoise::io {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_double(const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') throw ConfigError("not a number: '" + text + "'");
    return v;
}

void write_csv(std::ostream& os, const CsvTable& table) {
    for (std::size_t i = 0; i < table.header.size(); ++i) os << (i ? "," : "") << table.header[i];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
        os << '\n';
    }
    for (const auto& c : table.comments) os << "# " << c << '\n';
}

std::string to_string(const CsvTable& table) {
    std::ostringstream os;
    write_csv(os, table);
    return os.str();
}

CsvTable read_csv(std::istream& is) {
    CsvTable table;
    std::string line;
    bool have_header = false;
    while (std::getline(is, line)) {
        if (line.rfind("# ", 0) == 0) {
            table.comments.push_back(line.substr(2));
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!have_header) {
            table.header = cells;
            have_header = true;
            continue;
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(parse_double(c));
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << contents;
    out.flush();
    if (!out) throw IoError("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> trajectory_header() {
    return {"t",        "re_rho00", "im_rho00",     "re_rho01",    "im_rho01", "re_rho10",
            "im_rho10", "re_rho11", "im_rho11", "trace_defect", "herm_defect", "purity"};
}

CsvTable trajectory_table(const Trajectory& traj) {
    CsvTable table;
    table.header = trajectory_header();
    for (std::size_t i = 0; i < traj.size(); ++i) {
        const auto& r = traj.states[i];
        const auto& d = traj.diagnostics[i];
        table.rows.push_back({traj.times[i], r.rho00.real(), r.rho00.imag(), r.rho01.real(), r.rho01.imag(),
                              r.rho10.real(), r.rho10.imag(), r.rho11.real(), r.rho11.imag(), d.trace_defect,
                              d.hermiticity_defect, d.purity});
    }
    return table;
}

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 90.0;
constexpr double kRight = 190.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string tick_label(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

}  // namespace

std::string render_line_chart(const ChartLabels& labels, const std::vector<Series>& series) {
    double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x_lo = std::min(x_lo, s.x[i]);
            x_hi = std::max(x_hi, s.x[i]);
            y_lo = std::min(y_lo, s.y[i]);
            y_hi = std::max(y_hi, s.y[i]);
        }
    }
    if (!(x_hi >= x_lo)) x_lo = 0.0, x_hi = 1.0;
    if (!(y_hi >= y_lo)) y_lo = 0.0, y_hi = 1.0;
    if (x_hi == x_lo) x_hi = x_lo + 1.0;
    if (y_hi == y_lo) y_lo -= 0.5, y_hi += 0.5;
    const double pad = 0.05 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
    auto py = [&](double y) { return kTop + (y_hi - y) / (y_hi - y_lo) * plot_h; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
       << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n"
       << "<text x=\"" << num(kWidth / 2) << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       << "font-size=\"16\">" << escape(labels.title) << "</text>\n";

    // Frame and ticks.
    os << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(plot_w) << "\" height=\""
       << num(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
    constexpr int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double fx = x_lo + (x_hi - x_lo) * i / ticks;
        const double fy = y_lo + (y_hi - y_lo) * i / ticks;
        os << "<line x1=\"" << num(px(fx)) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\"" << num(px(fx))
           << "\" y2=\"" << num(kTop + plot_h + 5) << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << num(px(fx)) << "\" y=\"" << num(kTop + plot_h + 20)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << tick_label(fx)
           << "</text>\n"
           << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(py(fy)) << "\" x2=\"" << num(kLeft) << "\" y2=\""
           << num(py(fy)) << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py(fy) + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << tick_label(fy) << "</text>\n";
    }
    if (y_lo < 0.0 && y_hi > 0.0) {
        os << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(py(0.0)) << "\" x2=\"" << num(kLeft + plot_w)
           << "\" y2=\"" << num(py(0.0)) << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
    }
    os << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 15)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << escape(labels.x_label)
       << "</text>\n"
       << "<text x=\"20\" y=\"" << num(kTop + plot_h / 2) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       << "font-size=\"13\" transform=\"rotate(-90 20 " << num(kTop + plot_h / 2) << ")\">"
       << escape(labels.y_label) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* colour = kPalette[k % std::size(kPalette)];
        os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            os << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
        }
        os << "\"/>\n";
        const double ly = kTop + 15.0 + 20.0 * static_cast<double>(k);
        os << "<line x1=\"" << num(kWidth - kRight + 15) << "\" y1=\"" << num(ly) << "\" x2=\""
           << num(kWidth - kRight + 40) << "\" y2=\"" << num(ly) << "\" stroke=\"" << colour
           << "\" stroke-width=\"2\"/>\n"
           << "<text x=\"" << num(kWidth - kRight + 46) << "\" y=\"" << num(ly + 4)
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(s.name) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace sbnoise::io
