#include "output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace pqd::cli {

namespace {

std::ofstream open_out(const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

void close_out(std::ofstream& out, const std::string& path)
{
    out.flush();
    if (!out) throw IoError("write to '" + path + "' failed");
}

// two decimals are plenty for SVG coordinates
std::string px(double v)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
    return std::string(buf, r.ptr);
}

struct Frame {
    double x0 = 70, y0 = 20, w = 560, h = 380;
    double xlo, xhi, ylo, yhi;
    double X(double x) const { return x0 + (x - xlo) / (xhi - xlo) * w; }
    double Y(double y) const { return y0 + h - (y - ylo) / (yhi - ylo) * h; }
};

void axes(std::ostream& o, const Frame& f, const std::string& xlabel, const std::string& ylabel)
{
    o << "<rect x=\"" << px(f.x0) << "\" y=\"" << px(f.y0) << "\" width=\"" << px(f.w) << "\" height=\"" << px(f.h)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    o << "<text x=\"" << px(f.x0 + f.w / 2) << "\" y=\"" << px(f.y0 + f.h + 35) << "\" text-anchor=\"middle\">" << xlabel
      << "</text>\n";
    o << "<text x=\"15\" y=\"" << px(f.y0 + f.h / 2) << "\" transform=\"rotate(-90 15 " << px(f.y0 + f.h / 2)
      << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
    o << "<text x=\"" << px(f.x0) << "\" y=\"" << px(f.y0 + f.h + 15) << "\" font-size=\"10\">" << fmt(f.xlo) << "</text>\n";
    o << "<text x=\"" << px(f.x0 + f.w) << "\" y=\"" << px(f.y0 + f.h + 15) << "\" font-size=\"10\" text-anchor=\"end\">"
      << fmt(f.xhi) << "</text>\n";
    o << "<text x=\"" << px(f.x0 - 4) << "\" y=\"" << px(f.y0 + f.h) << "\" font-size=\"10\" text-anchor=\"end\">"
      << fmt(f.ylo) << "</text>\n";
    o << "<text x=\"" << px(f.x0 - 4) << "\" y=\"" << px(f.y0 + 10) << "\" font-size=\"10\" text-anchor=\"end\">"
      << fmt(f.yhi) << "</text>\n";
}

void range(double& lo, double& hi)
{
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
}

}  // namespace

std::string fmt(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

std::string fmt(long long v) { return std::to_string(v); }

void ensure_directory(const std::string& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory '" + dir + "'");
}

void write_csv(const std::string& path, const Table& t)
{
    auto out = open_out(path);
    for (const auto& c : t.comments) out << "# " << c << '\n';
    for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
    close_out(out, path);
}

void write_line_svg(const std::string& path, const std::string& xlabel, const std::string& ylabel,
                    const std::vector<Series>& series)
{
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    Frame f;
    f.xlo = f.ylo = INFINITY;
    f.xhi = f.yhi = -INFINITY;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i])) continue;
            f.xlo = std::min(f.xlo, s.x[i]);
            f.xhi = std::max(f.xhi, s.x[i]);
            f.ylo = std::min(f.ylo, s.y[i]);
            f.yhi = std::max(f.yhi, s.y[i]);
        }
    if (!std::isfinite(f.xlo)) f.xlo = f.xhi = f.ylo = f.yhi = 0.0;
    range(f.xlo, f.xhi);
    range(f.ylo, f.yhi);
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"660\" height=\"460\" font-family=\"sans-serif\" font-size=\"12\">\n";
    axes(o, f, xlabel, ylabel);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* col = colors[k % 8];
        o << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            if (std::isfinite(s.y[i])) o << px(f.X(s.x[i])) << ',' << px(f.Y(s.y[i])) << ' ';
        o << "\"/>\n";
        o << "<text x=\"" << px(f.x0 + f.w - 5) << "\" y=\"" << px(f.y0 + 15 + 14 * static_cast<double>(k))
          << "\" text-anchor=\"end\" fill=\"" << col << "\">" << s.label << "</text>\n";
    }
    o << "</svg>\n";
    auto out = open_out(path);
    out << o.str();
    close_out(out, path);
}

void write_heatmap_svg(const std::string& path, const std::string& xlabel, const std::string& ylabel, const Heatmap& h)
{
    Frame f;
    f.xlo = h.x.front();
    f.xhi = h.x.back();
    f.ylo = h.y.front();
    f.yhi = h.y.back();
    range(f.xlo, f.xhi);
    range(f.ylo, f.yhi);
    double zlo = INFINITY, zhi = -INFINITY;
    for (double z : h.z)
        if (std::isfinite(z)) {
            zlo = std::min(zlo, z);
            zhi = std::max(zhi, z);
        }
    range(zlo, zhi);
    const double cw = f.w / static_cast<double>(h.x.size()), ch = f.h / static_cast<double>(h.y.size());
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"660\" height=\"460\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<g shape-rendering=\"crispEdges\">\n";
    for (std::size_t i = 0; i < h.y.size(); ++i)
        for (std::size_t j = 0; j < h.x.size(); ++j) {
            const double z = h.z[i * h.x.size() + j];
            const double u = std::isfinite(z) ? (z - zlo) / (zhi - zlo) : 0.0;
            const int r = static_cast<int>(std::lround(255 * u)), b = 255 - r;
            o << "<rect x=\"" << px(f.x0 + cw * static_cast<double>(j)) << "\" y=\""
              << px(f.y0 + f.h - ch * static_cast<double>(i + 1)) << "\" width=\"" << px(cw + 0.05) << "\" height=\""
              << px(ch + 0.05) << "\" fill=\"rgb(" << r << ",40," << b << ")\"/>\n";
        }
    o << "</g>\n";
    if (h.diagonal_guides) {
        const double a = std::max(std::min(f.xhi, f.yhi), 0.0), lo = std::max(f.xlo, f.ylo);
        o << "<line x1=\"" << px(f.X(lo)) << "\" y1=\"" << px(f.Y(lo)) << "\" x2=\"" << px(f.X(a)) << "\" y2=\""
          << px(f.Y(a)) << "\" stroke=\"white\" stroke-dasharray=\"4 3\"/>\n";
        o << "<line x1=\"" << px(f.X(-lo)) << "\" y1=\"" << px(f.Y(lo)) << "\" x2=\"" << px(f.X(-a)) << "\" y2=\""
          << px(f.Y(a)) << "\" stroke=\"white\" stroke-dasharray=\"4 3\"/>\n";
    }
    axes(o, f, xlabel, ylabel);
    o << "<text x=\"" << px(f.x0 + f.w) << "\" y=\"14\" text-anchor=\"end\" font-size=\"10\">blue " << fmt(zlo)
      << " .. red " << fmt(zhi) << "</text>\n";
    o << "</svg>\n";
    auto out = open_out(path);
    out << o.str();
    close_out(out, path);
}

void write_sidecar(const std::string& path, const std::string& command, const Json& resolved, double wall_time)
{
    Json s = Json::object();
    s["command"] = command;
    s["resolved_config"] = resolved;
    s["version"] = PQD_VERSION;
    s["wall_time"] = wall_time;
    auto out = open_out(path);
    out << s.dump(2) << '\n';
    close_out(out, path);
}

}  // namespace pqd::cli
