#include "epsweep/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "epsweep/errors.hpp"

namespace epsweep {

namespace {

constexpr double kPanelW = 420, kPanelH = 300;
constexpr double kLeft = 62, kRight = 14, kTop = 28, kBottom = 44;
// |b|² blows up next to an EP; keep the interesting range visible.
constexpr double kMixingCap = 3.0;

constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                   "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string tick_label(double x, double step) {
    const int digits = std::max(0, static_cast<int>(std::ceil(-std::log10(step) - 1e-9)));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, std::abs(x) < step * 1e-6 ? 0.0 : x);
    return buf;
}

double nice_step(double range) {
    const double raw = range / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0})
        if (m * mag >= raw) return m * mag;
    return 10.0 * mag;
}

using Series = std::vector<std::optional<double>>;

struct Curve {
    Series y;
    const char* color;
    bool dashed;
};

std::vector<Curve> curves_for(const Panel& p) {
    const auto& r = *p.result;
    const std::size_t n = r.size();
    std::vector<Curve> out;
    auto take = [&](auto f) {
        Series s;
        s.reserve(r.points.size());
        for (const auto& pt : r.points) s.push_back(f(pt));
        return s;
    };
    for (std::size_t i = 0; i < n; ++i) {
        const char* color = kColors[i % std::size(kColors)];
        switch (p.kind) {
        case PlotKind::Energies:
            out.push_back({take([i](const SweepPoint& pt) -> std::optional<double> { return pt.unperturbed[i]; }),
                           "#555555", true});
            out.push_back({take([i](const SweepPoint& pt) -> std::optional<double> {
                               return pt.branches[i].energy();
                           }),
                           color, false});
            break;
        case PlotKind::Widths:
            out.push_back({take([i](const SweepPoint& pt) -> std::optional<double> {
                               return pt.branches[i].half_width();
                           }),
                           color, false});
            break;
        case PlotKind::Mixing:
            out.push_back({take([&p, i](const SweepPoint& pt) -> std::optional<double> {
                               const auto m = pt.branches[p.state].mixing();
                               if (!m) return std::nullopt;
                               return std::norm((*m)[i]);
                           }),
                           color, false});
            break;
        }
    }
    return out;
}

const char* y_label(PlotKind k) {
    switch (k) {
    case PlotKind::Energies: return "E";
    case PlotKind::Widths: return "&#915;/2";
    case PlotKind::Mixing: return "|b|&#178;";
    }
    return "";
}

void draw_panel(std::ostream& os, const Panel& p, double ox, double oy, std::size_t id) {
    const auto& r = *p.result;
    const auto xs = r.grid();
    const auto curves = curves_for(p);

    double ylo = INFINITY, yhi = -INFINITY;
    for (const auto& c : curves)
        for (const auto& v : c.y)
            if (v && std::isfinite(*v)) ylo = std::min(ylo, *v), yhi = std::max(yhi, *v);
    if (p.kind == PlotKind::Mixing) ylo = 0.0, yhi = std::clamp(yhi, 1.0, kMixingCap);
    if (!(yhi > ylo)) ylo -= 0.5, yhi += 0.5;
    const double pad = 0.04 * (yhi - ylo);
    if (p.kind != PlotKind::Mixing) ylo -= pad;
    yhi += pad;
    const double xlo = xs.front(), xhi = xs.back();

    const double pw = kPanelW - kLeft - kRight, ph = kPanelH - kTop - kBottom;
    const double x0 = ox + kLeft, y0 = oy + kTop;
    auto X = [&](double x) { return x0 + (x - xlo) / (xhi - xlo) * pw; };
    auto Y = [&](double y) { return y0 + (yhi - y) / (yhi - ylo) * ph; };

    os << "<clipPath id=\"c" << id << "\"><rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(pw)
       << "\" height=\"" << num(ph) << "\"/></clipPath>\n";
    os << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    const double xs_step = nice_step(xhi - xlo), ys_step = nice_step(yhi - ylo);
    for (double t = std::ceil(xlo / xs_step) * xs_step; t <= xhi + 1e-9 * xs_step; t += xs_step) {
        os << "<line x1=\"" << num(X(t)) << "\" y1=\"" << num(y0 + ph) << "\" x2=\"" << num(X(t)) << "\" y2=\""
           << num(y0 + ph - 5) << "\" stroke=\"black\"/>"
           << "<text x=\"" << num(X(t)) << "\" y=\"" << num(y0 + ph + 16)
           << "\" text-anchor=\"middle\" font-size=\"11\">" << tick_label(t, xs_step) << "</text>\n";
    }
    for (double t = std::ceil(ylo / ys_step) * ys_step; t <= yhi + 1e-9 * ys_step; t += ys_step) {
        os << "<line x1=\"" << num(x0) << "\" y1=\"" << num(Y(t)) << "\" x2=\"" << num(x0 + 5) << "\" y2=\""
           << num(Y(t)) << "\" stroke=\"black\"/>"
           << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(Y(t) + 4)
           << "\" text-anchor=\"end\" font-size=\"11\">" << tick_label(t, ys_step) << "</text>\n";
    }
    os << "<text x=\"" << num(x0 + pw / 2) << "\" y=\"" << num(oy + kPanelH - 8)
       << "\" text-anchor=\"middle\" font-size=\"13\" font-style=\"italic\">a</text>\n";
    os << "<text x=\"" << num(ox + 16) << "\" y=\"" << num(y0 + ph / 2) << "\" text-anchor=\"middle\" font-size=\"13\""
       << " transform=\"rotate(-90 " << num(ox + 16) << ' ' << num(y0 + ph / 2) << ")\">" << y_label(p.kind)
       << "</text>\n";
    if (!p.title.empty())
        os << "<text x=\"" << num(x0 + pw / 2) << "\" y=\"" << num(oy + 18)
           << "\" text-anchor=\"middle\" font-size=\"13\">" << p.title << "</text>\n";

    os << "<g clip-path=\"url(#c" << id << ")\" fill=\"none\">\n";
    for (const auto& c : curves) {
        std::string pts;
        auto flush = [&] {
            if (!pts.empty())
                os << "<polyline stroke=\"" << c.color << "\" stroke-width=\"" << (c.dashed ? "1" : "1.6") << "\""
                   << (c.dashed ? " stroke-dasharray=\"5,4\"" : "") << " points=\"" << pts << "\"/>\n";
            pts.clear();
        };
        for (std::size_t k = 0; k < xs.size(); ++k) {
            const auto& v = c.y[k];
            if (!v || !std::isfinite(*v)) {
                flush();
                continue;
            }
            // Keep the polyline inside a sane range so clipping handles the rest.
            const double y = std::clamp(*v, ylo - 10 * (yhi - ylo), yhi + 10 * (yhi - ylo));
            if (!pts.empty()) pts.push_back(' ');
            pts += num(X(xs[k])) + "," + num(Y(y));
        }
        flush();
    }
    os << "</g>\n";
}

void check(const Panel& p) {
    if (!p.result || p.result->points.empty()) throw ValidationError("cannot plot an empty sweep result");
    if (p.kind == PlotKind::Mixing && p.state >= p.result->size())
        throw ValidationError("mixing panel state out of range");
}

std::filesystem::path write_file(const std::string& body, const std::filesystem::path& dest) {
    if (dest.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(dest.parent_path(), ec);
        if (ec) throw IoError("cannot create '" + dest.parent_path().string() + "': " + ec.message());
    }
    std::ofstream f(dest, std::ios::binary);
    if (!f) throw IoError("cannot write '" + dest.string() + "'");
    f << body;
    if (!f) throw IoError("write failed for '" + dest.string() + "'");
    return dest;
}

} // namespace

std::string render_svg(const std::vector<Panel>& panels, std::size_t columns) {
    if (panels.empty()) throw ValidationError("no panels to plot");
    for (const auto& p : panels) check(p);
    columns = std::clamp<std::size_t>(columns, 1, panels.size());
    const std::size_t rows = (panels.size() + columns - 1) / columns;

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(columns * kPanelW) << "\" height=\""
       << num(rows * kPanelH) << "\" font-family=\"sans-serif\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t k = 0; k < panels.size(); ++k)
        draw_panel(os, panels[k], static_cast<double>(k % columns) * kPanelW,
                   static_cast<double>(k / columns) * kPanelH, k);
    os << "</svg>\n";
    return os.str();
}

std::filesystem::path emit_plot(const SweepResult& result, PlotKind kind, const std::filesystem::path& dest,
                                const std::string& title) {
    std::vector<Panel> panels;
    if (kind == PlotKind::Mixing) {
        for (std::size_t i = 0; i < std::max<std::size_t>(result.size(), 1); ++i)
            panels.push_back({&result, kind, title + (title.empty() ? "" : " ") + "state " + std::to_string(i + 1), i});
        const std::string body = render_svg(panels, result.size() <= 4 ? result.size() : 5);
        return write_file(body, dest);
    }
    panels.push_back({&result, kind, title, 0});
    return write_file(render_svg(panels, 1), dest);
}

std::filesystem::path emit_figure(const std::vector<Panel>& panels, std::size_t columns,
                                  const std::filesystem::path& dest) {
    return write_file(render_svg(panels, columns), dest);
}

} // namespace epsweep
