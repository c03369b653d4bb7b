#include "gaitnorm/figures.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace gaitnorm {

using nlohmann::json;

namespace {

constexpr std::string_view kNormalColor = "#1f77b4";
constexpr std::string_view kAbnormalColor = "#d62728";
constexpr std::string_view kUnknownColor = "#9e9e9e";

std::string escape(std::string_view s) {
    std::string out;
    for (const char c : s) {
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

std::string svg_open(double width, double height) {
    return fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
        "viewBox=\"0 0 {:.0f} {:.0f}\" font-family=\"sans-serif\">\n"
        "<rect x=\"0\" y=\"0\" width=\"{:.0f}\" height=\"{:.0f}\" fill=\"#ffffff\"/>\n",
        width, height, width, height, width, height);
}

struct Box {
    double x, y, w, h;
};

struct Scale {
    Box box;
    double y_lo, y_hi;

    double px(double percent) const { return box.x + percent / 100.0 * box.w; }
    double py(double deg) const { return box.y + box.h - (deg - y_lo) / (y_hi - y_lo) * box.h; }
};

struct PanelCounts {
    int mean_points = 0;
    int band_points = 0;
    int normal = 0;
    int abnormal = 0;
    std::vector<int> abnormal_indices;
};

// Axis range covering the band and the overlay, padded and snapped to 10°.
std::pair<double, double> y_range(const JointNorm& norm, double k, const BandOverlay* overlay) {
    double lo = 180.0, hi = 0.0;
    for (std::size_t g = 0; g < norm.mean.size(); ++g) {
        lo = std::min(lo, norm.mean[g] - k * norm.std[g]);
        hi = std::max(hi, norm.mean[g] + k * norm.std[g]);
    }
    if (overlay) {
        for (const double a : overlay->angle) {
            lo = std::min(lo, a);
            hi = std::max(hi, a);
        }
    }
    lo = std::max(0.0, std::floor((lo - 2.0) / 10.0) * 10.0);
    hi = std::min(180.0, std::ceil((hi + 2.0) / 10.0) * 10.0);
    if (hi <= lo) hi = lo + 10.0;
    return {lo, hi};
}

void draw_axes(std::string& svg, const Scale& s, bool labels) {
    const auto& b = s.box;
    svg += fmt::format(
        "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" "
        "stroke=\"#444444\" stroke-width=\"1\"/>\n",
        b.x, b.y, b.w, b.h);
    if (!labels) return;
    for (int p = 0; p <= 100; p += 20) {
        svg += fmt::format(
            "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"10\" text-anchor=\"middle\">{}</text>\n",
            s.px(p), b.y + b.h + 14.0, p);
    }
    const double step = (s.y_hi - s.y_lo) > 60.0 ? 20.0 : 10.0;
    for (double d = s.y_lo; d <= s.y_hi + 1e-9; d += step) {
        svg += fmt::format(
            "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"10\" text-anchor=\"end\">{:.0f}</text>\n",
            b.x - 4.0, s.py(d) + 3.0, d);
    }
    svg += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"middle\">Gait cycle (%)</text>\n",
        b.x + b.w / 2.0, b.y + b.h + 30.0);
    svg += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"middle\" "
        "transform=\"rotate(-90 {:.2f} {:.2f})\">Angle (deg)</text>\n",
        b.x - 32.0, b.y + b.h / 2.0, b.x - 32.0, b.y + b.h / 2.0);
}

PanelCounts draw_band(std::string& svg, const JointNorm& norm, double k, const Box& box,
                      const BandOverlay* overlay, double point_radius, bool labels) {
    const auto [lo, hi] = y_range(norm, k, overlay);
    const Scale s{box, lo, hi};
    const int n = static_cast<int>(norm.mean.size());
    PanelCounts counts;

    std::string band;
    for (int g = 0; g < n; ++g) {
        const auto i = static_cast<std::size_t>(g);
        band += fmt::format("{:.2f},{:.2f} ", s.px(grid_phase(g, n)),
                            s.py(std::min(180.0, norm.mean[i] + k * norm.std[i])));
        ++counts.band_points;
    }
    for (int g = n - 1; g >= 0; --g) {
        const auto i = static_cast<std::size_t>(g);
        band += fmt::format("{:.2f},{:.2f} ", s.px(grid_phase(g, n)),
                            s.py(std::max(0.0, norm.mean[i] - k * norm.std[i])));
        ++counts.band_points;
    }
    if (!band.empty()) band.pop_back();
    svg += fmt::format("<polygon class=\"band\" points=\"{}\" fill=\"#aec7e8\" fill-opacity=\"0.5\" "
                       "stroke=\"none\"/>\n",
                       band);

    std::string line;
    for (int g = 0; g < n; ++g) {
        line += fmt::format("{:.2f},{:.2f} ", s.px(grid_phase(g, n)),
                            s.py(norm.mean[static_cast<std::size_t>(g)]));
        ++counts.mean_points;
    }
    if (!line.empty()) line.pop_back();
    svg += fmt::format("<polyline class=\"mean-line\" points=\"{}\" fill=\"none\" stroke=\"#08306b\" "
                       "stroke-width=\"1.5\"/>\n",
                       line);

    if (overlay) {
        const int m = static_cast<int>(overlay->angle.size());
        for (int g = 0; g < m; ++g) {
            const auto i = static_cast<std::size_t>(g);
            const bool abnormal = i < overlay->flags.size() && overlay->flags[i];
            svg += fmt::format("<circle class=\"{}\" data-g=\"{}\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"{:.1f}\" "
                               "fill=\"{}\"/>\n",
                               abnormal ? "pt-abnormal" : "pt-normal", g, s.px(grid_phase(g, m)),
                               s.py(overlay->angle[i]), point_radius,
                               abnormal ? kAbnormalColor : kNormalColor);
            if (abnormal) {
                ++counts.abnormal;
                counts.abnormal_indices.push_back(g);
            } else {
                ++counts.normal;
            }
        }
    }
    draw_axes(svg, s, labels);
    return counts;
}

}  // namespace

FigureDoc render_band_plot(const NormativeModel& model, JointName joint,
                           const std::optional<BandOverlay>& overlay, const DetectionConfig& cfg,
                           const std::string& title) {
    cfg.validate();
    const auto it = model.joints.find(joint);
    if (it == model.joints.end()) {
        throw ValidationError(fmt::format("joint {} absent from model", to_string(joint)));
    }
    if (overlay && overlay->angle.size() != it->second.mean.size()) {
        throw ValidationError("overlay length differs from the model grid");
    }
    constexpr double width = 640.0, height = 400.0;
    FigureDoc doc;
    doc.svg = svg_open(width, height);
    const std::string heading =
        title.empty() ? fmt::format("{} (mean ± {:g} SD)", to_string(joint), cfg.k) : title;
    doc.svg += fmt::format("<text x=\"{:.2f}\" y=\"20\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
                           width / 2.0, escape(heading));
    const PanelCounts counts = draw_band(doc.svg, it->second, cfg.k, {60.0, 35.0, 560.0, 315.0},
                                         overlay ? &*overlay : nullptr, 2.5, true);
    if (overlay) {
        doc.svg += fmt::format(
            "<circle cx=\"470\" cy=\"52\" r=\"3\" fill=\"{}\"/><text x=\"478\" y=\"55\" font-size=\"10\">"
            "normal</text>\n<circle cx=\"530\" cy=\"52\" r=\"3\" fill=\"{}\"/><text x=\"538\" y=\"55\" "
            "font-size=\"10\">abnormal</text>\n",
            kNormalColor, kAbnormalColor);
    }
    doc.svg += "</svg>\n";

    const std::string name(to_string(joint));
    json series = json::array();
    series.push_back({{"joint", name}, {"kind", "mean"}, {"points", counts.mean_points}});
    series.push_back({{"joint", name}, {"kind", "band"}, {"points", counts.band_points}});
    if (overlay) {
        series.push_back({{"joint", name}, {"kind", "normal"}, {"points", counts.normal}});
        series.push_back({{"joint", name}, {"kind", "abnormal"}, {"points", counts.abnormal}});
    }
    doc.sidecar = {{"figure", "band"},
                   {"joint", name},
                   {"k", cfg.k},
                   {"series", std::move(series)},
                   {"abnormal_indices", counts.abnormal_indices}};
    return doc;
}

FigureDoc render_multi_joint(const NormativeModel& model, const DeviationReport& report,
                             const std::string& title) {
    report.config.validate();
    constexpr int cols = 5;
    constexpr double panel_w = 220.0, panel_h = 170.0, top = 40.0, left = 40.0;
    const double width = left + cols * panel_w + 10.0;
    const double height = top + 2 * panel_h + 20.0;

    FigureDoc doc;
    doc.svg = svg_open(width, height);
    const std::string heading =
        title.empty() ? fmt::format("Multi-joint deviation: {} {}", report.video_id, report.cycle_id) : title;
    doc.svg += fmt::format("<text x=\"{:.2f}\" y=\"22\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
                           width / 2.0, escape(heading));

    json panels = json::array();
    int abnormal_total = 0;
    int rendered = 0;
    for (std::size_t p = 0; p < kJointDisplayOrder.size(); ++p) {
        const JointName joint = kJointDisplayOrder[p];
        const std::string name(to_string(joint));
        const double x = left + static_cast<double>(p % cols) * panel_w;
        const double y = top + static_cast<double>(p / cols) * panel_h;
        const Box box{x + 20.0, y + 22.0, panel_w - 40.0, panel_h - 52.0};
        doc.svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
                               box.x + box.w / 2.0, y + 14.0, name);

        const auto mit = model.joints.find(joint);
        const auto rit = report.joints.find(joint);
        if (mit == model.joints.end() || rit == report.joints.end() || rit->second.angle.empty()) {
            doc.svg += fmt::format(
                "<g class=\"panel-placeholder\" data-joint=\"{}\"><rect x=\"{:.2f}\" y=\"{:.2f}\" "
                "width=\"{:.2f}\" height=\"{:.2f}\" fill=\"#f0f0f0\" stroke=\"#bbbbbb\"/>"
                "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"middle\" fill=\"#666666\">"
                "insufficient data</text></g>\n",
                name, box.x, box.y, box.w, box.h, box.x + box.w / 2.0, box.y + box.h / 2.0);
            panels.push_back({{"joint", name}, {"status", "insufficient_data"}});
            continue;
        }
        const BandOverlay overlay{rit->second.angle, rit->second.flag};
        doc.svg += fmt::format("<g class=\"panel\" data-joint=\"{}\">\n", name);
        const PanelCounts counts = draw_band(doc.svg, mit->second, report.config.k, box, &overlay, 1.5, false);
        doc.svg += "</g>\n";
        ++rendered;
        abnormal_total += counts.abnormal;
        panels.push_back({{"joint", name},
                          {"status", "rendered"},
                          {"mean_points", counts.mean_points},
                          {"normal", counts.normal},
                          {"abnormal", counts.abnormal},
                          {"abnormal_indices", counts.abnormal_indices}});
    }
    doc.svg += "</svg>\n";
    doc.sidecar = {{"figure", "multi_joint"},
                   {"video_id", report.video_id},
                   {"cycle_id", report.cycle_id},
                   {"rendered_panels", rendered},
                   {"placeholder_panels", static_cast<int>(kJointDisplayOrder.size()) - rendered},
                   {"abnormal_total", abnormal_total},
                   {"panels", std::move(panels)}};
    return doc;
}

FigureDoc render_heatmap(const SeverityMatrix& matrix, const std::string& title) {
    if (matrix.grid_points <= 0) throw ValidationError("render_heatmap: empty matrix");
    const int cols = matrix.grid_points;
    const auto rows = static_cast<int>(matrix.row_count());
    constexpr double cell_w = 6.0, cell_h = 24.0, left = 110.0, top = 40.0;
    const double width = left + cols * cell_w + 20.0;
    const double height = top + rows * cell_h + 40.0;

    FigureDoc doc;
    doc.svg = svg_open(width, height);
    doc.svg += fmt::format("<text x=\"{:.2f}\" y=\"22\" font-size=\"14\" text-anchor=\"middle\">{}</text>\n",
                           width / 2.0, escape(title.empty() ? "Deviation severity" : title));

    double max_severity = 0.0;
    for (const auto& row : matrix.rows) {
        if (row) max_severity = std::max(max_severity, *std::max_element(row->begin(), row->end()));
    }
    int cells = 0, missing = 0, at_max = 0, valid_rows = 0;
    json row_names = json::array();
    for (int r = 0; r < rows; ++r) {
        const JointName joint = kJointDisplayOrder[static_cast<std::size_t>(r)];
        const auto& row = matrix.rows[index_of(joint)];
        const double y = top + r * cell_h;
        row_names.push_back(to_string(joint));
        doc.svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
                               left - 6.0, y + cell_h / 2.0 + 4.0, to_string(joint));
        if (row) ++valid_rows;
        for (int c = 0; c < cols; ++c) {
            const double x = left + c * cell_w;
            if (!row) {
                doc.svg += fmt::format("<rect class=\"cell-missing\" x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" "
                                       "height=\"{:.2f}\" fill=\"#d9d9d9\"/>\n",
                                       x, y, cell_w, cell_h);
                ++missing;
                continue;
            }
            const double s = std::clamp((*row)[static_cast<std::size_t>(c)], 0.0, 1.0);
            // White to near-black red, linear in severity.
            const int red = static_cast<int>(std::lround(255.0 - s * (255.0 - 64.0)));
            const int other = static_cast<int>(std::lround(255.0 - s * 255.0));
            doc.svg += fmt::format("<rect class=\"cell\" data-r=\"{}\" data-c=\"{}\" x=\"{:.2f}\" y=\"{:.2f}\" "
                                   "width=\"{:.2f}\" height=\"{:.2f}\" fill=\"#{:02x}{:02x}{:02x}\"/>\n",
                                   r, c, x, y, cell_w, cell_h, red, other, other);
            ++cells;
            if (s == max_severity) ++at_max;
        }
    }
    for (int p = 0; p <= 100; p += 20) {
        doc.svg += fmt::format(
            "<text x=\"{:.2f}\" y=\"{:.2f}\" font-size=\"10\" text-anchor=\"middle\">{}</text>\n",
            left + (p / 100.0) * (cols - 1) * cell_w + cell_w / 2.0, top + rows * cell_h + 14.0, p);
    }
    doc.svg += "</svg>\n";
    doc.sidecar = {{"figure", "heatmap"},
                   {"rows", rows},
                   {"columns", cols},
                   {"row_joints", std::move(row_names)},
                   {"valid_rows", valid_rows},
                   {"cells", cells},
                   {"missing_cells", missing},
                   {"max_severity", max_severity},
                   {"cells_at_max", at_max}};
    return doc;
}

std::string_view status_color(JointStatus status) {
    switch (status) {
        case JointStatus::normal: return kNormalColor;
        case JointStatus::abnormal: return kAbnormalColor;
        case JointStatus::unknown: return kUnknownColor;
    }
    return kUnknownColor;
}

}  // namespace gaitnorm
