#include "asbench/report.hpp"
#include "asbench/csv.hpp"
#include "asbench/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <tuple>

namespace asbench {

namespace {

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string escape(const std::string& s)
{
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

const char* kPalette[] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860"};

std::string header(double w, double h)
{
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
           "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\" font-family=\"sans-serif\" font-size=\"11\">\n" +
           "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

std::string text(double x, double y, const std::string& s, const std::string& extra = {})
{
    return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\"" + extra + ">" + escape(s) + "</text>\n";
}

std::string line(double x1, double y1, double x2, double y2, const std::string& stroke, double width = 1.0)
{
    return "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) +
           "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\"/>\n";
}

// diverging blue-white-red
std::string diverging(double v)
{
    v = std::clamp(v, -1.0, 1.0);
    int r, g, b;
    if (v < 0) {
        const double t = -v;
        r = static_cast<int>(255 * (1 - t) + 59 * t);
        g = static_cast<int>(255 * (1 - t) + 76 * t);
        b = static_cast<int>(255 * (1 - t) + 192 * t);
    } else {
        r = static_cast<int>(255 * (1 - v) + 180 * v);
        g = static_cast<int>(255 * (1 - v) + 4 * v);
        b = static_cast<int>(255 * (1 - v) + 38 * v);
    }
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace

std::vector<SummaryRow> summarize(const std::vector<FoldResult>& results)
{
    std::vector<std::tuple<std::string, std::string, Protocol>> order;
    std::map<std::tuple<std::string, std::string, Protocol>, std::vector<const FoldResult*>> by_key;
    for (const auto& r : results) {
        const auto key = std::make_tuple(r.portfolio, r.feature_group, r.protocol);
        auto [it, fresh] = by_key.try_emplace(key);
        if (fresh) {
            order.push_back(key);
        }
        it->second.push_back(&r);
    }
    std::vector<SummaryRow> out;
    for (const auto& key : order) {
        const auto& folds = by_key[key];
        std::vector<double> model, dummy, diff;
        for (const auto* r : folds) {
            model.push_back(r->model_as);
            dummy.push_back(r->dummy_as);
            diff.push_back(r->model_as - r->dummy_as);
        }
        SummaryRow row;
        std::tie(row.portfolio, row.feature_group, row.protocol) = key;
        row.folds = folds.size();
        row.median_model = median(model);
        row.median_dummy = median(dummy);
        row.delta = row.median_model - row.median_dummy;
        row.paired_delta = median(diff);
        out.push_back(row);
    }
    return out;
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows)
{
    csv::Writer w({"portfolio", "feature_group", "protocol", "folds", "median_model_as", "median_dummy_as", "delta",
                   "median_paired_delta"});
    for (const auto& r : rows) {
        w.row({r.portfolio, r.feature_group, protocol_name(r.protocol), std::to_string(r.folds),
               format_double(r.median_model), format_double(r.median_dummy), format_double(r.delta),
               format_double(r.paired_delta)});
    }
    return w.str();
}

std::string boxplot_svg(const std::string& title, const std::vector<BoxSeries>& boxes, std::size_t per_group,
                        const std::vector<std::string>& legend, double y_min, double y_max)
{
    per_group = std::max<std::size_t>(per_group, 1);
    const double left = 60, top = 40, plot_h = 300, box_w = 18, gap = 8, group_gap = 24;
    const std::size_t groups = (boxes.size() + per_group - 1) / per_group;
    const double plot_w = static_cast<double>(groups) * (static_cast<double>(per_group) * (box_w + gap) + group_gap);
    const double width = left + plot_w + 20;
    const double height = top + plot_h + 120;
    if (!(y_max > y_min)) {
        y_max = y_min + 1.0;
    }
    auto ypos = [&](double v) { return top + plot_h * (1.0 - (std::clamp(v, y_min, y_max) - y_min) / (y_max - y_min)); };

    std::string s = header(width, height);
    s += text(left, 22, title, " font-size=\"14\"");
    for (int k = 0; k <= 4; ++k) {
        const double v = y_min + (y_max - y_min) * k / 4.0;
        s += line(left - 4, ypos(v), left + plot_w, ypos(v), "#dddddd");
        s += text(left - 8, ypos(v) + 4, num(v), " text-anchor=\"end\"");
    }
    for (std::size_t g = 0; g < groups; ++g) {
        const double gx = left + static_cast<double>(g) * (static_cast<double>(per_group) * (box_w + gap) + group_gap);
        if (g % 2 == 1) {
            s += "<rect x=\"" + num(gx - group_gap / 2) + "\" y=\"" + num(top) + "\" width=\"" +
                 num(static_cast<double>(per_group) * (box_w + gap) + group_gap) + "\" height=\"" + num(plot_h) +
                 "\" fill=\"#f4f4f4\"/>\n";
        }
        for (std::size_t k = 0; k < per_group && g * per_group + k < boxes.size(); ++k) {
            const auto& b = boxes[g * per_group + k];
            const double x = gx + static_cast<double>(k) * (box_w + gap);
            const std::string colour = kPalette[k % 6];
            if (!b.values.empty()) {
                const double q1 = quantile(b.values, 0.25), q2 = quantile(b.values, 0.5),
                             q3 = quantile(b.values, 0.75);
                const double lo = *std::min_element(b.values.begin(), b.values.end());
                const double hi = *std::max_element(b.values.begin(), b.values.end());
                const double cx = x + box_w / 2;
                s += line(cx, ypos(lo), cx, ypos(q1), "#333333");
                s += line(cx, ypos(q3), cx, ypos(hi), "#333333");
                s += "<rect x=\"" + num(x) + "\" y=\"" + num(ypos(q3)) + "\" width=\"" + num(box_w) +
                     "\" height=\"" + num(std::max(ypos(q1) - ypos(q3), 0.5)) + "\" fill=\"" + colour +
                     "\" stroke=\"#333333\"/>\n";
                s += line(x, ypos(q2), x + box_w, ypos(q2), "#111111", 2.0);
            }
            if (k == 0) {
                const double lx = gx + static_cast<double>(per_group) * (box_w + gap) / 2;
                const double ly = top + plot_h + 14;
                s += "<text x=\"" + num(lx) + "\" y=\"" + num(ly) + "\" text-anchor=\"end\" transform=\"rotate(-35 " +
                     num(lx) + " " + num(ly) + ")\">" + escape(b.label) + "</text>\n";
            }
        }
    }
    for (std::size_t k = 0; k < legend.size(); ++k) {
        const double lx = left + static_cast<double>(k) * 120;
        s += "<rect x=\"" + num(lx) + "\" y=\"" + num(height - 20) + "\" width=\"10\" height=\"10\" fill=\"" +
             kPalette[k % 6] + "\"/>\n";
        s += text(lx + 14, height - 11, legend[k]);
    }
    return s + "</svg>\n";
}

std::string heatmap_svg(const std::string& title, const CorrelationMatrix& c)
{
    const double cell = 10, left = 200, top = 40;
    const double n = static_cast<double>(c.order.size());
    std::string s = header(left + n * cell + 20, top + n * cell + 20);
    s += text(10, 22, title, " font-size=\"14\"");
    for (std::size_t a = 0; a < c.order.size(); ++a) {
        const int ia = c.order[a];
        const double y = top + static_cast<double>(a) * cell;
        s += text(left - 4, y + cell - 2, c.names[static_cast<std::size_t>(ia)],
                  " text-anchor=\"end\" font-size=\"8\"");
        for (std::size_t b = 0; b < c.order.size(); ++b) {
            const int ib = c.order[b];
            s += "<rect x=\"" + num(left + static_cast<double>(b) * cell) + "\" y=\"" + num(y) + "\" width=\"" +
                 num(cell) + "\" height=\"" + num(cell) + "\" fill=\"" + diverging(c.rho(ia, ib)) + "\"/>\n";
        }
    }
    return s + "</svg>\n";
}

std::string curve_svg(const std::string& title, const std::vector<CurvePoint>& curve)
{
    const double left = 60, top = 40, w = 420, h = 300;
    std::string s = header(left + w + 30, top + h + 60);
    s += text(left, 22, title, " font-size=\"14\"");
    auto xpos = [&](double v) { return left + w * std::clamp(v, 0.0, 1.0); };
    auto ypos = [&](double v) { return top + h * (1.0 - std::clamp(v, 0.0, 1.0)); };
    s += line(left, top + h, left + w, top + h, "#333333");
    s += line(left, top, left, top + h, "#333333");
    for (int k = 0; k <= 4; ++k) {
        const double v = k / 4.0;
        s += text(xpos(v), top + h + 16, num(v), " text-anchor=\"middle\"");
        s += text(left - 6, ypos(v) + 4, num(v), " text-anchor=\"end\"");
    }
    s += text(left + w / 2, top + h + 36, "feature cosine similarity", " text-anchor=\"middle\"");
    for (int series = 0; series < 2; ++series) {
        std::string pts;
        for (const auto& p : curve) {
            pts += num(xpos(p.feature_sim)) + "," + num(ypos(series == 0 ? p.mean : p.median)) + " ";
        }
        s += "<polyline fill=\"none\" stroke=\"" + std::string(kPalette[series]) + "\" stroke-width=\"1.5\" points=\"" +
             pts + "\"/>\n";
    }
    s += text(left + 10, top + 14, "mean", " fill=\"" + std::string(kPalette[0]) + "\"");
    s += text(left + 60, top + 14, "median", " fill=\"" + std::string(kPalette[1]) + "\"");
    return s + "</svg>\n";
}

}  // namespace asbench
