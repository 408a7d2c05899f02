#ifndef ASBENCH_REPORT_HPP
#define ASBENCH_REPORT_HPP

#include "asbench/analysis.hpp"
#include "asbench/selector.hpp"

#include <string>
#include <utility>
#include <vector>

namespace asbench {

struct SummaryRow {
    std::string portfolio;
    std::string feature_group;
    Protocol protocol = Protocol::Instance;
    std::size_t folds = 0;
    double median_model = 0.0;
    double median_dummy = 0.0;
    double delta = 0.0;         // median_model - median_dummy
    double paired_delta = 0.0;  // median over folds of (model - dummy)
};

/// One row per (portfolio, group, protocol), in order of first appearance.
std::vector<SummaryRow> summarize(const std::vector<FoldResult>& results);
std::string summary_to_csv(const std::vector<SummaryRow>& rows);

struct BoxSeries {
    std::string label;
    std::vector<double> values;
};

/// Boxes in groups of `per_group` share a background band; labels sit below.
std::string boxplot_svg(const std::string& title, const std::vector<BoxSeries>& boxes, std::size_t per_group,
                        const std::vector<std::string>& legend, double y_min, double y_max);

/// Correlation heatmap in cluster order, blue (-1) to red (+1).
std::string heatmap_svg(const std::string& title, const CorrelationMatrix& c);

/// Binned alignment curve: mean and median performance similarity.
std::string curve_svg(const std::string& title, const std::vector<CurvePoint>& curve);

}  // namespace asbench

#endif
