#include "ccm/app/plot.hpp"

#include "ccm/app/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <locale>
#include <sstream>

namespace ccm::app {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 220.0;  // room for the legend
constexpr double kTop = 30.0;
constexpr double kBottom = 60.0;

constexpr std::array<const char*, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                              "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string curve_label(const ConvergenceCell& cell) {
    return std::string(to_string(cell.direction)) + " E=" + std::to_string(cell.E) +
           " tau=" + std::to_string(cell.tau);
}

}  // namespace

std::string render_convergence_svg(std::span<const ConvergenceCell> cells) {
    std::size_t min_l = SIZE_MAX;
    std::size_t max_l = 0;
    double lo = 0.0;
    double hi = 1.0;
    for (const auto& cell : cells) {
        for (const auto& l : cell.levels) {
            min_l = std::min(min_l, l.L);
            max_l = std::max(max_l, l.L);
            lo = std::min(lo, l.mean - l.sd);
            hi = std::max(hi, l.mean + l.sd);
        }
    }
    if (min_l == max_l) {
        min_l = min_l > 0 ? min_l - 1 : 0;
        ++max_l;
    }
    lo = std::max(-1.0, std::floor(lo * 10.0) / 10.0);
    hi = std::min(1.0, std::ceil(hi * 10.0) / 10.0);

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto sx = [&](double L) {
        return kLeft + (L - static_cast<double>(min_l)) / static_cast<double>(max_l - min_l) * plot_w;
    };
    auto sy = [&](double rho) { return kTop + (hi - rho) / (hi - lo) * plot_h; };

    std::ostringstream svg;
    svg.imbue(std::locale::classic());
    svg.precision(6);
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\""
        << " font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Axes and ticks.
    svg << "<g stroke=\"black\" fill=\"none\">\n"
        << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
        << "\" y2=\"" << kTop + plot_h << "\"/>\n"
        << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
        << kTop + plot_h << "\"/>\n</g>\n";
    for (int i = 0; i <= 4; ++i) {
        const double rho = lo + (hi - lo) * i / 4.0;
        svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << sy(rho) + 4
            << "\" text-anchor=\"end\">" << std::round(rho * 100.0) / 100.0 << "</text>\n";
    }
    std::vector<std::size_t> ticks;
    for (const auto& cell : cells) {
        for (const auto& l : cell.levels) {
            ticks.push_back(l.L);
        }
    }
    std::sort(ticks.begin(), ticks.end());
    ticks.erase(std::unique(ticks.begin(), ticks.end()), ticks.end());
    for (const auto L : ticks) {
        svg << "<text x=\"" << sx(static_cast<double>(L)) << "\" y=\"" << kTop + plot_h + 18
            << "\" text-anchor=\"middle\">" << L << "</text>\n";
    }
    svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 15
        << "\" text-anchor=\"middle\">library size L</text>\n"
        << "<text x=\"18\" y=\"" << kTop + plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << kTop + plot_h / 2 << ")\">cross-map skill rho</text>\n";

    for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto& cell = cells[c];
        const char* color = kPalette[c % kPalette.size()];
        svg << "<g class=\"curve\" data-label=\"" << curve_label(cell) << "\">\n";
        svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
        for (const auto& l : cell.levels) {
            svg << sx(static_cast<double>(l.L)) << ',' << sy(l.mean + l.sd) << ' ';
        }
        for (auto it = cell.levels.rbegin(); it != cell.levels.rend(); ++it) {
            svg << sx(static_cast<double>(it->L)) << ',' << sy(it->mean - it->sd) << ' ';
        }
        svg << "\"/>\n<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (const auto& l : cell.levels) {
            svg << sx(static_cast<double>(l.L)) << ',' << sy(l.mean) << ' ';
        }
        svg << "\"/>\n";
        for (const auto& l : cell.levels) {
            svg << "<circle cx=\"" << sx(static_cast<double>(l.L)) << "\" cy=\"" << sy(l.mean)
                << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        }
        const double ly = kTop + 10 + 18.0 * static_cast<double>(c);
        svg << "<line x1=\"" << kWidth - kRight + 15 << "\" y1=\"" << ly << "\" x2=\""
            << kWidth - kRight + 35 << "\" y2=\"" << ly << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << kWidth - kRight + 40 << "\" y=\"" << ly + 4 << "\">"
            << curve_label(cell) << "</text>\n</g>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

PlotOutput emit_plot(const std::filesystem::path& skills_csv, const std::filesystem::path& out) {
    const auto records = read_skills_csv(skills_csv);
    const auto cells = aggregate_skill(records);

    PlotOutput result{out, out};
    result.aggregates.replace_extension(".csv");
    if (result.aggregates == result.svg) {
        result.aggregates += ".aggregates.csv";
    }

    std::ostringstream csv;
    csv << "direction,E,tau,L,n,mean,sd\n";
    for (const auto& cell : cells) {
        for (const auto& l : cell.levels) {
            csv << to_string(cell.direction) << ',' << cell.E << ',' << cell.tau << ',' << l.L
                << ',' << l.count << ',' << format_double(l.mean) << ',' << format_double(l.sd)
                << '\n';
        }
    }
    write_file(result.svg, render_convergence_svg(cells));
    write_file(result.aggregates, csv.str());
    return result;
}

}  // namespace ccm::app
