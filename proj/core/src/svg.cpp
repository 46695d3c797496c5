#include "proxnas/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "proxnas/textio.hpp"

namespace proxnas {

namespace {

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string coord(double v) {
    char buf[32];
    const int len = std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf, static_cast<std::size_t>(len));
}

}  // namespace

void emit_svg(const std::vector<TraceRecord>& trace, const std::vector<std::string>& op_names,
              const std::filesystem::path& svg_path) {
    if (trace.empty()) throw ContractViolation("emit_svg: empty trace");
    for (const auto& rec : trace)
        if (rec.summary.size() != op_names.size())
            throw ContractViolation("emit_svg: summary width does not match op names");

    const double width = 960, height = 480;
    const double left = 64, right = width - 176, top = 36, bottom = height - 56;

    const double epoch_min = static_cast<double>(trace.front().epoch);
    double epoch_max = static_cast<double>(trace.back().epoch);
    if (epoch_max <= epoch_min) epoch_max = epoch_min + 1.0;  // degenerate single-point trace

    auto sx = [&](double epoch) {
        return left + (epoch - epoch_min) / (epoch_max - epoch_min) * (right - left);
    };
    auto sy = [&](double w) { return bottom - w * (bottom - top); };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << " " << height
       << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
    os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

    // horizontal gridlines and y ticks at 0, 0.25, ..., 1
    for (int i = 0; i <= 4; ++i) {
        const double w = 0.25 * i;
        const double y = sy(w);
        os << "<line x1=\"" << coord(left) << "\" y1=\"" << coord(y) << "\" x2=\""
           << coord(right) << "\" y2=\"" << coord(y)
           << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        os << "<text x=\"" << coord(left - 8) << "\" y=\"" << coord(y + 4)
           << "\" text-anchor=\"end\">" << coord(w) << "</text>\n";
    }
    // x ticks: five evenly spaced epochs
    for (int i = 0; i <= 4; ++i) {
        const double e = epoch_min + (epoch_max - epoch_min) * i / 4.0;
        const double x = sx(e);
        os << "<line x1=\"" << coord(x) << "\" y1=\"" << coord(bottom) << "\" x2=\"" << coord(x)
           << "\" y2=\"" << coord(bottom + 5) << "\" stroke=\"#444444\"/>\n";
        os << "<text x=\"" << coord(x) << "\" y=\"" << coord(bottom + 20)
           << "\" text-anchor=\"middle\">" << static_cast<long long>(e + 0.5) << "</text>\n";
    }
    os << "<line x1=\"" << coord(left) << "\" y1=\"" << coord(bottom) << "\" x2=\""
       << coord(right) << "\" y2=\"" << coord(bottom) << "\" stroke=\"#444444\"/>\n";
    os << "<line x1=\"" << coord(left) << "\" y1=\"" << coord(top) << "\" x2=\"" << coord(left)
       << "\" y2=\"" << coord(bottom) << "\" stroke=\"#444444\"/>\n";
    os << "<text x=\"" << coord((left + right) / 2) << "\" y=\"" << coord(height - 14)
       << "\" text-anchor=\"middle\">epoch</text>\n";
    os << "<text x=\"18\" y=\"" << coord((top + bottom) / 2)
       << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << coord((top + bottom) / 2)
       << ")\">summary weight</text>\n";

    for (std::size_t j = 0; j < op_names.size(); ++j) {
        const char* color = kPalette[j % kPaletteSize];
        if (trace.size() == 1) {
            os << "<circle cx=\"" << coord(sx(static_cast<double>(trace[0].epoch))) << "\" cy=\""
               << coord(sy(trace[0].summary[j])) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        } else {
            os << "<polyline fill=\"none\" stroke=\"" << color
               << "\" stroke-width=\"1.8\" points=\"";
            for (std::size_t i = 0; i < trace.size(); ++i) {
                if (i) os << ' ';
                os << coord(sx(static_cast<double>(trace[i].epoch))) << ','
                   << coord(sy(trace[i].summary[j]));
            }
            os << "\"/>\n";
        }
        // legend entry
        const double ly = top + 10 + 20.0 * static_cast<double>(j);
        os << "<line x1=\"" << coord(right + 14) << "\" y1=\"" << coord(ly) << "\" x2=\""
           << coord(right + 38) << "\" y2=\"" << coord(ly) << "\" stroke=\"" << color
           << "\" stroke-width=\"3\"/>\n";
        os << "<text x=\"" << coord(right + 44) << "\" y=\"" << coord(ly + 4) << "\">"
           << op_names[j] << "</text>\n";
    }
    os << "</svg>\n";
    write_text_file(svg_path, os.str());

    std::filesystem::path csv_path = svg_path;
    csv_path.replace_extension(".csv");
    write_trace_csv(trace, op_names, csv_path);
}

}  // namespace proxnas
