#include "neatduel/report.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "neatduel/archive.hpp"
#include "neatduel/genome_io.hpp"

namespace neatduel {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 400.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 50.0;

struct Frame {
    double x_max = 1.0;
    double y_max = 1.0;

    double x(double v) const { return kLeft + (kWidth - kLeft - kRight) * v / x_max; }
    double y(double v) const { return kHeight - kBottom - (kHeight - kTop - kBottom) * v / y_max; }
};

std::string num(double v) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(2);
    out << v;
    return out.str();
}

std::string svg_open(const std::string& title) {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">" << title
        << "</text>\n";
    return out.str();
}

std::string axes(const Frame& f, const std::string& x_label, const std::string& y_label) {
    std::ostringstream out;
    const double x0 = f.x(0), y0 = f.y(0);
    out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(f.x(f.x_max)) << "\" y2=\""
        << num(y0) << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x0) << "\" y2=\""
        << num(f.y(f.y_max)) << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = f.x_max * k / 4.0;
        const double yv = f.y_max * k / 4.0;
        out << "<text x=\"" << num(f.x(xv)) << "\" y=\"" << num(y0 + 16) << "\" text-anchor=\"middle\">"
            << num(xv) << "</text>\n";
        out << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(f.y(yv) + 4) << "\" text-anchor=\"end\">" << num(yv)
            << "</text>\n";
    }
    out << "<text x=\"" << num((x0 + f.x(f.x_max)) / 2) << "\" y=\"" << num(kHeight - 12)
        << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
    out << "<text x=\"14\" y=\"" << num((y0 + f.y(f.y_max)) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
        << num((y0 + f.y(f.y_max)) / 2) << ")\">" << y_label << "</text>\n";
    return out.str();
}

template <class Fn>
std::string polyline(const RunArchive& archive, const Frame& f, Fn value, const std::string& style) {
    if (archive.generations.empty()) return {};
    std::ostringstream out;
    out << "<polyline fill=\"none\" " << style << " points=\"";
    for (const auto& r : archive.generations)
        out << num(f.x(r.generation)) << ',' << num(f.y(static_cast<double>(value(r)))) << ' ';
    out << "\"/>\n";
    return out.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ArchiveError("cannot write " + path.string());
    out << text;
}

}  // namespace

std::vector<ComplexityPoint> complexity_series(const RunArchive& archive) {
    std::vector<ComplexityPoint> series;
    for (const auto& r : archive.generations) {
        if (!r.new_dominant) continue;
        series.push_back({r.generation, r.champion.hidden_count(), r.champion.connections().size(),
                          std::min(r.populations[0].min_connections, r.populations[1].min_connections),
                          std::max(r.populations[0].max_connections, r.populations[1].max_connections)});
    }
    return series;
}

std::string complexity_csv(const std::vector<ComplexityPoint>& series) {
    std::ostringstream out;
    out << "generation,dominant_hidden,dominant_connections,pop_min_connections,pop_max_connections\n";
    for (const auto& p : series)
        out << p.generation << ',' << p.dominant_hidden << ',' << p.dominant_connections << ','
            << p.population_min_connections << ',' << p.population_max_connections << '\n';
    return out.str();
}

std::string stats_csv(const RunArchive& archive) {
    std::string out = stats_csv_header() + '\n';
    for (const auto& r : archive.generations) out += stats_csv_row(r) + '\n';
    return out;
}

std::string dominance_table(const DominanceHierarchy& hierarchy) {
    std::ostringstream out;
    out << "level,generation,hidden,connections,versus\n";
    for (std::size_t j = 0; j < hierarchy.size(); ++j) {
        const auto& level = hierarchy.levels[j];
        out << j + 1 << ',' << level.generation << ',' << level.genome.hidden_count() << ','
            << level.genome.connections().size() << ',';
        for (std::size_t i = 0; i < level.versus_prior.size(); ++i) {
            const auto& c = level.versus_prior[i];
            out << (i ? ";" : "") << i + 1 << ':' << c.wins_a << '-' << c.wins_b << '-' << c.draws;
        }
        out << '\n';
    }
    return out.str();
}

std::string gap_curve_csv(const std::vector<GapMargin>& curve) {
    std::ostringstream out;
    out << "gap,mean_margin\n";
    for (const auto& g : curve) out << g.gap << ',' << format_double(g.mean_margin) << '\n';
    return out.str();
}

std::string complexity_svg(const RunArchive& archive) {
    Frame f;
    for (const auto& r : archive.generations) {
        f.x_max = std::max(f.x_max, static_cast<double>(r.generation));
        f.y_max = std::max({f.y_max, static_cast<double>(r.populations[0].max_connections),
                            static_cast<double>(r.populations[1].max_connections)});
    }
    f.y_max *= 1.1;
    std::ostringstream out;
    out << svg_open("Connections per generation");
    out << axes(f, "generation", "connections");
    out << polyline(
        archive, f,
        [](const GenerationRecord& r) {
            return std::max(r.populations[0].max_connections, r.populations[1].max_connections);
        },
        "stroke=\"#9ab\" stroke-dasharray=\"4 3\"");
    out << polyline(
        archive, f,
        [](const GenerationRecord& r) {
            return std::min(r.populations[0].min_connections, r.populations[1].min_connections);
        },
        "stroke=\"#9ab\" stroke-dasharray=\"4 3\"");
    out << polyline(
        archive, f, [](const GenerationRecord& r) { return r.champion.connections().size(); },
        "stroke=\"#c33\" stroke-width=\"1.5\"");
    for (const auto& p : complexity_series(archive))
        out << "<circle cx=\"" << num(f.x(p.generation)) << "\" cy=\""
            << num(f.y(static_cast<double>(p.dominant_connections))) << "\" r=\"3.5\" fill=\"#c33\"/>\n";
    out << "</svg>\n";
    return out.str();
}

std::string dominance_svg(const RunArchive& archive) {
    Frame f;
    for (const auto& r : archive.generations) {
        f.x_max = std::max(f.x_max, static_cast<double>(r.generation));
        f.y_max = std::max(f.y_max, static_cast<double>(r.dominance_level));
    }
    f.y_max += 1.0;
    std::ostringstream out;
    out << svg_open("Dominance level per generation");
    out << axes(f, "generation", "dominance level");
    for (const auto& r : archive.generations) {
        if (!r.new_dominant) continue;
        out << "<line class=\"transition\" x1=\"" << num(f.x(r.generation)) << "\" y1=\"" << num(f.y(0))
            << "\" x2=\"" << num(f.x(r.generation)) << "\" y2=\"" << num(f.y(f.y_max)) << "\" stroke=\"#bbb\"/>\n";
    }
    if (!archive.generations.empty()) {
        out << "<polyline fill=\"none\" stroke=\"#236\" stroke-width=\"1.5\" points=\"";
        double previous = 0.0;
        for (const auto& r : archive.generations) {
            const auto level = static_cast<double>(r.dominance_level);
            out << num(f.x(r.generation)) << ',' << num(f.y(previous)) << ' ' << num(f.x(r.generation)) << ','
                << num(f.y(level)) << ' ';
            previous = level;
        }
        out << "\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

void write_report(const RunArchive& archive, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_file(out_dir / "stats.csv", stats_csv(archive));
    write_file(out_dir / "complexity.csv", complexity_csv(complexity_series(archive)));
    write_file(out_dir / "dominance.csv", dominance_table(archive.hierarchy));
    write_file(out_dir / "dominance_gaps.csv", gap_curve_csv(dominance_gap_curve(archive.hierarchy)));
    write_file(out_dir / "complexity.svg", complexity_svg(archive));
    write_file(out_dir / "dominance.svg", dominance_svg(archive));
}

}  // namespace neatduel
