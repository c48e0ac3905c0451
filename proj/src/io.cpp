#include "cslab/io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>

#include "cslab/errors.hpp"
#include "cslab/grid_function.hpp"

namespace cslab {

std::size_t max_dense_bytes() {
    static const std::size_t cap = [] {
        std::size_t mb = 2048;
        if (const char* env = std::getenv("CS_LAB_MAX_MEM_MB")) {
            char* end = nullptr;
            const unsigned long long v = std::strtoull(env, &end, 10);
            if (end != env && v > 0) mb = static_cast<std::size_t>(v);
        }
        return mb * std::size_t(1024) * 1024;
    }();
    return cap;
}

void check_dense_alloc(std::size_t bytes, const char* what) {
    if (bytes > max_dense_bytes())
        throw resource_error(std::string(what) + ": dense allocation of " +
                             std::to_string(bytes >> 20) +
                             " MB exceeds CS_LAB_MAX_MEM_MB cap");
}

double grid_l2_distance(const GridFunction& a, const GridFunction& b) {
    const int d = std::max(a.depth, b.depth);
    const GridFunction fa = prolong(a, d);
    const GridFunction fb = prolong(b, d);
    return (fa.values - fb.values).norm() * std::pow(0.5, 0.5 * d);
}

GridFunction prolong(const GridFunction& f, int depth) {
    if (depth < f.depth) throw validation_error("prolong: target depth too small");
    if (depth == f.depth) return f;
    const Eigen::Index rep = Eigen::Index(1) << (depth - f.depth);
    Eigen::VectorXd out(f.values.size() * rep);
    for (Eigen::Index i = 0; i < f.values.size(); ++i)
        out.segment(i * rep, rep).setConstant(f.values(i));
    return GridFunction(depth, std::move(out));
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot open for writing: " + path);
    return out;
}

void write_row(std::ofstream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << cells[i];
    }
    out << '\n';
}

} // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const Eigen::MatrixXd& rows) {
    auto out = open_out(path);
    write_row(out, header);
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        for (Eigen::Index j = 0; j < rows.cols(); ++j) {
            if (j) out << ',';
            out << format_double(rows(i, j));
        }
        out << '\n';
    }
}

void write_csv_cells(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
    auto out = open_out(path);
    write_row(out, header);
    for (const auto& row : rows) write_row(out, row);
}

void write_svg_lines(const std::string& path, const std::vector<Eigen::VectorXd>& series,
                     const std::vector<std::string>& labels) {
    const int W = 720, H = 420, pad = 40;
    double lo = 0, hi = 1;
    for (const auto& s : series) {
        if (s.size() == 0) continue;
        lo = std::min(lo, s.minCoeff());
        hi = std::max(hi, s.maxCoeff());
    }
    if (hi <= lo) hi = lo + 1;
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

    auto out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    out << "<line x1=\"" << pad << "\" y1=\"" << H - pad << "\" x2=\"" << W - pad << "\" y2=\""
        << H - pad << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\""
        << H - pad << "\" stroke=\"black\"/>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        if (s.size() == 0) continue;
        out << "<polyline fill=\"none\" stroke=\"" << colors[k % 4] << "\" points=\"";
        for (Eigen::Index i = 0; i < s.size(); ++i) {
            const double x = pad + (W - 2.0 * pad) * double(i) / double(s.size() - 1);
            const double y = H - pad - (H - 2.0 * pad) * (s(i) - lo) / (hi - lo);
            out << format_double(x) << ',' << format_double(y) << ' ';
        }
        out << "\"/>\n";
        if (k < labels.size())
            out << "<text x=\"" << pad + 8 << "\" y=\"" << pad + 16 + 18 * int(k)
                << "\" fill=\"" << colors[k % 4] << "\" font-size=\"13\">" << labels[k]
                << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace cslab
