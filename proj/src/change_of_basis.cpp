#include "cslab/change_of_basis.hpp"

#include "cslab/errors.hpp"
#include "cslab/io.hpp"
#include "cslab/parallel.hpp"

namespace cslab {

namespace {

void check_quality(Eigen::Index rows, int quality) {
    if (quality < 0 || quality > 26) throw validation_error("quality depth out of [0, 26]");
    if (rows > (Eigen::Index(1) << quality))
        throw resource_error("sequency range exceeds 2^quality; refusing to alias");
}

} // namespace

double u_entry(const WaveletSystem& sys, std::uint64_t n, const BasisIndex& idx, int quality) {
    check_quality(Eigen::Index(n) + 1, quality);
    const GridFunction avg = periodized_cell_averages(sys, idx, quality);
    return fwht_sequency(avg.values, FwhtNorm::Analysis)(Eigen::Index(n));
}

Eigen::VectorXd section_column(const WaveletSystem& sys, const BasisIndex& idx,
                               Eigen::Index rows, int quality) {
    check_quality(rows, quality);
    const GridFunction avg = periodized_cell_averages(sys, idx, quality);
    return fwht_sequency(avg.values, FwhtNorm::Analysis).head(rows);
}

SectionMatrix assemble_section(const WaveletSystem& sys, Eigen::Index rows,
                               Eigen::Index cols, int quality) {
    if (rows < 1 || cols < 1) throw validation_error("assemble_section: empty section");
    check_quality(rows, quality);
    check_dense_alloc(std::size_t(rows) * std::size_t(cols) * sizeof(double),
                      "assemble_section");

    SectionMatrix sec;
    sec.sys = sys;
    sec.entries.resize(rows, cols);
    sec.col_index_map.resize(std::size_t(cols));
    for (Eigen::Index j = 0; j < cols; ++j)
        sec.col_index_map[std::size_t(j)] = BasisIndex::from_position(sys.J0, j);

    parallel_for(std::size_t(cols), [&](std::size_t j) {
        sec.entries.col(Eigen::Index(j)) =
            section_column(sys, sec.col_index_map[j], rows, quality);
    });

    // Empirical entry error: probe a few columns two quality levels deeper.
    // The averages are exact, so this measures floating-point noise only.
    if (quality + 2 <= 26 && rows <= (Eigen::Index(1) << quality)) {
        double err = 0;
        const Eigen::Index probes = std::min<Eigen::Index>(cols, 3);
        for (Eigen::Index p = 0; p < probes; ++p) {
            const Eigen::Index j = (cols - 1) * p / std::max<Eigen::Index>(probes - 1, 1);
            const Eigen::VectorXd fine =
                section_column(sys, sec.col_index_map[std::size_t(j)], rows, quality + 2);
            err = std::max(err, (fine - sec.entries.col(j)).cwiseAbs().maxCoeff());
        }
        sec.entry_err = err;
    }
    return sec;
}

Eigen::VectorXd apply_section(const SectionMatrix& sec, const Eigen::VectorXd& v) {
    if (v.size() != sec.cols()) throw validation_error("apply_section: dimension mismatch");
    return sec.entries * v;
}

Eigen::VectorXd apply_section_adjoint(const SectionMatrix& sec, const Eigen::VectorXd& v) {
    if (v.size() != sec.rows())
        throw validation_error("apply_section_adjoint: dimension mismatch");
    return sec.entries.transpose() * v;
}

void dump_section_csv(const SectionMatrix& sec, const std::string& path) {
    std::vector<std::string> header;
    header.reserve(std::size_t(sec.cols()));
    for (Eigen::Index j = 0; j < sec.cols(); ++j) header.push_back("col" + std::to_string(j + 1));
    write_csv(path, header, sec.entries);
}

} // namespace cslab
