#include "parcel/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "parcel/errors.hpp"

namespace parcel {

namespace {

std::ifstream open_in(const std::string& path, bool binary = false) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) throw io_error("cannot open " + path + " for reading");
    return in;
}

std::ofstream open_out(const std::string& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw io_error("cannot open " + path + " for writing");
    return out;
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line,
                             const std::string& what) {
    throw format_error(path + ":" + std::to_string(line) + ": " + what);
}

// Next non-empty, non-comment line.
bool next_line(std::istream& in, std::string& line, std::size_t& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        return true;
    }
    return false;
}

} // namespace

std::string format_full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

SurfaceMesh read_off(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    std::size_t lineno = 0;
    if (!next_line(in, line, lineno) || line.substr(0, 3) != "OFF")
        parse_fail(path, lineno, "expected OFF header");
    if (!next_line(in, line, lineno))
        parse_fail(path, lineno, "missing counts line");
    std::istringstream counts(line);
    std::size_t nv = 0, nf = 0, ne = 0;
    if (!(counts >> nv >> nf >> ne))
        parse_fail(path, lineno, "malformed counts line '" + line + "'");
    SurfaceMesh mesh;
    mesh.vertex_positions.reserve(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        if (!next_line(in, line, lineno))
            parse_fail(path, lineno, "unexpected end of file in vertex list");
        std::istringstream ls(line);
        double x, y, z;
        if (!(ls >> x >> y >> z))
            parse_fail(path, lineno, "malformed vertex line '" + line + "'");
        mesh.vertex_positions.push_back({x, y, z});
    }
    for (std::size_t i = 0; i < nf; ++i) {
        if (!next_line(in, line, lineno))
            parse_fail(path, lineno, "unexpected end of file in face list");
        std::istringstream ls(line);
        std::size_t arity;
        uint32_t a, b, c;
        if (!(ls >> arity >> a >> b >> c) || arity != 3)
            parse_fail(path, lineno, "expected triangle face, got '" + line + "'");
        mesh.triangles.push_back({a, b, c});
    }
    validate_mesh(mesh);
    return mesh;
}

void write_off(const SurfaceMesh& mesh, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "OFF\n" << mesh.n_vertices() << ' ' << mesh.n_triangles() << " 0\n";
    for (const auto& p : mesh.vertex_positions)
        out << format_full(p[0]) << ' ' << format_full(p[1]) << ' '
            << format_full(p[2]) << '\n';
    for (const auto& t : mesh.triangles)
        out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

VertexMask read_mask(const std::string& path, std::size_t n_vertices) {
    std::ifstream in = open_in(path);
    VertexMask mask;
    std::string line;
    std::size_t lineno = 0;
    while (next_line(in, line, lineno)) {
        std::istringstream ls(line);
        int v;
        if (!(ls >> v) || (v != 0 && v != 1))
            parse_fail(path, lineno, "expected 0 or 1, got '" + line + "'");
        mask.push_back(v == 1);
    }
    if (mask.size() != n_vertices)
        throw format_error(path + ": mask has " + std::to_string(mask.size()) +
                           " entries, mesh has " + std::to_string(n_vertices) +
                           " vertices");
    return mask;
}

ConnectivityMatrix read_cmat(const std::string& path) {
    std::ifstream in = open_in(path, true);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "CMAT", 4) != 0)
        throw format_error(path + ": bad magic, not a CMAT file");
    uint32_t version = 0;
    uint8_t tag = 0;
    uint64_t n_seeds = 0, n_cols = 0;
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&tag), 1);
    in.read(reinterpret_cast<char*>(&n_seeds), 8);
    in.read(reinterpret_cast<char*>(&n_cols), 8);
    if (!in) throw format_error(path + ": truncated CMAT header");
    if (version != 1)
        throw format_error(path + ": unsupported CMAT version " +
                           std::to_string(version));
    if (tag > 1)
        throw format_error(path + ": invalid space tag " + std::to_string(tag));
    ConnectivityMatrix m = ConnectivityMatrix::zeros(
        n_seeds, n_cols, tag == 0 ? Space::Probability : Space::Logit);
    std::vector<float> buf(n_seeds * n_cols);
    in.read(reinterpret_cast<char*>(buf.data()),
            static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!in)
        throw format_error(path + ": truncated CMAT payload at byte offset " +
                           std::to_string(25 + in.gcount()));
    for (std::size_t i = 0; i < buf.size(); ++i) m.values[i] = buf[i];
    return m;
}

void write_cmat(const ConnectivityMatrix& m, const std::string& path) {
    std::ofstream out = open_out(path, true);
    out.write("CMAT", 4);
    uint32_t version = 1;
    uint8_t tag = static_cast<uint8_t>(m.space);
    uint64_t n_seeds = m.n_seeds, n_cols = m.n_targets;
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&tag), 1);
    out.write(reinterpret_cast<const char*>(&n_seeds), 8);
    out.write(reinterpret_cast<const char*>(&n_cols), 8);
    std::vector<float> buf(m.values.begin(), m.values.end());
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!out) throw io_error("failed writing " + path);
}

ConnectivityMatrix read_matrix_csv(const std::string& path, Space space) {
    std::ifstream in = open_in(path);
    std::vector<double> values;
    std::size_t n_cols = 0, n_rows = 0, lineno = 0;
    std::string line;
    while (next_line(in, line, lineno)) {
        std::istringstream ls(line);
        std::string cell;
        std::size_t cols = 0;
        while (std::getline(ls, cell, ',')) {
            try {
                values.push_back(std::stod(cell));
            } catch (const std::exception&) {
                parse_fail(path, lineno, "not a number: '" + cell + "'");
            }
            ++cols;
        }
        if (n_rows == 0) {
            n_cols = cols;
        } else if (cols != n_cols) {
            parse_fail(path, lineno,
                       "row has " + std::to_string(cols) + " columns, expected " +
                           std::to_string(n_cols));
        }
        ++n_rows;
        if (values.size() > 1000000)
            throw format_error(path + ": CSV matrices are limited to 10^6 entries;"
                                      " use the CMAT binary format");
    }
    ConnectivityMatrix m;
    m.n_seeds = n_rows;
    m.n_targets = n_cols;
    m.space = space;
    m.values = std::move(values);
    return m;
}

void write_matrix_csv(const ConnectivityMatrix& m, const std::string& path) {
    if (m.values.size() > 1000000)
        throw parameter_error("CSV matrices are limited to 10^6 entries;"
                              " use the CMAT binary format");
    std::ofstream out = open_out(path);
    for (std::size_t r = 0; r < m.n_seeds; ++r) {
        for (std::size_t c = 0; c < m.n_targets; ++c) {
            if (c) out << ',';
            out << format_full(m.at(r, c));
        }
        out << '\n';
    }
}

Dendrogram read_dendrogram_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    std::size_t lineno = 0;
    if (!next_line(in, line, lineno) || line.rfind("n_leaves=", 0) != 0)
        parse_fail(path, lineno, "expected 'n_leaves=N' header");
    Dendrogram d;
    try {
        d.n_leaves = static_cast<uint32_t>(std::stoul(line.substr(9)));
    } catch (const std::exception&) {
        parse_fail(path, lineno, "malformed leaf count '" + line + "'");
    }
    while (next_line(in, line, lineno)) {
        std::istringstream ls(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() != 5)
            parse_fail(path, lineno, "expected 5 comma-separated fields");
        try {
            MergeRecord rec;
            std::size_t index = std::stoul(cells[0]);
            if (index != d.merges.size())
                parse_fail(path, lineno, "merge index out of sequence");
            rec.left = static_cast<uint32_t>(std::stoul(cells[1]));
            rec.right = static_cast<uint32_t>(std::stoul(cells[2]));
            rec.height = std::stod(cells[3]);
            rec.member_count = static_cast<uint32_t>(std::stoul(cells[4]));
            d.merges.push_back(rec);
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            parse_fail(path, lineno, "malformed merge record '" + line + "'");
        }
    }
    return d;
}

void write_dendrogram_csv(const Dendrogram& d, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "n_leaves=" << d.n_leaves << '\n';
    for (std::size_t i = 0; i < d.merges.size(); ++i) {
        const MergeRecord& rec = d.merges[i];
        out << i << ',' << rec.left << ',' << rec.right << ','
            << format_full(rec.height) << ',' << rec.member_count << '\n';
    }
}

Parcellation read_parcellation_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    std::size_t lineno = 0;
    std::vector<uint32_t> raw;
    while (next_line(in, line, lineno)) {
        std::istringstream ls(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() != 2)
            parse_fail(path, lineno, "expected 'seed_index,label'");
        try {
            std::size_t index = std::stoul(cells[0]);
            if (index != raw.size())
                parse_fail(path, lineno, "seed index out of sequence");
            raw.push_back(static_cast<uint32_t>(std::stoul(cells[1])));
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            parse_fail(path, lineno, "malformed parcellation line '" + line + "'");
        }
    }
    return make_parcellation(raw);
}

void write_parcellation_csv(const Parcellation& p, const std::string& path) {
    std::ofstream out = open_out(path);
    for (std::size_t v = 0; v < p.labels.size(); ++v)
        out << v << ',' << p.labels[v] << '\n';
}

void write_consistency_csv(const std::vector<ConsistencyRow>& rows,
                           const std::string& path) {
    std::ofstream out = open_out(path);
    out << "k,pair_a,pair_b,ari\n";
    for (const auto& r : rows)
        out << r.k << ',' << r.pair_a << ',' << r.pair_b << ','
            << format_full(r.ari) << '\n';
}

void write_baseline_csv(const std::vector<BaselineRow>& rows,
                        const std::string& path) {
    std::ofstream out = open_out(path);
    out << "k,mode,mean_ari,std_ari,n_trials\n";
    for (const auto& r : rows)
        out << r.k << ','
            << (r.mode == BaselineMode::Homogeneous ? "homogeneous" : "hierarchical")
            << ',' << format_full(r.mean_ari) << ',' << format_full(r.std_ari) << ','
            << r.n_trials << '\n';
}

} // namespace parcel
