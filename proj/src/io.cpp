#include "abelrad/io.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace abelrad {

namespace {

std::ofstream open_out(const std::string& path, bool binary) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path, bool binary) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return in;
}

std::vector<double> split_csv_line(const std::string& line) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

void write_u64(std::ofstream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = (v >> (8 * i)) & 0xff;
    out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t read_u64(std::ifstream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
    return v;
}

}  // namespace

void write_pgm(const std::string& path, const Image& img, bool binary) {
    const int m = img.grid.m;
    double maxv = 0.0;
    for (double v : img.values) maxv = std::max(maxv, v);
    auto quantize = [&](double v) -> unsigned {
        if (maxv <= 0.0 || v <= 0.0) return 0;
        double q = v / maxv * 65535.0;
        return unsigned(std::min(65535.0, std::max(0.0, q + 0.5)));
    };
    auto out = open_out(path, binary);
    out << (binary ? "P5" : "P2") << "\n" << m << " " << m << "\n65535\n";
    if (binary) {
        std::vector<unsigned char> buf;
        buf.reserve(img.values.size() * 2);
        for (double v : img.values) {
            unsigned q = quantize(v);
            buf.push_back((q >> 8) & 0xff);  // 16-bit PGM samples are big-endian
            buf.push_back(q & 0xff);
        }
        out.write(reinterpret_cast<const char*>(buf.data()), buf.size());
    } else {
        for (int r = 0; r < m; ++r) {
            for (int c = 0; c < m; ++c) out << quantize(img.at(r, c)) << (c + 1 < m ? ' ' : '\n');
        }
    }
}

void write_image_csv(const std::string& path, const Image& img) {
    auto out = open_out(path, false);
    char buf[32];
    const int m = img.grid.m;
    for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", img.at(r, c));
            out << buf << (c + 1 < m ? "," : "\n");
        }
    }
}

Image read_image_csv(const std::string& path) {
    auto in = open_in(path, false);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        rows.push_back(split_csv_line(line));
    }
    const int m = int(rows.size());
    Image img{ImageGrid(m)};
    for (int r = 0; r < m; ++r) {
        if (int(rows[r].size()) != m) throw std::runtime_error("image CSV is not square: " + path);
        for (int c = 0; c < m; ++c) img.at(r, c) = rows[r][c];
    }
    return img;
}

void write_sinogram_csv(const std::string& path, const Sinogram& sino) {
    auto out = open_out(path, false);
    char buf[32];
    out << sino.j << ",";
    std::snprintf(buf, sizeof buf, "%.17g", sino.s);
    out << buf << "\n";
    auto axis_line = [&](const Grid1D& g) {
        std::snprintf(buf, sizeof buf, "%.17g", g.lo);
        out << buf << ",";
        std::snprintf(buf, sizeof buf, "%.17g", g.hi);
        out << buf << "," << g.count << "\n";
    };
    axis_line(sino.p_axis);
    axis_line(sino.y_axis);
    for (int ip = 0; ip < sino.p_axis.count; ++ip) {
        for (int iy = 0; iy < sino.y_axis.count; ++iy) {
            std::snprintf(buf, sizeof buf, "%.17g", sino.at(ip, iy));
            out << buf << (iy + 1 < sino.y_axis.count ? "," : "\n");
        }
    }
}

Sinogram read_sinogram_csv(const std::string& path) {
    auto in = open_in(path, false);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("sinogram CSV truncated: " + path);
    auto head = split_csv_line(line);
    if (head.size() != 2) throw std::runtime_error("sinogram CSV bad header: " + path);
    auto read_axis = [&]() {
        if (!std::getline(in, line)) throw std::runtime_error("sinogram CSV truncated: " + path);
        auto v = split_csv_line(line);
        if (v.size() != 3) throw std::runtime_error("sinogram CSV bad axis line: " + path);
        return Grid1D{v[0], v[1], int(v[2])};
    };
    Grid1D p_axis = read_axis();
    Grid1D y_axis = read_axis();
    Sinogram sino(p_axis, y_axis, int(head[0]), head[1]);
    for (int ip = 0; ip < p_axis.count; ++ip) {
        if (!std::getline(in, line)) throw std::runtime_error("sinogram CSV truncated: " + path);
        auto v = split_csv_line(line);
        if (int(v.size()) != y_axis.count)
            throw std::runtime_error("sinogram CSV bad row length: " + path);
        for (int iy = 0; iy < y_axis.count; ++iy) sino.at(ip, iy) = v[iy];
    }
    return sino;
}

void write_matrix_bin(const std::string& path, const SparseOperator& A) {
    auto out = open_out(path, true);
    out.write("ABRSPM01", 8);
    write_u64(out, std::uint64_t(A.rows));
    write_u64(out, std::uint64_t(A.cols));
    write_u64(out, A.nnz());
    for (auto v : A.row_offsets) write_u64(out, v);
    for (auto v : A.col_indices) write_u64(out, std::uint64_t(v));
    out.write(reinterpret_cast<const char*>(A.weights.data()), A.weights.size() * 8);
}

SparseOperator read_matrix_bin(const std::string& path) {
    auto in = open_in(path, true);
    char magic[8];
    in.read(magic, 8);
    if (std::string(magic, 8) != "ABRSPM01")
        throw std::runtime_error("bad matrix cache magic: " + path);
    const auto rows = read_u64(in), cols = read_u64(in), nnz = read_u64(in);
    SparseOperator A{int(rows), int(cols)};
    for (auto& v : A.row_offsets) v = read_u64(in);
    A.col_indices.resize(nnz);
    for (auto& v : A.col_indices) v = std::uint32_t(read_u64(in));
    A.weights.resize(nnz);
    in.read(reinterpret_cast<char*>(A.weights.data()), nnz * 8);
    if (!in) throw std::runtime_error("matrix cache truncated: " + path);
    return A;
}

void write_profile_csv(const std::string& path, const std::vector<double>& values) {
    auto out = open_out(path, false);
    char buf[32];
    for (double v : values) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf << "\n";
    }
}

std::vector<double> read_profile_csv(const std::string& path) {
    auto in = open_in(path, false);
    std::vector<double> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(std::stod(line));
    }
    return out;
}

}  // namespace abelrad
