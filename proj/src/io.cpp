#include "corrseek/io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace corrseek {

namespace {

[[noreturn]] void bad_file(const std::string& path, const std::string& why) {
    throw std::runtime_error(path + ": " + why);
}

void put_u64_le(std::ostream& os, uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(buf, 8);
}

uint64_t get_u64_le(std::istream& is) {
    char buf[8];
    is.read(buf, 8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(static_cast<unsigned char>(buf[i])) << (8 * i);
    return v;
}

}  // namespace

void save_pmat(const BooleanMatrix& m, const std::string& path, bool binary) {
    std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
    if (!os) bad_file(path, "cannot open for writing");
    if (binary) {
        os << "PMATB1 " << m.dim() << ' ' << m.cols() << '\n';
        for (int64_t j = 0; j < m.cols(); ++j) {
            const ColumnView col = m.col(j);
            for (int64_t w = 0; w < col.words; ++w) put_u64_le(os, col.sign[w]);
            for (int64_t w = 0; w < col.words; ++w) put_u64_le(os, col.present[w]);
        }
    } else {
        os << "PMAT1 " << m.dim() << ' ' << m.cols() << '\n';
        std::string line(static_cast<size_t>(m.dim()), '+');
        for (int64_t j = 0; j < m.cols(); ++j) {
            for (int64_t i = 0; i < m.dim(); ++i) {
                line[static_cast<size_t>(i)] = m.entry(i, j) == -1 ? '-' : '+';
            }
            os << line << '\n';
        }
    }
    if (!os) bad_file(path, "write failed");
}

BooleanMatrix load_pmat(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) bad_file(path, "cannot open");
    std::string magic;
    int64_t d = 0, n = 0;
    is >> magic >> d >> n;
    if (!is || d < 1 || n < 1) bad_file(path, "bad header");
    is.get();  // newline

    BooleanMatrix m(d, n);
    if (magic == "PMATB1") {
        for (int64_t j = 0; j < n; ++j) {
            uint64_t* sign = m.raw_sign(j);
            uint64_t* present = m.raw_present(j);
            for (int64_t w = 0; w < m.words_per_col(); ++w) sign[w] = get_u64_le(is);
            for (int64_t w = 0; w < m.words_per_col(); ++w) present[w] = get_u64_le(is);
        }
        if (!is) bad_file(path, "truncated binary payload");
    } else if (magic == "PMAT1") {
        std::string line;
        for (int64_t j = 0; j < n; ++j) {
            if (!std::getline(is, line)) bad_file(path, "missing data line");
            if (static_cast<int64_t>(line.size()) != d) {
                bad_file(path, "line " + std::to_string(j + 2) + " has wrong length");
            }
            for (int64_t i = 0; i < d; ++i) {
                const char c = line[static_cast<size_t>(i)];
                if (c != '+' && c != '-') bad_file(path, "entries must be + or -");
                m.set_entry(i, j, c == '-' ? -1 : 1);
            }
        }
    } else {
        bad_file(path, "unknown magic " + magic);
    }
    return m;
}

void save_parity_examples(const std::vector<ParityExample>& examples, int64_t n,
                          const std::string& path) {
    std::ofstream os(path);
    if (!os) bad_file(path, "cannot open for writing");
    os << "PARITY1 " << n << ' ' << examples.size() << '\n';
    std::string line(static_cast<size_t>(n), '+');
    for (const ParityExample& ex : examples) {
        for (int64_t j = 0; j < n; ++j) line[static_cast<size_t>(j)] = ex.x[j] == -1 ? '-' : '+';
        os << line << '\t' << (ex.y == -1 ? '-' : '+') << '\n';
    }
    if (!os) bad_file(path, "write failed");
}

std::vector<ParityExample> load_parity_examples(const std::string& path, int64_t& n_out) {
    std::ifstream is(path);
    if (!is) bad_file(path, "cannot open");
    std::string magic;
    int64_t n = 0, d = 0;
    is >> magic >> n >> d;
    if (!is || magic != "PARITY1" || n < 1 || d < 1) bad_file(path, "bad header");
    is.get();

    std::vector<ParityExample> out(static_cast<size_t>(d));
    std::string line;
    for (int64_t i = 0; i < d; ++i) {
        if (!std::getline(is, line)) bad_file(path, "missing example line");
        if (static_cast<int64_t>(line.size()) != n + 2 || line[static_cast<size_t>(n)] != '\t') {
            bad_file(path, "example line " + std::to_string(i + 2) + " malformed");
        }
        ParityExample& ex = out[static_cast<size_t>(i)];
        ex.x.resize(static_cast<size_t>(n));
        for (int64_t j = 0; j < n; ++j) {
            const char c = line[static_cast<size_t>(j)];
            if (c != '+' && c != '-') bad_file(path, "entries must be + or -");
            ex.x[static_cast<size_t>(j)] = c == '-' ? -1 : 1;
        }
        const char yc = line[static_cast<size_t>(n + 1)];
        if (yc != '+' && yc != '-') bad_file(path, "label must be + or -");
        ex.y = yc == '-' ? -1 : 1;
    }
    n_out = n;
    return out;
}

namespace {

void save_ov_block(std::ostream& os, const OVInstance& inst, bool s_side) {
    os << "OV1 " << inst.dprime << ' ' << inst.n << '\n';
    std::string line(static_cast<size_t>(inst.dprime), '0');
    for (int64_t j = 0; j < inst.n; ++j) {
        for (int64_t i = 0; i < inst.dprime; ++i) {
            const uint8_t v = s_side ? inst.s_at(i, j) : inst.t_at(i, j);
            line[static_cast<size_t>(i)] = v ? '1' : '0';
        }
        os << line << '\n';
    }
}

void load_ov_block(std::istream& is, const std::string& path, OVInstance& inst, bool s_side) {
    std::string magic;
    int64_t dp = 0, n = 0;
    is >> magic >> dp >> n;
    if (!is || magic != "OV1" || dp < 1 || n < 1) bad_file(path, "bad OV header");
    is.get();
    if (s_side) {
        inst.dprime = dp;
        inst.n = n;
        inst.s_entries.assign(static_cast<size_t>(dp * n), 0);
        inst.t_entries.assign(static_cast<size_t>(dp * n), 0);
    } else if (dp != inst.dprime || n != inst.n) {
        bad_file(path, "S and T headers disagree");
    }
    std::string line;
    for (int64_t j = 0; j < n; ++j) {
        if (!std::getline(is, line)) bad_file(path, "missing OV line");
        if (static_cast<int64_t>(line.size()) != dp) bad_file(path, "OV line has wrong length");
        for (int64_t i = 0; i < dp; ++i) {
            const char c = line[static_cast<size_t>(i)];
            if (c != '0' && c != '1') bad_file(path, "OV entries must be 0 or 1");
            if (s_side) {
                inst.set_s(i, j, c == '1');
            } else {
                inst.set_t(i, j, c == '1');
            }
        }
    }
}

}  // namespace

void save_ov(const OVInstance& inst, const std::string& path) {
    std::ofstream os(path);
    if (!os) bad_file(path, "cannot open for writing");
    save_ov_block(os, inst, true);
    save_ov_block(os, inst, false);
    if (!os) bad_file(path, "write failed");
}

OVInstance load_ov(const std::string& path) {
    std::ifstream is(path);
    if (!is) bad_file(path, "cannot open");
    OVInstance inst;
    load_ov_block(is, path, inst, true);
    load_ov_block(is, path, inst, false);
    return inst;
}

}  // namespace corrseek
