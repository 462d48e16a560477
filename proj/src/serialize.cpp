#include "qoutlier/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qoutlier {

std::string canonical_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace {

void append_entries(std::string& out, const Complex* data, Eigen::Index count) {
    out += "[";
    for (Eigen::Index i = 0; i < count; ++i) {
        if (i) out += ",";
        out += "[";
        out += canonical_real(data[i].real());
        out += ",";
        out += canonical_real(data[i].imag());
        out += "]";
    }
    out += "]";
}

std::string canonical_json(const std::string& kind, int n_qubits,
                           const Complex* data, Eigen::Index count) {
    std::string out = "{\"entries\":";
    append_entries(out, data, count);
    out += ",\"kind\":\"" + kind + "\",\"n_qubits\":" + std::to_string(n_qubits) + "}";
    return out;
}

Matrix entries_to_matrix(const Json& j) {
    if (!j.is_object() || !j.contains("entries") || !j.contains("n_qubits")) {
        throw IoError("matrix JSON must carry 'entries' and 'n_qubits'");
    }
    const int n = j.at("n_qubits").get<int>();
    if (n < 1 || n > kMaxQubits) throw IoError("n_qubits out of range in file");
    const Eigen::Index dim = Eigen::Index(1) << n;
    const auto& e = j.at("entries");
    if (!e.is_array() || Eigen::Index(e.size()) != dim * dim) {
        throw IoError("matrix entry count does not match 2^n x 2^n");
    }
    Matrix m(dim, dim);
    Eigen::Index idx = 0;
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c, ++idx) {
            const auto& pair = e.at(idx);
            if (!pair.is_array() || pair.size() != 2) throw IoError("entry is not a [re, im] pair");
            m(r, c) = Complex(pair.at(0).get<double>(), pair.at(1).get<double>());
        }
    }
    return m;
}

void require_kind(const Json& j, const std::string& kind) {
    if (j.value("kind", "") != kind) {
        throw IoError("expected kind '" + kind + "', got '" + j.value("kind", "") + "'");
    }
}

} // namespace

std::string canonical_state_json(const PureState& psi) {
    return canonical_json("state", psi.n_qubits(), psi.amplitudes().data(), psi.dim());
}

std::string canonical_op_json(const std::string& kind, const Matrix& entries) {
    // row-major flattening
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = entries;
    return canonical_json(kind, qubits_for_dim(entries.rows()), rm.data(),
                          entries.rows() * entries.cols());
}

long code_length_bits(long value) {
    return 8L * static_cast<long>(std::to_string(value).size());
}

std::string content_hash(const std::string& canonical) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

PureState parse_state(const Json& j) {
    require_kind(j, "state");
    const int n = j.at("n_qubits").get<int>();
    const Eigen::Index dim = Eigen::Index(1) << n;
    const auto& e = j.at("entries");
    if (!e.is_array() || Eigen::Index(e.size()) != dim) {
        throw IoError("state entry count does not match 2^n");
    }
    Vector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const auto& pair = e.at(i);
        if (!pair.is_array() || pair.size() != 2) throw IoError("entry is not a [re, im] pair");
        v(i) = Complex(pair.at(0).get<double>(), pair.at(1).get<double>());
    }
    return PureState(n, std::move(v));
}

HermitianOp parse_hermitian(const Json& j) {
    require_kind(j, "hermitian");
    return HermitianOp(entries_to_matrix(j));
}

DensityMatrix parse_density(const Json& j) {
    require_kind(j, "density");
    return DensityMatrix(entries_to_matrix(j));
}

Projector parse_projector(const Json& j) {
    require_kind(j, "projector");
    return Projector(entries_to_matrix(j));
}

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw IoError("cannot parse " + path + ": " + e.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

} // namespace qoutlier
