#include "crf/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "crf/errors.hpp"

namespace crf {

std::uint64_t fnv1a64_bytes(const void* data, std::size_t n) {
    const unsigned char* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

namespace {

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 8);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    return out;
}

} // namespace

std::string Manifest::to_json() const {
    char buf[64];
    std::uint64_t config_hash = fnv1a64_bytes(config_json.data(), config_json.size());
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(config_hash));
    std::string out = "{\"config\":";
    out += config_json.empty() ? std::string("{}") : config_json;
    out += ",\"config_hash\":\"";
    out += buf;
    out += "\",\"seed\":" + std::to_string(seed);
    out += ",\"version\":\"" + json_escape(version) + "\"}";
    return out;
}

std::string Manifest::comment_line() const { return "# manifest " + to_json(); }

CsvWriter::CsvWriter(const std::string& path, const Manifest& manifest,
                     const std::vector<std::string>& header)
    : path_(path) {
    buffer_ = manifest.comment_line();
    buffer_ += '\n';
    row(header);
}

namespace {

std::string csv_quote(const std::string& field) {
    bool needs = field.find_first_of(",\"\n") != std::string::npos;
    if (!needs) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

} // namespace

void CsvWriter::row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += csv_quote(fields[i]);
    }
    buffer_ += '\n';
}

std::string CsvWriter::format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

CsvWriter::~CsvWriter() { flush_on_close(); }

void CsvWriter::flush_on_close() {
    if (path_.empty()) return;
    if (path_ == "-") {
        std::fwrite(buffer_.data(), 1, buffer_.size(), stdout);
    } else {
        std::ofstream out(path_, std::ios::binary);
        out.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
    }
    path_.clear();
}

namespace {

constexpr char kForestMagic[8] = {'C', 'R', 'F', 'F', 'O', 'R', '1', '\n'};
constexpr char kPathMagic[8] = {'C', 'R', 'F', 'P', 'T', 'H', '1', '\n'};

void write_u64(std::string& buf, std::uint64_t v) {
    buf.append(reinterpret_cast<const char*>(&v), 8);
}
void write_f64(std::string& buf, double v) { buf.append(reinterpret_cast<const char*>(&v), 8); }
std::uint64_t read_u64(std::ifstream& in) {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), 8);
    return v;
}

void write_blob(const std::string& path, const char magic[8], const std::string& manifest_json,
                const std::string& payload) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open for writing: " + path);
    out.write(magic, 8);
    std::uint64_t mlen = manifest_json.size();
    out.write(reinterpret_cast<const char*>(&mlen), 8);
    out.write(manifest_json.data(), static_cast<std::streamsize>(manifest_json.size()));
    std::uint64_t plen = payload.size();
    std::uint64_t checksum = fnv1a64_bytes(payload.data(), payload.size());
    out.write(reinterpret_cast<const char*>(&plen), 8);
    out.write(reinterpret_cast<const char*>(&checksum), 8);
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
}

std::string read_blob(const std::string& path, const char magic[8], std::string* manifest_json) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open for reading: " + path);
    char got[8];
    in.read(got, 8);
    if (!in || std::memcmp(got, magic, 8) != 0) throw DomainError("bad magic in " + path);
    std::uint64_t mlen = read_u64(in);
    if (mlen > (1ULL << 24)) throw DomainError("implausible manifest length in " + path);
    std::string mani(mlen, '\0');
    in.read(mani.data(), static_cast<std::streamsize>(mlen));
    std::uint64_t plen = read_u64(in);
    std::uint64_t checksum = read_u64(in);
    std::string payload(plen, '\0');
    in.read(payload.data(), static_cast<std::streamsize>(plen));
    if (!in) throw DomainError("truncated file: " + path);
    if (fnv1a64_bytes(payload.data(), payload.size()) != checksum)
        throw DomainError("checksum mismatch in " + path);
    if (manifest_json) *manifest_json = mani;
    return payload;
}

} // namespace

void write_forest_file(const std::string& path, const std::vector<Forest>& forests,
                       const Manifest& manifest) {
    std::string payload;
    write_u64(payload, forests.size());
    for (const Forest& f : forests) {
        write_u64(payload, static_cast<std::uint64_t>(f.n_vertices));
        write_u64(payload, f.edges.size());
        // Delta-encode the canonical (sorted) slot sequence.
        std::vector<std::int64_t> key = canonical_edge_key(f);
        std::int64_t prev = 0;
        for (std::int64_t s : key) {
            write_u64(payload, static_cast<std::uint64_t>(s - prev));
            prev = s;
        }
    }
    write_blob(path, kForestMagic, manifest.to_json(), payload);
}

std::vector<Forest> read_forest_file(const std::string& path, Manifest* manifest_out) {
    std::string mani;
    std::string payload = read_blob(path, kForestMagic, &mani);
    if (manifest_out) manifest_out->config_json = mani;
    const char* ptr = payload.data();
    const char* end = ptr + payload.size();
    auto take_u64 = [&]() {
        if (ptr + 8 > end) throw DomainError("truncated payload in " + path);
        std::uint64_t v;
        std::memcpy(&v, ptr, 8);
        ptr += 8;
        return v;
    };
    std::uint64_t count = take_u64();
    std::vector<Forest> out;
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        Forest f;
        f.n_vertices = static_cast<std::int64_t>(take_u64());
        std::uint64_t ne = take_u64();
        std::int64_t prev = 0;
        for (std::uint64_t e = 0; e < ne; ++e) {
            prev += static_cast<std::int64_t>(take_u64());
            std::int64_t a = prev / f.n_vertices;
            std::int64_t b = prev % f.n_vertices;
            f.edges.emplace_back(static_cast<std::int32_t>(a), static_cast<std::int32_t>(b));
        }
        out.push_back(std::move(f));
    }
    return out;
}

void write_path_file(const std::string& path, const std::vector<std::vector<double>>& paths,
                     double lambda, double dt, const Manifest& manifest) {
    std::string payload;
    write_f64(payload, lambda);
    write_f64(payload, dt);
    write_u64(payload, paths.size());
    for (const auto& p : paths) {
        write_u64(payload, p.size());
        for (double v : p) write_f64(payload, v);
    }
    write_blob(path, kPathMagic, manifest.to_json(), payload);
}

std::vector<std::vector<double>> read_path_file(const std::string& path, double* lambda_out,
                                                double* dt_out, Manifest* manifest_out) {
    std::string mani;
    std::string payload = read_blob(path, kPathMagic, &mani);
    if (manifest_out) manifest_out->config_json = mani;
    const char* ptr = payload.data();
    const char* end = ptr + payload.size();
    auto need = [&](std::size_t n) {
        if (ptr + n > end) throw DomainError("truncated payload in " + path);
    };
    need(24);
    double lambda, dt;
    std::uint64_t count;
    std::memcpy(&lambda, ptr, 8);
    std::memcpy(&dt, ptr + 8, 8);
    std::memcpy(&count, ptr + 16, 8);
    ptr += 24;
    if (lambda_out) *lambda_out = lambda;
    if (dt_out) *dt_out = dt;
    std::vector<std::vector<double>> out;
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        need(8);
        std::uint64_t len;
        std::memcpy(&len, ptr, 8);
        ptr += 8;
        need(len * 8);
        std::vector<double> p(len);
        std::memcpy(p.data(), ptr, len * 8);
        ptr += len * 8;
        out.push_back(std::move(p));
    }
    return out;
}

void write_edge_list(const std::string& path, const std::vector<Forest>& forests,
                     const Manifest& manifest) {
    std::string buf = manifest.comment_line();
    buf += '\n';
    for (const Forest& f : forests) {
        buf += "# n " + std::to_string(f.n_vertices) + " edges " +
               std::to_string(f.edges.size()) + "\n";
        for (const Edge& e : f.edges) {
            buf += std::to_string(std::min(e.first, e.second));
            buf += ' ';
            buf += std::to_string(std::max(e.first, e.second));
            buf += '\n';
        }
    }
    if (path == "-") {
        std::fwrite(buf.data(), 1, buf.size(), stdout);
    } else {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DomainError("cannot open for writing: " + path);
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
}

} // namespace crf
