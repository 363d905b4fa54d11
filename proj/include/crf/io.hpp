#ifndef CRITFOREST_IO_HPP
#define CRITFOREST_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "crf/graph.hpp"

namespace crf {

inline constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a64_bytes(const void* data, std::size_t n);

/// Reproducibility record embedded in every output file: the hash of the
/// resolved configuration, the seed, and the code version.
struct Manifest {
    std::string config_json; // canonical (sorted-key) resolved config
    std::uint64_t seed = 0;
    std::string version = kVersion;

    std::string to_json() const;      // stable key order
    std::string comment_line() const; // "# manifest ..." for CSV headers
};

/// RFC-4180-style CSV writer: quotes fields containing separators/quotes,
/// writes the manifest as a leading comment line, then the header.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const Manifest& manifest,
              const std::vector<std::string>& header);
    void row(const std::vector<std::string>& fields);
    static std::string format_double(double x); // shortest round-trip form

private:
    std::string path_;
    std::string buffer_;
    void flush_on_close();

public:
    ~CsvWriter();
};

/// Compact forest container: magic, version, vertex count, edge count,
/// delta-encoded edges, trailing checksum. Round-trips exactly.
void write_forest_file(const std::string& path, const std::vector<Forest>& forests,
                       const Manifest& manifest);
std::vector<Forest> read_forest_file(const std::string& path, Manifest* manifest_out = nullptr);

/// Raw diffusion path container: header (lambda, dt, horizon, count) plus a
/// float64 array per path, with checksum.
void write_path_file(const std::string& path, const std::vector<std::vector<double>>& paths,
                     double lambda, double dt, const Manifest& manifest);
std::vector<std::vector<double>> read_path_file(const std::string& path, double* lambda_out,
                                                double* dt_out, Manifest* manifest_out = nullptr);

/// Line-oriented edge list: one "u v" pair per line, vertices 0-based, with a
/// "# n <N>" header per forest and the manifest as leading comments.
void write_edge_list(const std::string& path, const std::vector<Forest>& forests,
                     const Manifest& manifest);

} // namespace crf

#endif
