#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "etk/action_codec.hpp"
#include "etk/errors.hpp"

namespace etk {

// One trajectory step: an opaque observation reference, the language
// instruction, and the target action tokens.
struct Sample {
    std::string observation_ref;
    std::string instruction;
    TokenSeq tokens;
    std::string embodiment_tag;

    bool operator==(const Sample&) const = default;
};

struct Manifest {
    std::string name;
    std::int64_t seed = 0;
    std::string source;
    int bins = 256;

    bool operator==(const Manifest&) const = default;
};

struct Dataset {
    Manifest manifest;
    std::vector<Sample> samples;

    bool operator==(const Dataset&) const = default;
};

// A slice of a dataset; `indices` are the positions of `samples` in the
// source dataset (kept for SCP provenance).
struct Batch {
    std::vector<std::size_t> indices;
    std::vector<Sample> samples;
};

class ParseError : public Error {
public:
    ParseError(int line, const std::string& reason)
        : Error("line " + std::to_string(line) + ": " + reason), line(line), reason(reason) {}
    int line;
    std::string reason;
};

class InvariantViolation : public Error {
public:
    InvariantViolation(std::size_t sample_index, const std::string& reason)
        : Error("sample " + std::to_string(sample_index) + ": " + reason),
          sample_index(sample_index),
          reason(reason) {}
    std::size_t sample_index;
    std::string reason;
};

// JSONL, one record per line. Line 1 is the manifest, lines 2+ are samples.
// Unknown fields are rejected.
Dataset load_dataset(const std::filesystem::path& path);
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);
std::string format_dataset(const Dataset& dataset);
Dataset parse_dataset(std::string_view text);

// Seeded shuffle then partition into ceil(|D|/n) batches; the short tail
// batch is kept. Identical (dataset, n, seed) give identical batches.
std::vector<Batch> make_batches(const Dataset& dataset, std::size_t n, std::uint64_t seed);

struct DimTokenStats {
    std::size_t count = 0;
    double mean = 0.0;
    int min = 0;
    int max = 0;
};

struct DatasetStats {
    std::size_t sample_count = 0;
    std::map<int, std::size_t> embodiment_histogram;        // N -> samples
    std::map<std::size_t, std::size_t> length_histogram;    // token count -> samples
    std::array<DimTokenStats, kDofPerRobot> dim_token_stats; // aggregated over robots
};

DatasetStats compute_stats(const Dataset& dataset);

// Synthetic unimanual corpus used by tests, the toy model, and the bundled
// experiments; stands in for large-scale pretraining data.
Dataset synth_unimanual_dataset(std::size_t count, std::uint64_t seed, int bins = 256);

} // namespace etk
