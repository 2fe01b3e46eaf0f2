#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "etk/dataset.hpp"
#include "etk/errors.hpp"
#include "etk/stats.hpp"

namespace etk {

// Synthetic continued-pretraining generator: within each batch, every sample
// gets N-1 distinct partner samples and their tokens appended, producing
// 7*N-token targets from unimanual data.
struct ScpConfig {
    enum class PartnerPolicy { distinct_without_replacement };

    int target_embodiments = 2; // N; N == 1 is rejected
    std::uint64_t seed = 0;
    PartnerPolicy partner_policy = PartnerPolicy::distinct_without_replacement;
};

class BatchTooSmall : public Error {
public:
    BatchTooSmall(std::size_t n, int required)
        : Error("batch of " + std::to_string(n) + " samples cannot seat " +
                std::to_string(required) + " embodiments"),
          n(n),
          required(required) {}
    std::size_t n;
    int required;
};

class NotUnimanual : public Error {
public:
    explicit NotUnimanual(std::size_t sample_index)
        : Error("sample " + std::to_string(sample_index) + " is not unimanual"),
          sample_index(sample_index) {}
    std::size_t sample_index;
};

class MissingProvenance : public Error {
public:
    using Error::Error;
};

// Which source sample an output line came from and which partners were drawn
// for it; indices refer to the source dataset.
struct ProvenanceRecord {
    std::size_t source_index = 0;
    std::vector<std::size_t> partners;

    bool operator==(const ProvenanceRecord&) const = default;
};

struct CrossSampledBatch {
    Batch batch;
    std::vector<ProvenanceRecord> provenance;
};

CrossSampledBatch cross_sample_batch(const Batch& batch, const ScpConfig& config,
                                     std::mt19937_64& rng);

struct ScpOutput {
    Dataset dataset;
    std::vector<ProvenanceRecord> provenance;
    std::size_t dropped_samples = 0;
};

// `input_label` lands in the output manifest's source string (the audit
// resolves the source dataset from it); defaults to the input manifest name.
ScpOutput generate_scp_dataset(const Dataset& unimanual, const ScpConfig& config,
                               std::size_t batch_size, const std::string& input_label = "");

// Writes dataset to `path` and provenance to `path + ".prov.jsonl"`.
void save_scp_output(const ScpOutput& output, const std::filesystem::path& path);

std::filesystem::path provenance_path(const std::filesystem::path& dataset_path);
void save_provenance(const std::vector<ProvenanceRecord>& provenance,
                     const std::filesystem::path& path);
std::vector<ProvenanceRecord> load_provenance(const std::filesystem::path& path);

// Parameters the generator records in the output manifest's source string so
// the audit can rebuild batch structure without re-running the generator.
struct ScpSourceInfo {
    std::string input_path;
    int robots = 0;
    std::size_t batch_size = 0;
    std::uint64_t seed = 0;
    std::size_t dropped = 0;
};

std::string format_scp_source(const ScpSourceInfo& info);
ScpSourceInfo parse_scp_source(const std::string& source); // throws Error if not SCP output

struct ScpAuditReport {
    std::size_t sample_count = 0;
    double fraction_correct_length = 0.0;
    double fraction_own_tokens_lead = 0.0;
    std::size_t self_partner_count = 0;
    std::size_t partner_violations = 0; // partner outside batch or duplicated
    ChiSquareResult uniformity;
    std::vector<std::size_t> offending_samples;

    bool clean() const {
        return fraction_correct_length == 1.0 && fraction_own_tokens_lead == 1.0 &&
               self_partner_count == 0 && partner_violations == 0;
    }
};

// Recomputes every SCP invariant from the output, its provenance sidecar, and
// the source dataset; independent of the generator's own bookkeeping.
ScpAuditReport audit_scp(const Dataset& output, const std::vector<ProvenanceRecord>& provenance,
                         const Dataset& source, std::size_t batch_size);

// Convenience: resolves provenance sidecar and source dataset from the output
// file and its manifest. Relative source paths resolve against the output's
// directory first, then the working directory.
ScpAuditReport audit_scp(const std::filesystem::path& output_path);

} // namespace etk
