#include "etk/scp.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "etk/rng.hpp"

namespace etk {

namespace {

using nlohmann::json;

void check_config(const ScpConfig& config) {
    if (config.target_embodiments < 2) {
        throw Error("target embodiments must be >= 2 (N = 1 is the identity)");
    }
}

} // namespace

CrossSampledBatch cross_sample_batch(const Batch& batch, const ScpConfig& config,
                                     std::mt19937_64& rng) {
    check_config(config);
    const std::size_t n = batch.samples.size();
    const int robots = config.target_embodiments;
    if (n < static_cast<std::size_t>(robots)) {
        throw BatchTooSmall(n, robots);
    }
    CrossSampledBatch out;
    out.batch.indices = batch.indices;
    out.batch.samples.reserve(n);
    out.provenance.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Draw N-1 distinct partners j != i, uniformly without replacement.
        std::vector<std::size_t> candidates;
        candidates.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                candidates.push_back(j);
            }
        }
        ProvenanceRecord record;
        record.source_index = batch.indices[i];
        std::vector<TokenSeq> parts;
        parts.push_back(batch.samples[i].tokens);
        for (int k = 0; k < robots - 1; ++k) {
            const std::size_t pick = uniform_below(rng, candidates.size());
            const std::size_t j = candidates[pick];
            candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick));
            record.partners.push_back(batch.indices[j]);
            parts.push_back(batch.samples[j].tokens);
        }
        Sample synthetic = batch.samples[i];
        synthetic.tokens = concat_embodiments(parts);
        out.batch.samples.push_back(std::move(synthetic));
        out.provenance.push_back(std::move(record));
    }
    return out;
}

ScpOutput generate_scp_dataset(const Dataset& unimanual, const ScpConfig& config,
                               std::size_t batch_size, const std::string& input_label) {
    check_config(config);
    if (batch_size < static_cast<std::size_t>(config.target_embodiments)) {
        throw BatchTooSmall(batch_size, config.target_embodiments);
    }
    for (std::size_t i = 0; i < unimanual.samples.size(); ++i) {
        if (unimanual.samples[i].tokens.embodiments != 1) {
            throw NotUnimanual(i);
        }
    }
    ScpOutput output;
    const auto batches = make_batches(unimanual, batch_size, config.seed);
    for (std::size_t b = 0; b < batches.size(); ++b) {
        const Batch& batch = batches[b];
        if (batch.samples.size() < static_cast<std::size_t>(config.target_embodiments)) {
            output.dropped_samples += batch.samples.size();
            continue;
        }
        // Per-batch substream keyed by (seed, batch index): output does not
        // depend on scheduling order.
        auto rng = make_rng(substream_seed(config.seed, b));
        auto crossed = cross_sample_batch(batch, config, rng);
        for (auto& sample : crossed.batch.samples) {
            output.dataset.samples.push_back(std::move(sample));
        }
        for (auto& record : crossed.provenance) {
            output.provenance.push_back(std::move(record));
        }
    }
    output.dataset.manifest.name = unimanual.manifest.name + "-scp";
    output.dataset.manifest.seed = static_cast<std::int64_t>(config.seed);
    output.dataset.manifest.bins = unimanual.manifest.bins;
    output.dataset.manifest.source = format_scp_source(
        {input_label.empty() ? unimanual.manifest.name : input_label,
         config.target_embodiments, batch_size, config.seed, output.dropped_samples});
    return output;
}

std::filesystem::path provenance_path(const std::filesystem::path& dataset_path) {
    std::filesystem::path p = dataset_path;
    p += ".prov.jsonl";
    return p;
}

void save_provenance(const std::vector<ProvenanceRecord>& provenance,
                     const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write provenance " + path.string());
    }
    for (const ProvenanceRecord& record : provenance) {
        json line = {{"i", record.source_index}, {"partners", record.partners}};
        out << line.dump() << '\n';
    }
}

std::vector<ProvenanceRecord> load_provenance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw MissingProvenance("missing provenance sidecar " + path.string());
    }
    std::vector<ProvenanceRecord> provenance;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            const json record = json::parse(line);
            ProvenanceRecord out;
            out.source_index = record.at("i").get<std::size_t>();
            out.partners = record.at("partners").get<std::vector<std::size_t>>();
            provenance.push_back(std::move(out));
        } catch (const json::exception& e) {
            throw ParseError(line_no, std::string("provenance: ") + e.what());
        }
    }
    return provenance;
}

void save_scp_output(const ScpOutput& output, const std::filesystem::path& path) {
    save_dataset(output.dataset, path);
    save_provenance(output.provenance, provenance_path(path));
}

std::string format_scp_source(const ScpSourceInfo& info) {
    std::ostringstream out;
    out << "scp(in=" << info.input_path << ", robots=" << info.robots
        << ", batch=" << info.batch_size << ", seed=" << info.seed
        << ", dropped=" << info.dropped << ")";
    return out.str();
}

ScpSourceInfo parse_scp_source(const std::string& source) {
    ScpSourceInfo info;
    const std::string prefix = "scp(in=";
    if (source.rfind(prefix, 0) != 0 || source.back() != ')') {
        throw Error("manifest source is not SCP output: " + source);
    }
    const auto robots_at = source.rfind(", robots=");
    if (robots_at == std::string::npos) {
        throw Error("malformed SCP source string: " + source);
    }
    info.input_path = source.substr(prefix.size(), robots_at - prefix.size());
    std::istringstream rest(source.substr(robots_at));
    char c = 0;
    auto expect = [&](const std::string& key) {
        std::string word;
        rest >> c; // ','
        rest >> word;
        if (word.rfind(key + "=", 0) != 0) {
            throw Error("malformed SCP source string near '" + word + "'");
        }
        return word.substr(key.size() + 1);
    };
    auto strip = [](std::string s) {
        while (!s.empty() && (s.back() == ',' || s.back() == ')')) {
            s.pop_back();
        }
        return s;
    };
    info.robots = std::stoi(strip(expect("robots")));
    info.batch_size = std::stoull(strip(expect("batch")));
    info.seed = std::stoull(strip(expect("seed")));
    info.dropped = std::stoull(strip(expect("dropped")));
    return info;
}

ScpAuditReport audit_scp(const Dataset& output, const std::vector<ProvenanceRecord>& provenance,
                         const Dataset& source, std::size_t batch_size) {
    if (provenance.size() != output.samples.size()) {
        throw MissingProvenance("provenance has " + std::to_string(provenance.size()) +
                                " records for " + std::to_string(output.samples.size()) +
                                " samples");
    }
    ScpAuditReport report;
    report.sample_count = output.samples.size();
    if (output.samples.empty()) {
        return report;
    }
    const int robots = output.samples.front().tokens.embodiments;
    std::size_t correct_length = 0;
    std::size_t own_lead = 0;

    // Output order is batch order, so line k belongs to batch k / batch_size
    // and the batch's membership is recoverable from the provenance records.
    const std::size_t batch_count = (output.samples.size() + batch_size - 1) / batch_size;
    // Rank of each partner among its batch's candidates; uniform partner
    // choice means uniform ranks. Only full batches feed the statistic so all
    // draws share one support.
    std::vector<std::size_t> rank_counts(batch_size > 1 ? batch_size - 1 : 0, 0);

    for (std::size_t b = 0; b < batch_count; ++b) {
        const std::size_t start = b * batch_size;
        const std::size_t stop = std::min(output.samples.size(), start + batch_size);
        std::vector<std::size_t> members;
        for (std::size_t k = start; k < stop; ++k) {
            members.push_back(provenance[k].source_index);
        }
        std::vector<std::size_t> sorted_members = members;
        std::sort(sorted_members.begin(), sorted_members.end());
        for (std::size_t k = start; k < stop; ++k) {
            const Sample& sample = output.samples[k];
            const ProvenanceRecord& record = provenance[k];
            bool ok = true;

            if (!validate_length(sample.tokens.tokens, sample.tokens.embodiments,
                                 output.manifest.bins) &&
                sample.tokens.embodiments == robots) {
                ++correct_length;
            } else {
                ok = false;
            }

            if (record.source_index < source.samples.size()) {
                const auto& own = source.samples[record.source_index].tokens.tokens;
                if (sample.tokens.tokens.size() >= own.size() &&
                    std::equal(own.begin(), own.end(), sample.tokens.tokens.begin())) {
                    ++own_lead;
                } else {
                    ok = false;
                }
            } else {
                ok = false;
            }

            std::vector<std::size_t> seen;
            for (std::size_t partner : record.partners) {
                if (partner == record.source_index) {
                    ++report.self_partner_count;
                    ok = false;
                }
                const bool in_batch =
                    std::binary_search(sorted_members.begin(), sorted_members.end(), partner);
                const bool duplicate = std::find(seen.begin(), seen.end(), partner) != seen.end();
                if (!in_batch || duplicate) {
                    ++report.partner_violations;
                    ok = false;
                }
                seen.push_back(partner);

                if (stop - start == batch_size && !duplicate && in_batch &&
                    partner != record.source_index) {
                    // Candidates in batch order, self removed; the partner's
                    // position in that list is its rank.
                    std::size_t rank = 0;
                    for (std::size_t m = 0; m < members.size(); ++m) {
                        if (members[m] == record.source_index) {
                            continue;
                        }
                        if (members[m] == partner) {
                            break;
                        }
                        ++rank;
                    }
                    if (rank < rank_counts.size()) {
                        rank_counts[rank] += 1;
                    }
                }
            }
            if (!ok) {
                report.offending_samples.push_back(k);
            }
        }
    }
    report.fraction_correct_length =
        static_cast<double>(correct_length) / static_cast<double>(report.sample_count);
    report.fraction_own_tokens_lead =
        static_cast<double>(own_lead) / static_cast<double>(report.sample_count);
    report.uniformity = chi_square_uniform(rank_counts);
    return report;
}

ScpAuditReport audit_scp(const std::filesystem::path& output_path) {
    const Dataset output = load_dataset(output_path);
    const auto provenance = load_provenance(provenance_path(output_path));
    const ScpSourceInfo info = parse_scp_source(output.manifest.source);
    std::filesystem::path source_path = info.input_path;
    if (source_path.is_relative()) {
        const auto beside_output = output_path.parent_path() / source_path;
        if (std::filesystem::exists(beside_output)) {
            source_path = beside_output;
        }
    }
    const Dataset source = load_dataset(source_path);
    return audit_scp(output, provenance, source, info.batch_size);
}

} // namespace etk
