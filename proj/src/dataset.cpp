#include "etk/dataset.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "etk/rng.hpp"

namespace etk {

namespace {

using nlohmann::json;

void require_keys(const json& obj, std::initializer_list<const char*> keys, int line) {
    for (const char* key : keys) {
        if (!obj.contains(key)) {
            throw ParseError(line, std::string("missing field '") + key + "'");
        }
    }
    if (obj.size() != keys.size()) {
        for (const auto& [key, value] : obj.items()) {
            (void)value;
            bool known = false;
            for (const char* k : keys) {
                known = known || key == k;
            }
            if (!known) {
                throw ParseError(line, "unknown field '" + key + "'");
            }
        }
    }
}

Sample parse_sample_line(const json& record, int line) {
    if (!record.is_object()) {
        throw ParseError(line, "expected a JSON object");
    }
    require_keys(record, {"obs", "instr", "tokens", "n_robots", "tag"}, line);
    Sample sample;
    try {
        sample.observation_ref = record.at("obs").get<std::string>();
        sample.instruction = record.at("instr").get<std::string>();
        sample.tokens.tokens = record.at("tokens").get<std::vector<int>>();
        sample.tokens.embodiments = record.at("n_robots").get<int>();
        sample.embodiment_tag = record.at("tag").get<std::string>();
    } catch (const json::exception& e) {
        throw ParseError(line, e.what());
    }
    return sample;
}

void check_sample(const Sample& sample, int bins, std::size_t index) {
    if (sample.instruction.empty()) {
        throw InvariantViolation(index, "instruction is empty");
    }
    if (sample.tokens.embodiments < 1) {
        throw InvariantViolation(index, "n_robots must be >= 1");
    }
    const auto bad = validate_length(sample.tokens.tokens, sample.tokens.embodiments, bins);
    if (bad) {
        if (bad->bad_id_index) {
            throw InvariantViolation(index, "token id out of range at position " +
                                                std::to_string(*bad->bad_id_index));
        }
        throw InvariantViolation(index, "expected " + std::to_string(bad->expected) +
                                            " tokens, got " + std::to_string(bad->got));
    }
}

} // namespace

Dataset parse_dataset(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    Dataset dataset;
    int line_no = 0;
    bool have_manifest = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        json record;
        try {
            record = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(line_no, e.what());
        }
        if (!have_manifest) {
            if (!record.is_object() || !record.contains("manifest")) {
                throw ParseError(line_no, "first record must be the manifest");
            }
            require_keys(record, {"manifest"}, line_no);
            const json& m = record.at("manifest");
            require_keys(m, {"name", "seed", "source", "bins"}, line_no);
            try {
                dataset.manifest.name = m.at("name").get<std::string>();
                dataset.manifest.seed = m.at("seed").get<std::int64_t>();
                dataset.manifest.source = m.at("source").get<std::string>();
                dataset.manifest.bins = m.at("bins").get<int>();
            } catch (const json::exception& e) {
                throw ParseError(line_no, e.what());
            }
            have_manifest = true;
            continue;
        }
        Sample sample = parse_sample_line(record, line_no);
        check_sample(sample, dataset.manifest.bins, dataset.samples.size());
        dataset.samples.push_back(std::move(sample));
    }
    if (!have_manifest) {
        throw ParseError(1, "empty dataset: no manifest line");
    }
    if (dataset.samples.empty()) {
        throw ParseError(line_no, "dataset contains no samples");
    }
    return dataset;
}

Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open dataset " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_dataset(buf.str());
}

std::string format_dataset(const Dataset& dataset) {
    std::string out;
    json manifest;
    manifest["manifest"] = {{"name", dataset.manifest.name},
                            {"seed", dataset.manifest.seed},
                            {"source", dataset.manifest.source},
                            {"bins", dataset.manifest.bins}};
    out += manifest.dump();
    out += '\n';
    for (const Sample& sample : dataset.samples) {
        json record = {{"obs", sample.observation_ref},
                       {"instr", sample.instruction},
                       {"tokens", sample.tokens.tokens},
                       {"n_robots", sample.tokens.embodiments},
                       {"tag", sample.embodiment_tag}};
        out += record.dump();
        out += '\n';
    }
    return out;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write dataset " + path.string());
    }
    out << format_dataset(dataset);
    if (!out) {
        throw IoError("failed writing dataset " + path.string());
    }
}

std::vector<Batch> make_batches(const Dataset& dataset, std::size_t n, std::uint64_t seed) {
    if (n < 1) {
        throw Error("batch size must be >= 1");
    }
    auto rng = make_rng(seed);
    const auto order = shuffled_indices(dataset.samples.size(), rng);
    std::vector<Batch> batches;
    batches.reserve((order.size() + n - 1) / n);
    for (std::size_t start = 0; start < order.size(); start += n) {
        Batch batch;
        const std::size_t stop = std::min(order.size(), start + n);
        for (std::size_t k = start; k < stop; ++k) {
            batch.indices.push_back(order[k]);
            batch.samples.push_back(dataset.samples[order[k]]);
        }
        batches.push_back(std::move(batch));
    }
    return batches;
}

DatasetStats compute_stats(const Dataset& dataset) {
    DatasetStats stats;
    stats.sample_count = dataset.samples.size();
    std::array<long long, kDofPerRobot> sums{};
    for (const Sample& sample : dataset.samples) {
        stats.embodiment_histogram[sample.tokens.embodiments] += 1;
        stats.length_histogram[sample.tokens.tokens.size()] += 1;
        for (int r = 0; r < sample.tokens.embodiments; ++r) {
            for (int d = 0; d < kDofPerRobot; ++d) {
                const int tok = sample.tokens.tokens[static_cast<std::size_t>(r) * kDofPerRobot + d];
                DimTokenStats& ds = stats.dim_token_stats[d];
                if (ds.count == 0) {
                    ds.min = tok;
                    ds.max = tok;
                } else {
                    ds.min = std::min(ds.min, tok);
                    ds.max = std::max(ds.max, tok);
                }
                ds.count += 1;
                sums[d] += tok;
            }
        }
    }
    for (int d = 0; d < kDofPerRobot; ++d) {
        if (stats.dim_token_stats[d].count > 0) {
            stats.dim_token_stats[d].mean =
                static_cast<double>(sums[d]) / static_cast<double>(stats.dim_token_stats[d].count);
        }
    }
    return stats;
}

Dataset synth_unimanual_dataset(std::size_t count, std::uint64_t seed, int bins) {
    static constexpr const char* kInstructions[] = {
        "pick up the bread",         "place the banana in the bowl",
        "pick up the sponge",        "grasp the plate",
        "pull the string straight",  "pick up the pink column",
        "stack the blue column",     "place the roof wedge on top",
    };
    static constexpr const char* kTags[] = {"widowx", "ur5e", "franka"};
    auto rng = make_rng(substream_seed(seed, 0xda7a));
    Dataset dataset;
    dataset.manifest.name = "synth-unimanual";
    dataset.manifest.seed = static_cast<std::int64_t>(seed);
    dataset.manifest.source = "synthetic unimanual corpus";
    dataset.manifest.bins = bins;
    dataset.samples.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Sample sample;
        char obs[32];
        std::snprintf(obs, sizeof(obs), "obs-%06zu", i);
        sample.observation_ref = obs;
        sample.instruction = kInstructions[uniform_below(rng, std::size(kInstructions))];
        sample.embodiment_tag = kTags[uniform_below(rng, std::size(kTags))];
        sample.tokens.embodiments = 1;
        sample.tokens.tokens.reserve(kDofPerRobot);
        for (int d = 0; d < kDofPerRobot; ++d) {
            sample.tokens.tokens.push_back(
                static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(bins))));
        }
        dataset.samples.push_back(std::move(sample));
    }
    return dataset;
}

} // namespace etk
