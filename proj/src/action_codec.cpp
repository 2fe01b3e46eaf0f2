#include "etk/action_codec.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace etk {

bool ActionVector::finite() const {
    for (double v : to_array()) {
        if (!std::isfinite(v)) {
            return false;
        }
    }
    return true;
}

BinningSpec BinningSpec::defaults() {
    BinningSpec spec;
    spec.bins = 256;
    for (int d = 0; d < 3; ++d) {
        spec.ranges[d] = {-0.05, 0.05};
    }
    for (int d = 3; d < 6; ++d) {
        spec.ranges[d] = {-0.25, 0.25};
    }
    spec.ranges[6] = {0.0, 1.0};
    return spec;
}

void BinningSpec::check() const {
    if (bins < 2) {
        throw InvalidBinningSpec("bin count must be >= 2, got " + std::to_string(bins));
    }
    for (int d = 0; d < kDofPerRobot; ++d) {
        if (!(ranges[d].lo < ranges[d].hi)) {
            throw InvalidBinningSpec(std::string(kDimensionNames[d]) + ": lo must be < hi");
        }
    }
}

TokenSeq tokenize(const ActionVector& action, const BinningSpec& spec) {
    spec.check();
    if (!action.finite()) {
        throw NonFiniteAction("action has a NaN or Inf component");
    }
    TokenSeq seq;
    seq.embodiments = 1;
    seq.tokens.reserve(kDofPerRobot);
    const auto values = action.to_array();
    for (int d = 0; d < kDofPerRobot; ++d) {
        const auto [lo, hi] = spec.ranges[d];
        const double v = std::clamp(values[d], lo, hi);
        int id = static_cast<int>(std::floor((v - lo) / spec.bin_width(d)));
        id = std::clamp(id, 0, spec.bins - 1); // v == hi lands in the last bin
        seq.tokens.push_back(id);
    }
    return seq;
}

std::vector<ActionVector> detokenize(const TokenSeq& seq, const BinningSpec& spec) {
    spec.check();
    if (seq.embodiments < 1 ||
        seq.tokens.size() != static_cast<std::size_t>(seq.embodiments) * kDofPerRobot) {
        throw TokenOutOfRange("token count " + std::to_string(seq.tokens.size()) +
                              " does not match " + std::to_string(seq.embodiments) +
                              " embodiments");
    }
    std::vector<ActionVector> actions;
    actions.reserve(seq.embodiments);
    for (int r = 0; r < seq.embodiments; ++r) {
        std::array<double, kDofPerRobot> values{};
        for (int d = 0; d < kDofPerRobot; ++d) {
            const int id = seq.tokens[static_cast<std::size_t>(r) * kDofPerRobot + d];
            if (id < 0 || id >= spec.bins) {
                throw TokenOutOfRange("token id " + std::to_string(id) + " outside [0, " +
                                      std::to_string(spec.bins - 1) + "]");
            }
            const auto [lo, hi] = spec.ranges[d];
            (void)hi;
            values[d] = lo + (id + 0.5) * spec.bin_width(d);
        }
        actions.push_back(ActionVector::from_array(values));
    }
    return actions;
}

TokenSeq concat_embodiments(const std::vector<TokenSeq>& parts) {
    if (parts.empty()) {
        throw EmptyInput("cannot concatenate zero token sequences");
    }
    TokenSeq out;
    out.embodiments = 0;
    for (const TokenSeq& part : parts) {
        if (part.embodiments != 1 ||
            part.tokens.size() != static_cast<std::size_t>(kDofPerRobot)) {
            throw TokenOutOfRange("concat expects single-robot sequences of 7 tokens");
        }
        out.tokens.insert(out.tokens.end(), part.tokens.begin(), part.tokens.end());
        out.embodiments += 1;
    }
    return out;
}

std::optional<WrongTokenCount> validate_length(std::span<const int> tokens,
                                               int expected_embodiments,
                                               int bins) {
    const std::size_t expected =
        static_cast<std::size_t>(expected_embodiments) * kDofPerRobot;
    if (tokens.size() != expected) {
        return WrongTokenCount{tokens.size(), expected, std::nullopt};
    }
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i] < 0 || tokens[i] >= bins) {
            return WrongTokenCount{tokens.size(), expected, i};
        }
    }
    return std::nullopt;
}

std::string format_binning(const BinningSpec& spec) {
    std::ostringstream out;
    out.precision(17);
    out << "# etk binning config: name = lo,hi,bins\n";
    for (int d = 0; d < kDofPerRobot; ++d) {
        out << kDimensionNames[d] << " = " << spec.ranges[d].lo << ',' << spec.ranges[d].hi
            << ',' << spec.bins << '\n';
    }
    return out.str();
}

BinningSpec parse_binning(std::string_view text) {
    BinningSpec spec;
    std::array<bool, kDofPerRobot> seen{};
    std::optional<int> bins;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidBinningSpec("line " + std::to_string(line_no) + ": expected name = lo,hi,bins");
        }
        std::string name = line.substr(0, eq);
        name.erase(0, name.find_first_not_of(" \t"));
        name.erase(name.find_last_not_of(" \t") + 1);
        int dim = -1;
        for (int d = 0; d < kDofPerRobot; ++d) {
            if (name == kDimensionNames[d]) {
                dim = d;
            }
        }
        if (dim < 0) {
            throw InvalidBinningSpec("line " + std::to_string(line_no) + ": unknown dimension '" + name + "'");
        }
        double lo = 0.0;
        double hi = 0.0;
        int line_bins = 0;
        char c1 = 0;
        char c2 = 0;
        std::istringstream value(line.substr(eq + 1));
        if (!(value >> lo >> c1 >> hi >> c2 >> line_bins) || c1 != ',' || c2 != ',') {
            throw InvalidBinningSpec("line " + std::to_string(line_no) + ": expected lo,hi,bins");
        }
        if (bins && *bins != line_bins) {
            throw InvalidBinningSpec("line " + std::to_string(line_no) +
                                     ": bin count differs between dimensions");
        }
        bins = line_bins;
        spec.ranges[dim] = {lo, hi};
        seen[dim] = true;
    }
    for (int d = 0; d < kDofPerRobot; ++d) {
        if (!seen[d]) {
            throw InvalidBinningSpec(std::string("missing dimension '") +
                                     std::string(kDimensionNames[d]) + "'");
        }
    }
    spec.bins = *bins;
    spec.check();
    return spec;
}

BinningSpec load_binning(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open binning config " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_binning(buf.str());
}

void save_binning(const BinningSpec& spec, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write binning config " + path.string());
    }
    out << format_binning(spec);
}

} // namespace etk
