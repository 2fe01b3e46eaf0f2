#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "etk/errors.hpp"

namespace etk {

inline constexpr int kDofPerRobot = 7;

// One robot's continuous control command for a single step:
// end-effector translation delta [m], orientation delta [rad], and a
// gripper command in [0, 1] (0 = closed, 1 = open).
struct ActionVector {
    double dx = 0.0;
    double dy = 0.0;
    double dz = 0.0;
    double droll = 0.0;
    double dpitch = 0.0;
    double dyaw = 0.0;
    double gripper = 1.0;

    std::array<double, kDofPerRobot> to_array() const {
        return {dx, dy, dz, droll, dpitch, dyaw, gripper};
    }
    static ActionVector from_array(const std::array<double, kDofPerRobot>& a) {
        return {a[0], a[1], a[2], a[3], a[4], a[5], a[6]};
    }
    bool finite() const;
};

struct DimensionRange {
    double lo = -1.0;
    double hi = 1.0;
};

inline constexpr std::array<std::string_view, kDofPerRobot> kDimensionNames = {
    "dx", "dy", "dz", "droll", "dpitch", "dyaw", "gripper"};

// Uniform per-dimension binning. One bin count shared by all dimensions.
struct BinningSpec {
    std::array<DimensionRange, kDofPerRobot> ranges;
    int bins = 256;

    // Plausible per-step deltas: +-0.05 m translation, +-0.25 rad rotation,
    // gripper on [0, 1].
    static BinningSpec defaults();

    double bin_width(int dim) const {
        return (ranges[dim].hi - ranges[dim].lo) / static_cast<double>(bins);
    }
    void check() const; // throws InvalidBinningSpec
};

// Discrete action tokens for `embodiments` robots, 7 tokens per robot in
// robot order.
struct TokenSeq {
    std::vector<int> tokens;
    int embodiments = 1;

    bool operator==(const TokenSeq&) const = default;
};

class NonFiniteAction : public Error {
public:
    using Error::Error;
};
class TokenOutOfRange : public Error {
public:
    using Error::Error;
};
class EmptyInput : public Error {
public:
    using Error::Error;
};
class InvalidBinningSpec : public Error {
public:
    using Error::Error;
};

// Discretize one robot's action. Out-of-range finite values clamp to the
// first/last bin; hi itself maps to bins-1.
TokenSeq tokenize(const ActionVector& action, const BinningSpec& spec);

// Map token ids back to bin centers, one ActionVector per embodiment.
std::vector<ActionVector> detokenize(const TokenSeq& seq, const BinningSpec& spec);

// Concatenate single-robot token sequences in robot order.
TokenSeq concat_embodiments(const std::vector<TokenSeq>& parts);

// Returned by validate_length when the raw token list breaks the 7*N
// contract (or carries an out-of-range id).
struct WrongTokenCount {
    std::size_t got = 0;
    std::size_t expected = 0;
    std::optional<std::size_t> bad_id_index; // set when an id is out of range
};

// nullopt means the raw list is a valid token sequence for N robots.
std::optional<WrongTokenCount> validate_length(std::span<const int> tokens,
                                               int expected_embodiments,
                                               int bins = 256);

// Plain-text config io: `name = lo,hi,bins` per dimension, `#` comments.
BinningSpec load_binning(const std::filesystem::path& path);
void save_binning(const BinningSpec& spec, const std::filesystem::path& path);
std::string format_binning(const BinningSpec& spec);
BinningSpec parse_binning(std::string_view text);

} // namespace etk
