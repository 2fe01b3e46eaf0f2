#include "etk/stats.hpp"

#include <unsupported/Eigen/SpecialFunctions>

namespace etk {

double chi_square_upper_tail(double statistic, std::size_t dof) {
    if (dof == 0 || statistic <= 0.0) {
        return 1.0;
    }
    const double cdf =
        Eigen::numext::igamma(static_cast<double>(dof) / 2.0, statistic / 2.0);
    return 1.0 - cdf;
}

ChiSquareResult chi_square_uniform(std::span<const std::size_t> counts) {
    ChiSquareResult result;
    if (counts.size() < 2) {
        return result;
    }
    for (std::size_t c : counts) {
        result.draws += c;
    }
    if (result.draws == 0) {
        return result;
    }
    const double expected =
        static_cast<double>(result.draws) / static_cast<double>(counts.size());
    for (std::size_t c : counts) {
        const double diff = static_cast<double>(c) - expected;
        result.statistic += diff * diff / expected;
    }
    result.dof = counts.size() - 1;
    result.p_value = chi_square_upper_tail(result.statistic, result.dof);
    return result;
}

} // namespace etk
