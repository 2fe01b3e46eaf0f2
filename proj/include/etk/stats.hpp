#pragma once

#include <cstddef>
#include <span>

namespace etk {

struct ChiSquareResult {
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 1.0;
    std::size_t draws = 0;
};

// Pearson chi-square test of the observed counts against a uniform
// distribution over the buckets. p_value is the upper tail probability.
ChiSquareResult chi_square_uniform(std::span<const std::size_t> counts);

// Upper tail of the chi-square distribution with `dof` degrees of freedom.
double chi_square_upper_tail(double statistic, std::size_t dof);

} // namespace etk
