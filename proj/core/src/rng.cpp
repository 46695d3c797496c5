#include "proxnas/rng.hpp"

#include <cmath>

namespace proxnas {

double Rng::uniform(double lo, double hi) {
    if (!(lo < hi)) throw ContractViolation("uniform: requires lo < hi");
    double x = lo + next_double() * (hi - lo);
    // Rounding can land exactly on hi when hi - lo is large; keep [lo, hi).
    if (x >= hi) x = std::nextafter(hi, lo);
    return x;
}

std::vector<double> uniform_fill(Rng& rng, std::size_t count, double lo, double hi) {
    if (!(lo < hi)) throw ContractViolation("uniform_fill: requires lo < hi");
    std::vector<double> out(count);
    for (auto& x : out) x = rng.uniform(lo, hi);
    return out;
}

}  // namespace proxnas
