#include "invlab/rng.hpp"

#include "invlab/common.hpp"

namespace invlab {

std::vector<double> halton_point(std::uint64_t index, int dim) {
    static const unsigned kPrimes[10] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
    require(dim >= 1 && dim <= 10, "halton_point: dim must be 1..10");
    std::vector<double> x(static_cast<size_t>(dim));
    for (int d = 0; d < dim; ++d) x[static_cast<size_t>(d)] = radical_inverse(index, kPrimes[d]);
    return x;
}

}  // namespace invlab
