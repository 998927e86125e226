// Minimal library usage: bound Psi for 11a2 at its real place and compare
// with sampled values.

#include <cstdio>

#include "archheight/archheight.hpp"

int main() {
    using namespace archheight;
    const auto input = parse_input("[0,-1,1,-7820,-263580]");
    const auto curve = CurveModel<double>::from_a_invariants(input.a_invariants);

    const auto result = compute_bound(curve, real_place, BoundConfig{});
    std::printf("variant   %s\n", std::string(to_string(result.variant_used)).c_str());
    for (std::size_t n = 0; n < result.c_seq.size(); ++n) {
        std::printf("c_%-2zu      %.12f\n", n + 1, result.c_seq[n]);
    }
    std::printf("bound     %.12f\n", result.bound);

    const double sampled = empirical_max_psi(curve, real_place, 10000, 12, 7);
    std::printf("sampled   %.12f\n", sampled);
    return sampled <= result.bound ? 0 : 1;
}
