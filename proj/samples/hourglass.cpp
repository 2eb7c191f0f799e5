// Drops grains one at a time on column 0 and reports each avalanche, the
// density column, and where the wave pattern starts.
//
//   hourglass [p] [N]

#include <cstdlib>
#include <iostream>

#include "kspm/kspm.hpp"

int main(int argc, char** argv)
{
    const kspm::Count p = argc > 1 ? std::atoll(argv[1]) : 2;
    const kspm::Count n = argc > 2 ? std::atoll(argv[2]) : 25;

    const auto summary = kspm::incremental_scan(
        n, kspm::Params(p), [](std::uint64_t k, const kspm::Avalanche& a, const kspm::Configuration& c) {
            std::cout << "k=" << k << " fired=[" << kspm::io::join(a.fired) << "] l'="
                      << kspm::density_column(a).l_prime << " pi=(" << kspm::io::join(c.diffs(), ',')
                      << ") waves from " << kspm::emergence_index(c) << '\n';
        });
    std::cout << "L(" << p << "," << n << ") = " << summary.l_global << '\n';
}
