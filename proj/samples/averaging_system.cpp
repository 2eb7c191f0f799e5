// Prints the averaging-system orbit Y_0, Y_1, ... of pi(N) until it first
// becomes constant, alongside the height difference that drives each step.
//
//   averaging_system [p] [N]

#include <cstdlib>
#include <iostream>

#include "kspm/kspm.hpp"

int main(int argc, char** argv)
{
    const kspm::Count p = argc > 1 ? std::atoll(argv[1]) : 4;
    const kspm::Count n = argc > 2 ? std::atoll(argv[2]) : 2000;
    const kspm::Params params(p);

    const auto run = kspm::stabilize_column(n, params);
    const kspm::ShotVector shots(n, params, run.shots);
    const auto traj = kspm::avg_trajectory(shots, run.config);
    const auto first = kspm::first_constant_index(traj);

    for (std::size_t i = 0; i < traj.size(); ++i) {
        std::cout << "Y_" << i << " = (" << kspm::io::join(traj[i].entries, ',') << ")  b_" << i << " = "
                  << run.config[i] << '\n';
        if (first && i == *first) {
            std::cout << "constant from n = " << i << "; waves from " << kspm::emergence_index(run.config)
                      << '\n';
            break;
        }
    }
}
