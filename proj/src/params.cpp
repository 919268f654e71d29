#include "fermirpa/params.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fermirpa/lattice.hpp"

namespace fermirpa {

int default_patch_count(std::int64_t N) {
    double c = std::cbrt(static_cast<double>(N));
    int M = 2 * static_cast<int>(std::llround(c / 2.0));
    return M < 2 ? 2 : M;
}

ModelParams closed_shell_params(double kF, double R, double delta, int M,
                                InteractionFourier vhat) {
    if (!(kF > 0.0)) throw std::invalid_argument("closed_shell_params: kF must be positive");
    if (!(R > 0.0)) throw std::invalid_argument("closed_shell_params: R must be positive");
    if (!(delta > 0.0) || !(delta < 1.0 / 6.0)) {
        std::ostringstream os;
        os << "closed_shell_params: delta = " << delta << " outside (0, 1/6)";
        throw std::invalid_argument(os.str());
    }

    ModelParams mp;
    mp.kF = kF;
    mp.R = R;
    mp.delta = delta;
    mp.N = static_cast<std::int64_t>(enumerate_fermi_ball(kF).size());
    double N = static_cast<double>(mp.N);
    mp.hbar = std::pow(N, -1.0 / 3.0);
    mp.kappa = kF * mp.hbar;
    mp.n_delta = std::pow(N, -delta);

    if (M == 0) M = default_patch_count(mp.N);
    if (M < 2 || M % 2 != 0) {
        std::ostringstream os;
        os << "closed_shell_params: M = " << M << " must be even and >= 2";
        throw std::invalid_argument(os.str());
    }
    mp.M = M;
    double lo = std::pow(N, 2.0 * delta);
    double hi = std::pow(N, 2.0 / 3.0 - 2.0 * delta);
    mp.M_in_window = (static_cast<double>(M) > lo && static_cast<double>(M) < hi);

    mp.vhat = std::move(vhat);
    return mp;
}

} // namespace fermirpa
