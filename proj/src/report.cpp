#include "repairforge/report.hpp"

namespace repairforge {

Rational gamma_star(int n, int k, int d, long alpha) {
    require(k > 0 && n > k, errc::value, "gamma_star: need n > k > 0");
    require(d >= k && d <= n - 1, errc::value, "gamma_star: helper count must satisfy k <= d <= n-1");
    return Rational(static_cast<long long>(d) * alpha, d - k + 1);
}

}  // namespace repairforge
