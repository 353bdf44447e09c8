#include "moserlab/errors.hpp"
#include "moserlab/spaces_grid.hpp"

#include <cmath>
#include <sstream>

namespace moserlab::grid {

Rational tbar_lower_exact(int N) {
    if (N < 2) throw DomainError("N must be at least 2");
    const Rational n(N);
    return (2 * n * n + 2 * n - 2) / (n * n + 2 * n - 1);
}

double tbar_lower(int N) { return to_double(tbar_lower_exact(N)); }

ParamChain derive_params(int N, double tbar, double rbar_fraction) {
    const double lo = tbar_lower(N);
    if (!(tbar > lo && tbar < 2.0)) {
        std::ostringstream os;
        os << "tbar = " << tbar << " outside (" << lo << ", 2) for N = " << N;
        throw DomainError(os.str());
    }
    if (!(rbar_fraction > 0.0 && rbar_fraction < 1.0)) throw DomainError("rbar fraction must lie in (0, 1)");
    ParamChain p;
    p.N = N;
    p.tbar = tbar;
    p.r = (tbar * (N + 1) - 2.0) / (N - tbar);
    p.tstar = tbar * N / (N - tbar);
    p.rbar = 2.0 + rbar_fraction * (p.r - 2.0);
    return p;
}

ExactChain exact_chain(int N, const Rational& tbar) {
    if (N < 2) throw DomainError("N must be at least 2");
    ExactChain c;
    c.tbar = tbar;
    if (tbar == N) throw DomainError("tbar must differ from N");
    c.r = (tbar * (N + 1) - 2) / (N - tbar);
    c.tstar = tbar * N / (N - tbar);
    c.ordered = 1 < tbar && tbar < 2 && 2 < c.r && c.r < c.tstar;
    return c;
}

}  // namespace moserlab::grid
