#include "sigstream/signature.hpp"

namespace sigstream {

// Running prefix integrals S^{(i_1..i_m)}(t) for m = 0..k. Along a segment with
// parameter u in [0,1] and increment delta, prefix m is a polynomial of degree m
// in u:  p_m(u) = p_m(0) + delta[i_m] * int_0^u p_{m-1}(v) dv.
double signature_oracle(const Path& path, const MultiIndex& index) {
    const std::size_t d = path.dimension();
    if (index.empty()) throw InvalidInput("oracle needs a non-empty multi-index");
    for (int letter : index) {
        if (letter < 1 || static_cast<std::size_t>(letter) > d) {
            throw InvalidInput("multi-index " + to_string(index) + " has a letter outside 1.." +
                               std::to_string(d));
        }
    }
    const std::size_t k = index.size();
    std::vector<double> value(k + 1, 0.0);  // prefix values at the current point
    value[0] = 1.0;

    // poly[m] holds the coefficients of p_m in powers of u.
    std::vector<std::vector<double>> poly(k + 1);
    for (std::size_t s = 0; s + 1 < path.size(); ++s) {
        poly[0] = {1.0};
        for (std::size_t m = 1; m <= k; ++m) {
            const std::size_t axis = static_cast<std::size_t>(index[m - 1] - 1);
            const double slope = path(s + 1, axis) - path(s, axis);
            const auto& lower = poly[m - 1];
            auto& cur = poly[m];
            cur.assign(lower.size() + 1, 0.0);
            cur[0] = value[m];
            for (std::size_t p = 0; p < lower.size(); ++p) {
                cur[p + 1] = slope * lower[p] / static_cast<double>(p + 1);
            }
        }
        for (std::size_t m = 1; m <= k; ++m) {
            double at_one = 0.0;
            for (double c : poly[m]) at_one += c;
            value[m] = at_one;
        }
    }
    return value[k];
}

}  // namespace sigstream
