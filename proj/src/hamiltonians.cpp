#include "kdv5/hamiltonians.hpp"

#include <algorithm>

#include "kdv5/error.hpp"
#include "kdv5/spectral.hpp"

namespace kdv5 {

double mass(const Field& q) { return integral(q); }

double momentum(const Field& q) { return 0.5 * inner(q, q); }

double hamiltonian_kdv(const Field& q) {
    const Field q1 = derivative(q, 1);
    double sum = 0.0;
    for (int j = 0; j < q.size(); ++j) sum += 0.5 * q1[j] * q1[j] + q[j] * q[j] * q[j];
    return sum * q.grid().dx();
}

double hamiltonian_fifth(const Field& q) {
    const Field q1 = derivative(q, 1);
    const Field q2 = derivative(q, 2);
    double sum = 0.0;
    for (int j = 0; j < q.size(); ++j) {
        const double v = q[j];
        sum += 0.5 * q2[j] * q2[j] + 5.0 * v * q1[j] * q1[j] + 2.5 * v * v * v * v;
    }
    return sum * q.grid().dx();
}

ConservedReport conserved_report(const Field& q, const std::vector<double>& kappa_list,
                                 const GreenOptions& green, double t) {
    for (std::size_t i = 0; i < kappa_list.size(); ++i) {
        if (!(kappa_list[i] >= 1.0)) throw ValidationError("conserved_report: kappa values must be >= 1");
        if (i > 0 && !(kappa_list[i] > kappa_list[i - 1])) {
            throw ValidationError("conserved_report: kappa values must be strictly increasing");
        }
    }
    ConservedReport rep;
    rep.t = t;
    rep.M = mass(q);
    rep.P = momentum(q);
    rep.H_KdV = hamiltonian_kdv(q);
    rep.H_5th = hamiltonian_fifth(q);
    for (double k : kappa_list) rep.alpha_samples.emplace_back(k, alpha_of(q, k, green));
    return rep;
}

double h_kappa_value(const Field& q, double kappa, const GreenOptions& green) {
    const double k2 = kappa * kappa;
    const double k4 = k2 * k2;
    return 64.0 * k4 * k2 * kappa * alpha_of(q, kappa, green) - 16.0 * k4 * momentum(q) +
           4.0 * k2 * hamiltonian_kdv(q);
}

Field grad_P(const Field& q) { return q; }

Field grad_HKdV(const Field& q) {
    const Field q2 = derivative(q, 2);
    std::vector<double> out(q.size());
    for (int j = 0; j < q.size(); ++j) out[j] = -q2[j] + 3.0 * q[j] * q[j];
    return Field(q.grid(), std::move(out));
}

Field grad_H5th(const Field& q) {
    const Field q1 = derivative(q, 1);
    const Field q2 = derivative(q, 2);
    const Field q4 = derivative(q, 4);
    std::vector<double> out(q.size());
    for (int j = 0; j < q.size(); ++j) {
        const double v = q[j];
        out[j] = q4[j] - 10.0 * v * q2[j] - 5.0 * q1[j] * q1[j] + 10.0 * v * v * v;
    }
    return Field(q.grid(), std::move(out));
}

}  // namespace kdv5
