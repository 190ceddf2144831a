#include "kdv5/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "kdv5/error.hpp"

namespace kdv5 {
namespace {

// FFTW planning is not thread-safe; execution with new arrays is.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(int n, int sign) {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<Complex> in(n), out(n);
        fftw_plan p = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                       reinterpret_cast<fftw_complex*>(out.data()), sign,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, p);
        return p;
    }

    ~PlanCache() {
        for (auto& [key, p] : plans_) fftw_destroy_plan(p);
    }

private:
    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

void execute(int n, int sign, const Complex* in, Complex* out) {
    fftw_plan p = PlanCache::instance().get(n, sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

// (-1)^m for the wavenumber m of index k; accounts for x_0 = -L/2.
double node_phase(const Grid& grid, int k) { return (grid.wavenumber(k) % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

Spectrum forward_transform(const Grid& grid, std::span<const Complex> samples) {
    const int n = grid.size();
    if (static_cast<int>(samples.size()) != n) throw ValidationError("transform: size mismatch");
    Spectrum out(n);
    execute(n, FFTW_FORWARD, samples.data(), out.data());
    const double scale = grid.dx() / std::sqrt(2.0 * std::numbers::pi);
    for (int k = 0; k < n; ++k) out[k] *= scale * node_phase(grid, k);
    return out;
}

Spectrum forward_transform(const Grid& grid, std::span<const double> samples) {
    std::vector<Complex> in(samples.begin(), samples.end());
    return forward_transform(grid, std::span<const Complex>(in));
}

std::vector<Complex> inverse_transform(const Grid& grid, std::span<const Complex> coeffs) {
    const int n = grid.size();
    if (static_cast<int>(coeffs.size()) != n) throw ValidationError("transform: size mismatch");
    const double scale = std::sqrt(2.0 * std::numbers::pi) / grid.length();
    std::vector<Complex> in(n), out(n);
    for (int k = 0; k < n; ++k) in[k] = coeffs[k] * (scale * node_phase(grid, k));
    execute(n, FFTW_BACKWARD, in.data(), out.data());
    return out;
}

std::vector<double> inverse_transform_real(const Grid& grid, std::span<const Complex> coeffs) {
    auto c = inverse_transform(grid, coeffs);
    std::vector<double> out(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) out[j] = c[j].real();
    return out;
}

Symbol Symbol::operator*(const Symbol& other) const {
    return Symbol([a = rule_, b = other.rule_](double xi) { return a(xi) * b(xi); });
}

bool Symbol::is_hermitian_on(const Grid& grid, double rel_tol) const {
    for (int k = 1; k < grid.size() / 2; ++k) {
        const double xi = grid.xi(k);
        const Complex p = rule_(xi);
        const Complex m = rule_(-xi);
        const double scale = std::max({std::abs(p), std::abs(m), 1e-300});
        if (std::abs(m - std::conj(p)) > rel_tol * scale) return false;
    }
    return std::abs(rule_(0.0).imag()) <= rel_tol * std::max(std::abs(rule_(0.0)), 1e-300);
}

Symbol Symbol::identity() {
    return Symbol([](double) { return Complex(1.0); });
}

Symbol Symbol::derivative(int order) {
    return Symbol([order](double xi) { return std::pow(Complex(0.0, xi), order); });
}

Symbol Symbol::resolvent(double kappa) {
    return Symbol([k2 = kappa * kappa](double xi) { return Complex(1.0 / (xi * xi + k2)); });
}

Symbol Symbol::sobolev_weight(double s, double kappa) {
    return Symbol([s, k2 = 4.0 * kappa * kappa](double xi) {
        return Complex(std::pow(xi * xi + k2, s));
    });
}

Spectrum apply_multiplier(const Symbol& m, const Grid& grid, std::span<const Complex> coeffs) {
    Spectrum out(coeffs.begin(), coeffs.end());
    for (int k = 0; k < grid.size(); ++k) out[k] *= m(grid.xi(k));
    return out;
}

Field apply_multiplier(const Symbol& m, const Field& f) {
    const Grid& grid = f.grid();
    if (!m.is_hermitian_on(grid)) {
        throw ValidationError("apply_multiplier: symbol is not Hermitian; real output impossible");
    }
    Spectrum c = apply_multiplier(m, grid, f.spectrum());
    const int ny = grid.nyquist_index();
    c[ny] = f.spectrum()[ny] * m(grid.xi(ny)).real();
    return Field::from_spectrum(grid, c);
}

Field derivative(const Field& f, int order) {
    const Grid& grid = f.grid();
    Spectrum c = f.spectrum();
    for (int k = 0; k < grid.size(); ++k) c[k] *= std::pow(Complex(0.0, grid.xi(k)), order);
    c[grid.nyquist_index()] = 0.0;
    return Field::from_spectrum(grid, c);
}

Field resolvent(const Field& f, double kappa) {
    const Grid& grid = f.grid();
    Spectrum c = f.spectrum();
    const double k2 = kappa * kappa;
    for (int k = 0; k < grid.size(); ++k) {
        const double xi = grid.xi(k);
        c[k] /= xi * xi + k2;
    }
    return Field::from_spectrum(grid, c);
}

double sobolev_norm(const Grid& grid, std::span<const Complex> coeffs, double s, double kappa) {
    if (!(kappa >= 1.0)) throw ValidationError("sobolev_norm: kappa must be >= 1");
    const double k2 = 4.0 * kappa * kappa;
    double sum = 0.0;
    for (int k = 0; k < grid.size(); ++k) {
        const double xi = grid.xi(k);
        sum += std::pow(xi * xi + k2, s) * std::norm(coeffs[k]);
    }
    return std::sqrt(sum * grid.dxi());
}

double sobolev_norm(const Field& f, double s, double kappa) {
    return sobolev_norm(f.grid(), f.spectrum(), s, kappa);
}

double integral(const Field& f) {
    double sum = 0.0;
    for (double v : f.samples()) sum += v;
    return sum * f.grid().dx();
}

double inner(const Field& f, const Field& g) {
    require_same_grid(f, g, "inner");
    double sum = 0.0;
    for (int j = 0; j < f.size(); ++j) sum += f[j] * g[j];
    return sum * f.grid().dx();
}

double l2_norm(const Field& f) { return std::sqrt(inner(f, f)); }

Field product(const Field& f, const Field& g) {
    require_same_grid(f, g, "product");
    std::vector<double> s(f.size());
    for (int j = 0; j < f.size(); ++j) s[j] = f[j] * g[j];
    return Field(f.grid(), std::move(s));
}

bool is_dealiased_mode(const Grid& grid, int k) {
    return 3 * std::abs(grid.wavenumber(k)) < grid.size();
}

Field dealias(const Field& f) {
    const Grid& grid = f.grid();
    Spectrum c = f.spectrum();
    for (int k = 0; k < grid.size(); ++k) {
        if (!is_dealiased_mode(grid, k)) c[k] = 0.0;
    }
    return Field::from_spectrum(grid, c);
}

Field dealiased_product(const Field& f, const Field& g) {
    require_same_grid(f, g, "dealiased_product");
    return dealias(product(dealias(f), dealias(g)));
}

}  // namespace kdv5
