#include "kdv5/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "kdv5/error.hpp"
#include "kdv5/spectral.hpp"

namespace kdv5 {

Grid::Grid(double period_length, int num_points) : length_(period_length), size_(num_points) {
    if (!(std::isfinite(period_length) && period_length > 0.0)) {
        throw ValidationError("grid: period length must be positive and finite");
    }
    if (num_points < 8 || num_points % 2 != 0) {
        throw ValidationError("grid: num_points must be even and >= 8, got " +
                              std::to_string(num_points));
    }
}

double Grid::dxi() const { return 2.0 * std::numbers::pi / length_; }

double Grid::xi(int k) const { return dxi() * wavenumber(k); }

std::vector<double> Grid::nodes() const {
    std::vector<double> out(size_);
    for (int j = 0; j < size_; ++j) out[j] = x(j);
    return out;
}

std::vector<double> Grid::frequencies() const {
    std::vector<double> out(size_);
    for (int k = 0; k < size_; ++k) out[k] = xi(k);
    return out;
}

Field::Field(const Grid& grid) : Field(grid, std::vector<double>(grid.size(), 0.0)) {}

Field::Field(const Grid& grid, std::vector<double> samples)
    : grid_(grid), samples_(std::move(samples)), cache_(std::make_shared<Cache>()) {
    if (static_cast<int>(samples_.size()) != grid_.size()) {
        throw ValidationError("field: expected " + std::to_string(grid_.size()) +
                              " samples, got " + std::to_string(samples_.size()));
    }
    for (double v : samples_) {
        if (!std::isfinite(v)) throw ValidationError("field: samples must be finite");
    }
}

Field Field::from_function(const Grid& grid, const std::function<double(double)>& f) {
    std::vector<double> s(grid.size());
    for (int j = 0; j < grid.size(); ++j) s[j] = f(grid.x(j));
    return Field(grid, std::move(s));
}

Field Field::from_spectrum(const Grid& grid, const Spectrum& coeffs) {
    if (static_cast<int>(coeffs.size()) != grid.size()) {
        throw ValidationError("field: spectrum size does not match grid");
    }
    Field out(grid, inverse_transform_real(grid, coeffs));
    // Cache the Hermitian projection, which is what the real samples carry.
    const int n = grid.size();
    Spectrum herm(n);
    for (int k = 0; k < n; ++k) {
        const int mk = (n - k) % n;
        herm[k] = 0.5 * (coeffs[k] + std::conj(coeffs[mk]));
    }
    std::call_once(out.cache_->once, [&] { out.cache_->coeffs = std::move(herm); });
    return out;
}

const Spectrum& Field::spectrum() const {
    std::call_once(cache_->once, [this] { cache_->coeffs = forward_transform(grid_, samples_); });
    return cache_->coeffs;
}

bool Field::has_cached_spectrum() const { return !cache_->coeffs.empty(); }

double Field::max_abs() const {
    double m = 0.0;
    for (double v : samples_) m = std::max(m, std::abs(v));
    return m;
}

void Field::reset_cache() { cache_ = std::make_shared<Cache>(); }

Field Field::operator-() const {
    Field out(*this);
    for (double& v : out.samples_) v = -v;
    out.reset_cache();
    return out;
}

Field& Field::operator+=(const Field& other) {
    require_same_grid(*this, other, "field +=");
    for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] += other.samples_[j];
    reset_cache();
    return *this;
}

Field& Field::operator-=(const Field& other) {
    require_same_grid(*this, other, "field -=");
    for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] -= other.samples_[j];
    reset_cache();
    return *this;
}

Field& Field::operator*=(double a) {
    for (double& v : samples_) v *= a;
    reset_cache();
    return *this;
}

Field Field::operator+(double a) const {
    Field out(*this);
    for (double& v : out.samples_) v += a;
    out.reset_cache();
    return out;
}

Field Field::shifted(int shift) const {
    const int n = size();
    std::vector<double> s(n);
    for (int j = 0; j < n; ++j) s[j] = samples_[((j - shift) % n + n) % n];
    return Field(grid_, std::move(s));
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double a, Field f) { return f *= a; }
Field operator*(Field f, double a) { return f *= a; }

void require_same_grid(const Field& a, const Field& b, const char* what) {
    if (!(a.grid() == b.grid())) {
        throw ValidationError(std::string(what) + ": fields live on different grids");
    }
}

}  // namespace kdv5
