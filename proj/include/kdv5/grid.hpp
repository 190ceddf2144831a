#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

namespace kdv5 {

using Complex = std::complex<double>;
using Spectrum = std::vector<Complex>;

/// Uniform periodic grid on [-L/2, L/2) with N nodes.
///
/// Node j sits at x_j = -L/2 + j L/N. Spectral coefficients are stored in
/// FFT order: index k < N/2 carries wavenumber k, index k >= N/2 carries
/// wavenumber k - N, so index N/2 is the single Nyquist mode -N/2.
class Grid {
public:
    Grid(double period_length, int num_points);

    double length() const { return length_; }
    int size() const { return size_; }
    double dx() const { return length_ / size_; }

    double x(int j) const { return -0.5 * length_ + j * dx(); }
    /// Integer wavenumber of spectral index k.
    int wavenumber(int k) const { return k < size_ / 2 ? k : k - size_; }
    /// Angular frequency 2 pi m / L of spectral index k.
    double xi(int k) const;
    int nyquist_index() const { return size_ / 2; }
    /// Frequency spacing 2 pi / L.
    double dxi() const;

    std::vector<double> nodes() const;
    std::vector<double> frequencies() const;

    bool operator==(const Grid& other) const = default;

private:
    double length_;
    int size_;
};

/// Real samples on a Grid, with a lazily computed spectrum.
///
/// Fields are immutable; copies share the spectral cache.
class Field {
public:
    explicit Field(const Grid& grid);
    Field(const Grid& grid, std::vector<double> samples);

    static Field from_function(const Grid& grid, const std::function<double(double)>& f);
    /// Real field whose coefficients are `coeffs` (projected onto real fields).
    static Field from_spectrum(const Grid& grid, const Spectrum& coeffs);

    const Grid& grid() const { return grid_; }
    int size() const { return grid_.size(); }
    std::span<const double> samples() const { return samples_; }
    const std::vector<double>& values() const { return samples_; }
    double operator[](std::size_t j) const { return samples_[j]; }

    /// Normalized coefficients; see forward_transform.
    const Spectrum& spectrum() const;
    bool has_cached_spectrum() const;

    double max_abs() const;

    Field operator-() const;
    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double a);
    Field operator+(double a) const;

    /// Shift by an integer number of nodes: result(x_j) = this(x_{j - shift}).
    Field shifted(int shift) const;

private:
    struct Cache {
        std::once_flag once;
        Spectrum coeffs;
    };

    void reset_cache();

    Grid grid_;
    std::vector<double> samples_;
    std::shared_ptr<Cache> cache_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double a, Field f);
Field operator*(Field f, double a);

/// Throws ValidationError unless both fields live on the same grid.
void require_same_grid(const Field& a, const Field& b, const char* what);

}  // namespace kdv5
