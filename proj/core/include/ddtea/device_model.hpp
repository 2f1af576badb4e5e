// Mapping from normalized drive current to Thiele parameters.
//
// The drive current is expressed as zeta, the ratio of drive current to the
// oscillation-threshold current: zeta = 1 is where the growth rate alpha
// changes sign. Parameter curves alpha(zeta), beta(zeta), n(zeta) are plain
// power-basis polynomials (degree <= 6), either loaded from a model file or
// taken from the built-in synthetic default
//
//     alpha(zeta) = A0 * (zeta - 1),  beta(zeta) = -B0 * zeta,  n = 2
//     A0 = 1.0e8 1/s, B0 = 2.0e8 1/s, valid for zeta in [0.5, 2.5].
//
// Model file format (plain text, line oriented, '#' lines are comments):
//
//     ddtea-model v1
//     zeta_range <min> <max>
//     alpha <c0> <c1> ...
//     beta <c0> <c1> ...
//     n <c0> <c1> ...
//
// Coefficients are in ascending powers of zeta; serialization uses 17
// significant digits so save/load round-trips bit exactly.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ddtea/errors.hpp"
#include "ddtea/thiele.hpp"

namespace ddtea {

/// Polynomial in ascending power basis, evaluated by Horner's rule.
struct Polynomial {
    std::vector<double> coeffs;

    [[nodiscard]] double operator()(double x) const {
        double acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
            acc = acc * x + *it;
        }
        return acc;
    }
};

inline constexpr int kMaxPolynomialDegree = 6;

class DeviceModel {
  public:
    enum class Kind { SyntheticDefault, PolynomialFromFile };

    /// The documented synthetic stand-in described above.
    static DeviceModel synthetic_default();

    /// Build from explicit parameter curves; runs the load-time checks.
    static DeviceModel from_polynomials(Polynomial alpha, Polynomial beta, Polynomial n,
                                        double zeta_min, double zeta_max,
                                        Kind kind = Kind::PolynomialFromFile);

    static DeviceModel parse(std::string_view text);
    static DeviceModel load(const std::filesystem::path& path);

    [[nodiscard]] std::string serialize() const;
    void save(const std::filesystem::path& path) const;

    /// Thiele parameters at normalized current zeta. Throws std::out_of_range
    /// outside the validity interval and validation_error when beta(zeta) = 0
    /// (no bounded oscillation at that drive).
    [[nodiscard]] ThieleParams params_for_current(double zeta) const;

    [[nodiscard]] double zeta_min() const { return zeta_min_; }
    [[nodiscard]] double zeta_max() const { return zeta_max_; }
    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] const Polynomial& alpha() const { return alpha_; }
    [[nodiscard]] const Polynomial& beta() const { return beta_; }
    [[nodiscard]] const Polynomial& n() const { return n_; }

    friend bool operator==(const DeviceModel& a, const DeviceModel& b) {
        return a.alpha_.coeffs == b.alpha_.coeffs && a.beta_.coeffs == b.beta_.coeffs &&
               a.n_.coeffs == b.n_.coeffs && a.zeta_min_ == b.zeta_min_ &&
               a.zeta_max_ == b.zeta_max_;
    }

  private:
    DeviceModel() = default;

    Polynomial alpha_;
    Polynomial beta_;
    Polynomial n_;
    double zeta_min_ = 0.0;
    double zeta_max_ = 0.0;
    Kind kind_ = Kind::PolynomialFromFile;
};

}  // namespace ddtea
