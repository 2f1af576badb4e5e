#include "ddtea/device_model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ddtea/csv.hpp"

namespace ddtea {

namespace {

constexpr int kValidationGridPoints = 1000;

std::vector<std::string> split_ws(std::string_view line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.emplace_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

std::vector<double> parse_coeffs(const std::vector<std::string>& fields, int line_no) {
    if (fields.size() < 2) {
        throw parse_error("line " + std::to_string(line_no) + ": '" + fields[0] +
                          "' needs at least one coefficient");
    }
    if (fields.size() - 1 > kMaxPolynomialDegree + 1) {
        throw parse_error("line " + std::to_string(line_no) + ": '" + fields[0] +
                          "' exceeds maximum degree " + std::to_string(kMaxPolynomialDegree));
    }
    std::vector<double> coeffs;
    for (std::size_t i = 1; i < fields.size(); ++i) {
        double v = 0.0;
        if (!parse_double(fields[i], v) || !std::isfinite(v)) {
            throw parse_error("line " + std::to_string(line_no) + ": field " + std::to_string(i) +
                              " of '" + fields[0] + "' is not a finite number: '" + fields[i] +
                              "'");
        }
        coeffs.push_back(v);
    }
    return coeffs;
}

void write_coeffs(std::ostream& os, std::string_view key, const Polynomial& p) {
    os << key;
    for (double c : p.coeffs) {
        os << ' ' << fmt_g17(c);
    }
    os << '\n';
}

}  // namespace

DeviceModel DeviceModel::synthetic_default() {
    return from_polynomials(Polynomial{{-1.0e8, 1.0e8}},  // alpha = A0*(zeta - 1), A0 = 1e8
                            Polynomial{{0.0, -2.0e8}},    // beta  = -B0*zeta,      B0 = 2e8
                            Polynomial{{2.0}},            // n     = 2
                            0.5, 2.5, Kind::SyntheticDefault);
}

DeviceModel DeviceModel::from_polynomials(Polynomial alpha, Polynomial beta, Polynomial n,
                                          double zeta_min, double zeta_max, Kind kind) {
    if (!std::isfinite(zeta_min) || !std::isfinite(zeta_max) || zeta_min < 0.0 ||
        zeta_min >= zeta_max) {
        throw validation_error("zeta_range must satisfy 0 <= min < max");
    }
    if (alpha.coeffs.empty() || beta.coeffs.empty() || n.coeffs.empty()) {
        throw validation_error("alpha, beta and n curves must all be present");
    }

    DeviceModel m;
    m.alpha_ = std::move(alpha);
    m.beta_ = std::move(beta);
    m.n_ = std::move(n);
    m.zeta_min_ = zeta_min;
    m.zeta_max_ = zeta_max;
    m.kind_ = kind;

    // Bounded-oscillation guarantee on a fixed grid: wherever the growth
    // rate is positive, the nonlinear term must saturate it.
    for (int i = 0; i < kValidationGridPoints; ++i) {
        const double zeta =
            zeta_min + (zeta_max - zeta_min) * static_cast<double>(i) /
                           static_cast<double>(kValidationGridPoints - 1);
        const double a = m.alpha_(zeta);
        const double b = m.beta_(zeta);
        const double nn = m.n_(zeta);
        if (a > 0.0 && b >= 0.0) {
            throw validation_error("model invariant violated at zeta = " + fmt_g17(zeta) +
                                   ": alpha > 0 requires beta < 0 (got alpha = " + fmt_g17(a) +
                                   ", beta = " + fmt_g17(b) + ")");
        }
        if (!(nn > 0.0) || !std::isfinite(nn)) {
            throw validation_error("model invariant violated at zeta = " + fmt_g17(zeta) +
                                   ": n must be positive and finite (got " + fmt_g17(nn) + ")");
        }
    }
    return m;
}

DeviceModel DeviceModel::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    std::vector<double> alpha, beta, n;
    double zeta_min = 0.0, zeta_max = 0.0;
    bool range_seen = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;

        if (!header_seen) {
            if (line != "ddtea-model v1") {
                throw parse_error("line " + std::to_string(line_no) +
                                  ": expected header 'ddtea-model v1', got '" + line + "'");
            }
            header_seen = true;
            continue;
        }

        const auto fields = split_ws(line);
        if (fields.empty()) continue;
        const std::string& key = fields[0];

        if (key == "zeta_range") {
            if (range_seen) {
                throw parse_error("line " + std::to_string(line_no) + ": duplicate zeta_range");
            }
            if (fields.size() != 3 || !parse_double(fields[1], zeta_min) ||
                !parse_double(fields[2], zeta_max)) {
                throw parse_error("line " + std::to_string(line_no) +
                                  ": zeta_range needs exactly two numbers");
            }
            range_seen = true;
        } else if (key == "alpha" || key == "beta" || key == "n") {
            auto& dst = key == "alpha" ? alpha : key == "beta" ? beta : n;
            if (!dst.empty()) {
                throw parse_error("line " + std::to_string(line_no) + ": duplicate '" + key + "'");
            }
            dst = parse_coeffs(fields, line_no);
        } else {
            throw parse_error("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }

    if (!header_seen) {
        throw parse_error("empty model: missing 'ddtea-model v1' header");
    }
    if (!range_seen) throw parse_error("missing 'zeta_range' line");
    if (alpha.empty()) throw parse_error("missing 'alpha' line");
    if (beta.empty()) throw parse_error("missing 'beta' line");
    if (n.empty()) throw parse_error("missing 'n' line");

    return from_polynomials(Polynomial{std::move(alpha)}, Polynomial{std::move(beta)},
                            Polynomial{std::move(n)}, zeta_min, zeta_max);
}

DeviceModel DeviceModel::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw parse_error("cannot open model file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string DeviceModel::serialize() const {
    std::ostringstream os;
    os << "ddtea-model v1\n";
    os << "zeta_range " << fmt_g17(zeta_min_) << ' ' << fmt_g17(zeta_max_) << '\n';
    write_coeffs(os, "alpha", alpha_);
    write_coeffs(os, "beta", beta_);
    write_coeffs(os, "n", n_);
    return os.str();
}

void DeviceModel::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write model file: " + path.string());
    }
    out << serialize();
}

ThieleParams DeviceModel::params_for_current(double zeta) const {
    if (!std::isfinite(zeta) || zeta < zeta_min_ || zeta > zeta_max_) {
        throw std::out_of_range("zeta = " + fmt_g17(zeta) + " outside model validity [" +
                                fmt_g17(zeta_min_) + ", " + fmt_g17(zeta_max_) + "]");
    }
    const ThieleParams p{.alpha = alpha_(zeta), .beta = beta_(zeta), .n = n_(zeta)};
    if (p.beta == 0.0) {
        throw validation_error("degenerate model: beta = 0 at zeta = " + fmt_g17(zeta));
    }
    validate(p);
    return p;
}

}  // namespace ddtea
