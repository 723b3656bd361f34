#include "jls/prob.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace jls::prob {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // ln(2*pi)/2
constexpr int kMaxIter = 500;
constexpr double kEps = 1e-15;
constexpr double kTiny = 1e-300;

// Stirling series at z >= 16; first neglected term is below 1e-19.
double stirling_ln_gamma(double z) {
    static const double coef[] = {
        1.0 / 12.0,        -1.0 / 360.0,      1.0 / 1260.0,     -1.0 / 1680.0,
        1.0 / 1188.0,      -691.0 / 360360.0, 1.0 / 156.0,
    };
    const double inv = 1.0 / z;
    const double inv2 = inv * inv;
    double series = 0.0;
    double power = inv;
    for (double c : coef) {
        series += c * power;
        power *= inv2;
    }
    return (z - 0.5) * std::log(z) - z + kHalfLog2Pi + series;
}

}  // namespace

double ln_gamma(double x) {
    if (!(x > 0.0))
        throw std::domain_error("ln_gamma: argument must be positive");
    double shift = 0.0;
    double z = x;
    while (z < 16.0) {
        shift += std::log(z);
        z += 1.0;
    }
    return stirling_ln_gamma(z) - shift;
}

namespace {

// Series for P(s, x) = gamma(s, x)/Gamma(s), valid for x < s + 1.
double gamma_p_series(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    double a = s;
    for (int i = 0; i < kMaxIter; ++i) {
        a += 1.0;
        term *= x / a;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kEps)
            return sum * std::exp(-x + s * std::log(x) - ln_gamma(s));
    }
    throw std::runtime_error("reg_gamma: series failed to converge");
}

// Lentz continued fraction for Q(s, x), valid for x >= s + 1.
double gamma_q_cf(double s, double x) {
    double b = x + 1.0 - s;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps)
            return h * std::exp(-x + s * std::log(x) - ln_gamma(s));
    }
    throw std::runtime_error("reg_gamma: continued fraction failed to converge");
}

}  // namespace

double reg_gamma_upper(double s, double x) {
    if (!(s > 0.0) || !(x >= 0.0))
        throw std::domain_error("reg_gamma_upper: require s > 0, x >= 0");
    if (x == 0.0) return 1.0;
    if (x < s + 1.0) return 1.0 - gamma_p_series(s, x);
    return gamma_q_cf(s, x);
}

namespace {

// Lentz continued fraction for the incomplete beta.
double beta_cf(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw std::runtime_error("reg_beta: continued fraction failed to converge");
}

}  // namespace

double reg_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::domain_error("reg_beta: shape parameters must be positive");
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("reg_beta: x must lie in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double chi2_sf(double x, double df) {
    if (!(x >= 0.0))
        throw std::domain_error("chi2_sf: statistic must be non-negative");
    if (!(df > 0.0))
        throw std::domain_error("chi2_sf: df must be positive");
    return reg_gamma_upper(0.5 * df, 0.5 * x);
}

double student_t_sf(double t, double df) {
    if (!(df > 0.0))
        throw std::domain_error("student_t_sf: df must be positive");
    if (t == 0.0) return 0.5;
    const double x = df / (df + t * t);
    const double half_two_sided = 0.5 * reg_beta(0.5 * df, 0.5, x);
    return t > 0.0 ? half_two_sided : 1.0 - half_two_sided;
}

double f_sf(double x, double d1, double d2) {
    if (!(x >= 0.0))
        throw std::domain_error("f_sf: statistic must be non-negative");
    if (!(d1 > 0.0) || !(d2 > 0.0))
        throw std::domain_error("f_sf: df must be positive");
    return reg_beta(0.5 * d2, 0.5 * d1, d2 / (d2 + d1 * x));
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("normal_quantile: p must lie in (0, 1)");

    // PPND16 (Wichura, algorithm AS 241).
    static const double a[8] = {
        3.3871328727963666080e0,  1.3314166789178437745e2,
        1.9715909503065514427e3,  1.3731693765509461125e4,
        4.5921953931549871457e4,  6.7265770927008700853e4,
        3.3430575583588128105e4,  2.5090809287301226727e3};
    static const double b[7] = {
        4.2313330701600911252e1,  6.8718700749205790830e2,
        5.3941960214247511077e3,  2.1213794301586595867e4,
        3.9307895800092710610e4,  2.8729085735721942674e4,
        5.2264952788528545610e3};
    static const double c[8] = {
        1.42343711074968357734e0,  4.63033784615654529590e0,
        5.76949722146069140550e0,  3.64784832476320460504e0,
        1.27045825245236838258e0,  2.41780725177450611770e-1,
        2.27238449892691845833e-2, 7.74545014278341407640e-4};
    static const double d[7] = {
        2.05319162663775882187e0,  1.67638483018380384940e0,
        6.89767334985100004550e-1, 1.48103976427480074590e-1,
        1.51986665636164571966e-2, 5.47593808499534494600e-4,
        1.05075007164441684324e-9};
    static const double e[8] = {
        6.65790464350110377720e0,  5.46378491116411436990e0,
        1.78482653991729133580e0,  2.96560571828504891230e-1,
        2.65321895265761230930e-2, 1.24266094738807843860e-3,
        2.71155556874348757815e-5, 2.01033439929228813265e-7};
    static const double f[7] = {
        5.99832206555887937690e-1, 1.36929880922735805310e-1,
        1.48753612908506148525e-2, 7.86869131145613259100e-4,
        1.84631831751005468180e-5, 1.42151175831644588870e-7,
        2.04426310338993978564e-15};

    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        double num = a[7];
        double den = b[6];
        for (int i = 6; i >= 0; --i) num = num * r + a[i];
        for (int i = 5; i >= 0; --i) den = den * r + b[i];
        den = den * r + 1.0;
        return q * num / den;
    }

    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double x;
    if (r <= 5.0) {
        r -= 1.6;
        double num = c[7];
        double den = d[6];
        for (int i = 6; i >= 0; --i) num = num * r + c[i];
        for (int i = 5; i >= 0; --i) den = den * r + d[i];
        den = den * r + 1.0;
        x = num / den;
    } else {
        r -= 5.0;
        double num = e[7];
        double den = f[6];
        for (int i = 6; i >= 0; --i) num = num * r + e[i];
        for (int i = 5; i >= 0; --i) den = den * r + f[i];
        den = den * r + 1.0;
        x = num / den;
    }
    return q < 0.0 ? -x : x;
}

}  // namespace jls::prob
