#include "depfid/special_functions.hpp"

#include <cmath>
#include <limits>

#include "depfid/errors.hpp"

namespace depfid {

namespace {

double horner(const double* coeffs, int count, double r) {
    double acc = coeffs[count - 1];
    for (int k = count - 2; k >= 0; --k) acc = acc * r + coeffs[k];
    return acc;
}

// Lentz continued fraction for the incomplete beta function.
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIterations = 10000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) <= kEps) return h;
    }
    return h;
}

// I_x(a, b) given both x and 1 - x, so callers with an exact complement
// do not lose digits forming it.
double incomplete_beta(double a, double b, double x, double xc) {
    if (x <= 0.0) return 0.0;
    if (xc <= 0.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log(xc);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, xc) / b;
}

// Pr(T < -|x|) for x != 0.
double student_t_lower_tail_abs(double x, double nu) {
    const double t2 = x * x;
    const double xb = nu / (nu + t2);
    const double xc = t2 / (nu + t2);
    return 0.5 * incomplete_beta(0.5 * nu, 0.5, xb, xc);
}

} // namespace

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw Error(ErrorKind::DomainError, "normal_quantile requires 0 < p < 1");
    }
    static constexpr double a[] = {3.387132872796366608,   133.14166789178437745,
                                   1971.5909503065514427,  13731.693765509461125,
                                   45921.953931549871457,  67265.770927008700853,
                                   33430.575583588128105,  2509.0809287301226727};
    static constexpr double b[] = {1.0,                   42.313330701600911252,
                                   687.1870074920579083,  5394.1960214247511077,
                                   21213.794301586595867, 39307.89580009271061,
                                   28729.085735721942674, 5226.495278852545925};
    static constexpr double c[] = {1.42343711074968357734,  4.6303378461565452959,
                                   5.7694972214606914055,   3.64784832476320460504,
                                   1.27045825245236838258,  0.24178072517745061177,
                                   0.0227238449892691845833, 7.7454501427834140764e-4};
    static constexpr double d[] = {1.0,                      2.05319162663775882187,
                                   1.6763848301838038494,    0.68976733498510000455,
                                   0.14810397642748007459,   0.0151986665636164571966,
                                   5.475938084995344946e-4,  1.05075007164441684324e-9};
    static constexpr double e[] = {6.6579046435011037772,    5.4637849111641143699,
                                   1.7848265399172913358,    0.29656057182850489123,
                                   0.026532189526576123093,  0.0012426609473880784386,
                                   2.71155556874348757815e-5, 2.01033439929228813265e-7};
    static constexpr double f[] = {1.0,                      0.59983220655588793769,
                                   0.13692988092273580531,   0.0148753612908506148525,
                                   7.868691311456132591e-4,  1.8463183175100546818e-5,
                                   1.4215117583164458887e-7, 2.04426310338993978564e-15};

    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q * horner(a, 8, r) / horner(b, 8, r);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        value = horner(c, 8, r) / horner(d, 8, r);
    } else {
        r -= 5.0;
        value = horner(e, 8, r) / horner(f, 8, r);
    }
    return q < 0.0 ? -value : value;
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) {
        throw Error(ErrorKind::DomainError, "incomplete beta requires positive a and b");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        throw Error(ErrorKind::DomainError, "incomplete beta requires 0 <= x <= 1");
    }
    return incomplete_beta(a, b, x, 1.0 - x);
}

double student_t_cdf(double x, double nu) {
    if (!(nu > 0.0)) throw Error(ErrorKind::DomainError, "student_t_cdf requires nu > 0");
    if (std::isnan(x)) throw Error(ErrorKind::DomainError, "student_t_cdf of NaN");
    if (x == 0.0) return 0.5;
    if (std::isinf(x)) return x > 0.0 ? 1.0 : 0.0;
    const double tail = student_t_lower_tail_abs(x, nu);
    return x < 0.0 ? tail : 1.0 - tail;
}

double student_t_upper_tail(double x, double nu) {
    if (!(nu > 0.0)) throw Error(ErrorKind::DomainError, "student_t_upper_tail requires nu > 0");
    if (x == 0.0) return 0.5;
    if (std::isinf(x)) return x > 0.0 ? 0.0 : 1.0;
    const double tail = student_t_lower_tail_abs(x, nu);
    return x > 0.0 ? tail : 1.0 - tail;
}

} // namespace depfid
