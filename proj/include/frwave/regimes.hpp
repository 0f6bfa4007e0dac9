#pragma once

#include <boost/rational.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "frwave/errors.hpp"
#include "frwave/geometry.hpp"
#include "frwave/matter.hpp"

namespace frwave {

/// Tolerance for the exact-exponent case split alpha = 2/(D-2).
inline constexpr double kCaseTol = 1e-12;

enum class CaseLabel { I, II, III, IV, ExponentialCase, Inadmissible };

inline const char* to_string(CaseLabel c) {
    switch (c) {
        case CaseLabel::I: return "I";
        case CaseLabel::II: return "II";
        case CaseLabel::III: return "III";
        case CaseLabel::IV: return "IV";
        case CaseLabel::ExponentialCase: return "Exponential";
        case CaseLabel::Inadmissible: return "Inadmissible";
    }
    return "?";
}

struct Assumption1Result {
    bool pass = false;
    std::optional<double> witness_tau{};  ///< a tau where the sign breaks, on failure
};

struct AIntegralResult {
    bool converges = false;
    double value = std::numeric_limits<double>::infinity();
};

struct Bound {
    char direction = '>';  ///< '<' or '>'
    double value = 0.0;
};

/// Admissibility verdict for one parameter point. The xi bound follows the
/// strict table inequalities; `assumption1` applies the non-strict sign
/// conditions h <= 0, dh/dtau >= 0 that actually drive admissibility, so the
/// two can disagree exactly on the boundary (h == 0).
struct RegimeVerdict {
    CaseLabel case_label = CaseLabel::Inadmissible;
    Assumption1Result assumption1;
    AIntegralResult assumption3;
    std::optional<Bound> p_bound{};
    std::optional<Bound> xi_bound{};  ///< nullopt = unrestricted
    bool admissible = false;

    // echo of the classified point
    int D = 4;
    ScaleFamily family = ScaleFamily::PowerLaw;
    double alpha = 0.0;
    std::optional<double> w{};
    double xi = 0.0;
    double p = 0.0;
    double tau0 = 1.0;
};

inline double xi_threshold(int D) {
    return static_cast<double>(D - 2) / (4.0 * (D - 1));
}

/// Sign conditions h(tau) <= 0 and dh/dtau >= 0 for all tau >= 0, decided
/// from the closed form of the family. Both reduce to one constant sign:
/// power law h = c/(tau+tau0)^2 with
///   c = alpha [(D-2)/2 - 2 xi (D-1)] [-1 + alpha (D-2)/2],
/// exponential h constant. Factors within kCaseTol of zero are snapped to
/// zero so that exact boundary cases (h == 0) pass the non-strict test
/// regardless of rounding. A failure is witnessed at tau = 0 (the sign is
/// uniform in tau).
inline Assumption1Result check_assumption1(const ScaleFactorModel& m,
                                           const CouplingSpec& coupling) {
    double coeff = 0.5 * (m.D - 2) - 2.0 * coupling.xi * (m.D - 1);
    if (std::abs(coeff) <= kCaseTol) coeff = 0.0;
    double c;
    if (m.family == ScaleFamily::PowerLaw) {
        double shape = -1.0 + 0.5 * m.alpha * (m.D - 2);
        if (std::abs(shape) <= kCaseTol) shape = 0.0;
        c = m.alpha * coeff * shape;
    } else {
        c = 0.5 * (m.D - 2) * m.alpha * m.alpha * coeff;
    }
    if (c <= 0.0) return {true, std::nullopt};
    return {false, 0.0};
}

/// A(tau0) = int_0^inf a(tau)^{(D+2-(D-2)p)/2} dtau in closed form.
/// Power law: integrand (tau+tau0)^e with e = alpha (D+2-(D-2)p)/2,
/// convergent iff e < -1 with value tau0^(e+1)/(-e-1) (e = -1 diverges).
/// Exponential: integrand e^{beta (tau+tau0)} with beta = alpha q,
/// convergent iff q = (D+2-(D-2)p)/2 < 0 with value e^{beta tau0}/(-beta).
inline AIntegralResult a_integral(const ScaleFactorModel& m, double p) {
    if (!(p > 0.0)) throw InvalidParameters("p must be > 0");
    const double q = 0.5 * (m.D + 2 - (m.D - 2) * p);
    if (m.family == ScaleFamily::PowerLaw) {
        const double e = m.alpha * q;
        if (e < -1.0) return {true, std::pow(m.tau0, e + 1.0) / (-e - 1.0)};
        return {false, std::numeric_limits<double>::infinity()};
    }
    const double beta = m.alpha * q;
    if (beta < 0.0) return {true, std::exp(beta * m.tau0) / (-beta)};
    return {false, std::numeric_limits<double>::infinity()};
}

/// How the background is specified for classification.
struct BackgroundInput {
    enum class Kind { W, PowerAlpha, ExpRate } kind = Kind::W;
    double value = 0.0;

    static BackgroundInput by_w(double w) { return {Kind::W, w}; }
    static BackgroundInput by_alpha(double a) { return {Kind::PowerAlpha, a}; }
    static BackgroundInput by_exp_rate(double r) { return {Kind::ExpRate, r}; }
};

/// Classify one (D, w-or-alpha, xi, p, tau0) point against the global
/// admissibility conditions. A degenerate w selects the exponential family;
/// its bounds are rate-independent and the reported A(tau0) uses unit rate.
inline RegimeVerdict classify(int D, BackgroundInput in, double xi, double p,
                              double tau0) {
    if (D < 4) throw InvalidParameters("D must be >= 4");
    if (!(p > 0.0)) throw InvalidParameters("p must be > 0");
    if (!(tau0 > 0.0)) throw InvalidParameters("tau0 must be > 0");

    RegimeVerdict v;
    v.D = D;
    v.xi = xi;
    v.p = p;
    v.tau0 = tau0;

    ScaleFactorModel model;
    switch (in.kind) {
        case BackgroundInput::Kind::W:
            v.w = in.value;
            if (std::abs(in.value - degenerate_w(D)) <= kDegenerateWTol) {
                model = ScaleFactorModel::exponential(1.0, tau0, D);
            } else {
                model = ScaleFactorModel::from_w(D, in.value, tau0);
            }
            break;
        case BackgroundInput::Kind::PowerAlpha:
            model = ScaleFactorModel::power_law(in.value, tau0, D);
            break;
        case BackgroundInput::Kind::ExpRate:
            if (!(in.value > 0.0))
                throw InvalidParameters("exponential rate must be > 0");
            model = ScaleFactorModel::exponential(in.value, tau0, D);
            break;
    }
    v.family = model.family;
    v.alpha = model.alpha;

    const double thr = xi_threshold(D);
    const double alpha_iv = 2.0 / (D - 2);
    if (model.family == ScaleFamily::Exponential) {
        v.case_label = CaseLabel::ExponentialCase;
        v.p_bound = Bound{'>', static_cast<double>(D + 2) / (D - 2)};
        v.xi_bound = Bound{'>', thr};
    } else if (std::abs(model.alpha) <= kCaseTol) {
        // a == 1: the perturbation integral cannot converge.
        v.case_label = CaseLabel::Inadmissible;
    } else if (model.alpha < 0.0) {
        v.case_label = CaseLabel::I;
        v.p_bound = Bound{'<', (D + 2 - 2.0 / std::abs(model.alpha)) / (D - 2)};
        v.xi_bound = Bound{'>', thr};
    } else if (std::abs(model.alpha - alpha_iv) <= kCaseTol) {
        v.case_label = CaseLabel::IV;
        v.p_bound = Bound{'>', 2.0 * D / (D - 2)};
        v.xi_bound = std::nullopt;  // unrestricted
    } else if (model.alpha < alpha_iv) {
        v.case_label = CaseLabel::II;
        v.p_bound = Bound{'>', (D + 2 + 2.0 / model.alpha) / (D - 2)};
        v.xi_bound = Bound{'<', thr};
    } else {
        v.case_label = CaseLabel::III;
        v.p_bound = Bound{'>', (D + 2 + 2.0 / model.alpha) / (D - 2)};
        v.xi_bound = Bound{'>', thr};
    }

    v.assumption1 = check_assumption1(model, CouplingSpec{xi});
    v.assumption3 = a_integral(model, p);
    v.admissible = v.assumption1.pass && v.assumption3.converges;
    return v;
}

// ---------------------------------------------------------------------------
// Exact rational table rows (zero-tolerance reproduction of the D = 4 table).
// ---------------------------------------------------------------------------

using Rational = boost::rational<long long>;

inline std::string to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// One admissibility-table row computed in exact rational arithmetic.
/// xi_bound is absent for the unrestricted case.
struct TableRow {
    Rational w;
    Rational alpha;  ///< 0 stands in for "free rate" on the exponential row
    CaseLabel label = CaseLabel::Inadmissible;
    std::optional<Rational> xi_bound{};
    char xi_direction = '>';
    Rational p_bound;
    char p_direction = '>';
};

inline TableRow table_row(int D, const Rational& w) {
    if (D < 4) throw InvalidParameters("D must be >= 4");
    TableRow row;
    row.w = w;

    const Rational denom = Rational(D - 1) * (w + 1) - 2;
    const Rational thr(D - 2, 4 * (D - 1));
    if (denom == 0) {
        row.label = CaseLabel::ExponentialCase;
        row.alpha = 0;
        row.xi_bound = thr;
        row.xi_direction = '>';
        row.p_bound = Rational(D + 2, D - 2);
        row.p_direction = '>';
        return row;
    }

    const Rational alpha = Rational(2) / denom;
    row.alpha = alpha;
    const Rational alpha_iv(2, D - 2);
    if (alpha < 0) {
        row.label = CaseLabel::I;
        row.p_bound = (Rational(D + 2) - Rational(2) / (-alpha)) / (D - 2);
        row.p_direction = '<';
        row.xi_bound = thr;
        row.xi_direction = '>';
    } else if (alpha == alpha_iv) {
        row.label = CaseLabel::IV;
        row.p_bound = Rational(2 * D, D - 2);
        row.p_direction = '>';
        row.xi_bound = std::nullopt;
    } else if (alpha < alpha_iv) {
        row.label = CaseLabel::II;
        row.p_bound = (Rational(D + 2) + Rational(2) / alpha) / (D - 2);
        row.p_direction = '>';
        row.xi_bound = thr;
        row.xi_direction = '<';
    } else {
        row.label = CaseLabel::III;
        row.p_bound = (Rational(D + 2) + Rational(2) / alpha) / (D - 2);
        row.p_direction = '>';
        row.xi_bound = thr;
        row.xi_direction = '>';
    }
    return row;
}

/// The three standard four-dimensional rows: matter (w = 0),
/// cosmological-constant (w = -1) and radiation (w = 1/3) domination.
inline std::array<TableRow, 3> table_four_dimensional() {
    return {table_row(4, Rational(0)), table_row(4, Rational(-1)),
            table_row(4, Rational(1, 3))};
}

}  // namespace frwave
