#include "switchsim/stats.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace switchsim {

MeanSem mean_with_sem(std::span<const int> values) {
    if (values.empty()) throw std::invalid_argument("mean_with_sem: empty input");
    MeanSem r;
    r.n = values.size();
    double sum = 0;
    for (int v : values) sum += v;
    r.mean = sum / double(r.n);
    if (r.n == 1) {
        r.sem = 0;
        return r;
    }
    double ss = 0;
    for (int v : values) ss += (v - r.mean) * (v - r.mean);
    double var = ss / double(r.n - 1);
    r.sem = std::sqrt(var / double(r.n));
    return r;
}

EpsilonEstimate epsilon_estimate(size_t n_post, size_t n_singlet) {
    if (n_post < 1) throw std::invalid_argument("epsilon_estimate: n_post must be >= 1");
    if (n_singlet > n_post) throw std::invalid_argument("epsilon_estimate: n_singlet > n_post");
    EpsilonEstimate e;
    e.n_post = n_post;
    e.n_singlet = n_singlet;
    if (n_singlet == 0) {
        e.p_f = e.sem = 1.147 / (2.0 * double(n_post));
    } else {
        e.p_f = double(n_singlet) / double(n_post);
        e.sem = std::sqrt(e.p_f * (1.0 - e.p_f) / double(n_post));
    }
    return e;
}

BlochVectors::BlochVectors() : u{1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2, 0.0} {}

BlochVectors::BlochVectors(std::array<double, 3> v_, std::array<double, 3> sem_)
    : BlochVectors() {
    v = v_;
    sem = sem_;
}

std::array<double, 3> BlochVectors::delta() const {
    return {v[0] - u[0], v[1] - u[1], v[2] - u[2]};
}

double fidelity_direct(const BlochVectors& bloch) {
    return 0.5 + (bloch.v[0] + bloch.v[1]) / (2.0 * std::numbers::sqrt2);
}

FidelityBound fidelity_lower_bound(const BlochVectors& bloch, const EpsilonEstimate& eps) {
    FidelityBound f;
    auto d = bloch.delta();
    double d2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    f.delta_term = d2 / 4.0;
    double var = 0;
    for (int i = 0; i < 3; ++i) {
        double t = d[i] * bloch.sem[i] / 2.0;
        var += t * t;
    }
    f.delta_term_sem = std::sqrt(var);
    f.bound = 1.0 - (eps.p_f + f.delta_term);
    f.sem = std::sqrt(eps.sem * eps.sem + var);
    return f;
}

double distillation_projection(double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("infidelity outside [0,1]");
    return 35.0 * p * p * p;
}

Mat2c mat2_mul(const Mat2c& a, const Mat2c& b) {
    Mat2c r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            r.m[i][j] = a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j];
    return r;
}

std::complex<double> mat2_trace(const Mat2c& a) { return a.m[0][0] + a.m[1][1]; }

Mat2c density_from_bloch(double x, double y, double z) {
    Mat2c r;
    r.m[0][0] = 0.5 * (1.0 + z);
    r.m[1][1] = 0.5 * (1.0 - z);
    r.m[0][1] = 0.5 * std::complex<double>(x, -y);
    r.m[1][0] = 0.5 * std::complex<double>(x, y);
    return r;
}

namespace {

void require_density(const Mat2c& rho, const char* what) {
    const double tol = 1e-9;
    if (std::abs(mat2_trace(rho) - std::complex<double>(1, 0)) > tol)
        throw std::invalid_argument(std::string(what) + ": trace != 1");
    if (std::abs(rho.m[0][1] - std::conj(rho.m[1][0])) > tol)
        throw std::invalid_argument(std::string(what) + ": not Hermitian");
    double det = (rho.m[0][0] * rho.m[1][1] - rho.m[0][1] * rho.m[1][0]).real();
    if (rho.m[0][0].real() < -tol || rho.m[1][1].real() < -tol || det < -tol)
        throw std::invalid_argument(std::string(what) + ": not positive");
}

std::array<double, 3> bloch_of(const Mat2c& rho) {
    return {
        (rho.m[0][1] + rho.m[1][0]).real(),
        (std::complex<double>(0, 1) * (rho.m[0][1] - rho.m[1][0])).real(),
        (rho.m[0][0] - rho.m[1][1]).real(),
    };
}

double purity(const Mat2c& rho) { return mat2_trace(mat2_mul(rho, rho)).real(); }

double fidelity_with_pure(const Mat2c& rho, const Mat2c& sigma) {
    return mat2_trace(mat2_mul(rho, sigma)).real();
}

bool same_matrix(const Mat2c& a, const Mat2c& b) {
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            if (a.m[i][j] != b.m[i][j]) return false;
    return true;
}

}  // namespace

PurityOracleReport purity_bound_oracle_check(const Mat2c& rho1, const Mat2c& rho2,
                                             const Mat2c& sigma_t, double tol) {
    require_density(rho1, "rho1");
    require_density(rho2, "rho2");
    require_density(sigma_t, "sigma_t");
    if (std::abs(purity(sigma_t) - 1.0) > 1e-9)
        throw std::invalid_argument("sigma_t: not a pure state");

    PurityOracleReport rep;
    auto record = [&](double violation, const std::string& what) {
        if (violation > rep.max_violation) rep.max_violation = violation;
        if (violation > tol && rep.pass) {
            rep.pass = false;
            rep.first_failure = what;
        }
    };

    // Exact singlet overlap of the product state.
    rep.epsilon = 0.5 * (rho1.m[0][0] * rho2.m[1][1] - rho1.m[0][1] * rho2.m[1][0] -
                         rho1.m[1][0] * rho2.m[0][1] + rho1.m[1][1] * rho2.m[0][0])
                      .real();

    auto us = bloch_of(sigma_t);
    const Mat2c* rhos[2] = {&rho1, &rho2};
    for (int i = 0; i < 2; ++i) {
        auto v = bloch_of(*rhos[i]);
        double d2 = 0;
        for (int k = 0; k < 3; ++k) d2 += (v[k] - us[k]) * (v[k] - us[k]);
        double f = fidelity_with_pure(*rhos[i], sigma_t);
        double lhs = purity(*rhos[i]);
        double rhs = 1.0 + 0.5 * d2 + 2.0 * (f - 1.0);
        record(std::abs(lhs - rhs), "purity identity, copy " + std::to_string(i + 1));
    }

    double max_purity = std::max(purity(rho1), purity(rho2));
    record(std::max(0.0, (1.0 - 2.0 * rep.epsilon) - max_purity), "purity lower bound");

    if (same_matrix(rho1, rho2)) {
        auto v = bloch_of(rho1);
        double d2 = 0;
        for (int k = 0; k < 3; ++k) d2 += (v[k] - us[k]) * (v[k] - us[k]);
        double bound = 1.0 - (rep.epsilon + d2 / 4.0);
        double f = fidelity_with_pure(rho1, sigma_t);
        record(std::max(0.0, bound - f), "fidelity lower bound");
    }
    return rep;
}

BasisSummary basis_summary_from(const std::vector<DecodedShot>& shots) {
    BasisSummary s;
    s.n_shots = shots.size();
    std::vector<int> values;
    for (const auto& d : shots) {
        if (!d.accepted) continue;
        if (!d.logical) throw std::invalid_argument("accepted single-copy shot without logical");
        values.push_back(*d.logical);
    }
    s.n_post = values.size();
    if (!values.empty()) {
        auto ms = mean_with_sem(values);
        s.mean = ms.mean;
        s.sem = ms.sem;
    }
    return s;
}

TwoCopySummary two_copy_summary_from(const std::vector<DecodedShot>& shots) {
    TwoCopySummary s;
    s.n_shots = shots.size();
    for (const auto& d : shots) {
        if (!d.accepted) continue;
        ++s.n_post;
        if (d.singlet) ++s.n_singlet;
    }
    return s;
}

CertificationReport summarize(const BasisSummary& x, const BasisSummary& y,
                              const BasisSummary& z, const TwoCopySummary& two_copy,
                              DecodeMode mode) {
    if (x.n_post == 0 || y.n_post == 0 || z.n_post == 0)
        throw std::invalid_argument("summarize: a basis has no accepted shots");
    if (two_copy.n_post == 0)
        throw std::invalid_argument("summarize: two-copy set has no accepted shots");
    CertificationReport r;
    r.mode = mode;
    r.x = x;
    r.y = y;
    r.z = z;
    r.two_copy = two_copy;
    r.eps = epsilon_estimate(two_copy.n_post, two_copy.n_singlet);
    r.bloch = BlochVectors({x.mean, y.mean, z.mean}, {x.sem, y.sem, z.sem});
    r.fid = fidelity_lower_bound(r.bloch, r.eps);
    r.avg_single_copy_rate =
        (x.acceptance_rate() + y.acceptance_rate() + z.acceptance_rate()) / 3.0;
    return r;
}

}  // namespace switchsim
