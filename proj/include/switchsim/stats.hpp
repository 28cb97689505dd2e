#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "switchsim/decoder.hpp"

namespace switchsim {

struct MeanSem {
    double mean = 0;
    double sem = 0;
    size_t n = 0;
};

// Sample mean of +-1 values with sem = sqrt(sample variance / N).
MeanSem mean_with_sem(std::span<const int> values);

struct EpsilonEstimate {
    size_t n_post = 0;
    size_t n_singlet = 0;
    double p_f = 0;
    double sem = 0;
};

// Binomial estimate of the singlet fraction. With zero events the 1-sigma
// interval is [0, 1.147/N_post), and p_f = sem = 1.147/(2 N_post).
EpsilonEstimate epsilon_estimate(size_t n_post, size_t n_singlet);

struct BlochVectors {
    std::array<double, 3> v{};    // measured (<X>, <Y>, <Z>)
    std::array<double, 3> sem{};  // per-component 1-sigma
    std::array<double, 3> u{};    // target; defaults to the magic state

    BlochVectors();
    BlochVectors(std::array<double, 3> v_, std::array<double, 3> sem_);
    std::array<double, 3> delta() const;
};

// 1/2 + (v_X + v_Y)/(2 sqrt 2); unclamped, may exceed 1 on noisy inputs.
double fidelity_direct(const BlochVectors& bloch);

struct FidelityBound {
    double bound = 0;
    double sem = 0;
    double delta_term = 0;      // |delta|^2 / 4
    double delta_term_sem = 0;
};

// bound = 1 - (p_f + |delta|^2/4), with uncorrelated first-order error
// propagation.
FidelityBound fidelity_lower_bound(const BlochVectors& bloch, const EpsilonEstimate& eps);

// 35 p^3, the 15-to-1 distillation output infidelity.
double distillation_projection(double p);

// Dense 2x2 density operators for the certification-bound oracle.
struct Mat2c {
    std::complex<double> m[2][2];
};

Mat2c mat2_mul(const Mat2c& a, const Mat2c& b);
std::complex<double> mat2_trace(const Mat2c& a);
Mat2c density_from_bloch(double x, double y, double z);

struct PurityOracleReport {
    bool pass = true;
    double max_violation = 0;
    std::string first_failure;
    double epsilon = 0;  // exact singlet overlap of the pair
};

// Verifies, within tol: (i) Tr(rho^2) = 1 + |delta|^2/2 + 2(F-1) for each
// copy, (ii) max_i Tr(rho_i^2) >= 1 - 2*eps, (iii) for identical copies
// F >= 1 - (eps + |delta|^2/4). Throws if an input is not a valid density
// operator or sigma_t is not pure.
PurityOracleReport purity_bound_oracle_check(const Mat2c& rho1, const Mat2c& rho2,
                                             const Mat2c& sigma_t, double tol = 1e-12);

struct BasisSummary {
    size_t n_shots = 0;
    size_t n_post = 0;
    double mean = 0;
    double sem = 0;
    double acceptance_rate() const { return n_shots ? double(n_post) / double(n_shots) : 0; }
};

struct TwoCopySummary {
    size_t n_shots = 0;
    size_t n_post = 0;
    size_t n_singlet = 0;
    double acceptance_rate() const { return n_shots ? double(n_post) / double(n_shots) : 0; }
};

BasisSummary basis_summary_from(const std::vector<DecodedShot>& shots);
TwoCopySummary two_copy_summary_from(const std::vector<DecodedShot>& shots);

struct CertificationReport {
    DecodeMode mode = DecodeMode::EC;
    BasisSummary x, y, z;
    TwoCopySummary two_copy;
    EpsilonEstimate eps;
    BlochVectors bloch;
    FidelityBound fid;
    double avg_single_copy_rate = 0;
};

CertificationReport summarize(const BasisSummary& x, const BasisSummary& y,
                              const BasisSummary& z, const TwoCopySummary& two_copy,
                              DecodeMode mode);

}  // namespace switchsim
