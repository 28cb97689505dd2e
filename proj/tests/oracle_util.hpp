#pragma once

// Test-side dense-vector helpers, independent of the simulator's block
// engine: states are plain vectors with qubit q on bit q-1.

#include <complex>
#include <random>
#include <vector>

#include "switchsim/engine.hpp"
#include "switchsim/pauli.hpp"

namespace oracle {

using switchsim::cplx;
using Vec = std::vector<cplx>;

inline cplx inner(const Vec& a, const Vec& b) {
    cplx s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

inline double fidelity(const Vec& a, const Vec& b) { return std::norm(inner(a, b)); }

inline double expectation(const Vec& psi, const switchsim::PauliOperator& op) {
    Vec image = psi;
    switchsim::apply_pauli_to_vector(image, op);
    return inner(psi, image).real();
}

inline void apply_cnot_vec(Vec& v, int control, int target) {
    const size_t cm = 1ULL << (control - 1), tm = 1ULL << (target - 1);
    for (size_t i = 0; i < v.size(); ++i)
        if ((i & cm) && !(i & tm)) std::swap(v[i], v[i | tm]);
}

inline Vec random_state(int n_qubits, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Vec v(size_t(1) << n_qubits);
    double norm = 0;
    for (auto& a : v) {
        a = cplx(g(rng), g(rng));
        norm += std::norm(a);
    }
    double f = 1.0 / std::sqrt(norm);
    for (auto& a : v) a *= f;
    return v;
}

inline Vec tensor(const Vec& low, const Vec& high) {
    Vec out(low.size() * high.size());
    for (size_t h = 0; h < high.size(); ++h)
        for (size_t l = 0; l < low.size(); ++l) out[h * low.size() + l] = high[h] * low[l];
    return out;
}

}  // namespace oracle
