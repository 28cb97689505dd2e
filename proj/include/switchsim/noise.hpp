#pragma once

#include <stdexcept>

namespace switchsim {

// Physical error rates; the defaults are the hardware-benchmark values
// used throughout. Channels can be toggled independently; crosstalk is
// two orders below the two-qubit rate and off by default.
struct NoiseModel {
    double p1 = 1.9e-5;          // single-qubit depolarizing per gate
    double p2 = 1.05e-3;         // two-qubit depolarizing per gate
    double p_meas1 = 1.38e-3;    // readout flip given true 1
    double p_meas0 = 6.0e-4;     // readout flip given true 0
    double p_idle = 2.0e-4;      // per-tick depolarizing per idle qubit
    double p_crosstalk = 6.6e-6; // per mid-circuit measurement, spectators

    bool gate_noise = true;
    bool readout_noise = true;
    bool idle_noise = true;
    bool crosstalk_noise = false;

    static NoiseModel defaults() { return NoiseModel{}; }
    static NoiseModel off() {
        NoiseModel n;
        n.gate_noise = n.readout_noise = n.idle_noise = n.crosstalk_noise = false;
        return n;
    }

    bool any_enabled() const {
        return gate_noise || readout_noise || idle_noise || crosstalk_noise;
    }

    void validate() const {
        for (double r : {p1, p2, p_meas1, p_meas0, p_idle, p_crosstalk})
            if (r < 0.0 || r > 1.0)
                throw std::invalid_argument("noise rate outside [0,1]");
    }
};

}  // namespace switchsim
