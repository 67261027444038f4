#pragma once

#include "gffm/network.hpp"

namespace gffm::laws {

/// Brownian bridge endpoints and length; length equals edge resistance.
struct BridgeSpec {
    double w0;
    double wT;
    double T;
};

/// P(L_T > l) for the local time at zero of the bridge.
double local_time_survival(const BridgeSpec& b, double l);

/// Exact inverse-CDF sample of L_T; returns exactly 0 on the atom.
double sample_local_time(const BridgeSpec& b, double u);

/// P(min of the bridge > a); zero for a >= min(w0, wT).
double bridge_min_survival(const BridgeSpec& b, double a);

/// Exact inverse-CDF sample of the bridge minimum.
double sample_bridge_min(const BridgeSpec& b, double u);

struct TwoSetLawSpec {
    KernelMatrix kernel;  // effective conductance matrix on A
    BoundarySpec bc;      // carries h and the (hat, check) partition
};

/// P(delta between the two boundary blocks >= l), the product law over
/// cross pairs of the boundary kernel.
double two_set_survival(const TwoSetLawSpec& spec, double l);

/// Laplace transform at u of the effective conductance between the first
/// passage set and the check block.
double fps_laplace(double c_hat_check, double m, double h_check, double a, double u);

/// P(T_a <= t) for standard Brownian motion started at m.
double bm_hitting_cdf(double m, double a, double t);

/// CDF of the last visit time of level a by the bridge, with an atom at 0
/// when the bridge avoids a entirely.
double last_visit_cdf(const BridgeSpec& b, double a, double t);

}  // namespace gffm::laws
