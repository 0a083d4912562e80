#pragma once

#include <span>
#include <string>

#include "kerrflux/model.hpp"
#include "kerrflux/sweep.hpp"
#include "kerrflux/types.hpp"

namespace kerrflux {

// Reduced two-mode model obtained by adiabatically eliminating a fast
// auxiliary mode c from a three-mode ring. The surviving hoppings are
// direction dependent:
//   J_{a->b} = J - i J' e^{-i phi},  J_{b->a} = J - i J' e^{+i phi},
// with J' = 2 G_ac G_bc / gamma_c, and the eliminated mode induces decays
// gamma_a' = 4 G_ac^2 / gamma_c, gamma_b' = 4 G_bc^2 / gamma_c. base keeps
// the original (un-augmented) decay rates; the induced decay and the
// anti-Hermitian part of the hoppings are both carried by one collective
// jump operator sqrt(gamma_b') b + sqrt(gamma_a') e^{-i phi} a, the unique
// completely positive form consistent with eliminating one lossy mode.
struct EffectiveModel {
    Complex j_forward;  // J_{a->b}
    Complex j_backward; // J_{b->a}
    double j_induced = 0.0;       // J'
    double direct_hopping = 0.0;  // J
    double flux = 0.0;            // phi, total cycle flux oriented a->b->c->a
    double gamma_a_induced = 0.0;
    double gamma_b_induced = 0.0;
    NetworkModel base; // two-mode reduced network (original gammas, drive)
    std::string mode_a;
    std::string mode_b;
    std::string eliminated_mode;
};

// Requires a degenerate-frequency three-mode ring whose fastest mode
// dominates every other rate and coupling by at least a factor of 5 and does
// not carry the drive.
EffectiveModel adiabatic_eliminate(const NetworkModel& network);

// Executes the reduced master equation over a detuning grid: coherent part
// with the Hermitian hopping J, Lindblad channels gamma_a L[a], gamma_b L[b]
// plus the collective channel above; solves with the drive on a and on b and
// returns T and g2 for both directions.
SweepResult effective_observables(const EffectiveModel& eff, const FockBasis& basis,
                                  std::span<const double> detuning_grid);

} // namespace kerrflux
