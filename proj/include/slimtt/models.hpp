#pragma once

#include <Eigen/Core>

#include "slimtt/reaction_system.hpp"
#include "slimtt/tensor_train.hpp"

namespace slimtt {

/// One-dimensional Ising ring: H(X) = -J sum x_i x_{i+1} - mu*h sum x_i with
/// spins x_i = +1 (state 1) / -1 (state 2).
struct IsingParams {
    int d = 4;
    double coupling = 1.0; ///< J
    double field = 0.0;    ///< mu * h
};

/// Ring of identical harmonic oscillators coupled by springs, discretized on
/// 2m+1 displacement points over [-1, 1] (mesh width 1/m).
struct OscillatorParams {
    int d = 3;
    int grid_halfwidth = 1; ///< m; mode size is 2m+1
    double mass = 1.0;
    double omega = 1.0;
    double coupling = 1.0; ///< c
    double hbar = 1.0;
};

/// Signal cascade on a chain of genes; cell states count proteins 0..n-1.
struct CascadeParams {
    int d = 20;
    int n = 64;
    double creation_rate = 0.7;
    double hill_offset = 5.0;
    double destruction_rate = 0.07;
};

/// CO oxidation on a ring of cus sites; 3 states per site
/// (1 = empty, 2 = O, 3 = CO).
struct CoOxidationParams {
    int d = 5;
    double k_o2_ad = 9.7e7;
    double k_co_ad = 1.0e7; ///< pressure-dependent; any value in 1e4..1e10
    double k_o2_de = 2.8e1;
    double k_co_de = 9.2e6;
    double k_co2_de = 1.7e5;
    double k_o_diff = 0.5;
    double k_co_diff = 6.6e-2;
};

/// Toll station with d lanes and queue states 1..n (x-1 cars in a lane).
struct TollParams {
    int d = 20;
    int n = 10;
    double sigma2_in = 2.5;
    double sigma2_out_left = 1.0;
    double sigma2_out_right = 0.5;
    double nu_out_left = -1.5;
    double nu_out_right = 1.5;
    double in_offset = 0.05;
    double change_rate = 5.0;

    double lane_position(int i) const { return -2.0 + 0.5 * (i - 1); } ///< t_i, 1-based
    double f_in(double t) const;
    double f_out(double t) const;
    double f_change(double diff) const { return diff > 0 ? change_rate : 0.0; }
};

/// Finite-difference stencil of the squared momentum operator on 2m+1 points
/// (without the hbar^2/h^2 prefactor): tridiagonal (-1, 2, -1).
Eigen::MatrixXd momentum_stencil(int m);

/// Diagonal position operator on the grid x_k = k/m, k = -m..m.
Eigen::MatrixXd position_grid(int m);

TtTensor build_ising(const IsingParams& p);
TtOperator build_oscillator(const OscillatorParams& p);
ReactionSystem build_cascade(const CascadeParams& p);
ReactionSystem build_co_oxidation(const CoOxidationParams& p);
ReactionSystem build_toll(const TollParams& p);

} // namespace slimtt
