#pragma once

#include <functional>
#include <random>

#include "tmlab/profile.hpp"

// Independent reference computations. None of these route through the
// library's quadrature, optimizer or ODE kernels.
namespace tmlab::oracle {

/// Composite Gauss-Legendre (8 points) of f on [a, b] with n equal cells.
double gauss_composite(const std::function<double(double)>& f, double a, double b, int n);

/// I_n = n int_0^1 exp(n (t^{p'} - t)) dt by composite Gauss-Legendre with the
/// cells graded toward both endpoints.
double lp_brute_force(double p, double n);

/// 1 + exp(H_{N-1}), the closed form of the concentration level at integer p.
double harmonic_level(int p);

/// First zero of J_0 by bisection on std::cyl_bessel_j.
double bessel_j0_zero();

/// Best value of int_0^inf exp(w^2 - t) dt over w = h (min(t, L)/L)^a at full
/// budget (p = 2), by grid search over the ramp length L and shape a.
double critical_family_best(double* best_L = nullptr, double* best_a = nullptr);

/// u(0) of the positive solution of -Delta u = V_2 u^3 on the unit 3-ball,
/// u(1) = 0, by a finite-volume discretization (n cells): Petviashvili
/// iteration to the positive branch, then Newton.
double collocation_f1_height(int n = 4000);

/// max_{t >= 0} g(t) by a uniform scan of [0, cap] followed by a finer scan
/// around the best sample.
double scan_max(const std::function<double(double)>& g, double cap, int n = 400);

/// Piecewise-linear radial profile on B_R with random decreasing values
/// (finite R) or a p-harmonic tail (R = inf), scaled to unit gradient norm
/// when `unit` is set.
RadialProfile random_profile(const Space& space, std::mt19937_64& rng, bool unit = true);

}  // namespace tmlab::oracle
