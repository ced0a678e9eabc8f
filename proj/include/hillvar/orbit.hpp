#pragma once

/// @file hillvar/orbit.hpp
/// @brief xi, eta and the planar orbit from a coefficient table.
///
///   xi  = -sum_j lambda^j sum_sigma a_{j,sigma} cos 2 sigma tau
///   eta = -sum_j lambda^j sum_sigma a_{j,sigma} sin 2 sigma tau
///   x = a(1 + xi) cos tau - a eta sin tau,  y = a(1 + xi) sin tau + a eta cos tau
///
/// Phases are given as tau / pi. Where the needed cosines and sines are
/// rational the results are exact points; elsewhere they are enclosures.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "hillvar/exactnum.hpp"
#include "hillvar/hill_coeffs.hpp"

namespace hillvar {

struct XiEta {
    RationalInterval xi;
    RationalInterval eta;
};

struct OrbitSample {
    Rational tau_over_pi;
    RationalInterval xi;
    RationalInterval eta;
    RationalInterval x;
    RationalInterval y;
};

/// One (xi, eta) per phase. Throws for n_max outside 0..J.
std::vector<XiEta> evaluate_xi_eta(const CoeffTable& table, const Rational& lambda,
                                   const std::vector<Rational>& tau_over_pi, int n_max,
                                   const Rational& tol = pow10_neg(30));

OrbitSample evaluate_xy(const CoeffTable& table, const Rational& lambda, const Rational& tau_over_pi, int n_max,
                        const Rational& a = Rational(1), const Rational& tol = pow10_neg(30));

/// samples phases tau = 2 pi k / samples, k = 0..samples-1.
std::vector<OrbitSample> sample_orbit(const CoeffTable& table, const Rational& lambda, int samples, int n_max,
                                      const Rational& a = Rational(1), const Rational& tol = pow10_neg(30));

enum class OrbitFormat { csv, json };

/// CSV with header tau,xi,eta,x,y (one row per sample) or a JSON array of
/// records. Values are tagged decimals at `digits`; tau is in radians.
std::string export_orbit(const CoeffTable& table, const Rational& lambda, int samples, int n_max, OrbitFormat format,
                         int digits = 10, const Rational& a = Rational(1));

/// Worker count: HILLVAR_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
unsigned worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads. The first
/// exception thrown by any body is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace hillvar
