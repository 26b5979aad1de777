#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "pwav/reduce.hpp"

namespace pwav {

/// Theta = (theta^(1), ..., theta^(p-1)), theta^(nu)(x) = phi(x) chi_p(nu x/p).
VectorFunction basic_haar(Prime p);

/// f^(k) = f_{n, k/p^n}, k = 0..p^n - 1; generates the same wavelet system.
std::vector<TestFunction> split(const TestFunction& f, int n);

/// Inverse of split(., 1): f with split(f, 1) == fs, if one exists.
std::optional<TestFunction> merge(const std::vector<TestFunction>& fs);

/// Components of the result are U * components of Psi.
VectorFunction unitary_mix(const VectorFunction& Psi, const Mat& U);

enum class Example33Stage {
    base,           // (psi)
    split_pair,     // (psi1, psi2)
    split_triple,   // (psi1, psi21, psi22)
    mixed_triple,   // (psi~1, psi~2, psi~3)
    extended,       // (psi~~11, psi~~12, psi~2, psi~3)
};
VectorFunction example_3_3(Example33Stage stage);

struct Theorem3Construction {
    VectorFunction Psi;                        // (g0, g1, h2, h)
    std::map<std::string, TestFunction> parts; // f0,f1,g0..g3,h0,h1,h2,h
    Mat U;                                     // 3x3 unitary mixing h0,h1,h2
};
Theorem3Construction theorem3_counterexample();

/// Seeded walk from Theta through splits and unitary mixes.
std::pair<VectorFunction, EquivalenceChain> random_damaged(Prime p, int steps,
                                                           std::uint64_t seed);

}  // namespace pwav
