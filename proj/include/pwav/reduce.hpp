#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pwav/complexmat.hpp"
#include "pwav/vectorfn.hpp"

namespace pwav {

/// One replayable move between vector functions generating the same
/// wavelet system (or unitarily equivalent ones).
struct ReductionStep {
    struct Unitary {
        Mat U;
    };
    struct Split {
        int component = 0;
        int n = 1;
    };
    struct Merge {
        std::vector<int> components;  // p source indices, in order
        int position = 0;             // index of the merged result
    };
    struct Regroup {
        int m = 0;
        std::vector<std::int64_t> labels;  // l_nu per component
    };
    std::variant<Unitary, Split, Merge, Regroup> op;
};

struct EquivalenceChain {
    VectorFunction start;
    std::vector<ReductionStep> steps;
    VectorFunction end;
};

struct EigenClassification {
    int m = 0;
    std::vector<std::int64_t> labels;           // l_nu in S_m
    std::vector<std::vector<int>> groups;       // T_mu, mu = 1..p-1 (0-based slot mu-1)
};

/// Thrown when an engine step fails in a way that, per the reduction
/// theory, proves the input does not generate an ONWB.
struct RefutationError : std::runtime_error {
    explicit RefutationError(const std::string& what) : std::runtime_error(what) {}
};

/// Marginal-tolerance outcome: neither proven nor refuted.
struct InconclusiveError : std::runtime_error {
    explicit InconclusiveError(const std::string& what)
        : std::runtime_error(what) {}
};

/// Replay a single step on Psi.
VectorFunction apply_step(const VectorFunction& Psi, const ReductionStep& step);

/// Normalized alpha with sum_nu alpha_nu psi^(nu) in V_{m-1}, or nullopt.
std::optional<Vec> find_lower_combo(const VectorFunction& Psi, int m);

/// Mix by a unitary whose first row is alpha, then split the first
/// component (now in V_{m-1}) once; rank grows by p-1. Also appends the
/// two steps taken to `steps` when non-null.
VectorFunction prop7_step(const VectorFunction& Psi, const Vec& alpha,
                          std::vector<ReductionStep>* steps = nullptr);

/// Translation matrix A_0 with Psi(x-1) = A_0 Psi(x).
Mat solve_A0(const VectorFunction& Psi);

/// Diagonalize the translation action; returns the eigen vector function.
VectorFunction prop10_step(const VectorFunction& Psi, int m,
                           std::vector<ReductionStep>* steps = nullptr);

EigenClassification classify_eigen(const VectorFunction& Psi, int m);

VectorFunction prop11_regroup(const VectorFunction& Psi,
                              const EigenClassification& cls,
                              std::vector<ReductionStep>* steps = nullptr);

/// Full engine: returns the eigen standard Haar end plus the chain.
/// Throws RefutationError / InconclusiveError with the failing witness.
std::pair<VectorFunction, EquivalenceChain> reduce_to_haar(
    const VectorFunction& Psi);

struct HaarCoordinates {
    int n = 0;
    // c[mu](nu, k): component mu over theta^(nu+1)_{0,k/p^n}
    std::vector<Mat> c;
    Mat U;  // rank (p-1)p^n witness, Psi' = U Theta'
    bool unitary = false;
};
HaarCoordinates haar_coordinates(const VectorFunction& Psi);

bool is_standard_haar(const VectorFunction& Psi);

CheckReport verify_chain(const EquivalenceChain& chain, double tol = kTol);

struct ObstructionReport {
    bool obstructed = false;  // true: reduction to standard Haar impossible
    int dimension = 0;        // W_3-part span dimension of the V_4 components
    std::string detail;
};
ObstructionReport reducibility_obstruction(const VectorFunction& Psi);

std::string write_pwcert(const EquivalenceChain& chain);
EquivalenceChain read_pwcert(const std::string& text);

}  // namespace pwav
