#pragma once

#include <optional>
#include <string>

#include "pwav/construct.hpp"
#include "pwav/reduce.hpp"

namespace pwav {

/// Exit-code semantics shared by all pipelines.
enum ExitCode {
    kExitProven = 0,
    kExitRefuted = 1,
    kExitInconclusive = 2,
    kExitInputError = 3,
};

struct VerifyOutcome {
    int exit_code = kExitInputError;
    std::string verdict;  // "proven-onwb" | "refuted" | "inconclusive"
    std::string witness;
    CheckReport zero_mean;
    CheckReport orthonormality;
    CheckReport rank_bound;
    CheckReport parseval;
    std::vector<int> rank_trace;  // from the decisive reduction, if reached

    std::string report_text() const;
    std::string report_json() const;
};

/// Battery (zero-mean, orthonormality, rank bound, Parseval), then the
/// decisive reduction to an eigen standard Haar vector function.
VerifyOutcome verify_pipeline(const VectorFunction& Psi, double tol = kTol,
                              int window_exp = 1);

struct ReduceOutcome {
    int exit_code = kExitInputError;
    std::string verdict;
    std::string witness;
    std::optional<EquivalenceChain> chain;
    std::vector<int> rank_trace;

    std::string report_text() const;
    std::string report_json() const;
};

ReduceOutcome reduce_pipeline(const VectorFunction& Psi);

enum class AnalyzeKind { wpart, eigen, obstruction };

struct AnalyzeOutcome {
    int exit_code = kExitInputError;
    AnalyzeKind kind = AnalyzeKind::wpart;
    int wpart_k = 0;
    int dimension = 0;                  // wpart / obstruction
    bool obstructed = false;            // obstruction
    std::vector<std::int64_t> labels;   // eigen
    int m = 0;                          // eigen
    std::string detail;

    std::string report_text() const;
    std::string report_json() const;
};

AnalyzeOutcome analyze_pipeline(const VectorFunction& Psi, AnalyzeKind kind,
                                int wpart_k = 0);

struct ChainVerifyOutcome {
    int exit_code = kExitInputError;
    CheckReport replay;
    bool end_standard_haar = false;
    std::string verdict;

    std::string report_text() const;
    std::string report_json() const;
};

ChainVerifyOutcome chain_verify_pipeline(const EquivalenceChain& chain,
                                         double tol = kTol);

}  // namespace pwav
