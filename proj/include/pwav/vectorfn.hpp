#pragma once

#include <string>
#include <vector>

#include "pwav/testfn.hpp"

namespace pwav {

/// Ordered tuple of nonzero wavelets over one prime.
class VectorFunction {
public:
    VectorFunction(Prime p, std::vector<TestFunction> components);

    Prime prime() const { return prime_; }
    int rank() const { return static_cast<int>(components_.size()); }
    const TestFunction& component(int i) const { return components_.at(i); }
    const std::vector<TestFunction>& components() const { return components_; }

    /// Max canonical scale over components (the common V_m).
    int max_scale() const;
    /// Max support exponent over components.
    int max_support_exp() const;

private:
    Prime prime_;
    std::vector<TestFunction> components_;
};

struct WaveletIndex {
    int level = 0;        // j
    PRational shift{};    // a in I_p
    int component = 0;    // nu, 0-based
};

enum class Verdict { pass, marginal, fail };

struct CheckItem {
    std::string name;
    double deviation = 0.0;
    double tolerance = 0.0;
    std::string witness;
};

struct CheckReport {
    Verdict verdict = Verdict::pass;
    std::vector<CheckItem> items;

    void add(std::string name, double deviation, double tol,
             std::string witness = {});
    bool passed() const { return verdict == Verdict::pass; }
    /// Worst item, or nullptr when empty.
    const CheckItem* worst() const;
    std::string summary() const;
};

TestFunction system_member(const VectorFunction& Psi, const WaveletIndex& idx);

CheckReport zero_mean_check(const VectorFunction& Psi, double tol = kTol);
CheckReport orthonormality_check(const VectorFunction& Psi, double tol = kTol);

/// Closed-form shell energy (for uniform-energy inputs: p/(p-1) sum
/// |c_a|^2) with the per-probe
/// breakdown over the partition classes A_nu at scale m.
struct Lemma4Energy {
    double total = 0.0;
    std::vector<double> per_probe;  // indexed by nu in [0, p^m)
};
Lemma4Energy lemma4_energy(const TestFunction& psi, int m);

/// Brute-force triple sum truncated at level J (independent oracle).
double lemma4_energy_bruteforce(const TestFunction& psi, int m, int J);

CheckReport parseval_check(const VectorFunction& Psi, int window_exp = 1,
                           double tol = kTol);

int wpart_span_dimension(const VectorFunction& Psi, int k,
                         const std::vector<int>& subset);

CheckReport rank_bound_check(const VectorFunction& Psi);

std::string write_pwv(const VectorFunction& Psi);
VectorFunction read_pwv(const std::string& text);

}  // namespace pwav
