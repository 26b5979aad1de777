#include "pwav/pipeline.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

namespace pwav {

namespace {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::marginal: return "marginal";
        default: return "fail";
    }
}

nlohmann::json report_to_json(const CheckReport& rep) {
    nlohmann::json j;
    j["verdict"] = verdict_name(rep.verdict);
    auto items = nlohmann::json::array();
    for (const CheckItem& it : rep.items) {
        nlohmann::json ji;
        ji["name"] = it.name;
        ji["deviation"] = it.deviation;
        ji["tolerance"] = it.tolerance;
        if (!it.witness.empty()) ji["witness"] = it.witness;
        items.push_back(std::move(ji));
    }
    j["items"] = std::move(items);
    if (const CheckItem* w = rep.worst()) {
        j["max_deviation"] = w->deviation;
        j["worst_item"] = w->name;
    }
    return j;
}

void append_report_line(std::ostream& os, const std::string& name,
                        const CheckReport& rep) {
    os << "  " << name << ": " << verdict_name(rep.verdict);
    if (const CheckItem* w = rep.worst())
        os << " (max deviation " << w->deviation << " at " << w->name << ")";
    os << "\n";
}

std::vector<int> trace_ranks(const EquivalenceChain& chain) {
    std::vector<int> trace = {chain.start.rank()};
    VectorFunction cur = chain.start;
    for (const ReductionStep& st : chain.steps) {
        cur = apply_step(cur, st);
        trace.push_back(cur.rank());
    }
    return trace;
}

std::string worst_witness(const CheckReport& rep, const std::string& battery) {
    std::ostringstream os;
    os << battery;
    if (const CheckItem* w = rep.worst()) {
        os << ": " << w->name << " deviation " << w->deviation;
        if (!w->witness.empty()) os << " (" << w->witness << ")";
    }
    return os.str();
}

}  // namespace

VerifyOutcome verify_pipeline(const VectorFunction& Psi, double tol,
                              int window_exp) {
    VerifyOutcome out;
    out.zero_mean = zero_mean_check(Psi, tol);
    out.orthonormality = orthonormality_check(Psi, tol);
    out.rank_bound = rank_bound_check(Psi);
    out.parseval = parseval_check(Psi, window_exp, tol);

    const std::pair<const CheckReport*, const char*> batteries[] = {
        {&out.zero_mean, "zero-mean"},
        {&out.orthonormality, "orthonormality"},
        {&out.rank_bound, "rank-bound"},
        {&out.parseval, "parseval"},
    };
    bool marginal = false;
    for (auto [rep, name] : batteries) {
        if (rep->verdict == Verdict::fail) {
            out.exit_code = kExitRefuted;
            out.verdict = "refuted";
            out.witness = worst_witness(*rep, name);
            return out;
        }
        if (rep->verdict == Verdict::marginal) marginal = true;
    }

    try {
        auto [end, chain] = reduce_to_haar(Psi);
        out.rank_trace = trace_ranks(chain);
        if (marginal) {
            out.exit_code = kExitInconclusive;
            out.verdict = "inconclusive";
            out.witness = "battery deviations in the marginal band";
        } else {
            out.exit_code = kExitProven;
            out.verdict = "proven-onwb";
        }
    } catch (const InconclusiveError& e) {
        out.exit_code = kExitInconclusive;
        out.verdict = "inconclusive";
        out.witness = e.what();
    } catch (const RefutationError& e) {
        out.exit_code = kExitRefuted;
        out.verdict = "refuted";
        out.witness = e.what();
    }
    return out;
}

std::string VerifyOutcome::report_text() const {
    std::ostringstream os;
    os << "verify: " << verdict << "\n";
    append_report_line(os, "zero-mean", zero_mean);
    append_report_line(os, "orthonormality", orthonormality);
    append_report_line(os, "rank-bound", rank_bound);
    append_report_line(os, "parseval", parseval);
    if (!rank_trace.empty()) {
        os << "  reduction rank trace:";
        for (int r : rank_trace) os << " " << r;
        os << "\n";
    }
    if (!witness.empty()) os << "  witness: " << witness << "\n";
    os << "exit code: " << exit_code << "\n";
    return os.str();
}

std::string VerifyOutcome::report_json() const {
    nlohmann::json j;
    j["schema"] = "pwav-report-1";
    j["command"] = "verify";
    j["verdict"] = verdict;
    j["exit_code"] = exit_code;
    if (!witness.empty()) j["witness"] = witness;
    j["batteries"]["zero_mean"] = report_to_json(zero_mean);
    j["batteries"]["orthonormality"] = report_to_json(orthonormality);
    j["batteries"]["rank_bound"] = report_to_json(rank_bound);
    j["batteries"]["parseval"] = report_to_json(parseval);
    if (!rank_trace.empty()) j["rank_trace"] = rank_trace;
    return j.dump(2) + "\n";
}

ReduceOutcome reduce_pipeline(const VectorFunction& Psi) {
    ReduceOutcome out;
    try {
        auto [end, chain] = reduce_to_haar(Psi);
        out.chain = chain;
        out.rank_trace = trace_ranks(chain);
        out.exit_code = kExitProven;
        out.verdict = "proven-onwb";
    } catch (const InconclusiveError& e) {
        out.exit_code = kExitInconclusive;
        out.verdict = "inconclusive";
        out.witness = e.what();
    } catch (const RefutationError& e) {
        out.exit_code = kExitRefuted;
        out.verdict = "refuted";
        out.witness = e.what();
    }
    return out;
}

std::string ReduceOutcome::report_text() const {
    std::ostringstream os;
    os << "reduce: " << verdict << "\n";
    if (!rank_trace.empty()) {
        os << "  rank trace:";
        for (int r : rank_trace) os << " " << r;
        os << "\n";
    }
    if (!witness.empty()) os << "  witness: " << witness << "\n";
    os << "exit code: " << exit_code << "\n";
    return os.str();
}

std::string ReduceOutcome::report_json() const {
    nlohmann::json j;
    j["schema"] = "pwav-report-1";
    j["command"] = "reduce";
    j["verdict"] = verdict;
    j["exit_code"] = exit_code;
    if (!witness.empty()) j["witness"] = witness;
    if (!rank_trace.empty()) j["rank_trace"] = rank_trace;
    return j.dump(2) + "\n";
}

AnalyzeOutcome analyze_pipeline(const VectorFunction& Psi, AnalyzeKind kind,
                                int wpart_k) {
    AnalyzeOutcome out;
    out.kind = kind;
    if (kind == AnalyzeKind::wpart) {
        std::vector<int> all(Psi.rank());
        for (int i = 0; i < Psi.rank(); ++i) all[i] = i;
        out.wpart_k = wpart_k;
        out.dimension = wpart_span_dimension(Psi, wpart_k, all);
        out.detail = "W_" + std::to_string(wpart_k) + "-parts span dimension " +
                     std::to_string(out.dimension);
        out.exit_code = kExitProven;
    } else if (kind == AnalyzeKind::eigen) {
        out.m = Psi.max_scale();
        std::int64_t N = out.m >= 1 ? ipow(Psi.prime().value(), out.m) : 1;
        for (int i = 0; i < Psi.rank(); ++i) {
            auto ev = translation_eigenvalue(Psi.component(i));
            if (!ev) {
                out.detail = "component " + std::to_string(i + 1) +
                             " is not a translation eigenfunction";
                out.exit_code = kExitRefuted;
                return out;
            }
            double t = -std::arg(*ev) / (2.0 * M_PI) * static_cast<double>(N);
            std::int64_t l = std::llround(t);
            out.labels.push_back(((l % N) + N) % N);
        }
        out.detail = "translation eigenvalue labels at m = " +
                     std::to_string(out.m);
        out.exit_code = kExitProven;
    } else {
        ObstructionReport rep = reducibility_obstruction(Psi);
        out.obstructed = rep.obstructed;
        out.dimension = rep.dimension;
        out.detail = rep.obstructed
                         ? "not reducible to standard Haar (d=" +
                               std::to_string(rep.dimension) + ")"
                         : "inconclusive (d=" + std::to_string(rep.dimension) +
                               " <= 2)";
        out.exit_code = rep.obstructed ? kExitRefuted : kExitInconclusive;
    }
    return out;
}

std::string AnalyzeOutcome::report_text() const {
    std::ostringstream os;
    os << "analyze: " << detail << "\n";
    if (kind == AnalyzeKind::eigen) {
        os << "  labels:";
        for (std::int64_t l : labels) os << " " << l;
        os << "\n";
    }
    os << "exit code: " << exit_code << "\n";
    return os.str();
}

std::string AnalyzeOutcome::report_json() const {
    nlohmann::json j;
    j["schema"] = "pwav-report-1";
    j["command"] = "analyze";
    j["exit_code"] = exit_code;
    j["detail"] = detail;
    switch (kind) {
        case AnalyzeKind::wpart:
            j["kind"] = "wpart";
            j["k"] = wpart_k;
            j["dimension"] = dimension;
            break;
        case AnalyzeKind::eigen:
            j["kind"] = "eigen";
            j["m"] = m;
            j["labels"] = labels;
            break;
        case AnalyzeKind::obstruction:
            j["kind"] = "obstruction";
            j["obstructed"] = obstructed;
            j["dimension"] = dimension;
            break;
    }
    return j.dump(2) + "\n";
}

ChainVerifyOutcome chain_verify_pipeline(const EquivalenceChain& chain,
                                         double tol) {
    ChainVerifyOutcome out;
    out.replay = verify_chain(chain, tol);
    out.end_standard_haar = out.replay.passed() && is_standard_haar(chain.end);
    if (!out.replay.passed()) {
        out.exit_code = kExitRefuted;
        out.verdict = "chain replay failed";
    } else if (out.end_standard_haar) {
        out.exit_code = kExitProven;
        out.verdict = "chain valid; end is standard Haar (start generates an "
                      "orthonormal wavelet basis)";
    } else {
        out.exit_code = kExitInconclusive;
        out.verdict = "chain valid; end is not standard Haar";
    }
    return out;
}

std::string ChainVerifyOutcome::report_text() const {
    std::ostringstream os;
    os << "chain-verify: " << verdict << "\n";
    append_report_line(os, "replay", replay);
    os << "exit code: " << exit_code << "\n";
    return os.str();
}

std::string ChainVerifyOutcome::report_json() const {
    nlohmann::json j;
    j["schema"] = "pwav-report-1";
    j["command"] = "chain-verify";
    j["verdict"] = verdict;
    j["exit_code"] = exit_code;
    j["end_standard_haar"] = end_standard_haar;
    j["replay"] = report_to_json(replay);
    return j.dump(2) + "\n";
}

}  // namespace pwav
