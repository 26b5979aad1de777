#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pwav/pipeline.hpp"

using namespace pwav;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-adic wavelet toolbox: construction, verification, "
                 "reduction, and analysis of vector functions"};
    app.require_subcommand(1);
    bool json = false;
    double tol = kTol;
    app.add_flag("--json", json, "emit the machine-readable report");
    app.add_option("--tol", tol, "value tolerance (default 1e-9)");

    // construct
    auto* c = app.add_subcommand("construct", "build a named vector function");
    std::string cname, cout_path, ccert_path;
    int cp = 2, csteps = 3, cstage = 4;
    std::uint64_t cseed = 0;
    c->add_option("name", cname,
                  "haar | example33-stage | theorem3 | random-damaged")
        ->required();
    c->add_option("--p", cp, "prime (haar, random-damaged)");
    c->add_option("--stage", cstage, "example33 stage 0..4 (default 4)");
    c->add_option("--steps", csteps, "damage steps (random-damaged)");
    c->add_option("--seed", cseed, "seed (random-damaged)");
    c->add_option("-o,--output", cout_path, "output .pwv path")->required();
    c->add_option("--cert", ccert_path, "also write the damage chain (.pwcert)");

    // verify
    auto* v = app.add_subcommand("verify", "run the full ONWB verification");
    std::string vin;
    int vwindow = 1;
    v->add_option("input", vin, "input .pwv")->required();
    v->add_option("--window", vwindow, "Parseval window exponent");

    // reduce
    auto* r = app.add_subcommand("reduce", "reduce to eigen standard Haar");
    std::string rin, rout;
    r->add_option("input", rin, "input .pwv")->required();
    r->add_option("-o,--output", rout, "output .pwcert path");

    // analyze
    auto* a = app.add_subcommand("analyze", "structural analyses");
    std::string ain;
    int awpart = 0;
    bool aeigen = false, aobstruction = false;
    a->add_option("input", ain, "input .pwv")->required();
    auto* awopt = a->add_option("--wpart", awpart, "W_k span dimension");
    a->add_flag("--eigen", aeigen, "translation eigenvalue labels");
    a->add_flag("--obstruction", aobstruction, "reducibility obstruction");

    // chain-verify
    auto* cv = app.add_subcommand("chain-verify", "replay a certificate");
    std::string cvin;
    cv->add_option("input", cvin, "input .pwcert")->required();

    // fourier
    auto* f = app.add_subcommand("fourier", "Fourier transform of a .pwf");
    std::string fin, fout;
    bool finv = false;
    f->add_option("input", fin, "input .pwf")->required();
    f->add_option("-o,--output", fout, "output .pwf path")->required();
    f->add_flag("--inverse", finv, "apply the inverse transform");

    // let the global --json / --tol appear after the subcommand name
    for (CLI::App* sub : {c, v, r, a, cv, f}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInputError;
    }

    if (c->parsed()) {
        return guarded([&] {
            if (cname == "haar") {
                spill(cout_path, write_pwv(basic_haar(Prime(cp))));
            } else if (cname == "example33-stage") {
                if (cstage < 0 || cstage > 4)
                    throw std::runtime_error("stage must be 0..4");
                spill(cout_path,
                      write_pwv(example_3_3(static_cast<Example33Stage>(cstage))));
            } else if (cname == "theorem3") {
                spill(cout_path, write_pwv(theorem3_counterexample().Psi));
            } else if (cname == "random-damaged") {
                auto [psi, chain] = random_damaged(Prime(cp), csteps, cseed);
                spill(cout_path, write_pwv(psi));
                if (!ccert_path.empty()) spill(ccert_path, write_pwcert(chain));
            } else {
                throw std::runtime_error("unknown construction: " + cname);
            }
            std::cout << "wrote " << cout_path << "\n";
            return kExitProven;
        });
    }
    if (v->parsed()) {
        return guarded([&] {
            VectorFunction Psi = read_pwv(slurp(vin));
            VerifyOutcome out = verify_pipeline(Psi, tol, vwindow);
            std::cout << (json ? out.report_json() : out.report_text());
            return out.exit_code;
        });
    }
    if (r->parsed()) {
        return guarded([&] {
            VectorFunction Psi = read_pwv(slurp(rin));
            ReduceOutcome out = reduce_pipeline(Psi);
            std::cout << (json ? out.report_json() : out.report_text());
            if (out.chain && !rout.empty()) spill(rout, write_pwcert(*out.chain));
            return out.exit_code;
        });
    }
    if (a->parsed()) {
        return guarded([&] {
            VectorFunction Psi = read_pwv(slurp(ain));
            AnalyzeKind kind;
            if (aobstruction)
                kind = AnalyzeKind::obstruction;
            else if (aeigen)
                kind = AnalyzeKind::eigen;
            else if (awopt->count() > 0)
                kind = AnalyzeKind::wpart;
            else
                throw std::runtime_error(
                    "pick one of --wpart K, --eigen, --obstruction");
            AnalyzeOutcome out = analyze_pipeline(Psi, kind, awpart);
            std::cout << (json ? out.report_json() : out.report_text());
            return out.exit_code;
        });
    }
    if (cv->parsed()) {
        return guarded([&] {
            ChainVerifyOutcome out =
                chain_verify_pipeline(read_pwcert(slurp(cvin)), tol);
            std::cout << (json ? out.report_json() : out.report_text());
            return out.exit_code;
        });
    }
    if (f->parsed()) {
        return guarded([&] {
            TestFunction fn = read_pwf(slurp(fin));
            spill(fout, write_pwf(finv ? fourier_inverse(fn) : fourier(fn)));
            std::cout << "wrote " << fout << "\n";
            return kExitProven;
        });
    }
    return kExitInputError;
}
