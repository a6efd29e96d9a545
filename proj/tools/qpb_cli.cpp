// Command-line front end: build catalog families, run the checkers, perform
// fusion pipelines, evaluate representation-space checks, and run the
// acceptance suite. All I/O is UTF-8 JSON with exact fraction strings.
//
// Exit codes: 0 pass, 1 mathematical failure (with witnesses), 2 structural
// or parameter error.

#include "qpb/json_io.hpp"
#include "qpb/suite.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace qpb;

namespace {

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StructuralError("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void write_output(const json& j, const std::string& path) {
    if (path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(path);
        if (!out) throw StructuralError("cannot write " + path);
        out << j.dump(2) << "\n";
    }
}

struct FamilyInfo {
    std::string name;
    std::string params;
};

const std::vector<FamilyInfo>& family_list() {
    static const std::vector<FamilyInfo> families = {
        {"free1", R"({"lambda":"0","mu":"1/2","nu":"0"} with 4(mu^2-lambda*nu)=1)"},
        {"nilpotent_free1", R"({"k":3,"mu":"1/2"} with k>=3, mu=+-1/2)"},
        {"q1",
         R"({"case":"1a|1b|2|3","delta":+-1,"lambda":"1","alpha":"1/2","gamma":"1","phi":"0","with_moment_map":false})"},
        {"free2",
         R"({"case":"1..7","mu":"1/2","m":"1/2","n":"1","nu":"1","alpha":"1/2","gamma":"1","gamma0":"0","gamma1":"0","with_moment_map":false})"},
        {"vdb_quiver",
         R"({"vertices":["1","2"],"arrows":[{"name":"t","tail":"1","head":"2"}],"weights":{"t":"1"},"orderings":{"1":["t"]}})"},
        {"surface", R"({"genus":1,"boundaries":1,"weights":[2]})"},
        {"nilpotent_sum", R"({"orders":[3,3]})"},
    };
    return families;
}

CatalogBundle build_family(const std::string& family, const json& params) {
    if (family == "free1") {
        FamilyParams p = params_from_json(params);
        return free1(p.lambda.value_or(Rat(0)), p.mu.value_or(Rat(0)), p.nu.value_or(Rat(0)));
    }
    if (family == "nilpotent_free1") {
        FamilyParams p = params_from_json(params);
        int k = params.value("k", 3);
        return nilpotent_free1(k, p.mu.value_or(Rat(1, 2)));
    }
    if (family == "q1") {
        FamilyParams p = params_from_json(params);
        if (!p.case_tag) throw ParameterError("q1 needs a case tag (1a|1b|2|3)");
        return q1(q1_case_from_tag(*p.case_tag), p);
    }
    if (family == "free2") {
        FamilyParams p = params_from_json(params);
        if (!p.case_tag) throw ParameterError("free2 needs a case tag (1..7)");
        return free2(std::stoi(*p.case_tag), p);
    }
    if (family == "vdb_quiver") return vdb_quiver(quiver_from_json(params));
    if (family == "surface") return surface(surface_from_json(params));
    if (family == "nilpotent_sum") {
        std::vector<int> orders;
        for (const auto& o : params.at("orders")) orders.push_back(o.get<int>());
        return nilpotent_sum(orders);
    }
    throw ParameterError("unknown family: " + family + " (see `catalog list`)");
}

CatalogBundle load_input(const std::string& input_path, const std::string& family,
                         const std::string& params_text) {
    if (!family.empty()) {
        json params = params_text.empty() ? json::object() : json::parse(params_text);
        return build_family(family, params);
    }
    if (input_path.empty()) throw ParameterError("provide --input or --catalog");
    return bundle_from_json(read_json_file(input_path));
}

/// Default dimension vector for numeric fallbacks: every block of size two.
DimVector default_dim(const AlgebraSpec& A) {
    DimVector dim;
    dim.alpha.assign(A.num_idem(), 2);
    return dim;
}

int cmd_check(const CatalogBundle& bundle, std::uint64_t seed, std::size_t samples,
              std::size_t maxlen, const std::string& out_path) {
    json report;
    SampleOptions opts{seed, samples, maxlen};
    CheckReport anti = check_cyclic_antisymmetry(bundle.bracket, opts);
    report["antisymmetry"] = report_to_json(anti);
    CheckReport qp = check_quasi_poisson(bundle.bracket);
    report["quasi_poisson"] = report_to_json(qp);
    bool ok = anti.passed() && qp.passed();
    if (bundle.moment_map) {
        try {
            CheckReport mm = check_moment_map(bundle.bracket, *bundle.moment_map);
            report["moment_map"] = report_to_json(mm);
            report["moment_map"]["mode"] = "symbolic";
            ok = ok && mm.passed();
        } catch (const DeferToNumericError& e) {
            CheckReport mm = moment_map_numeric_check(bundle.bracket, *bundle.moment_map,
                                                      default_dim(bundle.algebra), 5, seed);
            report["moment_map"] = report_to_json(mm);
            report["moment_map"]["mode"] = "numeric";
            report["moment_map"]["reason"] = e.what();
            ok = ok && mm.passed();
        }
    }
    report["passed"] = ok;
    write_output(report, out_path);
    return ok ? 0 : 1;
}

NCPoly parse_element(const AlgebraSpec& A, const std::string& text) {
    json arr = json::array();
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) arr.push_back(tok);
    return normalize(word_from_json(A, arr), A);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact engine for double brackets on path algebras"};
    app.require_subcommand(1);

    // catalog
    auto* cat = app.add_subcommand("catalog", "list families or build a bundle");
    cat->require_subcommand(1);
    auto* cat_list = cat->add_subcommand("list", "enumerate families and parameter schemas");
    auto* cat_build = cat->add_subcommand("build", "construct a family bundle as JSON");
    std::string family, params_text, out_path;
    cat_build->add_option("family", family, "family name")->required();
    cat_build->add_option("--params", params_text, "parameters as a JSON object");
    cat_build->add_option("-o,--output", out_path, "output path (default stdout)");

    // check
    auto* chk = app.add_subcommand("check", "antisymmetry, quasi-Poisson and moment-map checks");
    std::string input_path, chk_family, chk_params, chk_out;
    std::uint64_t seed = 42;
    std::size_t samples = 64, maxlen = 4;
    chk->add_option("--input", input_path, "bundle JSON file");
    chk->add_option("--catalog", chk_family, "catalog family instead of a file");
    chk->add_option("--params", chk_params, "catalog parameters (JSON)");
    chk->add_option("--seed", seed, "seed for sampled word checks");
    chk->add_option("--samples", samples, "sampled word pairs for antisymmetry");
    chk->add_option("--maxlen", maxlen, "maximum sampled word length");
    chk->add_option("-o,--output", chk_out, "report output path");

    // fuse
    auto* fus = app.add_subcommand("fuse", "apply one or more fusion steps to a bundle");
    std::string fuse_input, fuse_request, kept, absorbed, steps_text, fuse_out;
    bool recheck = false;
    fus->add_option("--input", fuse_input, "bundle JSON file");
    fus->add_option("--request", fuse_request,
                    "request JSON {algebra, bracket, moment_map?, kept, absorbed}");
    fus->add_option("--kept", kept, "idempotent that absorbs");
    fus->add_option("--absorbed", absorbed, "idempotent that disappears");
    fus->add_option("--steps", steps_text, "comma list of kept<absorbed steps, e.g. 1<2,1<3");
    fus->add_flag("--recheck", recheck, "re-run the quasi-Poisson check after each step");
    fus->add_option("-o,--output", fuse_out, "output path (default stdout)");

    // rep
    auto* rep = app.add_subcommand("rep", "representation-space checks");
    std::string rep_algebra, rep_bracket, rep_mm, rep_input, rep_dim, rep_mode = "qp";
    std::size_t trials = 5, rep_samples = 200;
    std::uint64_t rep_seed = 42;
    rep->add_option("--input", rep_input, "bundle JSON file");
    rep->add_option("--algebra", rep_algebra, "algebra JSON file");
    rep->add_option("--bracket", rep_bracket, "bracket JSON file");
    rep->add_option("--moment-map", rep_mm, "moment map JSON file");
    rep->add_option("--dim", rep_dim, "dimension vector, e.g. 1:2,2:1")->required();
    rep->add_option("--mode", rep_mode, "jacobi | qp | moment")->required();
    rep->add_option("--trials", trials, "trials for numeric moment checks");
    rep->add_option("--seed", rep_seed, "seed");
    rep->add_option("--samples", rep_samples, "sampled index tuples beyond N = 2");

    // triple
    auto* tri = app.add_subcommand("triple", "print a triple bracket");
    std::string tri_input, first, second, third, tri_out;
    tri->add_option("--input", tri_input, "bundle JSON file")->required();
    tri->add_option("--first", first, "first element, symbols separated by spaces")->required();
    tri->add_option("--second", second, "second element")->required();
    tri->add_option("--third", third, "third element")->required();
    tri->add_option("-o,--output", tri_out, "output path");

    // emit
    auto* emit = app.add_subcommand("emit", "pretty-print a bundle's tensors");
    std::string emit_input;
    emit->add_option("--input", emit_input, "bundle JSON file")->required();

    // suite
    auto* sui = app.add_subcommand("suite", "run the acceptance matrix");
    std::string row_filter;
    bool quick = false;
    sui->add_option("--row", row_filter, "run a single row by name");
    sui->add_flag("--quick", quick, "accepted for symmetry; the full matrix is already quick");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cat_list->parsed()) {
            for (const auto& f : family_list())
                std::cout << f.name << "\n    params: " << f.params << "\n";
            return 0;
        }
        if (cat_build->parsed()) {
            json params = params_text.empty() ? json::object() : json::parse(params_text);
            write_output(bundle_to_json(build_family(family, params)), out_path);
            return 0;
        }
        if (chk->parsed()) {
            CatalogBundle bundle = load_input(input_path, chk_family, chk_params);
            return cmd_check(bundle, seed, samples, maxlen, chk_out);
        }
        if (fus->parsed()) {
            CatalogBundle bundle;
            std::vector<std::pair<std::string, std::string>> steps;
            if (!fuse_request.empty()) {
                json req = read_json_file(fuse_request);
                bundle = bundle_from_json(req);
                if (req.contains("steps")) {
                    for (const auto& st : req.at("steps"))
                        steps.emplace_back(st.at("kept").get<std::string>(),
                                           st.at("absorbed").get<std::string>());
                } else {
                    steps.emplace_back(req.at("kept").get<std::string>(),
                                       req.at("absorbed").get<std::string>());
                }
            } else {
                if (fuse_input.empty()) throw ParameterError("provide --input or --request");
                bundle = bundle_from_json(read_json_file(fuse_input));
                if (!steps_text.empty()) {
                    std::istringstream in(steps_text);
                    std::string step;
                    while (std::getline(in, step, ',')) {
                        auto sep = step.find('<');
                        if (sep == std::string::npos)
                            throw ParameterError("steps look like kept<absorbed");
                        steps.emplace_back(step.substr(0, sep), step.substr(sep + 1));
                    }
                } else {
                    if (kept.empty() || absorbed.empty())
                        throw ParameterError("provide --kept/--absorbed or --steps");
                    steps.emplace_back(kept, absorbed);
                }
            }
            json trail = json::array();
            for (const auto& [k, a] : steps) {
                bundle = fuse_bundle(bundle, k, a);
                if (recheck) {
                    CheckReport qp = check_quasi_poisson(bundle.bracket);
                    trail.push_back(json{{"kept", k},
                                         {"absorbed", a},
                                         {"quasi_poisson", report_to_json(qp)}});
                    if (!qp.passed()) {
                        json out = bundle_to_json(bundle);
                        out["recheck"] = trail;
                        write_output(out, fuse_out);
                        return 1;
                    }
                }
            }
            json out = bundle_to_json(bundle);
            if (recheck) out["recheck"] = trail;
            CheckReport anti = check_cyclic_antisymmetry(bundle.bracket);
            CheckReport qp = check_quasi_poisson(bundle.bracket);
            out["checks"] = json{{"antisymmetry", report_to_json(anti)},
                                 {"quasi_poisson", report_to_json(qp)}};
            write_output(out, fuse_out);
            return anti.passed() && qp.passed() ? 0 : 1;
        }
        if (rep->parsed()) {
            CatalogBundle bundle;
            if (!rep_input.empty()) {
                bundle = bundle_from_json(read_json_file(rep_input));
            } else {
                if (rep_algebra.empty() || rep_bracket.empty())
                    throw ParameterError("provide --input or --algebra/--bracket");
                bundle.algebra = algebra_from_json(read_json_file(rep_algebra));
                bundle.bracket = bracket_from_json(bundle.algebra, read_json_file(rep_bracket));
                if (!rep_mm.empty())
                    bundle.moment_map =
                        moment_map_from_json(bundle.algebra, read_json_file(rep_mm));
            }
            DimVector dim = dim_from_string(bundle.algebra, rep_dim);
            RepCheckOptions opts;
            opts.seed = rep_seed;
            opts.sample_count = rep_samples;
            CheckReport report;
            if (rep_mode == "jacobi") {
                report = jacobiator_check(bundle.bracket, dim, opts);
            } else if (rep_mode == "qp") {
                report = qp_rep_check(bundle.bracket, dim, opts);
            } else if (rep_mode == "moment") {
                if (!bundle.moment_map) throw ParameterError("no moment map in the input");
                report = moment_map_numeric_check(bundle.bracket, *bundle.moment_map, dim,
                                                  trials, rep_seed);
            } else {
                throw ParameterError("mode must be jacobi, qp or moment");
            }
            write_output(report_to_json(report), "");
            return report.passed() ? 0 : 1;
        }
        if (tri->parsed()) {
            CatalogBundle bundle = bundle_from_json(read_json_file(tri_input));
            const AlgebraSpec& A = bundle.algebra;
            Tensor3 t = triple_bracket(bundle.bracket, parse_element(A, first),
                                       parse_element(A, second), parse_element(A, third));
            json out{{"pretty", tensor_str(A, t)}, {"terms", tensor3_to_json(A, t)}};
            write_output(out, tri_out);
            return 0;
        }
        if (emit->parsed()) {
            CatalogBundle bundle = bundle_from_json(read_json_file(emit_input));
            const AlgebraSpec& A = bundle.algebra;
            for (const auto& [k, v] : bundle.bracket.values)
                std::cout << "<<" << A.generators[k.first].name << ","
                          << A.generators[k.second].name << ">> = " << tensor_str(A, v) << "\n";
            if (bundle.moment_map)
                for (const auto& [s, phi] : bundle.moment_map->components)
                    std::cout << "Phi_" << A.base.idempotents[s] << " = " << poly_str(A, phi)
                              << "\n";
            return 0;
        }
        if (sui->parsed()) {
            std::vector<RowResult> results = run_suite(row_filter);
            if (results.empty()) {
                std::cerr << "no such row: " << row_filter << "\n";
                return 2;
            }
            bool all = true;
            for (const auto& r : results) {
                all = all && r.passed;
                std::printf("%-14s %s  (%.2fs)  %s\n", r.name.c_str(),
                            r.passed ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
            }
            std::printf("%zu/%zu rows passed\n",
                        static_cast<std::size_t>(
                            std::count_if(results.begin(), results.end(),
                                          [](const RowResult& r) { return r.passed; })),
                        results.size());
            return all ? 0 : 1;
        }
    } catch (const DeferToNumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const StructuralError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "malformed JSON: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
