#include "vcoh/suites.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace vcoh;

namespace {

int write_report(const nlohmann::json& report, const std::string& path)
{
    std::ofstream f(path);
    if (!f) {
        std::cerr << "cannot write report to " << path << "\n";
        return 2;
    }
    f << report.dump(2) << "\n";
    return 0;
}

std::string read_file(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw Error(ErrorKind::InvalidInput, "cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"vcoh: exact checks for vertex algebra cochain complexes"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string output = "vcoh_report.json";
    std::string m_text = "2";
    std::string sew_file;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", cfg.config_path, "TOML config; flags override it");
        sub->add_option("--cutoff,-K", cfg.cutoff, "weight cutoff K for inputs");
        sub->add_option("--order,-L", cfg.order, "epsilon order L");
        sub->add_option("--seed", cfg.seed, "base seed");
        sub->add_option("--count", cfg.count, "seeded cochains per slot");
        sub->add_option("--output,-o", output, "report path");
    };

    CLI::App* complex = app.add_subcommand("check-complex", "delta delta = 0 on seeded cochains");
    CLI::App* leibniz = app.add_subcommand("check-leibniz", "Leibniz law of the epsilon-product");
    CLI::App* props = app.add_subcommand("check-properties", "membership validators, locality and the form");
    CLI::App* cohom = app.add_subcommand("cohomology", "truncated cohomology at one slot");
    CLI::App* classes = app.add_subcommand("classes", "class representatives and the shift test");
    CLI::App* lie = app.add_subcommand("lie-table", "bracket table of the generators");
    CLI::App* sew = app.add_subcommand("sew-validate", "validate a sewing config");
    for (CLI::App* s : {complex, leibniz, props, cohom, classes, lie, sew}) common(s);
    cohom->add_option("--n", cfg.n, "cochain degree");
    cohom->add_option("--m", m_text, "composability, an integer or 1/2");
    lie->add_option("--t", cfg.t, "shared operators, 0..2");
    sew->add_option("file", sew_file, "sewing TOML")->required();

    std::string command = argc > 1 ? argv[1] : "";
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        // the parse did not get far enough to fill in the output path
        for (int i = 1; i + 1 < argc; ++i)
            if (std::string(argv[i]) == "-o" || std::string(argv[i]) == "--output") output = argv[i + 1];
        write_report({{"schema", "vcoh-report/1"}, {"command", command}, {"ok", false}, {"error", e.what()}}, output);
        return code == 0 ? 0 : 2;
    }

    nlohmann::json report;
    int status = 0;
    try {
        if (!cfg.config_path.empty()) {
            // flags given on the command line win over the file
            CLI::App* sub = app.get_subcommands().front();
            RunConfig from_file = cfg;
            std::string out_file;
            apply_toml(from_file, read_file(cfg.config_path), &out_file);
            auto given = [&](const char* name) { return sub->get_option(name)->count() > 0; };
            if (given("--cutoff")) from_file.cutoff = cfg.cutoff;
            if (given("--order")) from_file.order = cfg.order;
            if (given("--seed")) from_file.seed = cfg.seed;
            if (given("--count")) from_file.count = cfg.count;
            if (!out_file.empty() && !given("--output")) output = out_file;
            if (sub == cohom && given("--n")) from_file.n = cfg.n;
            if (sub == cohom && !given("--m")) m_text = from_file.half ? "1/2" : std::to_string(from_file.m);
            if (sub == lie && given("--t")) from_file.t = cfg.t;
            cfg = from_file;
        }
        if (cohom->parsed()) {
            if (m_text == "1/2") {
                cfg.half = true;
                cfg.m = 0;
            } else {
                cfg.half = false;
                cfg.m = std::stoi(m_text);
            }
        }
        cfg.validate();

        std::vector<SuiteReport> suites;
        if (complex->parsed()) suites.push_back(complex_suite(cfg));
        if (leibniz->parsed()) suites.push_back(leibniz_suite(cfg));
        if (props->parsed()) suites.push_back(properties_suite(cfg));
        if (cohom->parsed()) suites.push_back(cohomology_suite(cfg));
        if (classes->parsed()) suites.push_back(classes_suite(cfg));
        if (lie->parsed()) suites.push_back(lie_table_suite(cfg));
        if (sew->parsed()) suites.push_back(sewing_suite(sew_file));
        report = assemble_report(command, cfg, suites);
        status = report["ok"].get<bool>() ? 0 : 1;

        for (auto& s : suites)
            for (auto& a : s.assertions)
                if (!a.ok) {
                    std::cout << "FAIL " << s.suite << ": " << a.name << "\n";
                    if (a.detail.contains("violations"))
                        for (auto& v : a.detail["violations"]) std::cout << "  " << v.get<std::string>() << "\n";
                    if (a.detail.contains("witness")) std::cout << "  " << a.detail["witness"].dump() << "\n";
                }
        std::cout << command << ": " << report["passed"] << " passed, " << report["failed"] << " failed\n";
    } catch (const std::exception& e) {
        report = {{"schema", "vcoh-report/1"}, {"command", command}, {"config", cfg.to_json()}, {"ok", false},
                  {"error", e.what()}};
        std::cerr << "error: " << e.what() << "\n";
        status = 2;
    }
    if (write_report(report, output) != 0) return 2;
    return status;
}
