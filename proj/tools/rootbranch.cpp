#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rootbranch/report.hpp"
#include "rootbranch/rootbranch.hpp"

namespace fs = std::filesystem;
using namespace rootbranch;

int main(int argc, char** argv) {
    CLI::App app{"Track a root branch w(x) of F(x,z) = 0 over an interval or a metric tree"};
    std::string problem_path, fixture, out_dir = ".";
    std::optional<int> samples;
    bool list = false;
    app.add_option("--problem", problem_path, "problem file");
    app.add_option("--fixture", fixture, "built-in problem name");
    app.add_option("--out", out_dir, "output directory for branch.csv and summary.json");
    app.add_option("--samples", samples, "output grid points over the domain")->check(CLI::PositiveNumber);
    app.add_flag("--list-fixtures", list, "list built-in problems and exit");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    if (list) {
        for (const Fixture& f : list_fixtures())
            std::cout << f.name << "\t" << to_string(f.expected) << "\t" << f.description << "\n";
        return 0;
    }
    if (problem_path.empty() == fixture.empty()) {
        std::cerr << "error: give exactly one of --problem or --fixture\n";
        return 1;
    }

    try {
        ProblemSpec spec;
        if (!problem_path.empty()) {
            std::ifstream in(problem_path);
            if (!in) throw std::runtime_error("cannot read " + problem_path);
            std::stringstream buf;
            buf << in.rdbuf();
            spec = parse_problem(buf.str());
        } else {
            spec.fixture = fixture;
        }
        Problem p = resolve(spec);
        if (samples) p.cfg.output_samples = *samples;

        RootBranch br = run_problem(p);

        fs::create_directories(out_dir);
        std::ofstream csv(fs::path(out_dir) / "branch.csv");
        write_csv(csv, p.domain, br);
        std::ofstream js(fs::path(out_dir) / "summary.json");
        js << summary_json(p, br).dump(2) << "\n";
        if (!csv || !js) throw std::runtime_error("cannot write output to " + out_dir);

        std::cout << p.name << ": " << to_string(br.status);
        if (br.status_location) std::cout << " at x = " << p.domain.coordinate(*br.status_location);
        std::cout << " (" << br.samples.size() << " samples)\n";
        return exit_code(br.status);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
