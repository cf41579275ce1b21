// Command-line front end: parse a job (file or standard input, with flag
// overrides), run it, emit machine-readable JSON on stdout and a short
// summary on stderr.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cmcoincide/jobs.hpp"

namespace {

using cmcoincide::Json;

Json load_job(const std::string& path, bool want_stdin) {
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open job file: " + path);
        Json j;
        in >> j;
        return j;
    }
    if (want_stdin) {
        Json j;
        std::cin >> j;
        return j;
    }
    return Json::object();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"superspecial coincidence counting for quartic CM fields"};
    app.require_subcommand(1);

    std::string job_path;
    bool from_stdin = false;
    std::string p_str, n_str, mult_str, d_str, dp_str, side_str = "d";
    std::string class_index_str, alpha0_skip_str;
    bool allow_self = false, swap_A = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--job", job_path, "job JSON file");
        sub->add_flag("--stdin", from_stdin, "read the job JSON from standard input");
        return sub;
    };

    auto* bound = add_common(app.add_subcommand("bound", "crude prime bound and candidates"));
    auto* classify = add_common(app.add_subcommand("classify", "eligibility of a prime"));
    classify->add_option("--p", p_str);
    auto* coincide = add_common(
        app.add_subcommand("coincide", "coincidence count at a prime, or scan when p is absent"));
    coincide->add_option("--p", p_str);
    coincide->add_option("--n", n_str);
    coincide->add_option("--multiplicity", mult_str);
    coincide->add_flag("--allow-self", allow_self);
    coincide->add_flag("--swap-A", swap_A);
    coincide->add_option("--alpha0-skip", alpha0_skip_str);
    auto* classgroup = add_common(app.add_subcommand("classgroup", "class group of K"));
    auto* gz1 = add_common(app.add_subcommand("gz1", "classical valuation formula over Q"));
    gz1->add_option("--d", d_str);
    gz1->add_option("--dprime", dp_str);
    gz1->add_option("--p", p_str);
    gz1->add_option("--side", side_str)->check(CLI::IsMember({"d", "dprime"}));
    auto* dump = add_common(app.add_subcommand("dump-order", "dump an order lattice"));
    dump->add_option("--p", p_str);
    dump->add_option("--n", n_str);
    dump->add_option("--class-index", class_index_str);
    dump->add_flag("--swap-A", swap_A);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 64 : 0;
    }

    Json job;
    try {
        job = load_job(job_path, from_stdin);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 64;
    }

    for (CLI::App* sub : {bound, classify, coincide, classgroup, gz1, dump})
        if (sub->parsed()) job["mode"] = sub->get_name();
    if (!p_str.empty()) job["p"] = p_str;
    if (!n_str.empty()) job["n"] = n_str;
    if (!mult_str.empty()) job["multiplicity"] = mult_str;
    if (!d_str.empty()) job["d"] = d_str;
    if (!dp_str.empty()) job["dprime"] = dp_str;
    if (gz1->parsed()) job["side"] = side_str;
    if (allow_self) job["allow_self"] = true;
    if (swap_A) job["swap_A"] = true;
    if (!class_index_str.empty()) job["class_index"] = class_index_str;
    if (!alpha0_skip_str.empty()) job["alpha0_skip"] = alpha0_skip_str;

    cmcoincide::JobResult res = cmcoincide::run_job(job);
    if (res.streaming) {
        for (const Json& entry : res.stream) std::cout << entry.dump() << "\n";
    } else {
        std::cout << res.output.dump(2) << "\n";
    }
    for (const std::string& line : res.summary) std::cerr << line << "\n";
    return res.exit_code;
}
