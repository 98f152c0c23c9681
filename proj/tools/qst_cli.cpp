// Command-line front end; talks to the library only through the C interface.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qst/qst.h"

namespace {

const char* const kSubcommands[][2] = {
    {"spectrum", "exact levels against the perturbative ladder"},
    {"crossing", "levels near the band centre as the coupling grows"},
    {"shifts", "second-order exciton energy shifts"},
    {"propagate", "transfer amplitude G(t) for each engine"},
    {"sweep-eps", "maximum |G| against epsilon"},
    {"sweep-temp", "maximum |G| against temperature"},
    {"analytic", "closed-form optimum and frequency ratio"},
    {"validate", "internal consistency checks"},
};

int exit_code(qst_status s)
{
    switch (s) {
    case QST_OK: return 0;
    case QST_ERR_CONFIG:
    case QST_ERR_ARGUMENT: return 1;
    case QST_ERR_NUMERICAL:
    case QST_ERR_INTERNAL: return 2;
    case QST_ERR_VALIDATION: return 3;
    }
    return 2;
}

std::string kebab(std::string s)
{
    for (auto& c : s)
        if (c == '_') c = '-';
    return s;
}

std::string slurp(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exciton-phonon quantum state transfer"};
    app.set_version_flag("--version", std::string(qst_version()));
    app.require_subcommand(1);

    std::string config_path;
    bool echo = false;
    bool quiet = false;
    std::map<std::string, std::string> overrides;

    std::vector<CLI::App*> subs;
    for (const auto& sc : kSubcommands) {
        CLI::App* s = app.add_subcommand(sc[0], sc[1]);
        s->add_option("--config", config_path, "key = value configuration file");
        s->add_flag("--echo", echo, "print the resolved configuration and derived quantities");
        s->add_flag("--quiet", quiet, "no summary on stdout");
        for (size_t i = 0; i < qst_config_key_count(); ++i) {
            const std::string k = qst_config_key(i);
            s->add_option("--" + kebab(k), overrides[k], k);
        }
        subs.push_back(s);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    std::string sub;
    for (auto* s : subs)
        if (s->parsed()) sub = s->get_name();

    qst_config* cfg = nullptr;
    qst_config_create(&cfg);
    auto die = [&](qst_status st) {
        std::cerr << "error: " << qst_last_error() << "\n";
        qst_config_destroy(cfg);
        return exit_code(st);
    };

    if (!config_path.empty()) {
        std::string text;
        try {
            text = slurp(config_path);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            qst_config_destroy(cfg);
            return 1;
        }
        if (auto st = qst_config_parse(cfg, text.c_str()); st != QST_OK) return die(st);
    }
    for (const auto& [k, v] : overrides) {
        if (v.empty()) continue;
        if (auto st = qst_config_set(cfg, k.c_str(), v.c_str()); st != QST_OK) return die(st);
    }

    const char* echo_text = nullptr;
    if (auto st = qst_config_echo(cfg, &echo_text); st != QST_OK) return die(st);
    if (echo) std::cout << echo_text;

    std::string out_dir = ".";
    {
        std::istringstream is(echo_text);
        for (std::string line; std::getline(is, line);)
            if (line.rfind("out_dir = ", 0) == 0) out_dir = line.substr(10);
    }

    qst_result* res = nullptr;
    qst_status st = qst_run(cfg, sub.c_str(), &res);
    if (!res) return die(st);
    std::string run_error = st == QST_OK ? "" : qst_last_error();

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    int rc = exit_code(st);
    for (size_t t = 0; t < qst_result_table_count(res); ++t) {
        std::string name = qst_result_table_name(res, t);
        std::string path = (std::filesystem::path(out_dir) / (name + ".csv")).string();
        if (qst_result_write_csv(res, t, path.c_str()) != QST_OK) {
            std::cerr << "error: " << qst_last_error() << "\n";
            rc = 2;
            continue;
        }
        if (quiet) continue;
        std::cout << name << ": " << qst_result_rows(res, t) << " rows -> " << path << "\n";
        if (sub == "validate") {
            for (size_t r = 0; r < qst_result_rows(res, t); ++r)
                std::cout << "  " << (std::string(qst_result_cell(res, t, r, 1)) == "1" ? "PASS " : "FAIL ")
                          << qst_result_cell(res, t, r, 0) << "  " << qst_result_cell(res, t, r, 2) << "\n";
        }
    }
    if (!run_error.empty()) std::cerr << "error: " << run_error << "\n";
    qst_result_destroy(res);
    qst_config_destroy(cfg);
    return rc;
}
