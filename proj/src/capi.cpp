#include "qst/qst.h"

#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "commands.hpp"
#include "error.hpp"

struct qst_config {
    qst::RunConfig cfg = qst::default_config();
    std::string echo;
};

struct qst_result {
    qst::RunConfig cfg;
    std::string subcommand;
    std::vector<qst::Table> tables;
    std::string scratch;
};

namespace {

thread_local std::string last_error;

template <class F>
qst_status guarded(F&& f)
{
    last_error.clear();
    try {
        return f();
    } catch (const qst::Error& e) {
        last_error = e.what();
        return static_cast<qst_status>(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return QST_ERR_NUMERICAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return QST_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return QST_ERR_INTERNAL;
    }
}

qst_status bad(const char* msg)
{
    last_error = msg;
    return QST_ERR_ARGUMENT;
}

const qst::Table* table_at(const qst_result* r, size_t t)
{
    if (!r || t >= r->tables.size()) return nullptr;
    return &r->tables[t];
}

}  // namespace

extern "C" {

const char* qst_version(void) { return qst::version_string; }

const char* qst_last_error(void) { return last_error.c_str(); }

qst_status qst_config_create(qst_config** out)
{
    if (!out) return bad("null output pointer");
    return guarded([&] {
        *out = new qst_config();
        return QST_OK;
    });
}

void qst_config_destroy(qst_config* cfg) { delete cfg; }

qst_status qst_config_parse(qst_config* cfg, const char* text)
{
    if (!cfg || !text) return bad("null argument");
    return guarded([&] {
        qst::RunConfig tmp = cfg->cfg;
        qst::parse_config_into(tmp, text);
        cfg->cfg = std::move(tmp);
        return QST_OK;
    });
}

qst_status qst_config_set(qst_config* cfg, const char* key, const char* value)
{
    if (!cfg || !key || !value) return bad("null argument");
    return guarded([&] {
        qst::RunConfig tmp = cfg->cfg;
        qst::set_config_value(tmp, key, value);
        cfg->cfg = std::move(tmp);
        return QST_OK;
    });
}

qst_status qst_config_echo(qst_config* cfg, const char** text)
{
    if (!cfg || !text) return bad("null argument");
    return guarded([&] {
        cfg->echo = qst::format_config(cfg->cfg);
        for (const auto& l : qst::derived_echo(cfg->cfg.model)) cfg->echo += "# " + l + "\n";
        *text = cfg->echo.c_str();
        return QST_OK;
    });
}

size_t qst_config_key_count(void) { return qst::config_keys().size(); }

const char* qst_config_key(size_t i)
{
    static const std::vector<std::string> keys = qst::config_keys();
    return i < keys.size() ? keys[i].c_str() : nullptr;
}

qst_status qst_config_derived(const qst_config* cfg, const char* name, double* value)
{
    if (!cfg || !name || !value) return bad("null argument");
    return guarded([&] {
        qst::DerivedParams d = qst::derive(cfg->cfg.model);
        const std::string n = name;
        if (n == "E_B_cm") *value = d.binding;
        else if (n == "Omega_c_cm") *value = d.cutoff;
        else if (n == "Omega_cm") *value = d.omega;
        else if (n == "eta_cm") *value = d.eta;
        else if (n == "g_cm") *value = d.g;
        else if (n == "Delta_N") *value = d.delta_n;
        else if (n == "E_bar_cm") *value = d.e_bar;
        else if (n == "Delta_omega_cm") *value = d.delta_omega;
        else if (n == "beta_Omega") *value = d.beta_omega;
        else if (n == "n_bar") *value = d.n_bar;
        else if (n == "L_star") *value = d.l_star;
        else return bad("unknown derived quantity");
        return QST_OK;
    });
}

qst_status qst_run(const qst_config* cfg, const char* subcommand, qst_result** out)
{
    if (!cfg || !subcommand || !out) return bad("null argument");
    *out = nullptr;
    return guarded([&] {
        auto r = qst::run_command(cfg->cfg, subcommand);
        auto* res = new qst_result();
        res->cfg = cfg->cfg;
        res->subcommand = subcommand;
        res->tables = std::move(r.tables);
        *out = res;
        if (r.validation_failed) {
            last_error = "one or more validation checks failed";
            return QST_ERR_VALIDATION;
        }
        return QST_OK;
    });
}

void qst_result_destroy(qst_result* res) { delete res; }

size_t qst_result_table_count(const qst_result* res) { return res ? res->tables.size() : 0; }

const char* qst_result_table_name(const qst_result* res, size_t table)
{
    auto* t = table_at(res, table);
    return t ? t->name.c_str() : nullptr;
}

size_t qst_result_rows(const qst_result* res, size_t table)
{
    auto* t = table_at(res, table);
    return t ? t->rows.size() : 0;
}

size_t qst_result_cols(const qst_result* res, size_t table)
{
    auto* t = table_at(res, table);
    return t ? t->columns.size() : 0;
}

const char* qst_result_column_name(const qst_result* res, size_t table, size_t col)
{
    auto* t = table_at(res, table);
    if (!t || col >= t->columns.size()) return nullptr;
    return t->columns[col].c_str();
}

qst_status qst_result_value(const qst_result* res, size_t table, size_t row, size_t col, double* value)
{
    auto* t = table_at(res, table);
    if (!t || !value || row >= t->rows.size() || col >= t->columns.size()) return bad("index out of range");
    const auto& c = t->rows[row][col];
    if (auto* d = std::get_if<double>(&c)) *value = *d;
    else if (auto* i = std::get_if<long long>(&c)) *value = static_cast<double>(*i);
    else return bad("cell is not numeric");
    last_error.clear();
    return QST_OK;
}

const char* qst_result_cell(const qst_result* res, size_t table, size_t row, size_t col)
{
    auto* t = table_at(res, table);
    if (!t || row >= t->rows.size() || col >= t->columns.size()) return nullptr;
    auto* r = const_cast<qst_result*>(res);
    r->scratch = qst::format_cell(t->rows[row][col]);
    return r->scratch.c_str();
}

qst_status qst_result_write_csv(const qst_result* res, size_t table, const char* path)
{
    auto* t = table_at(res, table);
    if (!t || !path) return bad("bad table index or path");
    return guarded([&] {
        std::ofstream f(path);
        if (!f) qst::fail(qst::ErrorCode::argument, std::string("cannot open ") + path);
        qst::write_csv(f, *t, qst::provenance_header(res->cfg, res->subcommand));
        if (!f) qst::fail(qst::ErrorCode::internal, std::string("write failed: ") + path);
        return QST_OK;
    });
}

qst_status qst_propagate(const qst_config* cfg, const double* times_phi, size_t n, double* re, double* im)
{
    if (!cfg || (n > 0 && (!times_phi || !re || !im))) return bad("null argument");
    return guarded([&] {
        qst::check_config(cfg->cfg);
        std::vector<double> t(times_phi, times_phi + n);
        auto s = qst::propagate(cfg->cfg.model, cfg->cfg.engines.front(), cfg->cfg.options, t);
        for (size_t i = 0; i < n; ++i) {
            re[i] = s.values[i].real();
            im[i] = s.values[i].imag();
        }
        return QST_OK;
    });
}

}  // extern "C"
