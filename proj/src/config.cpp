#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "error.hpp"

namespace qst {

namespace {

std::string trim(const std::string& s)
{
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string normalize_key(std::string k)
{
    k = trim(k);
    for (auto& c : k) c = c == '-' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return k;
}

double to_double(const std::string& s)
{
    std::string t = trim(s);
    double v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size() || t.empty() || !std::isfinite(v))
        fail(ErrorCode::config, "cannot parse number '" + t + "'");
    return v;
}

int to_int(const std::string& s)
{
    std::string t = trim(s);
    int v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size() || t.empty())
        fail(ErrorCode::config, "cannot parse integer '" + t + "'");
    return v;
}

std::string shortest(double v)
{
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

// "a, b, c" or "lo:step:hi"
std::vector<double> to_grid(const std::string& s)
{
    std::string t = trim(s);
    std::vector<double> out;
    if (t.empty()) return out;
    if (t.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(t);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(item);
        if (parts.size() != 3) fail(ErrorCode::config, "range must be lo:step:hi");
        double lo = to_double(parts[0]), step = to_double(parts[1]), hi = to_double(parts[2]);
        if (!(step > 0) || hi < lo) fail(ErrorCode::config, "range needs step > 0 and hi >= lo");
        long n = std::lround(std::floor((hi - lo) / step + 1e-9));
        if (n > 100000) fail(ErrorCode::config, "range too long");
        for (long i = 0; i <= n; ++i) out.push_back(to_double(format_number(lo + i * step)));
        return out;
    }
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(item));
    return out;
}

std::string grid_text(const std::vector<double>& g)
{
    std::string s;
    for (size_t i = 0; i < g.size(); ++i) s += (i ? ", " : "") + shortest(g[i]);
    return s;
}

void require(bool ok, const std::string& what)
{
    if (!ok) fail(ErrorCode::config, what);
}

}  // namespace

bool RunConfig::operator==(const RunConfig& o) const
{
    const auto& a = model;
    const auto& b = o.model;
    const auto& x = options;
    const auto& y = o.options;
    return a.omega0 == b.omega0 && a.force_constant == b.force_constant && a.mass == b.mass &&
           a.hopping == b.hopping && a.chi_pn == b.chi_pn && a.epsilon == b.epsilon &&
           a.lattice_length == b.lattice_length && a.temperature == b.temperature &&
           a.cutoff_override == b.cutoff_override && engines == o.engines && x.basis == y.basis &&
           x.n_max == y.n_max && x.tail_tol == y.tail_tol && x.n_max_cap == y.n_max_cap && x.probe_nmax == y.probe_nmax &&
           x.t_max_phi == y.t_max_phi && x.time_points == y.time_points &&
           x.simplified_modulus == y.simplified_modulus && x.double_max_gap == y.double_max_gap && x.threads == y.threads &&
           eps_grid == o.eps_grid && temperatures == o.temperatures && temp_grid == o.temp_grid &&
           epsilons == o.epsilons && chi_grid == o.chi_grid && fit_lo == o.fit_lo && fit_hi == o.fit_hi &&
           out_dir == o.out_dir;
}

RunConfig default_config()
{
    RunConfig c;
    c.eps_grid = to_grid("0.005:0.001:0.05");
    c.temperatures = {100.0, 300.0};
    c.temp_grid = to_grid("5:5:300");
    c.epsilons = {0.01, 0.013, 0.02, 0.021};
    c.chi_grid = to_grid("0:1:20");
    return c;
}

std::vector<std::string> config_keys()
{
    return {"omega0_cm",    "force_constant_n_per_m", "mass_kg",      "hopping_cm",  "chi_pn",
            "epsilon",      "lattice_length",         "temperature_k", "cutoff_cm",  "engine",
            "basis",        "t_max_phi",              "time_points",  "n_max",       "tail_tol",
            "n_max_cap",    "n_max_probe",            "modulus",      "double_max_gap", "threads",
            "eps_grid",     "temperatures",           "temp_grid",    "epsilons",    "chi_grid",
            "fit_lo_k",     "fit_hi_k",               "out_dir"};
}

void set_config_value(RunConfig& c, const std::string& raw_key, const std::string& raw_value)
{
    const std::string key = normalize_key(raw_key);
    const std::string v = trim(raw_value);
    auto& m = c.model;
    auto& o = c.options;
    if (key == "omega0_cm") m.omega0 = to_double(v);
    else if (key == "force_constant_n_per_m") {
        m.force_constant = to_double(v);
        require(m.force_constant > 0, "force constant must be positive");
    } else if (key == "mass_kg") {
        m.mass = to_double(v);
        require(m.mass > 0, "mass must be positive");
    } else if (key == "hopping_cm") {
        m.hopping = to_double(v);
        require(m.hopping > 0, "hopping must be positive");
    } else if (key == "chi_pn") {
        m.chi_pn = to_double(v);
        require(m.chi_pn >= 0, "chi must be >= 0");
    } else if (key == "epsilon") {
        m.epsilon = to_double(v);
        require(m.epsilon >= 0, "epsilon must be >= 0");
    } else if (key == "lattice_length") {
        m.lattice_length = to_int(v);
        require(m.lattice_length >= 4 && m.lattice_length % 2 == 0, "lattice_length must be even and >= 4");
    } else if (key == "temperature_k") {
        m.temperature = to_double(v);
        require(m.temperature >= 0, "temperature must be >= 0");
    } else if (key == "cutoff_cm") {
        if (v == "derived") m.cutoff_override.reset();
        else {
            m.cutoff_override = to_double(v);
            require(*m.cutoff_override > 0, "cutoff must be positive");
        }
    } else if (key == "engine") {
        std::vector<Engine> es;
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item == "all") {
                es = {Engine::exact, Engine::pt_full, Engine::pt_diagonal, Engine::threepath};
                continue;
            }
            es.push_back(parse_engine(item));
        }
        require(!es.empty(), "engine list is empty");
        c.engines = es;
    } else if (key == "basis") {
        if (v == "resonant") o.basis = QcCoupling::resonant;
        else if (v == "full") o.basis = QcCoupling::full;
        else fail(ErrorCode::config, "basis must be 'resonant' or 'full'");
    } else if (key == "t_max_phi") {
        o.t_max_phi = to_double(v);
        require(o.t_max_phi > 0, "t_max_phi must be positive");
    } else if (key == "time_points") {
        o.time_points = to_int(v);
        require(o.time_points >= 3, "time_points must be >= 3");
    } else if (key == "n_max") {
        if (v == "auto") o.n_max = -1;
        else {
            o.n_max = to_int(v);
            require(o.n_max >= 0, "n_max must be >= 0 or 'auto'");
        }
    } else if (key == "tail_tol") {
        o.tail_tol = to_double(v);
        require(o.tail_tol > 0 && o.tail_tol < 1e-2, "tail_tol must lie in (0, 1e-2)");
    } else if (key == "n_max_cap") {
        o.n_max_cap = to_int(v);
        require(o.n_max_cap > 0, "n_max_cap must be positive");
    } else if (key == "n_max_probe") {
        if (v == "on") o.probe_nmax = true;
        else if (v == "off") o.probe_nmax = false;
        else fail(ErrorCode::config, "n_max_probe must be 'on' or 'off'");
    } else if (key == "modulus") {
        if (v == "exact") o.simplified_modulus = false;
        else if (v == "simplified") o.simplified_modulus = true;
        else fail(ErrorCode::config, "modulus must be 'exact' or 'simplified'");
    } else if (key == "double_max_gap") {
        o.double_max_gap = to_double(v);
        require(o.double_max_gap > 0, "double_max_gap must be positive");
    } else if (key == "threads") {
        o.threads = to_int(v);
        require(o.threads >= 0, "threads must be >= 0 (0: hardware concurrency)");
    } else if (key == "eps_grid") c.eps_grid = to_grid(v);
    else if (key == "temperatures") c.temperatures = to_grid(v);
    else if (key == "temp_grid") c.temp_grid = to_grid(v);
    else if (key == "epsilons") c.epsilons = to_grid(v);
    else if (key == "chi_grid") c.chi_grid = to_grid(v);
    else if (key == "fit_lo_k") c.fit_lo = to_double(v);
    else if (key == "fit_hi_k") c.fit_hi = to_double(v);
    else if (key == "out_dir") {
        require(!v.empty(), "out_dir must not be empty");
        c.out_dir = v;
    } else
        fail(ErrorCode::config, "unknown key '" + trim(raw_key) + "'");
}

void parse_config_into(RunConfig& cfg, const std::string& text)
{
    std::stringstream ss(text);
    std::string line;
    int no = 0;
    while (std::getline(ss, line)) {
        ++no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (trim(line).empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(ErrorCode::config, "line " + std::to_string(no) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        try {
            set_config_value(cfg, key, line.substr(eq + 1));
        } catch (const Error& e) {
            fail(ErrorCode::config, "line " + std::to_string(no) + ", key '" + key + "': " + e.what());
        }
    }
    check_config(cfg);
}

RunConfig parse_config(const std::string& text)
{
    RunConfig c = default_config();
    parse_config_into(c, text);
    return c;
}

void check_config(const RunConfig& c)
{
    try {
        check_params(c.model);
    } catch (const Error& e) {
        fail(ErrorCode::config, e.what());
    }
    auto positive = [](const std::vector<double>& g, const char* name, bool allow_zero) {
        for (double x : g)
            if (allow_zero ? x < 0 : !(x > 0)) fail(ErrorCode::config, std::string(name) + " has invalid entries");
    };
    positive(c.eps_grid, "eps_grid", false);
    positive(c.temperatures, "temperatures", true);
    positive(c.temp_grid, "temp_grid", true);
    positive(c.epsilons, "epsilons", false);
    positive(c.chi_grid, "chi_grid", true);
    if (!(c.fit_hi > c.fit_lo)) fail(ErrorCode::config, "fit_hi_k must exceed fit_lo_k");
}

std::string format_config(const RunConfig& c)
{
    const auto& m = c.model;
    const auto& o = c.options;
    std::string engines;
    for (size_t i = 0; i < c.engines.size(); ++i) engines += (i ? ", " : "") + std::string(engine_name(c.engines[i]));
    std::ostringstream os;
    os << "omega0_cm = " << shortest(m.omega0) << '\n'
       << "force_constant_n_per_m = " << shortest(m.force_constant) << '\n'
       << "mass_kg = " << shortest(m.mass) << '\n'
       << "hopping_cm = " << shortest(m.hopping) << '\n'
       << "chi_pn = " << shortest(m.chi_pn) << '\n'
       << "epsilon = " << shortest(m.epsilon) << '\n'
       << "lattice_length = " << m.lattice_length << '\n'
       << "temperature_k = " << shortest(m.temperature) << '\n'
       << "cutoff_cm = " << (m.cutoff_override ? shortest(*m.cutoff_override) : std::string("derived")) << '\n'
       << "engine = " << engines << '\n'
       << "basis = " << (o.basis == QcCoupling::resonant ? "resonant" : "full") << '\n'
       << "t_max_phi = " << shortest(o.t_max_phi) << '\n'
       << "time_points = " << o.time_points << '\n'
       << "n_max = " << (o.n_max < 0 ? std::string("auto") : std::to_string(o.n_max)) << '\n'
       << "tail_tol = " << shortest(o.tail_tol) << '\n'
       << "n_max_cap = " << o.n_max_cap << '\n'
       << "n_max_probe = " << (o.probe_nmax ? "on" : "off") << '\n'
       << "modulus = " << (o.simplified_modulus ? "simplified" : "exact") << '\n'
       << "double_max_gap = " << shortest(o.double_max_gap) << '\n'
       << "threads = " << o.threads << '\n'
       << "eps_grid = " << grid_text(c.eps_grid) << '\n'
       << "temperatures = " << grid_text(c.temperatures) << '\n'
       << "temp_grid = " << grid_text(c.temp_grid) << '\n'
       << "epsilons = " << grid_text(c.epsilons) << '\n'
       << "chi_grid = " << grid_text(c.chi_grid) << '\n'
       << "fit_lo_k = " << shortest(c.fit_lo) << '\n'
       << "fit_hi_k = " << shortest(c.fit_hi) << '\n'
       << "out_dir = " << c.out_dir << '\n';
    return os.str();
}

}  // namespace qst
