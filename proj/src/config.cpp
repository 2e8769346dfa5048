#include "dcm/config.hpp"

#include <fstream>
#include <sstream>

namespace dcm {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
}

double to_double(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (...) {
        throw Error("config: key '" + key + "': expected a number, got '" + s + "'");
    }
}

int to_int(const std::string& s, const std::string& key) {
    return static_cast<int>(to_double(s, key));
}

bool to_bool(const std::string& s, const std::string& key) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw Error("config: key '" + key + "': expected true/false, got '" + s + "'");
}

LoadProgram parse_program(const std::string& s, const std::string& key) {
    std::istringstream ss(s);
    std::string kind;
    ss >> kind;
    auto num = [&]() {
        double v;
        if (!(ss >> v)) throw Error("config: key '" + key + "': program needs numeric args");
        return v;
    };
    if (kind == "ramp") return LoadProgram::ramp(num());
    if (kind == "step") return LoadProgram::step(num());
    if (kind == "sine_pulse") {
        const double peak = num();
        return LoadProgram::sine_pulse(peak, num());
    }
    if (kind == "table") {
        std::vector<double> ts, vs;
        std::string pair;
        while (ss >> pair) {
            const auto colon = pair.find(':');
            if (colon == std::string::npos)
                throw Error("config: key '" + key + "': table entries are t:v");
            ts.push_back(to_double(pair.substr(0, colon), key));
            vs.push_back(to_double(pair.substr(colon + 1), key));
        }
        if (ts.empty()) throw Error("config: key '" + key + "': empty table");
        return LoadProgram::table(std::move(ts), std::move(vs));
    }
    throw Error("config: key '" + key + "': unknown program '" + kind + "'");
}

std::string format_program(const LoadProgram& p) {
    std::ostringstream ss;
    ss.precision(17);
    switch (p.shape) {
        case LoadProgram::Shape::Ramp:
            ss << "ramp " << p.a;
            break;
        case LoadProgram::Shape::Step:
            ss << "step " << p.a;
            break;
        case LoadProgram::Shape::SinePulse:
            ss << "sine_pulse " << p.a << " " << p.b;
            break;
        case LoadProgram::Shape::Table:
            ss << "table";
            for (std::size_t i = 0; i < p.table_t.size(); ++i)
                ss << " " << p.table_t[i] << ":" << p.table_v[i];
            break;
    }
    return ss.str();
}

}  // namespace

ProblemConfig parse_config_text(const std::string& text) {
    ProblemConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    BCConfig* bc = nullptr;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw Error("config:" + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section == "bc") {
                cfg.bcs.emplace_back();
                bc = &cfg.bcs.back();
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("config:" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        const std::string path = section + "." + key;

        if (section == "geometry") {
            if (key == "preset") cfg.preset = val;
            else if (key == "size") cfg.size = to_double(val, path);
            else if (key == "nodes") cfg.nodes_path = val;
            else if (key == "elements") cfg.elements_path = val;
            else if (key == "mode") cfg.mode = val;
            else if (key == "thickness") cfg.thickness = to_double(val, path);
            else if (key == "seed") cfg.mesh_seed = static_cast<unsigned>(to_int(val, path));
            else throw Error("config: unknown key '" + path + "'");
        } else if (section == "material") {
            if (key == "E") cfg.E = to_double(val, path);
            else if (key == "nu") cfg.nu = to_double(val, path);
            else if (key == "rho") cfg.rho = to_double(val, path);
            else if (key == "sigma_t") cfg.sigma_t = to_double(val, path);
            else if (key == "ell_t") cfg.ell_t = to_double(val, path);
            else if (key == "G_t") cfg.G_t = to_double(val, path);
            else throw Error("config: unknown key '" + path + "'");
        } else if (section == "analysis") {
            if (key == "type") cfg.analysis = val;
            else if (key == "increments") cfg.increments = to_int(val, path);
            else if (key == "t_end") cfg.t_end = to_double(val, path);
            else if (key == "dt") cfg.dt = to_double(val, path);
            else if (key == "allow_unstable") cfg.allow_unstable = to_bool(val, path);
            else if (key == "damage") cfg.damage = to_bool(val, path);
            else throw Error("config: unknown key '" + path + "'");
        } else if (section == "bc") {
            if (!bc) throw Error("config:" + std::to_string(lineno) + ": key outside [bc]");
            if (key == "kind") bc->kind = val;
            else if (key == "select") bc->select = val;
            else if (key == "components") {
                std::istringstream cs(val);
                std::string c;
                while (cs >> c) {
                    if (c == "u1") bc->comps[0] = true;
                    else if (c == "u2") bc->comps[1] = true;
                    else if (c == "phi") bc->comps[2] = true;
                    else throw Error("config: unknown component '" + c + "'");
                }
            } else if (key == "velocity") bc->velocity = to_bool(val, path);
            else if (key == "program") bc->program = parse_program(val, path);
            else if (key == "traction") {
                std::istringstream ts(val);
                if (!(ts >> bc->traction.x() >> bc->traction.y()))
                    throw Error("config: key '" + path + "': expected two numbers");
            } else if (key == "force") {
                std::istringstream fs(val);
                if (!(fs >> bc->force(0) >> bc->force(1) >> bc->force(2)))
                    throw Error("config: key '" + path + "': expected three numbers");
            } else throw Error("config: unknown key '" + path + "'");
        } else if (section == "output") {
            if (key == "dir") cfg.out_dir = val;
            else if (key == "history") cfg.history = val;
            else if (key == "snapshot_every") cfg.snapshot_every = to_int(val, path);
            else if (key == "magnify") cfg.magnify = to_double(val, path);
            else throw Error("config: unknown key '" + path + "'");
        } else {
            throw Error("config:" + std::to_string(lineno) + ": unknown section [" + section +
                        "]");
        }
    }
    for (const BCConfig& b : cfg.bcs) {
        if (b.kind != "essential" && b.kind != "traction" && b.kind != "force")
            throw Error("config: bc.kind must be essential, traction or force (got '" + b.kind +
                        "')");
        if (b.kind == "essential" && !b.comps[0] && !b.comps[1] && !b.comps[2])
            throw Error("config: bc.components is empty for an essential bc (select = " +
                        b.select + ")");
        parse_selector(b.select);  // surface selector syntax errors at parse time
    }
    return cfg;
}

ProblemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string serialize_config(const ProblemConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    os << "[geometry]\n";
    if (!cfg.preset.empty()) os << "preset = " << cfg.preset << "\n";
    if (cfg.size > 0.0) os << "size = " << cfg.size << "\n";
    if (!cfg.nodes_path.empty()) os << "nodes = " << cfg.nodes_path << "\n";
    if (!cfg.elements_path.empty()) os << "elements = " << cfg.elements_path << "\n";
    os << "mode = " << cfg.mode << "\n";
    os << "thickness = " << cfg.thickness << "\n";
    os << "seed = " << cfg.mesh_seed << "\n";
    os << "\n[material]\n";
    os << "E = " << cfg.E << "\n";
    os << "nu = " << cfg.nu << "\n";
    os << "rho = " << cfg.rho << "\n";
    if (cfg.sigma_t > 0.0) os << "sigma_t = " << cfg.sigma_t << "\n";
    if (cfg.ell_t > 0.0) os << "ell_t = " << cfg.ell_t << "\n";
    if (cfg.G_t > 0.0) os << "G_t = " << cfg.G_t << "\n";
    os << "\n[analysis]\n";
    os << "type = " << cfg.analysis << "\n";
    os << "increments = " << cfg.increments << "\n";
    os << "t_end = " << cfg.t_end << "\n";
    if (cfg.dt > 0.0) os << "dt = " << cfg.dt << "\n";
    os << "allow_unstable = " << (cfg.allow_unstable ? "true" : "false") << "\n";
    os << "damage = " << (cfg.damage ? "true" : "false") << "\n";
    for (const BCConfig& bc : cfg.bcs) {
        os << "\n[bc]\n";
        os << "kind = " << bc.kind << "\n";
        os << "select = " << bc.select << "\n";
        if (bc.kind == "essential") {
            os << "components =";
            if (bc.comps[0]) os << " u1";
            if (bc.comps[1]) os << " u2";
            if (bc.comps[2]) os << " phi";
            os << "\n";
            os << "velocity = " << (bc.velocity ? "true" : "false") << "\n";
        }
        os << "program = " << format_program(bc.program) << "\n";
        if (bc.kind == "traction")
            os << "traction = " << bc.traction.x() << " " << bc.traction.y() << "\n";
        if (bc.kind == "force")
            os << "force = " << bc.force(0) << " " << bc.force(1) << " " << bc.force(2) << "\n";
    }
    os << "\n[output]\n";
    os << "dir = " << cfg.out_dir << "\n";
    os << "history = " << cfg.history << "\n";
    os << "snapshot_every = " << cfg.snapshot_every << "\n";
    os << "magnify = " << cfg.magnify << "\n";
    return os.str();
}

MaterialParams config_material(const ProblemConfig& cfg) {
    MaterialParams m;
    if (cfg.G_t > 0.0 && cfg.ell_t > 0.0)
        throw Error("config: specify either ell_t or G_t, not both");
    if (cfg.G_t > 0.0) {
        m = MaterialParams::from_fracture_energy(cfg.E, cfg.nu, cfg.rho, cfg.sigma_t, cfg.G_t);
    } else {
        m.E = cfg.E;
        m.nu = cfg.nu;
        m.rho = cfg.rho;
        m.sigma_t = cfg.sigma_t;
        m.ell_t = cfg.ell_t;
        if (m.sigma_t > 0.0 || m.ell_t > 0.0)
            m.validate();
        else if (!(m.E > 0.0) || !(m.nu > -1.0 && m.nu < 0.5))
            throw Error("config: material requires E > 0 and nu in (-1, 0.5)");
    }
    return m;
}

Mode config_mode(const ProblemConfig& cfg) {
    if (cfg.mode == "plane_strain") return Mode::PlaneStrain;
    if (cfg.mode == "plane_stress") return Mode::PlaneStress;
    throw Error("config: geometry.mode must be plane_strain or plane_stress");
}

BoundaryConditions config_bcs(const ProblemConfig& cfg) {
    BoundaryConditions bcs;
    for (const BCConfig& b : cfg.bcs) {
        if (b.kind == "essential") {
            EssentialBC e;
            e.where = parse_selector(b.select);
            e.comps = b.comps;
            e.program = b.program;
            e.is_velocity = b.velocity;
            if (!e.comps[0] && !e.comps[1] && !e.comps[2])
                throw Error("config: essential bc with no components (select = " + b.select + ")");
            bcs.essential.push_back(std::move(e));
        } else if (b.kind == "traction") {
            EdgeTractionBC t;
            t.where = parse_selector(b.select);
            const Vec2 vec = b.traction;
            t.traction = [vec](const Vec2&) { return vec; };
            t.program = b.program;
            bcs.tractions.push_back(std::move(t));
        } else if (b.kind == "force") {
            NodalForceBC f;
            f.where = parse_selector(b.select);
            f.force = b.force;
            f.program = b.program;
            bcs.forces.push_back(std::move(f));
        } else {
            throw Error("config: bc.kind must be essential, traction or force (got '" + b.kind +
                        "')");
        }
    }
    return bcs;
}

}  // namespace dcm
