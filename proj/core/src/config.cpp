#include "orbitbound/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace orbitbound {

namespace {

// ---------------------------------------------------------------------------
// Value model and line-level parsing
// ---------------------------------------------------------------------------

struct Value {
    enum class Kind { Number, Integer, String, Array };
    Kind kind = Kind::Number;
    double number = 0.0;
    long long integer = 0;
    std::string text;
    std::vector<Value> array;

    double as_number() const { return kind == Kind::Integer ? static_cast<double>(integer) : number; }
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

/// Removes a trailing comment, respecting double-quoted strings.
std::string_view strip_comment(std::string_view line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        else if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

class ValueParser {
public:
    ValueParser(std::string_view text, std::string path) : s_(text), path_(std::move(path)) {}

    Value parse_all() {
        const Value v = parse();
        skip_space();
        if (pos_ != s_.size()) fail("trailing characters after value");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& message) const { throw ConfigError(path_, message); }

    void skip_space() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    Value parse() {
        skip_space();
        if (pos_ >= s_.size()) fail("missing value");
        const char c = s_[pos_];
        if (c == '"') return parse_string();
        if (c == '[') return parse_array();
        return parse_scalar();
    }

    Value parse_string() {
        ++pos_;
        std::string out;
        while (pos_ < s_.size() && s_[pos_] != '"') out.push_back(s_[pos_++]);
        if (pos_ >= s_.size()) fail("unterminated string");
        ++pos_;
        Value v;
        v.kind = Value::Kind::String;
        v.text = std::move(out);
        return v;
    }

    Value parse_array() {
        ++pos_;
        Value v;
        v.kind = Value::Kind::Array;
        skip_space();
        if (pos_ < s_.size() && s_[pos_] == ']') {
            ++pos_;
            return v;
        }
        while (true) {
            v.array.push_back(parse());
            skip_space();
            if (pos_ >= s_.size()) fail("unterminated array");
            if (s_[pos_] == ',') {
                ++pos_;
                continue;
            }
            if (s_[pos_] == ']') {
                ++pos_;
                return v;
            }
            fail("expected ',' or ']' in array");
        }
    }

    Value parse_scalar() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']') ++pos_;
        const std::string token{trim(s_.substr(start, pos_ - start))};
        if (token.empty()) fail("missing value");

        const bool looks_integer =
            token.find_first_not_of("+-0123456789") == std::string::npos;
        Value v;
        if (looks_integer) {
            try {
                std::size_t used = 0;
                v.integer = std::stoll(token, &used);
                if (used != token.size()) throw std::invalid_argument(token);
                v.kind = Value::Kind::Integer;
                return v;
            } catch (const std::exception&) {
                fail("invalid integer '" + token + "'");
            }
        }
        try {
            std::size_t used = 0;
            v.number = std::stod(token, &used);
            if (used != token.size()) throw std::invalid_argument(token);
            v.kind = Value::Kind::Number;
            return v;
        } catch (const std::exception&) {
            fail("invalid number '" + token + "'");
        }
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::string path_;
};

using Table = std::map<std::string, Value>;

struct Document {
    std::map<std::string, Table> tables;
    std::vector<Table> harmonics;  // [[forcing.harmonics]] entries in order
};

Document parse_document(std::string_view text) {
    Document doc;
    Table* current = nullptr;
    std::string current_path;

    std::size_t line_no = 0;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        const std::size_t end = text.find('\n', begin);
        std::string_view raw = text.substr(
            begin, end == std::string_view::npos ? std::string_view::npos : end - begin);
        begin = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;

        const std::string_view line = trim(strip_comment(raw));
        if (line.empty()) continue;

        if (line.starts_with("[[")) {
            if (!line.ends_with("]]"))
                throw ConfigError("", "line " + std::to_string(line_no) + ": malformed table header");
            const std::string name{trim(line.substr(2, line.size() - 4))};
            if (name != "forcing.harmonics")
                throw ConfigError(name, "unknown table array");
            doc.harmonics.emplace_back();
            current = &doc.harmonics.back();
            current_path = "forcing.harmonics[" + std::to_string(doc.harmonics.size() - 1) + "]";
            continue;
        }
        if (line.starts_with("[")) {
            if (!line.ends_with("]"))
                throw ConfigError("", "line " + std::to_string(line_no) + ": malformed table header");
            const std::string name{trim(line.substr(1, line.size() - 2))};
            if (name != "system" && name != "potential" && name != "forcing" && name != "analysis")
                throw ConfigError(name, "unknown section");
            if (doc.tables.contains(name)) throw ConfigError(name, "duplicate section");
            current = &doc.tables[name];
            current_path = name;
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("", "line " + std::to_string(line_no) + ": expected key = value");
        if (current == nullptr)
            throw ConfigError("", "line " + std::to_string(line_no) + ": key outside any section");
        const std::string key{trim(line.substr(0, eq))};
        if (key.empty())
            throw ConfigError(current_path, "line " + std::to_string(line_no) + ": empty key");
        const std::string path = current_path + "." + key;
        if (current->contains(key)) throw ConfigError(path, "duplicate key");
        current->emplace(key, ValueParser(trim(line.substr(eq + 1)), path).parse_all());
    }
    return doc;
}

// ---------------------------------------------------------------------------
// Typed extraction
// ---------------------------------------------------------------------------

/// Wraps one table with its path and tracks consumed keys so that unknown
/// keys become schema errors.
class Fields {
public:
    Fields(const Table* table, std::string path) : table_(table), path_(std::move(path)) {}

    bool has(const std::string& key) const { return table_ != nullptr && table_->contains(key); }

    const Value* get(const std::string& key) {
        if (table_ == nullptr) return nullptr;
        const auto it = table_->find(key);
        if (it == table_->end()) return nullptr;
        used_.insert(key);
        return &it->second;
    }

    const Value& require(const std::string& key) {
        const Value* v = get(key);
        if (v == nullptr) throw ConfigError(path(key), "required key missing");
        return *v;
    }

    double number(const std::string& key) {
        const Value& v = require(key);
        if (v.kind != Value::Kind::Number && v.kind != Value::Kind::Integer)
            throw ConfigError(path(key), "expected a number");
        return v.as_number();
    }

    double number_or(const std::string& key, double fallback) {
        return has(key) ? number(key) : fallback;
    }

    long long integer(const std::string& key) {
        const Value& v = require(key);
        if (v.kind != Value::Kind::Integer) throw ConfigError(path(key), "expected an integer");
        return v.integer;
    }

    std::string text(const std::string& key) {
        const Value& v = require(key);
        if (v.kind != Value::Kind::String) throw ConfigError(path(key), "expected a string");
        return v.text;
    }

    Vector number_array(const std::string& key) {
        const Value& v = require(key);
        if (v.kind != Value::Kind::Array) throw ConfigError(path(key), "expected an array");
        Vector out;
        for (std::size_t i = 0; i < v.array.size(); ++i) {
            const Value& e = v.array[i];
            if (e.kind != Value::Kind::Number && e.kind != Value::Kind::Integer)
                throw ConfigError(path(key) + "[" + std::to_string(i) + "]", "expected a number");
            out.push_back(e.as_number());
        }
        return out;
    }

    Matrix matrix(const std::string& key) {
        const Value& v = require(key);
        if (v.kind != Value::Kind::Array) throw ConfigError(path(key), "expected an array of rows");
        std::vector<Vector> rows;
        for (std::size_t i = 0; i < v.array.size(); ++i) {
            const Value& row = v.array[i];
            if (row.kind != Value::Kind::Array)
                throw ConfigError(path(key) + "[" + std::to_string(i) + "]", "expected a row array");
            Vector r;
            for (std::size_t j = 0; j < row.array.size(); ++j) {
                const Value& e = row.array[j];
                if (e.kind != Value::Kind::Number && e.kind != Value::Kind::Integer)
                    throw ConfigError(path(key) + "[" + std::to_string(i) + "][" +
                                          std::to_string(j) + "]",
                                      "expected a number");
                r.push_back(e.as_number());
            }
            rows.push_back(std::move(r));
        }
        try {
            return Matrix::from_rows(rows);
        } catch (const std::exception& e) {
            throw ConfigError(path(key), e.what());
        }
    }

    std::vector<int> integer_array(const std::string& key) {
        const Value& v = require(key);
        if (v.kind != Value::Kind::Array) throw ConfigError(path(key), "expected an array");
        std::vector<int> out;
        for (std::size_t i = 0; i < v.array.size(); ++i) {
            if (v.array[i].kind != Value::Kind::Integer)
                throw ConfigError(path(key) + "[" + std::to_string(i) + "]", "expected an integer");
            out.push_back(static_cast<int>(v.array[i].integer));
        }
        return out;
    }

    void finish() const {
        if (table_ == nullptr) return;
        for (const auto& [key, value] : *table_)
            if (!used_.contains(key)) throw ConfigError(path(key), "unknown key");
    }

    std::string path(const std::string& key) const { return path_ + "." + key; }

private:
    const Table* table_;
    std::string path_;
    std::set<std::string> used_;
};

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string format_vector(const Vector& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i != 0) out += ", ";
        out += format_number(v[i]);
    }
    return out + "]";
}

std::string format_matrix(const Matrix& m) {
    std::string out = "[";
    for (int i = 0; i < m.rows(); ++i) {
        if (i != 0) out += ", ";
        out += "[";
        for (int j = 0; j < m.cols(); ++j) {
            if (j != 0) out += ", ";
            out += format_number(m(i, j));
        }
        out += "]";
    }
    return out + "]";
}

}  // namespace

RunConfig parse_config(std::string_view text) {
    const Document doc = parse_document(text);
    RunConfig config;

    const auto find_table = [&](const char* name) -> const Table* {
        const auto it = doc.tables.find(name);
        return it == doc.tables.end() ? nullptr : &it->second;
    };

    // [system]
    const Table* system_table = find_table("system");
    if (system_table == nullptr) throw ConfigError("system", "required section missing");
    Fields system(system_table, "system");
    const long long dim = system.integer("dimension");
    if (dim < 1 || dim > 1024) throw ConfigError("system.dimension", "must be in [1, 1024]");
    config.system.dimension = static_cast<int>(dim);
    const auto square_matrix = [&](const char* key) {
        Matrix m = system.matrix(key);
        if (m.rows() != config.system.dimension || m.cols() != config.system.dimension)
            throw ConfigError(std::string("system.") + key,
                              "must be a square matrix of size system.dimension");
        return m;
    };
    config.system.mass = square_matrix("mass");
    config.system.damping = square_matrix("damping");
    config.system.stiffness = square_matrix("stiffness");
    config.system.domain_radius = system.number_or("domain_radius", 1.0);
    system.finish();

    // [potential]
    Fields potential(find_table("potential"), "potential");
    std::string kind_name = "none";
    if (potential.has("kind")) kind_name = potential.text("kind");
    try {
        config.system.potential.kind = potential_kind_from_string(kind_name);
    } catch (const std::exception& e) {
        throw ConfigError("potential.kind", e.what());
    }
    if (config.system.potential.kind != PotentialKind::None) {
        config.system.potential.growth_coef = potential.number("u0");
        config.system.potential.growth_exponent = potential.number("r");
        config.system.potential.gradient_bound = potential.number("U0");
    } else {
        config.system.potential.growth_coef = potential.number_or("u0", 0.0);
        config.system.potential.growth_exponent = potential.number_or("r", 0.0);
        config.system.potential.gradient_bound = potential.number_or("U0", 0.0);
    }
    if (potential.has("delta")) config.cubic_coef = potential.number("delta");
    potential.finish();

    // [forcing]
    const Table* forcing_table = find_table("forcing");
    if (forcing_table == nullptr) throw ConfigError("forcing", "required section missing");
    Fields forcing(forcing_table, "forcing");
    double period = 0.0;
    const bool has_period = forcing.has("period");
    const bool has_omega = forcing.has("omega");
    if (has_period == has_omega)
        throw ConfigError("forcing", "exactly one of 'period' or 'omega' is required");
    if (has_period) {
        period = forcing.number("period");
    } else {
        const double omega = forcing.number("omega");
        if (!(omega > 0.0)) throw ConfigError("forcing.omega", "must be positive");
        period = 2.0 * std::numbers::pi / omega;
    }
    if (!(period > 0.0)) throw ConfigError("forcing.period", "must be positive");

    Vector mean(config.system.dimension, 0.0);
    if (forcing.has("mean")) {
        mean = forcing.number_array("mean");
        if (static_cast<int>(mean.size()) != config.system.dimension)
            throw ConfigError("forcing.mean", "length must equal system.dimension");
    }
    forcing.finish();

    std::vector<Harmonic> harmonics;
    for (std::size_t i = 0; i < doc.harmonics.size(); ++i) {
        const std::string path = "forcing.harmonics[" + std::to_string(i) + "]";
        Fields h(&doc.harmonics[i], path);
        Harmonic mode;
        const long long n = h.integer("n");
        if (n < 1) throw ConfigError(path + ".n", "must be >= 1");
        mode.index = static_cast<int>(n);
        mode.cos_coef = h.has("cos") ? h.number_array("cos") : Vector(config.system.dimension, 0.0);
        mode.sin_coef = h.has("sin") ? h.number_array("sin") : Vector(config.system.dimension, 0.0);
        if (static_cast<int>(mode.cos_coef.size()) != config.system.dimension)
            throw ConfigError(path + ".cos", "length must equal system.dimension");
        if (static_cast<int>(mode.sin_coef.size()) != config.system.dimension)
            throw ConfigError(path + ".sin", "length must equal system.dimension");
        h.finish();
        harmonics.push_back(std::move(mode));
    }
    try {
        config.forcing = TrigForcing(period, std::move(mean), std::move(harmonics));
    } catch (const std::exception& e) {
        throw ConfigError("forcing", e.what());
    }

    // [analysis]
    Fields analysis(find_table("analysis"), "analysis");
    if (analysis.has("periods")) {
        config.analysis.periods = analysis.integer_array("periods");
        if (config.analysis.periods.empty())
            throw ConfigError("analysis.periods", "must not be empty");
        for (int n : config.analysis.periods)
            if (n < 1) throw ConfigError("analysis.periods", "entries must be >= 1");
    }
    config.analysis.amplitude = analysis.number_or("amplitude", 1.0);
    if (!(config.analysis.amplitude > 0.0))
        throw ConfigError("analysis.amplitude", "must be positive");
    config.analysis.step = analysis.number_or("step", 0.0);
    if (config.analysis.step < 0.0) throw ConfigError("analysis.step", "must be >= 0");
    if (analysis.has("max_map_iterations")) {
        const long long iters = analysis.integer("max_map_iterations");
        if (iters < 1) throw ConfigError("analysis.max_map_iterations", "must be >= 1");
        config.analysis.max_map_iterations = static_cast<int>(iters);
    }
    if (analysis.has("initial_state")) {
        config.analysis.initial_state = analysis.number_array("initial_state");
        if (static_cast<int>(config.analysis.initial_state.size()) != 2 * config.system.dimension)
            throw ConfigError("analysis.initial_state", "length must be twice system.dimension");
    }
    analysis.finish();

    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("", "cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string serialize_config(const RunConfig& config) {
    std::ostringstream out;
    out << "[system]\n";
    out << "dimension = " << config.system.dimension << "\n";
    out << "mass = " << format_matrix(config.system.mass) << "\n";
    out << "damping = " << format_matrix(config.system.damping) << "\n";
    out << "stiffness = " << format_matrix(config.system.stiffness) << "\n";
    out << "domain_radius = " << format_number(config.system.domain_radius) << "\n";

    out << "\n[potential]\n";
    out << "kind = \"" << to_string(config.system.potential.kind) << "\"\n";
    if (config.system.potential.kind != PotentialKind::None) {
        out << "u0 = " << format_number(config.system.potential.growth_coef) << "\n";
        out << "r = " << format_number(config.system.potential.growth_exponent) << "\n";
        out << "U0 = " << format_number(config.system.potential.gradient_bound) << "\n";
    }
    if (config.cubic_coef) out << "delta = " << format_number(*config.cubic_coef) << "\n";

    out << "\n[forcing]\n";
    out << "period = " << format_number(config.forcing.period()) << "\n";
    out << "mean = " << format_vector(config.forcing.mean()) << "\n";
    for (const Harmonic& h : config.forcing.harmonics()) {
        out << "\n[[forcing.harmonics]]\n";
        out << "n = " << h.index << "\n";
        out << "cos = " << format_vector(h.cos_coef) << "\n";
        out << "sin = " << format_vector(h.sin_coef) << "\n";
    }

    out << "\n[analysis]\n";
    out << "periods = [";
    for (std::size_t i = 0; i < config.analysis.periods.size(); ++i) {
        if (i != 0) out << ", ";
        out << config.analysis.periods[i];
    }
    out << "]\n";
    out << "amplitude = " << format_number(config.analysis.amplitude) << "\n";
    out << "step = " << format_number(config.analysis.step) << "\n";
    out << "max_map_iterations = " << config.analysis.max_map_iterations << "\n";
    if (!config.analysis.initial_state.empty())
        out << "initial_state = " << format_vector(config.analysis.initial_state) << "\n";
    return out.str();
}

}  // namespace orbitbound
