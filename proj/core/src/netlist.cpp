#include "mrsim/netlist.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <system_error>

#include "mrsim/devices.hpp"

namespace mrsim {

namespace {

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (unsigned char c : line) {
        if (std::isspace(c)) {
            if (!cur.empty()) {
                out.push_back(cur);
                cur.clear();
            }
        } else {
            cur.push_back(static_cast<char>(c));
        }
    }
    if (!cur.empty()) {
        out.push_back(cur);
    }
    return out;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

struct KeyValue {
    std::string key;
    std::string value;
};

KeyValue split_key_value(int line, const std::string& token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= token.size()) {
        throw ParseError(line, "expected key=value, got '" + token + "'");
    }
    return {token.substr(0, eq), token.substr(eq + 1)};
}

double parse_number_or_throw(int line, const std::string& token) {
    try {
        return parse_spice_number(token);
    } catch (const std::exception& e) {
        throw ParseError(line, e.what());
    }
}

std::vector<std::pair<double, double>> parse_pwl(int line, const std::string& value) {
    const std::vector<std::string> parts = split_on(value, ',');
    if (parts.size() < 4 || parts.size() % 2 != 0) {
        throw ParseError(line, "pwl needs an even list of at least 4 values (t1,v1,t2,v2,...)");
    }
    std::vector<std::pair<double, double>> points;
    for (size_t i = 0; i < parts.size(); i += 2) {
        const double t = parse_number_or_throw(line, parts[i]);
        const double v = parse_number_or_throw(line, parts[i + 1]);
        if (!points.empty() && t <= points.back().first) {
            throw ParseError(line, "pwl times must be strictly increasing");
        }
        points.emplace_back(t, v);
    }
    return points;
}

bool is_waveform_key(const std::string& key) {
    return key == "dc" || key == "ampl" || key == "freq" || key == "phase" || key == "pwl";
}

Instance parse_instance(int line, const std::vector<std::string>& tokens) {
    if (tokens.size() < 4) {
        throw ParseError(line, "device line needs 'name node+ node- kind [key=value ...]'");
    }
    Instance inst;
    inst.name = lowercase(tokens[0]);
    inst.node_p = lowercase(tokens[1]);
    inst.node_n = lowercase(tokens[2]);
    inst.kind = lowercase(tokens[3]);

    const DeviceInfo* info = find_device_info(inst.kind);
    if (info == nullptr) {
        throw ParseError(line, "unknown device kind '" + tokens[3] + "'");
    }

    bool saw_sine_key = false;
    for (size_t i = 4; i < tokens.size(); ++i) {
        const KeyValue kv = split_key_value(line, lowercase(tokens[i]));
        if (info->is_source && is_waveform_key(kv.key)) {
            if (kv.key == "pwl") {
                inst.waveform.pwl = parse_pwl(line, kv.value);
            } else {
                const double v = parse_number_or_throw(line, kv.value);
                if (kv.key == "dc") {
                    inst.waveform.dc = v;
                } else {
                    saw_sine_key = true;
                    if (kv.key == "ampl") {
                        inst.waveform.ampl = v;
                    } else if (kv.key == "freq") {
                        inst.waveform.freq = v;
                    } else {
                        inst.waveform.phase = v;
                    }
                }
            }
            continue;
        }
        if (inst.params.count(kv.key) != 0) {
            throw ParseError(line, "duplicate parameter '" + kv.key + "'");
        }
        inst.params[kv.key] = parse_number_or_throw(line, kv.value);
    }
    inst.waveform.has_sine = saw_sine_key;
    if (inst.waveform.has_sine && !inst.waveform.pwl.empty()) {
        throw ParseError(line, "source cannot combine sine and pwl waveforms");
    }

    try {
        build_device(inst.kind, inst.params);
    } catch (const std::exception& e) {
        throw ParseError(line, e.what());
    }
    return inst;
}

int parse_int_or_throw(int line, const std::string& token, const std::string& what) {
    const double v = parse_number_or_throw(line, token);
    const double rounded = std::round(v);
    if (std::abs(v - rounded) > 1e-9 || rounded < 1.0) {
        throw ParseError(line, what + " must be a positive integer");
    }
    return static_cast<int>(rounded);
}

Analysis parse_dc(int line, const std::vector<std::string>& tokens) {
    if (tokens.size() != 5 && tokens.size() != 6) {
        throw ParseError(line, ".dc needs 'SRC start stop step [dir=updown]'");
    }
    Analysis a;
    a.kind = AnalysisKind::dc;
    a.source = tokens[1];
    a.start = parse_number_or_throw(line, tokens[2]);
    a.stop = parse_number_or_throw(line, tokens[3]);
    a.step = parse_number_or_throw(line, tokens[4]);
    if (a.step == 0.0) {
        throw ParseError(line, ".dc step must be nonzero");
    }
    if ((a.stop - a.start) * a.step < 0.0) {
        throw ParseError(line, ".dc step direction does not reach stop from start");
    }
    if (tokens.size() == 6) {
        if (tokens[5] != "dir=updown") {
            throw ParseError(line, "unexpected token '" + tokens[5] + "' (only dir=updown)");
        }
        a.updown = true;
    }
    return a;
}

Analysis parse_tran(int line, const std::vector<std::string>& tokens) {
    if (tokens.size() < 3) {
        throw ParseError(line, ".tran needs 'dt tstop [method=be|trap] [ic name=value ...]'");
    }
    Analysis a;
    a.kind = AnalysisKind::tran;
    a.dt = parse_number_or_throw(line, tokens[1]);
    a.tstop = parse_number_or_throw(line, tokens[2]);
    if (a.dt <= 0.0 || a.tstop < a.dt) {
        throw ParseError(line, ".tran needs 0 < dt <= tstop");
    }
    size_t i = 3;
    if (i < tokens.size() && tokens[i].rfind("method=", 0) == 0) {
        const std::string m = tokens[i].substr(7);
        if (m == "be") {
            a.method = IntegrationMethod::be;
        } else if (m == "trap") {
            a.method = IntegrationMethod::trap;
        } else {
            throw ParseError(line, "unknown method '" + m + "' (be or trap)");
        }
        ++i;
    }
    if (i < tokens.size()) {
        if (tokens[i] != "ic") {
            throw ParseError(line, "unexpected token '" + tokens[i] + "'");
        }
        ++i;
        if (i >= tokens.size()) {
            throw ParseError(line, "ic needs at least one name=value pair");
        }
        for (; i < tokens.size(); ++i) {
            const KeyValue kv = split_key_value(line, tokens[i]);
            a.initial_conditions.emplace_back(kv.key, parse_number_or_throw(line, kv.value));
        }
    }
    return a;
}

Analysis parse_ac(int line, const std::vector<std::string>& tokens) {
    if (tokens.size() != 5) {
        throw ParseError(line, ".ac needs 'SRC fstart fstop pts_per_decade'");
    }
    Analysis a;
    a.kind = AnalysisKind::ac;
    a.source = tokens[1];
    a.fstart = parse_number_or_throw(line, tokens[2]);
    a.fstop = parse_number_or_throw(line, tokens[3]);
    a.pts_per_decade = parse_int_or_throw(line, tokens[4], "pts_per_decade");
    if (a.fstart <= 0.0 || a.fstop < a.fstart) {
        throw ParseError(line, ".ac needs 0 < fstart <= fstop");
    }
    return a;
}

Analysis parse_homotopy(int line, const std::vector<std::string>& tokens) {
    if (tokens.size() != 4) {
        throw ParseError(line, ".homotopy needs 'SRC lmin lmax'");
    }
    Analysis a;
    a.kind = AnalysisKind::homotopy;
    a.source = tokens[1];
    a.lambda_min = parse_number_or_throw(line, tokens[2]);
    a.lambda_max = parse_number_or_throw(line, tokens[3]);
    if (a.lambda_min >= a.lambda_max) {
        throw ParseError(line, ".homotopy needs lmin < lmax");
    }
    return a;
}

}  // namespace

namespace {

double pwl_value(const std::vector<std::pair<double, double>>& pwl, double t) {
    if (t <= pwl.front().first) {
        return pwl.front().second;
    }
    if (t >= pwl.back().first) {
        return pwl.back().second;
    }
    for (size_t i = 1; i < pwl.size(); ++i) {
        if (t <= pwl[i].first) {
            const auto& [t0, v0] = pwl[i - 1];
            const auto& [t1, v1] = pwl[i];
            return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
        }
    }
    return pwl.back().second;
}

}  // namespace

double SourceWaveform::value(double t) const {
    double v = dc;
    if (has_sine) {
        v += ampl * std::sin(2.0 * std::numbers::pi * freq * t + phase);
    }
    if (!pwl.empty()) {
        v += pwl_value(pwl, t);
    }
    return v;
}

double SourceWaveform::dc_value() const {
    double v = dc;
    if (!pwl.empty()) {
        v += pwl_value(pwl, 0.0);
    }
    return v;
}

const Instance* Circuit::find(const std::string& name) const {
    for (const Instance& inst : instances) {
        if (inst.name == name) {
            return &inst;
        }
    }
    return nullptr;
}

double parse_spice_number(const std::string& token) {
    const std::string s = lowercase(token);
    double value = 0.0;
    const char* first = s.data();
    const char* last = first + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr == first) {
        throw std::invalid_argument("bad number '" + token + "'");
    }
    const std::string suffix(ptr, last);
    double mult = 1.0;
    if (!suffix.empty()) {
        if (suffix == "t") {
            mult = 1e12;
        } else if (suffix == "g") {
            mult = 1e9;
        } else if (suffix == "meg") {
            mult = 1e6;
        } else if (suffix == "k") {
            mult = 1e3;
        } else if (suffix == "m") {
            mult = 1e-3;
        } else if (suffix == "u") {
            mult = 1e-6;
        } else if (suffix == "n") {
            mult = 1e-9;
        } else if (suffix == "p") {
            mult = 1e-12;
        } else if (suffix == "f") {
            mult = 1e-15;
        } else {
            throw std::invalid_argument("bad number suffix '" + suffix + "'");
        }
    }
    const double out = value * mult;
    if (!std::isfinite(out)) {
        throw std::invalid_argument("non-finite number '" + token + "'");
    }
    return out;
}

NetlistDocument parse_netlist(const std::string& text) {
    NetlistDocument doc;
    std::set<std::string> names;

    std::istringstream stream(text);
    std::string raw_line;
    int line = 0;
    while (std::getline(stream, raw_line)) {
        ++line;
        const std::vector<std::string> raw_tokens = split_ws(raw_line);
        if (raw_tokens.empty()) {
            continue;
        }
        const char first = raw_tokens[0][0];
        if (first == '*' || first == ';') {
            continue;
        }
        std::vector<std::string> tokens;
        tokens.reserve(raw_tokens.size());
        for (const std::string& t : raw_tokens) {
            tokens.push_back(lowercase(t));
        }

        if (first != '.') {
            Instance inst = parse_instance(line, tokens);
            if (!names.insert(inst.name).second) {
                throw ParseError(line, "duplicate instance '" + inst.name + "'");
            }
            doc.circuit.instances.push_back(std::move(inst));
            continue;
        }

        const std::string& directive = tokens[0];
        if (directive == ".op") {
            if (tokens.size() != 1) {
                throw ParseError(line, ".op takes no arguments");
            }
            Analysis a;
            a.kind = AnalysisKind::op;
            doc.analyses.push_back(a);
        } else if (directive == ".dc") {
            doc.analyses.push_back(parse_dc(line, tokens));
        } else if (directive == ".tran") {
            doc.analyses.push_back(parse_tran(line, tokens));
        } else if (directive == ".ac") {
            doc.analyses.push_back(parse_ac(line, tokens));
        } else if (directive == ".homotopy") {
            doc.analyses.push_back(parse_homotopy(line, tokens));
        } else if (directive == ".print") {
            if (tokens.size() != 3 || tokens[1] != "csv") {
                throw ParseError(line, ".print needs 'csv PATH'");
            }
            if (doc.analyses.empty()) {
                throw ParseError(line, ".print has no preceding analysis directive");
            }
            doc.analyses.back().out_path = raw_tokens[2];
        } else {
            throw ParseError(line, "unknown directive '" + directive + "'");
        }
    }

    for (const Analysis& a : doc.analyses) {
        if (a.source.empty()) {
            continue;
        }
        const Instance* src = doc.circuit.find(a.source);
        if (src == nullptr) {
            throw ParseError(line, "analysis references unknown instance '" + a.source + "'");
        }
        if (!src->is_source()) {
            throw ParseError(line, "analysis source '" + a.source + "' is not a vsource/isource");
        }
    }
    return doc;
}

NetlistDocument parse_netlist_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_netlist(buf.str());
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return {buf, static_cast<size_t>(ptr - buf)};
}

std::string format_circuit(const Circuit& circuit) {
    std::string out;
    for (const Instance& inst : circuit.instances) {
        out += inst.name + " " + inst.node_p + " " + inst.node_n + " " + inst.kind;
        if (inst.is_source()) {
            const SourceWaveform& w = inst.waveform;
            if (w.dc != 0.0) {
                out += " dc=" + format_double(w.dc);
            }
            if (w.has_sine) {
                out += " ampl=" + format_double(w.ampl) + " freq=" + format_double(w.freq) +
                       " phase=" + format_double(w.phase);
            }
            if (!w.pwl.empty()) {
                out += " pwl=";
                for (size_t i = 0; i < w.pwl.size(); ++i) {
                    if (i > 0) {
                        out += ",";
                    }
                    out += format_double(w.pwl[i].first) + "," + format_double(w.pwl[i].second);
                }
            }
        }
        for (const auto& [key, value] : inst.params) {
            out += " " + key + "=" + format_double(value);
        }
        out += "\n";
    }
    return out;
}

}  // namespace mrsim
