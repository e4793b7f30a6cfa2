#pragma once

// Line-oriented run-file. Layout:
//
//   # relax-run 1
//   # created <timestamp>            (optional; the only non-reproducible line)
//   [run]                            key=value lines
//   [norm_history]                   n_evals,force_norm,step
//   [trajectory]                     n_evals,x1,...,xd
//   [events]                         iteration,n_evals,kind,before,after,position,detail
//   [band_snapshots]                 n_evals,image,x1,...,xd
//   [end]
//
// Reals are written in shortest round-trip form; positions inside an event row
// are ';'-separated. `detail` is the remainder of the row. Backslash and
// newline are escaped in free text.

#include <charconv>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "relax/error.hpp"
#include "relax/neb/band.hpp"
#include "relax/opt/report.hpp"

namespace relax {

inline constexpr int kRunFileVersion = 1;

struct RunRecord {
    std::string id;
    std::string suite;
    std::string function;  // catalog name or PES name
    std::vector<std::pair<std::string, std::string>> parameters;
    RunReport report;
    std::vector<BandSnapshot> snapshots;
    std::string created;  // header only; not part of the body
};

namespace run_file_detail {

inline std::string real(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline std::string reals(std::span<const double> xs, char sep) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += real(xs[i]);
    }
    return out;
}

inline std::string escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '\\') out += "\\\\";
        else if (c == '\n') out += "\\n";
        else if (c == '\r') out += "\\r";
        else out += c;
    }
    return out;
}

inline std::string unescape(std::string_view s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\\' && i + 1 < s.size()) {
            const char n = s[++i];
            out += n == 'n' ? '\n' : n == 'r' ? '\r' : n;
        } else {
            out += s[i];
        }
    }
    return out;
}

[[noreturn]] inline void fail(std::size_t line_no, const std::string& what) {
    throw InputError("run-file line " + std::to_string(line_no) + ": " + what);
}

inline double parse_real(std::string_view tok, std::size_t line_no) {
    double x = 0.0;
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        fail(line_no, "bad real '" + std::string(tok) + "'");
    return x;
}

inline std::uint64_t parse_uint(std::string_view tok, std::size_t line_no) {
    std::uint64_t x = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
        fail(line_no, "bad integer '" + std::string(tok) + "'");
    return x;
}

inline std::vector<std::string_view> split(std::string_view s, char sep, std::size_t max_fields = 0) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        if (max_fields && out.size() + 1 == max_fields) {
            out.push_back(s.substr(start));
            break;
        }
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

inline Vector parse_reals(std::string_view s, char sep, std::size_t line_no) {
    Vector out;
    if (s.empty()) return out;
    for (auto tok : split(s, sep)) out.push_back(parse_real(tok, line_no));
    return out;
}

}  // namespace run_file_detail

/// Writes everything after the header. Deterministic for a given record.
inline void write_run_body(std::ostream& os, const RunRecord& rec) {
    using namespace run_file_detail;
    const RunReport& r = rec.report;
    os << "[run]\n";
    os << "id=" << escape(rec.id) << '\n';
    os << "suite=" << escape(rec.suite) << '\n';
    os << "function=" << escape(rec.function) << '\n';
    os << "optimizer=" << escape(r.optimizer) << '\n';
    for (const auto& [k, v] : rec.parameters) os << "param." << escape(k) << '=' << escape(v) << '\n';
    os << "converged=" << (r.converged ? "true" : "false") << '\n';
    os << "status=" << to_string(r.status) << '\n';
    os << "n_force_evals=" << r.n_force_evals << '\n';
    os << "final_r=" << reals(r.final_r, ',') << '\n';
    os << "final_force_norm=" << real(r.final_force_norm) << '\n';
    os << "final_energy=" << real(r.final_energy) << '\n';
    os << "message=" << escape(r.message) << '\n';
    os << "[norm_history]\n";
    for (const auto& s : r.norm_history) os << s.n_evals << ',' << real(s.force_norm) << ',' << real(s.step) << '\n';
    if (!r.trajectory.empty()) {
        os << "[trajectory]\n";
        for (const auto& t : r.trajectory) os << t.n_evals << ',' << reals(t.position, ',') << '\n';
    }
    os << "[events]\n";
    for (const auto& e : r.events)
        os << e.iteration << ',' << e.n_evals << ',' << to_string(e.kind) << ',' << real(e.before) << ','
           << real(e.after) << ',' << reals(e.position, ';') << ',' << escape(e.detail) << '\n';
    if (!rec.snapshots.empty()) {
        os << "[band_snapshots]\n";
        for (const auto& snap : rec.snapshots)
            for (std::size_t i = 0; i < snap.images.size(); ++i)
                os << snap.n_evals << ',' << i << ',' << reals(snap.images[i], ',') << '\n';
    }
    os << "[end]\n";
}

inline void write_run_file(std::ostream& os, const RunRecord& rec) {
    os << "# relax-run " << kRunFileVersion << '\n';
    if (!rec.created.empty()) os << "# created " << run_file_detail::escape(rec.created) << '\n';
    write_run_body(os, rec);
}

inline std::string to_run_file(const RunRecord& rec) {
    std::ostringstream os;
    write_run_file(os, rec);
    return os.str();
}

inline RunRecord parse_run_file(std::istream& is) {
    using namespace run_file_detail;
    RunRecord rec;
    RunReport& r = rec.report;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(is, line)) throw InputError("run-file is empty");
    ++line_no;
    constexpr std::string_view magic = "# relax-run ";
    if (line.rfind(magic, 0) != 0) fail(line_no, "missing '# relax-run <version>' header");
    const auto version = parse_uint(std::string_view(line).substr(magic.size()), line_no);
    if (version != kRunFileVersion)
        fail(line_no, "unsupported run-file schema version " + std::to_string(version) + " (this build reads " +
                          std::to_string(kRunFileVersion) + ")");

    std::string section;
    bool ended = false;
    std::map<std::uint64_t, std::size_t> snapshot_index;
    while (std::getline(is, line)) {
        ++line_no;
        if (ended) fail(line_no, "content after [end]");
        if (line.rfind("# created ", 0) == 0 && section.empty()) {
            rec.created = unescape(std::string_view(line).substr(10));
            continue;
        }
        if (line.empty() || line[0] == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "malformed section header");
            section = line.substr(1, line.size() - 2);
            if (section == "end") ended = true;
            else if (section != "run" && section != "norm_history" && section != "trajectory" &&
                     section != "events" && section != "band_snapshots")
                fail(line_no, "unknown section [" + section + "]");
            continue;
        }
        if (section == "run") {
            const auto eq = line.find('=');
            if (eq == std::string::npos) fail(line_no, "expected key=value");
            const std::string key = line.substr(0, eq);
            const std::string_view val = std::string_view(line).substr(eq + 1);
            if (key == "id") rec.id = unescape(val);
            else if (key == "suite") rec.suite = unescape(val);
            else if (key == "function") rec.function = unescape(val);
            else if (key == "optimizer") r.optimizer = unescape(val);
            else if (key.rfind("param.", 0) == 0) rec.parameters.emplace_back(unescape(key.substr(6)), unescape(val));
            else if (key == "converged") {
                if (val != "true" && val != "false") fail(line_no, "converged must be true or false");
                r.converged = val == "true";
            } else if (key == "status") r.status = run_status_from_string(val);
            else if (key == "n_force_evals") r.n_force_evals = parse_uint(val, line_no);
            else if (key == "final_r") r.final_r = parse_reals(val, ',', line_no);
            else if (key == "final_force_norm") r.final_force_norm = parse_real(val, line_no);
            else if (key == "final_energy") r.final_energy = parse_real(val, line_no);
            else if (key == "message") r.message = unescape(val);
            else fail(line_no, "unknown run key '" + key + "'");
        } else if (section == "norm_history") {
            auto f = split(line, ',');
            if (f.size() != 3) fail(line_no, "norm_history rows have 3 fields");
            r.norm_history.push_back({parse_uint(f[0], line_no), parse_real(f[1], line_no), parse_real(f[2], line_no)});
        } else if (section == "trajectory") {
            auto f = split(line, ',', 2);
            if (f.size() != 2) fail(line_no, "trajectory rows need n_evals and coordinates");
            r.trajectory.push_back({parse_uint(f[0], line_no), parse_reals(f[1], ',', line_no)});
        } else if (section == "events") {
            auto f = split(line, ',', 7);
            if (f.size() != 7) fail(line_no, "event rows have 7 fields");
            Event e;
            e.iteration = parse_uint(f[0], line_no);
            e.n_evals = parse_uint(f[1], line_no);
            try {
                e.kind = event_kind_from_string(f[2]);
            } catch (const InputError& err) {
                fail(line_no, err.what());
            }
            e.before = parse_real(f[3], line_no);
            e.after = parse_real(f[4], line_no);
            e.position = parse_reals(f[5], ';', line_no);
            e.detail = unescape(f[6]);
            r.events.push_back(std::move(e));
        } else if (section == "band_snapshots") {
            auto f = split(line, ',', 3);
            if (f.size() != 3) fail(line_no, "band_snapshots rows need n_evals, image and coordinates");
            const auto n = parse_uint(f[0], line_no);
            const auto image = parse_uint(f[1], line_no);
            auto [it, fresh] = snapshot_index.try_emplace(n, rec.snapshots.size());
            if (fresh) rec.snapshots.push_back({n, {}});
            auto& snap = rec.snapshots[it->second];
            if (image != snap.images.size()) fail(line_no, "band snapshot images must be listed in order");
            snap.images.push_back(parse_reals(f[2], ',', line_no));
        } else {
            fail(line_no, "data outside any section");
        }
    }
    if (!ended) throw InputError("run-file truncated: missing [end]");
    return rec;
}

inline RunRecord parse_run_file(const std::string& text) {
    std::istringstream is(text);
    return parse_run_file(is);
}

inline void save_run_file(const std::string& path, const RunRecord& rec) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw InputError("cannot open '" + tmp + "' for writing");
        write_run_file(os, rec);
        if (!os) throw InputError("write to '" + tmp + "' failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw InputError("cannot move run-file into place at '" + path + "'");
}

inline RunRecord load_run_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw InputError("cannot open run-file '" + path + "'");
    return parse_run_file(is);
}

}  // namespace relax
