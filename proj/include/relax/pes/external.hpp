#pragma once

// Potential backed by a child process speaking a line protocol on its
// standard streams:
//
//   request:  EVAL d x1 ... xd\n
//   reply:    OK E f1 ... fd\n     or     ERR message\n
//
// One request is in flight at a time.

#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "relax/error.hpp"
#include "relax/pes/potential.hpp"

extern char** environ;

namespace relax {

struct ExternalSpec {
    std::vector<std::string> argv;  // argv[0] resolved through PATH
    std::size_t dim = 0;
    int timeout_ms = 60000;
    std::string label = "external";
};

namespace external_detail {

inline std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline bool parse_double(std::string_view tok, double& out) {
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return res.ec == std::errc() && res.ptr == tok.data() + tok.size();
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace external_detail

/// Formats a protocol request line (without the trailing newline).
inline std::string format_eval_request(std::span<const double> r) {
    std::string line = "EVAL " + std::to_string(r.size());
    for (double x : r) line += " " + external_detail::format_double(x);
    return line;
}

/// Formats a successful protocol reply line (without the trailing newline).
inline std::string format_eval_reply(const Evaluation& e) {
    std::string line = "OK " + external_detail::format_double(e.energy);
    for (double f : e.force) line += " " + external_detail::format_double(f);
    return line;
}

/// Parses a reply line for a request of dimension `dim`.
inline Evaluation parse_eval_reply(std::string_view line, std::size_t dim) {
    using namespace external_detail;
    auto toks = split_ws(line);
    if (toks.empty()) throw ProtocolError("empty reply line");
    if (toks[0] == "ERR") {
        const auto pos = line.find("ERR");
        std::string msg(line.substr(pos + 3));
        while (!msg.empty() && msg.front() == ' ') msg.erase(msg.begin());
        throw ProtocolError("calculator reported failure: " + msg);
    }
    if (toks[0] != "OK") throw ProtocolError("reply must start with OK or ERR: '" + std::string(line) + "'");
    if (toks.size() != dim + 2)
        throw ProtocolError("expected " + std::to_string(dim) + " force components, got " +
                            std::to_string(toks.size() >= 2 ? toks.size() - 2 : 0));
    Evaluation e;
    if (!parse_double(toks[1], e.energy)) throw ProtocolError("bad energy token '" + std::string(toks[1]) + "'");
    e.force.resize(dim);
    for (std::size_t i = 0; i < dim; ++i)
        if (!parse_double(toks[i + 2], e.force[i]))
            throw ProtocolError("bad force token '" + std::string(toks[i + 2]) + "'");
    return e;
}

/// Parses a request line; returns the coordinates.
inline Vector parse_eval_request(std::string_view line) {
    using namespace external_detail;
    auto toks = split_ws(line);
    if (toks.size() < 2 || toks[0] != "EVAL") throw ProtocolError("expected 'EVAL d x1 ... xd'");
    std::size_t d = 0;
    auto res = std::from_chars(toks[1].data(), toks[1].data() + toks[1].size(), d);
    if (res.ec != std::errc() || toks.size() != d + 2) throw ProtocolError("coordinate count mismatch");
    Vector r(d);
    for (std::size_t i = 0; i < d; ++i)
        if (!parse_double(toks[i + 2], r[i])) throw ProtocolError("bad coordinate token");
    return r;
}

class ExternalPotential final : public Potential {
public:
    explicit ExternalPotential(ExternalSpec spec) : spec_(std::move(spec)) {
        if (spec_.argv.empty()) throw InputError("external potential: empty command");
        if (spec_.dim == 0) throw InputError("external potential: dim must be >= 1");
        spawn();
    }
    ExternalPotential(const ExternalPotential&) = delete;
    ExternalPotential& operator=(const ExternalPotential&) = delete;
    ~ExternalPotential() override { shutdown(); }

    std::size_t dim() const override { return spec_.dim; }
    std::string name() const override { return spec_.label; }

protected:
    Evaluation compute(std::span<const double> r) const override {
        std::lock_guard lock(mu_);
        write_line(format_eval_request(r));
        return parse_eval_reply(read_line(), r.size());
    }

private:
    void spawn() {
        // A dead child must surface as TransportError, not kill us via SIGPIPE.
        ::signal(SIGPIPE, SIG_IGN);
        int to_child[2], from_child[2];
        if (::pipe(to_child) != 0) throw TransportError(std::string("pipe: ") + std::strerror(errno));
        if (::pipe(from_child) != 0) {
            ::close(to_child[0]);
            ::close(to_child[1]);
            throw TransportError(std::string("pipe: ") + std::strerror(errno));
        }
        posix_spawn_file_actions_t fa;
        posix_spawn_file_actions_init(&fa);
        posix_spawn_file_actions_adddup2(&fa, to_child[0], STDIN_FILENO);
        posix_spawn_file_actions_adddup2(&fa, from_child[1], STDOUT_FILENO);
        posix_spawn_file_actions_addclose(&fa, to_child[1]);
        posix_spawn_file_actions_addclose(&fa, from_child[0]);
        std::vector<char*> args;
        for (auto& a : spec_.argv) args.push_back(a.data());
        args.push_back(nullptr);
        const int rc = ::posix_spawnp(&pid_, args[0], &fa, nullptr, args.data(), environ);
        posix_spawn_file_actions_destroy(&fa);
        ::close(to_child[0]);
        ::close(from_child[1]);
        if (rc != 0) {
            ::close(to_child[1]);
            ::close(from_child[0]);
            pid_ = -1;
            throw TransportError("cannot spawn '" + spec_.argv[0] + "': " + std::strerror(rc));
        }
        in_fd_ = to_child[1];
        out_fd_ = from_child[0];
    }

    void shutdown() noexcept {
        if (in_fd_ >= 0) ::close(in_fd_);
        if (out_fd_ >= 0) ::close(out_fd_);
        in_fd_ = out_fd_ = -1;
        if (pid_ > 0) {
            int status = 0;
            // Closing stdin asks the child to exit; do not wait forever on it.
            for (int i = 0; i < 200; ++i) {
                if (::waitpid(pid_, &status, WNOHANG) != 0) {
                    pid_ = -1;
                    return;
                }
                ::usleep(5000);
            }
            ::kill(pid_, SIGKILL);
            ::waitpid(pid_, &status, 0);
            pid_ = -1;
        }
    }

    void write_line(const std::string& line) const {
        std::string buf = line + "\n";
        std::size_t off = 0;
        while (off < buf.size()) {
            const ssize_t n = ::write(in_fd_, buf.data() + off, buf.size() - off);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw TransportError(describe("write failed: " + std::string(std::strerror(errno))));
            }
            off += std::size_t(n);
        }
    }

    std::string read_line() const {
        for (;;) {
            const auto nl = pending_.find('\n');
            if (nl != std::string::npos) {
                std::string line = pending_.substr(0, nl);
                pending_.erase(0, nl + 1);
                return line;
            }
            pollfd pfd{out_fd_, POLLIN, 0};
            const int ready = ::poll(&pfd, 1, spec_.timeout_ms);
            if (ready == 0) throw TransportError(describe("timed out waiting for reply"));
            if (ready < 0) {
                if (errno == EINTR) continue;
                throw TransportError(describe(std::string("poll: ") + std::strerror(errno)));
            }
            char chunk[4096];
            const ssize_t n = ::read(out_fd_, chunk, sizeof chunk);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw TransportError(describe(std::string("read: ") + std::strerror(errno)));
            }
            if (n == 0) throw TransportError(describe("calculator closed its output mid-request"));
            pending_.append(chunk, std::size_t(n));
        }
    }

    std::string describe(const std::string& what) const {
        std::string cmd;
        for (const auto& a : spec_.argv) cmd += (cmd.empty() ? "" : " ") + a;
        return "external potential '" + cmd + "': " + what;
    }

    ExternalSpec spec_;
    pid_t pid_ = -1;
    int in_fd_ = -1;
    int out_fd_ = -1;
    mutable std::string pending_;
    mutable std::mutex mu_;
};

}  // namespace relax
