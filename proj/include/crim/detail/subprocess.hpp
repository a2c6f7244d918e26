#pragma once

#include <csignal>
#include <cstring>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "crim/errors.hpp"

namespace crim::detail {

inline void ignore_sigpipe_once() {
    // A git child exiting mid-write must surface as EPIPE, not kill us.
    static std::once_flag flag;
    std::call_once(flag, [] { std::signal(SIGPIPE, SIG_IGN); });
}

struct CommandResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

// Runs a command (no shell) and captures stdout/stderr.
inline CommandResult run_command(
    const std::vector<std::string>& argv,
    const std::optional<std::filesystem::path>& cwd = std::nullopt,
    const std::vector<std::pair<std::string, std::string>>& extra_env = {}) {
    if (argv.empty()) {
        throw IoError("run_command: empty argv");
    }
    ignore_sigpipe_once();

    int out_pipe[2];
    int err_pipe[2];
    if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0) {
        throw IoError("pipe() failed");
    }

    const pid_t pid = fork();
    if (pid < 0) {
        throw IoError("fork() failed");
    }
    if (pid == 0) {
        dup2(out_pipe[1], STDOUT_FILENO);
        dup2(err_pipe[1], STDERR_FILENO);
        close(out_pipe[0]);
        close(out_pipe[1]);
        close(err_pipe[0]);
        close(err_pipe[1]);
        if (cwd && chdir(cwd->c_str()) != 0) {
            _exit(127);
        }
        for (const auto& [key, value] : extra_env) {
            setenv(key.c_str(), value.c_str(), 1);
        }
        std::vector<char*> args;
        args.reserve(argv.size() + 1);
        for (const std::string& a : argv) {
            args.push_back(const_cast<char*>(a.c_str()));
        }
        args.push_back(nullptr);
        execvp(args[0], args.data());
        _exit(127);
    }

    close(out_pipe[1]);
    close(err_pipe[1]);

    CommandResult result;
    struct pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
    bool open_fd[2] = {true, true};
    char buf[65536];
    while (open_fd[0] || open_fd[1]) {
        if (poll(fds, 2, -1) < 0) {
            if (errno == EINTR) continue;
            break;
        }
        for (int i = 0; i < 2; ++i) {
            if (!open_fd[i] || !(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) {
                continue;
            }
            const ssize_t n = read(fds[i].fd, buf, sizeof(buf));
            if (n > 0) {
                (i == 0 ? result.out : result.err).append(buf, static_cast<std::size_t>(n));
            } else if (n == 0 || (n < 0 && errno != EINTR)) {
                close(fds[i].fd);
                open_fd[i] = false;
                fds[i].fd = -1;
            }
        }
    }

    int status = 0;
    if (waitpid(pid, &status, 0) < 0) {
        throw IoError("waitpid() failed");
    }
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

// A persistent `git cat-file --batch` child. One instance per thread;
// requests are answered in order over the same pipe pair.
class CatFileBatch {
public:
    CatFileBatch() = default;

    CatFileBatch(const CatFileBatch&) = delete;
    CatFileBatch& operator=(const CatFileBatch&) = delete;

    ~CatFileBatch() { close_child(); }

    void open(const std::filesystem::path& repo) {
        ignore_sigpipe_once();
        int to_child[2];
        int from_child[2];
        if (pipe(to_child) != 0 || pipe(from_child) != 0) {
            throw IoError("pipe() failed");
        }
        const pid_t pid = fork();
        if (pid < 0) {
            throw IoError("fork() failed");
        }
        if (pid == 0) {
            dup2(to_child[0], STDIN_FILENO);
            dup2(from_child[1], STDOUT_FILENO);
            close(to_child[0]);
            close(to_child[1]);
            close(from_child[0]);
            close(from_child[1]);
            const std::string repo_arg = repo.string();
            const char* args[] = {"git", "-C", repo_arg.c_str(), "cat-file", "--batch", nullptr};
            execvp("git", const_cast<char**>(args));
            _exit(127);
        }
        close(to_child[0]);
        close(from_child[1]);
        pid_ = pid;
        stdin_fd_ = to_child[1];
        stdout_fd_ = from_child[0];
    }

    // Blob bytes for an object id, or nullopt when the object is missing
    // or unreadable.
    std::optional<std::string> read_object(const std::string& oid) {
        std::string request = oid + "\n";
        if (!write_all(request)) {
            return std::nullopt;
        }
        std::string header;
        if (!read_line(header)) {
            return std::nullopt;
        }
        // Header: "<oid> <type> <size>" or "<oid> missing".
        const std::size_t first_space = header.find(' ');
        if (first_space == std::string::npos) {
            return std::nullopt;
        }
        const std::size_t second_space = header.find(' ', first_space + 1);
        if (second_space == std::string::npos) {
            return std::nullopt;  // "<oid> missing"
        }
        const std::size_t size =
            static_cast<std::size_t>(std::strtoull(header.c_str() + second_space + 1, nullptr, 10));
        std::string content;
        if (!read_exact(size + 1, content)) {  // content plus trailing '\n'
            return std::nullopt;
        }
        content.resize(size);
        return content;
    }

private:
    bool write_all(std::string_view data) {
        std::size_t written = 0;
        while (written < data.size()) {
            const ssize_t n = write(stdin_fd_, data.data() + written, data.size() - written);
            if (n < 0) {
                if (errno == EINTR) continue;
                return false;
            }
            written += static_cast<std::size_t>(n);
        }
        return true;
    }

    bool fill_buffer() {
        char chunk[65536];
        const ssize_t n = read(stdout_fd_, chunk, sizeof(chunk));
        if (n <= 0) {
            return false;
        }
        buffer_.append(chunk, static_cast<std::size_t>(n));
        return true;
    }

    bool read_line(std::string& line) {
        std::size_t nl;
        while ((nl = buffer_.find('\n')) == std::string::npos) {
            if (!fill_buffer()) return false;
        }
        line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        return true;
    }

    bool read_exact(std::size_t n, std::string& out) {
        while (buffer_.size() < n) {
            if (!fill_buffer()) return false;
        }
        out = buffer_.substr(0, n);
        buffer_.erase(0, n);
        return true;
    }

    void close_child() {
        if (stdin_fd_ >= 0) close(stdin_fd_);
        if (stdout_fd_ >= 0) close(stdout_fd_);
        if (pid_ > 0) {
            int status = 0;
            waitpid(pid_, &status, 0);
        }
        stdin_fd_ = stdout_fd_ = -1;
        pid_ = -1;
    }

    pid_t pid_ = -1;
    int stdin_fd_ = -1;
    int stdout_fd_ = -1;
    std::string buffer_;
};

}  // namespace crim::detail
