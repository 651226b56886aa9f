#include "fsmguard/provider.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "fsmguard/diag.hpp"
#include "fsmguard/hash.hpp"

namespace fsmguard {

namespace {

using nlohmann::json;

ProviderKind parse_kind(const std::string& text, std::vector<Diagnostic>& diags) {
  if (text == "replay") return ProviderKind::Replay;
  if (text == "command") return ProviderKind::Command;
  if (text == "http") return ProviderKind::Http;
  diags.push_back({"syntax-error", "unknown provider kind '" + text +
                                       "'; expected replay, command, or http"});
  return ProviderKind::Replay;
}

void require_param(const ProviderConfig& cfg, const std::string& key,
                   std::vector<Diagnostic>& diags) {
  auto it = cfg.params.find(key);
  if (it == cfg.params.end() || it->second.empty()) {
    diags.push_back({"missing-provider-param",
                     to_string(cfg.kind) + " provider requires param '" + key + "'"});
  }
}

std::string read_file_or_throw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ProviderError("fixture-missing: cannot open replay fixture '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::vector<std::string> split_command(const std::string& text) {
  std::vector<std::string> argv;
  std::istringstream in(text);
  std::string word;
  while (in >> word) argv.push_back(word);
  return argv;
}

void ignore_sigpipe_once() {
  static std::once_flag flag;
  std::call_once(flag, [] { ::signal(SIGPIPE, SIG_IGN); });
}

std::string replay_generate(const std::string& prompt, const ProviderConfig& cfg) {
  const std::string path = cfg.params.at("dir") + "/" + replay_fixture_name(prompt);
  return read_file_or_throw(path);
}

std::string command_generate(const std::string& prompt, const ProviderConfig& cfg,
                             double timeout_seconds) {
  ignore_sigpipe_once();
  const std::vector<std::string> argv = split_command(cfg.params.at("command"));
  if (argv.empty()) throw ProviderError("command provider has an empty command line");

  int to_child[2];
  int from_child[2];
  if (::pipe(to_child) != 0) throw ProviderError("pipe failed");
  if (::pipe(from_child) != 0) {
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw ProviderError("pipe failed");
  }

  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) ::close(fd);
    throw ProviderError("fork failed");
  }
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) ::close(fd);
    std::vector<char*> raw;
    raw.reserve(argv.size() + 1);
    for (const std::string& arg : argv) raw.push_back(const_cast<char*>(arg.c_str()));
    raw.push_back(nullptr);
    ::execvp(raw[0], raw.data());
    ::_exit(127);
  }

  ::close(to_child[0]);
  ::close(from_child[1]);
  ::fcntl(to_child[1], F_SETFL, O_NONBLOCK);
  ::fcntl(from_child[0], F_SETFL, O_NONBLOCK);

  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::milliseconds(static_cast<long>(timeout_seconds * 1000.0));
  std::string output;
  std::size_t written = 0;
  bool stdin_open = true;
  bool stdout_open = true;
  bool timed_out = false;

  while (stdin_open || stdout_open) {
    const auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      timed_out = true;
      break;
    }
    const int wait_ms = static_cast<int>(
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count() + 1);

    struct pollfd fds[2];
    nfds_t nfds = 0;
    int stdin_slot = -1;
    int stdout_slot = -1;
    if (stdin_open) {
      stdin_slot = static_cast<int>(nfds);
      fds[nfds++] = {to_child[1], POLLOUT, 0};
    }
    if (stdout_open) {
      stdout_slot = static_cast<int>(nfds);
      fds[nfds++] = {from_child[0], POLLIN, 0};
    }

    const int ready = ::poll(fds, nfds, wait_ms);
    if (ready < 0) {
      if (errno == EINTR) continue;
      timed_out = true;
      break;
    }
    if (ready == 0) continue;

    if (stdin_slot >= 0 && (fds[stdin_slot].revents & (POLLOUT | POLLERR | POLLHUP)) != 0) {
      if ((fds[stdin_slot].revents & (POLLERR | POLLHUP)) != 0 && written < prompt.size() &&
          (fds[stdin_slot].revents & POLLOUT) == 0) {
        ::close(to_child[1]);
        stdin_open = false;
      } else {
        const ssize_t n = ::write(to_child[1], prompt.data() + written, prompt.size() - written);
        if (n > 0) written += static_cast<std::size_t>(n);
        if ((n < 0 && errno != EAGAIN && errno != EINTR) || written == prompt.size()) {
          ::close(to_child[1]);
          stdin_open = false;
        }
      }
    }
    if (stdout_slot >= 0 && (fds[stdout_slot].revents & (POLLIN | POLLERR | POLLHUP)) != 0) {
      char buf[4096];
      const ssize_t n = ::read(from_child[0], buf, sizeof buf);
      if (n > 0) {
        output.append(buf, static_cast<std::size_t>(n));
      } else if (n == 0 || (n < 0 && errno != EAGAIN && errno != EINTR)) {
        ::close(from_child[0]);
        stdout_open = false;
      }
    }
  }

  if (stdin_open) ::close(to_child[1]);
  if (stdout_open) ::close(from_child[0]);

  int status = 0;
  if (timed_out) {
    ::kill(pid, SIGKILL);
    ::waitpid(pid, &status, 0);
    std::ostringstream msg;
    msg << "command timed out after " << timeout_seconds << "s";
    throw ProviderError(msg.str());
  }
  ::waitpid(pid, &status, 0);
  if (WIFSIGNALED(status)) {
    throw ProviderError("command killed by signal " + std::to_string(WTERMSIG(status)));
  }
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  if (code != 0) throw ProviderError("command exited with status " + std::to_string(code));
  return output;
}

std::string http_generate(const std::string& prompt, const ProviderConfig& cfg,
                          double timeout_seconds) {
  const std::string& url = cfg.params.at("url");
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ProviderError("http provider url must look like http://host:port/path");
  }
  const std::size_t path_start = url.find('/', scheme_end + 3);
  const std::string base = path_start == std::string::npos ? url : url.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  httplib::Client client(base);
  const time_t secs = static_cast<time_t>(timeout_seconds);
  const time_t usecs = static_cast<time_t>((timeout_seconds - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  httplib::Headers headers;
  auto auth = cfg.params.find("auth_env");
  if (auth != cfg.params.end()) {
    const char* value = std::getenv(auth->second.c_str());
    if (value == nullptr || *value == '\0') {
      throw ProviderError("environment variable '" + auth->second + "' is not set");
    }
    headers.emplace("Authorization", std::string("Bearer ") + value);
  }

  nlohmann::ordered_json payload;
  payload["prompt"] = prompt;
  for (const auto& [key, value] : cfg.params) {
    if (key == "url" || key == "auth_env") continue;
    payload[key] = value;
  }

  const httplib::Result res = client.Post(path, headers, payload.dump(), "application/json");
  if (!res) throw ProviderError("http request failed: " + httplib::to_string(res.error()));
  if (res->status < 200 || res->status >= 300) {
    throw ProviderError("http status " + std::to_string(res->status));
  }
  json body = json::parse(res->body, nullptr, false);
  if (body.is_discarded() || !body.is_object() || !body.contains("text") ||
      !body["text"].is_string()) {
    throw ProviderError("http response has no string field 'text'");
  }
  return body["text"].get<std::string>();
}

}  // namespace

std::string to_string(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::Replay: return "replay";
    case ProviderKind::Command: return "command";
    case ProviderKind::Http: return "http";
  }
  return "replay";
}

ProviderConfig provider_config_from_json(const std::string& text) {
  std::vector<Diagnostic> diags;
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ParseError({"syntax-error", "provider config is not a valid object"});
  }
  ProviderConfig cfg;
  if (!doc.contains("kind") || !doc["kind"].is_string()) {
    diags.push_back({"syntax-error", "provider config needs a string field 'kind'"});
  } else {
    cfg.kind = parse_kind(doc["kind"].get<std::string>(), diags);
  }
  if (doc.contains("params")) {
    if (!doc["params"].is_object()) {
      diags.push_back({"syntax-error", "provider 'params' must be an object of strings"});
    } else {
      for (const auto& [key, value] : doc["params"].items()) {
        if (!value.is_string()) {
          diags.push_back({"syntax-error", "provider param '" + key + "' must be a string"});
          continue;
        }
        cfg.params[key] = value.get<std::string>();
      }
    }
  }
  if (diags.empty()) {
    switch (cfg.kind) {
      case ProviderKind::Replay: require_param(cfg, "dir", diags); break;
      case ProviderKind::Command: require_param(cfg, "command", diags); break;
      case ProviderKind::Http: require_param(cfg, "url", diags); break;
    }
  }
  if (!diags.empty()) throw ParseError("invalid provider config", diags);
  return cfg;
}

ProviderConfig load_provider_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError({"io-error", "cannot open provider config '" + path + "'"});
  std::ostringstream buf;
  buf << in.rdbuf();
  return provider_config_from_json(buf.str());
}

std::string replay_fixture_name(const std::string& prompt) {
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.v",
                static_cast<unsigned long long>(fnv1a_64(prompt)));
  return name;
}

std::string generate(const std::string& prompt, const ProviderConfig& cfg,
                     double timeout_seconds, int retries) {
  if (timeout_seconds <= 0.0) throw ProviderError("timeout must be positive");
  const int attempts = retries < 0 ? 1 : retries + 1;
  std::string last_error;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    try {
      switch (cfg.kind) {
        case ProviderKind::Replay: return replay_generate(prompt, cfg);
        case ProviderKind::Command: return command_generate(prompt, cfg, timeout_seconds);
        case ProviderKind::Http: return http_generate(prompt, cfg, timeout_seconds);
      }
      throw ProviderError("unknown provider kind");
    } catch (const ProviderError& e) {
      last_error = e.what();
    }
  }
  if (attempts > 1) {
    throw ProviderError("after " + std::to_string(attempts) + " attempts: " + last_error);
  }
  throw ProviderError(last_error);
}

}  // namespace fsmguard
