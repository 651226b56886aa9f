#pragma once

#include <map>
#include <stdexcept>
#include <string>

namespace fsmguard {

enum class ProviderKind { Replay, Command, Http };

std::string to_string(ProviderKind kind);

// params by kind:
//   Replay:  dir (directory holding <hash>.v fixtures)
//   Command: command (argv split on whitespace; prompt on stdin, verilog on stdout)
//   Http:    url, optional auth_env (env var holding the bearer token); other
//            keys are passed through in the request payload
// The credential itself never appears in the config and is never written out.
struct ProviderConfig {
  ProviderKind kind = ProviderKind::Replay;
  std::map<std::string, std::string> params;

  bool operator==(const ProviderConfig&) const = default;
};

class ProviderError : public std::runtime_error {
 public:
  explicit ProviderError(const std::string& what) : std::runtime_error(what) {}
};

ProviderConfig provider_config_from_json(const std::string& text);
ProviderConfig load_provider_config(const std::string& path);

// Fixture filename the replay provider looks up for a given prompt.
std::string replay_fixture_name(const std::string& prompt);

// Returns the generated Verilog text verbatim. Throws ProviderError on
// timeout, nonzero exit, non-success response, or missing fixture. A failed
// attempt is retried only when retries > 0.
std::string generate(const std::string& prompt, const ProviderConfig& cfg,
                     double timeout_seconds = 30.0, int retries = 0);

}  // namespace fsmguard
