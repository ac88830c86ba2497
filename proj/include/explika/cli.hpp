#pragma once

// `explika` command line: check | explain | ontology | diff-oracle.
//
// Exit codes: 0 ok, 1 engine/oracle mismatch, 2 usage, parse or validation
// error (UnknownAtom included), 3 inconsistent theory, 4 unreadable file,
// 5 oracle limit exceeded.

#include <iosfwd>
#include <string>
#include <vector>

namespace explika {

struct CliEnvironment {
  bool color = false;
};

/// EXPLIKA_COLOR: `always`, `never`, or `auto` (the default), which follows
/// whether stdout is a terminal.
bool color_enabled(const char* setting, bool stdout_is_tty);

/// `args[0]` is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const CliEnvironment& env = {});

/// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& data);

}  // namespace explika
