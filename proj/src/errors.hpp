#pragma once

#include <stdexcept>
#include <string>

namespace scf {

enum class errc {
  ok = 0,
  invalid_argument,
  parse,
  validation,
  io,
  state_space,   // exact/enumeration op asked for on a space that is too large
  internal,
};

// Every recoverable failure in the library surfaces as an scf::error.  The C
// boundary maps code() onto the public status enum and keeps what() around
// for the caller.
class error : public std::runtime_error {
 public:
  error(errc c, const std::string& msg) : std::runtime_error(msg), code_(c) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string& msg) { throw error(c, msg); }

}  // namespace scf
