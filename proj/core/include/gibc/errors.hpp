// Copyright (c) 2026 the gibc-scatter developers.
// SPDX-License-Identifier: Apache-2.0

#ifndef GIBC_ERRORS_HPP
#define GIBC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gibc {

// Failure categories thrown by the solver stack.  Construction helpers keep
// the messages uniform ("<kind>: <detail>") so CLI error reporting can map
// them onto exit codes without string matching.

struct geometry_error : std::runtime_error {
  explicit geometry_error(const std::string& what) : std::runtime_error("geometry error: " + what) {}
};

struct deformation_error : std::runtime_error {
  explicit deformation_error(const std::string& what) : std::runtime_error("deformation too large: " + what) {}
};

struct aliasing_error : std::runtime_error {
  explicit aliasing_error(const std::string& what) : std::runtime_error("aliasing: " + what) {}
};

struct constraint_violation : std::runtime_error {
  explicit constraint_violation(const std::string& what) : std::runtime_error("constraint violation: " + what) {}
};

struct singular_matrix_error : std::runtime_error {
  explicit singular_matrix_error(const std::string& what) : std::runtime_error("singular matrix: " + what) {}
};

struct shape_mismatch : std::runtime_error {
  explicit shape_mismatch(const std::string& what) : std::runtime_error("shape mismatch: " + what) {}
};

struct config_error : std::runtime_error {
  explicit config_error(const std::string& what) : std::runtime_error("config error: " + what) {}
};

struct io_error : std::runtime_error {
  explicit io_error(const std::string& what) : std::runtime_error("io error: " + what) {}
};

}  // namespace gibc

#endif  // GIBC_ERRORS_HPP
