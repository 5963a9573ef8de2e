#pragma once

#include <string>
#include <string_view>

#include "qbudget/circuit.hpp"

namespace qbudget {

/// Parse error carrying a 1-based source position.
class QasmError : public ValidationError {
 public:
  QasmError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses the supported OpenQASM 2.0 subset: header, `include` (ignored), one
/// `qreg` and at most one `creg`, the builtin gate vocabulary, `measure` and
/// `barrier`. Opaque two-qubit gates are read from a `// unitary2q <label> ...`
/// pragma line immediately preceding the gate statement.
Circuit parse_qasm(std::string_view text);

/// Emits `circuit` so that parse_qasm(emit_qasm(c)) == c. Angles and matrix
/// entries use shortest round-trip decimal form.
std::string emit_qasm(const Circuit& circuit);

}  // namespace qbudget
