#pragma once

#include <string>
#include <vector>

namespace gedanken {

/// Reports a non-fatal condition. Goes to the innermost active
/// WarningCapture on this thread, or to stderr when none is active.
void emit_warning(const std::string& message);

/// Collects warnings raised on the current thread for its lifetime.
class WarningCapture {
 public:
  WarningCapture();
  ~WarningCapture();
  WarningCapture(const WarningCapture&) = delete;
  WarningCapture& operator=(const WarningCapture&) = delete;

  const std::vector<std::string>& messages() const { return messages_; }

 private:
  friend void emit_warning(const std::string& message);
  std::vector<std::string> messages_;
  WarningCapture* previous_;
};

}  // namespace gedanken
