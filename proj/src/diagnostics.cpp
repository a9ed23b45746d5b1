#include "gedanken/diagnostics.hpp"

#include <iostream>

namespace gedanken {

namespace {
thread_local WarningCapture* active_capture = nullptr;
}

WarningCapture::WarningCapture() : previous_(active_capture) { active_capture = this; }

WarningCapture::~WarningCapture() { active_capture = previous_; }

void emit_warning(const std::string& message) {
  if (active_capture != nullptr) {
    active_capture->messages_.push_back(message);
    return;
  }
  std::cerr << "warning: " << message << '\n';
}

}  // namespace gedanken
