// Child-process embedding sidecar for tests. Reads one JSON request per line
// on stdin and answers on stdout. Optional first argument selects a fault:
// --error, --short, --wrong-id, --garbage, --exit (quit before answering).

#include <iostream>
#include <string>

#include "support/fake_sidecar_protocol.hpp"

using kgvqa::testing::SidecarFault;

int main(int argc, char** argv) {
  SidecarFault fault = SidecarFault::kNone;
  std::string mode = argc > 1 ? argv[1] : "";
  if (mode == "--exit") return 0;
  if (mode == "--error") fault = SidecarFault::kError;
  if (mode == "--short") fault = SidecarFault::kShortBatch;
  if (mode == "--wrong-id") fault = SidecarFault::kWrongId;
  if (mode == "--garbage") fault = SidecarFault::kGarbage;
  std::string line;
  while (std::getline(std::cin, line)) {
    std::cout << kgvqa::testing::fake_sidecar_reply(line, fault) << '\n' << std::flush;
  }
  return 0;
}
