#pragma once

#include <string>

#include "qie/invariant.hpp"

namespace qie::test {

inline std::string data_path(const std::string& name) { return std::string(QIE_TEST_DATA) + "/" + name; }

inline FiniteQuandle symplectic(int p, int a = 1) {
  return build_quandle("symplectic:p=" + std::to_string(p) + ",n=1,a=" + std::to_string(a));
}

inline std::string phi(const LinkDiagram& d, const FiniteQuandle& q) {
  return enhanced_polynomial(solve(d, q)).to_text();
}

}  // namespace qie::test
