// Three qubits end to end: the critical spectra of the cube, the W state's
// local spectra landing on one of them, and the purity a witness would need.

#include <cmath>
#include <iostream>

#include "epoly/epoly.hpp"

int main() {
  using namespace epoly;

  auto db = critical_spectra_enumerate(3);
  std::cout << "critical spectra for L=3:\n";
  for (const auto& s : db.spectra) {
    std::cout << "  (";
    for (std::size_t i = 0; i < s.lambda.size(); ++i)
      std::cout << (i ? ", " : "") << to_string(s.lambda[i]);
    std::cout << ")  |lambda|^2 = " << to_string(s.norm_sq)
              << "  E = " << to_string(s.entropy()) << (s.added ? "  [added]" : "") << "\n";
  }

  auto w = PureState::w(3);
  auto spec = local_spectra(w);
  std::cout << "W state local spectra: " << spec.lambda[0] << " " << spec.lambda[1] << " "
            << spec.lambda[2] << ", linear entropy " << linear_entropy(w) << "\n";

  const double eps = *min_norm_lambda(db);
  std::cout << "min |lambda_C| = " << eps << ", required purity " << required_purity(3, eps)
            << "\n";
}
