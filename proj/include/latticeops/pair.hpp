#ifndef LATTICEOPS_PAIR_HPP
#define LATTICEOPS_PAIR_HPP

#include <utility>

#include "latticeops/error.hpp"
#include "latticeops/lattice.hpp"
#include "latticeops/polynomial.hpp"

namespace latticeops {

/// (phi, psi) with phi(z) = a z^2 + b z + c and psi(z) = d z + e, the data of
/// the functional equation D_x(phi u) = S_x(psi u).
template <Scalar S>
class PearsonPair {
 public:
  PearsonPair(Polynomial<S> phi, Polynomial<S> psi) : phi_(std::move(phi)), psi_(std::move(psi)) {
    if (phi_.degree() > 2) throw InvalidInput("phi must have degree at most 2");
    if (psi_.degree() > 1) throw InvalidInput("psi must have degree at most 1");
    if (phi_.is_zero() && psi_.is_zero()) throw InvalidInput("(phi, psi) must not both vanish");
  }
  static PearsonPair from_coeffs(const S& a, const S& b, const S& c, const S& d, const S& e) {
    return PearsonPair(Polynomial<S>({c, b, a}), Polynomial<S>({e, d}));
  }

  const Polynomial<S>& phi() const { return phi_; }
  const Polynomial<S>& psi() const { return psi_; }
  S a() const { return phi_.coeff(2); }
  S b() const { return phi_.coeff(1); }
  S c() const { return phi_.coeff(0); }
  S d() const { return psi_.coeff(1); }
  S e() const { return psi_.coeff(0); }

  PearsonPair with_precision(long bits) const {
    return PearsonPair(phi_.with_precision(bits), psi_.with_precision(bits));
  }

 private:
  Polynomial<S> phi_;
  Polynomial<S> psi_;
};

/// d_n = a gamma_n + d alpha_n (for q = 1 this is a n + d); defined for n >= -1.
template <Scalar S>
S pair_d(const Lattice<S>& lat, const PearsonPair<S>& p, long n) {
  return p.a() * lat.gamma_n(n) + p.d() * lat.alpha_n(n);
}

/// e_n = phi'(c3) gamma_n + psi(c3) alpha_n on q != 1 lattices,
/// e_n = b n + e + 2 beta d n^2 on q = 1 lattices.
template <Scalar S>
S pair_e(const Lattice<S>& lat, const PearsonPair<S>& p, long n) {
  if (lat.unit_base()) {
    S N(n);
    return p.b() * N + p.e() + S(2) * lat.beta() * p.d() * N * N;
  }
  const S& c3 = lat.c3();
  return p.phi().derivative()(c3) * lat.gamma_n(n) + p.psi()(c3) * lat.alpha_n(n);
}

}  // namespace latticeops

#endif  // LATTICEOPS_PAIR_HPP
