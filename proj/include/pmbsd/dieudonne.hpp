#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "pmbsd/padic.hpp"
#include "pmbsd/qalpha.hpp"

namespace pmbsd {

template <class S>
struct ScalarOps;

template <>
struct ScalarOps<PadicElement> {
  static PadicElement from_int(const PadicElement& like, long n) { return PadicElement(like.p(), n); }
  static PadicElement alpha(const PadicElement& like) { return PadicElement::sqrt_minus_p(like.p()); }
  static bool is_zero(const PadicElement& x) { return x.is_zero(); }
};

template <>
struct ScalarOps<QAlpha> {
  static QAlpha from_int(const QAlpha& like, long n) { return QAlpha(like.p, n); }
  static QAlpha alpha(const QAlpha& like) { return QAlpha::alpha(like.p); }
  static bool is_zero(const QAlpha& x) { return x.is_zero(); }
};

// coordinates w*omega + e*eta
template <class S>
struct Vec2 {
  S w, e;
  Vec2 operator+(const Vec2& o) const { return {w + o.w, e + o.e}; }
  Vec2 operator-(const Vec2& o) const { return {w - o.w, e - o.e}; }
  Vec2 scale(const S& s) const { return {s * w, s * e}; }
};

// [[a b] [c d]] acting on column coordinate vectors
template <class S>
struct Mat2 {
  S a, b, c, d;
  Vec2<S> apply(const Vec2<S>& v) const { return {a * v.w + b * v.e, c * v.w + d * v.e}; }
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
  S det() const { return a * d - b * c; }
  Mat2 inverse() const {
    S dt = det();
    return {d / dt, (-b) / dt, (-c) / dt, a / dt};
  }
};

template <class S>
S spow(S x, long n, const S& one) {
  S r = one;
  for (long i = 0; i < n; ++i) r = r * x;
  return r;
}

// D_p(E) with basis (omega, eta); phi(omega) = u omega + v eta, [omega, eta] = gram.
template <class S>
class Dieudonne {
 public:
  Dieudonne(long p, const S& u, const S& v, const S& gram) : p_(p), u_(u), v_(v), gram_(gram) {
    one_ = ScalarOps<S>::from_int(u, 1);
    alpha_ = ScalarOps<S>::alpha(u);
    if (ScalarOps<S>::is_zero(v))
      throw std::domain_error("[omega, phi(omega)] = 0: Frobenius datum is not weakly admissible");
    S invp = one_ / num(p_);
    // phi(eta) from trace 0 and det 1/p
    phi_eta_ = {-(u * u + invp) / v, -u};
  }

  long p() const { return p_; }
  S num(long n) const { return ScalarOps<S>::from_int(one_, n); }
  const S& one() const { return one_; }
  const S& alpha() const { return alpha_; }
  S beta() const { return -alpha_; }
  const S& gram() const { return gram_; }
  Vec2<S> omega() const { return {one_, num(0)}; }
  Vec2<S> eta() const { return {num(0), one_}; }
  Vec2<S> phi_omega() const { return {u_, v_}; }
  Vec2<S> phi_eta() const { return phi_eta_; }

  Mat2<S> frobenius() const { return {u_, phi_eta_.w, v_, phi_eta_.e}; }
  Vec2<S> phi(const Vec2<S>& x) const { return frobenius().apply(x); }

  S pair(const Vec2<S>& x, const Vec2<S>& y) const { return (x.w * y.e - x.e * y.w) * gram_; }

  // (nu_alpha, nu_beta)
  std::pair<Vec2<S>, Vec2<S>> eigenvectors() const {
    S half = one_ / num(2);
    Vec2<S> na = (omega() - phi_omega().scale(beta())).scale(half);
    Vec2<S> nb = (omega() - phi_omega().scale(alpha_)).scale(half);
    return {na, nb};
  }

  // (eta_alpha, eta_beta)
  std::pair<Vec2<S>, Vec2<S>> eta_basis() const {
    S pw = pair(phi_omega(), omega());
    if (ScalarOps<S>::is_zero(pw)) throw std::domain_error("weak admissibility fails");
    Vec2<S> ea = (omega() - phi_omega().scale(beta())).scale(-one_ / (beta() * pw));
    Vec2<S> eb = (omega() - phi_omega().scale(alpha_)).scale(-one_ / (alpha_ * pw));
    return {ea, eb};
  }

  Mat2<S> z_log() const {
    S invp = one_ / num(p_);
    return {invp, invp, alpha_ * invp, beta() * invp};
  }

  // (N_-, N_+) in the normalization of the closed forms
  std::pair<Vec2<S>, Vec2<S>> n_vectors() const {
    S invp = one_ / num(p_);
    Vec2<S> np = omega().scale(invp - one_) - phi_omega().scale(num(2));
    Vec2<S> nm = omega().scale(num(2)) + phi_omega().scale(num(1 - p_));
    return {nm, np};
  }

  // (nu_beta, -nu_alpha) diag((1-1/alpha)^2, (1-1/beta)^2) Z_log^{-1} det(Z_log)
  std::pair<Vec2<S>, Vec2<S>> n_vectors_by_matrix() const {
    auto [na, nb] = eigenvectors();
    S A = one_ - one_ / alpha_, B = one_ - one_ / beta();
    A = A * A;
    B = B * B;
    Mat2<S> Z = z_log();
    Mat2<S> W = Z.inverse();
    S dz = Z.det();
    Vec2<S> r0 = nb.scale(A), r1 = na.scale(-B);
    Vec2<S> first = r0.scale(W.a * dz) + r1.scale(W.c * dz);
    Vec2<S> second = r0.scale(W.b * dz) + r1.scale(W.d * dz);
    return {first, second};
  }

  // (nu_-, nu_+) = Z_log (nu_alpha; nu_beta)
  std::pair<Vec2<S>, Vec2<S>> nu_pm() const {
    auto [na, nb] = eigenvectors();
    Mat2<S> Z = z_log();
    return {na.scale(Z.a) + nb.scale(Z.b), na.scale(Z.c) + nb.scale(Z.d)};
  }

  S reg_tilde(const Vec2<S>& nu, const S& reg, int r) const {
    return reg / spow(pair(omega(), nu), r - 1, one_);
  }

  // Reg_p^PR from regulator values at two (or more) nu; residual of the third if given
  Vec2<S> reg_pr(const std::vector<std::pair<Vec2<S>, S>>& values, int r,
                 std::vector<S>* residuals = nullptr) const {
    if (values.size() < 2 || r < 1) throw std::invalid_argument("reg_pr needs two values and r >= 1");
    const Vec2<S>& n1 = values[0].first;
    const Vec2<S>& n2 = values[1].first;
    Mat2<S> A{n1.e * gram_, -(n1.w * gram_), n2.e * gram_, -(n2.w * gram_)};
    if (ScalarOps<S>::is_zero(A.det())) throw std::domain_error("reg_pr: proportional nu");
    Vec2<S> rhs{reg_tilde(n1, values[0].second, r), reg_tilde(n2, values[1].second, r)};
    Vec2<S> R = A.inverse().apply(rhs);
    if (residuals)
      for (size_t i = 2; i < values.size(); ++i)
        residuals->push_back(pair(R, values[i].first) - reg_tilde(values[i].first, values[i].second, r));
    return R;
  }

  // (c_+, c_-) from the closed formula
  std::pair<S, S> modified_reg_coords(const S& reg_nplus, const S& reg_nminus, int r) const {
    auto [nm, np] = n_vectors();
    S cp = num(2) * reg_nplus / spow(pair(omega(), np), r, one_);
    S cm = num(p_ - 1) * reg_nminus / spow(pair(omega(), nm), r, one_);
    return {cp, cm};
  }

  // coordinates (c_+, c_-) of (1-phi)^2 R on the basis (nu_+, nu_-)
  std::pair<S, S> brute_force_coords(const Vec2<S>& R) const {
    Mat2<S> I{one_, num(0), num(0), one_};
    Mat2<S> T = I - frobenius();
    Vec2<S> x = (T * T).apply(R);
    auto [nm, np] = nu_pm();
    Mat2<S> B{np.w, nm.w, np.e, nm.e};
    Vec2<S> c = B.inverse().apply(x);
    return {c.w, c.e};
  }

 private:
  long p_;
  S u_, v_, gram_, one_, alpha_;
  Vec2<S> phi_eta_;
};

}  // namespace pmbsd
