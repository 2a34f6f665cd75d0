#pragma once

#include <functional>
#include <memory>

#include <Eigen/Dense>

#include "dfrac/linop.hpp"
#include "dfrac/resolvent.hpp"
#include "dfrac/sequence.hpp"
#include "dfrac/solver.hpp"

namespace dfrac {

// Second-order problems whose right-hand side is not in canonical form,
// rewritten as Delta^2 u(n) = T u(n+2) + ... with a bounded T.

using StateMap = std::function<Eigen::VectorXd(int, const Eigen::VectorXd&)>;

/// T = I - 2 (2(1 + gamma) + B)^{-1}, turning
///   Delta^2 u(n) = (B + 2 gamma) u(n+1) + g(n, u(n))
/// into Delta^2 u(n) = T u(n+2) + T u(n) + (I - T) g(n, u(n)).
LinOperator reformulate_shifted(const LinOperator& b, double gamma);

/// T = I - (I - B)^{-1}, turning Delta^2 u(n) = B u(n) + g(n+1, u(n+1)) into
///   Delta^2 u(n) = T u(n+2) - 2 T u(n+1) + (I - T) g(n+1, u(n+1)).
LinOperator reformulate_delayed(const LinOperator& b);

/// f(n, x) = T x + (I - T) g(n, x), with L = ||T|| + ||I - T|| g_lipschitz.
StateForcing shifted_forcing(std::shared_ptr<const LinOperator> t, StateMap g, double g_lipschitz);

/// max_{n<=N-2} ||Delta^2 u(n) - (B + 2 gamma) u(n+1) - g(n, u(n))|| / max(1, ||u||_inf).
double shifted_original_residual(const VecSeq& u, const LinOperator& b, double gamma, const StateMap& g);

/// Solves the rewritten delayed problem by the explicit recursion
///   u(n) = hom(n) + sum_{k<=n-2} S(n-2-k) [-2 T u(k+1) + (I - T) g(k+1, u(k+1))],
/// where `family` is the alpha = 2 family generated by T.
/// When B has spectrum below 0, T is positive and S grows geometrically while
/// u need not; the sum then cancels and loses about log10(sup ||S|| / ||u||)
/// digits. The original recursion is the better tool in that regime.
VecSeq solve_delayed(const ResolventFamily& family, const StateMap& g, const Eigen::VectorXd& u0,
                     const Eigen::VectorXd& u1, int N);

/// max_{n<=N-2} ||Delta^2 u(n) - B u(n) - g(n+1, u(n+1))|| / max(1, ||u||_inf).
double delayed_original_residual(const VecSeq& u, const LinOperator& b, const StateMap& g);

}  // namespace dfrac
