// Kernel bodies, written once against a small vector abstraction V and
// instantiated per ISA. Included only by the per-ISA translation units; the
// anonymous namespace keeps every instantiation local to its unit so code
// compiled with wider instructions never leaks into another unit.

#include "couette/kernels.hpp"

namespace couette::kernels {
namespace {

template <class V>
struct FullCoef {
  V c1;  // ∂_t p / p
  V c2;  // 2k² / p
  V c3;  // p / (γM²)
};

template <class V>
struct FullState {
  V r, a, o, th;
};

template <class V>
inline FullCoef<V> full_coef(V eta, double k, double k2, double inv_gm2, double t) {
  const V q = eta - V(k * t);
  const V p = V(k2) + q * q;
  const V inv = V(1.0) / p;
  return {V(-2.0 * k) * q * inv, V(2.0 * k2) * inv, p * V(inv_gm2)};
}

template <class V>
inline FullState<V> full_rhs(const FullState<V>& y, const FullCoef<V>& c, double gm1) {
  return {V(0.0) - y.a, c.c1 * y.a - c.c2 * y.o + c.c3 * (y.r + y.th), y.a, V(-gm1) * y.a};
}

template <class V>
inline FullState<V> full_axpy(const FullState<V>& y, V h, const FullState<V>& k) {
  return {y.r + h * k.r, y.a + h * k.a, y.o + h * k.o, y.th + h * k.th};
}

template <class V>
inline FullState<V> full_rk4(const FullState<V>& y, double h, const FullCoef<V>& c0, const FullCoef<V>& cm,
                             const FullCoef<V>& c1, double gm1) {
  const V hh(0.5 * h);
  const V hf(h);
  const V h6(h / 6.0);
  const V two(2.0);
  const auto k1 = full_rhs(y, c0, gm1);
  const auto k2 = full_rhs(full_axpy(y, hh, k1), cm, gm1);
  const auto k3 = full_rhs(full_axpy(y, hh, k2), cm, gm1);
  const auto k4 = full_rhs(full_axpy(y, hf, k3), c1, gm1);
  return {y.r + h6 * (k1.r + two * (k2.r + k3.r) + k4.r), y.a + h6 * (k1.a + two * (k2.a + k3.a) + k4.a),
          y.o + h6 * (k1.o + two * (k2.o + k3.o) + k4.o), y.th + h6 * (k1.th + two * (k2.th + k3.th) + k4.th)};
}

template <class V>
inline V full_max_abs(const FullState<V>& y) {
  return max(max(abs(y.r), abs(y.a)), max(abs(y.o), abs(y.th)));
}

template <class V>
inline V full_max_diff(const FullState<V>& x, const FullState<V>& y) {
  return max(max(abs(x.r - y.r), abs(x.a - y.a)), max(abs(x.o - y.o), abs(x.th - y.th)));
}

template <class V>
StepStats full_step_impl(const FullStepArgs& args, double t, double h, bool doubling) {
  const double k = args.k;
  const double k2 = k * k;
  const double inv_gm2 = 1.0 / (args.gamma * args.mach * args.mach);
  const double gm1 = args.gamma - 1.0;
  V err_acc(0.0);
  V scale_acc(0.0);
  for (std::size_t i = 0; i < args.n; i += V::width) {
    const V eta = V::load(args.eta + i);
    const FullState<V> y{V::load(args.in[0] + i), V::load(args.in[1] + i), V::load(args.in[2] + i),
                         V::load(args.in[3] + i)};
    FullState<V> out;
    if (!doubling) {
      out = full_rk4(y, h, full_coef(eta, k, k2, inv_gm2, t), full_coef(eta, k, k2, inv_gm2, t + 0.5 * h),
                     full_coef(eta, k, k2, inv_gm2, t + h), gm1);
    } else {
      const auto c0 = full_coef(eta, k, k2, inv_gm2, t);
      const auto c1 = full_coef(eta, k, k2, inv_gm2, t + 0.25 * h);
      const auto c2 = full_coef(eta, k, k2, inv_gm2, t + 0.5 * h);
      const auto c3 = full_coef(eta, k, k2, inv_gm2, t + 0.75 * h);
      const auto c4 = full_coef(eta, k, k2, inv_gm2, t + h);
      const auto single = full_rk4(y, h, c0, c2, c4, gm1);
      const auto half = full_rk4(y, 0.5 * h, c0, c1, c2, gm1);
      out = full_rk4(half, 0.5 * h, c2, c3, c4, gm1);
      err_acc = max(err_acc, full_max_diff(out, single));
    }
    scale_acc = max(scale_acc, max(full_max_abs(y), full_max_abs(out)));
    out.r.store(args.out[0] + i);
    out.a.store(args.out[1] + i);
    out.o.store(args.out[2] + i);
    out.th.store(args.out[3] + i);
  }
  return {err_acc.reduce_max(), scale_acc.reduce_max()};
}

template <class V>
struct WeightedCoef {
  V a, b, d, f;
};

template <class V>
inline WeightedCoef<V> weighted_coef(V eta, const WeightedStepArgs& args, double t) {
  const double k = args.k;
  const double k2 = k * k;
  const V q = eta - V(k * t);
  const V p = V(k2) + q * q;
  const V sp = sqrt(p);
  const V inv_p = V(1.0) / p;
  const V inv_p32 = inv_p / sp;
  const V b = sp * V(1.0 / args.mach);
  return {V(-0.5 * k) * q * inv_p, b, V(args.acoustic) * b + V(2.0 * args.mach * k2) * inv_p32,
          V(-2.0 * k2 / args.gamma) * inv_p32 / sqrt(sp)};
}

template <class V>
struct WeightedPair {
  V z1, z2;
};

template <class V>
inline WeightedPair<V> weighted_rhs(const WeightedPair<V>& z, V s, const WeightedCoef<V>& c) {
  return {V(0.0) - c.a * z.z1 - c.b * z.z2, c.d * z.z1 + c.a * z.z2 + c.f * s};
}

template <class V>
inline WeightedPair<V> weighted_rk4(const WeightedPair<V>& y, V s, double h, const WeightedCoef<V>& c0,
                                    const WeightedCoef<V>& cm, const WeightedCoef<V>& c1) {
  const V hh(0.5 * h);
  const V hf(h);
  const V h6(h / 6.0);
  const V two(2.0);
  const auto k1 = weighted_rhs(y, s, c0);
  const auto k2 = weighted_rhs({y.z1 + hh * k1.z1, y.z2 + hh * k1.z2}, s, cm);
  const auto k3 = weighted_rhs({y.z1 + hh * k2.z1, y.z2 + hh * k2.z2}, s, cm);
  const auto k4 = weighted_rhs({y.z1 + hf * k3.z1, y.z2 + hf * k3.z2}, s, c1);
  return {y.z1 + h6 * (k1.z1 + two * (k2.z1 + k3.z1) + k4.z1), y.z2 + h6 * (k1.z2 + two * (k2.z2 + k3.z2) + k4.z2)};
}

template <class V>
StepStats weighted_step_impl(const WeightedStepArgs& args, double t, double h, bool doubling) {
  V err_acc(0.0);
  V scale_acc(0.0);
  for (std::size_t i = 0; i < args.n; i += V::width) {
    const V eta = V::load(args.eta + i);
    const V s = V::load(args.source + i);
    const WeightedPair<V> y{V::load(args.in[0] + i), V::load(args.in[1] + i)};
    WeightedPair<V> out;
    if (!doubling) {
      out = weighted_rk4(y, s, h, weighted_coef(eta, args, t), weighted_coef(eta, args, t + 0.5 * h),
                         weighted_coef(eta, args, t + h));
    } else {
      const auto c0 = weighted_coef(eta, args, t);
      const auto c1 = weighted_coef(eta, args, t + 0.25 * h);
      const auto c2 = weighted_coef(eta, args, t + 0.5 * h);
      const auto c3 = weighted_coef(eta, args, t + 0.75 * h);
      const auto c4 = weighted_coef(eta, args, t + h);
      const auto single = weighted_rk4(y, s, h, c0, c2, c4);
      const auto half = weighted_rk4(y, s, 0.5 * h, c0, c1, c2);
      out = weighted_rk4(half, s, 0.5 * h, c2, c3, c4);
      err_acc = max(err_acc, max(abs(out.z1 - single.z1), abs(out.z2 - single.z2)));
    }
    scale_acc = max(scale_acc, max(max(abs(y.z1), abs(y.z2)), max(abs(out.z1), abs(out.z2))));
    out.z1.store(args.out[0] + i);
    out.z2.store(args.out[1] + i);
  }
  return {err_acc.reduce_max(), scale_acc.reduce_max()};
}

template <class V>
NormSums norm_sums_impl(const NormArgs& args) {
  const double k = args.k;
  const double k2 = k * k;
  const V gm1(args.gamma - 1.0);
  V pvx(0.0), pvy(0.0), qv(0.0), rho(0.0), theta(0.0), sigma(0.0), rho_sum(0.0), theta_sum(0.0);
  for (std::size_t i = 0; i < args.n; i += V::width) {
    const V eta = V::load(args.eta + i);
    const V w = V::load(args.weight + i);
    const V r = V::load(args.in[0] + i);
    const V a = V::load(args.in[1] + i);
    const V o = V::load(args.in[2] + i);
    const V th = V::load(args.in[3] + i);
    const V q = eta - V(k * args.t);
    const V p = V(k2) + q * q;
    const V inv_p = V(1.0) / p;
    const V wo2 = w * o * o * inv_p * inv_p;
    pvx = pvx + wo2 * q * q;
    pvy = pvy + wo2 * V(k2);
    qv = qv + w * a * a * inv_p;
    rho = rho + w * r * r;
    theta = theta + w * th * th;
    const V s = gm1 * r - th;
    const V rt = r + th;
    sigma = sigma + w * s * s;
    const V xr = s + rt;
    const V xt = gm1 * rt - s;
    rho_sum = rho_sum + w * xr * xr;
    theta_sum = theta_sum + w * xt * xt;
  }
  NormSums out;
  out.pvx = pvx.reduce_add();
  out.pvy = pvy.reduce_add();
  out.qv = qv.reduce_add();
  out.rho = rho.reduce_add();
  out.theta = theta.reduce_add();
  out.sigma = sigma.reduce_add();
  out.rho_sum = rho_sum.reduce_add();
  out.theta_sum = theta_sum.reduce_add();
  return out;
}

template <class V>
KernelTable make_table(Isa isa) {
  KernelTable t;
  t.isa = isa;
  t.width = V::width;
  t.full_step = &full_step_impl<V>;
  t.weighted_step = &weighted_step_impl<V>;
  t.norm_sums = &norm_sums_impl<V>;
  return t;
}

}  // namespace
}  // namespace couette::kernels
