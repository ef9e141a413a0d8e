#pragma once

#include <utility>

#include "sqtile/exact_linalg.hpp"
#include "sqtile/errors.hpp"

namespace sqtile {

// Symplectic context for the transport maps: a pairing on absolute vectors
// and the projection from relative to absolute coordinates. Standalone
// instances use P = identity.
struct PairingContext {
  RatMat j;  // skew, non-degenerate
  RatMat p;  // abs_rank x rel_rank

  static PairingContext plain(RatMat pairing) {
    std::size_t d = pairing.rows();
    return PairingContext{std::move(pairing), to_rat(IntMat::identity(d))};
  }

  Rat pair(const RatVec& u, const RatVec& w) const {
    if (u.size() != j.rows() || w.size() != j.rows())
      throw DimensionMismatch("pairing: absolute vector length mismatch");
    Rat acc(0);
    for (std::size_t i = 0; i < j.rows(); ++i) {
      if (u[i] == 0) continue;
      for (std::size_t k = 0; k < j.cols(); ++k)
        if (j(i, k) != 0 && w[k] != 0) acc += u[i] * j(i, k) * w[k];
    }
    return acc;
  }

  RatVec project(const RatVec& rel) const {
    if (rel.size() != p.cols()) throw DimensionMismatch("project: relative length mismatch");
    return p * rel;
  }
};

// x = a + b i with Area(x) = <p(a), p(b)> = 1.
struct FramedPoint {
  RatVec a, b;  // relative coordinates

  static FramedPoint checked(const PairingContext& ctx, RatVec a, RatVec b) {
    Rat area = ctx.pair(ctx.project(a), ctx.project(b));
    if (area != 1)
      throw PreconditionViolated("framed point requires <p(a), p(b)> = 1",
                                 rat_to_string(area));
    return FramedPoint{std::move(a), std::move(b)};
  }
};

struct TransportInstance {
  FramedPoint point;
  RatVec s;  // relative displacement along the unstable (or stable) leaf
  RatVec v;  // absolute vector being transported
};

// Unstable transport: v(x + s) = v + <v, p(s)> p(b), valid when
// <p(s), p(b)> = 0.
inline RatVec transport_unstable(const PairingContext& ctx, const TransportInstance& inst) {
  RatVec ps = ctx.project(inst.s);
  RatVec pb = ctx.project(inst.point.b);
  Rat area = ctx.pair(ctx.project(inst.point.a), pb);
  if (area != 1)
    throw PreconditionViolated("transport_unstable requires <p(a), p(b)> = 1",
                               rat_to_string(area));
  Rat hypothesis = ctx.pair(ps, pb);
  if (hypothesis != 0)
    throw PreconditionViolated("transport_unstable requires <p(s), p(b)> = 0",
                               rat_to_string(hypothesis));
  Rat c = ctx.pair(inst.v, ps);
  RatVec out = inst.v;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * pb[i];
  return out;
}

// Stable transport (roles of a and b exchanged, sign flipped):
// v(x + s i) = v - <v, p(s)> p(a), valid when <p(s), p(a)> = 0.
inline RatVec transport_stable(const PairingContext& ctx, const TransportInstance& inst) {
  RatVec ps = ctx.project(inst.s);
  RatVec pa = ctx.project(inst.point.a);
  Rat area = ctx.pair(pa, ctx.project(inst.point.b));
  if (area != 1)
    throw PreconditionViolated("transport_stable requires <p(a), p(b)> = 1",
                               rat_to_string(area));
  Rat hypothesis = ctx.pair(ps, pa);
  if (hypothesis != 0)
    throw PreconditionViolated("transport_stable requires <p(s), p(a)> = 0",
                               rat_to_string(hypothesis));
  Rat c = ctx.pair(inst.v, ps);
  RatVec out = inst.v;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= c * pa[i];
  return out;
}

struct HolonomyResult {
  RatVec composed;     // four-step transport around the square
  RatVec closed_form;  // v + eps <v, p(delta)> p(delta)
  RatVec defect;       // composed - v
};

// Holonomy around the square
//   a+bi -> (a+delta)+bi -> (a+delta)+(b+eps a)i -> a+(b+eps a)i -> a+bi,
// with delta symplectically orthogonal to the frame. The composition must
// equal the closed form exactly.
inline HolonomyResult holonomy_square(const PairingContext& ctx, const FramedPoint& pt,
                                      const RatVec& delta, const Rat& eps, const RatVec& v) {
  RatVec pd = ctx.project(delta);
  RatVec pa = ctx.project(pt.a);
  RatVec pb = ctx.project(pt.b);
  Rat da = ctx.pair(pd, pa);
  if (da != 0)
    throw PreconditionViolated("holonomy_square requires <p(delta), p(a)> = 0",
                               rat_to_string(da));
  Rat db = ctx.pair(pd, pb);
  if (db != 0)
    throw PreconditionViolated("holonomy_square requires <p(delta), p(b)> = 0",
                               rat_to_string(db));
  Rat area = ctx.pair(pa, pb);
  if (area != 1)
    throw PreconditionViolated("holonomy_square requires <p(a), p(b)> = 1",
                               rat_to_string(area));

  auto scaled = [](const Rat& c, const RatVec& x) {
    RatVec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = c * x[i];
    return out;
  };

  // Step 1: unstable move by delta at a + bi.
  RatVec v1 = transport_unstable(ctx, {FramedPoint{pt.a, pt.b}, delta, v});
  // Step 2: stable move by eps*a at (a+delta) + bi.
  RatVec a_delta = pt.a + delta;
  RatVec v2 = transport_stable(ctx, {FramedPoint{a_delta, pt.b}, scaled(eps, pt.a), v1});
  // Step 3: unstable move by -delta at (a+delta) + (b+eps a)i.
  RatVec b_eps = pt.b + scaled(eps, pt.a);
  RatVec v3 = transport_unstable(ctx, {FramedPoint{a_delta, b_eps}, scaled(Rat(-1), delta), v2});
  // Step 4: stable move by -eps*a at a + (b+eps a)i.
  RatVec v4 = transport_stable(ctx, {FramedPoint{pt.a, b_eps}, scaled(-eps, pt.a), v3});

  HolonomyResult res;
  res.composed = v4;
  Rat c = eps * ctx.pair(v, pd);
  res.closed_form = v;
  for (std::size_t i = 0; i < v.size(); ++i) res.closed_form[i] += c * pd[i];
  res.defect = res.composed - v;
  return res;
}

// Orthogonality of the transported vector to the new tautological frame:
// returns (<v', p(a) + p(s)>, <v', p(b)>), both exactly zero whenever
// <v, p(a)> = <v, p(b)> = 0 and the transport hypothesis holds.
inline std::pair<Rat, Rat> transport_orbit_orthogonality(const PairingContext& ctx,
                                                         const TransportInstance& inst) {
  RatVec pa = ctx.project(inst.point.a);
  RatVec pb = ctx.project(inst.point.b);
  Rat va = ctx.pair(inst.v, pa);
  if (va != 0)
    throw PreconditionViolated("transport_orbit_orthogonality requires <v, p(a)> = 0",
                               rat_to_string(va));
  Rat vb = ctx.pair(inst.v, pb);
  if (vb != 0)
    throw PreconditionViolated("transport_orbit_orthogonality requires <v, p(b)> = 0",
                               rat_to_string(vb));
  RatVec vp = transport_unstable(ctx, inst);
  RatVec new_a = pa + ctx.project(inst.s);
  return {ctx.pair(vp, new_a), ctx.pair(vp, pb)};
}

}  // namespace sqtile
