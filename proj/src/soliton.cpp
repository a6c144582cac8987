#include "solitonlab/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>

namespace solitonlab {

Cx theta(const SpectralDatum& d, double x, double t) {
  const Cx I(0.0, 1.0);
  return -I * d.k * x - I * d.k * d.k * t;
}

double envelope_center(const SpectralDatum& d, double t) {
  const double a = d.k.real();
  const double b = d.k.imag();
  const double cc = std::norm(d.c) - std::norm(d.d);
  // w = 2b(x + 2at); the envelope sits where w = -ln|cc| / 2 (pole line for
  // the singular branch, cosh minimum for the regular one).
  double w_star = 0.0;
  if (cc != 0.0) w_star = -0.5 * std::log(std::abs(cc));
  return -2.0 * a * t + w_star / (2.0 * b);
}

void validate_spectral(const SolitonData& data) {
  if (data.size() > kMaxSpectralPoints)
    throw InvalidInputError("spectral data: at most 64 discrete eigenvalues");
  for (std::size_t m = 0; m < data.size(); ++m) {
    const SpectralDatum& d = data[m];
    if (!(d.k.imag() > 0.0))
      throw InvalidInputError("spectral data: Im k must be positive (index " +
                              std::to_string(m) + ")");
    if (d.c == Cx(0.0, 0.0) && d.d == Cx(0.0, 0.0))
      throw InvalidInputError("spectral data: c and d both zero (index " +
                              std::to_string(m) + ")");
    for (std::size_t n = m + 1; n < data.size(); ++n)
      if (data[n].k == d.k)
        throw InvalidInputError("spectral data: duplicate eigenvalue (indices " +
                                std::to_string(m) + ", " + std::to_string(n) + ")");
  }
}

void validate_general(const std::vector<GeneralSpectralDatum>& data,
                      const std::vector<int>& signature) {
  if (data.size() > kMaxSpectralPoints)
    throw InvalidInputError("spectral data: at most 64 discrete eigenvalues");
  if (signature.empty())
    throw InvalidInputError("signature: must name at least one component");
  for (int s : signature)
    if (s != 1 && s != -1)
      throw InvalidInputError("signature: entries must be +1 or -1");
  for (std::size_t m = 0; m < data.size(); ++m) {
    const GeneralSpectralDatum& d = data[m];
    if (!(d.k.imag() > 0.0))
      throw InvalidInputError("spectral data: Im k must be positive (index " +
                              std::to_string(m) + ")");
    if (d.coeffs.size() != signature.size())
      throw InvalidInputError("spectral data: coefficient count must match signature");
    bool all_zero = true;
    for (const Cx& c : d.coeffs) all_zero = all_zero && c == Cx(0.0, 0.0);
    if (all_zero)
      throw InvalidInputError("spectral data: all coefficients zero (index " +
                              std::to_string(m) + ")");
    for (std::size_t n = m + 1; n < data.size(); ++n)
      if (data[n].k == d.k)
        throw InvalidInputError("spectral data: duplicate eigenvalue (indices " +
                                std::to_string(m) + ", " + std::to_string(n) + ")");
  }
}

namespace {

// Shared view of the evaluation problem: N eigenvalues, P components,
// coefficients datum-major, one +-1 sign per component.
struct EngineInput {
  const Cx* k = nullptr;
  const Cx* coeffs = nullptr;
  std::size_t N = 0;
  std::size_t P = 0;
  const double* sig = nullptr;
};

std::vector<Cx> compute_thetas(const EngineInput& in, double x, double t) {
  std::vector<Cx> th(in.N);
  const Cx I(0.0, 1.0);
  for (std::size_t m = 0; m < in.N; ++m)
    th[m] = -I * in.k[m] * x - I * in.k[m] * in.k[m] * t;
  return th;
}

// sum_j sig_j conj(C_mj) C_nj, the signed coefficient coupling of rows m, n.
Cx pair_coupling(const EngineInput& in, std::size_t m, std::size_t n) {
  Cx s(0.0, 0.0);
  for (std::size_t j = 0; j < in.P; ++j)
    s += in.sig[j] * (std::conj(in.coeffs[m * in.P + j]) * in.coeffs[n * in.P + j]);
  return s;
}

Cx gram_entry(Cx th_m, Cx th_n, Cx coupling, Cx k_m, Cx k_n) {
  const Cx e = std::conj(th_m) + th_n;
  if (std::abs(e.real()) > kExponentClamp)
    throw OverflowError("gram matrix: exponent " + std::to_string(e.real()) +
                        " beyond clamp");
  // conj(k_m) - k_n never vanishes: the first term lives in the lower half
  // plane, the second in the upper.
  return (std::exp(-e) + coupling * std::exp(e)) / (std::conj(k_m) - k_n);
}

CMatrix build_gram(const EngineInput& in, const std::vector<Cx>& th) {
  CMatrix m(in.N, in.N);
  for (std::size_t a = 0; a < in.N; ++a)
    for (std::size_t b = 0; b < in.N; ++b)
      m(a, b) = gram_entry(th[a], th[b], pair_coupling(in, a, b), in.k[a], in.k[b]);
  return m;
}

// Diagonal balance factors 1 / sqrt(scale of M_mm). Extracting them from
// both sides keeps rows attached to far-away solitons from swamping the
// pivoting, and makes the pole gate scale-invariant: the factors cancel
// against the outer exponentials when the inverse is used.
std::vector<double> balance_factors(const EngineInput& in, const std::vector<Cx>& th) {
  std::vector<double> bal(in.N);
  for (std::size_t m = 0; m < in.N; ++m) {
    const double e = 2.0 * th[m].real();
    const double mag = std::exp(-e) + std::abs(pair_coupling(in, m, m)) * std::exp(e);
    bal[m] = 1.0 / std::sqrt(mag / (2.0 * in.k[m].imag()));
  }
  return bal;
}

// Evaluates all P fields at one point. Returns false when the Gram solve is
// singular (caller marks the sample); throws OverflowError past the clamp.
bool eval_core(const EngineInput& in, double x, double t, Cx* out) {
  for (std::size_t j = 0; j < in.P; ++j) out[j] = Cx(0.0, 0.0);
  if (in.N == 0) return true;

  const std::vector<Cx> th = compute_thetas(in, x, t);

  // Deep in the far field every term of the solve is below ~1e-17 of the
  // envelope scale; return exact zeros rather than inverting a matrix of
  // pure exponentials.
  bool far = true;
  for (std::size_t m = 0; m < in.N && far; ++m)
    far = std::abs(2.0 * th[m].real()) > kFarFieldExponent;
  if (far) return true;

  CMatrix gram = build_gram(in, th);
  const std::vector<double> bal = balance_factors(in, th);
  // Every balanced diagonal has unit magnitude scale, so `scale` >= 1 and the
  // LU pivots on numbers of comparable size regardless of how the solitons
  // are spread out.
  double scale = 0.0;
  for (std::size_t a = 0; a < in.N; ++a)
    for (std::size_t b = 0; b < in.N; ++b) {
      gram(a, b) *= bal[a] * bal[b];
      const double re = (std::conj(th[a]) + th[b]).real();
      const double mag = std::exp(-re) +
                         std::abs(pair_coupling(in, a, b)) * std::exp(re);
      scale = std::max(scale, mag * bal[a] * bal[b] /
                                  std::abs(std::conj(in.k[a]) - in.k[b]));
    }

  LuResult lu;
  try {
    lu = lu_invert(gram);
  } catch (const SingularMatrixError&) {
    return false;
  }

  // Pole gate, mirroring the closed forms' relative test. Each entry is a
  // sum of two terms of magnitude up to `scale`, so it carries ~eps * scale
  // of cancellation noise and the solve is meaningless once the inverse
  // reaches 1/(1e-12 * scale). The LU pivot test alone cannot see this: near
  // a pole the tiny entries *are* the row scale.
  if (!(lu.inverse.max_abs() * scale < 1e12)) return false;

  for (std::size_t m = 0; m < in.N; ++m) {
    for (std::size_t n = 0; n < in.N; ++n) {
      // |Re(th_m - conj th_n)| <= 300 whenever the Gram clamp passed, since
      // the diagonal entries bound each |Re th| by 150.
      const Cx g = std::exp(th[m] - std::conj(th[n])) *
                   (bal[m] * bal[n] * lu.inverse(m, n));
      for (std::size_t j = 0; j < in.P; ++j)
        out[j] += in.coeffs[m * in.P + j] * g;
    }
  }
  for (std::size_t j = 0; j < in.P; ++j) out[j] *= 2.0;
  return true;
}

constexpr double kMixedSignature[2] = {-1.0, 1.0};

// Adapts the two-component data layout to the engine view. The mixed case
// is signature (-1, +1) with coefficients (c, d); eval_fields and
// eval_fields_general share eval_core bit for bit.
struct MixedView {
  std::vector<Cx> ks;
  std::vector<Cx> coeffs;

  explicit MixedView(const SolitonData& data)
      : ks(data.size()), coeffs(2 * data.size()) {
    for (std::size_t m = 0; m < data.size(); ++m) {
      ks[m] = data[m].k;
      coeffs[2 * m] = data[m].c;
      coeffs[2 * m + 1] = data[m].d;
    }
  }

  EngineInput input() const {
    return EngineInput{ks.data(), coeffs.data(), ks.size(), 2, kMixedSignature};
  }
};

FieldSample singular_sample() {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  return FieldSample{Cx(nan, nan), Cx(nan, nan), true};
}

std::size_t worker_count(std::size_t rows) {
  std::size_t w = std::thread::hardware_concurrency();
  if (w == 0) w = 1;
  if (const char* env = std::getenv("SOLITONLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1)
      w = std::min<std::size_t>(w, static_cast<std::size_t>(v));
  }
  return std::max<std::size_t>(1, std::min(w, rows));
}

}  // namespace

CMatrix gram_matrix(const SolitonData& data, double x, double t) {
  if (data.empty())
    throw InvalidInputError("gram_matrix: need at least one spectral datum");
  if (data.size() > kMaxSpectralPoints)
    throw InvalidInputError("gram_matrix: at most 64 discrete eigenvalues");
  const MixedView view(data);
  const EngineInput in = view.input();
  return build_gram(in, compute_thetas(in, x, t));
}

FieldSample eval_fields(const SolitonData& data, double x, double t) {
  if (data.size() > kMaxSpectralPoints)
    throw InvalidInputError("eval_fields: at most 64 discrete eigenvalues");
  const MixedView view(data);
  Cx out[2];
  if (!eval_core(view.input(), x, t, out)) return singular_sample();
  return FieldSample{out[0], out[1], false};
}

GeneralFieldSample eval_fields_general(const std::vector<GeneralSpectralDatum>& data,
                                       const std::vector<int>& signature,
                                       double x, double t) {
  validate_general(data, signature);
  const std::size_t P = signature.size();
  std::vector<Cx> ks(data.size());
  std::vector<Cx> coeffs(data.size() * P);
  for (std::size_t m = 0; m < data.size(); ++m) {
    ks[m] = data[m].k;
    for (std::size_t j = 0; j < P; ++j) coeffs[m * P + j] = data[m].coeffs[j];
  }
  std::vector<double> sig(P);
  for (std::size_t j = 0; j < P; ++j) sig[j] = static_cast<double>(signature[j]);

  GeneralFieldSample s;
  s.q.assign(P, Cx(0.0, 0.0));
  const EngineInput in{ks.data(), coeffs.data(), data.size(), P, sig.data()};
  if (!eval_core(in, x, t, s.q.data())) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.q.assign(P, Cx(nan, nan));
    s.singular = true;
  }
  return s;
}

FieldSample one_soliton_closed(const SpectralDatum& d, double x, double t) {
  const Cx th = theta(d, x, t);
  const double w = 2.0 * th.real();
  if (std::abs(w) > kFarFieldExponent) return FieldSample{};

  const double cc = std::norm(d.c) - std::norm(d.d);
  const double den = std::exp(-w) - cc * std::exp(w);
  const double scale = std::max(std::exp(-w), std::abs(cc) * std::exp(w));
  if (std::abs(den) < 1e-12 * scale)
    throw SingularPointError("one_soliton_closed: pole at x=" + std::to_string(x) +
                             ", t=" + std::to_string(t));

  const Cx osc = std::exp(th - std::conj(th));  // unit modulus
  const Cx pref = 2.0 * (std::conj(d.k) - d.k) * osc / den;
  return FieldSample{d.c * pref, d.d * pref, false};
}

FieldSample two_soliton_closed(const SolitonData& data2, double x, double t) {
  if (data2.size() != 2)
    throw InvalidInputError("two_soliton_closed: need exactly two spectral data");
  const SpectralDatum& a = data2[0];
  const SpectralDatum& b = data2[1];
  const Cx th1 = theta(a, x, t);
  const Cx th2 = theta(b, x, t);
  if (std::abs(2.0 * th1.real()) > kFarFieldExponent &&
      std::abs(2.0 * th2.real()) > kFarFieldExponent)
    return FieldSample{};

  // Hand-expanded 2 x 2 solve (adjugate over determinant); deliberately
  // shares no code with the generic matrix path.
  const auto entry = [](Cx thm, Cx thn, const SpectralDatum& dm,
                        const SpectralDatum& dn) {
    const Cx e = std::conj(thm) + thn;
    if (std::abs(e.real()) > kExponentClamp)
      throw OverflowError("two_soliton_closed: exponent beyond clamp");
    const Cx coupling = -std::conj(dm.c) * dn.c + std::conj(dm.d) * dn.d;
    return (std::exp(-e) + coupling * std::exp(e)) / (std::conj(dm.k) - dn.k);
  };
  const Cx m11 = entry(th1, th1, a, a);
  const Cx m12 = entry(th1, th2, a, b);
  const Cx m21 = entry(th2, th1, b, a);
  const Cx m22 = entry(th2, th2, b, b);

  const Cx det = m11 * m22 - m12 * m21;
  const double scale = std::max(std::abs(m11 * m22), std::abs(m12 * m21));
  if (std::abs(det) < 1e-12 * scale)
    throw SingularPointError("two_soliton_closed: pole at x=" + std::to_string(x) +
                             ", t=" + std::to_string(t));

  const Cx e11 = std::exp(th1 - std::conj(th1));
  const Cx e12 = std::exp(th1 - std::conj(th2));
  const Cx e21 = std::exp(th2 - std::conj(th1));
  const Cx e22 = std::exp(th2 - std::conj(th2));

  const Cx w1 = e11 * m22 - e12 * m12;  // multiplies datum 1 coefficients
  const Cx w2 = e22 * m11 - e21 * m21;  // multiplies datum 2 coefficients
  const Cx q1 = 2.0 * (a.c * w1 + b.c * w2) / det;
  const Cx q2 = 2.0 * (a.d * w1 + b.d * w2) / det;
  return FieldSample{q1, q2, false};
}

FieldGrid eval_grid(const SolitonData& data, const Grid1D& xg, const Grid1D& tg) {
  if (xg.n < 1 || tg.n < 1)
    throw InvalidRangeError("eval_grid: grids must be nonempty");
  if (data.size() > kMaxSpectralPoints)
    throw InvalidInputError("eval_grid: at most 64 discrete eigenvalues");
  FieldGrid g{xg, tg, std::vector<FieldSample>(xg.n * tg.n)};

  const std::size_t workers = worker_count(tg.n);
  auto run_rows = [&](std::size_t w0) {
    for (std::size_t ti = w0; ti < tg.n; ti += workers) {
      const double t = tg.value(ti);
      for (std::size_t xi = 0; xi < xg.n; ++xi) {
        FieldSample s;
        try {
          s = eval_fields(data, xg.value(xi), t);
        } catch (const OverflowError&) {
          s = singular_sample();
        }
        g.samples[ti * xg.n + xi] = s;
      }
    }
  };

  if (workers <= 1) {
    run_rows(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run_rows, w);
    for (std::thread& th : pool) th.join();
  }
  return g;
}

double min_abs_gram_det(const SolitonData& data, const Grid1D& xg, const Grid1D& tg) {
  if (data.empty())
    throw InvalidInputError("min_abs_gram_det: need at least one spectral datum");
  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t ti = 0; ti < tg.n; ++ti) {
    for (std::size_t xi = 0; xi < xg.n; ++xi) {
      try {
        best = std::min(best, std::abs(lu_det(gram_matrix(data, xg.value(xi), tg.value(ti)))));
        any = true;
      } catch (const OverflowError&) {
        // Point beyond the clamp carries no singularity information.
      }
    }
  }
  if (!any)
    throw OverflowError("min_abs_gram_det: every grid point beyond the exponent clamp");
  return best;
}

CMatrix reconstruction_matrix(const SolitonData& data, double x, double t) {
  if (data.empty())
    throw InvalidInputError("reconstruction_matrix: need at least one spectral datum");
  const MixedView view(data);
  const EngineInput in = view.input();
  const std::vector<Cx> th = compute_thetas(in, x, t);
  const LuResult lu = lu_invert(build_gram(in, th));

  const std::size_t N = data.size();
  CMatrix p1(3, 3);
  for (std::size_t m = 0; m < N; ++m) {
    const Cx em = std::exp(th[m]);
    const Cx v[3] = {1.0 / em, data[m].c * em, data[m].d * em};
    for (std::size_t n = 0; n < N; ++n) {
      const Cx en = std::exp(std::conj(th[n]));
      const Cx vhat[3] = {1.0 / en, -std::conj(data[n].c) * en,
                          std::conj(data[n].d) * en};
      const Cx w = lu.inverse(m, n);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) p1(i, j) += v[i] * w * vhat[j];
    }
  }
  return p1;
}

}  // namespace solitonlab
