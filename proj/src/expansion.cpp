#include "asymwave/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include <fmt/format.h>

#include "asymwave/errors.hpp"

namespace asymwave {

namespace {

constexpr std::size_t kMaxProductStorage = std::size_t{1} << 27;  // doubles

// Exponents of a product of base series: counts of (U, H*U, D*U) factors.
struct Key {
  int plain = 0, h = 0, d = 0;
  int degree() const { return plain + h + d; }
  bool operator<(const Key& o) const {
    return std::tie(plain, h, d) < std::tie(o.plain, o.h, o.d);
  }
  bool operator==(const Key&) const = default;
};

Key key_of(const NonlinearTerm& t) {
  Key k;
  for (auto f : t.factors) {
    if (f == Factor::Plain) ++k.plain;
    else if (f == Factor::HLike) ++k.h;
    else ++k.d;
  }
  return k;
}

std::string describe(const MultiIndexPair& p) {
  return fmt::format("(({},{}),({},{}))", p.alpha[0], p.alpha[1], p.gamma[0], p.gamma[1]);
}

}  // namespace

MultiIndexPair resonance_index(int k1, int k2) { return {{0, k1}, {k2 - 1, 0}}; }

bool CoefficientTable::contains(const MultiIndexPair& p) const noexcept {
  for (int i = 0; i < 2; ++i) {
    if (p.alpha[i] < 0 || p.gamma[i] < 0) return false;
    if (p.alpha[i] > upper_.alpha[i] || p.gamma[i] > upper_.gamma[i]) return false;
  }
  return p.order() <= order_cap_;
}

std::size_t CoefficientTable::index(const MultiIndexPair& p) const noexcept {
  return ((static_cast<std::size_t>(p.alpha[0]) * extent_[1] +
           static_cast<std::size_t>(p.alpha[1])) * extent_[2] +
          static_cast<std::size_t>(p.gamma[0])) * extent_[3] +
         static_cast<std::size_t>(p.gamma[1]);
}

double CoefficientTable::u(const MultiIndexPair& p) const {
  if (!contains(p))
    throw Error(ErrorKind::InvalidArgument, fmt::format("pair {} not in table", describe(p)));
  return u_[index(p)];
}

double CoefficientTable::n(const MultiIndexPair& p) const {
  if (!contains(p))
    throw Error(ErrorKind::InvalidArgument, fmt::format("pair {} not in table", describe(p)));
  return n_[index(p)];
}

double CoefficientTable::ell(long k) const {
  auto it = ell_.find(k);
  if (it == ell_.end())
    throw Error(ErrorKind::InvalidArgument, fmt::format("wavenumber {} not used by table", k));
  return it->second;
}

std::vector<MultiIndexPair> CoefficientTable::pairs() const {
  std::vector<MultiIndexPair> out;
  for (int a0 = 0; a0 <= upper_.alpha[0]; ++a0)
    for (int a1 = 0; a1 <= upper_.alpha[1]; ++a1)
      for (int g0 = 0; g0 <= upper_.gamma[0]; ++g0)
        for (int g1 = 0; g1 <= upper_.gamma[1]; ++g1) {
          MultiIndexPair p{{a0, a1}, {g0, g1}};
          if (p.order() <= order_cap_) out.push_back(p);
        }
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.order() < b.order(); });
  return out;
}

std::vector<MultiIndexPair> CoefficientTable::pairs_of_order(int order) const {
  std::vector<MultiIndexPair> out;
  for (const auto& p : pairs())
    if (p.order() == order) out.push_back(p);
  return out;
}

// Builds a table by the order-by-order recursion. Products of the base series
// U = u, H = h(k) u, D = d(k) u are kept as truncated multi-index convolution
// powers, so each n-entry costs one convolution per distinct factor shape
// instead of an enumeration of ordered compositions.
class TableBuilder {
 public:
  TableBuilder(const Model& model, const KernelSpec& ks, const ParameterVector& mu,
               const MultiIndexPair& upper, int order_cap)
      : model_(model) {
    if (order_cap < 1) throw Error(ErrorKind::InvalidArgument, "table order must be >= 1");
    if (ks.k1 < 1 || ks.k2 <= ks.k1)
      throw Error(ErrorKind::InvalidArgument, "kernel spec needs 1 <= k1 < k2");
    t_.kernel_ = ks;
    t_.mu_ = mu;
    t_.upper_ = upper;
    t_.order_cap_ = order_cap;
    t_.extent_ = {static_cast<std::size_t>(upper.alpha[0] + 1),
                  static_cast<std::size_t>(upper.alpha[1] + 1),
                  static_cast<std::size_t>(upper.gamma[0] + 1),
                  static_cast<std::size_t>(upper.gamma[1] + 1)};
    size_ = t_.extent_[0] * t_.extent_[1] * t_.extent_[2] * t_.extent_[3];
    t_.u_.assign(size_, 0.0);
    t_.n_.assign(size_, 0.0);

    terms_ = model.nonlinear_terms(mu, order_cap);
    plan_products();
  }

  CoefficientTable build() {
    const auto all = t_.pairs();
    std::vector<double> acc(keys_.size());
    for (const auto& p : all) {
      const int ord = p.order();
      if (ord == 0) continue;
      const std::size_t ip = t_.index(p);
      const long k = p.wavenumber(t_.kernel_.k1, t_.kernel_.k2);
      if (ord == 1) {
        set_u(p, ip, k, 0.5);
        continue;
      }

      // Convolution step for every product shape of degree >= 2.
      std::fill(acc.begin(), acc.end(), 0.0);
      for (int a0 = 0; a0 <= p.alpha[0]; ++a0)
        for (int a1 = 0; a1 <= p.alpha[1]; ++a1)
          for (int g0 = 0; g0 <= p.gamma[0]; ++g0)
            for (int g1 = 0; g1 <= p.gamma[1]; ++g1) {
              const MultiIndexPair q{{a0, a1}, {g0, g1}};
              const int oq = q.order();
              if (oq == 0 || oq == ord) continue;
              const MultiIndexPair rest{{p.alpha[0] - a0, p.alpha[1] - a1},
                                        {p.gamma[0] - g0, p.gamma[1] - g1}};
              const std::size_t iq = t_.index(q), ir = t_.index(rest);
              const int orr = ord - oq;
              for (std::size_t s = 0; s < keys_.size(); ++s) {
                const auto& plan = plans_[s];
                if (plan.degree > ord || plan.degree - 1 > orr) continue;
                const double base = base_[plan.first][iq];
                if (base == 0.0) continue;
                acc[s] += base * products_[plan.rest][ir];
              }
            }
      for (std::size_t s = 0; s < keys_.size(); ++s)
        if (plans_[s].degree >= 2) products_[s][ip] = acc[s];

      double nval = 0.0;
      if (!(model_.zero_mean() && k == 0)) {
        for (const auto& tp : term_plans_)
          nval += tp.coeff * model_.multiplier(t_.mu_, tp.outer, k) * products_[tp.product][ip];
      }
      if (!std::isfinite(nval))
        throw Error(ErrorKind::Numeric,
                    fmt::format("non-finite n coefficient at {}", describe(p)));
      t_.n_[ip] = nval;
      set_u(p, ip, k, -ell(k) * nval);
    }
    check_symmetry();
    return std::move(t_);
  }

 private:
  struct ProductPlan {
    int degree = 1;
    int first = 0;          // base series used as the leading factor
    std::size_t rest = 0;   // product with that factor removed
  };
  struct TermPlan {
    double coeff;
    Factor outer;
    std::size_t product;
  };

  std::size_t key_slot(const Key& key) {
    for (std::size_t i = 0; i < keys_.size(); ++i)
      if (keys_[i] == key) return i;
    ProductPlan plan;
    plan.degree = key.degree();
    std::size_t rest = 0;
    if (plan.degree > 1) {
      Key r = key;
      if (r.plain > 0) { --r.plain; plan.first = 0; }
      else if (r.h > 0) { --r.h; plan.first = 1; }
      else { --r.d; plan.first = 2; }
      rest = key_slot(r);
    } else {
      plan.first = key.plain ? 0 : key.h ? 1 : 2;
    }
    plan.rest = rest;
    keys_.push_back(key);
    plans_.push_back(plan);
    return keys_.size() - 1;
  }

  void plan_products() {
    // unit shapes first so base_ can alias into products_
    key_slot({1, 0, 0});
    key_slot({0, 1, 0});
    key_slot({0, 0, 1});
    for (const auto& term : terms_) {
      const std::size_t slot = key_slot(key_of(term));
      term_plans_.push_back({term.coeff, term.outer, slot});
    }
    if (keys_.size() * size_ > kMaxProductStorage)
      throw Error(ErrorKind::InvalidArgument,
                  fmt::format("table too large: {} product shapes x {} entries",
                              keys_.size(), size_));
    products_.assign(keys_.size(), std::vector<double>(size_, 0.0));
    for (std::size_t i = 0; i < 3; ++i) base_[i] = products_[i].data();
  }

  double ell(long k) {
    auto it = t_.ell_.find(k);
    if (it != t_.ell_.end()) return it->second;
    const auto& ks = t_.kernel_;
    const long ak = std::labs(k);
    double value = 0.0;
    if (ak != ks.k1 && ak != ks.k2 && !(k == 0 && model_.zero_mean())) {
      value = 1.0 / model_.linear_symbol(t_.mu_, k);
      if (!std::isfinite(value))
        throw Error(ErrorKind::Numeric,
                    fmt::format("l_mu({}) = 0 off the kernel set", k));
      if (std::fabs(value) > kSmallDivisorGuard && ak != 0)
        t_.warnings_.push_back(
            fmt::format("small divisor: |ell({})| = {:.3e}", k, std::fabs(value)));
      t_.max_abs_ell_ = std::max(t_.max_abs_ell_, std::fabs(value));
    }
    t_.ell_.emplace(k, value);
    return value;
  }

  void set_u(const MultiIndexPair& p, std::size_t ip, long k, double value) {
    if (!std::isfinite(value))
      throw Error(ErrorKind::Numeric,
                  fmt::format("non-finite u coefficient at {}", describe(p)));
    t_.u_[ip] = value;
    products_[0][ip] = value;
    products_[1][ip] = model_.multiplier(t_.mu_, Factor::HLike, k) * value;
    products_[2][ip] = model_.multiplier(t_.mu_, Factor::DLike, k) * value;
  }

  void check_symmetry() const {
    for (const auto& p : t_.pairs()) {
      const auto q = p.swapped();
      if (!t_.contains(q)) continue;
      const double a = t_.u_[t_.index(p)], b = t_.u_[t_.index(q)];
      const double c = t_.n_[t_.index(p)], d = t_.n_[t_.index(q)];
      const double tol = 1e-11;
      if (std::fabs(a - b) > tol * std::max({1.0, std::fabs(a), std::fabs(b)}) ||
          std::fabs(c - d) > tol * std::max({1.0, std::fabs(c), std::fabs(d)}))
        throw Error(ErrorKind::Numeric,
                    fmt::format("index symmetry broken at {}", describe(p)));
    }
  }

  const Model& model_;
  CoefficientTable t_;
  std::size_t size_ = 0;
  std::vector<NonlinearTerm> terms_;
  std::vector<Key> keys_;
  std::vector<ProductPlan> plans_;
  std::vector<TermPlan> term_plans_;
  std::vector<std::vector<double>> products_;
  std::array<const double*, 3> base_{};
};

CoefficientTable build_table(const Model& model, const KernelSpec& ks,
                             const ParameterVector& mu, int order) {
  if (order < 1) throw Error(ErrorKind::InvalidArgument, "table order must be >= 1");
  return TableBuilder(model, ks, mu, {{order, order}, {order, order}}, order).build();
}

CoefficientTable build_table_box(const Model& model, const KernelSpec& ks,
                                 const ParameterVector& mu, const MultiIndexPair& upper) {
  for (int i = 0; i < 2; ++i)
    if (upper.alpha[i] < 0 || upper.gamma[i] < 0)
      throw Error(ErrorKind::InvalidArgument, "box bounds must be nonnegative");
  return TableBuilder(model, ks, mu, upper, upper.order()).build();
}

Resonance resonance_coefficient(const Model& model, const KernelSpec& ks,
                                const ParameterVector& mu) {
  const auto target = resonance_index(ks.k1, ks.k2);
  // One extra unit in alpha_1 and gamma_2 gives same-order neighbours for
  // the zero threshold without changing the target entry.
  const MultiIndexPair upper{{1, ks.k1}, {ks.k2 - 1, 1}};
  auto table = TableBuilder(model, ks, mu, upper, target.order()).build();

  Resonance res;
  res.value = table.n(target);
  res.order = target.order();
  for (const auto& p : table.pairs_of_order(res.order))
    if (!(p == target)) res.order_scale = std::max(res.order_scale, std::fabs(table.n(p)));
  res.small_divisor = table.small_divisor();
  res.warnings = table.warnings();
  return res;
}

ScaledConstant scaled_constant_C(int k1, int k2, std::span<const double> T_samples) {
  if (T_samples.size() < 2)
    throw Error(ErrorKind::InvalidArgument, "scaled constant needs at least two T samples");
  const Model model(ModelKind::WhithamInfinite);
  const double exponent = (k1 + k2 - 3) / 4.0;
  ScaledConstant out;
  double sum = 0.0;
  for (double T : T_samples) {
    if (!(T > 0.0)) throw Error(ErrorKind::Domain, "T samples must be positive");
    const auto ks = solve_kernel_params(model, k1, k2, {{"T", T}});
    const double n = resonance_coefficient(model, ks, ks.mu0).value;
    out.samples.push_back(n * std::pow(T, exponent));
    sum += out.samples.back();
  }
  out.C = sum / static_cast<double>(out.samples.size());
  const auto [lo, hi] = std::minmax_element(out.samples.begin(), out.samples.end());
  out.spread = (*hi - *lo) / std::fabs(out.C);
  if (!(out.spread <= 1e-6))
    throw Error(ErrorKind::Numeric,
                fmt::format("scaling law violated for ({}, {}): relative spread {:.3e}",
                            k1, k2, out.spread));
  return out;
}

std::array<std::string, 3> default_transversality_params(const Model& model) {
  switch (model.kind()) {
    case ModelKind::WhithamInfinite:
    case ModelKind::WhithamFinite: return {"c", "kappa", "T"};
    case ModelKind::BabenkoFinite: return {"c", "T", "d"};
    case ModelKind::BabenkoInfinite: break;
  }
  return {};
}

TransversalityData transversality_jacobian(const Model& model, const KernelSpec& ks,
                                           std::span<const std::string> param_triple) {
  TransversalityData data;
  if (model.parameter_names().size() < 3) {
    data.degenerate = true;
    return data;
  }
  if (param_triple.empty()) {
    data.params = default_transversality_params(model);
  } else {
    if (param_triple.size() != 3)
      throw Error(ErrorKind::InvalidArgument, "transversality needs exactly three parameters");
    std::copy(param_triple.begin(), param_triple.end(), data.params.begin());
  }

  const auto& mu0 = ks.mu0;
  const auto nres = [&](const ParameterVector& mu) {
    return resonance_coefficient(model, ks, mu).value;
  };
  // central difference at step h for f along parameter i
  const auto central = [&](auto&& f, std::size_t i, double h) {
    return (f(mu0.with(i, mu0[i] + h)) - f(mu0.with(i, mu0[i] - h))) / (2.0 * h);
  };

  std::array<std::array<double, 3>, 3> half{};
  for (std::size_t col = 0; col < 3; ++col) {
    const std::size_t i = mu0.index_of(data.params[col]);
    const double h = 1e-5 * std::fabs(mu0[i]);
    data.steps[col] = h;
    const long kk[2] = {ks.k1, ks.k2};
    for (int row = 0; row < 2; ++row) {
      if (auto exact = model.linear_symbol_derivative(mu0, kk[row], i)) {
        data.jacobian[row][col] = half[row][col] = *exact;
      } else {
        auto l = [&](const ParameterVector& mu) { return model.linear_symbol(mu, kk[row]); };
        const double dh = central(l, i, h), dh2 = central(l, i, 0.5 * h);
        half[row][col] = dh2;
        data.jacobian[row][col] = (4.0 * dh2 - dh) / 3.0;
      }
    }
    const double dh = central(nres, i, h), dh2 = central(nres, i, 0.5 * h);
    half[2][col] = dh2;
    data.jacobian[2][col] = (4.0 * dh2 - dh) / 3.0;
  }

  const auto det3 = [](const std::array<std::array<double, 3>, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  data.determinant = det3(data.jacobian);
  data.determinant_error = std::fabs(data.determinant - det3(half));
  if (!std::isfinite(data.determinant))
    throw Error(ErrorKind::Numeric, "non-finite transversality determinant");
  return data;
}

std::map<long, std::complex<double>> evaluate_expansion(const CoefficientTable& table,
                                                        std::array<double, 2> r,
                                                        std::array<double, 2> theta) {
  const int k1 = table.kernel().k1, k2 = table.kernel().k2;
  std::map<long, std::complex<double>> modes;
  for (const auto& p : table.pairs()) {
    if (p.order() == 0) continue;
    const double coeff = table.u(p);
    if (coeff == 0.0) continue;
    const double amp = std::pow(r[0], p.alpha[0] + p.gamma[0]) *
                       std::pow(r[1], p.alpha[1] + p.gamma[1]);
    const double phase = (p.alpha[0] - p.gamma[0]) * k1 * theta[0] +
                         (p.alpha[1] - p.gamma[1]) * k2 * theta[1];
    modes[p.wavenumber(k1, k2)] += coeff * amp * std::polar(1.0, phase);
  }
  return modes;
}

}  // namespace asymwave
