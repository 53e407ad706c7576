#include "ergo/zoo.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace ergo {

namespace {

using json = nlohmann::json;

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

class BirthDeathGamma final : public SingleBirthSpec {
 public:
  explicit BirthDeathGamma(double g) : g_(g) {}
  double up(StateIndex n) const override { return n == 0 ? 1.0 : std::pow(double(n), g_); }
  Row below(StateIndex n) const override {
    if (n == 0) return {};
    return {{n - 1, std::pow(double(n), g_)}};
  }
  std::string id() const override { return "birth_death_gamma(gamma=" + fmt(g_) + ")"; }

 private:
  double g_;
};

class Catastrophe final : public SingleBirthSpec {
 public:
  explicit Catastrophe(CatastropheParams p) : p_(std::move(p)) {}
  double up(StateIndex n) const override { return double(n + 1); }
  Row below(StateIndex n) const override {
    if (n == 0) return {};
    const double a = catastrophe_alpha(p_, n);
    if (a == 0.0) return {};
    return {{0, a}};
  }
  std::string id() const override {
    std::string s = std::string("catastrophe(") + to_string(p_.family);
    if (p_.family == CatastropheFamily::constant) s += ",c=" + fmt(p_.c);
    else if (p_.family != CatastropheFamily::alternating && p_.family != CatastropheFamily::custom)
      s += ",gamma=" + fmt(p_.gamma);
    return s + ")";
  }

 private:
  CatastropheParams p_;
};

double extend(const std::vector<double>& v, std::size_t i) {
  if (v.empty()) return 0.0;
  return i < v.size() ? v[i] : v.back();
}

class CustomSingleBirth final : public SingleBirthSpec {
 public:
  explicit CustomSingleBirth(CustomSingleBirthParams p) : p_(std::move(p)) {}
  double up(StateIndex n) const override { return extend(p_.up, n); }
  Row below(StateIndex n) const override {
    Row r;
    if (n == 0) return r;
    const double z = extend(p_.down_to_zero, n);
    const double o = extend(p_.down_one, n);
    if (n == 1) {
      if (z + o > 0.0) r.push_back({0, z + o});
      return r;
    }
    if (z > 0.0) r.push_back({0, z});
    if (o > 0.0) r.push_back({n - 1, o});
    return r;
  }
  std::string id() const override { return "single_birth_custom"; }

 private:
  CustomSingleBirthParams p_;
};

std::vector<std::vector<double>> uniform_kernel(std::size_t sites) {
  std::vector<std::vector<double>> p(sites, std::vector<double>(sites, 0.0));
  if (sites < 2) return p;
  for (std::size_t u = 0; u < sites; ++u)
    for (std::size_t v = 0; v < sites; ++v)
      if (u != v) p[u][v] = 1.0 / double(sites - 1);
  return p;
}

void check_kernel(const std::vector<std::vector<double>>& p, std::size_t sites) {
  if (p.size() != sites) throw ModelError("site kernel has the wrong size");
  for (const auto& row : p) {
    if (row.size() != sites) throw ModelError("site kernel has the wrong size");
    double s = 0.0;
    for (double v : row) {
      if (!(v >= 0.0)) throw ModelError("site kernel has a negative entry");
      s += v;
    }
    if (sites > 1 && std::abs(s - 1.0) > 1e-12) throw ModelError("site kernel rows must sum to 1");
  }
}

class BrusselModel final : public LatticeModel {
 public:
  explicit BrusselModel(BrusselParams p) : LatticeModel(2 * p.sites), p_(std::move(p)) {}

  Row row(StateIndex i) const override {
    const LatticePoint x = codec_.unrank(i);
    Row r;
    auto push = [&](LatticePoint y, double rate) {
      if (rate > 0.0) r.push_back({codec_.rank(y), rate});
    };
    const std::size_t S = p_.sites;
    for (std::size_t u = 0; u < S; ++u) {
      const std::size_t c1 = 2 * u, c2 = 2 * u + 1;
      const double x1 = x[c1], x2 = x[c2];
      {
        LatticePoint y = x;
        ++y[c1];
        push(y, p_.lambda1 * p_.a[u]);
      }
      if (x1 > 0) {
        LatticePoint y = x;
        --y[c1];
        ++y[c2];
        push(y, p_.lambda2 * p_.b[u] * x1);
        LatticePoint z = x;
        --z[c1];
        push(z, p_.lambda4 * x1);
      }
      if (x2 > 0 && x1 >= 2) {
        LatticePoint y = x;
        ++y[c1];
        --y[c2];
        push(y, p_.lambda3 * (x1 * (x1 - 1) / 2) * x2);
      }
      for (std::size_t v = 0; v < S; ++v) {
        if (v == u) continue;
        for (int k = 0; k < 2; ++k) {
          const std::size_t cu = 2 * u + k, cv = 2 * v + k;
          const double pk = (k == 0 ? p_.p1 : p_.p2)[u][v];
          if (x[cu] > 0 && pk > 0.0) {
            LatticePoint y = x;
            --y[cu];
            ++y[cv];
            push(y, x[cu] * pk);
          }
        }
      }
    }
    return r;
  }

  std::string id() const override { return "brussel(sites=" + std::to_string(p_.sites) + ")"; }

  std::string label(StateIndex i) const override {
    const LatticePoint x = codec_.unrank(i);
    std::string s = "(";
    for (std::size_t u = 0; u < p_.sites; ++u) {
      if (u) s += ",";
      s += "(" + std::to_string(x[2 * u]) + "," + std::to_string(x[2 * u + 1]) + ")";
    }
    return s + ")";
  }

 private:
  BrusselParams p_;
};

class MultiGammaModel final : public LatticeModel {
 public:
  explicit MultiGammaModel(MultiGammaParams p) : LatticeModel(p.sites), p_(std::move(p)) {}

  Row row(StateIndex i) const override {
    const LatticePoint x = codec_.unrank(i);
    Row r;
    auto push = [&](LatticePoint y, double rate) {
      if (rate > 0.0) r.push_back({codec_.rank(y), rate});
    };
    const std::size_t S = p_.sites;
    const bool origin = i == 0;
    for (std::size_t u = 0; u < S; ++u) {
      if (origin) {
        LatticePoint y = x;
        ++y[u];
        push(y, 1.0);
        continue;
      }
      if (x[u] == 0) continue;
      const double w = std::pow(double(x[u]), p_.gamma);
      LatticePoint up = x, down = x;
      ++up[u];
      --down[u];
      push(up, w);
      push(down, w);
      for (std::size_t v = 0; v < S; ++v) {
        if (v == u || p_.p[u][v] == 0.0) continue;
        LatticePoint y = x;
        --y[u];
        ++y[v];
        push(y, x[u] * p_.p[u][v]);
      }
    }
    return r;
  }

  std::string id() const override {
    return "multi_gamma(sites=" + std::to_string(p_.sites) + ",gamma=" + fmt(p_.gamma) + ")";
  }
  std::string label(StateIndex i) const override { return LatticeCodec::format(codec_.unrank(i)); }

 private:
  MultiGammaParams p_;
};

}  // namespace

ZooModel birth_death_gamma(double gamma) {
  if (!std::isfinite(gamma)) throw ModelError("gamma must be finite");
  auto sb = std::make_shared<BirthDeathGamma>(gamma);
  ZooModel m;
  m.name = "birth_death_gamma";
  m.params = json{{"gamma", gamma}}.dump();
  m.spec = sb;
  m.single_birth = sb;
  m.asserted.recurrent = true;
  m.asserted.ergodic = gamma > 1.0;
  m.asserted.strong = gamma > 2.0;
  if (gamma > 2.0) m.asserted.exponential = true;
  m.asserted.label = gamma > 2.0 ? "strongly ergodic" : gamma > 1.0 ? "ergodic, not strongly ergodic"
                                                                     : "null recurrent";
  return m;
}

CatastropheFamily parse_catastrophe_family(const std::string& s) {
  if (s == "power") return CatastropheFamily::power;
  if (s == "log_power") return CatastropheFamily::log_power;
  if (s == "loglog_power") return CatastropheFamily::loglog_power;
  if (s == "alternating") return CatastropheFamily::alternating;
  if (s == "constant") return CatastropheFamily::constant;
  if (s == "custom") return CatastropheFamily::custom;
  throw ModelError("unknown catastrophe family '" + s + "'");
}

const char* to_string(CatastropheFamily f) {
  switch (f) {
    case CatastropheFamily::power: return "power";
    case CatastropheFamily::log_power: return "log_power";
    case CatastropheFamily::loglog_power: return "loglog_power";
    case CatastropheFamily::alternating: return "alternating";
    case CatastropheFamily::constant: return "constant";
    case CatastropheFamily::custom: return "custom";
  }
  return "?";
}

double catastrophe_alpha(const CatastropheParams& p, std::size_t i) {
  const double x = static_cast<double>(i);
  switch (p.family) {
    case CatastropheFamily::power: return std::pow(x, -p.gamma);
    case CatastropheFamily::log_power: return std::pow(std::log(std::max(x, 3.0)), -p.gamma);
    case CatastropheFamily::loglog_power: return std::pow(std::log(std::log(std::max(x, 16.0))), -p.gamma);
    case CatastropheFamily::alternating: return i % 2 ? 1.0 / x : 1.0;
    case CatastropheFamily::constant: return p.c;
    case CatastropheFamily::custom: return extend(p.custom, i - 1);
  }
  return 0.0;
}

ZooModel catastrophe(const CatastropheParams& p) {
  if (p.family == CatastropheFamily::constant && !(p.c > 0.0))
    throw ModelError("constant catastrophe rate must be positive");
  if (p.family == CatastropheFamily::custom) {
    if (p.custom.empty() || !(p.custom.back() > 0.0))
      throw ModelError("custom alpha must be nonempty with a positive last entry");
    for (double a : p.custom)
      if (!(a >= 0.0)) throw ModelError("custom alpha must be nonnegative");
  }
  if (!std::isfinite(p.gamma)) throw ModelError("gamma must be finite");
  auto sb = std::make_shared<Catastrophe>(p);
  ZooModel m;
  m.name = "catastrophe";
  json j{{"family", to_string(p.family)}};
  auto& a = m.asserted;
  switch (p.family) {
    case CatastropheFamily::power:
      j["gamma"] = p.gamma;
      if (p.gamma > 0) {
        a.recurrent = false;
        a.label = "transient";
      }
      break;
    case CatastropheFamily::log_power:
      j["gamma"] = p.gamma;
      if (p.gamma > 1) {
        a.recurrent = false;
        a.label = "transient";
      } else if (p.gamma == 1) {
        a.recurrent = true;
        a.ergodic = false;
        a.label = "null recurrent";
      } else if (p.gamma > 0) {
        a.recurrent = a.ergodic = true;
        a.exponential = a.strong = false;
        a.label = "ergodic, not exponentially ergodic";
      }
      break;
    case CatastropheFamily::loglog_power:
      j["gamma"] = p.gamma;
      if (p.gamma > 0) {
        a.recurrent = a.ergodic = true;
        a.exponential = a.strong = false;
        a.label = "ergodic, not exponentially ergodic";
      }
      break;
    case CatastropheFamily::alternating:
    case CatastropheFamily::constant:
      if (p.family == CatastropheFamily::constant) j["c"] = p.c;
      a.recurrent = a.ergodic = a.exponential = a.strong = true;
      a.label = "strongly ergodic";
      break;
    case CatastropheFamily::custom:
      j["alpha"] = p.custom;
      break;
  }
  m.params = j.dump();
  m.spec = sb;
  m.single_birth = sb;
  return m;
}

ZooModel single_birth_custom(const CustomSingleBirthParams& p) {
  if (p.up.empty()) throw ModelError("custom single birth needs up rates");
  for (double u : p.up)
    if (!(u > 0.0) || !std::isfinite(u)) throw ModelError("up rates must be positive");
  for (const auto* v : {&p.down_one, &p.down_to_zero})
    for (double r : *v)
      if (!(r >= 0.0) || !std::isfinite(r)) throw ModelError("down rates must be nonnegative");
  if (extend(p.down_one, 1u << 30) + extend(p.down_to_zero, 1u << 30) <= 0.0)
    throw ModelError("tail rows need a downward rate for irreducibility");
  auto sb = std::make_shared<CustomSingleBirth>(p);
  ZooModel m;
  m.name = "single_birth_custom";
  m.params = json{{"up", p.up}, {"down_one", p.down_one}, {"down_to_zero", p.down_to_zero}}.dump();
  m.spec = sb;
  m.single_birth = sb;
  return m;
}

ZooModel brussel(const BrusselParams& in) {
  BrusselParams p = in;
  if (p.sites == 0) throw ModelError("Brussel model needs at least one site");
  for (double l : {p.lambda1, p.lambda2, p.lambda3, p.lambda4})
    if (!(l > 0.0)) throw ModelError("Brussel rates must be positive");
  if (p.a.empty()) p.a.assign(p.sites, 1.0);
  if (p.b.empty()) p.b.assign(p.sites, 1.0);
  if (p.a.size() != p.sites || p.b.size() != p.sites) throw ModelError("a and b need one entry per site");
  for (std::size_t u = 0; u < p.sites; ++u)
    if (!(p.a[u] > 0.0) || !(p.b[u] > 0.0)) throw ModelError("a and b must be positive");
  if (p.p1.empty()) p.p1 = uniform_kernel(p.sites);
  if (p.p2.empty()) p.p2 = uniform_kernel(p.sites);
  check_kernel(p.p1, p.sites);
  check_kernel(p.p2, p.sites);
  ZooModel m;
  m.name = "brussel";
  m.params = json{{"sites", p.sites}, {"lambda", {p.lambda1, p.lambda2, p.lambda3, p.lambda4}},
                  {"a", p.a}, {"b", p.b}}.dump();
  m.spec = std::make_shared<BrusselModel>(p);
  m.asserted.recurrent = m.asserted.ergodic = m.asserted.exponential = true;
  m.asserted.strong = false;
  m.asserted.label = "exponentially ergodic, not strongly ergodic";
  return m;
}

ZooModel multi_gamma(const MultiGammaParams& in) {
  MultiGammaParams p = in;
  if (p.sites == 0) throw ModelError("multi-gamma model needs at least one site");
  if (!(p.gamma > 0.0) || !std::isfinite(p.gamma)) throw ModelError("gamma must be positive");
  if (p.p.empty()) p.p = uniform_kernel(p.sites);
  check_kernel(p.p, p.sites);
  ZooModel m;
  m.name = "multi_gamma";
  m.params = json{{"sites", p.sites}, {"gamma", p.gamma}}.dump();
  m.spec = std::make_shared<MultiGammaModel>(p);
  if (p.gamma <= 2.0) m.asserted.strong = false;
  if (p.gamma <= 1.0) m.asserted.ergodic = false;
  m.asserted.label = p.gamma <= 1.0 ? "not ergodic" : p.gamma <= 2.0 ? "not strongly ergodic" : "";
  return m;
}

std::vector<ZooModel> zoo_catalog() {
  std::vector<ZooModel> z;
  for (double g : {0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) z.push_back(birth_death_gamma(g));
  auto cat = [&](CatastropheFamily f, double g) {
    CatastropheParams p;
    p.family = f;
    p.gamma = g;
    z.push_back(catastrophe(p));
  };
  cat(CatastropheFamily::power, 1.0);
  cat(CatastropheFamily::log_power, 2.0);
  cat(CatastropheFamily::log_power, 1.0);
  cat(CatastropheFamily::log_power, 0.5);
  cat(CatastropheFamily::loglog_power, 1.0);
  cat(CatastropheFamily::alternating, 1.0);
  cat(CatastropheFamily::constant, 1.0);
  z.push_back(brussel(BrusselParams{}));
  for (double g : {1.0, 2.0}) {
    MultiGammaParams p;
    p.gamma = g;
    z.push_back(multi_gamma(p));
  }
  return z;
}

}  // namespace ergo
