#include "confluence/ars_oracle.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace confluence::ars {

Relation::Relation(int size) : n_(size) {
  if (size < 0 || size > kMaxCarrier)
    throw std::invalid_argument("carrier size must be between 0 and " +
                                std::to_string(kMaxCarrier));
}

Relation Relation::identity(int size) {
  Relation r(size);
  for (int i = 0; i < size; ++i) r.add(i, i);
  return r;
}

Relation Relation::operator|(const Relation &o) const {
  Relation r(n_);
  for (int i = 0; i < n_; ++i) r.rows_[i] = rows_[i] | o.rows_[i];
  return r;
}

Relation Relation::then(const Relation &o) const {
  Relation r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (has(i, j)) r.rows_[i] |= o.rows_[j];
  return r;
}

Relation Relation::inverse() const {
  Relation r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (has(i, j)) r.add(j, i);
  return r;
}

Relation Relation::reflexive() const { return *this | identity(n_); }

Relation Relation::transitive() const {
  Relation r = *this;
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i)
      if (r.has(i, k)) r.rows_[i] |= r.rows_[k];
  return r;
}

Relation Relation::star() const { return transitive().reflexive(); }

Relation Relation::equivalence() const { return (*this | inverse()).star(); }

bool Relation::subset_of(const Relation &o) const {
  for (int i = 0; i < n_; ++i)
    if (rows_[i] & ~o.rows_[i]) return false;
  return true;
}

bool Relation::symmetric() const { return *this == inverse(); }

bool Relation::well_founded() const {
  Relation t = transitive();
  for (int i = 0; i < n_; ++i)
    if (t.has(i, i)) return false;
  return true;
}

bool Relation::empty() const { return edges() == 0; }

int Relation::edges() const {
  int e = 0;
  for (int i = 0; i < n_; ++i) e += __builtin_popcount(rows_[i]);
  return e;
}

bool FiniteArs::valid() const {
  return arrow.size() == size && sym.size() == size && leads.size() == size &&
         sym.symmetric() && leads.subset_of(sym);
}

bool is_crm(const FiniteArs &a) {
  Relation conv = (a.arrow | a.sym).equivalence();
  Relation equiv = a.sym.equivalence();
  Relation joins = a.arrow.star().then(equiv).then(a.arrow.inverse().star());
  return conv.subset_of(joins);
}

const std::vector<Criterion> &all_criteria() {
  static const std::vector<Criterion> all = {
      Criterion::Mixed,      Criterion::WellFounded, Criterion::StepFirst,
      Criterion::FullModulo, Criterion::PlusModulo,  Criterion::StarModulo,
      Criterion::GlobalModulo};
  return all;
}

std::string criterion_name(Criterion c) {
  switch (c) {
  case Criterion::Mixed: return "mixed";
  case Criterion::WellFounded: return "well-founded";
  case Criterion::StepFirst: return "step-first";
  case Criterion::FullModulo: return "full-modulo";
  case Criterion::PlusModulo: return "plus-modulo";
  case Criterion::StarModulo: return "star-modulo";
  case Criterion::GlobalModulo: return "global-modulo";
  }
  return "?";
}

Criterion criterion_from_name(const std::string &name) {
  for (Criterion c : all_criteria())
    if (criterion_name(c) == name) return c;
  throw std::invalid_argument("unknown abstract criterion: " + name);
}

bool necessary_and_sufficient(Criterion c) {
  switch (c) {
  case Criterion::FullModulo:
  case Criterion::PlusModulo:
  case Criterion::StarModulo:
  case Criterion::GlobalModulo: return true;
  default: return false;
  }
}

CriterionResult check_abstract_criterion(const FiniteArs &a, Criterion c) {
  if (!a.valid()) throw std::invalid_argument("malformed finite ARS");
  const Relation &to = a.arrow;
  const Relation back = to.inverse();
  const Relation peak = back.then(to);      // <- o ->
  const Relation cliff = a.sym.then(to);    // |-| o ->
  const Relation sym_eq = a.sym.reflexive(); // |-|=
  const Relation sym_star = a.sym.star();    // |-|*

  // X* o |-|= o Y* with Y the inverse of X.
  auto valley = [&](const Relation &x, const Relation &mid) {
    return x.star().then(mid).then(x.inverse().star());
  };

  CriterionResult res;
  res.crm = is_crm(a);
  bool first = false, second = false;
  switch (c) {
  case Criterion::Mixed:
  case Criterion::StepFirst: {
    Relation leads_arrow = a.leads | to;
    res.well_founded = to.then(a.leads.star()).well_founded();
    Relation v = valley(leads_arrow, sym_eq);
    first = peak.subset_of(v);
    Relation lead_step = to.then(v);
    second = c == Criterion::Mixed
                 ? cliff.subset_of(sym_eq.then(leads_arrow.inverse().star()) | lead_step)
                 : cliff.subset_of(lead_step);
    break;
  }
  case Criterion::WellFounded:
    res.well_founded = to.well_founded();
    first = peak.subset_of(valley(to, sym_eq));
    second = cliff.subset_of(valley(to, sym_eq));
    break;
  case Criterion::FullModulo: {
    Relation both = to | a.sym;
    res.well_founded = to.then(sym_star).well_founded();
    Relation v = both.star().then(both.inverse().star());
    first = peak.subset_of(v);
    second = cliff.subset_of(to.then(v));
    break;
  }
  case Criterion::PlusModulo:
    res.well_founded = to.then(sym_star).well_founded();
    first = peak.subset_of(valley(to, sym_star));
    second = cliff.subset_of(to.transitive().then(sym_star).then(back.star()));
    break;
  case Criterion::StarModulo:
    res.well_founded = to.then(sym_star).well_founded();
    first = peak.subset_of(valley(to, sym_star));
    second = cliff.subset_of(valley(to, sym_star));
    break;
  case Criterion::GlobalModulo:
    res.well_founded = to.well_founded();
    first = peak.subset_of(valley(to, sym_star));
    second = sym_star.then(to).subset_of(valley(to, sym_star));
    break;
  }
  res.hypotheses = res.well_founded && first && second;
  return res;
}

FiniteArs random_ars(unsigned seed, int size, double density) {
  std::mt19937 rng(seed);
  std::bernoulli_distribution edge(density), half(0.5);
  FiniteArs a(size);
  // Half of the instances get an acyclic reduction so that the
  // well-foundedness conditions are met often.
  bool acyclic = half(rng);
  std::vector<int> order(static_cast<std::size_t>(size));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) {
      bool e = edge(rng);
      if (!e) continue;
      if (acyclic && order[static_cast<std::size_t>(i)] <= order[static_cast<std::size_t>(j)])
        continue;
      a.arrow.add(i, j);
    }
  for (int i = 0; i < size; ++i)
    for (int j = i; j < size; ++j)
      if (edge(rng)) {
        a.sym.add(i, j);
        a.sym.add(j, i);
      }
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j)
      if (a.sym.has(i, j) && half(rng)) a.leads.add(i, j);
  return a;
}

FuzzStats fuzz(const FuzzOptions &opt) {
  std::mt19937 rng(opt.seed);
  std::uniform_int_distribution<int> size(opt.min_size, opt.max_size);
  std::uniform_real_distribution<double> density(opt.min_density, opt.max_density);
  const auto &crits = all_criteria();
  FuzzStats st;
  st.hypotheses.assign(crits.size(), 0);
  st.unsound.assign(crits.size(), 0);
  st.not_needed.assign(crits.size(), 0);
  for (int k = 0; k < opt.instances; ++k) {
    int n = size(rng);
    double d = density(rng);
    FiniteArs a = random_ars(static_cast<unsigned>(rng()), n, d);
    ++st.instances;
    bool crm = is_crm(a);
    st.crm += crm;
    for (std::size_t i = 0; i < crits.size(); ++i) {
      auto r = check_abstract_criterion(a, crits[i]);
      st.hypotheses[i] += r.hypotheses;
      st.unsound[i] += r.hypotheses && !crm;
      st.not_needed[i] += necessary_and_sufficient(crits[i]) && r.well_founded && crm &&
                          !r.hypotheses;
    }
  }
  return st;
}

} // namespace confluence::ars
