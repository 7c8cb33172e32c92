#include "borcherds/classifier.hpp"

#include "borcherds/bounds.hpp"

#include "json.hpp"

#include <functional>
#include <sstream>

namespace borcherds {

using nlohmann::json;

std::vector<GoodIndex> good_indices(const LatticeSpec& spec, const EisensteinTable& table) {
  const Rational w = Rational(spec.n, 2) - 1;
  const Rational needed = search_cap(spec, 2 * w);
  if (table.cap < needed)
    throw CapInsufficient(spec.id + ": table cap " + to_string(table.cap) + " below required " + to_string(needed));
  DiscriminantGroup G(spec.gram);
  std::map<std::vector<std::int64_t>, std::size_t> group_of;
  for (std::size_t i = 0; i < table.groups.size(); ++i)
    for (const auto& g : table.groups[i].members) group_of[g.coords] = i;

  std::vector<GoodIndex> out;
  for (const auto& g : table.elements) {
    const auto neg = G.negate(g);
    const bool torsion = neg == g;
    if (!torsion && neg < g) continue;  // keep one member of each pair
    for (const auto& [n, a] : table.coefficients.at(g.coords)) {
      if (a >= 0) continue;
      const Rational unit = torsion ? Rational(-a / 2) : Rational(-a);
      if (unit > w) continue;
      out.push_back(GoodIndex{g, n, a, unit, torsion, group_of.at(g.coords)});
    }
  }
  return out;
}

std::vector<GoodClass> good_classes(const std::vector<GoodIndex>& indices) {
  std::map<std::pair<std::size_t, Rational>, std::size_t> where;
  std::vector<GoodClass> out;
  for (const auto& idx : indices) {
    auto key = std::make_pair(idx.group, idx.n);
    auto it = where.find(key);
    if (it == where.end()) {
      where.emplace(key, out.size());
      GoodClass c;
      c.group = idx.group;
      c.n = idx.n;
      c.a_E = idx.a_E;
      c.unit = idx.unit;
      c.two_torsion = idx.two_torsion;
      out.push_back(std::move(c));
      it = where.find(key);
    }
    out[it->second].members.push_back(idx);
  }
  return out;
}

Rational principal_part_weight(const PrincipalPart& part, const EisensteinTable& table, const DiscriminantGroup& G) {
  Rational total = 0;
  for (const auto& [key, mult] : part.coefficients) {
    const auto a = table.lookup(G.element(key.first), key.second);
    if (!a) throw std::logic_error("principal_part_weight: coefficient not tabulated");
    total += Rational(mult) * *a;
  }
  return -total / 2;
}

namespace {

BigInt binomial(const BigInt& n, const BigInt& k) {
  BigInt r = 1;
  for (BigInt i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

}  // namespace

ClassificationReport solve_singular_weight(const LatticeSpec& spec, CoefficientCache* cache) {
  ClassificationReport report;
  report.id = spec.id;
  report.genus_symbol = spec.genus_symbol;
  report.n = spec.n;
  report.weight = Rational(spec.n, 2) - 1;
  report.cap = search_cap(spec, 2 * report.weight);

  EisensteinSeries series(spec);
  if (cache) series.attach_cache(cache);
  const auto table = expansion_table(series, report.cap);
  report.group_count = table.groups.size();
  report.classes = good_classes(good_indices(spec, table));
  for (auto& c : report.classes) {
    c.group_size = table.groups[c.group].size();
    c.representative = table.groups[c.group].representative;
  }

  const auto& classes = report.classes;
  const Rational w = report.weight;
  std::vector<BigInt> counts(classes.size(), 0);
  std::function<void(std::size_t, const Rational&)> search = [&](std::size_t i, const Rational& remaining) {
    if (remaining == 0) {
      SolutionFamily family;
      family.principal_parts = 1;
      for (std::size_t c = 0; c < classes.size(); ++c) {
        if (counts[c] == 0) continue;
        family.multiplicities.emplace_back(c, counts[c]);
        const BigInt slots(classes[c].members.size());
        family.principal_parts *= binomial(slots + counts[c] - 1, counts[c]);
        const auto& rep = classes[c].members.front().gamma;
        family.representative.coefficients[{rep.coords, classes[c].n}] += counts[c];
        if (!classes[c].two_torsion)
          family.representative.coefficients[{series.group().negate(rep).coords, classes[c].n}] += counts[c];
      }
      family.achieved_weight = principal_part_weight(family.representative, table, series.group());
      if (family.achieved_weight != w)
        throw std::logic_error(spec.id + ": solution weight " + to_string(family.achieved_weight) + " != " +
                               to_string(w));
      report.solutions.push_back(std::move(family));
      return;
    }
    if (i == classes.size()) return;
    const Rational& u = classes[i].unit;
    for (BigInt x = 0; Rational(x) * u <= remaining; ++x) {
      counts[i] = x;
      search(i + 1, remaining - Rational(x) * u);
    }
    counts[i] = 0;
  };
  search(0, w);
  return report;
}

std::vector<ClassificationReport> classify_catalog(CoefficientCache* cache) {
  std::vector<ClassificationReport> out;
  for (const auto& spec : catalog()) out.push_back(solve_singular_weight(spec, cache));
  return out;
}

const std::set<std::string>& expected_admitting_ids() {
  static const std::set<std::string> ids = {
      "n3_2_7p1_4p2", "n3_2_7p3_4p2", "n3_2_7p1_4p4", "n3_2p4_4_7p1", "n3_8_7p1",
      "n4_3p5",       "n6_2m6",       "n10_2p2",      "n26_1p1",
  };
  return ids;
}

namespace {

json class_json(const GoodClass& c) {
  return {{"group_representative", c.representative.coords},
          {"group_size", c.group_size},
          {"order", c.representative.order},
          {"n", to_string(-c.n)},
          {"a_E", to_string(c.a_E)},
          {"unit_weight", to_string(c.unit)},
          {"two_torsion", c.two_torsion},
          {"indices", c.members.size()}};
}

}  // namespace

std::string report_to_json(const std::vector<ClassificationReport>& reports) {
  json out = json::array();
  for (const auto& r : reports) {
    json classes = json::array();
    for (const auto& c : r.classes) classes.push_back(class_json(c));
    json solutions = json::array();
    for (const auto& s : r.solutions) {
      json mult = json::array();
      for (const auto& [c, x] : s.multiplicities) mult.push_back({{"class", c}, {"multiplicity", x.str()}});
      json rep = json::array();
      for (const auto& [key, a] : s.representative.coefficients)
        rep.push_back({{"gamma", key.first}, {"n", to_string(-key.second)}, {"a_f", a.str()}});
      solutions.push_back({{"classes", mult},
                           {"principal_parts", s.principal_parts.str()},
                           {"representative", rep},
                           {"weight", to_string(s.achieved_weight)}});
    }
    out.push_back({{"id", r.id},
                   {"genus_symbol", r.genus_symbol},
                   {"n", r.n},
                   {"weight", to_string(r.weight)},
                   {"cap", to_string(r.cap)},
                   {"expansion_groups", r.group_count},
                   {"good_classes", classes},
                   {"solutions", solutions}});
  }
  return out.dump(2) + "\n";
}

std::string report_to_table(const std::vector<ClassificationReport>& reports) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %-18s %3s %6s %4s %6s %9s\n", "id", "genus", "n", "weight", "cap", "good",
                "families");
  out << line;
  for (const auto& r : reports) {
    std::snprintf(line, sizeof line, "%-16s %-18s %3d %6s %4s %6zu %9zu\n", r.id.c_str(), r.genus_symbol.c_str(), r.n,
                  to_string(r.weight).c_str(), to_string(r.cap).c_str(), r.classes.size(), r.solutions.size());
    out << line;
    for (const auto& s : r.solutions) {
      out << "    ";
      bool first = true;
      for (const auto& [c, x] : s.multiplicities) {
        const auto& cls = r.classes[c];
        out << (first ? "" : " + ") << x << " x [group of " << cls.group_size << " "
            << (cls.two_torsion ? "2-torsion" : "+-pairs") << ", q^" << to_string(-cls.n) << ", a_E "
            << to_string(cls.a_E) << "]";
        first = false;
      }
      out << "  (" << s.principal_parts << " principal parts, e.g. gamma = "
          << to_string(r.classes[s.multiplicities.front().first].members.front().gamma) << ")\n";
    }
  }
  return out.str();
}

}  // namespace borcherds
