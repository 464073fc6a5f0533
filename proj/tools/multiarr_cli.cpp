// multiarr: command-line front end over the header-only library.
//
// Documents travel on stdin/stdout so subcommands compose:
//   multiarr catalog five_lines | multiarr restrict --pivot x
//
// Exit codes: 0 computed, 1 verification failure, 2 input error, 3 budget exhausted.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "multiarr/io.hpp"
#include "multiarr/multiarr.hpp"

using namespace multiarr;
using io::json;

namespace {

enum Exit { kOk = 0, kFailed = 1, kInput = 2, kBudget = 3 };

struct Options {
  std::string input = "-";
  std::string format = "machine";
  unsigned jobs = 1;
  std::size_t budget = 100000;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Multiarrangement read_arrangement(const std::string& path) {
  return io::arrangement_from_json(io::parse_document(read_text(path)));
}

// Accepts a chain document or a search result that carries one.
Chain read_chain(const std::string& path) {
  const io::json doc = io::parse_document(read_text(path));
  if (doc.is_object() && doc.contains("chain") && doc["chain"].is_object()) return io::chain_from_json(doc["chain"]);
  if (doc.is_object() && doc.contains("status") && !doc.contains("steps"))
    throw InputError("search result carries no chain (status " + doc["status"].dump() + ")");
  return io::chain_from_json(doc);
}

/// A hyperplane given by label, by 0-based index, or by a JSON normal vector.
std::size_t resolve_pivot(const Multiarrangement& a, const std::string& spec) {
  if (auto i = a.find_label(spec)) return *i;
  if (!spec.empty() && spec.find_first_not_of("0123456789") == std::string::npos) {
    const std::size_t i = std::stoul(spec);
    if (i < a.size()) return i;
    throw InputError("pivot index " + spec + " out of range");
  }
  if (!spec.empty() && spec[0] == '[') {
    const json j = io::parse_document(spec);
    const Vector v = io::vector_from_json(j, a.context(), a.dimension(), "pivot");
    if (auto i = a.find(LinearForm::normalized(v))) return *i;
    throw InputError("pivot normal " + spec + " is not a hyperplane of the arrangement");
  }
  throw InputError("no hyperplane matches pivot \"" + spec + "\"");
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

/// --flat: comma-separated pivots whose intersection is X; --span: JSON list of vectors spanning U.
Flat resolve_flat(const Multiarrangement& a, const std::string& flat, const std::string& span) {
  if (!flat.empty() && !span.empty()) throw InputError("give either --flat or --span, not both");
  if (!span.empty()) {
    const json j = io::parse_document(span);
    if (!j.is_array()) throw InputError("--span must be a list of vectors");
    std::vector<Vector> vs;
    for (std::size_t i = 0; i < j.size(); ++i)
      vs.push_back(io::vector_from_json(j[i], a.context(), a.dimension(), "span/" + std::to_string(i)));
    return flat_from_vectors(a, vs);
  }
  std::vector<std::size_t> idx;
  for (const auto& p : split(flat)) idx.push_back(resolve_pivot(a, p));
  return flat_from_hyperplanes(a, idx);
}

std::vector<std::size_t> resolve_order(const Multiarrangement& a, const std::string& order) {
  if (order.empty()) return canonical_order(a);
  std::vector<std::size_t> out;
  for (const auto& p : split(order)) out.push_back(resolve_pivot(a, p));
  // hyperplanes not mentioned follow in canonical order
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::find(out.begin(), out.end(), i) == out.end()) out.push_back(i);
  return out;
}

std::string human_arrangement(const Multiarrangement& a) {
  std::ostringstream os;
  os << "dimension " << a.dimension() << " over " << a.context().name() << ", " << a.num_active()
     << " hyperplanes, |nu| = " << a.order() << "\n";
  for (std::size_t i = 0; i < a.size(); ++i)
    os << "  [" << i << "] " << a.label(i) << ": " << a[i].form.to_string() << "  nu = " << a[i].multiplicity << "\n";
  return os.str();
}

void emit(const Options& o, const json& doc, const std::string& human) {
  if (o.format == "human") {
    std::cout << human;
  } else {
    std::cout << io::dump(doc);
  }
}

int emit_search(const Options& o, const SearchVerdict& v) {
  json doc = {{"version", io::kVersion},
              {"status", to_string(v.status)},
              {"scope", v.scope},
              {"search_stats", io::stats_to_json(v.stats)}};
  std::string human = "status: " + to_string(v.status) + (v.scope.empty() ? "" : " (" + v.scope + ")") + "\n";
  if (v.exponents) {
    doc["exponents"] = io::exponents_to_json(*v.exponents);
    human += "exponents: " + exponents_to_string(*v.exponents) + "\n";
  }
  if (v.chain) {
    const bool ok = verify_chain(*v.chain, o.budget).ok;
    doc["chain"] = io::chain_to_json(*v.chain, ok, &v.stats);
    human += "chain of " + std::to_string(v.chain->steps.size()) + " steps, verified: " + (ok ? "yes" : "no") + "\n";
    for (const auto& s : v.chain->steps)
      human += "  " + to_string(s.op) + " " + s.hyperplane.to_string() + "  " + exponents_to_string(s.exponents_before) +
               " -> " + exponents_to_string(s.exponents_after) + "  restriction " +
               exponents_to_string(s.restriction_exponents) + "\n";
    if (!ok) {
      emit(o, doc, human);
      return kFailed;
    }
  }
  human += "nodes " + std::to_string(v.stats.nodes) + ", memo hits " + std::to_string(v.stats.memo_hits) +
           ", budget " + std::to_string(v.stats.budget) + "\n";
  emit(o, doc, human);
  return v.status == SearchStatus::budget_exhausted ? kBudget : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations with hyperplane multiarrangements"};
  app.require_subcommand(1);
  Options o;
  if (const char* env = std::getenv("MULTIARR_JOBS")) o.jobs = static_cast<unsigned>(std::max(1, std::atoi(env)));
  app.add_option("-i,--input", o.input, "input document (default: stdin)");
  app.add_option("--format", o.format, "output rendering")->check(CLI::IsMember({"human", "machine"}));
  app.add_option("--jobs", o.jobs, "worker threads for Euler multiplicities (default $MULTIARR_JOBS or 1)");
  app.add_option("--budget", o.budget, "search budget in node expansions");

  std::string pivot, flat, span, order, pool, second;
  unsigned cap = 3, m0 = 0;
  std::optional<unsigned> degree_cap;
  std::string cat_name, concentrate;
  std::vector<long> cat_params;

  auto* c_cat = app.add_subcommand("catalog", "emit a named arrangement");
  c_cat->add_option("name", cat_name, "entry: empty, boolean, braid, grrl, grl, akl, five_lines, g333_concentrated")->required();
  c_cat->add_option("params", cat_params, "integer parameters");
  c_cat->add_option("--concentrate", concentrate, "hyperplane carrying a concentrated multiplicity");
  c_cat->add_option("--m0", m0, "concentrated multiplicity (> 1)");

  auto* c_lat = app.add_subcommand("lattice", "intersection lattice");
  auto* c_q = app.add_subcommand("q", "defining polynomial Q(A, nu)");
  auto* c_loc = app.add_subcommand("localize", "localization at a flat or subspace");
  c_loc->add_option("--flat", flat, "comma-separated hyperplanes whose intersection is X");
  c_loc->add_option("--span", span, "JSON list of vectors spanning U");
  auto* c_res = app.add_subcommand("restrict", "restriction with Euler multiplicities");
  c_res->add_option("--pivot", pivot, "hyperplane (label, index or normal)")->required();
  auto* c_tri = app.add_subcommand("triple", "deletion and restriction at a hyperplane");
  c_tri->add_option("--pivot", pivot, "hyperplane (label, index or normal)")->required();
  auto* c_zie = app.add_subcommand("ziegler", "Ziegler multiplicity on the restriction of a simple arrangement");
  c_zie->add_option("--pivot", pivot, "hyperplane (label, index or normal)")->required();
  auto* c_it = app.add_subcommand("iterate", "restriction to a flat along a total order");
  c_it->add_option("--flat", flat, "comma-separated hyperplanes whose intersection is Y")->required();
  c_it->add_option("--order", order, "comma-separated hyperplanes, earliest first");
  auto* c_exp = app.add_subcommand("exponents", "freeness certificate from the derivation module");
  c_exp->add_option("--cap", degree_cap, "degree cap (default |nu|)");
  auto* c_ind = app.add_subcommand("ind-search", "search for an inductive chain");
  auto* c_rec = app.add_subcommand("rec-search", "search for a recursive chain");
  c_rec->add_option("--pool", pool, "arrangement document whose hyperplanes form the pool");
  c_rec->add_option("--cap", cap, "multiplicity cap");
  auto* c_ver = app.add_subcommand("verify-chain", "verify a chain document");
  auto* c_desc = app.add_subcommand("descend", "localize a chain at a flat");
  c_desc->add_option("--flat", flat, "comma-separated hyperplanes whose intersection is X");
  c_desc->add_option("--span", span, "JSON list of vectors spanning U");
  auto* c_her = app.add_subcommand("hered", "inductive freeness of every iterated restriction");
  c_her->add_option("--order", order, "comma-separated hyperplanes, earliest first");
  auto* c_prod = app.add_subcommand("product", "product with a second arrangement");
  c_prod->add_option("second", second, "second arrangement document")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }
  euler_jobs() = std::max(1u, o.jobs);

  try {
    if (c_cat->parsed()) {
      Multiarrangement a = catalog::build(cat_name, cat_params);
      if (!concentrate.empty()) a = catalog::with_concentrated(a, resolve_pivot(a, concentrate), m0);
      emit(o, io::arrangement_to_json(a), human_arrangement(a));
      return kOk;
    }
    if (c_ver->parsed()) {
      const Chain chain = read_chain(o.input);
      ChainCheck check;
      try {
        check = verify_chain(chain, o.budget);
      } catch (const ChainError& e) {
        check.ok = false;
        check.message = e.what();
      }
      json doc = {{"verified", check.ok}, {"message", check.message}};
      if (check.failing_step) doc["failing_step"] = *check.failing_step;
      emit(o, doc,
           std::string(check.ok ? "chain verified\n" : "chain failed") +
               (check.ok ? "" : (check.failing_step ? " at step " + std::to_string(*check.failing_step) : "") + ": " +
                                    check.message + "\n"));
      return check.ok ? kOk : kFailed;
    }
    if (c_desc->parsed()) {
      const Chain chain = read_chain(o.input);
      const Flat x = resolve_flat(chain.target, flat, span);
      const Chain d = descend_chain(chain, x);
      const bool ok = verify_chain(d, o.budget).ok;
      emit(o, io::chain_to_json(d, ok),
           "descended chain of " + std::to_string(d.steps.size()) + " steps, verified: " + (ok ? "yes" : "no") + "\n");
      return ok ? kOk : kFailed;
    }

    const Multiarrangement a = read_arrangement(o.input);

    if (c_lat->parsed()) {
      const Lattice l = intersection_lattice(a);
      std::string human;
      for (const auto& f : l.flats) {
        human += "rank " + std::to_string(f.rank) + ": {";
        for (std::size_t k = 0; k < f.containing.size(); ++k) human += (k ? ", " : "") + a.label(f.containing[k]);
        human += "}\n";
      }
      emit(o, io::lattice_to_json(a, l), human);
    } else if (c_q->parsed()) {
      const Polynomial q = defining_polynomial(a);
      emit(o, {{"q", q.to_string()}, {"factored", a.to_string()}, {"degree", a.order()}}, q.to_string() + "\n");
    } else if (c_loc->parsed()) {
      const Multiarrangement l = localize(a, resolve_flat(a, flat, span));
      emit(o, io::arrangement_to_json(l), human_arrangement(l));
    } else if (c_res->parsed()) {
      const auto r = restriction_with_euler(a, resolve_pivot(a, pivot)).arrangement;
      emit(o, io::restriction_to_json(r), human_arrangement(r));
    } else if (c_tri->parsed()) {
      const Triple t = triple(a, resolve_pivot(a, pivot));
      json doc = {{"version", io::kVersion},
                  {"pivot", io::form_to_json(t.pivot_form)},
                  {"original", io::arrangement_to_json(t.original)},
                  {"deleted", io::arrangement_to_json(t.deleted)},
                  {"restricted", io::restriction_to_json(t.restricted)}};
      emit(o, doc,
           "deletion:\n" + human_arrangement(t.deleted) + "restriction:\n" + human_arrangement(t.restricted));
    } else if (c_zie->parsed()) {
      const auto z = ziegler_multiplicity(a, resolve_pivot(a, pivot));
      emit(o, io::arrangement_to_json(z), human_arrangement(z));
    } else if (c_it->parsed()) {
      const Flat y = resolve_flat(a, flat, "");
      const auto it = iterated_restriction(a, y, resolve_order(a, order));
      json doc = io::restriction_to_json(it.arrangement);
      json piv = json::array();
      for (auto p : it.pivots) piv.push_back(a.label(p));
      doc["pivots"] = piv;
      emit(o, doc, human_arrangement(it.arrangement));
    } else if (c_exp->parsed()) {
      const auto cert = exponents_oracle(a, degree_cap);
      std::string human = "verdict: " + to_string(cert.verdict) + "\n";
      if (cert.is_free()) human += "exponents: " + exponents_to_string(cert.exponents) + "\n";
      if (!cert.witness.empty()) human += "witness: " + cert.witness + "\n";
      for (const auto& d : cert.basis) human += "  pdeg " + std::to_string(d.pdeg()) + ": " + d.to_string() + "\n";
      emit(o, io::certificate_to_json(cert), human);
      return cert.verdict == Verdict::undetermined ? kBudget : kOk;
    } else if (c_ind->parsed()) {
      return emit_search(o, inductive_search(a, o.budget));
    } else if (c_rec->parsed()) {
      std::vector<LinearForm> forms;
      if (!pool.empty())
        for (const auto& h : read_arrangement(pool).hyperplanes()) forms.push_back(h.form.embed(a.context()));
      return emit_search(o, recursive_search(a, cap, o.budget, forms));
    } else if (c_her->parsed()) {
      const auto rep = hereditary_inductive_check(a, resolve_order(a, order), o.budget);
      json entries = json::array();
      std::string human;
      for (const auto& e : rep.entries) {
        json labels = json::array();
        for (auto i : e.flat.containing) labels.push_back(a.label(i));
        entries.push_back({{"rank", e.flat.rank},
                           {"labels", labels},
                           {"restriction", io::arrangement_to_json(e.restriction)},
                           {"status", to_string(e.status)}});
        human += "rank " + std::to_string(e.flat.rank) + " " + e.restriction.to_string() + ": " + to_string(e.status) + "\n";
      }
      emit(o,
           {{"version", io::kVersion},
            {"flats", entries},
            {"hereditarily_inductively_free", rep.hereditarily_inductively_free},
            {"conclusive", rep.conclusive}},
           human + "hereditarily inductively free: " + (rep.hereditarily_inductively_free ? "yes" : "no") + "\n");
      return rep.conclusive ? kOk : kBudget;
    } else if (c_prod->parsed()) {
      const Multiarrangement p = product(a, read_arrangement(second));
      emit(o, io::arrangement_to_json(p), human_arrangement(p));
    }
    return kOk;
  } catch (const io::DocumentError& e) {
    std::cerr << "input error " << e.what() << "\n";
    return kInput;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const ArrangementError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const ChainError& e) {
    std::cerr << "chain error: " << e.what() << "\n";
    return kFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
}
