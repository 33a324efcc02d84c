#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include "fglaw/io.hpp"

namespace fglaw::cli {
namespace {

namespace fs = std::filesystem;
using io::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Output {
  json value;
  std::string text;
  int code = kOk;
};

struct Options {
  std::string format = "json";
  std::uint64_t seed = 1;
  // law selection
  std::string law;
  std::string ring = "padic:3:6";
  int D = 6;
  std::size_t d = 0;
  std::vector<std::string> points;
  // groups
  std::string group;
  int level = 1;
  std::string elements;
  std::int64_t exponent = 1;
  int quotient_level = 0;
  bool list = false;
  // words and extensions
  std::string word;
  std::string args;
  std::string extension;
  std::vector<std::string> cosets;
  int validate_level = 0;
  std::size_t samples = 0;
  long lmax = 4;
  int grid_depth = 2;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, sep);) out.push_back(trim(part));
  return out;
}

bool looks_like_path(const std::string& ref) {
  return ref.find('/') != std::string::npos || ref.find('\\') != std::string::npos ||
         (ref.size() > 5 && ref.compare(ref.size() - 5, 5, ".json") == 0);
}

json load_file(const std::string& path) {
  if (!fs::is_regular_file(path)) throw UsageError("file not found: '" + path + "'");
  return io::load_json_file(path);
}

SpecPtr ring_option(const Options& o) {
  if (!o.ring.empty() && o.ring.front() == '{') {
    try {
      return make_spec(io::ring_from_json(json::parse(o.ring)));
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed ring JSON: ") + e.what(), e.byte);
    }
  }
  return make_spec(io::parse_ring_shorthand(o.ring));
}

/// A law file, or a built-in name combined with --ring, --D and --d.
io::RawLaw raw_law(const std::string& ref, const Options& o) {
  if (ref.empty()) throw UsageError("a law is required (file or built-in name)");
  if (fs::is_regular_file(ref) || looks_like_path(ref)) return io::raw_law_from_json(load_file(ref));
  const std::size_t d = o.d ? o.d : (ref == "heisenberg" ? 3 : 1);
  return io::raw_law_from_json(
      json{{"builtin", ref}, {"D", o.D}, {"d", d}, {"spec", io::to_json(*ring_option(o))}});
}

FormalGroupLaw load_law(const std::string& ref, const Options& o) {
  auto r = raw_law(ref, o);
  if (r.I) return FormalGroupLaw(std::move(r.F), std::move(*r.I));
  return FormalGroupLaw(std::move(r.F));
}

StandardGroup load_group(const Options& o) {
  if (!o.group.empty()) {
    const auto j = load_file(o.group);
    return io::group_from_json(j, fs::path(o.group).parent_path());
  }
  if (o.law.empty()) throw UsageError("give --group FILE or --law with --N");
  return StandardGroup(load_law(o.law, o), o.level);
}

TransversalData load_extension(const Options& o) {
  if (o.extension.empty()) throw UsageError("an extension file is required");
  return io::extension_from_json(load_file(o.extension), fs::path(o.extension).parent_path());
}

/// "a,b,c;d,e,f": elements separated by ';', coordinates by ','.
std::vector<GroupElement> parse_elements(const std::string& text, const StandardGroup& G) {
  std::vector<GroupElement> out;
  if (trim(text).empty()) return out;
  for (const auto& e : split(text, ';')) {
    CoeffTuple coords;
    for (const auto& c : split(e, ',')) coords.push_back(Coefficient::parse(G.spec_ptr(), c));
    out.push_back(G.element(std::move(coords)));
  }
  return out;
}

std::vector<GroupElement> need_elements(const Options& o, const StandardGroup& G, std::size_t n) {
  auto xs = parse_elements(o.elements, G);
  if (xs.size() != n)
    throw UsageError("expected " + std::to_string(n) + " element(s) in --elements, got " + std::to_string(xs.size()));
  return xs;
}

WordExpr need_word(const Options& o) {
  if (o.word.empty()) throw UsageError("--word is required");
  return parse_word(o.word);
}

std::string element_text(const GroupElement& g) { return g.to_string(); }

std::string bool_text(bool b) { return b ? "yes" : "no"; }

// ---------------------------------------------------------------------------
// fgl

Output fgl_check(const Options& o) {
  const auto r = raw_law(o.law, o);
  const auto report = verify_fgl(r.F);
  Output out{io::to_json(report), "", report.pass() ? kOk : kFailure};
  for (const auto& c : report.checks) {
    out.text += (c.pass ? "PASS " : "FAIL ") + c.name;
    if (c.witness) {
      std::string mono;
      for (auto e : c.witness->monomial) mono += (mono.empty() ? "" : ",") + std::to_string(e);
      out.text += "  component " + std::to_string(c.witness->component + 1) + " monomial [" + mono +
                  "] difference " + c.witness->difference.to_string();
    }
    out.text += "\n";
  }
  return out;
}

Output fgl_inverse(const Options& o) {
  const auto law = load_law(o.law, o);
  return {{{"d", law.d()}, {"D", law.D()}, {"I", io::to_json(law.I())}}, io::tuple_text(law.I()), kOk};
}

Output fgl_transport(const Options& o) {
  const auto law = load_law(o.law, o);
  const auto& spec = law.spec_ptr();
  if (!spec->is_nested()) throw PreconditionError("transport by specialisation needs a nested ring");
  if (o.points.empty()) throw UsageError("--point is required");
  CoeffTuple point;
  for (const auto& a : o.points) point.push_back(Coefficient::parse(spec->base_ptr(), a));
  const auto moved = transport_fgl(law, specialisation_map(spec, point));
  const auto names = law_variable_names(moved.d());
  return {io::to_json(moved), io::tuple_text(moved.F(), names), kOk};
}

// ---------------------------------------------------------------------------
// group

Output group_binary(const Options& o, const std::string& verb) {
  const auto G = load_group(o);
  if (verb == "mul") {
    const auto xs = need_elements(o, G, 2);
    const auto r = G.mul(xs[0], xs[1]);
    return {{{"result", io::to_json(r)}}, element_text(r) + "\n", kOk};
  }
  if (verb == "inv") {
    const auto r = G.inv(need_elements(o, G, 1)[0]);
    return {{{"result", io::to_json(r)}}, element_text(r) + "\n", kOk};
  }
  if (verb == "pow") {
    const auto r = G.pow(need_elements(o, G, 1)[0], o.exponent);
    return {{{"exponent", o.exponent}, {"result", io::to_json(r)}}, element_text(r) + "\n", kOk};
  }
  // conj: one element g gives C_g; "x;g" adds the value g^-1 x g.
  auto xs = parse_elements(o.elements, G);
  if (xs.empty() || xs.size() > 2) throw UsageError("conj takes --elements g or x;g");
  const auto& g = xs.back();
  const auto C = G.conj_series(g);
  Output out{{{"series", io::to_json(C)}}, io::tuple_text(C), kOk};
  if (xs.size() == 2) {
    const auto v = G.mul(G.inv(g), G.mul(xs[0], g));
    out.value["value"] = io::to_json(v);
    out.text += "value " + element_text(v) + "\n";
  }
  return out;
}

Output group_quotient(const Options& o) {
  const auto G = load_group(o);
  if (o.quotient_level < 1) throw UsageError("--level M is required");
  check_quotient_level(G, o.quotient_level);
  const auto reps = quotient_representatives(G, o.quotient_level, enumeration_bound());
  Output out{{{"N", G.N()}, {"M", o.quotient_level}, {"size", reps.size()}}, "", kOk};
  out.text = "size " + std::to_string(reps.size()) + "\n";
  if (o.list) {
    json list = json::array();
    for (const auto& r : reps) {
      list.push_back(io::to_json(r));
      out.text += element_text(r) + "\n";
    }
    out.value["elements"] = list;
  }
  return out;
}

// ---------------------------------------------------------------------------
// word

Output word_eval(const Options& o) {
  const auto w = need_word(o);
  const auto G = load_group(o);
  const auto args = parse_elements(o.args, G);
  if (args.size() < static_cast<std::size_t>(w.k()))
    throw UsageError("word needs " + std::to_string(w.k()) + " arguments in --args");
  const auto v = eval_word(w, G, args);
  return {{{"word", w.to_string()}, {"value", io::to_json(v)}}, element_text(v) + "\n", kOk};
}

Output word_series_cmd(const Options& o) {
  const auto w = need_word(o);
  const auto law = load_law(o.law, o);
  const auto ws = word_series(w, law);
  const auto k = static_cast<std::size_t>(w.k());
  return {{{"word", w.to_string()}, {"d", ws.d}, {"k", k}, {"W", io::to_json(ws.W)}},
          io::tuple_text(ws.W, block_variable_names(ws.d, k)), kOk};
}

Output word_image_cmd(const Options& o) {
  const auto w = need_word(o);
  const auto G = load_group(o);
  if (o.quotient_level < 1) throw UsageError("--quotient-level M is required");
  const auto Q = enumerate_quotient(G, o.quotient_level);
  const auto image = word_image(w, Q), verbal = verbal_subgroup(w, Q), marginal = marginal_subgroup(w, Q);
  Output out{{{"word", w.to_string()},
              {"M", o.quotient_level},
              {"group_size", Q.size()},
              {"image_size", image.size()},
              {"verbal_size", verbal.size()},
              {"marginal_size", marginal.size()}},
             "",
             kOk};
  out.text = "group " + std::to_string(Q.size()) + "\nimage " + std::to_string(image.size()) + "\nverbal " +
             std::to_string(verbal.size()) + "\nmarginal " + std::to_string(marginal.size()) + "\n";
  if (o.list) {
    auto listing = [&](const char* key, const std::vector<std::size_t>& idx) {
      json a = json::array();
      out.text += std::string(key) + ":";
      for (auto i : idx) {
        a.push_back(io::to_json(Q.element(i)));
        out.text += " " + element_text(Q.element(i));
      }
      out.text += "\n";
      out.value[key] = a;
    };
    listing("image", image);
    listing("verbal", verbal);
    listing("marginal", marginal);
  }
  return out;
}

// ---------------------------------------------------------------------------
// atlas and probe

Output atlas_validate(const Options& o) {
  const auto data = load_extension(o);
  ValidationMode mode = default_validation_mode(data);
  if (o.validate_level > 0) mode = ValidationMode::exhaustive(o.validate_level);
  if (o.samples > 0) mode = ValidationMode::sampled(o.samples, o.seed);
  if (mode.kind == ValidationMode::Kind::sampled) mode.seed = o.seed;
  const auto report = validate_transversal(data, mode);
  Output out{io::to_json(report), "", report.pass() ? kOk : kFailure};
  out.text = (report.pass() ? "PASS" : "FAIL") + std::string(" mode ") + report.mode + " checked " +
             std::to_string(report.checked) + "\n";
  for (const auto& f : report.failures) {
    out.text += "  " + f.axiom + ":";
    for (const auto& e : f.elements) out.text += " " + e;
    out.text += "\n";
  }
  return out;
}

std::vector<std::size_t> coset_indices(const std::vector<std::string>& names, const TransversalData& data) {
  std::vector<std::size_t> out;
  for (const auto& n : names) out.push_back(data.T.index(n));
  return out;
}

Output atlas_wordmap(const Options& o) {
  const auto w = need_word(o);
  const auto data = load_extension(o);
  if (o.cosets.empty()) throw UsageError("--cosets is required");
  const auto cosets = coset_indices(o.cosets, data);
  const auto cw = coset_word_series(w, data, cosets);
  const auto k = static_cast<std::size_t>(w.k());
  const auto c = is_constant(cw.series.W);
  Output out{{{"word", w.to_string()},
              {"cosets", io::coset_names(cosets, data)},
              {"target", data.T.names[cw.target]},
              {"constant", c.constant},
              {"W", io::to_json(cw.series.W)}},
             "",
             kOk};
  out.text = "target " + data.T.names[cw.target] + "\nconstant " + bool_text(c.constant) + "\n" +
             io::tuple_text(cw.series.W, block_variable_names(data.L.d(), k));
  return out;
}

Output atlas_marginal(const Options& o) {
  const auto w = need_word(o);
  const auto data = load_extension(o);
  const auto r = marginality_check(w, data);
  Output out{io::to_json(r, data), "", kOk};
  out.text = "all constant " + bool_text(r.all_constant) + "\n";
  if (r.all_constant) out.text += "all zero " + bool_text(r.all_zero()) + "\n";
  if (r.witness) {
    std::string cos;
    for (auto t : r.witness->cosets) cos += (cos.empty() ? "" : ",") + data.T.names[t];
    out.text += "witness cosets " + cos + " component " + std::to_string(r.witness->witness.component + 1) +
                " coefficient " + r.witness->witness.coefficient.to_string() + "\n";
  }
  return out;
}

Output probe_cmd(const Options& o) {
  const auto w = need_word(o);
  const auto data = load_extension(o);
  const auto& spec = data.L.spec_ptr();
  if (!spec->is_nested()) throw PreconditionError("the probe needs an extension over a nested ring");
  const auto points = grid(spec->base_ptr(), spec->m(), o.grid_depth);
  const auto r = concision_probe(w, data, o.lmax, points);
  Output out{io::to_json(r, data), "", kOk};
  for (const auto& lv : r.levels) {
    std::size_t members = std::count(lv.in_m_l.begin(), lv.in_m_l.end(), true);
    out.text += "l=" + std::to_string(lv.l) + " " + (lv.constant ? "constant" : "non-constant") +
                (lv.symbolic_zero ? " zero" : "") + " m_l " + std::to_string(members) + "/" +
                std::to_string(lv.in_m_l.size()) + "\n";
  }
  out.text += "min_l " + (r.min_l ? std::to_string(*r.min_l) : std::string("none <= ") + std::to_string(r.lmax)) + "\n";
  return out;
}

// ---------------------------------------------------------------------------

std::string diagnostic(const std::string& kind, const std::string& message) {
  return json{{"error", kind}, {"message", message}}.dump() + "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  std::function<Output()> action;

  CLI::App app{"Formal group laws, standard groups and word maps over truncated pro-p rings", "fglaw"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "text"}));

  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, std::function<Output()> fn) {
    auto* sub = parent->add_subcommand(name, help);
    sub->callback([&action, fn] { action = fn; });
    return sub;
  };
  auto law_flags = [&](CLI::App* sub, bool positional) {
    sub->add_option(positional ? "law,--law" : "--law", o.law, "Law file or built-in name");
    sub->add_option("--ring", o.ring, "Ring for built-in laws (padic:p:K, eqchar:p:K, nested:m:Dt:<base>)");
    sub->add_option("--D", o.D, "Degree cutoff for built-in laws");
    sub->add_option("--d", o.d, "Dimension for the additive law");
  };
  auto group_flags = [&](CLI::App* sub) {
    sub->add_option("--group", o.group, "Group spec file");
    law_flags(sub, false);
    sub->add_option("--N", o.level, "Level N when the group comes from --law");
  };

  auto* fgl = app.add_subcommand("fgl", "Formal group laws");
  fgl->require_subcommand(1);
  law_flags(leaf(fgl, "check", "Verify the axioms", [&] { return fgl_check(o); }), true);
  law_flags(leaf(fgl, "inverse", "Formal inverse", [&] { return fgl_inverse(o); }), true);
  auto* tr = leaf(fgl, "transport", "Specialise the coefficients at a point", [&] { return fgl_transport(o); });
  law_flags(tr, true);
  tr->add_option("--point", o.points, "Point in the base ring, one value per t-variable")->delimiter(',');

  auto* group = app.add_subcommand("group", "Standard groups");
  group->require_subcommand(1);
  for (const char* verb : {"mul", "inv", "pow", "conj"}) {
    const std::string v = verb;
    auto* sub = leaf(group, v, "Group " + v, [&o, v] { return group_binary(o, v); });
    group_flags(sub);
    sub->add_option("--elements", o.elements, "Elements: coordinates split by ',', elements by ';'")->required();
    if (v == "pow") sub->add_option("--exponent,-e", o.exponent, "Exponent")->required();
  }
  auto* quot = leaf(group, "quotient", "Finite quotient (m^N/m^M)^d", [&] { return group_quotient(o); });
  group_flags(quot);
  quot->add_option("--level,-M", o.quotient_level, "Quotient level M")->required();
  quot->add_flag("--list", o.list, "List the elements");

  auto* word = app.add_subcommand("word", "Word maps");
  word->require_subcommand(1);
  auto* we = leaf(word, "eval", "Evaluate a word at elements", [&] { return word_eval(o); });
  group_flags(we);
  we->add_option("--word,-w", o.word, "Word")->required();
  we->add_option("--args", o.args, "Arguments: coordinates split by ',', elements by ';'")->required();
  auto* ws = leaf(word, "series", "Symbolic word series", [&] { return word_series_cmd(o); });
  law_flags(ws, false);
  ws->add_option("--word,-w", o.word, "Word")->required();
  auto* wi = leaf(word, "image", "Word image, verbal and marginal subgroups of a finite quotient",
                  [&] { return word_image_cmd(o); });
  group_flags(wi);
  wi->add_option("--word,-w", o.word, "Word")->required();
  wi->add_option("--quotient-level,-M", o.quotient_level, "Quotient level M")->required();
  wi->add_flag("--list", o.list, "List the subgroups");

  auto* atlas = app.add_subcommand("atlas", "Transversal extensions");
  atlas->require_subcommand(1);
  auto* av = leaf(atlas, "validate", "Check the group axioms of H", [&] { return atlas_validate(o); });
  av->add_option("extension,--extension", o.extension, "Extension file")->required();
  av->add_option("--quotient-level,-M", o.validate_level, "Exhaustive check at this quotient level");
  av->add_option("--samples", o.samples, "Random triples instead of exhaustive checking");
  av->add_option("--seed", o.seed, "Seed for sampled checking");
  auto* aw = leaf(atlas, "wordmap", "Coset word series", [&] { return atlas_wordmap(o); });
  aw->add_option("extension,--extension", o.extension, "Extension file")->required();
  aw->add_option("--word,-w", o.word, "Word")->required();
  aw->add_option("--cosets", o.cosets, "Coset names, comma separated")->delimiter(',')->required();
  auto* am = leaf(atlas, "marginal", "Marginality check", [&] { return atlas_marginal(o); });
  am->add_option("extension,--extension", o.extension, "Extension file")->required();
  am->add_option("--word,-w", o.word, "Word")->required();

  auto* probe = leaf(&app, "probe", "Conciseness probe", [&] { return probe_cmd(o); });
  probe->add_option("extension,--extension", o.extension, "Extension file")->required();
  probe->add_option("--word,-w", o.word, "Word")->required();
  probe->add_option("--lmax", o.lmax, "Largest exponent l");
  probe->add_option("--grid-depth", o.grid_depth, "Grid values per axis");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << diagnostic("usage", e.what());
    return kUsage;
  }

  try {
    const Output result = action();
    if (o.format == "text")
      out << result.text;
    else
      out << result.value.dump(2) << "\n";
    return result.code;
  } catch (const UsageError& e) {
    err << diagnostic("usage", e.what());
    return kUsage;
  } catch (const ParseError& e) {
    err << diagnostic("parse", e.what());
    return kUsage;
  } catch (const json::exception& e) {
    err << diagnostic("parse", e.what());
    return kUsage;
  } catch (const BoundError& e) {
    err << diagnostic("bound", e.what());
    return kFailure;
  } catch (const IncompatibleError& e) {
    err << diagnostic("incompatible", e.what());
    return kFailure;
  } catch (const PreconditionError& e) {
    err << diagnostic("precondition", e.what());
    return kFailure;
  } catch (const Error& e) {
    err << diagnostic("error", e.what());
    return kFailure;
  }
}

}  // namespace fglaw::cli
