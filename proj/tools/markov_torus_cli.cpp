// markov-torus: command-line front end.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "markov_torus/markov_torus.hpp"

namespace mt = markov_torus;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitNotHyperbolic = 2;

struct Options {
  std::string matrix = "1 1 1 0";
  std::size_t depth = 0;
  bool json = false;
  std::string svg;
  std::string point;
  std::string word;
  std::size_t max_words = 4000;
  std::int64_t base = 2;
  std::string value = "1/3";
  bool inject_broken = false;
};

std::size_t depth_cap() {
  if (const char* env = std::getenv("MARKOV_TORUS_MAX_DEPTH")) {
    try {
      return static_cast<std::size_t>(std::stoul(env));
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("MARKOV_TORUS_MAX_DEPTH is not a number: ") + env);
    }
  }
  return 8;
}

void print_json(const mt::json& j) { std::cout << j.dump(2) << "\n"; }

std::string sign_case_forecast(const mt::EigenData& e) {
  const bool lp = e.lambda.sign() > 0;
  const bool mp = e.mu.sign() > 0;
  if (lp) return mp ? "I" : "II";
  return mp ? "III" : "IV";
}

std::string cf_text(const mt::ContinuedFraction& cf) {
  std::string s = "[";
  for (std::size_t i = 0; i < cf.preperiod.size(); ++i) s += (i ? ", " : "") + cf.preperiod[i].get_str();
  s += cf.preperiod.empty() ? "(" : "; (";
  for (std::size_t i = 0; i < cf.period.size(); ++i) s += (i ? ", " : "") + cf.period[i].get_str();
  return s + ")*]";
}

mt::json cf_json(const mt::ContinuedFraction& cf) {
  mt::json pre = mt::json::array();
  mt::json per = mt::json::array();
  for (const auto& a : cf.preperiod) pre.push_back(a.get_str());
  for (const auto& b : cf.period) per.push_back(b.get_str());
  return {{"preperiod", pre}, {"period", per}};
}

int cmd_analyze(const Options& o) {
  const mt::Mat2Z m = mt::parse_matrix(o.matrix);
  mt::EigenData e;
  try {
    e = mt::hyperbolic_check(m);
  } catch (const mt::not_hyperbolic& ex) {
    if (o.json)
      print_json({{"schema", mt::kSchemaVersion}, {"matrix", mt::to_json(m)}, {"hyperbolic", false}, {"reason", ex.what()}});
    else
      std::cout << "not hyperbolic: " << ex.what() << "\n";
    return kExitNotHyperbolic;
  }
  const mt::ContinuedFraction cf = mt::cf_expand(e.slope_lambda);
  if (o.json) {
    print_json({{"schema", mt::kSchemaVersion},
                {"matrix", mt::to_json(m)},
                {"hyperbolic", true},
                {"det", m.det().get_si()},
                {"trace", m.trace().get_str()},
                {"eigen", mt::eigen_json(e)},
                {"slope_lambda_cf", cf_json(cf)},
                {"case", sign_case_forecast(e)}});
    return kExitOk;
  }
  std::cout << "matrix        " << m.str() << "\n"
            << "det, trace    " << m.det().get_str() << ", " << m.trace().get_str() << "\n"
            << "lambda        " << e.lambda.str() << "  ~ " << e.lambda.decimal() << "\n"
            << "mu            " << e.mu.str() << "  ~ " << e.mu.decimal() << "\n"
            << "slope lambda  " << e.slope_lambda.str() << "  ~ " << e.slope_lambda.decimal() << "\n"
            << "slope mu      " << e.slope_mu.str() << "  ~ " << e.slope_mu.decimal() << "\n"
            << "cf(slope)     " << cf_text(cf) << "\n"
            << "expansive c   " << e.expansive_constant.decimal() << "\n"
            << "case          " << sign_case_forecast(e) << "\n";
  return kExitOk;
}

void write_svg(const mt::MarkovConstruction& mc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << mt::render_svg(mc);
}

int cmd_construct(const Options& o) {
  const auto mc = mt::build_markov_construction(mt::parse_matrix(o.matrix));
  if (!o.svg.empty()) write_svg(mc, o.svg);
  if (o.json) {
    print_json(mt::construction_json(mc));
    return kExitOk;
  }
  std::cout << "matrix     " << mc.A.str() << "\n"
            << "C, P, eps  " << mc.conj.C.str() << ", " << mc.conj.P.str() << ", " << mc.conj.epsilon
            << (mc.conj.swapped ? "  (coordinates swapped)" : "") << "\n"
            << "case       " << mt::to_string(mc.sign_case) << "\n"
            << "rho        " << mc.rho.str() << "\n"
            << "cells      " << mc.nstar() << "\n"
            << "graph      " << mc.graph_2node.entries()[0] << " " << mc.graph_2node.entries()[1] << " / "
            << mc.graph_2node.entries()[2] << " " << mc.graph_2node.entries()[3] << "\n";
  for (std::size_t k = 0; k < mc.refined.size(); ++k) {
    const auto& r = mc.refined.element(k);
    std::cout << "  R*" << mc.refined.labels()[k] << "  u (" << r.u_min.decimal(6) << ", " << r.u_max.decimal(6)
              << ")  w (" << r.w_min.decimal(6) << ", " << r.w_max.decimal(6) << ")\n";
  }
  return kExitOk;
}

int cmd_verify(const Options& o) {
  const std::size_t cap = depth_cap();
  const std::size_t depth = o.depth == 0 ? 4 : o.depth;
  if (depth < 3) throw std::invalid_argument("verify needs --depth >= 3");
  if (depth > cap)
    throw std::invalid_argument("--depth " + std::to_string(depth) + " exceeds the cap " + std::to_string(cap) +
                                " (set MARKOV_TORUS_MAX_DEPTH)");
  const auto mc = mt::build_markov_construction(mt::parse_matrix(o.matrix));
  const auto rep = mt::verify_construction(mc, depth, o.inject_broken, o.max_words);
  if (o.json) {
    print_json({{"schema", mt::kSchemaVersion}, {"matrix", mt::to_json(mc.A)}, {"depth", depth},
                {"ok", rep.ok()}, {"verifier_results", mt::to_json(rep)}});
  } else {
    for (const auto& c : rep.checks)
      std::cout << (c.ok ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : "  " + c.detail) << "\n";
  }
  return rep.ok() ? kExitOk : kExitFailed;
}

int cmd_encode(const Options& o) {
  if (o.point.empty()) throw std::invalid_argument("encode needs --point");
  const std::size_t depth = o.depth == 0 ? 5 : o.depth;
  const mt::CodingContext ctx(mt::build_markov_construction(mt::parse_matrix(o.matrix)));
  const mt::PlanePoint p = mt::parse_point(o.point);
  const auto res = mt::encode(ctx, p, depth);
  if (const auto* w = std::get_if<mt::BiWord>(&res)) {
    if (o.json)
      print_json({{"schema", mt::kSchemaVersion}, {"point", mt::to_json(p)}, {"depth", depth},
                  {"word", mt::format_word(*w)}});
    else
      std::cout << mt::format_word(*w) << "\n";
    return kExitOk;
  }
  const auto& amb = std::get<mt::BoundaryAmbiguity>(res);
  std::vector<std::size_t> choices = amb.choices;
  if (o.json) {
    print_json({{"schema", mt::kSchemaVersion}, {"point", mt::to_json(p)}, {"depth", depth},
                {"ambiguity", {{"index", amb.index}, {"choices", choices}}}});
  } else {
    std::cout << "boundary at index " << amb.index << ", cells";
    for (auto c : choices) std::cout << " " << c;
    std::cout << "\n";
  }
  return kExitOk;
}

int cmd_decode(const Options& o) {
  if (o.word.empty()) throw std::invalid_argument("decode needs --word");
  const mt::CodingContext ctx(mt::build_markov_construction(mt::parse_matrix(o.matrix)));
  const mt::BiWord w = mt::parse_word(o.word);
  const auto r = mt::decode(ctx, w);
  if (o.json) {
    print_json({{"schema", mt::kSchemaVersion},
                {"word", mt::format_word(w)},
                {"box", mt::to_json(ctx.partition().frame(), r.box)},
                {"center", mt::to_json(r.center_original)},
                {"center_normalized", mt::to_json(r.center)},
                {"diameter_bound_squared", mt::to_json(r.diameter_bound_squared)}});
    return kExitOk;
  }
  std::cout << "center    (" << r.center_original.x.decimal() << ", " << r.center_original.y.decimal() << ")\n"
            << "u         (" << r.box.u_min.decimal() << ", " << r.box.u_max.decimal() << ")\n"
            << "w         (" << r.box.w_min.decimal() << ", " << r.box.w_max.decimal() << ")\n"
            << "diam <=   " << r.diameter_bound << "\n";
  return kExitOk;
}

int cmd_periodic(const Options& o) {
  const mt::Mat2Z m = mt::parse_matrix(o.matrix);
  mt::hyperbolic_check(m);
  const std::size_t depth = o.depth == 0 ? 6 : o.depth;
  mt::json rows = mt::json::array();
  for (std::size_t n = 1; n <= depth; ++n) {
    const std::string c = mt::count_periodic_points(m, n).get_str();
    rows.push_back({{"n", n}, {"fixed_points", c}});
    if (!o.json) std::cout << "n=" << n << "  " << c << "\n";
  }
  if (o.json) print_json({{"schema", mt::kSchemaVersion}, {"matrix", mt::to_json(m)}, {"counts", rows}});
  return kExitOk;
}

int cmd_multmap(const Options& o) {
  const mt::MultContext ctx(o.base);
  const mt::Rational x = mt::Rational::parse(o.value);
  const std::size_t depth = o.depth == 0 ? 12 : o.depth;
  const auto res = mt::mult_encode(ctx, x, depth);
  auto digits_text = [](const std::vector<std::int64_t>& d) {
    std::string s;
    for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
    return s;
  };
  if (const auto* d = std::get_if<std::vector<std::int64_t>>(&res)) {
    const auto dec = mt::mult_decode(ctx, *d);
    if (o.json) {
      print_json({{"schema", mt::kSchemaVersion}, {"base", o.base}, {"value", mt::to_json(x)},
                  {"digits", *d}, {"decoded", mt::to_json(dec.value)}, {"width", mt::to_json(dec.width)}});
    } else {
      std::cout << "digits   " << digits_text(*d) << "\n"
                << "decoded  " << dec.value.str() << " + [0, " << dec.width.str() << "]\n";
    }
    return kExitOk;
  }
  const auto& amb = std::get<mt::MultAmbiguity>(res);
  if (o.json) {
    print_json({{"schema", mt::kSchemaVersion}, {"base", o.base}, {"value", mt::to_json(x)},
                {"ambiguity", {{"position", amb.position}, {"upper", amb.upper}, {"lower", amb.lower}}}});
  } else {
    std::cout << "two expansions from digit " << amb.position << "\n"
              << "  " << digits_text(amb.upper) << "\n"
              << "  " << digits_text(amb.lower) << "\n";
  }
  return kExitOk;
}

int cmd_render(const Options& o) {
  const auto mc = mt::build_markov_construction(mt::parse_matrix(o.matrix));
  if (o.svg.empty())
    std::cout << mt::render_svg(mc);
  else
    write_svg(mc, o.svg);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Markov partitions for hyperbolic automorphisms of the 2-torus"};
  app.require_subcommand(1);
  Options o;

  auto add_matrix = [&](CLI::App* c) { c->add_option("--matrix", o.matrix, "\"a b c d\" or [[a,b],[c,d]]"); };
  auto add_json = [&](CLI::App* c) { c->add_flag("--json", o.json, "JSON output"); };
  auto add_depth = [&](CLI::App* c) { c->add_option("--depth", o.depth, "depth n"); };

  auto* analyze = app.add_subcommand("analyze", "eigen-data, slopes, continued fraction, hyperbolicity");
  add_matrix(analyze);
  add_json(analyze);
  auto* construct = app.add_subcommand("construct", "build the Markov partition");
  add_matrix(construct);
  add_json(construct);
  construct->add_option("--svg", o.svg, "write an SVG picture");
  auto* verify = app.add_subcommand("verify", "run all verifiers");
  add_matrix(verify);
  add_json(verify);
  add_depth(verify);
  verify->add_option("--max-words", o.max_words, "cylinders enumerated per decay level");
  verify->add_flag("--inject-broken", o.inject_broken, "shrink R_I to exercise the negative control");
  auto* encode = app.add_subcommand("encode", "code a point");
  add_matrix(encode);
  add_json(encode);
  add_depth(encode);
  encode->add_option("--point", o.point, "\"p/q r/s\"");
  auto* decode = app.add_subcommand("decode", "decode a word");
  add_matrix(decode);
  add_json(decode);
  decode->add_option("--word", o.word, "\"i,j,k@offset\"");
  auto* periodic = app.add_subcommand("periodic", "count periodic points");
  add_matrix(periodic);
  add_json(periodic);
  add_depth(periodic);
  auto* multmap = app.add_subcommand("multmap", "multiplication by n modulo 1");
  add_json(multmap);
  add_depth(multmap);
  multmap->add_option("--base", o.base, "n >= 2");
  multmap->add_option("--value", o.value, "x in [0, 1) as p/q or decimal");
  auto* render = app.add_subcommand("render", "SVG of the partition");
  add_matrix(render);
  render->add_option("--svg", o.svg, "output path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*analyze) return cmd_analyze(o);
    if (*construct) return cmd_construct(o);
    if (*verify) return cmd_verify(o);
    if (*encode) return cmd_encode(o);
    if (*decode) return cmd_decode(o);
    if (*periodic) return cmd_periodic(o);
    if (*multmap) return cmd_multmap(o);
    if (*render) return cmd_render(o);
  } catch (const mt::not_hyperbolic& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotHyperbolic;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitFailed;
}
