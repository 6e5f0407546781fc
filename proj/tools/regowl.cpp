// regowl: validate / compile / check.
// Exit codes: 0 ok, 1 schema errors or violations, 2 I/O, parse or usage errors.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "regowl/regowl.hpp"

namespace fs = std::filesystem;

namespace {

struct VocabPaths {
  std::string card_map, constr_map, terms;
};

struct Loaded {
  regowl::vocab::CardMap card = regowl::vocab::CardMap::defaults();
  regowl::vocab::ConstrMap constr = regowl::vocab::ConstrMap::defaults();
  regowl::vocab::TermVocabulary terms = regowl::vocab::TermVocabulary::defaults();
};

Loaded load_vocab(const VocabPaths& p) {
  Loaded v;
  if (!p.card_map.empty()) v.card = regowl::vocab::CardMap::load(p.card_map);
  if (!p.constr_map.empty()) v.constr = regowl::vocab::ConstrMap::load(p.constr_map);
  if (!p.terms.empty()) v.terms = regowl::vocab::TermVocabulary::load(p.terms);
  return v;
}

int fail(const std::exception& e) {
  std::cerr << "regowl: " << e.what() << "\n";
  return 2;
}

// Writes next to the target and renames, so a failed run leaves no file.
void write_atomically(const fs::path& out, const std::string& content) {
  fs::path tmp = out;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw regowl::Error("IoError", "cannot write " + tmp.string());
    f << content;
    if (!f.flush()) throw regowl::Error("IoError", "cannot write " + tmp.string());
  }
  fs::rename(tmp, out);
}

int cmd_validate(const std::string& path, const VocabPaths& vp, bool json) {
  std::vector<regowl::Diagnostic> ds;
  try {
    Loaded v = load_vocab(vp);
    auto doc = regowl::pre::apply_linguistic_arrows(regowl::tsv::parse_tsv(regowl::vocab::read_file(path)));
    auto tables = regowl::pre::extract_layers(doc, v.terms);
    ds = regowl::schema::validate(tables, {v.card, v.constr});
  } catch (const std::exception& e) {
    return fail(e);
  }
  if (json) std::cout << regowl::to_json(ds).dump(2) << "\n";
  else std::cout << regowl::format_text(ds);
  return regowl::has_errors(ds) ? 1 : 0;
}

int compile_one(const fs::path& in, const fs::path& out, const regowl::codegen::Config& cfg, bool json) {
  try {
    auto doc = regowl::tsv::parse_tsv(regowl::vocab::read_file(in.string()));
    auto result = regowl::codegen::compile(doc, cfg);
    if (!result.warnings.empty() && !json) std::cerr << regowl::format_text(result.warnings);
    write_atomically(out, regowl::manchester::to_manchester(result.onto));
    if (json)
      std::cout << nlohmann::json({{"input", in.string()}, {"output", out.string()},
                                   {"warnings", regowl::to_json(result.warnings)}})
                       .dump()
                << "\n";
    return 0;
  } catch (const regowl::codegen::ValidationFailed& e) {
    if (json) std::cout << regowl::to_json(e.diagnostics()).dump(2) << "\n";
    else std::cout << regowl::format_text(e.diagnostics());
    return 1;
  } catch (const std::exception& e) {
    return fail(e);
  }
}

int cmd_compile(const std::string& input, const std::string& output, const regowl::codegen::Config& cfg, bool json) {
  std::error_code ec;
  if (!fs::is_directory(input, ec)) {
    fs::path out = output.empty() ? fs::path(input).replace_extension(".omn") : fs::path(output);
    return compile_one(input, out, cfg, json);
  }
  if (output.empty()) {
    std::cerr << "regowl: compiling a directory needs --output DIR\n";
    return 2;
  }
  fs::create_directories(output, ec);
  std::vector<fs::path> inputs;
  for (const auto& entry : fs::directory_iterator(input))
    if (entry.is_regular_file() && entry.path().extension() == ".tsv") inputs.push_back(entry.path());
  std::sort(inputs.begin(), inputs.end());
  int worst = 0;
  for (const auto& in : inputs) {
    fs::path out = fs::path(output) / in.filename().replace_extension(".omn");
    worst = std::max(worst, compile_one(in, out, cfg, json));
  }
  return worst;
}

int cmd_check(const std::string& onto_path, const std::string& abox_path, bool close, bool strict, bool json) {
  try {
    auto onto = regowl::manchester::parse_manchester_subset(regowl::vocab::read_file(onto_path));
    auto data = regowl::manchester::parse_manchester_subset(regowl::vocab::read_file(abox_path), &onto);
    auto abox = regowl::check::abox_from_ontology(data);
    if (close) abox = regowl::check::close_all(std::move(abox), onto);
    regowl::check::Options opt;
    opt.strict_literals = strict;
    auto report = regowl::check::check_compliance(onto, abox, opt);
    if (json) std::cout << regowl::check::report_to_json(report).dump(2) << "\n";
    else std::cout << regowl::check::format_report(report, onto, abox);
    return report.consistent ? 0 : 1;
  } catch (const std::exception& e) {
    return fail(e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regowl: annotated regulations to OWL, and closed-world compliance checks"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "machine-readable output");

  VocabPaths vp;
  auto add_vocab = [&](CLI::App* sub) {
    sub->add_option("--card-map", vp.card_map, "cardinality phrase map (TSV)")->check(CLI::ExistingFile);
    sub->add_option("--constr-map", vp.constr_map, "comparison phrase map (TSV)")->check(CLI::ExistingFile);
    sub->add_option("--terms", vp.terms, "term vocabulary (TSV)")->check(CLI::ExistingFile);
  };

  std::string tsv_path;
  auto* validate = app.add_subcommand("validate", "check a TSV export against the annotation schema");
  validate->add_option("tsv", tsv_path, "WebAnno TSV 3.3 file")->required();
  add_vocab(validate);

  std::string input, output, base_iri = regowl::codegen::Config{}.base_iri;
  std::string subject_default = "some", requirement_default = "only";
  auto* compile = app.add_subcommand("compile", "compile a TSV export (or a directory of them) to Manchester syntax");
  compile->add_option("input", input, "TSV file or directory")->required();
  compile->add_option("-o,--output", output, "output .omn file, or directory in batch mode");
  compile->add_option("--base-iri", base_iri, "IRI of the generated ontology");
  compile->add_option("--subject-default", subject_default, "quantifier for unmarked subject predicates")
      ->check(CLI::IsMember({"some", "only"}));
  compile->add_option("--requirement-default", requirement_default, "quantifier for unmarked requirement predicates")
      ->check(CLI::IsMember({"some", "only"}));
  add_vocab(compile);

  std::string onto_path, abox_path;
  bool close = false, strict = false;
  auto* check = app.add_subcommand("check", "classify individuals and report violated regulations");
  check->add_option("ontology", onto_path, "compiled .omn ontology")->required();
  check->add_option("abox", abox_path, ".omn file with Individual frames")->required();
  check->add_flag("--close", close, "add closure types to every individual first");
  check->add_flag("--strict-literals", strict, "compare string literals exactly");

  for (auto* sub : {validate, compile, check}) sub->add_flag("--json", json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*validate) return cmd_validate(tsv_path, vp, json);
  if (*compile) {
    regowl::codegen::Config cfg;
    try {
      Loaded v = load_vocab(vp);
      cfg.card = std::move(v.card);
      cfg.constr = std::move(v.constr);
      cfg.terms = std::move(v.terms);
    } catch (const std::exception& e) {
      return fail(e);
    }
    cfg.base_iri = base_iri;
    cfg.subject_default = *regowl::codegen::quantifier_from_string(subject_default);
    cfg.requirement_default = *regowl::codegen::quantifier_from_string(requirement_default);
    return cmd_compile(input, output, cfg, json);
  }
  return cmd_check(onto_path, abox_path, close, strict, json);
}
