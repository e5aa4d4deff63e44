// SPDX-License-Identifier: Apache-2.0
//
// detsec: encode, recover and repair files with (secure) determinant codes,
// audit eavesdropper leakage and print trade-off tables.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "detsec/commands.hpp"
#include "detsec/secure_layout.hpp"
#include "detsec/tradeoff.hpp"

using namespace detsec;

namespace {

std::vector<Scheme> parse_schemes(const std::string& text) {
  std::vector<Scheme> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_scheme(item));
  }
  return out;
}

template <class T>
std::optional<T> opt_if(const CLI::Option* o, T v) {
  return o->count() ? std::optional<T>(v) : std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact-repair determinant codes with Type-I/Type-II security"};
  app.require_subcommand(1);

  int n = 0, d = 0, m = 0, ell = 0, failed = 0, max_set = 0;
  std::uint64_t seed = 0;
  std::uint32_t q = 0;
  std::string scheme = "plain", input, out, d_list, ell_list = "0", scheme_list = "type1,type2";
  std::vector<std::string> shards;

  auto* enc = app.add_subcommand("encode", "Split a file into n shards");
  enc->add_option("input", input, "File to encode")->required();
  enc->add_option("--out", out, "Output directory")->required();
  enc->add_option("--n", n, "Number of nodes")->required();
  enc->add_option("--d", d, "Repair degree (= k)")->required();
  enc->add_option("--m", m, "Code mode, 1..d")->required();
  enc->add_option("--scheme", scheme, "plain, type1 or type2");
  enc->add_option("--ell", ell, "Eavesdropper budget");
  auto* enc_seed = enc->add_option("--seed", seed, "Key stream seed; shards are reproducible with a seed");
  auto* enc_q = enc->add_option("--q", q, "Prime field size (> n, < 2^16)");

  auto* rec = app.add_subcommand("recover", "Rebuild the original file from d shards");
  rec->add_option("shards", shards, "Shard files")->required();
  rec->add_option("--out", out, "Output file")->required();

  auto* rep = app.add_subcommand("repair", "Regenerate a lost shard from d helpers");
  rep->add_option("helpers", shards, "Helper shard files")->required();
  rep->add_option("--failed", failed, "Node id of the lost shard")->required();
  rep->add_option("--out", out, "Output shard file")->required();

  auto* aud = app.add_subcommand("audit", "Exact leakage audit over every eavesdropper set");
  aud->add_option("--n", n, "Number of nodes")->required();
  aud->add_option("--d", d, "Repair degree (= k)")->required();
  aud->add_option("--m", m, "Code mode")->required();
  aud->add_option("--scheme", scheme, "plain, type1 or type2");
  aud->add_option("--ell", ell, "Eavesdropper budget");
  auto* aud_max = aud->add_option("--max-set-size", max_set, "Largest eavesdropper set to audit (default ell)");
  auto* aud_q = aud->add_option("--q", q, "Prime field size (> n)");

  auto* tro = app.add_subcommand("tradeoff", "CSV of (alpha, beta, F_s) per mode");
  tro->add_option("--d", d_list, "d values: a..b or a,b,c")->required();
  tro->add_option("--ell", ell_list, "ell values: a..b or a,b,c");
  tro->add_option("--scheme", scheme_list, "Comma separated schemes");

  auto* par = app.add_subcommand("pareto", "Number and modes of Pareto points");
  par->add_option("--d", d, "Repair degree")->required();
  par->add_option("--ell", ell, "Eavesdropper budget")->required();
  par->add_option("--scheme", scheme, "Scheme for the hull (default type2)");

  auto* prm = app.add_subcommand("params", "Code parameters at one operating point");
  prm->add_option("--d", d, "Repair degree")->required();
  prm->add_option("--m", m, "Code mode")->required();
  prm->add_option("--ell", ell, "Eavesdropper budget");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*enc) {
      EncodeOptions o;
      o.input = input;
      o.out_dir = out;
      o.n = n;
      o.d = d;
      o.m = m;
      o.scheme = parse_scheme(scheme);
      o.ell = ell;
      o.seed = opt_if(enc_seed, seed);
      o.q = opt_if(enc_q, q);
      EncodeResult r = cmd_encode(o);
      if (r.warning) std::cerr << "warning: " << *r.warning << '\n';
      std::cout << "wrote " << r.shards.size() << " shards, " << r.stripes << " stripes of " << r.symbols_per_stripe
                << " data symbols\n";
    } else if (*rec) {
      std::vector<std::filesystem::path> paths(shards.begin(), shards.end());
      cmd_recover(paths, out);
      std::cout << "recovered " << out << '\n';
    } else if (*rep) {
      std::vector<std::filesystem::path> paths(shards.begin(), shards.end());
      RepairResult r = cmd_repair(failed, paths, out);
      std::cout << "repaired node " << failed << ": " << r.stripes << " stripes, beta=" << r.beta
                << " symbols per helper per stripe, bandwidth=" << r.bandwidth_symbols << " symbols\n";
    } else if (*aud) {
      AuditReport r = cmd_audit(n, d, m, parse_scheme(scheme), ell, opt_if(aud_max, max_set), opt_if(aud_q, q));
      print_audit(std::cout, r);
      return r.pass ? 0 : 1;
    } else if (*tro) {
      emit_tradeoff_csv(std::cout, parse_int_list(d_list), parse_int_list(ell_list), parse_schemes(scheme_list));
    } else if (*par) {
      Scheme s = par->get_option("--scheme")->count() ? parse_scheme(scheme) : Scheme::TypeII;
      std::cout << "t=" << pareto_count(d, ell) << " modes=";
      bool first = true;
      for (int mode : pareto_points_bruteforce(d, ell, s)) {
        std::cout << (first ? "" : ",") << mode;
        first = false;
      }
      std::cout << '\n';
    } else if (*prm) {
      TradeoffPoint p = point(d, 0, m, Scheme::Plain);
      std::cout << "F=" << p.fs << " alpha=" << p.alpha << " beta=" << p.beta << '\n';
      if (ell < d) {
        std::cout << "type1 Fs=" << secret_capacity(d, m, ell, Scheme::TypeI)
                  << " Q=" << key_capacity(d, m, ell, Scheme::TypeI) << '\n';
      }
      std::cout << "type2 Fs=" << secret_capacity(d, m, ell, Scheme::TypeII)
                << " Q=" << key_capacity(d, m, ell, Scheme::TypeII) << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
