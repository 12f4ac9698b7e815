// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
//
// Stand-alone aggregation server: loads public key material, combines UPDATE
// bodies from disk and writes the encrypted global body. Built against the
// server library only, so no decryption routine exists in this binary.
#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "qfl/errors.hpp"
#include "qfl/federation/server.hpp"
#include "qfl/fhe/public_files.hpp"
#include "qfl/fhe/serialization.hpp"

#ifdef QFL_FHE_SECRET_API
#error "the blind aggregator must not see secret-key headers"
#endif

int main(int argc, char** argv) {
  CLI::App app{"Aggregate encrypted client updates with public key material only"};
  std::string key_dir, out;
  int round = 1;
  std::vector<std::string> inputs;
  app.add_option("--keys", key_dir, "Directory with params.json, public.key, galois.key")->required();
  app.add_option("--round", round, "Round index the updates belong to");
  app.add_option("--out", out, "Output file for the aggregated global body")->required();
  app.add_option("updates", inputs, "UPDATE bodies, one file per client")->required();
  CLI11_PARSE(app, argc, argv);

  using namespace qfl;
  try {
    const auto pub = fhe::load_public_material(key_dir);
    std::vector<federation::ClientUpdate> updates;
    for (const auto& path : inputs) {
      const auto bytes = fhe::read_file(path);
      ByteReader in(bytes);
      updates.push_back(federation::read_update(in));
      updates.back().round_index = round;
    }
    const auto global = federation::aggregate(updates, pub, round);
    Bytes body;
    federation::write_global(global, body);
    fhe::write_file(out, body);
    std::cout << "aggregated " << updates.size() << " updates, " << global.ciphertexts.size()
              << " chunk(s), " << global.parameter_count << " parameters -> " << out << "\n";
    return 0;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
